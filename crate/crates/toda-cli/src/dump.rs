//! Level dumps: `{k, l, l0, sigma, lambda, H}` with every entry in the
//! deterministic expression text form (fractions as `(num)/(den)`).
//! Golden files use the same shape; their strings may be written in any
//! mathematically equal grouping since comparison parses both sides.

use serde::{Deserialize, Serialize};
use toda_core::expr::{RationalExpr, Scalar};
use toda_core::hierarchy::{DownwardLevel, HierarchyLevel};
use toda_core::matrix::Matrix;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelDump {
    pub k: i32,
    pub l: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<String>>>,
    #[serde(default, rename = "H", skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
}

fn matrix_strings(m: &Matrix<RationalExpr>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}

impl LevelDump {
    pub fn from_level(level: &HierarchyLevel) -> Self {
        let n = level.lattice_size();
        LevelDump {
            k: level.k,
            l: (1..=2 * n).map(|a| level.l.component(a).to_string()).collect(),
            l0: Some(level.l.scalar_part().to_string()),
            sigma: Some(
                (1..=2 * n)
                    .map(|a| (1..=2 * n).map(|b| level.sigma.at(a, b).to_string()).collect())
                    .collect(),
            ),
            lambda: level.lambda.as_ref().map(matrix_strings),
            hamiltonian: level.hamiltonian.as_ref().map(|h| h.to_string()),
        }
    }

    pub fn from_downward(level: &DownwardLevel) -> Self {
        let n = level.l.lattice_size();
        LevelDump {
            k: level.k,
            l: (1..=2 * n).map(|a| level.l.component(a).to_string()).collect(),
            l0: Some(level.l.scalar_part().to_string()),
            sigma: Some(
                (1..=2 * n)
                    .map(|a| (1..=2 * n).map(|b| level.sigma.at(a, b).to_string()).collect())
                    .collect(),
            ),
            lambda: None,
            hamiltonian: Some(level.hamiltonian.to_string()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("level k={}\n", self.k);
        for (i, c) in self.l.iter().enumerate() {
            out.push_str(&format!("  l_{} = {}\n", i + 1, c));
        }
        if let Some(l0) = &self.l0 {
            out.push_str(&format!("  l0 = {l0}\n"));
        }
        if let Some(sigma) = &self.sigma {
            out.push_str("  sigma:\n");
            for row in sigma {
                out.push_str(&format!("    [{}]\n", row.join(", ")));
            }
        }
        if let Some(lambda) = &self.lambda {
            out.push_str("  lambda:\n");
            for row in lambda {
                out.push_str(&format!("    [{}]\n", row.join(", ")));
            }
        }
        if let Some(h) = &self.hamiltonian {
            out.push_str(&format!("  H = {h}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use toda_core::hierarchy::base_level;
    use toda_core::lattice::LatticeConfig;

    #[test]
    fn base_level_dump_has_all_sections() {
        let cfg = LatticeConfig::new(2).unwrap();
        let dump = LevelDump::from_level(&base_level(cfg).unwrap());
        assert_eq!(dump.k, 0);
        assert_eq!(dump.l.len(), 4);
        assert!(dump.l0.is_some());
        assert_eq!(dump.sigma.as_ref().unwrap().len(), 4);
        assert!(dump.lambda.is_none());
        assert_eq!(dump.hamiltonian.as_deref(), Some("1/2*x3^2 + 1/2*x4^2 + E1"));
    }

    #[test]
    fn dump_roundtrips_through_json() {
        let cfg = LatticeConfig::new(2).unwrap();
        let dump = LevelDump::from_level(&base_level(cfg).unwrap());
        let json = serde_json::to_string(&dump).unwrap();
        let back: LevelDump = serde_json::from_str(&json).unwrap();
        assert_eq!(back.l, dump.l);
        assert_eq!(back.hamiltonian, dump.hamiltonian);
    }
}
