//! Machine-readable reports with a human text renderer behind
//! `--format text`. JSON field order is fixed by the struct layout and
//! all collections are deterministically ordered, so identical
//! invocations produce byte-identical output.

use serde::{Deserialize, Serialize};
use toda_core::symmetry::RelationCheck;

use crate::dump::LevelDump;
use crate::exprjson::ExprJson;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub relation: String,
    pub n: usize,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<ExprJson>>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn pass(relation: impl Into<String>, n: usize) -> Self {
        Check {
            relation: relation.into(),
            n,
            status: "pass".into(),
            residual: None,
        }
    }

    pub fn fail(relation: impl Into<String>, n: usize, residual: Vec<ExprJson>) -> Self {
        Check {
            relation: relation.into(),
            n,
            status: "fail".into(),
            residual: Some(residual),
        }
    }
}

impl From<RelationCheck> for Check {
    fn from(c: RelationCheck) -> Self {
        if c.passed {
            Check::pass(c.relation, c.n)
        } else {
            let residual = c.residual.iter().map(ExprJson::from_expr).collect();
            Check::fail(c.relation, c.n, residual)
        }
    }
}

/// Per-quantity drift along a trajectory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DriftEntry {
    pub quantity: String,
    pub drift: f64,
}

/// Isospectral summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumInfo {
    pub max_drift: f64,
    pub skipped_samples: usize,
    /// `(re, im)` pairs at the first valid sample.
    pub reference: Vec<(f64, f64)>,
}

/// One report shape for every subcommand; sections irrelevant to a
/// command stay `None` and vanish from the JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelDump>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub downward: Option<Vec<LevelDump>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drifts: Option<Vec<DriftEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumInfo>,
}

impl Report {
    pub fn new(command: impl Into<String>, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.passed()).count();
        let failed = checks.len() - passed;
        Report {
            command: command.into(),
            checks,
            passed,
            failed,
            levels: None,
            downward: None,
            drifts: None,
            spectrum: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        for c in &self.checks {
            if c.passed() {
                out.push_str(&format!("PASS  {} (n={})\n", c.relation, c.n));
            } else {
                out.push_str(&format!("FAIL  {} (n={})\n", c.relation, c.n));
                if let Some(residual) = &c.residual {
                    for r in residual.iter().take(4) {
                        match r.to_expr() {
                            Ok(e) => out.push_str(&format!("      residual: {e}\n")),
                            Err(_) => out.push_str("      residual: <unprintable>\n"),
                        }
                    }
                    if residual.len() > 4 {
                        out.push_str(&format!(
                            "      ... {} more residual components\n",
                            residual.len() - 4
                        ));
                    }
                }
            }
        }
        if let Some(drifts) = &self.drifts {
            for d in drifts {
                out.push_str(&format!("drift {:<12} {:.3e}\n", d.quantity, d.drift));
            }
        }
        if let Some(s) = &self.spectrum {
            out.push_str(&format!(
                "eigenvalue drift {:.3e} ({} samples skipped)\n",
                s.max_drift, s.skipped_samples
            ));
            for (re, im) in &s.reference {
                out.push_str(&format!("  reference eigenvalue {re:+.12e} {im:+.12e}i\n"));
            }
        }
        if let Some(levels) = &self.levels {
            for l in levels {
                out.push_str(&l.to_text());
            }
        }
        if let Some(levels) = &self.downward {
            for l in levels {
                out.push_str(&l.to_text());
            }
        }
        out.push_str(&format!(
            "{} checks: {} passed, {} failed\n",
            self.checks.len(),
            self.passed,
            self.failed
        ));
        out
    }
}
