//! Golden data: hand-transcribed closed forms of the two-particle
//! objects, stored as level dumps whose expression strings may use any
//! mathematically equal grouping. Comparison parses both sides and
//! demands exact canonical equality; failures keep the symbolic
//! difference.
//!
//! Defaults are embedded in the binary; the `TODA_GOLDEN_DIR`
//! environment variable points at a directory of replacement files with
//! the same names (`eta1_n2.json`, `eta5_n2.json`,
//! `symmetry_fields.json`).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toda_core::expr::{Expr, RationalExpr, Scalar};
use toda_core::hierarchy::{DownwardLevel, HierarchyLevel};
use toda_core::symmetry::VectorField;

use crate::dump::LevelDump;
use crate::exprjson::ExprJson;
use crate::report::Check;
use crate::{AppError, AppResult};

pub const GOLDEN_DIR_ENV: &str = "TODA_GOLDEN_DIR";

const ETA1_N2: &str = include_str!("../golden/eta1_n2.json");
const ETA5_N2: &str = include_str!("../golden/eta5_n2.json");
const SYMMETRY_FIELDS: &str = include_str!("../golden/symmetry_fields.json");

/// One hierarchy chain worth of golden levels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenChain {
    pub eta: usize,
    pub n: usize,
    pub levels: Vec<LevelDump>,
    #[serde(default)]
    pub downward: Vec<LevelDump>,
}

/// Printed symmetry-field components keyed like `eta1_n2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenFields {
    pub fields: BTreeMap<String, Vec<String>>,
}

fn read_override(name: &str) -> AppResult<Option<String>> {
    match std::env::var(GOLDEN_DIR_ENV) {
        Ok(dir) => {
            let path = Path::new(&dir).join(name);
            if path.exists() {
                fs::read_to_string(&path)
                    .map(Some)
                    .map_err(|source| AppError::Io {
                        path: path.display().to_string(),
                        source,
                    })
            } else {
                Ok(None)
            }
        }
        Err(_) => Ok(None),
    }
}

fn parse_chain(text: &str, name: &str) -> AppResult<GoldenChain> {
    serde_json::from_str(text).map_err(|e| AppError::input(format!("golden file {name}: {e}")))
}

/// Golden chain for `(eta, n)` when one exists.
pub fn load_chain(eta: usize, n: usize) -> AppResult<Option<GoldenChain>> {
    let name = format!("eta{eta}_n{n}.json");
    if let Some(text) = read_override(&name)? {
        return parse_chain(&text, &name).map(Some);
    }
    let embedded = match (eta, n) {
        (1, 2) => Some(ETA1_N2),
        (5, 2) => Some(ETA5_N2),
        _ => None,
    };
    embedded.map(|text| parse_chain(text, &name)).transpose()
}

pub fn load_fields() -> AppResult<GoldenFields> {
    let name = "symmetry_fields.json";
    let text = match read_override(name)? {
        Some(text) => text,
        None => SYMMETRY_FIELDS.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| AppError::input(format!("golden file {name}: {e}")))
}

/// Exact difference of two fractions as a ring element, `None` when equal.
fn rational_residual(actual: &RationalExpr, golden: &RationalExpr) -> Option<Expr> {
    let d = actual.num().mul_ref(golden.den()) - golden.num().mul_ref(actual.den());
    if d.is_zero() {
        None
    } else {
        Some(d)
    }
}

fn parse_golden_entry(n: usize, text: &str, what: &str) -> AppResult<RationalExpr> {
    RationalExpr::parse(n, text)
        .map_err(|e| AppError::input(format!("golden {what}: '{text}': {e}")))
}

fn compare_components<'a>(
    n: usize,
    label: &str,
    golden: &[String],
    actual: impl Iterator<Item = RationalExpr> + 'a,
) -> AppResult<Check> {
    let mut residual = Vec::new();
    let mut count = 0usize;
    for (g, a) in golden.iter().zip(actual) {
        count += 1;
        let g = parse_golden_entry(n, g, label)?;
        if let Some(d) = rational_residual(&a, &g) {
            residual.push(ExprJson::from_expr(&d));
        }
    }
    if count != golden.len() {
        return Err(AppError::input(format!(
            "golden {label}: expected {} components",
            golden.len()
        )));
    }
    Ok(if residual.is_empty() {
        Check::pass(label.to_string(), n)
    } else {
        Check::fail(label.to_string(), n, residual)
    })
}

fn compare_matrix(
    n: usize,
    label: &str,
    golden: &[Vec<String>],
    actual: impl Fn(usize, usize) -> RationalExpr,
) -> AppResult<Check> {
    let mut residual = Vec::new();
    for (r, row) in golden.iter().enumerate() {
        for (c, g) in row.iter().enumerate() {
            let g = parse_golden_entry(n, g, label)?;
            if let Some(d) = rational_residual(&actual(r, c), &g) {
                residual.push(ExprJson::from_expr(&d));
            }
        }
    }
    Ok(if residual.is_empty() {
        Check::pass(label.to_string(), n)
    } else {
        Check::fail(label.to_string(), n, residual)
    })
}

/// Compare one built upward level against its golden dump.
pub fn compare_level(golden: &GoldenChain, dump: &LevelDump, level: &HierarchyLevel) -> AppResult<Vec<Check>> {
    let n = golden.n;
    let k = dump.k;
    let mut checks = Vec::new();
    checks.push(compare_components(
        n,
        &format!("golden l(k={k})"),
        &dump.l,
        (1..=2 * n).map(|a| RationalExpr::from(level.l.component(a).clone())),
    )?);
    if let Some(sigma) = &dump.sigma {
        checks.push(compare_matrix(n, &format!("golden sigma(k={k})"), sigma, |r, c| {
            RationalExpr::from(level.sigma.at(r + 1, c + 1).clone())
        })?);
    }
    if let Some(lambda) = &dump.lambda {
        match &level.lambda {
            Some(actual) => checks.push(compare_matrix(
                n,
                &format!("golden lambda(k={k})"),
                lambda,
                |r, c| actual.at(r, c).clone(),
            )?),
            None => checks.push(Check::fail(
                format!("golden lambda(k={k})"),
                n,
                Vec::new(),
            )),
        }
    }
    if let Some(h) = &dump.hamiltonian {
        let golden_h = parse_golden_entry(n, h, "H")?;
        let check = match &level.hamiltonian {
            Some(actual) => {
                match rational_residual(&RationalExpr::from(actual.clone()), &golden_h) {
                    None => Check::pass(format!("golden H(k={k})"), n),
                    Some(d) => Check::fail(
                        format!("golden H(k={k})"),
                        n,
                        vec![ExprJson::from_expr(&d)],
                    ),
                }
            }
            None => Check::fail(format!("golden H(k={k})"), n, Vec::new()),
        };
        checks.push(check);
    }
    Ok(checks)
}

/// Compare the fraction-field downward level against its golden dump.
pub fn compare_downward(golden: &GoldenChain, dump: &LevelDump, level: &DownwardLevel) -> AppResult<Vec<Check>> {
    let n = golden.n;
    let mut checks = Vec::new();
    checks.push(compare_components(
        n,
        "golden l(k=-1)",
        &dump.l,
        (1..=2 * n).map(|a| level.l.component(a).clone()),
    )?);
    if let Some(sigma) = &dump.sigma {
        checks.push(compare_matrix(n, "golden sigma(k=-1)", sigma, |r, c| {
            level.sigma.at(r + 1, c + 1).clone()
        })?);
    }
    if let Some(h) = &dump.hamiltonian {
        let golden_h = parse_golden_entry(n, h, "H(-1)")?;
        let actual = RationalExpr::from(level.hamiltonian.clone());
        checks.push(match rational_residual(&actual, &golden_h) {
            None => Check::pass("golden H(k=-1)", n),
            Some(d) => Check::fail("golden H(k=-1)", n, vec![ExprJson::from_expr(&d)]),
        });
    }
    Ok(checks)
}

/// Compare a symmetry field against golden printed components under the
/// key `eta{kind}_n{n}`; `None` when no golden entry exists.
pub fn compare_field(
    fields: &GoldenFields,
    kind: usize,
    field: &VectorField,
) -> AppResult<Option<Check>> {
    let n = field.lattice_size();
    let key = format!("eta{kind}_n{n}");
    let Some(golden) = fields.fields.get(&key) else {
        return Ok(None);
    };
    compare_components(
        n,
        &format!("golden eta{kind} components"),
        golden,
        (1..=2 * n).map(|a| RationalExpr::from(field.component(a).clone())),
    )
    .map(Some)
}
