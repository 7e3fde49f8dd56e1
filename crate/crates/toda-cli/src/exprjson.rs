//! The JSON wrapper for single expressions:
//! `{"n": int, "terms": [[coeff, monomial], ...]}` with coefficients as
//! `"p"` or `"p/q"` strings and monomials in the deterministic text form
//! (`"1"` for the constant term). Terms are listed leading-first, the
//! same order the text serialization uses.

use num_traits::One;
use serde::{Deserialize, Serialize};
use toda_core::expr::Expr;

use crate::{AppError, AppResult};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExprJson {
    pub n: usize,
    pub terms: Vec<(String, String)>,
}

impl ExprJson {
    pub fn from_expr(e: &Expr) -> Self {
        let mut terms = Vec::with_capacity(e.num_terms());
        for (m, c) in e.terms() {
            let coeff = if c.denom().is_one() {
                format!("{}", c.numer())
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            terms.push((coeff, m.to_string()));
        }
        terms.reverse(); // leading term first
        ExprJson {
            n: e.lattice_size(),
            terms,
        }
    }

    pub fn to_expr(&self) -> AppResult<Expr> {
        let mut acc = Expr::zero(self.n);
        for (coeff, mono) in &self.terms {
            let text = format!("({coeff})*({mono})");
            let term = Expr::parse(self.n, &text)
                .map_err(|e| AppError::input(format!("bad term '{coeff}', '{mono}': {e}")))?;
            acc = acc + term;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_the_expression() {
        let e = Expr::parse(2, "3/2*x3^2*E1 - t + 7 - 1/4*x4*t^2").unwrap();
        let json = ExprJson::from_expr(&e);
        assert_eq!(json.n, 2);
        assert_eq!(json.to_expr().unwrap(), e);
        // leading term first, constant monomial spelled "1"
        assert!(json.terms.iter().any(|(c, m)| c == "7" && m == "1"));
    }

    #[test]
    fn zero_serializes_to_no_terms() {
        let e = Expr::zero(3);
        let json = ExprJson::from_expr(&e);
        assert!(json.terms.is_empty());
        assert!(json.to_expr().unwrap().is_zero());
    }

    #[test]
    fn serde_shape_is_stable() {
        let e = Expr::parse(2, "x3 - 2*E1").unwrap();
        let json = serde_json::to_string(&ExprJson::from_expr(&e)).unwrap();
        assert_eq!(json, r#"{"n":2,"terms":[["1","x3"],["-2","E1"]]}"#);
    }
}
