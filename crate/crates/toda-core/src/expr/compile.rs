//! Float-compiled forms for hot evaluation loops.
//!
//! Integration and eigenvalue sweeps evaluate the same expressions at
//! thousands of states; converting the exact rational coefficients once
//! avoids big-integer traffic per step. Compiled evaluation matches
//! [`Expr::eval`] bit-for-bit on the same inputs.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::{Expr, ExprError, RationalExpr};
use crate::fp;
use crate::expr::rational::EVAL_SINGULAR_TOL;

struct CompiledTerm {
    coeff: f64,
    x_exps: Box<[u32]>,
    t_exp: u32,
    atom_exps: Box<[u32]>,
}

/// An [`Expr`] with coefficients lowered to `f64`.
pub struct CompiledExpr {
    n: usize,
    terms: Vec<CompiledTerm>,
}

impl CompiledExpr {
    pub fn lattice_size(&self) -> usize {
        self.n
    }

    pub fn eval(&self, coords: &[f64], t: f64) -> Result<f64, ExprError> {
        if coords.len() != 2 * self.n {
            return Err(ExprError::StateLength {
                expected: 2 * self.n,
                got: coords.len(),
            });
        }
        let mut atoms = [0.0; 16];
        let n_atoms = self.n - 1;
        debug_assert!(n_atoms <= atoms.len(), "lattice too large for atom buffer");
        for j in 1..self.n {
            atoms[j - 1] = fp::exp(coords[j - 1] - coords[j]);
        }
        let mut acc = 0.0;
        for term in &self.terms {
            let mut v = term.coeff;
            for (a, &e) in term.x_exps.iter().enumerate() {
                if e > 0 {
                    v *= fp::powi(coords[a], e);
                }
            }
            if term.t_exp > 0 {
                v *= fp::powi(t, term.t_exp);
            }
            for (j, &e) in term.atom_exps.iter().enumerate() {
                if e > 0 {
                    v *= fp::powi(atoms[j], e);
                }
            }
            acc += v;
        }
        Ok(acc)
    }
}

impl Expr {
    pub fn compile(&self) -> CompiledExpr {
        let n = self.lattice_size();
        let terms = self
            .terms()
            .map(|(m, c)| CompiledTerm {
                coeff: c.to_f64().unwrap_or(f64::NAN),
                x_exps: (1..=2 * n).map(|a| m.x_exp(a)).collect(),
                t_exp: m.t_exp(),
                atom_exps: (1..n).map(|j| m.atom_exp(j)).collect(),
            })
            .collect();
        CompiledExpr { n, terms }
    }
}

/// A [`RationalExpr`] with both sides compiled.
pub struct CompiledRational {
    num: CompiledExpr,
    den: CompiledExpr,
    den_is_one: bool,
}

impl CompiledRational {
    pub fn eval(&self, coords: &[f64], t: f64) -> Result<f64, ExprError> {
        if self.den_is_one {
            return self.num.eval(coords, t);
        }
        let dv = self.den.eval(coords, t)?;
        if fp::abs(dv) < EVAL_SINGULAR_TOL {
            return Err(ExprError::SingularEvaluation);
        }
        Ok(self.num.eval(coords, t)? / dv)
    }
}

impl RationalExpr {
    pub fn compile(&self) -> CompiledRational {
        CompiledRational {
            num: self.num().compile(),
            den: self.den().compile(),
            den_is_one: self.den().is_one(),
        }
    }
}
