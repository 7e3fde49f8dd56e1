//! Fractions over the polynomial ring.
//!
//! Normalization cancels the common monomial content and scales the
//! denominator monic (leading coefficient `+1` under the monomial
//! order). Full polynomial gcd is deliberately absent: equality is
//! exact cross-multiplication, which needs no factoring.

use core::fmt::{self, Debug};
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;

use super::{Expr, ExprError, Scalar, Var};
use crate::fp;

/// Absolute guard below which an evaluated denominator counts as singular.
pub const EVAL_SINGULAR_TOL: f64 = 1e-12;

/// Exact fraction `num/den` of ring elements, `den` nonzero and monic.
#[derive(Clone)]
pub struct RationalExpr {
    num: Expr,
    den: Expr,
}

impl RationalExpr {
    pub fn new(num: Expr, den: Expr) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        if num.lattice_size() != den.lattice_size() {
            return Err(ExprError::SizeMismatch {
                left: num.lattice_size(),
                right: den.lattice_size(),
            });
        }
        Ok(RationalExpr { num, den }.reduced())
    }

    fn reduced(self) -> Self {
        let n = self.num.lattice_size();
        if self.num.is_zero() {
            return RationalExpr {
                num: Expr::zero(n),
                den: Expr::one(n),
            };
        }
        let (num, den) = Expr::content_and_primitive(&self.num, &self.den);
        let lc = den
            .leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::one);
        if lc.is_one() {
            RationalExpr { num, den }
        } else {
            let inv = lc.recip();
            RationalExpr {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn num(&self) -> &Expr {
        &self.num
    }

    pub fn den(&self) -> &Expr {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Multiplicative inverse; errors when the fraction is zero.
    pub fn inverse(&self) -> Result<Self, ExprError> {
        RationalExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        RationalExpr {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
        .reduced()
    }

    fn check_size(&self, other: &Self) {
        assert_eq!(
            self.num.lattice_size(),
            other.num.lattice_size(),
            "lattice size mismatch"
        );
    }
}

impl From<Expr> for RationalExpr {
    fn from(e: Expr) -> Self {
        let n = e.lattice_size();
        RationalExpr {
            num: e,
            den: Expr::one(n),
        }
    }
}

impl PartialEq for RationalExpr {
    /// Mathematical equality: `num1*den2 - num2*den1 = 0`, exactly.
    fn eq(&self, other: &Self) -> bool {
        if self.num.lattice_size() != other.num.lattice_size() {
            return false;
        }
        self.num.mul_ref(&other.den) == other.num.mul_ref(&self.den)
    }
}

impl Add for RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: RationalExpr) -> RationalExpr {
        self.check_size(&rhs);
        if self.den == rhs.den {
            return RationalExpr {
                num: self.num.add_ref(&rhs.num),
                den: self.den,
            }
            .reduced();
        }
        RationalExpr {
            num: self.num.mul_ref(&rhs.den).add_ref(&rhs.num.mul_ref(&self.den)),
            den: self.den.mul_ref(&rhs.den),
        }
        .reduced()
    }
}

impl Sub for RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: RationalExpr) -> RationalExpr {
        self + (-rhs)
    }
}

impl Mul for RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: RationalExpr) -> RationalExpr {
        self.check_size(&rhs);
        RationalExpr {
            num: self.num.mul_ref(&rhs.num),
            den: self.den.mul_ref(&rhs.den),
        }
        .reduced()
    }
}

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg_ref(),
            den: self.den,
        }
    }
}

impl Scalar for RationalExpr {
    fn zero(n: usize) -> Self {
        RationalExpr::from(Expr::zero(n))
    }

    fn one(n: usize) -> Self {
        RationalExpr::from(Expr::one(n))
    }

    fn lattice_size(&self) -> usize {
        self.num.lattice_size()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Quotient rule, exact in the fraction field.
    fn diff(&self, v: Var) -> Self {
        let dn = self.num.diff(v);
        let dd = self.den.diff(v);
        if dd.is_zero() {
            return RationalExpr {
                num: dn,
                den: self.den.clone(),
            }
            .reduced();
        }
        RationalExpr {
            num: dn.mul_ref(&self.den).sub_ref(&self.num.mul_ref(&dd)),
            den: self.den.mul_ref(&self.den),
        }
        .reduced()
    }

    fn from_expr(e: Expr) -> Self {
        RationalExpr::from(e)
    }

    fn eval(&self, coords: &[f64], t: f64) -> Result<f64, ExprError> {
        let dv = self.den.eval(coords, t)?;
        if fp::abs(dv) < EVAL_SINGULAR_TOL {
            return Err(ExprError::SingularEvaluation);
        }
        Ok(self.num.eval(coords, t)? / dv)
    }
}

impl Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({})", self)
    }
}
