//! Deterministic text form.
//!
//! Terms print in descending monomial order (leading term first),
//! coefficients as `p` or `p/q`, variables as `x1..x{2n}`, time as `t`,
//! atoms as `E1..E{n-1}`, factors joined with `*` and powers written
//! `^k`. Fractions print as `(num)/(den)`. The printer and the parser
//! round-trip exactly.

use core::fmt::{Display, Formatter, Result as FmtResult};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Expr, Monomial, RationalExpr};

fn write_coeff_magnitude(f: &mut Formatter<'_>, c: &BigRational, mono_is_unit: bool) -> FmtResult {
    let mag = c.abs();
    if mag.is_one() && !mono_is_unit {
        return Ok(());
    }
    if mag.denom().is_one() {
        write!(f, "{}", mag.numer())?;
    } else {
        write!(f, "{}/{}", mag.numer(), mag.denom())?;
    }
    if !mono_is_unit {
        write!(f, "*")?;
    }
    Ok(())
}

fn write_monomial(f: &mut Formatter<'_>, m: &Monomial) -> FmtResult {
    let n = m.lattice_size();
    let mut first = true;
    let sep = |f: &mut Formatter<'_>, first: &mut bool| -> FmtResult {
        if !*first {
            write!(f, "*")?;
        }
        *first = false;
        Ok(())
    };
    for a in 1..=2 * n {
        let e = m.x_exp(a);
        if e > 0 {
            sep(f, &mut first)?;
            write!(f, "x{a}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    let te = m.t_exp();
    if te > 0 {
        sep(f, &mut first)?;
        write!(f, "t")?;
        if te > 1 {
            write!(f, "^{te}")?;
        }
    }
    for j in 1..n {
        let e = m.atom_exp(j);
        if e > 0 {
            sep(f, &mut first)?;
            write!(f, "E{j}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    Ok(())
}

impl Display for Monomial {
    fn fmt(&self, f: &mut Formatter<'_>) -> FmtResult {
        if self.is_unit() {
            return write!(f, "1");
        }
        write_monomial(f, self)
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> FmtResult {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_coeff_magnitude(f, c, m.is_unit())?;
            write_monomial(f, m)?;
        }
        Ok(())
    }
}

impl Display for RationalExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> FmtResult {
        if self.den().is_one() {
            return write!(f, "{}", self.num());
        }
        write!(f, "({})/({})", self.num(), self.den())
    }
}
