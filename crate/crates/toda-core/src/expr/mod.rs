//! Exact symbolic kernel.
//!
//! [`Expr`] is a canonical-form polynomial over the variables
//! `x1..x{2n}`, `t` and the interaction atoms `E1..E{n-1}` with exact
//! rational coefficients. The atom `Ej` represents `exp(xj - x{j+1})`
//! and is never expanded; the ring is closed under differentiation via
//! the atom rules `dEj/dxj = Ej` and `dEj/dx{j+1} = -Ej`.
//!
//! [`RationalExpr`] is the fraction field needed for inverse matrices.
//! Equality there is exact cross-multiplication, so no polynomial gcd
//! engine is required.
//!
//! The boundary conventions of the open chain (`E0` and `En` are
//! identically zero) are enforced at construction: asking for those
//! atoms yields the zero expression.

mod compile;
mod fmt;
mod parse;
mod rational;

pub use compile::{CompiledExpr, CompiledRational};
pub use parse::ParseError;
pub use rational::RationalExpr;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self as cfmt, Debug};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::fp;

/// A differentiation / evaluation variable: a phase-space coordinate
/// `x{a}` with `a` in `1..=2n`, or time `t`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X(usize),
    T,
}

/// Errors from kernel operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprError {
    /// Interaction atom index outside `0..=n`.
    AtomIndex { index: usize, n: usize },
    /// Coordinate index outside `1..=2n`.
    VarIndex { index: usize, n: usize },
    /// Two objects with different lattice sizes were combined.
    SizeMismatch { left: usize, right: usize },
    /// A fraction was built with a zero denominator.
    ZeroDenominator,
    /// A denominator evaluated within tolerance of zero.
    SingularEvaluation,
    /// A state vector had the wrong number of coordinates.
    StateLength { expected: usize, got: usize },
}

impl cfmt::Display for ExprError {
    fn fmt(&self, f: &mut cfmt::Formatter<'_>) -> cfmt::Result {
        match self {
            ExprError::AtomIndex { index, n } => {
                write!(f, "atom index E{index} out of range for n = {n}")
            }
            ExprError::VarIndex { index, n } => {
                write!(f, "variable x{index} out of range for n = {n}")
            }
            ExprError::SizeMismatch { left, right } => {
                write!(f, "lattice size mismatch: {left} vs {right}")
            }
            ExprError::ZeroDenominator => write!(f, "zero denominator"),
            ExprError::SingularEvaluation => {
                write!(f, "denominator evaluates within tolerance of zero")
            }
            ExprError::StateLength { expected, got } => {
                write!(f, "state has {got} coordinates, expected {expected}")
            }
        }
    }
}

impl core::error::Error for ExprError {}

/// Exponent vector over the fixed layout `[x1..x{2n}, t, E1..E{n-1}]`
/// (length `3n`).
///
/// The total order is graded lexicographic: compare total degree first,
/// then the exponent vector in layout order. This order is fixed so that
/// serialization is deterministic; printing iterates terms in descending
/// order, leading term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    /// The constant monomial for lattice size `n`.
    pub fn unit(n: usize) -> Self {
        Monomial {
            exps: alloc::vec![0; 3 * n],
        }
    }

    pub fn lattice_size(&self) -> usize {
        self.exps.len() / 3
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Exponent of `x{a}`, `a` in `1..=2n`.
    pub fn x_exp(&self, a: usize) -> u32 {
        self.exps[a - 1]
    }

    pub fn t_exp(&self) -> u32 {
        self.exps[2 * self.lattice_size()]
    }

    /// Exponent of the atom `Ej`, `j` in `1..=n-1`.
    pub fn atom_exp(&self, j: usize) -> u32 {
        self.exps[2 * self.lattice_size() + j]
    }

    fn set_x(&mut self, a: usize, e: u32) {
        self.exps[a - 1] = e;
    }

    fn set_t(&mut self, e: u32) {
        let n = self.lattice_size();
        self.exps[2 * n] = e;
    }

    fn set_atom(&mut self, j: usize, e: u32) {
        let n = self.lattice_size();
        self.exps[2 * n + j] = e;
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    /// Entry-wise quotient; caller guarantees divisibility.
    fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    /// Copy with the exponent of `x{a}` replaced.
    pub(crate) fn with_x_exp(&self, a: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.set_x(a, e);
        m
    }

    /// Net weight of `d/dx{a}` acting on the atom part: the atom `Ej`
    /// contributes `+1` per power through `xj` and `-1` per power
    /// through `x{j+1}`.
    pub(crate) fn atom_weight(&self, a: usize) -> i64 {
        let n = self.lattice_size();
        if a > n {
            return 0;
        }
        let mut w = 0i64;
        if a <= n - 1 {
            w += self.atom_exp(a) as i64;
        }
        if a >= 2 {
            w -= self.atom_exp(a - 1) as i64;
        }
        w
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl Debug for Monomial {
    fn fmt(&self, f: &mut cfmt::Formatter<'_>) -> cfmt::Result {
        write!(f, "Monomial({:?})", self.exps)
    }
}

/// Canonical-form element of the ring `Q[x1..x{2n}, t, E1..E{n-1}]`.
///
/// Invariants: no stored term has a zero coefficient, and two
/// expressions are equal iff their term maps are identical.
#[derive(Clone, PartialEq, Eq)]
pub struct Expr {
    n: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Expr {
    pub fn zero(n: usize) -> Self {
        Expr {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Expr::constant(n, BigRational::one())
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(n), c);
        }
        Expr { n, terms }
    }

    pub fn integer(n: usize, k: i64) -> Self {
        Expr::constant(n, BigRational::from_integer(BigInt::from(k)))
    }

    /// `p/q` as a constant expression.
    pub fn fraction(n: usize, p: i64, q: i64) -> Self {
        Expr::constant(n, BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn var(n: usize, v: Var) -> Result<Self, ExprError> {
        let mut m = Monomial::unit(n);
        match v {
            Var::X(a) => {
                if a == 0 || a > 2 * n {
                    return Err(ExprError::VarIndex { index: a, n });
                }
                m.set_x(a, 1);
            }
            Var::T => m.set_t(1),
        }
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        Ok(Expr { n, terms })
    }

    /// The coordinate `x{a}`, `a` in `1..=2n`.
    pub fn x(n: usize, a: usize) -> Result<Self, ExprError> {
        Expr::var(n, Var::X(a))
    }

    pub fn time(n: usize) -> Self {
        Expr::var(n, Var::T).expect("t is always valid")
    }

    /// The interaction atom `Ej = exp(xj - x{j+1})`.
    ///
    /// Boundary conventions: `E0` and `En` are identically zero, so those
    /// indices yield the zero expression. Indices beyond `n` are a domain
    /// error.
    pub fn e_atom(n: usize, j: usize) -> Result<Self, ExprError> {
        if j > n {
            return Err(ExprError::AtomIndex { index: j, n });
        }
        if j == 0 || j == n {
            return Ok(Expr::zero(n));
        }
        let mut m = Monomial::unit(n);
        m.set_atom(j, 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        Ok(Expr { n, terms })
    }

    /// Normalize a raw term list into canonical form: coefficients of equal
    /// monomials are combined and zero terms dropped. All monomials must
    /// match the declared lattice size.
    pub fn from_terms(
        n: usize,
        raw: impl IntoIterator<Item = (BigRational, Monomial)>,
    ) -> Result<Self, ExprError> {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (c, m) in raw {
            if m.lattice_size() != n {
                return Err(ExprError::SizeMismatch {
                    left: n,
                    right: m.lattice_size(),
                });
            }
            if c.is_zero() {
                continue;
            }
            *terms.entry(m).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Expr { n, terms })
    }

    pub fn lattice_size(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_unit() && c.is_one())
                .unwrap_or(false)
    }

    /// True when the expression is a rational constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    /// The constant value if [`is_constant`](Self::is_constant) holds.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (maximal) monomial and coefficient under the fixed order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero(self.n);
        }
        Expr {
            n: self.n,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Expr {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    fn add_assign_term(terms: &mut BTreeMap<Monomial, BigRational>, m: &Monomial, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(m) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    terms.remove(m);
                }
            }
            None => {
                terms.insert(m.clone(), c.clone());
            }
        }
    }

    fn check_size(&self, other: &Expr) {
        assert_eq!(
            self.n, other.n,
            "lattice size mismatch: {} vs {}",
            self.n, other.n
        );
    }

    pub fn add_ref(&self, other: &Expr) -> Expr {
        self.check_size(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Expr::add_assign_term(&mut terms, m, c);
        }
        Expr { n: self.n, terms }
    }

    pub fn sub_ref(&self, other: &Expr) -> Expr {
        self.check_size(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Expr::add_assign_term(&mut terms, m, &(-c));
        }
        Expr { n: self.n, terms }
    }

    pub fn mul_ref(&self, other: &Expr) -> Expr {
        self.check_size(other);
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                Expr::add_assign_term(&mut terms, &m, &c);
            }
        }
        Expr { n: self.n, terms }
    }

    pub fn neg_ref(&self) -> Expr {
        Expr {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::one(self.n);
        for _ in 0..k {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Exact partial derivative. The ring is closed under `d/dx{a}` and
    /// `d/dt`; atom exponents contribute through their net weight.
    pub fn diff(&self, v: Var) -> Expr {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            match v {
                Var::X(a) => {
                    assert!(a >= 1 && a <= 2 * self.n, "variable x{a} out of range");
                    let k = m.x_exp(a);
                    if k > 0 {
                        let mut lowered = m.clone();
                        lowered.set_x(a, k - 1);
                        let coeff = c * BigRational::from_integer(BigInt::from(k));
                        Expr::add_assign_term(&mut terms, &lowered, &coeff);
                    }
                    let w = m.atom_weight(a);
                    if w != 0 {
                        let coeff = c * BigRational::from_integer(BigInt::from(w));
                        Expr::add_assign_term(&mut terms, m, &coeff);
                    }
                }
                Var::T => {
                    let k = m.t_exp();
                    if k > 0 {
                        let mut lowered = m.clone();
                        lowered.set_t(k - 1);
                        let coeff = c * BigRational::from_integer(BigInt::from(k));
                        Expr::add_assign_term(&mut terms, &lowered, &coeff);
                    }
                }
            }
        }
        Expr { n: self.n, terms }
    }

    /// Evaluate at a phase point: `coords` holds `x1..x{2n}`, atoms become
    /// `exp(xj - x{j+1})`.
    pub fn eval(&self, coords: &[f64], t: f64) -> Result<f64, ExprError> {
        if coords.len() != 2 * self.n {
            return Err(ExprError::StateLength {
                expected: 2 * self.n,
                got: coords.len(),
            });
        }
        let atoms: Vec<f64> = (1..self.n)
            .map(|j| fp::exp(coords[j - 1] - coords[j]))
            .collect();
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for a in 1..=2 * self.n {
                let e = m.x_exp(a);
                if e > 0 {
                    v *= fp::powi(coords[a - 1], e);
                }
            }
            let te = m.t_exp();
            if te > 0 {
                v *= fp::powi(t, te);
            }
            for j in 1..self.n {
                let e = m.atom_exp(j);
                if e > 0 {
                    v *= fp::powi(atoms[j - 1], e);
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Largest power of each variable dividing every term; used for
    /// fraction reduction.
    fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut content = first.clone();
        for m in it {
            for (c, e) in content.exps.iter_mut().zip(&m.exps) {
                *c = (*c).min(*e);
            }
        }
        Some(content)
    }

    fn div_monomial(&self, m: &Monomial) -> Expr {
        Expr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn content_and_primitive(a: &Expr, b: &Expr) -> (Expr, Expr) {
        let (ca, cb) = match (a.monomial_content(), b.monomial_content()) {
            (Some(ca), Some(cb)) => (ca, cb),
            _ => return (a.clone(), b.clone()),
        };
        let mut common = ca;
        for (c, e) in common.exps.iter_mut().zip(&cb.exps) {
            *c = (*c).min(*e);
        }
        if common.is_unit() {
            (a.clone(), b.clone())
        } else {
            (a.div_monomial(&common), b.div_monomial(&common))
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Expr> for Expr {
    type Output = Expr;
    fn add(self, rhs: &'a Expr) -> Expr {
        self.add_ref(rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self.sub_ref(&rhs)
    }
}

impl<'a> Sub<&'a Expr> for Expr {
    type Output = Expr;
    fn sub(self, rhs: &'a Expr) -> Expr {
        self.sub_ref(rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Expr> for Expr {
    type Output = Expr;
    fn mul(self, rhs: &'a Expr) -> Expr {
        self.mul_ref(rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.neg_ref()
    }
}

impl Debug for Expr {
    fn fmt(&self, f: &mut cfmt::Formatter<'_>) -> cfmt::Result {
        write!(f, "Expr[n={}]({})", self.n, self)
    }
}

/// Ring interface shared by [`Expr`] and [`RationalExpr`] so tensor
/// operations (curl, Lie derivatives, matrix algebra) are written once.
pub trait Scalar:
    Clone
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Sized
    + core::fmt::Display
{
    fn zero(n: usize) -> Self;
    fn one(n: usize) -> Self;
    fn lattice_size(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn diff(&self, v: Var) -> Self;
    fn from_expr(e: Expr) -> Self;
    fn eval(&self, coords: &[f64], t: f64) -> Result<f64, ExprError>;
}

impl Scalar for Expr {
    fn zero(n: usize) -> Self {
        Expr::zero(n)
    }
    fn one(n: usize) -> Self {
        Expr::one(n)
    }
    fn lattice_size(&self) -> usize {
        self.n
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn diff(&self, v: Var) -> Self {
        Expr::diff(self, v)
    }
    fn from_expr(e: Expr) -> Self {
        e
    }
    fn eval(&self, coords: &[f64], t: f64) -> Result<f64, ExprError> {
        Expr::eval(self, coords, t)
    }
}
