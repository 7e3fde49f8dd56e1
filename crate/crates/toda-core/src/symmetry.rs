//! The five symmetry vector fields of the flow, the Master-equation
//! residual, the Lie-derivative calculus on scalars, vectors, one-forms,
//! two-forms and mixed tensors, and the commutator algebra.
//!
//! All five fields are generated from their closed n-dimensional
//! formulas; the printed low-dimensional cases are golden tests, never
//! the source. The commutator verifier computes and compares, it does
//! not assume the algebra table.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::expr::{Expr, ExprError, RationalExpr, Scalar, Var};
use crate::lattice::{LatticeConfig, PhaseState};
use crate::matrix::Matrix;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A vector field on phase space: `2n` polynomial components, possibly
/// time-dependent.
#[derive(Clone, PartialEq)]
pub struct VectorField {
    n: usize,
    comps: Vec<Expr>,
}

impl VectorField {
    pub fn new(n: usize, comps: Vec<Expr>) -> Result<Self, ExprError> {
        if comps.len() != 2 * n {
            return Err(ExprError::StateLength {
                expected: 2 * n,
                got: comps.len(),
            });
        }
        for c in &comps {
            if c.lattice_size() != n {
                return Err(ExprError::SizeMismatch {
                    left: n,
                    right: c.lattice_size(),
                });
            }
        }
        Ok(VectorField { n, comps })
    }

    pub fn zero(n: usize) -> Self {
        VectorField {
            n,
            comps: vec![Expr::zero(n); 2 * n],
        }
    }

    pub fn lattice_size(&self) -> usize {
        self.n
    }

    /// Component `a`, 1-based, `a` in `1..=2n`.
    pub fn component(&self, a: usize) -> &Expr {
        &self.comps[a - 1]
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    pub fn add_field(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.n, other.n, "lattice size mismatch");
        VectorField {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub_field(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.n, other.n, "lattice size mismatch");
        VectorField {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> VectorField {
        VectorField {
            n: self.n,
            comps: self.comps.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn eval(&self, state: &PhaseState) -> Result<Vec<f64>, ExprError> {
        self.comps.iter().map(|c| state.eval(c)).collect()
    }
}

impl core::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "VectorField[n={}](", self.n)?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A one-form `l_a` with its scalar companion `l0`; for Lagrangian
/// one-forms of the flow `f` the companion is `l0 = -sum l_a f^a`.
#[derive(Clone, PartialEq)]
pub struct OneForm<T: Scalar = Expr> {
    n: usize,
    comps: Vec<T>,
    scalar: T,
}

impl<T: Scalar> OneForm<T> {
    pub fn with_scalar(n: usize, comps: Vec<T>, scalar: T) -> Result<Self, ExprError> {
        if comps.len() != 2 * n {
            return Err(ExprError::StateLength {
                expected: 2 * n,
                got: comps.len(),
            });
        }
        for c in comps.iter().chain(core::iter::once(&scalar)) {
            if c.lattice_size() != n {
                return Err(ExprError::SizeMismatch {
                    left: n,
                    right: c.lattice_size(),
                });
            }
        }
        Ok(OneForm { n, comps, scalar })
    }

    /// Build with `l0` recomputed from the flow: `l0 = -sum l_a f^a`.
    pub fn with_flow(n: usize, comps: Vec<T>, flow: &VectorField) -> Result<Self, ExprError> {
        let mut scalar = T::zero(n);
        for (la, fa) in comps.iter().zip(flow.components()) {
            scalar = scalar - la.clone() * T::from_expr(fa.clone());
        }
        OneForm::with_scalar(n, comps, scalar)
    }

    pub fn lattice_size(&self) -> usize {
        self.n
    }

    /// Component `a`, 1-based.
    pub fn component(&self, a: usize) -> &T {
        &self.comps[a - 1]
    }

    pub fn components(&self) -> &[T] {
        &self.comps
    }

    pub fn scalar_part(&self) -> &T {
        &self.scalar
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero()) && self.scalar.is_zero()
    }

    pub fn scale(&self, c: &T) -> OneForm<T> {
        OneForm {
            n: self.n,
            comps: self.comps.iter().map(|e| e.clone() * c.clone()).collect(),
            scalar: self.scalar.clone() * c.clone(),
        }
    }
}

impl OneForm<Expr> {
    pub fn to_rational(&self) -> OneForm<RationalExpr> {
        OneForm {
            n: self.n,
            comps: self.comps.iter().cloned().map(RationalExpr::from).collect(),
            scalar: RationalExpr::from(self.scalar.clone()),
        }
    }
}

impl<T: Scalar> core::fmt::Debug for OneForm<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "OneForm[n={}](", self.n)?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; l0 = {})", self.scalar)
    }
}

/// Antisymmetric `2n x 2n` Lagrange-brackets matrix.
#[derive(Clone, PartialEq)]
pub struct SigmaMatrix<T: Scalar = Expr> {
    inner: Matrix<T>,
}

impl<T: Scalar> SigmaMatrix<T> {
    /// Checks exact antisymmetry.
    pub fn new(m: Matrix<T>) -> Result<Self, ExprError> {
        let n = m.lattice_size();
        if m.rows() != 2 * n || m.cols() != 2 * n {
            return Err(ExprError::StateLength {
                expected: 2 * n,
                got: m.rows(),
            });
        }
        if !m.is_antisymmetric() {
            return Err(ExprError::SizeMismatch { left: 0, right: 0 });
        }
        Ok(SigmaMatrix { inner: m })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn lattice_size(&self) -> usize {
        self.inner.lattice_size()
    }

    /// Entry `(a, b)`, 1-based.
    pub fn at(&self, a: usize, b: usize) -> &T {
        self.inner.at(a - 1, b - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn scale(&self, c: &T) -> SigmaMatrix<T> {
        SigmaMatrix {
            inner: self.inner.scale(c),
        }
    }
}

impl SigmaMatrix<Expr> {
    pub fn to_rational(&self) -> SigmaMatrix<RationalExpr> {
        SigmaMatrix {
            inner: self.inner.map(|e| RationalExpr::from(e.clone())),
        }
    }
}

impl<T: Scalar> core::fmt::Debug for SigmaMatrix<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Sigma{:?}", self.inner)
    }
}

/// One verified relation: an exact symbolic check with the offending
/// residual components kept on failure.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: String,
    pub n: usize,
    pub passed: bool,
    pub residual: Vec<Expr>,
}

impl RelationCheck {
    fn from_residual(relation: String, n: usize, residual: Vec<Expr>) -> Self {
        let passed = residual.iter().all(Expr::is_zero);
        let residual = if passed {
            Vec::new()
        } else {
            residual.into_iter().filter(|e| !e.is_zero()).collect()
        };
        RelationCheck {
            relation,
            n,
            passed,
            residual,
        }
    }
}

/// One of the five symmetry fields, by closed formula, any `n`.
///
/// Kinds: 1 the lattice-size generalization of the dilation-boost field,
/// 2 the scaling field, 3 the constant boost, 4 the position shift,
/// 5 the summed-coordinate field. Out-of-range kinds are an error.
pub fn symmetry_field(cfg: LatticeConfig, kind: usize) -> Result<VectorField, ExprError> {
    let n = cfg.n();
    let x = |a: usize| Expr::x(n, a).expect("index in range by construction");
    let atom = |j: usize| Expr::e_atom(n, j).expect("atom in range by construction");
    let t = Expr::time(n);
    let half = rat(1, 2);

    let comps: Vec<Expr> = match kind {
        1 => {
            let mut comps = Vec::with_capacity(2 * n);
            for j in 1..=n {
                // (n+1-j) x^{n+j} - 1/2 sum_{k<j} x^{n+k} + 1/2 sum_{k>j} x^{n+k}
                //   + t/2 ((x^{n+j})^2 + E_{j-1} + E_j)
                let mut c = x(n + j).scale_int((n + 1 - j) as i64);
                for k in 1..j {
                    c = c - x(n + k).scale(&half);
                }
                for k in j + 1..=n {
                    c = c + x(n + k).scale(&half);
                }
                let bracket = x(n + j).pow(2) + atom(j - 1) + atom(j);
                c = c + t.clone().mul_ref(&bracket).scale(&half);
                comps.push(c);
            }
            for j in 1..=n {
                // 1/2 (x^{n+j})^2 + (n+2-j) E_{j-1} - (n-j) E_j
                //   + t/2 (x^{n+j-1}+x^{n+j}) E_{j-1} - t/2 (x^{n+j}+x^{n+j+1}) E_j
                let mut c = x(n + j).pow(2).scale(&half);
                c = c + atom(j - 1).scale_int((n + 2 - j) as i64);
                c = c - atom(j).scale_int((n - j) as i64);
                if j >= 2 {
                    let pair = x(n + j - 1) + x(n + j);
                    c = c + t.clone().mul_ref(&pair).mul_ref(&atom(j - 1)).scale(&half);
                }
                if j < n {
                    let pair = x(n + j) + x(n + j + 1);
                    c = c - t.clone().mul_ref(&pair).mul_ref(&atom(j)).scale(&half);
                }
                comps.push(c);
            }
            comps
        }
        2 => {
            let mut comps = Vec::with_capacity(2 * n);
            for j in 1..=n {
                comps.push(Expr::integer(n, j as i64) - t.clone().mul_ref(&x(n + j)).scale(&half));
            }
            for j in 1..=n {
                let diff = atom(j - 1) - atom(j);
                comps.push(x(n + j).scale(&rat(-1, 2)) - t.clone().mul_ref(&diff).scale(&half));
            }
            comps
        }
        3 => {
            let mut comps = vec![t.clone(); n];
            comps.extend(vec![Expr::one(n); n]);
            comps
        }
        4 => {
            let mut comps = vec![Expr::one(n); n];
            comps.extend(vec![Expr::zero(n); n]);
            comps
        }
        5 => {
            let mut pos_sum = Expr::zero(n);
            let mut mom_sum = Expr::zero(n);
            for i in 1..=n {
                pos_sum = pos_sum + x(i);
                mom_sum = mom_sum + x(n + i);
            }
            let mut comps = vec![pos_sum; n];
            comps.extend(vec![mom_sum; n]);
            comps
        }
        other => {
            return Err(ExprError::VarIndex { index: other, n });
        }
    };
    VectorField::new(n, comps)
}

/// Residual of the symmetry condition for `eta` against the flow `f`:
/// `d(eta)/dt + (d eta/dx) f - (d f/dx) eta`, component-wise. The zero
/// field iff `eta` is a symmetry.
pub fn master_residual(eta: &VectorField, f: &VectorField) -> VectorField {
    let n = eta.lattice_size();
    assert_eq!(n, f.lattice_size(), "lattice size mismatch");
    let mut comps = Vec::with_capacity(2 * n);
    for a in 1..=2 * n {
        let mut res = eta.component(a).diff(Var::T);
        for c in 1..=2 * n {
            res = res + eta.component(a).diff(Var::X(c)) * f.component(c);
            res = res - f.component(a).diff(Var::X(c)) * eta.component(c);
        }
        comps.push(res);
    }
    VectorField::new(n, comps).expect("constructed with 2n components")
}

/// Lie derivative of a scalar: `X^a d_a S` (no explicit time term).
pub fn lie_scalar(x: &VectorField, s: &Expr) -> Expr {
    let n = x.lattice_size();
    assert_eq!(n, s.lattice_size(), "lattice size mismatch");
    let mut acc = Expr::zero(n);
    for a in 1..=2 * n {
        acc = acc + x.component(a).mul_ref(&s.diff(Var::X(a)));
    }
    acc
}

/// Lie derivative of a vector field:
/// `(L_X Y)^a = X^b d_b Y^a - Y^b d_b X^a`.
pub fn lie_vector(x: &VectorField, y: &VectorField) -> VectorField {
    let n = x.lattice_size();
    assert_eq!(n, y.lattice_size(), "lattice size mismatch");
    let mut comps = Vec::with_capacity(2 * n);
    for a in 1..=2 * n {
        let mut acc = Expr::zero(n);
        for b in 1..=2 * n {
            acc = acc + x.component(b).mul_ref(&y.component(a).diff(Var::X(b)));
            acc = acc - y.component(b).mul_ref(&x.component(a).diff(Var::X(b)));
        }
        comps.push(acc);
    }
    VectorField::new(n, comps).expect("constructed with 2n components")
}

/// Commutator of vector fields, `[A, B] = L_A B`.
pub fn lie_bracket(a: &VectorField, b: &VectorField) -> VectorField {
    lie_vector(a, b)
}

/// Lie derivative of covector components:
/// `(L_X w)_a = X^b d_b w_a + w_b d_a X^b`.
pub fn lie_covector<T: Scalar>(x: &VectorField, omega: &[T]) -> Vec<T> {
    let n = x.lattice_size();
    assert_eq!(omega.len(), 2 * n, "dimension mismatch");
    let mut out = Vec::with_capacity(2 * n);
    for a in 1..=2 * n {
        let mut acc = T::zero(n);
        for b in 1..=2 * n {
            let xb = T::from_expr(x.component(b).clone());
            acc = acc + xb * omega[a - 1].diff(Var::X(b));
            let dax = T::from_expr(x.component(b).diff(Var::X(a)));
            acc = acc + omega[b - 1].clone() * dax;
        }
        out.push(acc);
    }
    out
}

/// Lie derivative of a two-form (antisymmetric matrix):
/// `(L_X s)_ab = X^c d_c s_ab + s_cb d_a X^c + s_ac d_b X^c`.
pub fn lie_two_form<T: Scalar>(x: &VectorField, sigma: &SigmaMatrix<T>) -> SigmaMatrix<T> {
    let n = x.lattice_size();
    let out = Matrix::from_fn(n, 2 * n, 2 * n, |ra, rb| {
        let a = ra + 1;
        let b = rb + 1;
        let mut acc = T::zero(n);
        for c in 1..=2 * n {
            let xc = T::from_expr(x.component(c).clone());
            acc = acc + xc * sigma.at(a, b).diff(Var::X(c));
            let dax = T::from_expr(x.component(c).diff(Var::X(a)));
            acc = acc + sigma.at(c, b).clone() * dax;
            let dbx = T::from_expr(x.component(c).diff(Var::X(b)));
            acc = acc + sigma.at(a, c).clone() * dbx;
        }
        acc
    });
    SigmaMatrix::new(out).expect("Lie derivative preserves antisymmetry")
}

/// Lie derivative of a mixed (1,1) tensor with lower row index:
/// `(L_X M)_a^b = X^c d_c M_a^b + M_c^b d_a X^c - M_a^c d_c X^b`.
pub fn lie_mixed<T: Scalar>(x: &VectorField, m: &Matrix<T>) -> Matrix<T> {
    let n = x.lattice_size();
    let dim = m.rows();
    assert_eq!(dim, 2 * n, "dimension mismatch");
    Matrix::from_fn(n, dim, dim, |ra, rb| {
        let a = ra + 1;
        let b = rb + 1;
        let mut acc = T::zero(n);
        for c in 1..=2 * n {
            let xc = T::from_expr(x.component(c).clone());
            acc = acc + xc * m.at(ra, rb).diff(Var::X(c));
            let dax = T::from_expr(x.component(c).diff(Var::X(a)));
            acc = acc + m.at(c - 1, rb).clone() * dax;
            let dcx = T::from_expr(x.component(b).diff(Var::X(c)));
            acc = acc - m.at(ra, c - 1).clone() * dcx;
        }
        acc
    })
}

fn field_residual(actual: &VectorField, expected: &VectorField) -> Vec<Expr> {
    actual
        .sub_field(expected)
        .components()
        .iter()
        .cloned()
        .collect()
}

/// Printed right-hand side of the commutator table for the ordered pair
/// `(m, k)` with `m < k`, excluding the `(1, 5)` row which needs its own
/// readings. Pairs not in the table commute.
fn table_rhs(cfg: LatticeConfig, m: usize, k: usize) -> Option<VectorField> {
    let n = cfg.n();
    let eta = |i: usize| symmetry_field(cfg, i).expect("kind in range");
    let ni = n as i64;
    match (m, k) {
        (1, 2) => Some(eta(1).scale_rat(&rat(1, 2))),
        (2, 3) => Some(eta(3).scale_rat(&rat(1, 2))),
        // printed as [eta3, eta1] = 3/2 (n+1) eta4 - 2 eta2; reverse sign
        (1, 3) => Some(
            eta(4)
                .scale_rat(&rat(-3 * (ni + 1), 2))
                .add_field(&eta(2).scale_rat(&rat(2, 1))),
        ),
        (3, 5) => Some(eta(3).scale_rat(&rat(ni, 1))),
        (4, 5) => Some(eta(4).scale_rat(&rat(ni, 1))),
        (2, 5) => Some(eta(4).scale_rat(&rat(ni * (ni + 1), 2))),
        (1, 5) => None,
        _ => Some(VectorField::zero(n)),
    }
}

/// Candidate readings of the `[eta1, eta5]` table row, whose printed form
/// carries a free component index `j` inside an `a`-indexed equation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Eta15Reading {
    /// One fixed `j` used for every component `a`.
    FixedJ(usize),
    /// `j` tied to the component: `j = ((a-1) mod n) + 1`.
    ComponentIndex,
    /// The `n eta1^j` factors read as sums over `j = 1..n`.
    SummedJ,
}

impl Eta15Reading {
    fn label(&self) -> String {
        match self {
            Eta15Reading::FixedJ(j) => format!("fixed j = {j}"),
            Eta15Reading::ComponentIndex => String::from("j = a mod n"),
            Eta15Reading::SummedJ => String::from("summed over j"),
        }
    }
}

/// Right-hand side of the `[eta1, eta5]` row under a given reading.
///
/// The printed row is
/// `n eta1^j eta4^a + n eta1^{n+j} (1 - eta4^a)
///    + eta5^{n+j} (2 eta2^a - 3/2 (n+1) eta4^a)`,
/// where `eta4^a` acts as the indicator of the position block.
pub fn eta15_rhs(cfg: LatticeConfig, reading: Eta15Reading) -> VectorField {
    let n = cfg.n();
    let eta1 = symmetry_field(cfg, 1).expect("kind in range");
    let eta2 = symmetry_field(cfg, 2).expect("kind in range");
    let eta5 = symmetry_field(cfg, 5).expect("kind in range");
    let p = eta5.component(n + 1).clone(); // eta5^{n+j}: the same sum for every j

    let pos_factor = |j: usize| eta1.component(j).scale_int(n as i64);
    let mom_factor = |j: usize| eta1.component(n + j).scale_int(n as i64);
    let summed_pos = {
        let mut acc = Expr::zero(n);
        for j in 1..=n {
            acc = acc + eta1.component(j).clone();
        }
        acc
    };
    let summed_mom = {
        let mut acc = Expr::zero(n);
        for j in 1..=n {
            acc = acc + eta1.component(n + j).clone();
        }
        acc
    };

    let mut comps = Vec::with_capacity(2 * n);
    for a in 1..=2 * n {
        let position_block = a <= n;
        let lead = match reading {
            Eta15Reading::FixedJ(j) => {
                if position_block {
                    pos_factor(j)
                } else {
                    mom_factor(j)
                }
            }
            Eta15Reading::ComponentIndex => {
                let j = (a - 1) % n + 1;
                if position_block {
                    pos_factor(j)
                } else {
                    mom_factor(j)
                }
            }
            Eta15Reading::SummedJ => {
                if position_block {
                    summed_pos.clone()
                } else {
                    summed_mom.clone()
                }
            }
        };
        let tail = if position_block {
            let coeff = eta2.component(a).scale_int(2)
                - Expr::fraction(n, 3 * (n as i64 + 1), 2);
            p.mul_ref(&coeff)
        } else {
            p.mul_ref(&eta2.component(a).scale_int(2))
        };
        comps.push(lead + tail);
    }
    VectorField::new(n, comps).expect("constructed with 2n components")
}

/// Compute every pairwise commutator and compare against the printed
/// algebra. The `(1, 5)` row is evaluated once per documented reading and
/// each outcome is recorded; nothing about that row is assumed.
pub fn commutator_table(cfg: LatticeConfig) -> Vec<RelationCheck> {
    let n = cfg.n();
    let eta: Vec<VectorField> = (1..=5)
        .map(|k| symmetry_field(cfg, k).expect("kind in range"))
        .collect();
    let mut out = Vec::new();
    for m in 1..=5usize {
        for k in 1..=5usize {
            let actual = lie_bracket(&eta[m - 1], &eta[k - 1]);
            if (m, k) == (1, 5) || (m, k) == (5, 1) {
                let mut readings: Vec<Eta15Reading> =
                    (1..=n).map(Eta15Reading::FixedJ).collect();
                readings.push(Eta15Reading::ComponentIndex);
                readings.push(Eta15Reading::SummedJ);
                let mut fixed_all = true;
                for reading in readings {
                    let mut rhs = eta15_rhs(cfg, reading);
                    if (m, k) == (5, 1) {
                        rhs = rhs.scale_rat(&rat(-1, 1));
                    }
                    let check = RelationCheck::from_residual(
                        format!("[eta{m},eta{k}] (reading: {})", reading.label()),
                        n,
                        field_residual(&actual, &rhs),
                    );
                    if let Eta15Reading::FixedJ(_) = reading {
                        fixed_all &= check.passed;
                    }
                    out.push(check);
                }
                out.push(RelationCheck {
                    relation: format!("[eta{m},eta{k}] (reading: every fixed j)"),
                    n,
                    passed: fixed_all,
                    residual: Vec::new(),
                });
                continue;
            }
            let (lo, hi, sign) = if m <= k { (m, k, 1) } else { (k, m, -1) };
            let mut expected = table_rhs(cfg, lo, hi).expect("(1,5) handled above");
            if sign < 0 {
                expected = expected.scale_rat(&rat(-1, 1));
            }
            let label = if expected.is_zero() {
                format!("[eta{m},eta{k}] = 0")
            } else {
                format!("[eta{m},eta{k}] = table rhs")
            };
            out.push(RelationCheck::from_residual(
                label,
                n,
                field_residual(&actual, &expected),
            ));
        }
    }
    out
}

/// Master-equation sweep for all five fields at one lattice size.
pub fn verify_symmetries(cfg: LatticeConfig) -> Vec<RelationCheck> {
    let f = crate::lattice::flow_field(cfg);
    (1..=5)
        .map(|kind| {
            let eta = symmetry_field(cfg, kind).expect("kind in range");
            let res = master_residual(&eta, &f);
            RelationCheck::from_residual(
                format!("master(eta{kind})"),
                cfg.n(),
                res.components().to_vec(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::flow_field;

    fn cfg(n: usize) -> LatticeConfig {
        LatticeConfig::new(n).unwrap()
    }

    fn eta(n: usize, k: usize) -> VectorField {
        symmetry_field(cfg(n), k).unwrap()
    }

    #[test]
    fn eta1_n2_matches_printed_components() {
        let e = eta(2, 1);
        let expected = [
            "2*x3 + 1/2*x4 + t/2*(x3^2 + E1)",
            "x4 - 1/2*x3 + t/2*(x4^2 + E1)",
            "1/2*x3^2 - E1 - t/2*(x3 + x4)*E1",
            "1/2*x4^2 + 2*E1 + t/2*(x3 + x4)*E1",
        ];
        for (a, s) in expected.iter().enumerate() {
            assert_eq!(e.component(a + 1), &Expr::parse(2, s).unwrap(), "a={}", a + 1);
        }
    }

    #[test]
    fn eta1_n3_matches_printed_components() {
        let e = eta(3, 1);
        let expected = [
            "3*x4 + 1/2*x5 + 1/2*x6 + t/2*(x4^2 + E1)",
            "2*x5 - 1/2*x4 + 1/2*x6 + t/2*(x5^2 + E1 + E2)",
            "x6 - 1/2*x4 - 1/2*x5 + t/2*(x6^2 + E2)",
            "1/2*x4^2 - 2*E1 - t/2*(x4 + x5)*E1",
            "1/2*x5^2 + 3*E1 - E2 + t/2*(x4 + x5)*E1 - t/2*(x5 + x6)*E2",
            "1/2*x6^2 + 2*E2 + t/2*(x5 + x6)*E2",
        ];
        for (a, s) in expected.iter().enumerate() {
            assert_eq!(e.component(a + 1), &Expr::parse(3, s).unwrap(), "a={}", a + 1);
        }
    }

    #[test]
    fn eta2_component_example() {
        let e = eta(3, 2);
        assert_eq!(e.component(2), &Expr::parse(3, "2 - t/2*x5").unwrap());
    }

    #[test]
    fn eta3_eta4_closed_forms() {
        let e3 = eta(4, 3);
        let e4 = eta(4, 4);
        for j in 1..=4 {
            assert_eq!(e3.component(j), &Expr::time(4));
            assert_eq!(e3.component(4 + j), &Expr::one(4));
            assert_eq!(e4.component(j), &Expr::one(4));
            assert!(e4.component(4 + j).is_zero());
        }
    }

    #[test]
    fn invalid_kind_rejected() {
        assert!(symmetry_field(cfg(2), 0).is_err());
        assert!(symmetry_field(cfg(2), 6).is_err());
    }

    #[test]
    fn master_equation_holds_for_all_fields() {
        for n in 2..=5 {
            let f = flow_field(cfg(n));
            for kind in 1..=5 {
                let res = master_residual(&eta(n, kind), &f);
                assert!(res.is_zero(), "eta{kind} fails at n={n}: {res:?}");
            }
        }
    }

    #[test]
    fn perturbed_field_fails_master_equation() {
        let n = 2;
        let f = flow_field(cfg(n));
        let mut comps: Vec<Expr> = eta(n, 3).components().to_vec();
        comps[n] = Expr::integer(n, 2); // overwrite eta^{n+1}
        let bad = VectorField::new(n, comps).unwrap();
        let res = master_residual(&bad, &f);
        assert!(!res.component(1).is_zero());
    }

    #[test]
    fn eta1_momentum_components_are_flow_derivatives() {
        // eta^{n+j} = d eta^j/dt + sum_a d eta^j/dx^a f^a, exactly
        for n in 2..=4 {
            let f = flow_field(cfg(n));
            let e = eta(n, 1);
            for j in 1..=n {
                let mut total = e.component(j).diff(Var::T);
                for a in 1..=2 * n {
                    total = total + e.component(j).diff(Var::X(a)) * f.component(a);
                }
                assert_eq!(&total, e.component(n + j), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn lie_bracket_is_antisymmetric() {
        let n = 3;
        for m in 1..=5 {
            for k in 1..=5 {
                let ab = lie_bracket(&eta(n, m), &eta(n, k));
                let ba = lie_bracket(&eta(n, k), &eta(n, m));
                assert_eq!(ab, ba.scale_rat(&rat(-1, 1)));
            }
        }
    }

    #[test]
    fn bracket_examples() {
        // [eta3, eta4] = 0: both constant in x
        let n = 3;
        assert!(lie_bracket(&eta(n, 3), &eta(n, 4)).is_zero());
        // [A, A] = 0
        assert!(lie_bracket(&eta(n, 1), &eta(n, 1)).is_zero());
        // [eta1, eta2] = 1/2 eta1 across sizes
        for n in 2..=5 {
            let b = lie_bracket(&eta(n, 1), &eta(n, 2));
            assert_eq!(b, eta(n, 1).scale_rat(&rat(1, 2)), "n={n}");
        }
    }

    #[test]
    fn commutator_table_all_pass_except_eta15_readings() {
        for n in 2..=4 {
            let checks = commutator_table(cfg(n));
            for c in &checks {
                if c.relation.contains("reading") {
                    continue;
                }
                assert!(c.passed, "n={n}: {} failed: {:?}", c.relation, c.residual);
            }
            // the summed reading holds; record-only rows exist for the others
            let summed: Vec<_> = checks
                .iter()
                .filter(|c| c.relation.contains("summed over j"))
                .collect();
            assert_eq!(summed.len(), 2);
            assert!(summed.iter().all(|c| c.passed), "n={n}");
            let fixed: Vec<_> = checks
                .iter()
                .filter(|c| c.relation.contains("fixed j ="))
                .collect();
            assert_eq!(fixed.len(), 2 * n);
            assert!(fixed.iter().all(|c| !c.passed), "n={n}");
        }
    }

    #[test]
    fn jacobi_identity_for_symmetry_triples() {
        for n in 2..=3 {
            let fields: Vec<VectorField> = (1..=5).map(|k| eta(n, k)).collect();
            for a in 0..5 {
                for b in 0..5 {
                    for c in 0..5 {
                        let t1 = lie_bracket(&lie_bracket(&fields[a], &fields[b]), &fields[c]);
                        let t2 = lie_bracket(&lie_bracket(&fields[b], &fields[c]), &fields[a]);
                        let t3 = lie_bracket(&lie_bracket(&fields[c], &fields[a]), &fields[b]);
                        let sum = t1.add_field(&t2).add_field(&t3);
                        assert!(sum.is_zero(), "jacobi fails at n={n} ({a},{b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn lie_scalar_examples() {
        // L_{eta2} H0 = -H0
        for n in 2..=4 {
            let h0 = crate::lattice::hamiltonian0(cfg(n));
            let lh = lie_scalar(&eta(n, 2), &h0);
            assert_eq!(lh, h0.neg_ref(), "n={n}");
        }
        // L_{eta4} H0 = 0
        let h0 = crate::lattice::hamiltonian0(cfg(3));
        assert!(lie_scalar(&eta(3, 4), &h0).is_zero());
    }

    #[test]
    fn lie_two_form_preserves_antisymmetry() {
        let n = 2;
        let lag = crate::lattice::lagrangians(cfg(n));
        let sigma = crate::hierarchy::curl(&lag.first_order);
        let ls = lie_two_form(&eta(n, 1), &sigma);
        assert!(ls.matrix().is_antisymmetric());
    }

    #[test]
    fn verify_symmetries_reports_all_pass() {
        let checks = verify_symmetries(cfg(2));
        assert_eq!(checks.len(), 5);
        assert!(checks.iter().all(|c| c.passed));
    }
}
