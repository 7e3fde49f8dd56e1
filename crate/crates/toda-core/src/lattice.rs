//! The Toda model: flow field, base Hamiltonian, and the
//! first/second-order Lagrangian correspondence.
//!
//! Phase space is `2n`-dimensional: positions `x1..xn` followed by
//! momenta `x{n+1}..x{2n}`. The flow is
//! `dxj/dt = x{n+j}`, `dx{n+j}/dt = E{j-1} - Ej`
//! with the open-chain conventions `E0 = En = 0`.

use alloc::vec::Vec;

use crate::dynamics::Trajectory;
use crate::expr::{Expr, ExprError};
use crate::fp;
use crate::symmetry::{OneForm, VectorField};

/// Lattice size; `n >= 2` since a single particle has no interaction term.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LatticeConfig {
    n: usize,
}

impl LatticeConfig {
    pub fn new(n: usize) -> Result<Self, ExprError> {
        if n < 2 {
            return Err(ExprError::VarIndex { index: n, n });
        }
        Ok(LatticeConfig { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase_dim(&self) -> usize {
        2 * self.n
    }
}

/// A phase point: `2n` coordinates plus time.
#[derive(Clone, PartialEq, Debug)]
pub struct PhaseState {
    pub coords: Vec<f64>,
    pub time: f64,
}

impl PhaseState {
    pub fn new(coords: Vec<f64>, time: f64) -> Self {
        PhaseState { coords, time }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn eval(&self, e: &Expr) -> Result<f64, ExprError> {
        e.eval(&self.coords, self.time)
    }
}

/// Second-order configuration data `(q, qdot)`; the momentum map of the
/// model is the identity `p_j = qdot_j`.
#[derive(Clone, PartialEq, Debug)]
pub struct SecondOrderState {
    pub q: Vec<f64>,
    pub qdot: Vec<f64>,
    pub time: f64,
}

impl SecondOrderState {
    pub fn new(q: Vec<f64>, qdot: Vec<f64>, time: f64) -> Self {
        assert_eq!(q.len(), qdot.len(), "q and qdot lengths differ");
        SecondOrderState { q, qdot, time }
    }

    /// First-order phase point under `p_j = qdot_j`.
    pub fn to_phase(&self) -> PhaseState {
        let mut coords = self.q.clone();
        coords.extend_from_slice(&self.qdot);
        PhaseState::new(coords, self.time)
    }
}

/// The first-order flow field `f`: `f^j = x{n+j}`,
/// `f^{n+j} = E{j-1} - Ej`. Time-independent.
pub fn flow_field(cfg: LatticeConfig) -> VectorField {
    let n = cfg.n();
    let mut comps = Vec::with_capacity(2 * n);
    for j in 1..=n {
        comps.push(Expr::x(n, n + j).expect("momentum index in range"));
    }
    for j in 1..=n {
        let prev = Expr::e_atom(n, j - 1).expect("atom index in range");
        let next = Expr::e_atom(n, j).expect("atom index in range");
        comps.push(prev - next);
    }
    VectorField::new(n, comps).expect("2n components by construction")
}

/// The base Hamiltonian `H0 = 1/2 sum (x{n+j})^2 + sum Ej`.
pub fn hamiltonian0(cfg: LatticeConfig) -> Expr {
    let n = cfg.n();
    let mut h = Expr::zero(n);
    for j in 1..=n {
        let p = Expr::x(n, n + j).expect("momentum index in range");
        h = h + p.pow(2).scale(&num_rational::BigRational::new(1.into(), 2.into()));
    }
    for j in 1..n {
        h = h + Expr::e_atom(n, j).expect("atom index in range");
    }
    h
}

/// Total momentum `P = sum x{n+j}`, conserved by the flow.
pub fn total_momentum(cfg: LatticeConfig) -> Expr {
    let n = cfg.n();
    let mut p = Expr::zero(n);
    for j in 1..=n {
        p = p + Expr::x(n, n + j).expect("momentum index in range");
    }
    p
}

/// The two Lagrangian presentations of the model.
pub struct Lagrangians {
    /// Second-order Lagrangian `1/2 sum qdot^2 - sum E`, with the
    /// velocities written in the upper coordinate block (`x{n+j}` stands
    /// for `qdot_j`); used for display and momentum extraction only.
    pub second_order: Expr,
    /// First-order Lagrangian `L = l_a xdot^a + l0` as a one-form with
    /// scalar part: `l_j = x{n+j}`, `l_{n+j} = 0`,
    /// `l0 = -1/2 sum (x{n+j})^2 - sum E`.
    pub first_order: OneForm<Expr>,
}

/// Build both Lagrangians. Their Euler-Lagrange systems coincide with
/// [`flow_field`]; that equivalence is exercised in tests rather than
/// recomputed here.
pub fn lagrangians(cfg: LatticeConfig) -> Lagrangians {
    let n = cfg.n();
    let half = num_rational::BigRational::new(1.into(), 2.into());

    let mut l2 = Expr::zero(n);
    for j in 1..=n {
        let qdot = Expr::x(n, n + j).expect("velocity slot in range");
        l2 = l2 + qdot.pow(2).scale(&half);
    }
    for j in 1..n {
        l2 = l2 - Expr::e_atom(n, j).expect("atom index in range");
    }

    let mut comps = Vec::with_capacity(2 * n);
    for j in 1..=n {
        comps.push(Expr::x(n, n + j).expect("momentum index in range"));
    }
    for _ in 1..=n {
        comps.push(Expr::zero(n));
    }
    let mut l0 = Expr::zero(n);
    for j in 1..=n {
        let p = Expr::x(n, n + j).expect("momentum index in range");
        l0 = l0 - p.pow(2).scale(&half);
    }
    for j in 1..n {
        l0 = l0 - Expr::e_atom(n, j).expect("atom index in range");
    }

    Lagrangians {
        second_order: l2,
        first_order: OneForm::with_scalar(n, comps, l0).expect("2n components by construction"),
    }
}

/// On-shell value of a first-order Lagrangian at a state:
/// `sum l_a f^a + l0`.
pub fn on_shell_value(
    l: &OneForm<Expr>,
    f: &VectorField,
    state: &PhaseState,
) -> Result<f64, ExprError> {
    let mut acc = state.eval(l.scalar_part())?;
    for (la, fa) in l.components().iter().zip(f.components()) {
        acc += state.eval(la)? * state.eval(fa)?;
    }
    Ok(acc)
}

/// Euler-Lagrange residuals of the second-order equations along a
/// trajectory, one magnitude per particle per sample.
///
/// The acceleration is read from the trajectory's recorded derivatives
/// (the momentum block of `xdot`), so a trajectory built self-consistently
/// from the flow has machine-level residuals, while mismatched recorded
/// derivatives show up directly.
pub fn second_order_residual(
    cfg: LatticeConfig,
    traj: &Trajectory,
) -> Result<Vec<Vec<f64>>, ExprError> {
    let n = cfg.n();
    if traj.dim() != 2 * n {
        return Err(ExprError::StateLength {
            expected: 2 * n,
            got: traj.dim(),
        });
    }
    let mut out = Vec::with_capacity(traj.len());
    for (state, deriv) in traj.samples() {
        let mut per_particle = Vec::with_capacity(n);
        for k in 1..=n {
            let qddot = deriv[n + k - 1];
            let prev = Expr::e_atom(n, k - 1).expect("atom index in range");
            let next = Expr::e_atom(n, k).expect("atom index in range");
            let rhs = state.eval(&prev)? - state.eval(&next)?;
            per_particle.push(fp::abs(qddot - rhs));
        }
        out.push(per_particle);
    }
    Ok(out)
}
