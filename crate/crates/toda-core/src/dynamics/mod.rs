//! Numeric integration of the flow and trajectory-level verification:
//! conservation drift, first-order symmetry transport, and isospectral
//! drift of the strong-symmetry matrix.

pub mod eig;

use alloc::vec;
use alloc::vec::Vec;

use crate::expr::{CompiledExpr, CompiledRational, Expr, ExprError, RationalExpr};
use crate::fp;
use crate::lattice::{flow_field, LatticeConfig, PhaseState};
use crate::matrix::Matrix;
use crate::symmetry::VectorField;

/// Errors from integration and trajectory checks.
#[derive(Clone, Debug, PartialEq)]
pub enum DynamicsError {
    Expr(ExprError),
    /// The adaptive controller shrank the step below `1e-12 * T`.
    StepUnderflow { t: f64 },
    /// The state left the representable range.
    NonFinite { t: f64 },
    /// Every sample hit a singular denominator.
    AllSamplesSingular,
    /// A nonpositive horizon, tolerance or step size.
    BadInput(&'static str),
}

impl From<ExprError> for DynamicsError {
    fn from(e: ExprError) -> Self {
        DynamicsError::Expr(e)
    }
}

impl core::fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DynamicsError::Expr(e) => write!(f, "{e}"),
            DynamicsError::StepUnderflow { t } => {
                write!(f, "step size underflow near t = {t}: problem too stiff")
            }
            DynamicsError::NonFinite { t } => write!(f, "non-finite state near t = {t}"),
            DynamicsError::AllSamplesSingular => {
                write!(f, "every sample evaluated a singular denominator")
            }
            DynamicsError::BadInput(what) => write!(f, "invalid input: {what}"),
        }
    }
}

impl core::error::Error for DynamicsError {}

/// Integration method selector.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Integrator {
    /// Classic fixed-step fourth-order Runge-Kutta; used for convergence
    /// checks.
    Rk4 { step: f64 },
    /// Dormand-Prince 5(4) embedded pair with absolute local error
    /// control at `tol` and step halving on rejection.
    Rk45 { tol: f64 },
}

/// Step-count bookkeeping for a run.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// A time-ordered sequence of phase states with the flow derivative
/// recorded at every sample.
#[derive(Clone, Debug)]
pub struct Trajectory {
    states: Vec<PhaseState>,
    derivs: Vec<Vec<f64>>,
    pub method: Integrator,
    pub stats: IntegrationStats,
}

impl Trajectory {
    /// Wrap explicit samples; times must be strictly increasing.
    pub fn from_samples(states: Vec<PhaseState>, derivs: Vec<Vec<f64>>) -> Self {
        assert_eq!(states.len(), derivs.len(), "one derivative per sample");
        assert!(!states.is_empty(), "empty trajectory");
        for pair in states.windows(2) {
            assert!(pair[0].time < pair[1].time, "times must increase strictly");
        }
        Trajectory {
            method: Integrator::Rk4 { step: 0.0 },
            stats: IntegrationStats::default(),
            states,
            derivs,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn state(&self, i: usize) -> &PhaseState {
        &self.states[i]
    }

    pub fn states(&self) -> &[PhaseState] {
        &self.states
    }

    pub fn final_state(&self) -> &PhaseState {
        self.states.last().expect("non-empty by construction")
    }

    pub fn samples(&self) -> impl Iterator<Item = (&PhaseState, &[f64])> {
        self.states
            .iter()
            .zip(self.derivs.iter().map(|d| d.as_slice()))
    }
}

struct Rhs {
    comps: Vec<CompiledExpr>,
}

impl Rhs {
    fn new(cfg: LatticeConfig) -> Self {
        let f = flow_field(cfg);
        Rhs {
            comps: f.components().iter().map(Expr::compile).collect(),
        }
    }

    fn eval(&self, y: &[f64], t: f64, out: &mut [f64]) -> Result<(), DynamicsError> {
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = c.eval(y, t)?;
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights are the last tableau row (FSAL); these are the
// error coefficients b5 - b4
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate the Toda flow from `x0` over a horizon `t_span`.
pub fn integrate(
    cfg: LatticeConfig,
    x0: &PhaseState,
    t_span: f64,
    method: Integrator,
) -> Result<Trajectory, DynamicsError> {
    if !(t_span > 0.0) {
        return Err(DynamicsError::BadInput("horizon must be positive"));
    }
    let dim = cfg.phase_dim();
    if x0.dim() != dim {
        return Err(DynamicsError::Expr(ExprError::StateLength {
            expected: dim,
            got: x0.dim(),
        }));
    }
    match method {
        Integrator::Rk4 { step } => {
            if !(step > 0.0) {
                return Err(DynamicsError::BadInput("step must be positive"));
            }
            integrate_rk4_impl(cfg, x0, t_span, step)
        }
        Integrator::Rk45 { tol } => {
            if !(tol > 0.0) {
                return Err(DynamicsError::BadInput("tolerance must be positive"));
            }
            integrate_rk45_impl(cfg, x0, t_span, tol)
        }
    }
}

/// Adaptive Dormand-Prince run at absolute local tolerance `tol`.
pub fn integrate_rk45(
    cfg: LatticeConfig,
    x0: &PhaseState,
    t_span: f64,
    tol: f64,
) -> Result<Trajectory, DynamicsError> {
    integrate(cfg, x0, t_span, Integrator::Rk45 { tol })
}

/// Fixed-step classic Runge-Kutta run.
pub fn integrate_rk4(
    cfg: LatticeConfig,
    x0: &PhaseState,
    t_span: f64,
    step: f64,
) -> Result<Trajectory, DynamicsError> {
    integrate(cfg, x0, t_span, Integrator::Rk4 { step })
}

fn check_finite(y: &[f64], t: f64) -> Result<(), DynamicsError> {
    if y.iter().any(|v| !v.is_finite()) {
        return Err(DynamicsError::NonFinite { t });
    }
    Ok(())
}

fn integrate_rk45_impl(
    cfg: LatticeConfig,
    x0: &PhaseState,
    t_span: f64,
    tol: f64,
) -> Result<Trajectory, DynamicsError> {
    let dim = cfg.phase_dim();
    let rhs = Rhs::new(cfg);
    let t_end = x0.time + t_span;
    let mut stats = IntegrationStats::default();

    let mut t = x0.time;
    let mut y = x0.coords.clone();
    let mut k: [Vec<f64>; 7] = core::array::from_fn(|_| vec![0.0; dim]);
    rhs.eval(&y, t, &mut k[0])?;
    stats.rhs_evals += 1;

    let mut states = vec![x0.clone()];
    let mut derivs = vec![k[0].clone()];

    let mut h = fp::min(0.01, t_span / 10.0);
    let min_step = 1e-12 * t_span;
    let mut y_try = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];

    while t < t_end - 1e-14 * t_span {
        if h < min_step {
            return Err(DynamicsError::StepUnderflow { t });
        }
        if t + h > t_end {
            h = t_end - t;
        }
        // stages 2..7; stage 7 is the FSAL evaluation at the candidate
        for stage in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = DP_A[stage][j];
                    if a != 0.0 {
                        acc += h * a * kj[i];
                    }
                }
                y_try[i] = acc;
            }
            if stage == 6 {
                y_new.copy_from_slice(&y_try);
            }
            let (head, tail) = k.split_at_mut(stage);
            let _ = head;
            rhs.eval(&y_try, t + DP_C[stage] * h, &mut tail[0])?;
            stats.rhs_evals += 1;
        }
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                if DP_E[j] != 0.0 {
                    acc += DP_E[j] * kj[i];
                }
            }
            err = fp::max(err, fp::abs(h * acc));
        }
        if err <= tol {
            t += h;
            y.copy_from_slice(&y_new);
            check_finite(&y, t)?;
            let k7 = k[6].clone();
            k[0].copy_from_slice(&k7);
            states.push(PhaseState::new(y.clone(), t));
            derivs.push(k7);
            stats.accepted += 1;
            let factor = if err == 0.0 {
                2.0
            } else {
                fp::min(2.0, fp::max(0.5, 0.9 * fp::powf(tol / err, 0.2)))
            };
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= 0.5;
        }
    }

    Ok(Trajectory {
        states,
        derivs,
        method: Integrator::Rk45 { tol },
        stats,
    })
}

fn integrate_rk4_impl(
    cfg: LatticeConfig,
    x0: &PhaseState,
    t_span: f64,
    step: f64,
) -> Result<Trajectory, DynamicsError> {
    let dim = cfg.phase_dim();
    let rhs = Rhs::new(cfg);
    let mut stats = IntegrationStats::default();
    let t_end = x0.time + t_span;

    let mut t = x0.time;
    let mut y = x0.coords.clone();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];

    rhs.eval(&y, t, &mut k1)?;
    stats.rhs_evals += 1;
    let mut states = vec![x0.clone()];
    let mut derivs = vec![k1.clone()];

    while t < t_end - 1e-14 * t_span {
        let h = fp::min(step, t_end - t);
        for i in 0..dim {
            scratch[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs.eval(&scratch, t + 0.5 * h, &mut k2)?;
        for i in 0..dim {
            scratch[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs.eval(&scratch, t + 0.5 * h, &mut k3)?;
        for i in 0..dim {
            scratch[i] = y[i] + h * k3[i];
        }
        rhs.eval(&scratch, t + h, &mut k4)?;
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        check_finite(&y, t)?;
        rhs.eval(&y, t, &mut k1)?;
        stats.rhs_evals += 4;
        stats.accepted += 1;
        states.push(PhaseState::new(y.clone(), t));
        derivs.push(k1.clone());
    }

    Ok(Trajectory {
        states,
        derivs,
        method: Integrator::Rk4 { step },
        stats,
    })
}

/// Maximum relative drift of each quantity along the trajectory:
/// `max_t |Q(t) - Q(0)| / max(1, |Q(0)|)`.
pub fn conservation_report(
    traj: &Trajectory,
    quantities: &[Expr],
) -> Result<Vec<f64>, DynamicsError> {
    let mut out = Vec::with_capacity(quantities.len());
    for q in quantities {
        if q.lattice_size() * 2 != traj.dim() {
            return Err(DynamicsError::Expr(ExprError::StateLength {
                expected: q.lattice_size() * 2,
                got: traj.dim(),
            }));
        }
        let c = q.compile();
        let q0 = c.eval(&traj.state(0).coords, traj.state(0).time)?;
        let mut drift: f64 = 0.0;
        for s in traj.states() {
            let v = c.eval(&s.coords, s.time)?;
            drift = fp::max(drift, fp::abs(v - q0));
        }
        out.push(drift / fp::max(1.0, fp::abs(q0)));
    }
    Ok(out)
}

/// Controls for the first-order transport check.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct TransportConfig {
    /// Finite transport parameter; nonzero.
    pub epsilon: f64,
    /// Integration horizon; positive.
    pub horizon: f64,
    /// Shared fixed-step accuracy target for the paired integrations.
    pub tolerance: f64,
}

impl TransportConfig {
    pub fn new(epsilon: f64, horizon: f64, tolerance: f64) -> Result<Self, DynamicsError> {
        if epsilon == 0.0 {
            return Err(DynamicsError::BadInput("epsilon must be nonzero"));
        }
        if !(horizon > 0.0) {
            return Err(DynamicsError::BadInput("horizon must be positive"));
        }
        if !(tolerance > 0.0) {
            return Err(DynamicsError::BadInput("tolerance must be positive"));
        }
        Ok(TransportConfig {
            epsilon,
            horizon,
            tolerance,
        })
    }
}

/// Outcome of the transport check.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct TransportReport {
    /// `max_t |x'(t) - x(t) - eps * eta(x(t), t)|` over the horizon.
    pub max_mismatch: f64,
    /// The same mismatch divided by `eps^2`; bounded for a true symmetry,
    /// growing like `1/eps` otherwise.
    pub mismatch_over_eps2: f64,
}

/// Integrate from `x0` and from `x0 + eps * eta(x0, t0)` on a shared
/// fixed step grid and compare the evolved difference with
/// `eps * eta(x(t), t)` along the way.
pub fn symmetry_transport_test(
    cfg: LatticeConfig,
    eta: &VectorField,
    x0: &PhaseState,
    tc: &TransportConfig,
) -> Result<TransportReport, DynamicsError> {
    let dim = cfg.phase_dim();
    if x0.dim() != dim {
        return Err(DynamicsError::Expr(ExprError::StateLength {
            expected: dim,
            got: x0.dim(),
        }));
    }
    // both runs share one fixed-step grid so their discretization errors
    // cancel in the difference
    let h = fp::min(1e-2, fp::max(1e-4, fp::powf(tc.tolerance, 0.25)));
    let eta0 = eta.eval(x0)?;
    let mut pert = x0.clone();
    for (p, e) in pert.coords.iter_mut().zip(&eta0) {
        *p += tc.epsilon * e;
    }
    let base = integrate_rk4(cfg, x0, tc.horizon, h)?;
    let shifted = integrate_rk4(cfg, &pert, tc.horizon, h)?;

    let compiled: Vec<CompiledExpr> = eta.components().iter().map(Expr::compile).collect();
    let mut max_mismatch: f64 = 0.0;
    for (s_base, s_pert) in base.states().iter().zip(shifted.states()) {
        for (a, c) in compiled.iter().enumerate() {
            let predicted = tc.epsilon * c.eval(&s_base.coords, s_base.time)?;
            let actual = s_pert.coords[a] - s_base.coords[a];
            max_mismatch = fp::max(max_mismatch, fp::abs(actual - predicted));
        }
    }
    Ok(TransportReport {
        max_mismatch,
        mismatch_over_eps2: max_mismatch / (tc.epsilon * tc.epsilon),
    })
}

/// Outcome of the isospectral check.
#[derive(Clone, Debug)]
pub struct IsospectralReport {
    /// Maximum matched-eigenvalue deviation from the first valid sample.
    pub max_drift: f64,
    /// Samples skipped because a denominator was singular there.
    pub skipped: usize,
    /// Reference spectrum at the first valid sample, `(re, im)` pairs.
    pub reference: Vec<(f64, f64)>,
}

/// Eigenvalues of the matrix evaluated along the trajectory, matched
/// greedily to the reference spectrum by complex distance (ties broken
/// by index order); reports the maximum deviation.
pub fn isospectral_drift(
    traj: &Trajectory,
    lambda: &Matrix<RationalExpr>,
) -> Result<IsospectralReport, DynamicsError> {
    let dim = traj.dim();
    assert_eq!(lambda.rows(), dim, "matrix dimension mismatch");
    let compiled: Vec<CompiledRational> = (0..dim)
        .flat_map(|r| (0..dim).map(move |c| (r, c)))
        .map(|(r, c)| lambda.at(r, c).compile())
        .collect();

    let mut reference: Option<Vec<(f64, f64)>> = None;
    let mut skipped = 0usize;
    let mut max_drift: f64 = 0.0;
    let mut values = vec![0.0; dim * dim];

    'samples: for s in traj.states() {
        for (slot, c) in values.iter_mut().zip(&compiled) {
            match c.eval(&s.coords, s.time) {
                Ok(v) => *slot = v,
                Err(ExprError::SingularEvaluation) => {
                    skipped += 1;
                    continue 'samples;
                }
                Err(e) => return Err(DynamicsError::Expr(e)),
            }
        }
        let eigs = eig::eigenvalues(&values, dim);
        match &reference {
            None => reference = Some(eigs),
            Some(reference) => {
                let mut used = vec![false; eigs.len()];
                for r in reference {
                    let mut best = None;
                    let mut best_dist = f64::INFINITY;
                    for (i, e) in eigs.iter().enumerate() {
                        if used[i] {
                            continue;
                        }
                        let dist = fp::hypot(e.0 - r.0, e.1 - r.1);
                        if dist < best_dist {
                            best_dist = dist;
                            best = Some(i);
                        }
                    }
                    let i = best.expect("one eigenvalue per reference entry");
                    used[i] = true;
                    max_drift = fp::max(max_drift, best_dist);
                }
            }
        }
    }

    match reference {
        Some(reference) => Ok(IsospectralReport {
            max_drift,
            skipped,
            reference,
        }),
        None => Err(DynamicsError::AllSamplesSingular),
    }
}
