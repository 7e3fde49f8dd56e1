//! Structural identities of the hierarchy: closedness, time
//! independence, equations-of-motion equivalence, conservation, Poisson
//! consistency, the recursion-matrix transport equation, and the
//! inverse-symmetry relation.

use toda_core::expr::{Expr, RationalExpr, Scalar, Var};
use toda_core::hierarchy::{
    base_level, build_upward, downward_level, jacobi_residuals, poisson_matrix, strong_symmetry,
    HierarchyLevel,
};
use toda_core::lattice::{flow_field, hamiltonian0, LatticeConfig};
use toda_core::symmetry::{
    lie_covector, lie_mixed, lie_scalar, lie_two_form, symmetry_field, OneForm,
};

fn cfg(n: usize) -> LatticeConfig {
    LatticeConfig::new(n).unwrap()
}

fn upward(n: usize, levels: usize) -> Vec<HierarchyLevel> {
    let eta1 = symmetry_field(cfg(n), 1).unwrap();
    build_upward(cfg(n), &eta1, levels).unwrap()
}

#[test]
fn curl_produced_brackets_are_closed() {
    // sigma_{ab,c} + sigma_{bc,a} + sigma_{ca,b} = 0 for k = 0..3, n = 2, 3
    for n in 2..=3 {
        let levels = upward(n, 3);
        for level in &levels {
            for a in 1..=2 * n {
                for b in 1..=2 * n {
                    for c in 1..=2 * n {
                        let cyc = level.sigma.at(a, b).diff(Var::X(c))
                            + level.sigma.at(b, c).diff(Var::X(a))
                            + level.sigma.at(c, a).diff(Var::X(b));
                        assert!(cyc.is_zero(), "n={n} k={} ({a},{b},{c})", level.k);
                    }
                }
            }
        }
    }
}

#[test]
fn brackets_are_time_independent_up_to_level_two() {
    for n in 2..=3 {
        let levels = upward(n, 2);
        for level in &levels {
            for a in 1..=2 * n {
                for b in 1..=2 * n {
                    assert!(
                        level.sigma.at(a, b).diff(Var::T).is_zero(),
                        "n={n} k={} ({a},{b})",
                        level.k
                    );
                }
            }
        }
    }
}

#[test]
fn equations_of_motion_agree_at_every_level() {
    // sigma^(k) f + grad H^(k) = 0 exactly for k = 0..3 at n = 2
    let n = 2;
    let f = flow_field(cfg(n));
    let levels = upward(n, 3);
    for level in &levels {
        let h = level.hamiltonian.as_ref().unwrap();
        let sf = level.sigma.matrix().mul_vec(f.components());
        for a in 1..=2 * n {
            let residual = sf[a - 1].clone() + h.diff(Var::X(a));
            assert!(residual.is_zero(), "k={} a={a}: {residual}", level.k);
        }
    }

    // and for k = -1 with fraction-field entries
    let lambda = strong_symmetry(&levels[1].sigma, &levels[0].sigma).unwrap();
    let down = downward_level(&lambda, &levels[0].sigma, cfg(n)).unwrap();
    let fv: Vec<RationalExpr> = f
        .components()
        .iter()
        .cloned()
        .map(RationalExpr::from)
        .collect();
    let sf = down.sigma.matrix().mul_vec(&fv);
    for a in 1..=2 * n {
        let residual = sf[a - 1].clone() + RationalExpr::from(down.hamiltonian.diff(Var::X(a)));
        assert!(Scalar::is_zero(&residual), "k=-1 a={a}");
    }
}

#[test]
fn every_hamiltonian_is_conserved_by_the_flow() {
    // sum_a dH^(k)/dx^a f^a = 0 exactly for k = -1..3 at n = 2
    let n = 2;
    let f = flow_field(cfg(n));
    let levels = upward(n, 3);
    let lambda = strong_symmetry(&levels[1].sigma, &levels[0].sigma).unwrap();
    let down = downward_level(&lambda, &levels[0].sigma, cfg(n)).unwrap();

    let mut hamiltonians: Vec<(i32, Expr)> = vec![(-1, down.hamiltonian.clone())];
    for level in &levels {
        hamiltonians.push((level.k, level.hamiltonian.clone().unwrap()));
    }
    for (k, h) in hamiltonians {
        let mut dot = Expr::zero(n);
        for a in 1..=2 * n {
            dot = dot + h.diff(Var::X(a)) * f.component(a);
        }
        assert!(dot.is_zero(), "k={k}: {dot}");
    }
}

#[test]
fn poisson_matrices_satisfy_jacobi() {
    let n = 2;
    let levels = upward(n, 2);

    // exact for J^(0) and J^(1)
    for level in levels.iter().take(2) {
        let j = poisson_matrix(&level.sigma).unwrap();
        for (a, b, c, res) in jacobi_residuals(&j) {
            assert!(Scalar::is_zero(&res), "k={} ({a},{b},{c})", level.k);
        }
    }

    // numeric for J^(2): |residual| < 1e-9 at 100 pseudo-random states
    let j2 = poisson_matrix(&levels[2].sigma).unwrap();
    let residuals = jacobi_residuals(&j2);
    let mut seed = 0x5eed_cafe_u64;
    let mut next = || {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((seed >> 33) as f64) / (u32::MAX as f64) - 0.5
    };
    for _ in 0..100 {
        let coords: Vec<f64> = (0..2 * n).map(|_| 2.0 * next()).collect();
        let t = next();
        for (a, b, c, res) in &residuals {
            let v = res.eval(&coords, t).unwrap();
            assert!(
                v.abs() < 1e-9,
                "J2 jacobi residual ({a},{b},{c}) = {v} at {coords:?}"
            );
        }
    }
}

#[test]
fn recursion_matrix_satisfies_its_transport_equation() {
    // L_f Lambda + dLambda/dt = 0 with the mixed-tensor Lie rule, n = 2
    let n = 2;
    let f = flow_field(cfg(n));
    let levels = upward(n, 1);
    let lambda = levels[1].lambda.as_ref().unwrap();
    let transported = lie_mixed(&f, lambda);
    for a in 0..2 * n {
        for b in 0..2 * n {
            let res = transported.at(a, b).clone() + lambda.at(a, b).diff(Var::T);
            assert!(Scalar::is_zero(&res), "({a},{b})");
        }
    }
}

#[test]
fn scaling_field_alternates_the_hamiltonian() {
    // applying L_{eta2} m times to H0 gives (-1)^m H0, m = 1..4
    for n in 2..=3 {
        let eta2 = symmetry_field(cfg(n), 2).unwrap();
        let h0 = hamiltonian0(cfg(n));
        let mut h = h0.clone();
        for m in 1..=4 {
            h = lie_scalar(&eta2, &h);
            let expected = if m % 2 == 1 { h0.neg_ref() } else { h0.clone() };
            assert_eq!(h, expected, "n={n} m={m}");
        }
    }
}

#[test]
fn lie_derivative_commutes_with_curl() {
    // curl(L_X l) = L_X curl(l) on the base one-form with X the first
    // symmetry field, n = 2, 3
    for n in 2..=3 {
        let eta1 = symmetry_field(cfg(n), 1).unwrap();
        let base = base_level(cfg(n)).unwrap();
        let f = flow_field(cfg(n));

        let lifted_comps = lie_covector(&eta1, base.l.components());
        let lifted = OneForm::with_flow(n, lifted_comps, &f).unwrap();
        let curl_of_lifted = toda_core::hierarchy::curl(&lifted);
        let lifted_curl = lie_two_form(&eta1, &base.sigma);
        assert_eq!(curl_of_lifted.matrix(), lifted_curl.matrix(), "n={n}");
    }
}

#[test]
fn inverse_symmetry_relation_across_sizes() {
    // sigma0 = L_{eta3} L_{eta1} sigma0 exactly for n = 2..5
    for n in 2..=5 {
        let base = base_level(cfg(n)).unwrap();
        let eta1 = symmetry_field(cfg(n), 1).unwrap();
        let eta3 = symmetry_field(cfg(n), 3).unwrap();
        let checks = toda_core::hierarchy::inverse_symmetry_check(&eta3, &eta1, &base.sigma);
        for c in &checks {
            assert!(c.passed, "n={n}: {} {:?}", c.relation, c.residual);
        }
    }
}

#[test]
fn annihilating_field_kills_the_level_and_energy() {
    for n in 2..=4 {
        let eta4 = symmetry_field(cfg(n), 4).unwrap();
        let base = base_level(cfg(n)).unwrap();
        let lifted = lie_covector(&eta4, base.l.components());
        assert!(lifted.iter().all(Expr::is_zero), "n={n}");
        assert!(lie_scalar(&eta4, &hamiltonian0(cfg(n))).is_zero(), "n={n}");
    }
}

#[test]
fn master_equation_sweep_full_range() {
    // all five fields, n = 2..6
    for n in 2..=6 {
        let checks = toda_core::symmetry::verify_symmetries(cfg(n));
        for c in &checks {
            assert!(c.passed, "n={n}: {}", c.relation);
        }
    }
}

#[test]
fn commutator_sweep_full_range() {
    for n in 2..=6 {
        let checks = toda_core::symmetry::commutator_table(cfg(n));
        for c in &checks {
            if c.relation.contains("reading") {
                continue;
            }
            assert!(c.passed, "n={n}: {}", c.relation);
        }
        assert!(
            checks
                .iter()
                .filter(|c| c.relation.contains("summed over j"))
                .all(|c| c.passed),
            "n={n}: summed reading should hold"
        );
    }
}
