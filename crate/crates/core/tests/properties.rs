//! Property-based invariants over randomly generated inputs.

use proptest::prelude::*;
use statedist::classical::{bl_distance, DiscreteMeasure, FiniteMetricSpace};
use statedist::lp::{lp_solve, LinearProgram};
use statedist::numlin::{
    clip_spectral, hermitian_eig, operator_norm, ComplexMatrix, HermitianElement,
};
use statedist::SolverConfig;
use std::sync::Arc;

fn hermitian_strategy(dim: usize) -> impl Strategy<Value = HermitianElement> {
    let entries = dim * dim;
    prop::collection::vec(-5.0f64..5.0, entries * 2).prop_map(move |vals| {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, num_complex::Complex64::new(vals[i * dim + i], 0.0));
            for j in (i + 1)..dim {
                let z = num_complex::Complex64::new(vals[i * dim + j], vals[entries + i * dim + j]);
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        HermitianElement::new(m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(m in hermitian_strategy(4)) {
        let eig = hermitian_eig(&m);
        let residual = eig.reconstruct().sub(m.matrix()).frobenius_norm();
        prop_assert!(residual <= 1e-10 * 4.0 * (1.0 + m.matrix().frobenius_norm()));
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn clip_is_idempotent_and_feasible(m in hermitian_strategy(3), r in 0.1f64..3.0) {
        let once = clip_spectral(&m, r).unwrap();
        prop_assert!(operator_norm(once.matrix()) <= r + 1e-10);
        let twice = clip_spectral(&once, r).unwrap();
        prop_assert!(once.sub(&twice).matrix().frobenius_norm() <= 1e-12);
        if operator_norm(m.matrix()) <= r {
            prop_assert_eq!(&once, &m);
        }
    }

    #[test]
    fn cstar_identity(m in hermitian_strategy(4)) {
        let norm = operator_norm(m.matrix());
        let gram = operator_norm(&m.matrix().adjoint().mul(m.matrix()));
        prop_assert!((gram - norm * norm).abs() <= 1e-9 * (1.0 + norm * norm));
    }

    #[test]
    fn lp_objective_scaling(scale in 0.1f64..20.0, c0 in -1.0f64..1.0, c1 in -1.0f64..1.0) {
        let mut p = LinearProgram::new(vec![c0, c1]);
        p.push_abs_le(vec![1.0, 0.0], 1.0);
        p.push_abs_le(vec![0.0, 1.0], 1.0);
        p.push_abs_le(vec![1.0, -1.0], 1.2);
        let config = SolverConfig::default();
        let base = lp_solve(&p, &config).unwrap().optimal_value;
        let mut scaled = p.clone();
        for c in scaled.objective.iter_mut() { *c *= scale; }
        let val = lp_solve(&scaled, &config).unwrap().optimal_value;
        prop_assert!((val - scale * base).abs() <= 1e-12 * (1.0 + (scale * base).abs()));
    }

    #[test]
    fn point_mass_distance_closed_form(
        rho in 0.05f64..10.0,
        alpha in 0.1f64..3.0,
        beta in 0.1f64..3.0,
    ) {
        let space = Arc::new(FiniteMetricSpace::new(
            vec!["x".into(), "y".into()],
            vec![vec![0.0, rho], vec![rho, 0.0]],
        ).unwrap());
        let dx = DiscreteMeasure::dirac(space.clone(), 0).unwrap();
        let dy = DiscreteMeasure::dirac(space.clone(), 1).unwrap();
        let d = bl_distance(&dx, &dy, alpha, beta).unwrap().value;
        let expected = (2.0 * alpha).min(beta * rho);
        prop_assert!((d - expected).abs() <= 1e-9 * (1.0 + expected));
    }

    #[test]
    fn bl_symmetric_under_swap(
        w0 in 0.01f64..1.0,
        w1 in 0.01f64..1.0,
        rho in 0.1f64..5.0,
    ) {
        let space = Arc::new(FiniteMetricSpace::new(
            vec!["x".into(), "y".into()],
            vec![vec![0.0, rho], vec![rho, 0.0]],
        ).unwrap());
        let total = w0 + w1;
        let mu = DiscreteMeasure::new(space.clone(), vec![w0 / total, w1 / total]).unwrap();
        let nu = DiscreteMeasure::new(space.clone(), vec![w1 / total, w0 / total]).unwrap();
        let ab = bl_distance(&mu, &nu, 1.0, 1.0).unwrap().value;
        let ba = bl_distance(&nu, &mu, 1.0, 1.0).unwrap().value;
        prop_assert!((ab - ba).abs() <= 1e-9);
    }
}
