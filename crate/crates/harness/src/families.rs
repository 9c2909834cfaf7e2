//! Randomized and fixed instance families used by scenarios and the
//! reproduction suite.
//!
//! All randomness flows through [`SplitMix64`] so a (config, seed) pair
//! pins every byte of the outputs; the generator itself is documented in
//! the crate README and in `statedist::rng`.

use num_complex::Complex64;
use statedist::classical::{DiscreteMeasure, FiniteMetricSpace};
use statedist::numlin::{ComplexMatrix, HermitianElement};
use statedist::quantum::DensityMatrix;
use statedist::rng::SplitMix64;
use std::sync::Arc;

/// Random points in the plane with Euclidean distances; rejection keeps the
/// points separated so the Lipschitz programs stay well scaled.
pub fn random_space(rng: &mut SplitMix64, points: usize) -> Arc<FiniteMetricSpace> {
    loop {
        let coords: Vec<(f64, f64)> = (0..points)
            .map(|_| (rng.next_range(0.0, 4.0), rng.next_range(0.0, 4.0)))
            .collect();
        let mut rho = vec![vec![0.0; points]; points];
        let mut separated = true;
        for i in 0..points {
            for j in (i + 1)..points {
                let dx = coords[i].0 - coords[j].0;
                let dy = coords[i].1 - coords[j].1;
                let d = (dx * dx + dy * dy).sqrt();
                if d < 5e-2 {
                    separated = false;
                }
                rho[i][j] = d;
                rho[j][i] = d;
            }
        }
        if !separated {
            continue;
        }
        let labels = (0..points).map(|i| format!("p{i}")).collect();
        return Arc::new(FiniteMetricSpace::new(labels, rho).expect("euclidean distances"));
    }
}

pub fn random_state(rng: &mut SplitMix64, space: &Arc<FiniteMetricSpace>) -> DiscreteMeasure {
    let raw: Vec<f64> = (0..space.len()).map(|_| rng.next_f64() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    DiscreteMeasure::new(space.clone(), weights).expect("normalized weights")
}

pub fn random_hermitian(rng: &mut SplitMix64, dim: usize) -> HermitianElement {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(rng.next_sym(), 0.0));
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.next_sym(), rng.next_sym());
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianElement::new(m).expect("hermitian by construction")
}

pub fn random_density(rng: &mut SplitMix64, dim: usize) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(i, j, Complex64::new(rng.next_sym(), rng.next_sym()));
        }
    }
    let gram = g.adjoint().mul(&g);
    let trace = gram.trace().re;
    let normalized = gram.scale_re(1.0 / trace);
    DensityMatrix::new(HermitianElement::new(normalized).expect("gram matrices are hermitian"))
        .expect("normalized gram matrix is a state")
}

/// The fixed test-space suite used by closed-form acceptance checks: a far
/// pair, a short pair, a line, a right triangle and two seeded Euclidean
/// clouds.
pub fn test_spaces() -> Vec<Arc<FiniteMetricSpace>> {
    let mut spaces: Vec<Arc<FiniteMetricSpace>> = Vec::new();
    spaces.push(Arc::new(
        FiniteMetricSpace::new(
            vec!["x".into(), "y".into()],
            vec![vec![0.0, 5.0], vec![5.0, 0.0]],
        )
        .unwrap(),
    ));
    spaces.push(Arc::new(
        FiniteMetricSpace::new(
            vec!["x".into(), "y".into()],
            vec![vec![0.0, 0.3], vec![0.3, 0.0]],
        )
        .unwrap(),
    ));
    spaces.push(Arc::new(
        FiniteMetricSpace::line(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap(),
    ));
    spaces.push(Arc::new(
        FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![0.0, 3.0, 4.0],
                vec![3.0, 0.0, 5.0],
                vec![4.0, 5.0, 0.0],
            ],
        )
        .unwrap(),
    ));
    let mut rng = SplitMix64::new(0x5eed_0001);
    spaces.push(random_space(&mut rng, 4));
    spaces.push(random_space(&mut rng, 6));
    spaces
}
