//! Shared generators for the integration suites. Everything is driven by the
//! fixed SplitMix64 stream so failures reproduce exactly.

use statedist::classical::{DiscreteMeasure, FiniteMetricSpace};
use statedist::lp::LinearProgram;
use statedist::numlin::{ComplexMatrix, HermitianElement};
use statedist::quantum::DensityMatrix;
use statedist::rng::SplitMix64;
use std::sync::Arc;

/// Random points in the plane; Euclidean distances always satisfy the
/// triangle inequality. Rejection keeps points separated.
pub fn random_space(rng: &mut SplitMix64, points: usize) -> Arc<FiniteMetricSpace> {
    loop {
        let coords: Vec<(f64, f64)> = (0..points)
            .map(|_| (rng.next_range(0.0, 4.0), rng.next_range(0.0, 4.0)))
            .collect();
        let mut rho = vec![vec![0.0; points]; points];
        let mut ok = true;
        for i in 0..points {
            for j in (i + 1)..points {
                let dx = coords[i].0 - coords[j].0;
                let dy = coords[i].1 - coords[j].1;
                let d = (dx * dx + dy * dy).sqrt();
                if d < 1e-2 {
                    ok = false;
                }
                rho[i][j] = d;
                rho[j][i] = d;
            }
        }
        if !ok {
            continue;
        }
        let labels = (0..points).map(|i| format!("p{i}")).collect();
        return Arc::new(FiniteMetricSpace::new(labels, rho).unwrap());
    }
}

pub fn random_state(rng: &mut SplitMix64, space: &Arc<FiniteMetricSpace>) -> DiscreteMeasure {
    let raw: Vec<f64> = (0..space.len()).map(|_| rng.next_f64() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    DiscreteMeasure::new(space.clone(), weights).unwrap()
}

pub fn random_hermitian(rng: &mut SplitMix64, dim: usize) -> HermitianElement {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m.set(i, i, num_complex::Complex64::new(rng.next_sym(), 0.0));
        for j in (i + 1)..dim {
            let z = num_complex::Complex64::new(rng.next_sym(), rng.next_sym());
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianElement::new(m).unwrap()
}

pub fn random_density(rng: &mut SplitMix64, dim: usize) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g.set(i, j, num_complex::Complex64::new(rng.next_sym(), rng.next_sym()));
        }
    }
    let gram = g.adjoint().mul(&g);
    let trace = gram.trace().re;
    let normalized = gram.scale_re(1.0 / trace);
    DensityMatrix::new(HermitianElement::new(normalized).unwrap()).unwrap()
}

/// Random bounded program within the enumeration oracle's size limits:
/// box bounds keep the optimum finite and the origin stays feasible.
pub fn random_bounded_program(rng: &mut SplitMix64) -> LinearProgram {
    let n = 2 + rng.next_index(3); // 2..=4 variables
    let objective: Vec<f64> = (0..n).map(|_| rng.next_sym()).collect();
    let mut p = LinearProgram::new(objective);
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        p.push_abs_le(row, rng.next_range(0.5, 2.0));
    }
    let extra = rng.next_index(((24 - 2 * n) / 2).min(4));
    for _ in 0..extra {
        let row: Vec<f64> = (0..n).map(|_| rng.next_sym()).collect();
        p.push_abs_le(row, rng.next_range(0.5, 2.5));
    }
    p
}
