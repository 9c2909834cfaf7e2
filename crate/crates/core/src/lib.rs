//! Numerical laboratory for bounded-Lipschitz and Kantorovich distances on
//! the state spaces of commutative and matrix algebras, together with probes
//! of the operator topologies (weakly/strongly uniform, strict, inductive)
//! that govern when those distances metrize weak* convergence.
//!
//! Modules:
//! - [`numlin`]: dense hermitian eigensolver, operator norms, spectral clips.
//! - [`lp`]: two-phase simplex with Bland's rule plus a vertex-enumeration
//!   oracle for tiny programs.
//! - [`classical`]: finite metric spaces, discrete measures, and the dual
//!   linear programs for d_{L,α,β} and κ_L.
//! - [`quantum`]: matrix states, commutator and grid Lip-seminorms, and the
//!   operator-splitting distance solver.
//! - [`topology`]: state-uniform seminorms, approximate units, covering
//!   numbers, and the shift counterexample family.

pub mod classical;
pub mod config;
pub mod lp;
pub mod numlin;
pub mod quantum;
pub mod rng;
pub mod topology;

pub use config::SolverConfig;

#[cfg(test)]
pub(crate) mod testutil {
    use crate::numlin::{ComplexMatrix, HermitianElement};
    use crate::quantum::DensityMatrix;
    use crate::rng::SplitMix64;
    use num_complex::Complex64;

    pub fn random_matrix(rng: &mut SplitMix64, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, Complex64::new(rng.next_sym(), rng.next_sym()));
            }
        }
        m
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
        HermitianElement::new(m).unwrap()
    }

    pub fn random_density(rng: &mut SplitMix64, dim: usize) -> DensityMatrix {
        let g = random_matrix(rng, dim);
        let gram = g.adjoint().mul(&g);
        let trace = gram.trace().re;
        DensityMatrix::new(HermitianElement::symmetrize(gram.scale_re(1.0 / trace))).unwrap()
    }
}
