//! Dense complex linear-algebra kernels shared by every solver in this crate:
//! hermitian eigendecomposition (cyclic Jacobi), operator norms, and the
//! Frobenius projection onto spectral-norm balls.
//!
//! Everything here works on small dense matrices (dimensions well below ~256);
//! the Jacobi sweep is unconditionally convergent on hermitian input and keeps
//! the crate free of external linear-algebra dependencies.

use num_complex::Complex64;
use thiserror::Error;

/// Per-entry tolerance for accepting a matrix as hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius threshold (relative to the matrix scale) at which
/// the Jacobi sweep stops.
const JACOBI_OFF_TOL: f64 = 1e-14;

/// Maximum number of full Jacobi sweeps. Quadratic convergence makes this a
/// generous bound for any dimension this crate targets.
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum NumLinError {
    #[error("matrix is not hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {deviation:.3e} exceeds {tol:.3e}")]
    NonHermitianInput {
        row: usize,
        col: usize,
        deviation: f64,
        tol: f64,
    },
    #[error("matrix data has {got} entries, expected {expected} for dimension {dim}")]
    BadShape { dim: usize, expected: usize, got: usize },
    #[error("spectral clip radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Dense square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_entries(dim: usize, data: Vec<Complex64>) -> Result<Self, NumLinError> {
        if data.len() != dim * dim || dim == 0 {
            return Err(NumLinError::BadShape {
                dim,
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// Builds a matrix from separate real and imaginary parts given row by row.
    pub fn from_re_im(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self, NumLinError> {
        let dim = re.len();
        if dim == 0 || im.len() != dim {
            return Err(NumLinError::BadShape {
                dim,
                expected: dim,
                got: im.len(),
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (re_row, im_row) in re.iter().zip(im.iter()) {
            if re_row.len() != dim || im_row.len() != dim {
                return Err(NumLinError::BadShape {
                    dim,
                    expected: dim,
                    got: re_row.len().min(im_row.len()),
                });
            }
            for (&x, &y) in re_row.iter().zip(im_row.iter()) {
                data.push(Complex64::new(x, y));
            }
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// Real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    /// Rank-one matrix unit |row><col|: one at (row, col), zero elsewhere.
    pub fn matrix_unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(row, col, Complex64::new(1.0, 0.0));
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|a| a * factor).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum per-entry deviation from the conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }
}

/// A validated self-adjoint matrix. Construction checks the per-entry
/// hermitian tolerance and then stores the exactly symmetrized matrix
/// (upper triangle mirrored, real diagonal) so downstream kernels can rely
/// on exact structure.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianElement {
    matrix: ComplexMatrix,
}

impl HermitianElement {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, NumLinError> {
        let n = matrix.dim();
        for i in 0..n {
            for j in i..n {
                let deviation = (matrix.get(i, j) - matrix.get(j, i).conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(NumLinError::NonHermitianInput {
                        row: i,
                        col: j,
                        deviation,
                        tol: HERMITIAN_TOL,
                    });
                }
            }
        }
        Ok(Self::symmetrize(matrix))
    }

    /// Wraps a matrix that is hermitian by construction (e.g. V f(Λ) V*),
    /// symmetrizing away roundoff without re-validating.
    pub(crate) fn symmetrize(matrix: ComplexMatrix) -> Self {
        let n = matrix.dim();
        let mut m = matrix;
        for i in 0..n {
            let d = m.get(i, i);
            m.set(i, i, Complex64::new(d.re, 0.0));
            for j in (i + 1)..n {
                let avg = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                m.set(i, j, avg);
                m.set(j, i, avg.conj());
            }
        }
        HermitianElement { matrix: m }
    }

    pub fn from_re_im(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self, NumLinError> {
        Self::new(ComplexMatrix::from_re_im(re, im)?)
    }

    /// Real diagonal matrix, trivially hermitian.
    pub fn diag(entries: &[f64]) -> Self {
        HermitianElement {
            matrix: ComplexMatrix::diag(entries),
        }
    }

    pub fn zero(dim: usize) -> Self {
        HermitianElement {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianElement {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Real trace of a hermitian matrix.
    pub fn trace_re(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianElement {
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianElement {
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        HermitianElement {
            matrix: self.matrix.scale_re(factor),
        }
    }
}

/// Eigendecomposition M = V diag(λ) V* of a hermitian matrix, eigenvalues
/// sorted ascending and V unitary.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds V diag(λ) V*; used by tests and by functional calculus.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|x| x)
    }

    /// Computes V diag(f(λ)) V* without forming intermediate products twice.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.eigenvectors.get(i, k);
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + vik * self.eigenvectors.get(j, k).conj() * fk);
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Sweeps stop when the off-diagonal Frobenius norm drops below
/// `1e-14 * max(1, ||M||_F)` or after 100 sweeps. Eigenvalues come back
/// sorted ascending with the eigenvector columns permuted to match.
pub fn hermitian_eig(m: &HermitianElement) -> EigenDecomposition {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off_sq += 2.0 * a.get(p, q).norm_sqr();
            }
        }
        if off_sq.sqrt() <= JACOBI_OFF_TOL * scale {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let beta = apq.norm();
                if beta == 0.0 {
                    continue;
                }
                let phase = apq / beta;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * beta);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = I except U[p][p]=c, U[p][q]=-s*phase, U[q][p]=s*conj(phase), U[q][q]=c
                let s_conj_phase = phase.conj() * s;
                let s_phase = phase * s;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    let new_kp = akp * c + akq * s_conj_phase;
                    let new_kq = akq * c - akp * s_phase;
                    a.set(k, p, new_kp);
                    a.set(p, k, new_kp.conj());
                    a.set(k, q, new_kq);
                    a.set(q, k, new_kq.conj());
                }
                a.set(p, p, Complex64::new(app + t * beta, 0.0));
                a.set(q, q, Complex64::new(aqq - t * beta, 0.0));
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * s_conj_phase);
                    v.set(k, q, vkq * c - vkp * s_phase);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors.set(row, col, v.get(row, src));
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Operator (spectral) norm: largest singular value.
///
/// Hermitian input takes the direct route max |λ|; anything else goes through
/// the largest eigenvalue of m* m.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    // scale-relative dispatch: an absolute tolerance here would symmetrize
    // away genuinely one-sided matrices with tiny entries
    if m.is_hermitian(HERMITIAN_TOL * m.frobenius_norm()) {
        let eig = hermitian_eig(&HermitianElement::symmetrize(m.clone()));
        eig.eigenvalues
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()))
    } else {
        let gram = HermitianElement::symmetrize(m.adjoint().mul(m));
        let eig = hermitian_eig(&gram);
        eig.eigenvalues
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x.max(0.0)))
            .sqrt()
    }
}

/// Frobenius-nearest hermitian matrix with operator norm at most `r`:
/// eigenvalues clamped to [-r, r].
///
/// Returns the input unchanged when it is already feasible, so feasible
/// points are exact fixed points.
pub fn clip_spectral(m: &HermitianElement, r: f64) -> Result<HermitianElement, NumLinError> {
    if r <= 0.0 {
        return Err(NumLinError::InvalidRadius(r));
    }
    let eig = hermitian_eig(m);
    let max_abs = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if max_abs <= r {
        return Ok(m.clone());
    }
    let clipped = eig.apply_fn(|x| x.clamp(-r, r));
    Ok(HermitianElement::symmetrize(clipped))
}

/// Functional calculus f(h) = V diag(f(λ)) V* for hermitian h.
pub fn apply_spectral_fn(h: &HermitianElement, f: impl Fn(f64) -> f64) -> HermitianElement {
    HermitianElement::symmetrize(hermitian_eig(h).apply_fn(f))
}

/// Smallest eigenvalue; the strict-positivity tests in the topology module
/// are built on this.
pub fn min_eigenvalue(m: &HermitianElement) -> f64 {
    hermitian_eig(m).eigenvalues[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::testutil::{random_hermitian, random_matrix};

    #[test]
    fn eig_identity() {
        let eig = hermitian_eig(&HermitianElement::identity(3));
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eig_diagonal_sorted() {
        let eig = hermitian_eig(&HermitianElement::diag(&[2.0, -1.0, 0.0]));
        assert_eq!(eig.eigenvalues, vec![-1.0, 0.0, 2.0]);
    }

    #[test]
    fn eig_reconstruction_random() {
        let mut rng = SplitMix64::new(0x11);
        for _ in 0..20 {
            let m = random_hermitian(&mut rng, 4);
            let eig = hermitian_eig(&m);
            let diff = eig.reconstruct().sub(m.matrix());
            assert!(
                diff.frobenius_norm() <= 4e-10,
                "reconstruction residual {}",
                diff.frobenius_norm()
            );
            // unitarity of V, per entry
            let gram = eig.eigenvectors.adjoint().mul(&eig.eigenvectors);
            let resid = gram.sub(&ComplexMatrix::identity(4));
            for i in 0..4 {
                for j in 0..4 {
                    assert!(
                        resid.get(i, j).norm() <= 1e-10,
                        "V*V deviates at ({i},{j}): {}",
                        resid.get(i, j).norm()
                    );
                }
            }
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn eig_unitary_invariance() {
        let mut rng = SplitMix64::new(0x21);
        for _ in 0..10 {
            let m = random_hermitian(&mut rng, 5);
            let u = hermitian_eig(&random_hermitian(&mut rng, 5)).eigenvectors;
            let conj = HermitianElement::symmetrize(u.adjoint().mul(m.matrix()).mul(&u));
            let lam_a = hermitian_eig(&m).eigenvalues;
            let lam_b = hermitian_eig(&conj).eigenvalues;
            for (a, b) in lam_a.iter().zip(lam_b.iter()) {
                assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(
            HermitianElement::new(m),
            Err(NumLinError::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn operator_norm_cases() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(3)), 0.0);
        // rank-one partial isometry |ζ_2><ζ_0| has single singular value 1
        let s = ComplexMatrix::matrix_unit(4, 2, 0);
        assert!((operator_norm(&s) - 1.0).abs() <= 1e-12);
        assert!((operator_norm(&ComplexMatrix::diag(&[3.0, -5.0])) - 5.0).abs() <= 1e-12);
    }

    #[test]
    fn cstar_identity_and_submultiplicativity() {
        let mut rng = SplitMix64::new(0x31);
        for dim in [2usize, 5, 16] {
            for herm in [true, false] {
                let m = if herm {
                    random_hermitian(&mut rng, dim).into_matrix()
                } else {
                    random_matrix(&mut rng, dim)
                };
                let norm = operator_norm(&m);
                let gram_norm = operator_norm(&m.adjoint().mul(&m));
                assert!(
                    (gram_norm - norm * norm).abs() <= 1e-9 * (1.0 + norm * norm),
                    "C*-identity violated: {gram_norm} vs {}",
                    norm * norm
                );
                let b = random_matrix(&mut rng, dim);
                let prod_norm = operator_norm(&m.mul(&b));
                assert!(prod_norm <= norm * operator_norm(&b) + 1e-9);
            }
        }
    }

    #[test]
    fn clip_examples() {
        let already = clip_spectral(&HermitianElement::diag(&[0.5]), 1.0).unwrap();
        assert_eq!(already.matrix().get(0, 0).re, 0.5);

        let clipped = clip_spectral(&HermitianElement::diag(&[3.0, -2.0]), 1.0).unwrap();
        assert!((clipped.matrix().get(0, 0).re - 1.0).abs() <= 1e-12);
        assert!((clipped.matrix().get(1, 1).re + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn clip_projection_optimality() {
        // first-order optimality of a projection onto a convex set:
        // <m - p, q - p> <= 0 for every feasible q.
        let mut rng = SplitMix64::new(0x41);
        let r = 0.7;
        for _ in 0..5 {
            let m = random_hermitian(&mut rng, 3).scale_re(2.0);
            let p = clip_spectral(&m, r).unwrap();
            assert!(operator_norm(p.matrix()) <= r + 1e-10);
            let gap = m.sub(&p);
            for _ in 0..200 {
                let q = clip_spectral(&random_hermitian(&mut rng, 3), r).unwrap();
                let dir = q.sub(&p);
                let inner = gap.matrix().adjoint().mul(dir.matrix()).trace().re;
                assert!(inner <= 1e-9, "projection residual not obtuse: {inner}");
            }
        }
    }

    #[test]
    fn clip_idempotent_and_noop() {
        let mut rng = SplitMix64::new(0x51);
        for _ in 0..10 {
            let m = random_hermitian(&mut rng, 4);
            let r = 0.8;
            let once = clip_spectral(&m, r).unwrap();
            let twice = clip_spectral(&once, r).unwrap();
            assert!(once.sub(&twice).matrix().frobenius_norm() <= 1e-12);

            let big_r = operator_norm(m.matrix()) + 0.1;
            let untouched = clip_spectral(&m, big_r).unwrap();
            assert_eq!(untouched, m);
        }
    }

    #[test]
    fn invalid_radius() {
        assert!(matches!(
            clip_spectral(&HermitianElement::identity(2), 0.0),
            Err(NumLinError::InvalidRadius(_))
        ));
    }

    #[test]
    fn spectral_fn_projection() {
        let h = HermitianElement::diag(&[1.0, 0.5, 0.25]);
        let p = apply_spectral_fn(&h, |x| if x >= 0.5 { 1.0 } else { 0.0 });
        assert!((p.matrix().get(0, 0).re - 1.0).abs() <= 1e-12);
        assert!((p.matrix().get(1, 1).re - 1.0).abs() <= 1e-12);
        assert!(p.matrix().get(2, 2).norm() <= 1e-12);
    }
}
