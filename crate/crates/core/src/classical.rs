//! Commutative case: finite metric spaces, discrete measures, and the dual
//! linear programs for the bounded-Lipschitz distance d_{L,α,β} and the
//! Kantorovich distance κ_L.
//!
//! A measure is a state exactly when its mass is 1; quasi-states (mass < 1)
//! are accepted for pairings but rejected by the distance operations, which
//! are defined on states only.

use crate::config::SolverConfig;
use crate::lp::{LinearProgram, LpError, LpStatus, lp_solve};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// Tolerance on metric-space validation (symmetry, triangle inequality).
pub const METRIC_TOL: f64 = 1e-12;
/// Tolerance on state mass.
pub const STATE_TOL: f64 = 1e-12;
/// Feasibility slack allowed on returned witnesses.
pub const WITNESS_TOL: f64 = 1e-9;
/// Convergence tolerance for the weak* probe flags.
pub const WEAKSTAR_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("invalid metric space: {0}")]
    InvalidMetric(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("measures live on different spaces")]
    SpaceMismatch,
    #[error("measure is not a state (mass {mass})")]
    NotAState { mass: f64 },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("lp failure: {0}")]
    Lp(#[from] LpError),
}

/// Point labels plus a validated distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    rho: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, rho: Vec<Vec<f64>>) -> Result<Self, ClassicalError> {
        let n = labels.len();
        if n == 0 {
            return Err(ClassicalError::InvalidMetric("no points".into()));
        }
        if rho.len() != n || rho.iter().any(|row| row.len() != n) {
            return Err(ClassicalError::InvalidMetric(format!(
                "rho must be {n}x{n}"
            )));
        }
        for i in 0..n {
            if rho[i][i] != 0.0 {
                return Err(ClassicalError::InvalidMetric(format!(
                    "rho[{i}][{i}] = {} must be 0",
                    rho[i][i]
                )));
            }
            for j in 0..n {
                if !rho[i][j].is_finite() || (i != j && rho[i][j] <= 0.0) {
                    return Err(ClassicalError::InvalidMetric(format!(
                        "rho[{i}][{j}] = {} must be positive off the diagonal",
                        rho[i][j]
                    )));
                }
                if (rho[i][j] - rho[j][i]).abs() > METRIC_TOL {
                    return Err(ClassicalError::InvalidMetric(format!(
                        "rho[{i}][{j}] != rho[{j}][{i}]"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if rho[i][k] > rho[i][j] + rho[j][k] + METRIC_TOL {
                        return Err(ClassicalError::InvalidMetric(format!(
                            "triangle inequality fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, rho })
    }

    /// Points 0..n-1 on a line with the absolute-value metric, scaled by
    /// the given coordinates.
    pub fn line(coords: &[f64]) -> Result<Self, ClassicalError> {
        let labels = coords.iter().map(|c| format!("{c}")).collect();
        let n = coords.len();
        let mut rho = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                rho[i][j] = (coords[i] - coords[j]).abs();
            }
        }
        FiniteMetricSpace::new(labels, rho)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn rho(&self, i: usize, j: usize) -> f64 {
        // canonical entry so downstream programs are exactly symmetric
        if i <= j {
            self.rho[i][j]
        } else {
            self.rho[j][i]
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn max_distance(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                d = d.max(self.rho(i, j));
            }
        }
        d
    }

    /// Same labels and distances rescaled by t > 0.
    pub fn scaled(&self, t: f64) -> Result<Self, ClassicalError> {
        if t <= 0.0 {
            return Err(ClassicalError::NonPositiveParameter {
                name: "scale",
                value: t,
            });
        }
        let rho = self
            .rho
            .iter()
            .map(|row| row.iter().map(|&x| t * x).collect())
            .collect();
        Ok(FiniteMetricSpace {
            labels: self.labels.clone(),
            rho,
        })
    }
}

/// Nonnegative weights on a finite metric space; a state when the mass is 1,
/// a quasi-state when the mass falls below 1.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    space: Arc<FiniteMetricSpace>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(space: Arc<FiniteMetricSpace>, weights: Vec<f64>) -> Result<Self, ClassicalError> {
        if weights.len() != space.len() {
            return Err(ClassicalError::InvalidMeasure(format!(
                "{} weights for {} points",
                weights.len(),
                space.len()
            )));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(ClassicalError::InvalidMeasure(
                "weights must be nonnegative".into(),
            ));
        }
        let mass: f64 = weights.iter().sum();
        if mass <= 0.0 || mass > 1.0 + STATE_TOL {
            return Err(ClassicalError::InvalidMeasure(format!(
                "mass {mass} outside (0, 1]"
            )));
        }
        Ok(DiscreteMeasure { space, weights })
    }

    /// Point mass at the given index.
    pub fn dirac(space: Arc<FiniteMetricSpace>, index: usize) -> Result<Self, ClassicalError> {
        if index >= space.len() {
            return Err(ClassicalError::InvalidMeasure(format!(
                "point index {index} out of range"
            )));
        }
        let mut weights = vec![0.0; space.len()];
        weights[index] = 1.0;
        DiscreteMeasure::new(space, weights)
    }

    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_state(&self) -> bool {
        (self.mass() - 1.0).abs() <= STATE_TOL
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    /// Pairing with a function given by its values on the points.
    pub fn pair(&self, values: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(values.iter())
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Convex midpoint (φ + ψ)/2 on a shared space.
    pub fn midpoint(&self, other: &Self) -> Result<Self, ClassicalError> {
        same_space(self, other)?;
        let weights = self
            .weights
            .iter()
            .zip(other.weights.iter())
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        DiscreteMeasure::new(self.space.clone(), weights)
    }
}

fn same_space(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<(), ClassicalError> {
    if Arc::ptr_eq(&mu.space, &nu.space) || mu.space == nu.space {
        Ok(())
    } else {
        Err(ClassicalError::SpaceMismatch)
    }
}

fn require_state(m: &DiscreteMeasure) -> Result<(), ClassicalError> {
    if m.is_state() {
        Ok(())
    } else {
        Err(ClassicalError::NotAState { mass: m.mass() })
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<(), ClassicalError> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(ClassicalError::NonPositiveParameter { name, value })
    }
}

/// An extremal function achieving the distance supremum: values on points,
/// sup-norm bound α (infinite for the Kantorovich program) and Lipschitz
/// bound β.
#[derive(Clone, Debug)]
pub struct LipBoundedWitness {
    pub values: Vec<f64>,
    pub bound: f64,
    pub lip: f64,
}

impl LipBoundedWitness {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Smallest L with |f_i - f_j| <= L rho_ij on the given space.
    pub fn lip_constant(&self, space: &FiniteMetricSpace) -> f64 {
        let mut l = 0.0f64;
        for i in 0..space.len() {
            for j in (i + 1)..space.len() {
                l = l.max((self.values[i] - self.values[j]).abs() / space.rho(i, j));
            }
        }
        l
    }

    pub fn is_feasible(&self, space: &FiniteMetricSpace) -> bool {
        self.sup_norm() <= self.bound + WITNESS_TOL
            && self.lip_constant(space) <= self.lip + WITNESS_TOL
    }
}

#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub value: f64,
    pub witness: LipBoundedWitness,
}

fn check_pair(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<(), ClassicalError> {
    same_space(mu, nu)?;
    require_state(mu)?;
    require_state(nu)
}

fn objective(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Vec<f64> {
    mu.weights
        .iter()
        .zip(nu.weights.iter())
        .map(|(a, b)| a - b)
        .collect()
}

fn lipschitz_rows(p: &mut LinearProgram, space: &FiniteMetricSpace, beta: f64) {
    let n = space.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut row = vec![0.0; n];
            row[i] = 1.0;
            row[j] = -1.0;
            p.push_abs_le(row, beta * space.rho(i, j));
        }
    }
}

fn run(p: &LinearProgram) -> Result<crate::lp::LpSolution, ClassicalError> {
    let sol = lp_solve(p, &SolverConfig::default())?;
    match sol.status {
        LpStatus::Optimal => Ok(sol),
        LpStatus::IterationLimit => Err(ClassicalError::IterationLimit),
        // the distance feasible sets are bounded (or gauge-pinned), so this
        // would indicate a construction bug
        LpStatus::Unbounded => Err(ClassicalError::InvalidMetric(
            "distance program unbounded".into(),
        )),
    }
}

/// Builds the bounded-Lipschitz program for a pair of states: maximize
/// Σ (μ_i - ν_i) f_i over |f_i| <= α and |f_i - f_j| <= β ρ_ij.
pub fn bl_program(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    alpha: f64,
    beta: f64,
) -> LinearProgram {
    let space = mu.space();
    let n = space.len();
    let mut p = LinearProgram::new(objective(mu, nu));
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        p.push_abs_le(row, alpha);
    }
    lipschitz_rows(&mut p, space, beta);
    p
}

/// Builds the Kantorovich program: same objective without the sup-norm
/// bounds. The objective is invariant under adding constants (states have
/// equal mass), so f at the first point is pinned to 0 to keep the feasible
/// set pointed.
pub fn kantorovich_program(mu: &DiscreteMeasure, nu: &DiscreteMeasure, beta: f64) -> LinearProgram {
    let space = mu.space();
    let n = space.len();
    let mut p = LinearProgram::new(objective(mu, nu));
    let mut gauge = vec![0.0; n];
    gauge[0] = 1.0;
    p.push_eq(gauge, 0.0);
    lipschitz_rows(&mut p, space, beta);
    p
}

/// Bounded-Lipschitz distance d_{L,α,β}(μ, ν) with its extremal witness.
pub fn bl_distance(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    alpha: f64,
    beta: f64,
) -> Result<DistanceResult, ClassicalError> {
    check_pair(mu, nu)?;
    require_positive("alpha", alpha)?;
    require_positive("beta", beta)?;
    let sol = run(&bl_program(mu, nu, alpha, beta))?;
    Ok(DistanceResult {
        value: sol.optimal_value.max(0.0),
        witness: LipBoundedWitness {
            values: sol.witness,
            bound: alpha,
            lip: beta,
        },
    })
}

/// Kantorovich distance κ_L(μ, ν) = d_{L,∞,β}; always finite on a finite
/// space.
pub fn kantorovich(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    beta: f64,
) -> Result<DistanceResult, ClassicalError> {
    check_pair(mu, nu)?;
    require_positive("beta", beta)?;
    let sol = run(&kantorovich_program(mu, nu, beta))?;
    Ok(DistanceResult {
        value: sol.optimal_value.max(0.0),
        witness: LipBoundedWitness {
            values: sol.witness,
            bound: f64::INFINITY,
            lip: beta,
        },
    })
}

/// Returns (d_{L,α,β}, d_{L,1,1}); the two are sandwiched as
/// min(α,β) d_{1,1} <= d_{α,β} <= max(α,β) d_{1,1}.
pub fn bl_family_ratio(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    alpha: f64,
    beta: f64,
) -> Result<(f64, f64), ClassicalError> {
    let d_ab = bl_distance(mu, nu, alpha, beta)?.value;
    let d_11 = bl_distance(mu, nu, 1.0, 1.0)?.value;
    Ok((d_ab, d_11))
}

/// Evaluates both sides of the midpoint identity
/// d_L((φ+ψ)/2, ψ) = d_L(φ, ψ)/2.
pub fn midpoint_check(
    phi: &DiscreteMeasure,
    psi: &DiscreteMeasure,
    alpha: f64,
    beta: f64,
) -> Result<(f64, f64), ClassicalError> {
    let eta = phi.midpoint(psi)?;
    let lhs = bl_distance(&eta, psi, alpha, beta)?.value;
    let rhs = 0.5 * bl_distance(phi, psi, alpha, beta)?.value;
    Ok((lhs, rhs))
}

/// Per-test-function record from the weak* probe.
#[derive(Clone, Debug)]
pub struct ProbeSeries {
    /// φ_n(g) along the sequence.
    pub values: Vec<f64>,
    pub limit_value: f64,
    /// max |φ_n(g) - limit(g)| over the trailing quarter of the sequence.
    pub tail_deviation: f64,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct WeakStarReport {
    pub series: Vec<ProbeSeries>,
}

impl WeakStarReport {
    pub fn all_converged(&self) -> bool {
        self.series.iter().all(|s| s.converged)
    }
}

/// Pairs a sequence of measures with fixed test functions and flags, per
/// function, whether the pairings approach the limit measure's pairing.
///
/// The flag rule is deterministic and order-insensitive within the window:
/// the maximum deviation over the trailing ceil(len/4) entries must fall
/// below 1e-6. A true flag is numerical evidence of weak* convergence at
/// this truncation, not a proof.
pub fn weakstar_probe(
    seq: &[DiscreteMeasure],
    limit: &DiscreteMeasure,
    test_fns: &[Vec<f64>],
) -> Result<WeakStarReport, ClassicalError> {
    if seq.is_empty() {
        return Err(ClassicalError::InvalidMeasure("empty sequence".into()));
    }
    for m in seq {
        same_space(m, limit)?;
    }
    let n = limit.space().len();
    let window = seq.len().div_ceil(4);
    let mut series = Vec::with_capacity(test_fns.len());
    for g in test_fns {
        if g.len() != n {
            return Err(ClassicalError::InvalidMeasure(format!(
                "test function has {} values for {} points",
                g.len(),
                n
            )));
        }
        let limit_value = limit.pair(g);
        let values: Vec<f64> = seq.iter().map(|m| m.pair(g)).collect();
        let tail_deviation = values[values.len() - window..]
            .iter()
            .fold(0.0f64, |acc, v| acc.max((v - limit_value).abs()));
        series.push(ProbeSeries {
            values,
            limit_value,
            tail_deviation,
            converged: tail_deviation < WEAKSTAR_TOL,
        });
    }
    Ok(WeakStarReport { series })
}

/// JSON shape for a metric space: `{"labels": [...], "rho": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub labels: Vec<String>,
    pub rho: Vec<Vec<f64>>,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<FiniteMetricSpace, ClassicalError> {
        FiniteMetricSpace::new(self.labels.clone(), self.rho.clone())
    }
}

impl From<&FiniteMetricSpace> for SpaceSpec {
    fn from(s: &FiniteMetricSpace) -> Self {
        SpaceSpec {
            labels: s.labels.clone(),
            rho: s.rho.clone(),
        }
    }
}

/// JSON shape for a measure: `{"space_id": "...", "weights": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub space_id: String,
    pub weights: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::lp_oracle;

    fn two_point(rho: f64) -> Arc<FiniteMetricSpace> {
        Arc::new(
            FiniteMetricSpace::new(
                vec!["x".into(), "y".into()],
                vec![vec![0.0, rho], vec![rho, 0.0]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn space_validation() {
        assert!(FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 1.0], vec![2.0, 0.0]],
        )
        .is_err());
        // triangle violation: d(0,2) = 5 > 1 + 1
        assert!(FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0]
            ],
        )
        .is_err());
    }

    #[test]
    fn zero_distance_same_state() {
        let sp = two_point(2.0);
        let mu = DiscreteMeasure::new(sp.clone(), vec![0.3, 0.7]).unwrap();
        let d = bl_distance(&mu, &mu, 1.0, 1.0).unwrap();
        assert!(d.value <= 1e-9);
    }

    #[test]
    fn point_masses_closed_form() {
        let sp = two_point(5.0);
        let dx = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        let dy = DiscreteMeasure::dirac(sp.clone(), 1).unwrap();
        let d = bl_distance(&dx, &dy, 1.0, 1.0).unwrap();
        assert!((d.value - 2.0).abs() <= 1e-9, "min(2a, b rho) = 2");
        assert!(d.witness.is_feasible(&sp));
        let oracle = lp_oracle(&bl_program(&dx, &dy, 1.0, 1.0)).unwrap();
        assert!((d.value - oracle).abs() <= 1e-9);
    }

    #[test]
    fn drifting_two_point_family() {
        // φ_n = (1 - 1/n) δ_0 + (1/n) δ_n on {0, n}, n = 4
        let n = 4.0;
        let sp = two_point(n);
        let d0 = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        let phi = DiscreteMeasure::new(sp.clone(), vec![1.0 - 1.0 / n, 1.0 / n]).unwrap();
        let bl = bl_distance(&d0, &phi, 1.0, 1.0).unwrap();
        assert!((bl.value - 0.5).abs() <= 1e-9);
        let oracle = lp_oracle(&bl_program(&d0, &phi, 1.0, 1.0)).unwrap();
        assert!((bl.value - oracle).abs() <= 1e-9);
        let k = kantorovich(&d0, &phi, 1.0).unwrap();
        assert!((k.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn kantorovich_point_masses() {
        let sp = two_point(7.0);
        let dx = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        let dy = DiscreteMeasure::dirac(sp.clone(), 1).unwrap();
        let k = kantorovich(&dx, &dy, 1.0).unwrap();
        assert!((k.value - 7.0).abs() <= 1e-9);
        let oracle = lp_oracle(&kantorovich_program(&dx, &dy, 1.0)).unwrap();
        assert!((k.value - oracle).abs() <= 1e-9);
        // witness is 1-Lipschitz
        assert!(k.witness.lip_constant(&sp) <= 1.0 + 1e-9);
    }

    #[test]
    fn family_ratio_point_masses() {
        let sp = two_point(3.0);
        let dx = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        let dy = DiscreteMeasure::dirac(sp.clone(), 1).unwrap();
        let (d_ab, d_11) = bl_family_ratio(&dx, &dy, 2.0, 1.0).unwrap();
        assert!((d_ab - 3.0).abs() <= 1e-9);
        assert!((d_11 - 2.0).abs() <= 1e-9);
        assert!(1.0 * d_11 - 1e-8 <= d_ab && d_ab <= 2.0 * d_11 + 1e-8);
    }

    #[test]
    fn family_ratio_identity_at_unit_parameters() {
        let sp = two_point(1.5);
        let mu = DiscreteMeasure::new(sp.clone(), vec![0.2, 0.8]).unwrap();
        let nu = DiscreteMeasure::new(sp.clone(), vec![0.9, 0.1]).unwrap();
        let (d_ab, d_11) = bl_family_ratio(&mu, &nu, 1.0, 1.0).unwrap();
        assert_eq!(d_ab, d_11);
    }

    #[test]
    fn midpoint_identity_point_masses() {
        let sp = two_point(1.0);
        let d0 = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        let d1 = DiscreteMeasure::dirac(sp.clone(), 1).unwrap();
        let (lhs, rhs) = midpoint_check(&d0, &d1, 1.0, 1.0).unwrap();
        assert!((lhs - 0.5).abs() <= 1e-8);
        assert!((rhs - 0.5).abs() <= 1e-8);
        let (l0, r0) = midpoint_check(&d0, &d0, 1.0, 1.0).unwrap();
        assert!(l0 <= 1e-9 && r0 <= 1e-9);
    }

    #[test]
    fn quasi_state_rejected_by_distances() {
        let sp = two_point(1.0);
        let quasi = DiscreteMeasure::new(sp.clone(), vec![0.3, 0.3]).unwrap();
        let state = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        assert!(matches!(
            bl_distance(&quasi, &state, 1.0, 1.0),
            Err(ClassicalError::NotAState { .. })
        ));
        // but pairings still work
        assert!((quasi.pair(&[1.0, 1.0]) - 0.6).abs() <= 1e-15);
    }

    #[test]
    fn space_mismatch_detected() {
        let a = two_point(1.0);
        let b = two_point(2.0);
        let mu = DiscreteMeasure::dirac(a, 0).unwrap();
        let nu = DiscreteMeasure::dirac(b, 0).unwrap();
        assert!(matches!(
            bl_distance(&mu, &nu, 1.0, 1.0),
            Err(ClassicalError::SpaceMismatch)
        ));
    }

    #[test]
    fn weakstar_constant_sequence() {
        let sp = two_point(1.0);
        let mu = DiscreteMeasure::new(sp.clone(), vec![0.5, 0.5]).unwrap();
        let seq = vec![mu.clone(); 8];
        let report = weakstar_probe(&seq, &mu, &[vec![1.0, -1.0], vec![0.3, 2.0]]).unwrap();
        assert!(report.all_converged());
    }

    #[test]
    fn weakstar_drifting_mass_detected() {
        // δ_n drifting to the far end of a line vs limit δ_0, with a test
        // function pinned at the origin: flag must be false.
        let coords: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let sp = Arc::new(FiniteMetricSpace::line(&coords).unwrap());
        let seq: Vec<DiscreteMeasure> = (1..12)
            .map(|i| DiscreteMeasure::dirac(sp.clone(), i).unwrap())
            .collect();
        let limit = DiscreteMeasure::dirac(sp.clone(), 0).unwrap();
        let g: Vec<f64> = coords.iter().map(|&t| 1.0 / (1.0 + t)).collect();
        let report = weakstar_probe(&seq, &limit, &[g]).unwrap();
        assert!(!report.series[0].converged);
    }

    #[test]
    fn scale_covariance_of_kantorovich() {
        let sp = Arc::new(FiniteMetricSpace::line(&[0.0, 1.0, 2.5, 4.0]).unwrap());
        let mu = DiscreteMeasure::new(sp.clone(), vec![0.4, 0.1, 0.2, 0.3]).unwrap();
        let nu = DiscreteMeasure::new(sp.clone(), vec![0.1, 0.5, 0.3, 0.1]).unwrap();
        let base = kantorovich(&mu, &nu, 1.0).unwrap().value;
        for t in [0.5, 2.0, 10.0] {
            let scaled = Arc::new(sp.scaled(t).unwrap());
            let mu_t = DiscreteMeasure::new(scaled.clone(), mu.weights().to_vec()).unwrap();
            let nu_t = DiscreteMeasure::new(scaled.clone(), nu.weights().to_vec()).unwrap();
            let v = kantorovich(&mu_t, &nu_t, 1.0).unwrap().value;
            assert!(
                (v - t * base).abs() <= 1e-9 * (1.0 + t * base),
                "scale {t}: {v} vs {}",
                t * base
            );
        }
    }

    #[test]
    fn domination_and_monotonicity() {
        let sp = Arc::new(FiniteMetricSpace::line(&[0.0, 0.7, 1.9]).unwrap());
        let mu = DiscreteMeasure::new(sp.clone(), vec![0.6, 0.3, 0.1]).unwrap();
        let nu = DiscreteMeasure::new(sp.clone(), vec![0.1, 0.2, 0.7]).unwrap();
        let d = bl_distance(&mu, &nu, 1.0, 1.0).unwrap().value;
        let k = kantorovich(&mu, &nu, 1.0).unwrap().value;
        assert!(d <= k + 1e-9);
        let d_bigger_alpha = bl_distance(&mu, &nu, 2.0, 1.0).unwrap().value;
        let d_bigger_beta = bl_distance(&mu, &nu, 1.0, 2.0).unwrap().value;
        assert!(d_bigger_alpha >= d - 1e-9);
        assert!(d_bigger_beta >= d - 1e-9);
    }
}
