//! Numerical probes of the operator topologies that organize the distance
//! theory: the state-uniform seminorms p_K and q_K, inductive seminorms
//! ‖e a e‖, strict seminorms ‖h a‖ / ‖a h‖, the metric Δ(a,b) = ‖h(b-a)h‖
//! on bounded sets, approximate-unit decay checks, covering numbers, and the
//! rank-one shift family on which uniform-weak and strict behavior visibly
//! split.
//!
//! Weak*-compact families of states are represented by finite samples; every
//! "converged" flag is numerical evidence at the chosen truncation, not a
//! proof.

use crate::numlin::{
    apply_spectral_fn, min_eigenvalue, operator_norm, ComplexMatrix,
    HermitianElement,
};
use crate::quantum::DensityMatrix;
use thiserror::Error;

/// Relative decay demanded of an approximate-unit tail before the flag is
/// set: final value below 1e-6 of the initial one (or tiny in absolute terms).
pub const UNIT_DECAY_REL: f64 = 1e-6;
pub const UNIT_DECAY_ABS: f64 = 1e-9;
/// Tolerance for ‖h‖ = 1 validation.
pub const UNIT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("element is not strictly positive (min eigenvalue {min_eig:.3e})")]
    NotStrictlyPositive { min_eig: f64 },
    #[error("h must have unit operator norm, got {norm}")]
    NotNormalized { norm: f64 },
    #[error("invalid approximate-unit spec: {0}")]
    InvalidUnitSpec(String),
    #[error("state sample set must be nonempty")]
    EmptySample,
    #[error("truncation dimension {0} too small, need at least 4")]
    TruncationTooSmall(usize),
}

/// Finite sample standing in for a weak*-compact set of states.
#[derive(Clone, Debug)]
pub struct StateSampleSet {
    states: Vec<DensityMatrix>,
}

impl StateSampleSet {
    pub fn new(states: Vec<DensityMatrix>) -> Result<Self, TopologyError> {
        let Some(first) = states.first() else {
            return Err(TopologyError::EmptySample);
        };
        let dim = first.dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(TopologyError::DimensionMismatch {
                context: "states of unequal dimension".into(),
            });
        }
        Ok(StateSampleSet { states })
    }

    /// Diagonal embedding of commutative measures as matrix states.
    pub fn from_weights(families: &[Vec<f64>]) -> Result<Self, TopologyError> {
        let states = families
            .iter()
            .map(|w| {
                DensityMatrix::from_weights(w).map_err(|e| TopologyError::DimensionMismatch {
                    context: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(states)
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

fn check_dim(a: &ComplexMatrix, dim: usize) -> Result<(), TopologyError> {
    if a.dim() != dim {
        return Err(TopologyError::DimensionMismatch {
            context: format!("element dim {} vs {}", a.dim(), dim),
        });
    }
    Ok(())
}

fn require_strictly_positive(h: &HermitianElement) -> Result<(), TopologyError> {
    let min_eig = min_eigenvalue(h);
    if min_eig <= 0.0 {
        return Err(TopologyError::NotStrictlyPositive { min_eig });
    }
    Ok(())
}

fn require_unit_norm(h: &HermitianElement) -> Result<(), TopologyError> {
    let norm = operator_norm(h.matrix());
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(TopologyError::NotNormalized { norm });
    }
    Ok(())
}

/// p_K(a) = sup over the sampled states of |φ(a)|.
pub fn p_seminorm(a: &ComplexMatrix, k: &StateSampleSet) -> Result<f64, TopologyError> {
    check_dim(a, k.dim())?;
    Ok(k
        .states
        .iter()
        .fold(0.0f64, |m, s| m.max(s.pair(a).norm())))
}

/// q_K(a) = sup over the sampled states of max(√φ(a*a), √φ(a a*)).
pub fn q_seminorm(a: &ComplexMatrix, k: &StateSampleSet) -> Result<f64, TopologyError> {
    check_dim(a, k.dim())?;
    let a_star_a = a.adjoint().mul(a);
    let a_a_star = a.mul(&a.adjoint());
    Ok(k.states.iter().fold(0.0f64, |m, s| {
        let left = s.pair(&a_star_a).re.max(0.0).sqrt();
        let right = s.pair(&a_a_star).re.max(0.0).sqrt();
        m.max(left).max(right)
    }))
}

/// Inductive seminorm I_e(a) = ‖e a e‖.
pub fn inductive_seminorm(a: &ComplexMatrix, e: &HermitianElement) -> Result<f64, TopologyError> {
    check_dim(a, e.dim())?;
    Ok(operator_norm(&e.matrix().mul(a).mul(e.matrix())))
}

/// Strict seminorms (‖h a‖, ‖a h‖) for a strictly positive h.
pub fn strict_seminorms(
    a: &ComplexMatrix,
    h: &HermitianElement,
) -> Result<(f64, f64), TopologyError> {
    check_dim(a, h.dim())?;
    require_strictly_positive(h)?;
    Ok((
        operator_norm(&h.matrix().mul(a)),
        operator_norm(&a.mul(h.matrix())),
    ))
}

/// Δ(a, b) = ‖h (b - a) h‖, the metric for uniform weak convergence on
/// bounded sets; h must be strictly positive with unit norm.
pub fn wu_metric(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    h: &HermitianElement,
) -> Result<f64, TopologyError> {
    check_dim(a, h.dim())?;
    check_dim(b, h.dim())?;
    require_strictly_positive(h)?;
    require_unit_norm(h)?;
    let diff = b.sub(a);
    Ok(operator_norm(&h.matrix().mul(&diff).mul(h.matrix())))
}

/// Piecewise-linear nondecreasing function on [0, 1] with f(0) = 0 and
/// f(1) = 1, given by its breakpoints.
#[derive(Clone, Debug)]
pub struct BreakpointTable {
    points: Vec<(f64, f64)>,
}

impl BreakpointTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, TopologyError> {
        if points.len() < 2 {
            return Err(TopologyError::InvalidUnitSpec(
                "breakpoint table needs at least two points".into(),
            ));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first != (0.0, 0.0) || last != (1.0, 1.0) {
            return Err(TopologyError::InvalidUnitSpec(
                "table must run from (0, 0) to (1, 1)".into(),
            ));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(TopologyError::InvalidUnitSpec(
                    "breakpoint abscissae must strictly increase".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(TopologyError::InvalidUnitSpec(
                    "breakpoint values must be nondecreasing".into(),
                ));
            }
        }
        Ok(BreakpointTable { points })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        for w in self.points.windows(2) {
            if t <= w[1].0 {
                let (t0, f0) = w[0];
                let (t1, f1) = w[1];
                return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
            }
        }
        1.0
    }
}

#[derive(Clone, Debug)]
pub enum UnitKind {
    /// Coordinate-basis projections P_n onto the first n+1 basis vectors.
    TruncationProjections,
    /// e_n = f_n(h) for nondecreasing f_n with f(0) = 0, f(1) = 1.
    PsUnit(Vec<BreakpointTable>),
    /// e_n = χ_{[α_n, 1]}(h) for thresholds strictly decreasing in (0, 1].
    SpectralUnit(Vec<f64>),
}

/// A family (e_n) used to test the approximate-unit decay condition
/// p_K((1 - e_n)^α) → 0.
#[derive(Clone, Debug)]
pub struct ApproximateUnitSpec {
    pub kind: UnitKind,
    pub h: HermitianElement,
}

impl ApproximateUnitSpec {
    pub fn new(kind: UnitKind, h: HermitianElement) -> Result<Self, TopologyError> {
        require_strictly_positive(&h)?;
        require_unit_norm(&h)?;
        match &kind {
            UnitKind::TruncationProjections => {}
            UnitKind::PsUnit(tables) => {
                if tables.is_empty() {
                    return Err(TopologyError::InvalidUnitSpec("no tables".into()));
                }
            }
            UnitKind::SpectralUnit(thresholds) => {
                if thresholds.is_empty() {
                    return Err(TopologyError::InvalidUnitSpec("no thresholds".into()));
                }
                for &t in thresholds {
                    if !(0.0 < t && t <= 1.0) {
                        return Err(TopologyError::InvalidUnitSpec(format!(
                            "threshold {t} outside (0, 1]"
                        )));
                    }
                }
                for w in thresholds.windows(2) {
                    if w[1] >= w[0] {
                        return Err(TopologyError::InvalidUnitSpec(
                            "thresholds must strictly decrease".into(),
                        ));
                    }
                }
            }
        }
        Ok(ApproximateUnitSpec { kind, h })
    }

    fn unit_count(&self) -> usize {
        match &self.kind {
            UnitKind::TruncationProjections => self.h.dim(),
            UnitKind::PsUnit(tables) => tables.len(),
            UnitKind::SpectralUnit(thresholds) => thresholds.len(),
        }
    }

    /// (1 - e_n)^α as a matrix, exploiting that every unit here is either a
    /// projection or a function of h (so powers act on eigenvalues).
    fn residual_power(&self, n: usize, alpha: u32) -> HermitianElement {
        match &self.kind {
            UnitKind::TruncationProjections => {
                let dim = self.h.dim();
                let mut diag = vec![0.0; dim];
                for (k, d) in diag.iter_mut().enumerate() {
                    *d = if k > n { 1.0 } else { 0.0 };
                }
                HermitianElement::diag(&diag)
            }
            UnitKind::PsUnit(tables) => {
                let table = &tables[n];
                apply_spectral_fn(&self.h, |t| (1.0 - table.eval(t)).powi(alpha as i32))
            }
            UnitKind::SpectralUnit(thresholds) => {
                let cut = thresholds[n];
                apply_spectral_fn(&self.h, |t| if t >= cut { 0.0 } else { 1.0 })
            }
        }
    }
}

/// Decay table for an approximate-unit family: values[n][alpha_index] holds
/// p_K((1 - e_n)^α).
#[derive(Clone, Debug)]
pub struct SeminormReport {
    pub alphas: Vec<u32>,
    pub values: Vec<Vec<f64>>,
    /// Per-alpha convergence flags.
    pub flags: Vec<bool>,
    /// (n, alpha_index) entries where the sequence increased beyond 1e-12.
    pub monotone_violations: Vec<(usize, usize)>,
}

impl SeminormReport {
    pub fn all_converged(&self) -> bool {
        self.flags.iter().all(|&f| f)
    }
}

/// Evaluates p_K((1 - e_n)^α) for every unit and exponent, recording decay
/// flags and monotonicity violations.
pub fn ps_unit_condition_check(
    spec: &ApproximateUnitSpec,
    k: &StateSampleSet,
    alphas: &[u32],
) -> Result<SeminormReport, TopologyError> {
    if alphas.is_empty() || alphas.contains(&0) {
        return Err(TopologyError::InvalidUnitSpec(
            "exponents must be positive integers".into(),
        ));
    }
    if k.dim() != spec.h.dim() {
        return Err(TopologyError::DimensionMismatch {
            context: format!("states dim {} vs h dim {}", k.dim(), spec.h.dim()),
        });
    }
    let count = spec.unit_count();
    let mut values = vec![vec![0.0; alphas.len()]; count];
    for n in 0..count {
        for (ai, &alpha) in alphas.iter().enumerate() {
            let residual = spec.residual_power(n, alpha);
            values[n][ai] = p_seminorm(residual.matrix(), k)?;
        }
    }
    let mut flags = Vec::with_capacity(alphas.len());
    let mut monotone_violations = Vec::new();
    for ai in 0..alphas.len() {
        let first = values[0][ai];
        let last = values[count - 1][ai];
        flags.push(last < UNIT_DECAY_REL * first || last < UNIT_DECAY_ABS);
        for n in 0..count - 1 {
            if values[n + 1][ai] > values[n][ai] + 1e-12 {
                monotone_violations.push((n, ai));
            }
        }
    }
    Ok(SeminormReport {
        alphas: alphas.to_vec(),
        values,
        flags,
        monotone_violations,
    })
}

/// Diagonal weight profile for the strictly positive h used by the shift
/// experiments.
#[derive(Clone, Copy, Debug)]
pub enum ShiftWeights {
    /// h_k = 1/(k+1).
    Harmonic,
    /// h_k = ratio^k for 0 < ratio < 1.
    Geometric(f64),
}

impl ShiftWeights {
    pub fn diag(&self, dim: usize) -> Result<Vec<f64>, TopologyError> {
        match *self {
            ShiftWeights::Harmonic => Ok((0..dim).map(|k| 1.0 / (k as f64 + 1.0)).collect()),
            ShiftWeights::Geometric(ratio) => {
                if !(0.0 < ratio && ratio < 1.0) {
                    return Err(TopologyError::InvalidUnitSpec(format!(
                        "geometric ratio {ratio} outside (0, 1)"
                    )));
                }
                Ok((0..dim).map(|k| ratio.powi(k as i32)).collect())
            }
        }
    }
}

/// Everything the shift counterexample produces at truncation dim:
/// S_n = |ζ_n><ζ_0| for n < dim against h = diag(h_0, ..., h_{dim-1}).
#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub dim: usize,
    pub h_diag: Vec<f64>,
    /// Δ(S_n, 0) = h_0 h_n.
    pub wu_sequence: Vec<f64>,
    /// Δ(S_n* S_n, 0) = h_0², constant.
    pub product_sequence: Vec<f64>,
    /// ‖h (S_n* - S_m*)‖ over pairs n < m, flattened row-major.
    pub pairwise_strict: Vec<f64>,
    /// ‖h S_n*‖, the left strict seminorm of the adjoint family (= h_0).
    pub adjoint_strict_left: Vec<f64>,
}

impl ShiftReport {
    /// S_n at the report's dimension.
    pub fn shift(dim: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::matrix_unit(dim, n, 0)
    }

    pub fn shift_adjoint(dim: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::matrix_unit(dim, 0, n)
    }
}

/// Builds the shift family with the given weight profile and evaluates the
/// three sequences through the actual seminorm operations (no closed forms).
pub fn shift_family_report(dim: usize, weights: ShiftWeights) -> Result<ShiftReport, TopologyError> {
    if dim < 4 {
        return Err(TopologyError::TruncationTooSmall(dim));
    }
    let h_diag = weights.diag(dim)?;
    let h = HermitianElement::diag(&h_diag);
    let zero = ComplexMatrix::zeros(dim);
    let mut wu_sequence = Vec::with_capacity(dim);
    let mut product_sequence = Vec::with_capacity(dim);
    let mut adjoint_strict_left = Vec::with_capacity(dim);
    for n in 0..dim {
        let s = ShiftReport::shift(dim, n);
        wu_sequence.push(wu_metric(&s, &zero, &h)?);
        let prod = s.adjoint().mul(&s);
        product_sequence.push(wu_metric(&prod, &zero, &h)?);
        adjoint_strict_left.push(strict_seminorms(&ShiftReport::shift_adjoint(dim, n), &h)?.0);
    }
    let mut pairwise_strict = Vec::new();
    for n in 0..dim {
        for m in (n + 1)..dim {
            let diff = ShiftReport::shift_adjoint(dim, n).sub(&ShiftReport::shift_adjoint(dim, m));
            pairwise_strict.push(operator_norm(&h.matrix().mul(&diff)));
        }
    }
    Ok(ShiftReport {
        dim,
        h_diag,
        wu_sequence,
        product_sequence,
        pairwise_strict,
        adjoint_strict_left,
    })
}

/// The shift counterexample with its default harmonic weights.
pub fn counterexample_shift(dim: usize) -> Result<ShiftReport, TopologyError> {
    shift_family_report(dim, ShiftWeights::Harmonic)
}

/// Choice of metric for covering-number computations.
#[derive(Clone, Debug)]
pub enum ElementMetric {
    Wu(HermitianElement),
    StrictLeft(HermitianElement),
    StrictRight(HermitianElement),
    Norm,
}

impl ElementMetric {
    fn validate(&self) -> Result<(), TopologyError> {
        match self {
            ElementMetric::Wu(h) => {
                require_strictly_positive(h)?;
                require_unit_norm(h)
            }
            ElementMetric::StrictLeft(h) | ElementMetric::StrictRight(h) => {
                require_strictly_positive(h)
            }
            ElementMetric::Norm => Ok(()),
        }
    }

    fn distance(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        let diff = a.sub(b);
        match self {
            ElementMetric::Wu(h) => operator_norm(&h.matrix().mul(&diff).mul(h.matrix())),
            ElementMetric::StrictLeft(h) => operator_norm(&h.matrix().mul(&diff)),
            ElementMetric::StrictRight(h) => operator_norm(&diff.mul(h.matrix())),
            ElementMetric::Norm => operator_norm(&diff),
        }
    }
}

/// Size of a greedy farthest-point ε-net over the elements: at most the
/// optimal covering number, with every element within ε of the net. Seeding
/// from index 0 keeps the result deterministic.
pub fn covering_number(
    elements: &[ComplexMatrix],
    metric: &ElementMetric,
    eps: f64,
) -> Result<usize, TopologyError> {
    assert!(!elements.is_empty(), "covering_number needs elements");
    assert!(eps > 0.0, "covering_number needs a positive radius");
    metric.validate()?;
    let mut dist: Vec<f64> = elements
        .iter()
        .map(|e| metric.distance(e, &elements[0]))
        .collect();
    let mut net = 1usize;
    loop {
        let (mut far_idx, mut far_dist) = (0usize, 0.0f64);
        for (i, &d) in dist.iter().enumerate() {
            if d > far_dist {
                far_dist = d;
                far_idx = i;
            }
        }
        if far_dist <= eps {
            return Ok(net);
        }
        net += 1;
        for (i, d) in dist.iter_mut().enumerate() {
            let nd = metric.distance(&elements[i], &elements[far_idx]);
            if nd < *d {
                *d = nd;
            }
        }
    }
}

/// One row of the agreement table: all the seminorm evaluations for one pair
/// of elements.
#[derive(Clone, Debug)]
pub struct PairComparison {
    pub i: usize,
    pub j: usize,
    pub norm_diff: f64,
    pub wu: f64,
    pub strict_left: f64,
    pub strict_right: f64,
    /// ‖h² (a-b)‖ and ‖(a-b) h²‖ — equal to wu when h is central.
    pub central_left: f64,
    pub central_right: f64,
    pub p_values: Vec<f64>,
    pub q_values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct AgreementReport {
    pub pairs: Vec<PairComparison>,
    pub h_norm: f64,
    pub h_min_eig: f64,
    /// max(‖h⁻¹‖⁴, 1), the finite-dimensional comparability constant.
    pub comparability_constant: f64,
    /// Count of ordering-check failures (p <= q, Δ <= ‖h‖²‖a-b‖, the
    /// comparability certificate, and the lower bound (min eig)²‖a-b‖ <= Δ).
    pub ordering_violations: usize,
}

/// Tabulates norm, Δ, strict and state-uniform seminorms over all pairs in
/// the family and checks the orderings that hold at any truncation. The
/// comparability constants blow up as the truncation grows; that growth is
/// exactly what separates these topologies on infinite-dimensional algebras.
pub fn topology_agreement_probe(
    elements: &[ComplexMatrix],
    h: &HermitianElement,
    k_family: &[StateSampleSet],
) -> Result<AgreementReport, TopologyError> {
    require_strictly_positive(h)?;
    require_unit_norm(h)?;
    let h_norm = operator_norm(h.matrix());
    let h_min_eig = min_eigenvalue(h);
    let h_inv_norm = 1.0 / h_min_eig;
    let comparability_constant = h_inv_norm.powi(4).max(1.0);
    let h_sq = h.matrix().mul(h.matrix());

    let mut pairs = Vec::new();
    let mut ordering_violations = 0usize;
    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            let diff = elements[i].sub(&elements[j]);
            let norm_diff = operator_norm(&diff);
            let wu = operator_norm(&h.matrix().mul(&diff).mul(h.matrix()));
            let (strict_left, strict_right) = strict_seminorms(&diff, h)?;
            let central_left = operator_norm(&h_sq.mul(&diff));
            let central_right = operator_norm(&diff.mul(&h_sq));
            let mut p_values = Vec::with_capacity(k_family.len());
            let mut q_values = Vec::with_capacity(k_family.len());
            for k in k_family {
                let p = p_seminorm(&diff, k)?;
                let q = q_seminorm(&diff, k)?;
                if p > q + 1e-10 {
                    ordering_violations += 1;
                }
                let certificate =
                    comparability_constant * (strict_left * strict_left + strict_right * strict_right);
                if q * q > certificate + 1e-8 * (1.0 + certificate) {
                    ordering_violations += 1;
                }
                p_values.push(p);
                q_values.push(q);
            }
            if wu > h_norm * h_norm * norm_diff + 1e-10 {
                ordering_violations += 1;
            }
            if wu < h_min_eig * h_min_eig * norm_diff - 1e-10 {
                ordering_violations += 1;
            }
            pairs.push(PairComparison {
                i,
                j,
                norm_diff,
                wu,
                strict_left,
                strict_right,
                central_left,
                central_right,
                p_values,
                q_values,
            });
        }
    }
    Ok(AgreementReport {
        pairs,
        h_norm,
        h_min_eig,
        comparability_constant,
        ordering_violations,
    })
}

/// Default strictly positive element for compact-operator experiments:
/// diag(1/(k+1)), already of unit norm, spectrum accumulating at 0.
pub fn default_h(dim: usize) -> HermitianElement {
    HermitianElement::diag(
        &(0..dim)
            .map(|k| 1.0 / (k as f64 + 1.0))
            .collect::<Vec<_>>(),
    )
}
