//! Canned, re-runnable experiments. Each target builds its instances from
//! scratch, checks the bounds it is committed to, and reports one pass/fail
//! line per check; `reproduce` exits nonzero when any line fails.

use crate::families;
use crate::report::{RunReport, Table};
use crate::HarnessError;
use statedist::classical::{
    bl_distance, bl_family_ratio, kantorovich, midpoint_check, weakstar_probe, DiscreteMeasure,
    FiniteMetricSpace,
};
use statedist::numlin::{ComplexMatrix, HermitianElement};
use statedist::quantum::{
    bl_distance_matrix, CommutatorSeminorm, DensityMatrix, MatrixLipSeminorm, Seminorm,
};
use statedist::rng::SplitMix64;
use statedist::topology::{
    covering_number, ps_unit_condition_check, shift_family_report, ApproximateUnitSpec,
    ElementMetric, ShiftReport, ShiftWeights, StateSampleSet, UnitKind,
};
use statedist::SolverConfig;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

pub const TARGETS: &[&str] = &[
    "example1",
    "example2",
    "metricseq",
    "midpoint",
    "two-point-triple",
    "shift",
    "compact-family",
    "ps-units",
];

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct ReproduceReport {
    pub target: String,
    pub lines: Vec<CheckLine>,
    pub tables: Vec<Table>,
}

impl ReproduceReport {
    fn new(target: &str) -> Self {
        ReproduceReport {
            target: target.to_string(),
            lines: Vec::new(),
            tables: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.lines.push(CheckLine {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("reproduce {}\n", self.target);
        for line in &self.lines {
            out.push_str(&format!(
                "  [{}] {} — {}\n",
                if line.passed { "PASS" } else { "FAIL" },
                line.name,
                line.detail
            ));
        }
        out.push_str(&format!(
            "  => {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

pub fn reproduce(name: &str, out: Option<&Path>) -> Result<ReproduceReport, HarnessError> {
    let report = match name {
        "example1" => example1()?,
        "example2" => example2()?,
        "metricseq" => metricseq()?,
        "midpoint" => midpoint()?,
        "two-point-triple" => two_point_triple()?,
        "shift" => shift()?,
        "compact-family" => compact_family()?,
        "ps-units" => ps_units()?,
        other => return Err(HarnessError::UnknownScenario(other.to_string())),
    };
    if let Some(dir) = out {
        let mut run = RunReport::new(&report.target, "reproduce", 0);
        run.tables = report.tables.clone();
        for line in &report.lines {
            if !line.passed {
                run.failures
                    .push(format!("{}: {}", line.name, line.detail));
            }
        }
        let target_dir = dir.join(&report.target);
        std::fs::create_dir_all(&target_dir)?;
        run.save(&target_dir.join("report.json"))?;
    }
    Ok(report)
}

fn two_point_space(distance: f64) -> Arc<FiniteMetricSpace> {
    Arc::new(
        FiniteMetricSpace::new(
            vec!["0".into(), "far".into()],
            vec![vec![0.0, distance], vec![distance, 0.0]],
        )
        .expect("valid two point space"),
    )
}

/// Drifting two-point states: the Kantorovich distance from the origin mass
/// stays pinned at 1 while the bounded-Lipschitz distance decays like 2/n,
/// even though the pairings against decaying test functions converge.
fn example1() -> Result<ReproduceReport, HarnessError> {
    let start = Instant::now();
    let mut report = ReproduceReport::new("example1");
    let mut table = Table::new("family", &["n", "kantorovich", "bl_distance"]);
    let mut worst_k = 0.0f64;
    let mut worst_bl = 0.0f64;
    for n in 2..=64u32 {
        let nf = n as f64;
        let space = two_point_space(nf);
        let origin = DiscreteMeasure::dirac(space.clone(), 0)?;
        let drifting = DiscreteMeasure::new(space.clone(), vec![1.0 - 1.0 / nf, 1.0 / nf])?;
        let k = kantorovich(&origin, &drifting, 1.0)?.value;
        let bl = bl_distance(&origin, &drifting, 1.0, 1.0)?.value;
        worst_k = worst_k.max((k - 1.0).abs());
        worst_bl = worst_bl.max((bl - 2.0 / nf).abs());
        table.push(vec![nf, k, bl]);
    }
    report.check(
        "kantorovich pinned at 1 for n = 2..64",
        worst_k <= 1e-9,
        format!("worst |k - 1| = {worst_k:.3e} (tol 1e-9)"),
    );
    report.check(
        "bounded-Lipschitz equals 2/n",
        worst_bl <= 1e-9,
        format!("worst |bl - 2/n| = {worst_bl:.3e} (tol 1e-9)"),
    );

    // weak* evidence on a common line space with decaying test functions
    let coords: Vec<f64> = (0..=64).map(|i| i as f64).collect();
    let line = Arc::new(FiniteMetricSpace::line(&coords)?);
    let seq: Vec<DiscreteMeasure> = (2..=64)
        .map(|n| {
            let nf = n as f64;
            let mut w = vec![0.0; coords.len()];
            w[0] = 1.0 - 1.0 / nf;
            w[n as usize] = 1.0 / nf;
            DiscreteMeasure::new(line.clone(), w)
        })
        .collect::<Result<_, _>>()?;
    let limit = DiscreteMeasure::dirac(line.clone(), 0)?;
    let panel: Vec<Vec<f64>> = vec![
        coords.iter().map(|&t| t * (-t).exp()).collect(),
        coords.iter().map(|&t| t * (-t / 2.0).exp()).collect(),
    ];
    let probe = weakstar_probe(&seq, &limit, &panel)?;
    report.check(
        "weak* convergence flags true",
        probe.all_converged(),
        format!(
            "tail deviations {:?}",
            probe
                .series
                .iter()
                .map(|s| format!("{:.2e}", s.tail_deviation))
                .collect::<Vec<_>>()
        ),
    );
    let elapsed = start.elapsed().as_secs_f64();
    report.check("runtime < 1 s", elapsed < 1.0, format!("{elapsed:.3}s"));
    report.tables.push(table);
    Ok(report)
}

/// Dyadic family on the points 4^k: the Kantorovich distance to the origin
/// mass grows like 2^N, so it diverges with the truncation.
fn example2() -> Result<ReproduceReport, HarnessError> {
    let start = Instant::now();
    let mut report = ReproduceReport::new("example2");
    let mut table = Table::new("family", &["N", "kantorovich", "closed_form"]);
    let mut all_match = true;
    let mut all_exceed = true;
    let mut detail = String::new();
    for n_max in 2..=10u32 {
        let mut coords = vec![0.0];
        coords.extend((0..=n_max).map(|k| 4.0f64.powi(k as i32)));
        let space = Arc::new(FiniteMetricSpace::line(&coords)?);
        let normalizer = 1.0 - 0.5f64.powi(n_max as i32 + 1);
        let mut weights = vec![0.0; coords.len()];
        let mut closed_form = 0.0;
        for k in 0..=n_max {
            let w = 0.5f64.powi(k as i32 + 1) / normalizer;
            weights[(k + 1) as usize] = w;
            closed_form += w * 4.0f64.powi(k as i32);
        }
        let phi = DiscreteMeasure::new(space.clone(), weights)?;
        let origin = DiscreteMeasure::dirac(space.clone(), 0)?;
        let k_val = kantorovich(&phi, &origin, 1.0)?.value;
        table.push(vec![n_max as f64, k_val, closed_form]);
        let rel = (k_val - closed_form).abs() / closed_form;
        if rel > 1e-6 {
            all_match = false;
            detail = format!("N={n_max}: rel err {rel:.3e}");
        }
        if k_val < 2.0f64.powi(n_max as i32 - 1) {
            all_exceed = false;
        }
    }
    report.check(
        "kantorovich equals the transport closed form (rel tol 1e-6)",
        all_match,
        if detail.is_empty() {
            "closed form is 2^N exactly".into()
        } else {
            detail
        },
    );
    report.check(
        "value exceeds 2^(N-1) for N = 2..10",
        all_exceed,
        "divergence with the truncation".into(),
    );
    let elapsed = start.elapsed().as_secs_f64();
    report.check("runtime < 1 s", elapsed < 1.0, format!("{elapsed:.3}s"));
    report.tables.push(table);
    Ok(report)
}

/// Parameter-sandwich equivalence of the distance family:
/// min(α,β) d_{1,1} <= d_{α,β} <= max(α,β) d_{1,1}, over LP and splitting
/// instances.
fn metricseq() -> Result<ReproduceReport, HarnessError> {
    let start = Instant::now();
    let mut report = ReproduceReport::new("metricseq");
    let mut rng = SplitMix64::new(0x5eed_0003);
    let mut worst_classical = 0.0f64;
    for _ in 0..150 {
        let points = 2 + rng.next_index(5);
        let space = families::random_space(&mut rng, points);
        let mu = families::random_state(&mut rng, &space);
        let nu = families::random_state(&mut rng, &space);
        let alpha = rng.next_range(0.3, 2.0);
        let beta = rng.next_range(0.3, 2.0);
        let (d_ab, d_11) = bl_family_ratio(&mu, &nu, alpha, beta)?;
        let lo = alpha.min(beta) * d_11 - d_ab;
        let hi = d_ab - alpha.max(beta) * d_11;
        worst_classical = worst_classical.max(lo).max(hi);
    }
    report.check(
        "classical sandwich over 150 LP instances",
        worst_classical <= 1e-8,
        format!("worst violation {worst_classical:.3e} (tol 1e-8)"),
    );

    let config = SolverConfig::default().with_tol(1e-8);
    let mut worst_matrix = 0.0f64;
    for _ in 0..50 {
        let dim = 2 + rng.next_index(3);
        let rho1 = families::random_density(&mut rng, dim);
        let rho2 = families::random_density(&mut rng, dim);
        let d = families::random_hermitian(&mut rng, dim);
        let seminorm = Seminorm::Commutator(CommutatorSeminorm::new(d));
        let alpha = rng.next_range(0.5, 2.0);
        let beta = rng.next_range(0.5, 2.0);
        let d_ab = bl_distance_matrix(&rho1, &rho2, &seminorm, alpha, beta, &config)?.value;
        let d_11 = bl_distance_matrix(&rho1, &rho2, &seminorm, 1.0, 1.0, &config)?.value;
        let lo = alpha.min(beta) * d_11 - d_ab;
        let hi = d_ab - alpha.max(beta) * d_11;
        worst_matrix = worst_matrix.max(lo).max(hi);
    }
    report.check(
        "matrix sandwich over 50 splitting instances",
        worst_matrix <= 1e-4,
        format!("worst violation {worst_matrix:.3e} (tol 1e-4)"),
    );
    let elapsed = start.elapsed().as_secs_f64();
    report.check("runtime < 60 s", elapsed < 60.0, format!("{elapsed:.2}s"));
    Ok(report)
}

/// Midpoint identity d((φ+ψ)/2, ψ) = d(φ, ψ)/2 over random pairs.
fn midpoint() -> Result<ReproduceReport, HarnessError> {
    let start = Instant::now();
    let mut report = ReproduceReport::new("midpoint");
    let mut rng = SplitMix64::new(0x5eed_0004);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let points = 2 + rng.next_index(5);
        let space = families::random_space(&mut rng, points);
        let phi = families::random_state(&mut rng, &space);
        let psi = families::random_state(&mut rng, &space);
        let alpha = rng.next_range(0.4, 1.6);
        let beta = rng.next_range(0.4, 1.6);
        let (lhs, rhs) = midpoint_check(&phi, &psi, alpha, beta)?;
        worst = worst.max((lhs - rhs).abs());
    }
    report.check(
        "midpoint identity over 100 random pairs",
        worst <= 1e-8,
        format!("worst |lhs - rhs| = {worst:.3e} (tol 1e-8)"),
    );
    let elapsed = start.elapsed().as_secs_f64();
    report.check("runtime < 30 s", elapsed < 30.0, format!("{elapsed:.2}s"));
    Ok(report)
}

fn offdiag_seminorm(re: f64, im: f64) -> Seminorm {
    let d = HermitianElement::from_re_im(
        &[vec![0.0, re], vec![re, 0.0]],
        &[vec![0.0, im], vec![-im, 0.0]],
    )
    .expect("hermitian by construction");
    Seminorm::Commutator(CommutatorSeminorm::new(d))
}

/// Two-point spectral data on M_2: the distance between the diagonal pure
/// states is min(2α, β/|m|).
fn two_point_triple() -> Result<ReproduceReport, HarnessError> {
    let mut report = ReproduceReport::new("two-point-triple");
    let e11 = DensityMatrix::basis_state(2, 0)?;
    let e22 = DensityMatrix::basis_state(2, 1)?;
    let config = SolverConfig::default().with_tol(1e-9);
    let mut table = Table::new("distances", &["m", "alpha", "value", "expected"]);

    let mut worst_inactive = 0.0f64;
    let mut worst_active = 0.0f64;
    for &m in &[0.5, 1.0, 2.0, 4.0] {
        let seminorm = offdiag_seminorm(m, 0.0);
        let d = bl_distance_matrix(&e11, &e22, &seminorm, 10.0, 1.0, &config)?.value;
        worst_inactive = worst_inactive.max((d - 1.0 / m).abs());
        table.push(vec![m, 10.0, d, 1.0 / m]);

        let alpha = 0.2f64;
        let expected = (2.0 * alpha).min(1.0 / m);
        let d_active = bl_distance_matrix(&e11, &e22, &seminorm, alpha, 1.0, &config)?.value;
        worst_active = worst_active.max((d_active - expected).abs());
        table.push(vec![m, alpha, d_active, expected]);
    }
    report.check(
        "inactive sup-norm bound: value = 1/|m|",
        worst_inactive <= 1e-4,
        format!("worst gap {worst_inactive:.3e} (tol 1e-4)"),
    );
    report.check(
        "active sup-norm bound: value = min(2a, 1/|m|)",
        worst_active <= 1e-4,
        format!("worst gap {worst_active:.3e} (tol 1e-4)"),
    );

    // a complex phase on the off-diagonal entry leaves |m| in charge
    let d_phase = bl_distance_matrix(&e11, &e22, &offdiag_seminorm(0.0, 2.0), 10.0, 1.0, &config)?
        .value;
    report.check(
        "complex coupling phase is irrelevant",
        (d_phase - 0.5).abs() <= 1e-4,
        format!("|m| = 2 with phase i: value {d_phase:.6}"),
    );
    report.tables.push(table);
    Ok(report)
}

/// The rank-one shift family: uniform-weak decay with a constant product
/// sequence and strict-seminorm equidistance, at every truncation 4..32.
fn shift() -> Result<ReproduceReport, HarnessError> {
    let start = Instant::now();
    let mut report = ReproduceReport::new("shift");
    let ratio = 1.0 / 16.0;
    let mut worst_closed = 0.0f64;
    let mut decreasing = true;
    let mut worst_product = 0.0f64;
    let mut worst_pairwise = 0.0f64;
    let mut decay_ok = true;
    let mut covering_ok = true;
    let mut table = Table::new("sequences", &["dim", "n", "wu_metric", "strict_left"]);

    for dim in 4..=32usize {
        for weights in [ShiftWeights::Harmonic, ShiftWeights::Geometric(ratio)] {
            let rep = shift_family_report(dim, weights)?;
            let h0 = rep.h_diag[0];
            for n in 0..dim {
                let expected = h0 * rep.h_diag[n];
                worst_closed = worst_closed.max((rep.wu_sequence[n] - expected).abs());
                worst_product = worst_product.max((rep.product_sequence[n] - h0 * h0).abs());
            }
            for w in rep.wu_sequence.windows(2) {
                if w[1] >= w[0] {
                    decreasing = false;
                }
            }
            let equi = h0 * 2.0f64.sqrt();
            for &v in &rep.pairwise_strict {
                worst_pairwise = worst_pairwise.max((v - equi).abs());
            }

            let geometric = matches!(weights, ShiftWeights::Geometric(_));
            if geometric && rep.wu_sequence[dim - 1] >= 1e-3 * h0 {
                decay_ok = false;
            }
            if dim == 32 && geometric {
                for n in 0..dim {
                    table.push(vec![
                        dim as f64,
                        n as f64,
                        rep.wu_sequence[n],
                        rep.adjoint_strict_left[n],
                    ]);
                }
            }

            let h = HermitianElement::diag(&rep.h_diag);
            let adjoints: Vec<ComplexMatrix> = (0..dim)
                .map(|n| ShiftReport::shift_adjoint(dim, n))
                .collect();
            let strict_net = covering_number(
                &adjoints,
                &ElementMetric::StrictLeft(h.clone()),
                equi / 2.0,
            )?;
            let wu_eps = 2.0 * h0 * rep.h_diag[1];
            let wu_net = covering_number(&adjoints, &ElementMetric::Wu(h), wu_eps)?;
            if strict_net != dim || wu_net > 3 {
                covering_ok = false;
            }
        }
    }
    report.check(
        "wu sequence equals h0*h_n, strictly decreasing",
        worst_closed <= 1e-12 && decreasing,
        format!("worst closed-form gap {worst_closed:.3e} (tol 1e-12)"),
    );
    report.check(
        "adjoint-product sequence constant at h0^2",
        worst_product <= 1e-12,
        format!("worst gap {worst_product:.3e} (tol 1e-12)"),
    );
    report.check(
        "pairwise strict distances equal h0*sqrt(2)",
        worst_pairwise <= 1e-10,
        format!("worst gap {worst_pairwise:.3e} (tol 1e-10)"),
    );
    report.check(
        "geometric weights decay below 1e-3*h0 at n = dim-1",
        decay_ok,
        format!("ratio {ratio}"),
    );
    report.check(
        "strict net has one ball per element, wu net at most 3",
        covering_ok,
        "eps = h0*sqrt(2)/2 and 2*h0*h1".into(),
    );
    let elapsed = start.elapsed().as_secs_f64();
    report.check("runtime < 5 s", elapsed < 5.0, format!("{elapsed:.2}s"));
    report.tables.push(table);
    Ok(report)
}

/// Matrix-valued Lipschitz grids: scalar fibers reduce to the classical LP,
/// and the fibered shift family keeps its uniform-weak/strict contrast.
fn compact_family() -> Result<ReproduceReport, HarnessError> {
    let start = Instant::now();
    let mut report = ReproduceReport::new("compact-family");
    let mut rng = SplitMix64::new(0x5eed_0005);
    let config = SolverConfig::default().with_tol(1e-8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let points = 2 + rng.next_index(4);
        let space = families::random_space(&mut rng, points);
        let mu = families::random_state(&mut rng, &space);
        let nu = families::random_state(&mut rng, &space);
        let alpha = rng.next_range(0.3, 1.0);
        let beta = alpha * rng.next_range(1.0, 2.0);
        let seminorm = Seminorm::Grid(MatrixLipSeminorm::new(space.clone(), 1));
        let rho1 = DensityMatrix::from_weights(mu.weights())?;
        let rho2 = DensityMatrix::from_weights(nu.weights())?;
        let quantum = bl_distance_matrix(&rho1, &rho2, &seminorm, alpha, beta, &config)?;
        let classical = bl_distance(&mu, &nu, alpha, beta)?;
        worst = worst.max((quantum.value - classical.value).abs());
    }
    report.check(
        "scalar-fiber grids match the classical LP (50 instances)",
        worst <= 1e-4,
        format!("worst gap {worst:.3e} (tol 1e-4)"),
    );

    // genuinely matrix-valued smoke instance
    let space = families::random_space(&mut rng, 3);
    let seminorm = Seminorm::Grid(MatrixLipSeminorm::new(space.clone(), 2));
    let rho1 = families::random_density(&mut rng, 6);
    let rho2 = families::random_density(&mut rng, 6);
    let d = bl_distance_matrix(&rho1, &rho2, &seminorm, 1.0, 1.0, &config)?;
    report.check(
        "matrix-fiber instance stays feasible and bounded",
        d.value >= -1e-12
            && d.value <= 2.0 + 1e-6
            && d.diagnostics.feasibility_slack >= -1e-8,
        format!(
            "value {:.6}, slack {:.2e}",
            d.value, d.diagnostics.feasibility_slack
        ),
    );

    // fibered shift family f (x) S_n^*: uniform-weak decay against a flat
    // strict profile, embedded block-diagonally over a two-point base
    let fiber_dim = 8usize;
    let f_values = [1.0, 0.6];
    let big = 2 * fiber_dim;
    let family: Vec<ComplexMatrix> = (1..fiber_dim)
        .map(|n| {
            let mut m = ComplexMatrix::zeros(big);
            for (p, &f) in f_values.iter().enumerate() {
                m.set(
                    p * fiber_dim,
                    p * fiber_dim + n,
                    num_complex::Complex64::new(f, 0.0),
                )
            }
            m
        })
        .collect();
    let mut h_diag = Vec::with_capacity(big);
    for _ in 0..2 {
        for k in 0..fiber_dim {
            h_diag.push(1.0 / (k as f64 + 1.0));
        }
    }
    let h = HermitianElement::diag(&h_diag);
    let strict_net = covering_number(
        &family,
        &ElementMetric::StrictLeft(h.clone()),
        2.0f64.sqrt() / 2.0,
    )?;
    let wu_net = covering_number(&family, &ElementMetric::Wu(h), 0.5)?;
    report.check(
        "fibered shifts: strict net exhausts the family, wu net collapses",
        strict_net == family.len() && wu_net <= 3,
        format!("strict {strict_net}, wu {wu_net} over {} elements", family.len()),
    );

    let elapsed = start.elapsed().as_secs_f64();
    report.check("runtime < 30 s", elapsed < 30.0, format!("{elapsed:.2}s"));
    Ok(report)
}

/// Approximate-unit decay at truncation 32 against adversarial state
/// families, for both projection-type units.
fn ps_units() -> Result<ReproduceReport, HarnessError> {
    let mut report = ReproduceReport::new("ps-units");
    let dim = 32usize;
    let h = statedist::topology::default_h(dim);
    let alphas = [1u32, 2, 3];

    let samples: Vec<(&str, StateSampleSet)> = vec![
        (
            "eigenstates",
            StateSampleSet::new(vec![
                DensityMatrix::basis_state(dim, 0)?,
                DensityMatrix::basis_state(dim, 8)?,
                DensityMatrix::basis_state(dim, 31)?,
            ])?,
        ),
        (
            "uniform mixture",
            StateSampleSet::new(vec![DensityMatrix::from_weights(&vec![
                1.0 / dim as f64;
                dim
            ])?])?,
        ),
        (
            "superpositions",
            StateSampleSet::new(vec![
                DensityMatrix::superposition(dim, 0, 1)?,
                DensityMatrix::superposition(dim, 0, 16)?,
                DensityMatrix::superposition(dim, 1, 31)?,
            ])?,
        ),
    ];

    let thresholds: Vec<f64> = (0..=8).map(|n| 0.5f64.powi(n)).collect();
    let specs: Vec<(&str, ApproximateUnitSpec)> = vec![
        (
            "truncation projections",
            ApproximateUnitSpec::new(UnitKind::TruncationProjections, h.clone())?,
        ),
        (
            "spectral unit",
            ApproximateUnitSpec::new(UnitKind::SpectralUnit(thresholds), h.clone())?,
        ),
    ];

    let mut table = Table::new("decay", &["spec", "sample", "n", "alpha", "p_K_value"]);
    for (si, (spec_name, spec)) in specs.iter().enumerate() {
        for (ki, (sample_name, sample)) in samples.iter().enumerate() {
            let decay = ps_unit_condition_check(spec, sample, &alphas)?;
            for (n, row) in decay.values.iter().enumerate() {
                for (ai, &v) in row.iter().enumerate() {
                    table.push(vec![si as f64, ki as f64, n as f64, alphas[ai] as f64, v]);
                }
            }
            report.check(
                &format!("{spec_name} / {sample_name}: nonincreasing decay"),
                decay.monotone_violations.is_empty(),
                format!("{} violations", decay.monotone_violations.len()),
            );
            report.check(
                &format!("{spec_name} / {sample_name}: final below 1e-6 of initial"),
                decay.all_converged(),
                format!(
                    "final values {:?}",
                    decay
                        .values
                        .last()
                        .map(|row| row
                            .iter()
                            .map(|v| format!("{v:.1e}"))
                            .collect::<Vec<_>>())
                        .unwrap_or_default()
                ),
            );
        }
    }
    report.tables.push(table);
    Ok(report)
}
