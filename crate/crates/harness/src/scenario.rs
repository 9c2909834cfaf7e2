//! Scenario execution: builds the configured objects, runs the computations
//! for the scenario kind, and persists a flat CSV plus a nested JSON report
//! under `<out>/<scenario id>/`.

use crate::config::{
    HSpec, ScenarioConfig, ScenarioKind, StateFamilySpec, SeminormSpec, TopologyStateFamily,
    UnitSpecConfig,
};
use crate::report::{CsvFile, RunReport, Table};
use crate::{families, HarnessError};
use statedist::classical::{bl_distance, kantorovich, DiscreteMeasure};
use statedist::numlin::HermitianElement;
use statedist::quantum::{
    bl_distance_matrix, CommutatorSeminorm, DensityMatrix, MatrixLipSeminorm, Seminorm,
};
use statedist::rng::SplitMix64;
use statedist::topology::{
    covering_number, ps_unit_condition_check, shift_family_report, topology_agreement_probe,
    ApproximateUnitSpec, BreakpointTable, ElementMetric, ShiftReport, ShiftWeights,
    StateSampleSet, UnitKind,
};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed_override: Option<u64>,
    pub tol_override: Option<f64>,
}

#[derive(Debug)]
pub struct ScenarioOutcome {
    pub report: RunReport,
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
}

impl ScenarioOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

pub fn run_scenario(
    config: &ScenarioConfig,
    opts: &RunOptions,
) -> Result<ScenarioOutcome, HarnessError> {
    config.validate()?;
    let seed = opts.seed_override.unwrap_or(config.seed);
    let (report, csv) = match config.kind {
        ScenarioKind::Classical => run_classical(config, seed)?,
        ScenarioKind::Quantum => run_quantum(config, seed, opts.tol_override)?,
        ScenarioKind::Topology => run_topology(config, seed)?,
    };
    let dir = opts.out_dir.join(&config.id);
    std::fs::create_dir_all(&dir)?;
    let csv_path = dir.join("results.csv");
    csv.save(&csv_path)?;
    let report_path = dir.join("report.json");
    report.save(&report_path)?;
    Ok(ScenarioOutcome {
        report,
        csv_path,
        report_path,
    })
}

fn run_classical(
    config: &ScenarioConfig,
    seed: u64,
) -> Result<(RunReport, CsvFile), HarnessError> {
    let params = config.classical.as_ref().expect("validated");
    let space = Arc::new(params.space.build()?);
    let mut measures = Vec::with_capacity(params.measures.len());
    for (idx, spec) in params.measures.iter().enumerate() {
        if spec.space_id != params.space_id {
            return Err(HarnessError::Config(format!(
                "measure {idx} references space_id '{}', expected '{}'",
                spec.space_id, params.space_id
            )));
        }
        measures.push(DiscreteMeasure::new(space.clone(), spec.weights.clone())?);
    }
    let mut report = RunReport::new(&config.id, "classical", seed);
    let mut csv = CsvFile::new("scenario_id,alpha,beta,value,witness_norm,lip_of_witness");
    let mut bl_table = Table::new("bl_distances", &["i", "j", "value"]);
    let mut k_table = Table::new("kantorovich_distances", &["i", "j", "value"]);

    for i in 0..measures.len() {
        for j in (i + 1)..measures.len() {
            let d = bl_distance(&measures[i], &measures[j], params.alpha, params.beta)?;
            if !d.witness.is_feasible(&space) {
                report
                    .failures
                    .push(format!("bl witness infeasible on pair ({i},{j})"));
            }
            if d.value > 2.0 * params.alpha + 1e-9 {
                report
                    .failures
                    .push(format!("bl value exceeds the 2*alpha diameter on ({i},{j})"));
            }
            csv.push(format!(
                "{}/bl[{}-{}],{},{},{},{},{}",
                config.id,
                i,
                j,
                params.alpha,
                params.beta,
                d.value,
                d.witness.sup_norm(),
                d.witness.lip_constant(&space)
            ));
            bl_table.push(vec![i as f64, j as f64, d.value]);
            if params.kantorovich {
                let k = kantorovich(&measures[i], &measures[j], params.beta)?;
                if d.value > k.value + 1e-9 {
                    report
                        .failures
                        .push(format!("bl exceeds kantorovich on ({i},{j})"));
                }
                csv.push(format!(
                    "{}/kantorovich[{}-{}],inf,{},{},{},{}",
                    config.id,
                    i,
                    j,
                    params.beta,
                    k.value,
                    k.witness.sup_norm(),
                    k.witness.lip_constant(&space)
                ));
                k_table.push(vec![i as f64, j as f64, k.value]);
            }
        }
    }
    report.tables.push(bl_table);
    if params.kantorovich {
        report.tables.push(k_table);
    }
    Ok((report, csv))
}

fn run_quantum(
    config: &ScenarioConfig,
    seed: u64,
    tol_override: Option<f64>,
) -> Result<(RunReport, CsvFile), HarnessError> {
    let params = config.quantum.as_ref().expect("validated");
    let seminorm = match &params.seminorm {
        SeminormSpec::Commutator { d } => {
            Seminorm::Commutator(CommutatorSeminorm::new(d.build_hermitian()?))
        }
        SeminormSpec::Grid { space, fiber_dim } => Seminorm::Grid(MatrixLipSeminorm::new(
            Arc::new(space.build()?),
            *fiber_dim,
        )),
    };
    let states: Vec<DensityMatrix> = match &params.states {
        StateFamilySpec::Explicit { list } => list
            .iter()
            .map(|m| Ok(DensityMatrix::new(m.build_hermitian()?)?))
            .collect::<Result<_, HarnessError>>()?,
        StateFamilySpec::Random { count } => {
            let mut rng = SplitMix64::new(seed);
            (0..*count)
                .map(|_| families::random_density(&mut rng, params.dim))
                .collect()
        }
    };
    let mut solver = params.solver.clone().unwrap_or_default();
    if let Some(tol) = tol_override {
        solver.tol = tol;
    }
    solver
        .validate()
        .map_err(HarnessError::Config)?;

    let mut report = RunReport::new(&config.id, "quantum", seed);
    let mut csv = CsvFile::new("scenario_id,value,iters,primal_res,dual_res,feasibility_slack");
    let mut table = Table::new(
        "matrix_distances",
        &["i", "j", "value", "iters", "primal_res", "dual_res"],
    );
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let d = bl_distance_matrix(
                &states[i],
                &states[j],
                &seminorm,
                params.alpha,
                params.beta,
                &solver,
            )?;
            let diag = &d.diagnostics;
            if diag.feasibility_slack < -1e-8 {
                report
                    .failures
                    .push(format!("witness infeasible on pair ({i},{j})"));
            }
            if d.value > 2.0 * params.alpha + 1e-6 {
                report
                    .failures
                    .push(format!("value exceeds the 2*alpha diameter on ({i},{j})"));
            }
            csv.push(format!(
                "{}/d[{}-{}],{},{},{},{},{}",
                config.id, i, j, d.value, diag.iters, diag.primal_res, diag.dual_res,
                diag.feasibility_slack
            ));
            table.push(vec![
                i as f64,
                j as f64,
                d.value,
                diag.iters as f64,
                diag.primal_res,
                diag.dual_res,
            ]);
        }
    }
    report.tables.push(table);
    Ok((report, csv))
}

fn build_h(spec: &HSpec, dim: usize) -> Result<HermitianElement, HarnessError> {
    match spec {
        HSpec::Harmonic => Ok(statedist::topology::default_h(dim)),
        HSpec::Geometric { ratio } => {
            let diag = ShiftWeights::Geometric(*ratio).diag(dim)?;
            Ok(HermitianElement::diag(&diag))
        }
        HSpec::Explicit { matrix } => matrix.build_hermitian(),
    }
}

fn build_states(
    family: &TopologyStateFamily,
    dim: usize,
    seed: u64,
) -> Result<StateSampleSet, HarnessError> {
    let states: Vec<DensityMatrix> = match family {
        TopologyStateFamily::Eigenstates { indices } => indices
            .iter()
            .map(|&k| Ok(DensityMatrix::basis_state(dim, k)?))
            .collect::<Result<_, HarnessError>>()?,
        TopologyStateFamily::UniformMixture => {
            vec![DensityMatrix::from_weights(&vec![1.0 / dim as f64; dim])?]
        }
        TopologyStateFamily::Superpositions { pairs } => pairs
            .iter()
            .map(|&(i, j)| Ok(DensityMatrix::superposition(dim, i, j)?))
            .collect::<Result<_, HarnessError>>()?,
        TopologyStateFamily::Random { count } => {
            let mut rng = SplitMix64::new(seed);
            (0..*count)
                .map(|_| families::random_density(&mut rng, dim))
                .collect()
        }
    };
    Ok(StateSampleSet::new(states)?)
}

fn run_topology(
    config: &ScenarioConfig,
    seed: u64,
) -> Result<(RunReport, CsvFile), HarnessError> {
    let params = config.topology.as_ref().expect("validated");
    let dim = params.truncation_dim;
    let h = build_h(&params.h, dim)?;
    let unit_kind = match &params.unit_spec {
        UnitSpecConfig::TruncationProjections => UnitKind::TruncationProjections,
        UnitSpecConfig::SpectralUnit { thresholds } => UnitKind::SpectralUnit(thresholds.clone()),
        UnitSpecConfig::PsUnit { tables } => {
            let tables = tables
                .iter()
                .map(|pts| Ok(BreakpointTable::new(pts.clone())?))
                .collect::<Result<Vec<_>, HarnessError>>()?;
            UnitKind::PsUnit(tables)
        }
    };
    let unit_spec = ApproximateUnitSpec::new(unit_kind, h.clone())?;
    let sample = build_states(&params.state_family, dim, seed)?;

    let mut report = RunReport::new(&config.id, "topology", seed);
    let mut csv = CsvFile::new("probe,n,value");

    // approximate-unit decay
    let decay = ps_unit_condition_check(&unit_spec, &sample, &params.alphas)?;
    let mut unit_table = Table::new("ps_unit_values", &["n", "alpha", "p_K_value"]);
    for (n, row) in decay.values.iter().enumerate() {
        for (ai, &value) in row.iter().enumerate() {
            unit_table.push(vec![n as f64, decay.alphas[ai] as f64, value]);
            csv.push(format!("ps_unit[alpha={}],{},{}", decay.alphas[ai], n, value));
        }
    }
    if !decay.monotone_violations.is_empty() {
        report.failures.push(format!(
            "{} monotone violations in the unit decay table",
            decay.monotone_violations.len()
        ));
    }
    report.tables.push(unit_table);

    // shift family
    let weights = match &params.h {
        HSpec::Geometric { ratio } => ShiftWeights::Geometric(*ratio),
        _ => ShiftWeights::Harmonic,
    };
    let shift = shift_family_report(dim, weights)?;
    let mut shift_table = Table::new("shift_sequences", &["n", "wu_metric", "strict_left"]);
    for n in 0..dim {
        shift_table.push(vec![
            n as f64,
            shift.wu_sequence[n],
            shift.adjoint_strict_left[n],
        ]);
        csv.push(format!("shift_wu,{},{}", n, shift.wu_sequence[n]));
        csv.push(format!(
            "shift_strict_left,{},{}",
            n, shift.adjoint_strict_left[n]
        ));
    }
    report.tables.push(shift_table);

    // covering numbers of the adjoint shift family
    let adjoints: Vec<_> = (0..dim).map(|n| ShiftReport::shift_adjoint(dim, n)).collect();
    let strict_metric = ElementMetric::StrictLeft(h.clone());
    let wu_metric = ElementMetric::Wu(h.clone());
    let mut cover_table = Table::new("covering", &["eps", "strict_left_count", "wu_count"]);
    for (k, &eps) in params.eps_grid.iter().enumerate() {
        let strict_count = covering_number(&adjoints, &strict_metric, eps)?;
        let wu_count = covering_number(&adjoints, &wu_metric, eps)?;
        cover_table.push(vec![eps, strict_count as f64, wu_count as f64]);
        csv.push(format!("covering_strict_left,{k},{strict_count}"));
        csv.push(format!("covering_wu,{k},{wu_count}"));
        if wu_count > strict_count {
            report
                .failures
                .push(format!("wu net larger than strict net at eps {eps}"));
        }
    }
    report.tables.push(cover_table);

    // agreement probe over the shift family against the sampled states
    let probe = topology_agreement_probe(&adjoints, &h, std::slice::from_ref(&sample))?;
    if probe.ordering_violations > 0 {
        report.failures.push(format!(
            "{} seminorm ordering violations in the agreement probe",
            probe.ordering_violations
        ));
    }
    let mut probe_table = Table::new(
        "agreement",
        &["i", "j", "norm_diff", "wu", "strict_left", "strict_right"],
    );
    for row in &probe.pairs {
        probe_table.push(vec![
            row.i as f64,
            row.j as f64,
            row.norm_diff,
            row.wu,
            row.strict_left,
            row.strict_right,
        ]);
    }
    report.tables.push(probe_table);

    Ok((report, csv))
}

/// Reads a report back and exports its tables for plotting.
pub fn emit_plots(report_path: &Path, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let report = RunReport::load(report_path)?;
    crate::report::emit_plot_data(&report, out_dir)
}
