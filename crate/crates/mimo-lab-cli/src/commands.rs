//! The seven subcommands: argument structs and handlers.

use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use mimo_lab_core::engine::{self, SweepResult};
use mimo_lab_core::scaling::{self, ScalingExponents};
use mimo_lab_core::scenario::{self, Precoder, ScenarioCase};
use mimo_lab_core::stats::log_log_slope;
use mimo_lab_core::{mrt, zf, NetworkConfig};
use serde_json::json;

use crate::error::CliError;
use crate::output::{self, OutputOpts, Row};
use crate::plot;
use crate::select::CaseSelect;

/// Monte Carlo options shared by the simulating subcommands.
#[derive(Debug, clap::Args)]
pub struct SimOpts {
    /// Monte Carlo trials per grid point
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    /// Worker threads: 0 = default pool, 1 = plain sequential
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Master seed; every output is a pure function of it
    #[arg(long, env = "MIMO_LAB_SEED", default_value_t = 2026)]
    pub seed: u64,
}

// ---------------------------------------------------------------------------
// analytic
// ---------------------------------------------------------------------------

/// Closed-form performance of the selected cases over their antenna grids.
#[derive(Debug, clap::Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub select: CaseSelect,
    #[command(flatten)]
    pub output: OutputOpts,
}

fn analytic_point(case: &ScenarioCase, m: usize) -> Result<(f64, f64, f64), CliError> {
    let cfg = case.config_at(m)?;
    let (eff, rate, sum) = match case.precoder {
        Precoder::Mrt => (
            mrt::effective_sinr(&cfg)?,
            mrt::rate_lower_bound(&cfg)?,
            mrt::sum_rate_lower_bound(&cfg)?,
        ),
        Precoder::Zf => (
            zf::effective_sinr(&cfg)?,
            zf::rate_lower_bound(&cfg)?,
            zf::sum_rate_lower_bound(&cfg)?,
        ),
    };
    Ok((eff, rate, sum))
}

pub fn analytic(args: &AnalyticArgs) -> Result<(), CliError> {
    let cases = args.select.resolve()?;
    let mut rows = Vec::new();
    let mut jcases = Vec::new();
    for case in &cases {
        let mut points = Vec::new();
        for &m in &case.m_grid {
            match analytic_point(case, m) {
                Ok((eff, rate, sum)) => {
                    rows.push(Row::new(&case.case_id, m, "effective_sinr", eff, None));
                    rows.push(Row::new(&case.case_id, m, "rate_lower_bound", rate, None));
                    rows.push(Row::new(&case.case_id, m, "sum_rate_lower_bound", sum, None));
                    points.push(json!({
                        "m": m,
                        "effective_sinr": eff,
                        "rate_lower_bound": rate,
                        "sum_rate_lower_bound": sum,
                    }));
                }
                Err(e) => {
                    eprintln!("warning: {}: M = {m}: {e}", case.case_id);
                    points.push(json!({ "m": m, "error": e.to_string() }));
                }
            }
        }
        jcases.push(json!({
            "case_id": case.case_id,
            "precoder": case.precoder,
            "points": points,
        }));
    }
    let doc = json!({ "command": "analytic", "cases": jcases });
    output::write_output(&args.output, &rows, &doc)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

/// Monte Carlo sweep of the selected cases.
#[derive(Debug, clap::Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub select: CaseSelect,
    #[command(flatten)]
    pub sim: SimOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

/// Flattens a sweep into the shared CSV schema; unrunnable grid points are
/// reported on stderr and omitted from the rows (the JSON document keeps
/// them).
fn sweep_rows(sweep: &SweepResult) -> Vec<Row> {
    let mut rows = Vec::new();
    let id = sweep.case_id.as_str();
    for r in &sweep.rows {
        match (&r.point, &r.error) {
            (Some(p), _) => {
                let m = r.m;
                rows.push(Row::new(id, m, "mean_sinr", p.mean_sinr, Some(p.se_mean_sinr)));
                rows.push(Row::new(
                    id,
                    m,
                    "effective_sinr_sim",
                    p.effective_sinr_sim,
                    Some(p.se_effective_sinr_sim),
                ));
                rows.push(Row::new(
                    id,
                    m,
                    "effective_sinr_analytic",
                    p.effective_sinr_analytic,
                    None,
                ));
                rows.push(Row::new(id, m, "ergodic_rate", p.ergodic_rate, Some(p.se_ergodic_rate)));
                rows.push(Row::new(id, m, "sum_rate", p.sum_rate, Some(p.se_sum_rate)));
                rows.push(Row::new(
                    id,
                    m,
                    "sum_rate_lower_bound",
                    p.sum_rate_lower_bound,
                    None,
                ));
                rows.push(Row::new(id, m, "scv_sinr", p.scv_sinr, Some(p.se_scv_sinr)));
            }
            (None, Some(e)) => eprintln!("warning: {id}: M = {}: {e}", r.m),
            (None, None) => {}
        }
    }
    rows
}

fn run_sweeps(
    cases: &[ScenarioCase],
    sim: &SimOpts,
) -> Result<Vec<SweepResult>, CliError> {
    cases
        .iter()
        .map(|case| {
            engine::run_case_sweep(case, &case.m_grid, sim.trials, sim.seed, sim.workers)
                .map_err(CliError::from)
        })
        .collect()
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let cases = args.select.resolve()?;
    let sweeps = run_sweeps(&cases, &args.sim)?;
    let rows: Vec<Row> = sweeps.iter().flat_map(|s| sweep_rows(s)).collect();
    let doc = json!({
        "command": "simulate",
        "master_seed": args.sim.seed,
        "trials": args.sim.trials,
        "sweeps": sweeps,
    });
    output::write_output(&args.output, &rows, &doc)
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

/// Pilot environment of a scaled trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Environment {
    /// No pilot is reused in any other cell.
    Perfect,
    /// Pilots are reused in other cells (contaminated estimates).
    Contaminated,
}

/// Growth-exponent calculus: how fast performance is retained or lost along
/// a resource-scaling trajectory.
#[derive(Debug, clap::Args)]
pub struct ScalingArgs {
    /// Training-energy decay exponent r_t (E_t shrinks as M^-r_t)
    #[arg(long, default_value_t = 0.0)]
    pub rt: f64,
    /// User-growth exponent r_k (K grows as M^r_k)
    #[arg(long, default_value_t = 0.0)]
    pub rk: f64,
    /// Data-power decay exponent r_rho (rho shrinks as M^-r_rho)
    #[arg(long, default_value_t = 0.0)]
    pub rrho: f64,
    /// Sharing-cell decay exponent r_gamma (L_p shrinks as M^-r_gamma)
    #[arg(long, default_value_t = 0.0)]
    pub rgamma: f64,
    /// Pilot environment
    #[arg(long, value_enum, default_value_t = Environment::Perfect)]
    pub pce: Environment,
    #[command(flatten)]
    pub output: OutputOpts,
}

pub fn scaling(args: &ScalingArgs) -> Result<(), CliError> {
    let exps = ScalingExponents::new(
        args.rt,
        args.rk,
        args.rrho,
        args.rgamma,
        args.pce == Environment::Perfect,
    )?;
    let r_s = scaling::scaling_exponent(&exps);
    let non_decreasing = scaling::non_decreasing_check(&exps);
    let deterministic = scaling::deterministic_check(&exps);
    let rows = vec![
        Row::new("scaling", 0, "saving_exponent", r_s, None),
        Row::new("scaling", 0, "non_decreasing", f64::from(non_decreasing), None),
        Row::new("scaling", 0, "deterministic", f64::from(deterministic), None),
    ];
    let doc = json!({
        "command": "scaling",
        "exponents": exps,
        "saving_exponent": r_s,
        "non_decreasing": non_decreasing,
        "deterministic": deterministic,
    });
    output::write_output(&args.output, &rows, &doc)
}

// ---------------------------------------------------------------------------
// check-applicability
// ---------------------------------------------------------------------------

/// Checks whether the large-system closed forms describe the selected
/// operating points, with an explicit dominance margin.
#[derive(Debug, clap::Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub select: CaseSelect,
    /// Antenna count to check (defaults to every grid point of the case)
    #[arg(long = "M", value_name = "M")]
    pub m: Option<usize>,
    /// Dominance factor demanded of the kept denominator term
    #[arg(long, default_value_t = scaling::DOMINANCE_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputOpts,
}

pub fn check_applicability(args: &CheckArgs) -> Result<(), CliError> {
    let cases = args.select.resolve()?;
    let mut rows = Vec::new();
    let mut jcases = Vec::new();
    for case in &cases {
        let exps = case.exponents()?;
        let grid = match args.m {
            Some(m) => vec![m],
            None => case.m_grid.clone(),
        };
        let mut points = Vec::new();
        for m in grid {
            let cfg = case.config_at(m)?;
            let verdict = match case.precoder {
                Precoder::Mrt => scaling::mrt_applicability(&cfg, &exps, args.threshold),
                Precoder::Zf => scaling::zf_applicability(&cfg, &exps, args.threshold)?,
            };
            rows.push(Row::new(&case.case_id, m, "applicability_margin", verdict.margin, None));
            rows.push(Row::new(
                &case.case_id,
                m,
                "applicable",
                f64::from(verdict.applicable),
                None,
            ));
            points.push(json!({ "m": m, "verdict": verdict }));
        }
        jcases.push(json!({
            "case_id": case.case_id,
            "precoder": case.precoder,
            "points": points,
        }));
    }
    let doc = json!({
        "command": "check-applicability",
        "threshold": args.threshold,
        "cases": jcases,
    });
    output::write_output(&args.output, &rows, &doc)
}

// ---------------------------------------------------------------------------
// verify-moments
// ---------------------------------------------------------------------------

/// Monte Carlo verification of the closed-form estimate moments and power
/// components at one operating point.
#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Antenna count
    #[arg(long = "M", value_name = "M")]
    pub m: usize,
    /// Users per cell (at least 3)
    #[arg(long = "K", value_name = "K")]
    pub k: usize,
    /// Pilot-sharing cells
    #[arg(long, default_value_t = 0)]
    pub lp: usize,
    /// Total cells in the network
    #[arg(long, default_value_t = 7)]
    pub cells: usize,
    /// Fraction of antenna dimensions the channel occupies
    #[arg(long, default_value_t = 0.6)]
    pub corr: f64,
    /// Relative gain of pilot-sharing cross links
    #[arg(long, default_value_t = 0.3)]
    pub cross: f64,
    /// Training SNR
    #[arg(long, default_value_t = 10.0)]
    pub et: f64,
    /// Data SNR
    #[arg(long, default_value_t = 10.0)]
    pub rho: f64,
    /// Monte Carlo trials
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Master seed
    #[arg(long, env = "MIMO_LAB_SEED", default_value_t = 2026)]
    pub seed: u64,
    /// z-score gate used for the pass/fail summary
    #[arg(long, default_value_t = 3.0)]
    pub gate: f64,
    #[command(flatten)]
    pub output: OutputOpts,
}

pub fn verify_moments(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = NetworkConfig::new(
        args.cells, args.m, args.k, args.corr, args.cross, args.lp, args.et, args.rho,
    )?;
    let reports = engine::verify_moments(&cfg, args.trials, args.seed)?;
    let pass = engine::moments_pass(&reports, args.gate);
    let within = reports.iter().filter(|r| r.z.abs() <= args.gate).count();
    eprintln!(
        "moments: {within}/{} within |z| <= {} ({})",
        reports.len(),
        args.gate,
        if pass { "pass" } else { "FAIL" }
    );
    let mut rows = Vec::new();
    for r in &reports {
        rows.push(Row::new("verify-moments", args.m, &r.label, r.empirical, Some(r.std_error)));
        rows.push(Row::new(
            "verify-moments",
            args.m,
            &format!("{}_analytic", r.label),
            r.analytic,
            None,
        ));
        rows.push(Row::new("verify-moments", args.m, &format!("{}_z", r.label), r.z, None));
    }
    let doc = json!({
        "command": "verify-moments",
        "config": cfg,
        "trials": args.trials,
        "seed": args.seed,
        "gate": args.gate,
        "pass": pass,
        "reports": reports,
    });
    output::write_output(&args.output, &rows, &doc)
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

/// Fits the simulated SINR growth exponent of one case and reports it next
/// to the theoretical one.
#[derive(Debug, clap::Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub select: CaseSelect,
    #[command(flatten)]
    pub sim: SimOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    let case = args.select.resolve_one()?;
    let exps = case.exponents()?;
    let r_s_theoretical = scaling::scaling_exponent(&exps);
    let deterministic = scaling::deterministic_check(&exps);
    let sweep = engine::run_case_sweep(&case, &case.m_grid, args.sim.trials, args.sim.seed, args.sim.workers)?;
    let points = sweep.series(|p| p.effective_sinr_sim);
    let (r_s_fitted, _) = log_log_slope(&points)?;
    // Applicability at the largest antenna count that actually ran.
    let last_m = sweep
        .rows
        .iter()
        .rev()
        .find(|r| r.point.is_some())
        .map(|r| r.m)
        .ok_or_else(|| CliError::Usage("no grid point produced data to fit".into()))?;
    let cfg = case.config_at(last_m)?;
    let verdict = match case.precoder {
        Precoder::Mrt => scaling::mrt_applicability(&cfg, &exps, scaling::DOMINANCE_THRESHOLD),
        Precoder::Zf => scaling::zf_applicability(&cfg, &exps, scaling::DOMINANCE_THRESHOLD)?,
    };
    let rows = vec![
        Row::new(&case.case_id, 0, "r_s_theoretical", r_s_theoretical, None),
        Row::new(&case.case_id, 0, "r_s_fitted", r_s_fitted, None),
        Row::new(&case.case_id, last_m, "applicability_margin", verdict.margin, None),
        Row::new(&case.case_id, last_m, "applicable", f64::from(verdict.applicable), None),
        Row::new(&case.case_id, 0, "deterministic", f64::from(deterministic), None),
    ];
    let doc = json!({
        "case_id": case.case_id,
        "r_s_theoretical": r_s_theoretical,
        "r_s_fitted": r_s_fitted,
        "applicability": verdict,
        "deterministic": deterministic,
    });
    output::write_output(&args.output, &rows, &doc)
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

/// Datasets the tool can rebuild end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproPreset {
    /// Effective SINR of every contamination-free schedule, with slope references.
    Fig1,
    /// Sum rate and its lower bound for the contamination-free schedules.
    Fig2,
    /// SINR variability (SCV) of four contamination-free schedules, with power-law fits.
    Fig3,
    /// Effective SINR of the contaminated schedules, with contamination ceilings.
    Fig4,
    /// Sum rate and its lower bound for the contaminated schedules.
    Fig5,
    /// Effective SINR of the contamination-free schedules under zero forcing.
    Fig6,
    /// Effective SINR of the contaminated schedules under zero forcing.
    Fig7,
    /// Full metric dump for the contamination-free schedules.
    Table1,
    /// Full metric dump for the contaminated schedules.
    Table2,
}

/// Re-creates a complete dataset into a directory: `<preset>.csv`,
/// `<preset>.json`, and optionally `<preset>.svg`.
#[derive(Debug, clap::Args)]
pub struct ReproduceArgs {
    /// Dataset to rebuild
    #[arg(long, value_enum)]
    pub preset: ReproPreset,
    /// Output directory (created if missing)
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[command(flatten)]
    pub sim: SimOpts,
    /// Additionally render an SVG chart of the dataset
    #[arg(long)]
    pub svg: bool,
}

enum ReproKind {
    /// Simulated + analytic effective SINR, plus theoretical-slope reference lines.
    SinrWithReference,
    /// Simulated + analytic effective SINR, plus contamination ceilings where present.
    SinrWithCeiling,
    /// Simulated sum rate with its closed-form lower bound.
    SumRate,
    /// Simulated SINR variability with per-case power-law fits.
    Scv,
    /// Every metric of every case.
    FullTable,
}

struct ReproSpec {
    name: &'static str,
    title: &'static str,
    y_label: &'static str,
    kind: ReproKind,
    cases: Vec<ScenarioCase>,
}

fn zf_all(cases: Vec<ScenarioCase>) -> Vec<ScenarioCase> {
    cases.iter().map(ScenarioCase::as_zero_forcing).collect()
}

fn repro_spec(preset: ReproPreset) -> ReproSpec {
    match preset {
        ReproPreset::Fig1 => ReproSpec {
            name: "fig1",
            title: "Effective SINR under MRT, contamination-free schedules",
            y_label: "effective SINR",
            kind: ReproKind::SinrWithReference,
            cases: scenario::table1(),
        },
        ReproPreset::Fig2 => ReproSpec {
            name: "fig2",
            title: "Sum rate under MRT, contamination-free schedules",
            y_label: "sum rate (bit/s/Hz)",
            kind: ReproKind::SumRate,
            cases: scenario::table1(),
        },
        ReproPreset::Fig3 => ReproSpec {
            name: "fig3",
            title: "SINR variability under MRT",
            y_label: "squared coefficient of variation",
            kind: ReproKind::Scv,
            cases: {
                let all = scenario::table1();
                [0usize, 3, 4, 5].iter().map(|&i| all[i].clone()).collect()
            },
        },
        ReproPreset::Fig4 => ReproSpec {
            name: "fig4",
            title: "Effective SINR under MRT, contaminated schedules",
            y_label: "effective SINR",
            kind: ReproKind::SinrWithCeiling,
            cases: scenario::table2(),
        },
        ReproPreset::Fig5 => ReproSpec {
            name: "fig5",
            title: "Sum rate under MRT, contaminated schedules",
            y_label: "sum rate (bit/s/Hz)",
            kind: ReproKind::SumRate,
            cases: scenario::table2(),
        },
        ReproPreset::Fig6 => ReproSpec {
            name: "fig6",
            title: "Effective SINR under zero forcing, contamination-free schedules",
            y_label: "effective SINR",
            kind: ReproKind::SinrWithCeiling,
            cases: zf_all(scenario::table1()),
        },
        ReproPreset::Fig7 => ReproSpec {
            name: "fig7",
            title: "Effective SINR under zero forcing, contaminated schedules",
            y_label: "effective SINR",
            kind: ReproKind::SinrWithCeiling,
            cases: zf_all(scenario::table2()),
        },
        ReproPreset::Table1 => ReproSpec {
            name: "table1",
            title: "Contamination-free schedules, all metrics",
            y_label: "metric value",
            kind: ReproKind::FullTable,
            cases: scenario::table1(),
        },
        ReproPreset::Table2 => ReproSpec {
            name: "table2",
            title: "Contaminated schedules, all metrics",
            y_label: "metric value",
            kind: ReproKind::FullTable,
            cases: scenario::table2(),
        },
    }
}

/// Reference line with the theoretical growth slope, anchored at the first
/// analytic point of the sweep.
fn slope_reference_rows(case: &ScenarioCase, sweep: &SweepResult) -> Result<Vec<Row>, CliError> {
    let exps = case.exponents()?;
    let r_s = scaling::scaling_exponent(&exps);
    let anchor = sweep.rows.iter().find_map(|r| {
        r.point
            .as_ref()
            .map(|p| (r.m as f64, p.effective_sinr_analytic))
    });
    let Some((m0, v0)) = anchor else {
        return Ok(Vec::new());
    };
    Ok(sweep
        .rows
        .iter()
        .filter(|r| r.point.is_some())
        .map(|r| {
            let v = v0 * (r.m as f64 / m0).powf(r_s);
            Row::new(&sweep.case_id, r.m, "slope_reference", v, None)
        })
        .collect())
}

fn sinr_rows(sweep: &SweepResult) -> Vec<Row> {
    let id = sweep.case_id.as_str();
    let mut rows = Vec::new();
    for r in &sweep.rows {
        if let Some(p) = &r.point {
            rows.push(Row::new(
                id,
                r.m,
                "effective_sinr_sim",
                p.effective_sinr_sim,
                Some(p.se_effective_sinr_sim),
            ));
            rows.push(Row::new(id, r.m, "effective_sinr_analytic", p.effective_sinr_analytic, None));
        } else if let Some(e) = &r.error {
            eprintln!("warning: {id}: M = {}: {e}", r.m);
        }
    }
    rows
}

fn ceiling_rows(case: &ScenarioCase, sweep: &SweepResult) -> Vec<Row> {
    let a2 = case.cross_gain * case.cross_gain;
    sweep
        .rows
        .iter()
        .filter_map(|r| {
            let p = r.point.as_ref()?;
            if p.sharing_cells == 0 {
                return None;
            }
            let ceiling = 1.0 / (p.sharing_cells as f64 * a2);
            Some(Row::new(&sweep.case_id, r.m, "contamination_ceiling", ceiling, None))
        })
        .collect()
}

fn sum_rate_rows(sweep: &SweepResult) -> Vec<Row> {
    let id = sweep.case_id.as_str();
    let mut rows = Vec::new();
    for r in &sweep.rows {
        if let Some(p) = &r.point {
            rows.push(Row::new(id, r.m, "sum_rate", p.sum_rate, Some(p.se_sum_rate)));
            rows.push(Row::new(id, r.m, "sum_rate_lower_bound", p.sum_rate_lower_bound, None));
        } else if let Some(e) = &r.error {
            eprintln!("warning: {id}: M = {}: {e}", r.m);
        }
    }
    rows
}

pub fn reproduce(args: &ReproduceArgs) -> Result<(), CliError> {
    let spec = repro_spec(args.preset);
    let sweeps = run_sweeps(&spec.cases, &args.sim)?;

    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for (case, sweep) in spec.cases.iter().zip(&sweeps) {
        match spec.kind {
            ReproKind::SinrWithReference => {
                rows.extend(sinr_rows(sweep));
                rows.extend(slope_reference_rows(case, sweep)?);
            }
            ReproKind::SinrWithCeiling => {
                rows.extend(sinr_rows(sweep));
                rows.extend(ceiling_rows(case, sweep));
            }
            ReproKind::SumRate => rows.extend(sum_rate_rows(sweep)),
            ReproKind::Scv => {
                for r in &sweep.rows {
                    if let Some(p) = &r.point {
                        rows.push(Row::new(
                            &sweep.case_id,
                            r.m,
                            "scv_sinr",
                            p.scv_sinr,
                            Some(p.se_scv_sinr),
                        ));
                    }
                }
                let points = sweep.series(|p| p.scv_sinr);
                let (a, b) = scaling::fit_power_decay(&points)?;
                rows.push(Row::new(&sweep.case_id, 0, "scv_fit_coefficient", a, None));
                rows.push(Row::new(&sweep.case_id, 0, "scv_fit_exponent", b, None));
                fits.push(json!({
                    "case_id": sweep.case_id,
                    "coefficient": a,
                    "exponent": b,
                }));
            }
            ReproKind::FullTable => rows.extend(sweep_rows(sweep)),
        }
    }

    let mut doc = json!({
        "preset": spec.name,
        "master_seed": args.sim.seed,
        "trials": args.sim.trials,
        "sweeps": sweeps,
    });
    if !fits.is_empty() {
        doc["fits"] = serde_json::Value::Array(fits);
    }

    fs::create_dir_all(&args.out)?;
    let csv_path = args.out.join(format!("{}.csv", spec.name));
    let json_path = args.out.join(format!("{}.json", spec.name));
    fs::write(&csv_path, output::rows_to_csv(&rows))?;
    fs::write(&json_path, output::render_json(&doc)?)?;
    let mut written = vec![csv_path.display().to_string(), json_path.display().to_string()];
    if args.svg {
        let svg_path = args.out.join(format!("{}.svg", spec.name));
        fs::write(&svg_path, plot::render_chart(spec.title, spec.y_label, &rows))?;
        written.push(svg_path.display().to_string());
    }
    eprintln!("wrote {}", written.join(", "));
    Ok(())
}
