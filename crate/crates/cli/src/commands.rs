use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qdecouple_core::decoupling::{
    decoupling_sample_at, one_shot_upper_bound_optimized, partial_trace_lower_bound, DecouplingInstance, MCEstimate,
};
use qdecouple_core::divergence::DivergenceKind;
use qdecouple_core::exponents::{
    channel_coding_exponent, distillation_exponent_single_letter, merging_exponents, standard_decoupling_exponents,
    ExponentResult, MergingMode,
};
use qdecouple_core::{BipartiteState, MultipartiteState, QuantumChannel, SeededRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::files::{format_float, read_state, CurveFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DivergenceChoice {
    Umegaki,
    Petz,
    Sandwiched,
    Max,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    /// State file for ρ.
    pub state_a: PathBuf,
    /// State file for σ.
    pub state_b: PathBuf,
    #[arg(long, value_enum)]
    pub kind: DivergenceChoice,
    /// Rényi order; required for `petz` and `sandwiched`.
    #[arg(long)]
    pub alpha: Option<f64>,
}

pub fn divergence(args: &DivergenceArgs) -> CliResult<String> {
    let kind = match (args.kind, args.alpha) {
        (DivergenceChoice::Umegaki, _) => DivergenceKind::Umegaki,
        (DivergenceChoice::Max, _) => DivergenceKind::Max,
        (DivergenceChoice::Petz, Some(a)) => DivergenceKind::Petz(a),
        (DivergenceChoice::Sandwiched, Some(a)) => DivergenceKind::Sandwiched(a),
        (_, None) => return Err(CliError::Usage("--alpha is required for Rényi divergences".into())),
    };
    kind.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let rho = read_state(&args.state_a)?;
    let sigma = read_state(&args.state_b)?;
    if rho.dim() != sigma.dim() {
        return Err(CliError::Usage(format!(
            "states have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let value = kind.evaluate(rho.density(), sigma.density())?;
    Ok(value.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    /// Standard decoupling of `A` from `E`; labels `A,E`.
    StandardDecoupling,
    /// State merging with entanglement gain; labels `A,B,R` of a pure state.
    MergingD,
    /// State merging with entanglement cost; labels `A,B,R` of a pure state.
    MergingC,
    /// One-shot distillation; labels `C,D`.
    Distill,
    /// Channel coding; the file holds the normalized Choi state, labels `input,output`.
    Channel,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    pub state: PathBuf,
    /// Subsystem labels used by the task, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub labels: Vec<String>,
    #[arg(long, value_enum)]
    pub task: Task,
    #[arg(long)]
    pub r_min: f64,
    #[arg(long)]
    pub r_max: f64,
    /// Number of equally spaced rates, endpoints included.
    #[arg(long, default_value_t = 11)]
    pub r_points: usize,
    /// Output CSV with columns `r,achievable,converse,exact`.
    #[arg(long)]
    pub out: PathBuf,
    /// Treat the channel as a generalized dephasing channel (fixed `Φ` input, converse evaluated).
    #[arg(long)]
    pub dephasing: bool,
    /// Random input restarts per point for channel coding.
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn rates(args: &CurveArgs) -> CliResult<Vec<f64>> {
    let (lo, hi, n) = (args.r_min, args.r_max, args.r_points);
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || n == 0 {
        return Err(CliError::Usage(format!(
            "need finite r-min ≤ r-max and r-points ≥ 1, got [{lo}, {hi}] with {n} points"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

fn labels<const N: usize>(args: &CurveArgs) -> CliResult<[&str; N]> {
    let v: Vec<&str> = args.labels.iter().map(String::as_str).collect();
    v.try_into().map_err(|_| {
        CliError::Usage(format!(
            "task {:?} needs {N} labels, got {}",
            args.task,
            args.labels.len()
        ))
    })
}

fn bipartite(path: &Path, state: &MultipartiteState, a: &str, b: &str) -> CliResult<BipartiteState> {
    let covered = state.labels().len() == 2;
    if !covered {
        return Err(CliError::parse(
            path,
            "the task expects a state on exactly two subsystems",
        ));
    }
    state.bipartition(&[a], &[b]).map_err(|e| CliError::parse(path, e))
}

/// Thresholds printed alongside a curve.
pub struct CurveSummary {
    pub critical_rate: f64,
    pub exactness_threshold: f64,
}

pub fn exponent_curve(args: &CurveArgs) -> CliResult<CurveSummary> {
    let rs = rates(args)?;
    let state = read_state(&args.state)?;
    let results: Vec<ExponentResult> = match args.task {
        Task::StandardDecoupling => {
            let [a, e] = labels::<2>(args)?;
            let rho = bipartite(&args.state, &state, a, e)?;
            rs.par_iter()
                .map(|&r| standard_decoupling_exponents(&rho, r))
                .collect::<Result<_, _>>()?
        }
        Task::MergingD | Task::MergingC => {
            let [a, b, r] = labels::<3>(args)?;
            for l in [a, b, r] {
                state.index_of(l).map_err(|e| CliError::parse(&args.state, e))?;
            }
            let mode = if args.task == Task::MergingD {
                MergingMode::Distill
            } else {
                MergingMode::Cost
            };
            rs.par_iter()
                .map(|&rate| merging_exponents(&state, (a, b, r), rate, mode).map(|m| m.exponents))
                .collect::<Result<_, _>>()?
        }
        Task::Distill => {
            let [c, d] = labels::<2>(args)?;
            let rho = bipartite(&args.state, &state, c, d)?;
            rs.par_iter()
                .map(|&r| distillation_exponent_single_letter(&rho, r))
                .collect::<Result<_, _>>()?
        }
        Task::Channel => {
            let [input, output] = labels::<2>(args)?;
            let choi = bipartite(&args.state, &state, input, output)?;
            let ch = QuantumChannel::from_choi(choi.rho().clone(), choi.dim_a(), choi.dim_b())?;
            rs.par_iter()
                .enumerate()
                .map(|(i, &r)| {
                    let mut rng = SeededRng::new(args.seed, i as u64);
                    channel_coding_exponent(&ch, r, args.restarts, &mut rng, args.dephasing)
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut curve = CurveFile::new(vec!["r", "achievable", "converse", "exact"]);
    for (r, res) in rs.iter().zip(&results) {
        curve.push(vec![
            format_float(*r),
            format_float(res.achievable),
            format_float(res.converse),
            res.exact.to_string(),
        ]);
    }
    curve.write(&args.out)?;
    let first = results.first().expect("at least one rate");
    Ok(CurveSummary {
        critical_rate: first.critical_rate,
        exactness_threshold: first.exactness_threshold,
    })
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// State file for `ρ_AE`.
    pub state: PathBuf,
    /// Labels of the decoupled system and the environment.
    #[arg(long, value_delimiter = ',', default_value = "A,E")]
    pub labels: Vec<String>,
    /// Dimension of the kept factor `A1`.
    #[arg(long)]
    pub d_a1: usize,
    /// Dimension of the traced-out factor `A2`.
    #[arg(long)]
    pub d_a2: usize,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Standard errors of slack before a bound violation is reported.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
}

/// Output of `decouple-mc`; `mean` and `stderr` are in bits, the bounds and `*_nats` fields in nats.
#[derive(Debug, Serialize)]
pub struct McReport {
    /// `null` when some sample was infinite.
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub n: usize,
    pub bound_opt: f64,
    pub s_star: f64,
    pub lower_bound: f64,
    pub seed: u64,
    pub mean_nats: Option<f64>,
    pub stderr_nats: Option<f64>,
    pub infinite_samples: usize,
}

pub fn decouple_mc(args: &McArgs) -> CliResult<String> {
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let [a, e]: [&str; 2] = args
        .labels
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .try_into()
        .map_err(|_| CliError::Usage("--labels needs two labels".into()))?;
    let state = read_state(&args.state)?;
    let rho = state
        .bipartition(&[a], &[e])
        .map_err(|err| CliError::parse(&args.state, err))?;
    if args.d_a1 * args.d_a2 != rho.dim_a() {
        return Err(CliError::Usage(format!(
            "d-a1 · d-a2 = {} does not match dim {a} = {}",
            args.d_a1 * args.d_a2,
            rho.dim_a()
        )));
    }
    let inst = DecouplingInstance::standard(rho.clone(), args.d_a1, args.d_a2)?;
    let base = SeededRng::new(args.seed, 0);
    let values = (0..args.samples as u64)
        .into_par_iter()
        .map(|i| decoupling_sample_at(&inst, &base, i))
        .collect::<Result<Vec<_>, _>>()?;
    let est = MCEstimate::from_samples(&values, args.seed, false)?;
    let (bound_opt, s_star) = one_shot_upper_bound_optimized(&inst)?;
    let lower = partial_trace_lower_bound(&rho, args.d_a1, args.d_a2)?;
    let (mean_nats, se_nats) = est.mean_nats();
    let finite = !est.is_infinite();
    let report = McReport {
        mean: finite.then(|| est.mean.to_f64()),
        stderr: finite.then_some(est.stderr),
        n: est.n_samples,
        bound_opt,
        s_star,
        lower_bound: lower,
        seed: args.seed,
        mean_nats: finite.then_some(mean_nats),
        stderr_nats: finite.then_some(se_nats),
        infinite_samples: est.infinite_samples,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if !finite {
        println!("{json}");
        return Err(CliError::BoundViolation(format!(
            "{} of {} samples were infinite",
            est.infinite_samples, est.n_samples
        )));
    }
    if mean_nats - args.sigmas * se_nats > bound_opt {
        println!("{json}");
        return Err(CliError::BoundViolation(format!(
            "mean − {}·stderr = {} nats exceeds the optimized bound {bound_opt}",
            args.sigmas,
            mean_nats - args.sigmas * se_nats
        )));
    }
    Ok(json)
}
