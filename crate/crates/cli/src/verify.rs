//! Randomized checks of the inequalities and identities the library relies on.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qdecouple_core::condentropy::{cond_entropy, duality_pair, CondEntropyKind};
use qdecouple_core::decoupling::sharp_trace_inequality;
use qdecouple_core::divergence::{umegaki, DivergenceKind};
use qdecouple_core::haar::{exact_second_moment, ginibre, haar_unitary, heisenberg_weyl_twirl};
use qdecouple_core::hermitian::{distinct_eigenvalue_count, herm_eig, positive_part_trace};
use qdecouple_core::state::{max_entangled, random_density, random_pure, random_state, subsystems};
use qdecouple_core::{ComplexMatrix, HermitianOperator, QuantumChannel, SeededRng, C64};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::files::StateFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Data processing and monotonicity in σ of every divergence family.
    DataProcessing,
    /// `tr ρ(ln(ρ+σ) − ln σ) ≤ (c_s/s) Q̃_{1+s}(ρ‖σ)`.
    #[value(name = "sharp-trace")]
    SharpTrace,
    /// Superadditivity of `tr(· − λI)_+`.
    PositivePart,
    /// `D(ρ‖σ) ≥ tr(ρ − 9σ)_+` in nats.
    RelativeEntropyBound,
    /// Haar second moment against the exact formula, and the Heisenberg–Weyl twirl.
    SecondMoment,
    /// `σ ≤ v(H)·E_H(σ)`.
    Pinching,
    /// `H̃_{1+s}(A|C) = −H↑_{1/(1+s)}(A|B)` on pure states.
    Duality,
    /// Additivity of conditional entropies under tensor products.
    Additivity,
    All,
}

const CONCRETE: [Suite; 8] = [
    Suite::DataProcessing,
    Suite::SharpTrace,
    Suite::PositivePart,
    Suite::RelativeEntropyBound,
    Suite::SecondMoment,
    Suite::Pinching,
    Suite::Duality,
    Suite::Additivity,
];

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Random instances per suite.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Haar samples per dimension for `second-moment`.
    #[arg(long, default_value_t = 20000, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest accepted violation for deterministic checks.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Standard errors accepted by statistical checks.
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,
    /// Directory receiving state files of failing instances.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// One random instance: its violation (positive means the inequality failed by that much) and its data.
struct Trial {
    violation: f64,
    instance: Vec<(&'static str, StateFile)>,
    note: String,
}

impl Trial {
    fn new(violation: f64) -> Self {
        Trial {
            violation,
            instance: Vec::new(),
            note: String::new(),
        }
    }

    fn with(mut self, name: &'static str, file: StateFile) -> Self {
        self.instance.push((name, file));
        self
    }
}

/// Outcome of one named check.
struct Check {
    label: &'static str,
    worst: f64,
    limit: f64,
    worst_trial: Option<(u64, Trial)>,
}

impl Check {
    fn passed(&self) -> bool {
        self.worst <= self.limit
    }
}

type TrialFn = dyn Fn(&mut SeededRng) -> qdecouple_core::Result<Trial> + Sync;

fn sweep(label: &'static str, trials: u64, base: &SeededRng, limit: f64, f: &TrialFn) -> CliResult<Check> {
    let results = (0..trials)
        .into_par_iter()
        .map(|i| f(&mut base.substream(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_trial = None;
    for (i, t) in results.into_iter().enumerate() {
        let v = if t.violation.is_nan() {
            f64::INFINITY
        } else {
            t.violation
        };
        if v > worst {
            worst = v;
            worst_trial = Some((i as u64, t));
        }
    }
    Ok(Check {
        label,
        worst,
        limit,
        worst_trial,
    })
}

fn op_file(op: &HermitianOperator, label: &str) -> StateFile {
    StateFile::from_operator(op, &[(label, op.dim())])
}

fn full_rank(d: usize, rng: &mut SeededRng) -> qdecouple_core::Result<HermitianOperator> {
    Ok(random_density(d, d, rng)?.density().clone())
}

fn data_processing(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let d = rng.gen_range(2..=4usize);
    let dout = rng.gen_range(2..=4usize);
    let env = rng.gen_range(1..=3usize).max(d.div_ceil(dout));
    let rho = full_rank(d, rng)?;
    let sigma = full_rank(d, rng)?;
    let ch = QuantumChannel::random(d, dout, env, rng)?;
    let bump = random_density(d, rng.gen_range(1..=d), rng)?
        .density()
        .scale(rng.gen_range(0.05..1.0));
    let n_rho = HermitianOperator::new(ch.apply_operator(rho.matrix(), 1)?)?;
    let n_sigma = HermitianOperator::new(ch.apply_operator(sigma.matrix(), 1)?)?;
    let larger = sigma.add(&bump);
    let mut kinds = vec![DivergenceKind::Umegaki];
    kinds.extend([0.3, 0.7, 1.5, 2.0].map(DivergenceKind::Petz));
    kinds.extend([0.5, 0.8, 1.5, 3.0].map(DivergenceKind::Sandwiched));
    let mut worst = f64::NEG_INFINITY;
    for kind in kinds {
        let before = kind.evaluate(&rho, &sigma)?.to_f64();
        let after = kind.evaluate(&n_rho, &n_sigma)?.to_f64();
        let relaxed = kind.evaluate(&rho, &larger)?.to_f64();
        worst = worst.max(after - before).max(relaxed - before);
    }
    let choi = StateFile::from_operator(ch.choi(), &[("in", d), ("out", dout)]);
    Ok(Trial::new(worst)
        .with("rho", op_file(&rho, "A"))
        .with("sigma", op_file(&sigma, "A"))
        .with("channel-choi", choi))
}

fn sharp_trace(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let d = rng.gen_range(1..=8usize);
    let rho = full_rank(d, rng)?;
    let sigma = full_rank(d, rng)?;
    let mut worst = f64::NEG_INFINITY;
    for k in 1..=10 {
        let (lhs, rhs) = sharp_trace_inequality(&rho, &sigma, k as f64 / 10.0)?;
        worst = worst.max(lhs - rhs);
    }
    Ok(Trial::new(worst)
        .with("rho", op_file(&rho, "A"))
        .with("sigma", op_file(&sigma, "A")))
}

fn positive_part(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let d = rng.gen_range(1..=8usize);
    let terms = rng.gen_range(1..=4usize);
    let lambda = rng.gen_range(0.01..1.0);
    let shift = HermitianOperator::identity(d).scale(lambda);
    let mut sum = HermitianOperator::zeros(d);
    let mut separate = 0.0;
    let mut trial = Trial::new(0.0);
    let mut scales = Vec::new();
    const NAMES: [&str; 4] = ["term0", "term1", "term2", "term3"];
    for name in NAMES.iter().take(terms) {
        let rank = rng.gen_range(1..=d);
        let scale = rng.gen_range(0.1..3.0);
        let unit = random_density(d, rank, rng)?.density().clone();
        let a = unit.scale(scale);
        separate += positive_part_trace(&a.sub(&shift))?;
        sum = sum.add(&a);
        scales.push(scale);
        trial = trial.with(name, op_file(&unit, "A"));
    }
    trial.violation = separate - positive_part_trace(&sum.sub(&shift))?;
    trial.note = format!("lambda = {lambda}, term scales = {scales:?}");
    Ok(trial)
}

fn relative_entropy_bound(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let d = rng.gen_range(1..=8usize);
    let rho = random_density(d, rng.gen_range(1..=d), rng)?.density().clone();
    let sigma = random_density(d, rng.gen_range(1..=d), rng)?.density().clone();
    let bound = positive_part_trace(&rho.sub(&sigma.scale(9.0)))?;
    let d_nats = umegaki(&rho, &sigma)?.to_f64() * std::f64::consts::LN_2;
    Ok(Trial::new(bound - d_nats)
        .with("rho", op_file(&rho, "A"))
        .with("sigma", op_file(&sigma, "A")))
}

fn pinching(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let d = rng.gen_range(2..=6usize);
    let levels = rng.gen_range(1..=d);
    let weights: Vec<f64> = (0..levels).map(|_| rng.gen_range(0.1..1.0)).collect();
    let spectrum: Vec<f64> = (0..d).map(|i| weights[i % levels]).collect();
    let total: f64 = spectrum.iter().sum();
    let diag = HermitianOperator::from_diagonal(&spectrum.iter().map(|x| x / total).collect::<Vec<_>>());
    let h = diag.conjugate_by(&haar_unitary(d, rng));
    let sigma = random_density(d, rng.gen_range(1..=d), rng)?.density().clone();
    let v = distinct_eigenvalue_count(&h)?;
    let pinched = HermitianOperator::new(QuantumChannel::pinching(&h)?.apply_operator(sigma.matrix(), 1)?)?;
    let gap = herm_eig(&pinched.scale(v as f64).sub(&sigma))?.min_eigenvalue();
    let mut trial = Trial::new(-gap)
        .with("h", op_file(&h, "A"))
        .with("sigma", op_file(&sigma, "A"));
    trial.note = format!("v = {v}");
    Ok(trial)
}

const DUALITY_DIMS: [[usize; 3]; 2] = [[2, 2, 3], [2, 3, 2]];

fn duality(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let [da, db, dc] = DUALITY_DIMS[rng.gen_range(0..DUALITY_DIMS.len())];
    let psi = random_pure(subsystems(&[("A", da), ("B", db), ("C", dc)]), rng)?;
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let (left, right) = duality_pair(&psi, "A", "B", "C", k as f64 / 10.0)?;
        worst = worst.max((left - right).abs());
    }
    Ok(Trial::new(worst).with("psi", StateFile::from_state(&psi)))
}

/// Kinds exercised by the additivity suite.
pub fn additivity_kinds() -> Vec<CondEntropyKind> {
    let mut kinds = vec![CondEntropyKind::petz(1.0)];
    for a in [0.5, 1.5] {
        kinds.push(CondEntropyKind::petz(a));
        kinds.push(CondEntropyKind::petz(a).up());
    }
    for a in [0.7, 2.0] {
        kinds.push(CondEntropyKind::sandwiched(a));
        kinds.push(CondEntropyKind::sandwiched(a).up());
    }
    kinds
}

fn additivity(rng: &mut SeededRng) -> qdecouple_core::Result<Trial> {
    let subs = || subsystems(&[("A", 2), ("B", 2)]);
    let first = random_state(subs(), rng.gen_range(1..=4), rng)?;
    let second = random_state(subs(), rng.gen_range(1..=4), rng)?;
    let x = first.bipartition(&["A"], &["B"])?;
    let y = second.bipartition(&["A"], &["B"])?;
    let joint = x.tensor(&y);
    let mut worst: f64 = 0.0;
    for kind in additivity_kinds() {
        let sum = cond_entropy(&x, kind)? + cond_entropy(&y, kind)?;
        worst = worst.max((cond_entropy(&joint, kind)? - sum).abs());
    }
    Ok(Trial::new(worst)
        .with("first", StateFile::from_state(&first))
        .with("second", StateFile::from_state(&second)))
}

/// Largest entrywise `(|mean − exact| − 1e-12) / stderr` of the Haar average of `(UΦU†)^{⊗2}`.
fn second_moment_z(d: usize, samples: u64, base: &SeededRng) -> CliResult<f64> {
    const CHUNKS: u64 = 64;
    let phi = max_entangled(d);
    let n = d.pow(4);
    let partial = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut sum = vec![[0.0f64; 2]; n * n];
            let mut sq = vec![[0.0f64; 2]; n * n];
            for i in (c..samples).step_by(CHUNKS as usize) {
                let mut rng = base.substream(i);
                let u = haar_unitary(d, &mut rng).kron(&ComplexMatrix::identity(d));
                let x = phi.matrix().conjugate_by(&u);
                let xx = x.kron(&x);
                for (k, z) in xx.as_slice().iter().enumerate() {
                    sum[k][0] += z.re;
                    sum[k][1] += z.im;
                    sq[k][0] += z.re * z.re;
                    sq[k][1] += z.im * z.im;
                }
            }
            (sum, sq)
        })
        .collect::<Vec<_>>();
    let mut sum = vec![[0.0f64; 2]; n * n];
    let mut sq = vec![[0.0f64; 2]; n * n];
    for (s, q) in &partial {
        for k in 0..n * n {
            for p in 0..2 {
                sum[k][p] += s[k][p];
                sq[k][p] += q[k][p];
            }
        }
    }
    let exact = exact_second_moment(d)?;
    let m = samples as f64;
    let mut worst: f64 = 0.0;
    for (k, z) in exact.as_slice().iter().enumerate() {
        for (p, target) in [z.re, z.im].into_iter().enumerate() {
            let mean = sum[k][p] / m;
            let var = ((sq[k][p] - m * mean * mean) / (m - 1.0)).max(0.0);
            let se = (var / m).sqrt();
            let excess = ((mean - target).abs() - 1e-12).max(0.0);
            let score = if excess == 0.0 { 0.0 } else { excess / se };
            worst = worst.max(score);
        }
    }
    Ok(worst)
}

fn twirl_defect(base: &SeededRng) -> f64 {
    let mut rng = base.substream(u64::MAX);
    let mut worst: f64 = 0.0;
    for d in 1..=6 {
        let m = ginibre(d, d, &mut rng);
        let expect = ComplexMatrix::identity(d).scale_complex(m.trace() / C64::new(d as f64, 0.0));
        worst = worst.max((&heisenberg_weyl_twirl(&m) - &expect).max_abs());
    }
    worst
}

fn run_suite(suite: Suite, args: &VerifyArgs) -> CliResult<Vec<Check>> {
    let index = CONCRETE.iter().position(|&s| s == suite).expect("concrete suite") as u64;
    let base = SeededRng::new(args.seed, index);
    let (label, f): (&'static str, &TrialFn) = match suite {
        Suite::SecondMoment => {
            let mut checks = Vec::new();
            for (d, label) in [
                (2, "second moment d=2 (max z-score)"),
                (3, "second moment d=3 (max z-score)"),
            ] {
                checks.push(Check {
                    label,
                    worst: second_moment_z(d, args.samples, &base.substream(d as u64))?,
                    limit: args.sigmas,
                    worst_trial: None,
                });
            }
            checks.push(Check {
                label: "Heisenberg-Weyl twirl",
                worst: twirl_defect(&base),
                limit: 1e-12,
                worst_trial: None,
            });
            return Ok(checks);
        }
        Suite::DataProcessing => ("data processing", &data_processing),
        Suite::SharpTrace => ("sharp trace inequality", &sharp_trace),
        Suite::PositivePart => ("positive-part superadditivity", &positive_part),
        Suite::RelativeEntropyBound => ("relative entropy vs positive part", &relative_entropy_bound),
        Suite::Pinching => ("pinching inequality", &pinching),
        Suite::Duality => ("duality", &duality),
        Suite::Additivity => ("additivity", &additivity),
        Suite::All => unreachable!("expanded by the caller"),
    };
    Ok(vec![sweep(label, args.trials, &base, args.tol, f)?])
}

fn suite_name(suite: Suite) -> String {
    suite
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

/// Runs the selected suites; returns the report text, or the report with a failure.
pub fn verify(args: &VerifyArgs) -> CliResult<String> {
    let suites: Vec<Suite> = if args.suite == Suite::All {
        CONCRETE.to_vec()
    } else {
        vec![args.suite]
    };
    let mut report = String::new();
    let mut failures = Vec::new();
    for suite in suites {
        let name = suite_name(suite);
        for check in run_suite(suite, args)? {
            let status = if check.passed() { "PASS" } else { "FAIL" };
            writeln!(
                report,
                "{name}: {}: worst {:e} (limit {:e}) {status}",
                check.label, check.worst, check.limit
            )
            .expect("string write");
            if check.passed() {
                continue;
            }
            failures.push(name.clone());
            match &check.worst_trial {
                Some((i, trial)) => {
                    writeln!(report, "  offending instance: seed {}, trial {i}", args.seed).expect("string write");
                    if !trial.note.is_empty() {
                        writeln!(report, "  {}", trial.note).expect("string write");
                    }
                    for (part, file) in &trial.instance {
                        let path = args
                            .out_dir
                            .join(format!("verify-{name}-seed{}-trial{i}-{part}.json", args.seed));
                        file.write(&path)?;
                        writeln!(report, "  wrote {}", path.display()).expect("string write");
                    }
                }
                None => writeln!(report, "  statistical check, seed {}", args.seed).expect("string write"),
            }
        }
    }
    if failures.is_empty() {
        Ok(report)
    } else {
        print!("{report}");
        Err(CliError::VerificationFailed(failures.join(", ")))
    }
}
