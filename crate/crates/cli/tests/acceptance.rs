//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so that every line reaches the output; the
//! process exits non-zero when any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;

use qdecouple_core::condentropy::{
    cond_entropy, duality_pair, minimize_conditioning, petz_up_closed_form, CondEntropyKind,
};
use qdecouple_core::decoupling::{
    check_positive_part_inequalities, decoupling_sample_at, one_shot_upper_bound_optimized, partial_trace_lower_bound,
    sharp_trace_inequality, DecouplingInstance, MCEstimate,
};
use qdecouple_core::divergence::DivergenceKind;
use qdecouple_core::exponents::{
    channel_coding_exponent, critical_rate, standard_decoupling_exponents, trace_distance_comparator_exponent,
};
use qdecouple_core::haar::{exact_second_moment, ginibre, haar_unitary, heisenberg_weyl_twirl, random_isometry};
use qdecouple_core::optimize::SimplexOptimizerConfig;
use qdecouple_core::state::{max_entangled, max_mixed, random_density, random_pure, random_state, subsystems};
use qdecouple_core::{BipartiteState, ComplexMatrix, ExtendedReal, HermitianOperator, QuantumChannel, SeededRng, C64};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn bip(state: &qdecouple_core::MultipartiteState, a: &str, b: &str) -> BipartiteState {
    state.bipartition(&[a], &[b]).unwrap()
}

/// The 50 decoupling instances shared by the first two criteria: `|A| = 4`, `|E| ∈ {2, 3}`, rank ≤ 4.
fn decoupling_instances() -> Vec<BipartiteState> {
    let base = SeededRng::new(1001, 0);
    (0..50)
        .map(|i| {
            let mut rng = base.substream(i);
            let de = rng.gen_range(2..=3usize);
            let rank = rng.gen_range(1..=4usize);
            bip(
                &random_state(subsystems(&[("A", 4), ("E", de)]), rank, &mut rng).unwrap(),
                "A",
                "E",
            )
        })
        .collect()
}

struct McRun {
    mean_nats: f64,
    se_nats: f64,
    bound: f64,
    lower: f64,
}

fn mc_runs() -> Vec<McRun> {
    decoupling_instances()
        .into_iter()
        .enumerate()
        .map(|(i, rho)| {
            let inst = DecouplingInstance::standard(rho.clone(), 2, 2).unwrap();
            let base = SeededRng::new(2002, i as u64);
            let values: Vec<ExtendedReal> = (0..500)
                .map(|k| decoupling_sample_at(&inst, &base, k).unwrap())
                .collect();
            let est = MCEstimate::from_samples(&values, 2002, false).unwrap();
            let (mean_nats, se_nats) = est.mean_nats();
            McRun {
                mean_nats,
                se_nats,
                bound: one_shot_upper_bound_optimized(&inst).unwrap().0,
                lower: partial_trace_lower_bound(&rho, 2, 2).unwrap(),
            }
        })
        .collect()
}

fn criterion_1(runs: &[McRun]) -> Outcome {
    let worst = runs
        .iter()
        .map(|r| r.mean_nats - 3.0 * r.se_nats - r.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    outcome(
        worst <= 0.0,
        format!("max over 50 instances of (mean - 3 se - bound) = {worst:.3e} nats"),
    )
}

fn criterion_2(runs: &[McRun]) -> Outcome {
    let worst = runs
        .iter()
        .map(|r| r.lower - (r.mean_nats + 3.0 * r.se_nats))
        .fold(f64::NEG_INFINITY, f64::max);
    outcome(
        worst <= 0.0,
        format!("max over 50 instances of (lower - mean - 3 se) = {worst:.3e} nats"),
    )
}

fn criterion_3() -> Outcome {
    let base = SeededRng::new(3003, 0);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for i in 0..1000 {
        let mut rng = base.substream(i);
        let d = rng.gen_range(1..=8usize);
        let rho = random_density(d, d, &mut rng).unwrap().density().clone();
        let sigma = random_density(d, d, &mut rng).unwrap().density().clone();
        for k in 1..=10 {
            let (lhs, rhs) = sharp_trace_inequality(&rho, &sigma, k as f64 / 10.0).unwrap();
            worst = worst.max(lhs - rhs);
            if lhs > rhs + 1e-9 {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations in 10000 checks, max lhs - rhs = {worst:.3e}"),
    )
}

fn criterion_4() -> Outcome {
    let report = check_positive_part_inequalities(1000, &SeededRng::new(4004, 0)).unwrap();
    let passed = report.superadditivity_violation <= 1e-9 && report.relative_entropy_violation <= 1e-9;
    outcome(
        passed,
        format!(
            "max superadditivity violation {:.3e}, max relative-entropy violation {:.3e}",
            report.superadditivity_violation, report.relative_entropy_violation
        ),
    )
}

/// Largest `|mean − exact| / (4 stderr)` over real and imaginary parts of all entries, for `n` Haar samples.
fn second_moment_ratio(d: usize, n: u64, base: &SeededRng) -> f64 {
    let phi = max_entangled(d);
    let m = d.pow(4);
    let mut sum = vec![[0.0f64; 2]; m * m];
    let mut sq = vec![[0.0f64; 2]; m * m];
    let lift = ComplexMatrix::identity(d);
    for i in 0..n {
        let u = haar_unitary(d, &mut base.substream(i)).kron(&lift);
        let x = phi.matrix().conjugate_by(&u);
        for (k, z) in x.kron(&x).as_slice().iter().enumerate() {
            sum[k][0] += z.re;
            sum[k][1] += z.im;
            sq[k][0] += z.re * z.re;
            sq[k][1] += z.im * z.im;
        }
    }
    let exact = exact_second_moment(d).unwrap();
    let nf = n as f64;
    let mut worst: f64 = 0.0;
    for (k, z) in exact.as_slice().iter().enumerate() {
        for (p, target) in [z.re, z.im].into_iter().enumerate() {
            let mean = sum[k][p] / nf;
            let var = ((sq[k][p] - nf * mean * mean) / (nf - 1.0)).max(0.0);
            let se = (var / nf).sqrt();
            // Entries that are constant across samples agree up to roundoff.
            let excess = ((mean - target).abs() - 1e-12).max(0.0);
            if excess > 0.0 {
                worst = worst.max(excess / (4.0 * se));
            }
        }
    }
    worst
}

fn criterion_5() -> Outcome {
    let base = SeededRng::new(5005, 0);
    let r2 = second_moment_ratio(2, 20000, &base.substream(2));
    let r3 = second_moment_ratio(3, 20000, &base.substream(3));
    let mut rng = base.substream(99);
    let mut twirl: f64 = 0.0;
    for d in 1..=6 {
        let m = ginibre(d, d, &mut rng);
        let expect = ComplexMatrix::identity(d).scale_complex(m.trace() / C64::new(d as f64, 0.0));
        twirl = twirl.max((&heisenberg_weyl_twirl(&m) - &expect).max_abs());
    }
    outcome(
        r2 <= 1.0 && r3 <= 1.0 && twirl <= 1e-12,
        format!("largest deviation / (4 se): d=2 {r2:.3}, d=3 {r3:.3}; twirl defect {twirl:.3e}"),
    )
}

fn criterion_6() -> Outcome {
    let base = SeededRng::new(6006, 0);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let mut rng = base.substream(i);
        let dims = if i % 2 == 0 { [2, 2, 3] } else { [2, 3, 2] };
        let psi = random_pure(subsystems(&[("A", dims[0]), ("B", dims[1]), ("C", dims[2])]), &mut rng).unwrap();
        for k in 1..=10 {
            let (left, right) = duality_pair(&psi, "A", "B", "C", k as f64 / 10.0).unwrap();
            worst = worst.max((left - right).abs());
        }
    }
    outcome(
        worst <= 1e-6,
        format!("max |H~(A|C) + H_up(A|B)| = {worst:.3e} over 200 states x 10 orders"),
    )
}

fn criterion_7() -> Outcome {
    let base = SeededRng::new(7007, 0);
    let config = SimplexOptimizerConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let mut rng = base.substream(i);
        let db = rng.gen_range(2..=3usize);
        let rank = rng.gen_range(1..=2 * db);
        let rho = bip(
            &random_state(subsystems(&[("A", 2), ("B", db)]), rank, &mut rng).unwrap(),
            "A",
            "B",
        );
        let rb = rho.marginal_b();
        let start = rb.scale(1.0 / rb.trace());
        for alpha in [0.4, 0.6, 0.9, 1.5] {
            let closed = petz_up_closed_form(&rho, alpha).unwrap();
            let numeric = -minimize_conditioning(
                &rho,
                CondEntropyKind::petz(alpha).up(),
                std::slice::from_ref(&start),
                &config,
            )
            .unwrap()
            .value;
            worst = worst.max((closed - numeric).abs());
        }
    }
    outcome(
        worst <= 1e-6,
        format!("max |closed form - mirror descent| = {worst:.3e} over 200 states x 4 orders"),
    )
}

fn entropy_kinds() -> Vec<CondEntropyKind> {
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

fn criterion_8() -> Outcome {
    let base = SeededRng::new(8008, 0);
    let kinds = entropy_kinds();
    let mut additivity: f64 = 0.0;
    let mut isometry: f64 = 0.0;
    for i in 0..100 {
        let mut rng = base.substream(i);
        let subs = || subsystems(&[("A", 2), ("B", 2)]);
        let x = bip(&random_state(subs(), rng.gen_range(1..=4), &mut rng).unwrap(), "A", "B");
        let y = bip(&random_state(subs(), rng.gen_range(1..=4), &mut rng).unwrap(), "A", "B");
        let joint = x.tensor(&y);
        let va = random_isometry(3, 2, &mut rng).unwrap();
        let vb = random_isometry(3, 2, &mut rng).unwrap();
        let embedded = BipartiteState::from_parts(x.rho().conjugate_by(&va.kron(&vb)), 3, 3).unwrap();
        for &kind in &kinds {
            let hx = cond_entropy(&x, kind).unwrap();
            let hy = cond_entropy(&y, kind).unwrap();
            additivity = additivity.max((cond_entropy(&joint, kind).unwrap() - hx - hy).abs());
            isometry = isometry.max((cond_entropy(&embedded, kind).unwrap() - hx).abs());
        }
    }
    outcome(
        additivity <= 1e-6 && isometry <= 1e-6,
        format!(
            "{} entropy kinds on 100 pairs: max additivity defect {additivity:.3e}, max isometry defect {isometry:.3e}",
            kinds.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let base = SeededRng::new(9009, 0);
    let mut checked = 0;
    let mut worst_gap: f64 = 0.0;
    let mut not_exact = 0;
    let mut order_violation: f64 = f64::NEG_INFINITY;
    let mut i = 0;
    while checked < 50 {
        let mut rng = base.substream(i);
        i += 1;
        let rank = rng.gen_range(1..=2usize);
        let rho = bip(
            &random_state(subsystems(&[("A", 2), ("E", 2)]), rank, &mut rng).unwrap(),
            "A",
            "E",
        );
        let crit = critical_rate(&rho).unwrap();
        if crit <= 0.0 {
            continue;
        }
        checked += 1;
        let below = standard_decoupling_exponents(&rho, 0.9 * crit).unwrap();
        worst_gap = worst_gap.max((below.achievable - below.converse).abs());
        if !below.exact {
            not_exact += 1;
        }
        let above = standard_decoupling_exponents(&rho, 1.5 * crit).unwrap();
        order_violation = order_violation.max(above.achievable - above.converse);
    }
    outcome(
        worst_gap <= 1e-6 && not_exact == 0 && order_violation <= 1e-6,
        format!(
            "50 states with positive critical rate ({i} drawn): max |achievable - converse| at 0.9 R = {worst_gap:.3e}, \
             {not_exact} not flagged exact, max (achievable - converse) at 1.5 R = {order_violation:.3e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let base = SeededRng::new(10010, 0);
    let config = SimplexOptimizerConfig::default();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..100 {
        let mut rng = base.substream(i);
        let rank = rng.gen_range(1..=4usize);
        let rho = bip(
            &random_state(subsystems(&[("A", 2), ("E", 2)]), rank, &mut rng).unwrap(),
            "A",
            "E",
        );
        let r = rng.gen_range(0.05..1.5);
        let comparator = trace_distance_comparator_exponent(&rho, r, &config).unwrap().exponent();
        let achievable = standard_decoupling_exponents(&rho, r).unwrap().achievable;
        worst = worst.max(comparator - achievable);
    }
    outcome(
        worst <= 1e-6,
        format!("max (comparator - achievable) over 100 instances = {worst:.3e}"),
    )
}

fn criterion_11() -> Outcome {
    let base = SeededRng::new(11011, 0);
    let mut kinds = vec![];
    kinds.extend([0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0].map(DivergenceKind::Petz));
    kinds.extend([0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0].map(DivergenceKind::Sandwiched));
    let mut worst = f64::NEG_INFINITY;
    let mut infinite_after = 0;
    for i in 0..200 {
        let mut rng = base.substream(i);
        let d = rng.gen_range(2..=4usize);
        let dout = rng.gen_range(2..=4usize);
        let env = rng.gen_range(1..=3usize).max(d.div_ceil(dout));
        let rho = random_density(d, rng.gen_range(1..=d), &mut rng)
            .unwrap()
            .density()
            .clone();
        let sigma = random_density(d, rng.gen_range(1..=d), &mut rng)
            .unwrap()
            .density()
            .clone();
        let ch = QuantumChannel::random(d, dout, env, &mut rng).unwrap();
        let n_rho = HermitianOperator::new(ch.apply_operator(rho.matrix(), 1).unwrap()).unwrap();
        let n_sigma = HermitianOperator::new(ch.apply_operator(sigma.matrix(), 1).unwrap()).unwrap();
        for &kind in &kinds {
            let before = kind.evaluate(&rho, &sigma).unwrap();
            let after = kind.evaluate(&n_rho, &n_sigma).unwrap();
            match (before, after) {
                (ExtendedReal::Finite(b), ExtendedReal::Finite(a)) => worst = worst.max(a - b),
                (ExtendedReal::Finite(_), ExtendedReal::PositiveInfinity) => infinite_after += 1,
                _ => {}
            }
        }
    }
    outcome(
        worst <= 1e-8 && infinite_after == 0,
        format!(
            "200 triples x {} orders: max D(N rho||N sigma) - D(rho||sigma) = {worst:.3e}",
            kinds.len()
        ),
    )
}

/// `I_α(A⟩B)` of `Σ c_xy |xx⟩⟨yy|` with `c = [[½, ¼], [¼, ½]]`, written out from the eigenvalues ¾ and ¼.
fn dephasing_coherent_info(alpha: f64) -> f64 {
    let diag = 0.5 * (0.75f64.powf(alpha) + 0.25f64.powf(alpha));
    -(alpha / (1.0 - alpha)) * (2.0 * diag.powf(1.0 / alpha)).log2()
}

/// `½ max_{s ∈ [lo, hi]} s(I_{1/(1+s)} − r)` by a dense grid and ternary refinement.
fn dephasing_oracle(r: f64, lo: f64, hi: f64) -> f64 {
    let f = |s: f64| s * (dephasing_coherent_info(1.0 / (1.0 + s)) - r);
    let n = 20000;
    let mut best = (lo, f(lo));
    for k in 0..=n {
        let s = lo + (hi - lo) * k as f64 / n as f64;
        let v = f(s);
        if v > best.1 {
            best = (s, v);
        }
    }
    let h = (hi - lo) / n as f64;
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    0.5 * f(0.5 * (a + b)).max(best.1).max(0.0)
}

fn criterion_12() -> Outcome {
    let mut lines = Vec::new();
    let mut passed = true;

    let mut rng = SeededRng::new(12012, 0);
    let e = random_density(2, 2, &mut rng).unwrap().relabel(&["E"]).unwrap();
    let product = bip(&max_mixed(2).tensor(&e).unwrap(), "A", "E");
    let mut product_worst: f64 = 0.0;
    for r in [0.1, 0.3, 0.7] {
        let res = standard_decoupling_exponents(&product, r).unwrap();
        product_worst = product_worst
            .max((res.achievable - 2.0 * r).abs())
            .max((res.converse - 2.0 * r).abs());
        if r == 0.3 {
            lines.push(format!(
                "product r=0.3: achievable {:.10}, converse {:.10}{}",
                res.achievable,
                res.converse,
                if res.converse_capped { " (bracket capped)" } else { "" }
            ));
        }
    }
    passed &= product_worst <= 1e-8;
    lines.push(format!("product max deviation from 2r {product_worst:.3e}"));

    let phi = bip(&max_entangled(2), "A", "B");
    let mut phi_worst: f64 = 0.0;
    for r in [0.2, 0.5, 0.9, 1.2, 1.6] {
        let res = standard_decoupling_exponents(&phi, r).unwrap();
        let expect = (2.0 * r - 2.0).max(0.0);
        phi_worst = phi_worst.max((res.achievable - expect).abs());
        if r <= 1.0 {
            phi_worst = phi_worst.max((res.converse - expect).abs());
        }
    }
    passed &= phi_worst <= 1e-8;
    lines.push(format!("Phi max deviation {phi_worst:.3e}"));

    let overlaps = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 1.0]]).unwrap();
    let ch = QuantumChannel::generalized_dephasing(&overlaps).unwrap();
    let mut deph_worst: f64 = 0.0;
    for r in [0.0, 0.02, 0.05, 0.1, 0.15] {
        let res = channel_coding_exponent(&ch, r, 0, &mut SeededRng::new(12, 0), true).unwrap();
        deph_worst = deph_worst.max((res.achievable - dephasing_oracle(r, 1e-4, 1.0)).abs());
        if res.exact {
            deph_worst = deph_worst.max((res.converse - dephasing_oracle(r, 1e-4, res.s_max)).abs());
        }
    }
    passed &= deph_worst <= 1e-8;
    lines.push(format!(
        "dephasing max deviation from classical oracle {deph_worst:.3e}"
    ));
    outcome(passed, lines.join("; "))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qdecouple")
}

fn run(args: &[&str], threads: usize) -> (i32, Vec<u8>) {
    let out = Command::new(bin())
        .arg("--threads")
        .arg(threads.to_string())
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn write_state(dir: &Path, name: &str, state: &qdecouple_core::MultipartiteState) -> PathBuf {
    let path = dir.join(name);
    let m = state.matrix();
    let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    let dims: Vec<serde_json::Value> = state
        .subsystems()
        .iter()
        .map(|s| serde_json::json!({"label": s.label, "dim": s.dim}))
        .collect();
    let doc = serde_json::json!({"dims": dims, "matrix": rows});
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    path
}

fn criterion_13() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qdecouple-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut rng = SeededRng::new(13013, 0);
    let rho_ae = random_state(subsystems(&[("A", 4), ("E", 2)]), 3, &mut rng).unwrap();
    let rho_path = write_state(&dir, "rho_ae.json", &rho_ae);
    let channel = QuantumChannel::random(2, 2, 2, &mut rng).unwrap();
    let choi =
        qdecouple_core::MultipartiteState::new(channel.choi().clone(), subsystems(&[("in", 2), ("out", 2)])).unwrap();
    let choi_path = write_state(&dir, "choi.json", &choi);
    let a = write_state(
        &dir,
        "a.json",
        &random_state(subsystems(&[("A", 3)]), 3, &mut rng).unwrap(),
    );
    let b = write_state(
        &dir,
        "b.json",
        &random_state(subsystems(&[("A", 3)]), 2, &mut rng).unwrap(),
    );
    let s = |p: &Path| p.to_str().unwrap().to_string();

    let mut commands: Vec<(Vec<String>, Option<&str>)> = vec![
        (
            vec![
                "divergence".into(),
                s(&a),
                s(&b),
                "--kind".into(),
                "sandwiched".into(),
                "--alpha".into(),
                "1.5".into(),
            ],
            None,
        ),
        (
            vec![
                "decouple-mc".into(),
                s(&rho_path),
                "--d-a1".into(),
                "2".into(),
                "--d-a2".into(),
                "2".into(),
                "--samples".into(),
                "200".into(),
                "--seed".into(),
                "17".into(),
            ],
            None,
        ),
        (
            vec![
                "verify".into(),
                "--suite".into(),
                "all".into(),
                "--trials".into(),
                "3".into(),
                "--seed".into(),
                "5".into(),
            ],
            None,
        ),
    ];
    commands.push((
        vec![
            "exponent-curve".into(),
            s(&rho_path),
            "--labels".into(),
            "A,E".into(),
            "--task".into(),
            "standard-decoupling".into(),
            "--r-min".into(),
            "0.1".into(),
            "--r-max".into(),
            "1.5".into(),
            "--r-points".into(),
            "4".into(),
            "--out".into(),
            "OUT".into(),
        ],
        Some("standard.csv"),
    ));
    commands.push((
        vec![
            "exponent-curve".into(),
            s(&choi_path),
            "--labels".into(),
            "in,out".into(),
            "--task".into(),
            "channel".into(),
            "--r-min".into(),
            "0".into(),
            "--r-max".into(),
            "0.5".into(),
            "--r-points".into(),
            "3".into(),
            "--restarts".into(),
            "2".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            "OUT".into(),
        ],
        Some("channel.csv"),
    ));

    let mut mismatches = Vec::new();
    let mut failures = Vec::new();
    for (args, out_name) in &commands {
        let mut outputs = Vec::new();
        for (k, threads) in [1, 1, 4].into_iter().enumerate() {
            let out_path = out_name.map(|n| dir.join(format!("{k}-{n}")));
            let argv: Vec<String> = args
                .iter()
                .map(|x| {
                    if x == "OUT" {
                        s(out_path.as_ref().unwrap())
                    } else {
                        x.clone()
                    }
                })
                .collect();
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            let (code, mut stdout) = run(&argv, threads);
            if code != 0 {
                failures.push(format!("{} exited {code}", args[0]));
            }
            if let Some(p) = out_path {
                stdout.extend(std::fs::read(p).unwrap_or_default());
            }
            outputs.push(stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            mismatches.push(args[0].clone());
        }
    }
    std::fs::remove_dir_all(&dir).ok();
    outcome(
        mismatches.is_empty() && failures.is_empty(),
        format!(
            "{} seeded commands x (2 runs at 1 thread, 1 run at 4 threads): mismatches {:?}, failures {:?}",
            commands.len(),
            mismatches,
            failures
        ),
    )
}

fn main() {
    let runs = mc_runs();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(|| criterion_1(&runs))),
        (2, Box::new(|| criterion_2(&runs))),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
        (11, Box::new(criterion_11)),
        (12, Box::new(criterion_12)),
        (13, Box::new(criterion_13)),
    ];
    let mut failed = Vec::new();
    for (n, check) in &criteria {
        let start = std::time::Instant::now();
        let o = check();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {n}: {status} ({}; {:.1}s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.passed {
            failed.push(*n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
