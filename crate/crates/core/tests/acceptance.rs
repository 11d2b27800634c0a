//! Acceptance suite: one PASS/FAIL line per criterion, written straight to
//! stdout so it shows up in captured test runs.
//!
//! Criterion 8 asks for non-negative condition (b) margins under the
//! halving schedule `η_n = 2^{3−n}`. That schedule cannot satisfy condition
//! (b) from stage 5 on, so the line is computed faithfully and expected to
//! FAIL; line 8b runs the same checks on the slack-bounded schedule. The
//! test fails if any other line fails, or if line 8 unexpectedly passes.

use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use metric_ramsey::bounds::{bipartite_lower_bound, matrix_identity_residual, matrix_rowcol_slack, roundness_slack};
use metric_ramsey::cli::{manifest_argv, run};
use metric_ramsey::embeddings::{
    embed_012_l2, embed_knn_l2, embed_knn_lp, embed_knn_lp_basic, PsdWitness, Verdict,
};
use metric_ramsey::hardness::uc_construction::{all_margins_with, halving_eta, quadruple_gaps};
use metric_ramsey::hardness::{
    build_l2_hard_metric, build_uc_hard_metric_with, uc_slack, verify_no_isometric_quadruple, ConvexityModulus,
    EtaSchedule, UCConstruction,
};
use metric_ramsey::json::{metric_from_json, read_json, to_text};
use metric_ramsey::metric::{distortion_identity, knn_metric, metric_from_graph_012, MetricSpace};
use metric_ramsey::ramsey::{
    almost_disjoint_family, build_universal_metric, find_knn_copy, iso_ramsey_l2, miss_probability_bound,
    monte_carlo_universality, sample_gn_half, VerificationMode,
};
use metric_ramsey::metric::Graph;
use metric_ramsey::wide::Wide;

const TOL: f64 = 1e-9;

/// Criteria expected to fail as stated.
const KNOWN_RED: &[&str] = &["8"];

type Check = Result<String, String>;

struct Suite {
    failed: Vec<String>,
}

impl Suite {
    fn line(&self, text: &str) {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{text}");
        let _ = out.flush();
    }

    fn run(&mut self, id: &str, title: &str, limit: Duration, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        let (verdict, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        self.line(&format!("{verdict} [{id:>2}] {title} ({elapsed:.2?}): {detail}"));
        if result.is_err() {
            self.failed.push(id.to_owned());
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn halves(n: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..n).collect(), (n..2 * n).collect())
}

fn c1() -> Check {
    for n in 2..=16 {
        let target = 2.0 * ((n as f64 - 1.0) / n as f64).sqrt();
        let knn = knn_metric::<f64>(n).map_err(|e| e.to_string())?;
        let image = embed_knn_l2(n).map_err(|e| e.to_string())?;
        let d = distortion_identity(&knn, &image).map_err(|e| e.to_string())?.distortion;
        let (a, b) = halves(n);
        let lb = bipartite_lower_bound(&knn, &a, &b, 2.0).map_err(|e| e.to_string())?;
        ensure((d - target).abs() <= TOL && (lb - target).abs() <= TOL, || {
            format!("n={n}: distortion {d}, lower bound {lb}, expected {target}")
        })?;
    }
    Ok("n = 2..16 tight at 2√((n−1)/n)".into())
}

fn hadamard_order(n: usize) -> usize {
    let mut m = 1;
    while m < n {
        m *= 2;
    }
    m
}

fn c2() -> Check {
    let mut checked = 0;
    for p in [3.0, 4.0, 8.0] {
        for n in [2usize, 3, 4, 6, 8] {
            let nf = n as f64;
            let scale = 2f64.powf(2.0 / p);
            let lower = scale * ((nf - 1.0) / nf).powf(1.0 / p);
            let upper = scale * (1.0 - 1.0 / (2.0 * nf)).powf(1.0 / p);
            let formula = scale * (1.0 - 1.0 / hadamard_order(n) as f64).powf(1.0 / p);
            let knn = knn_metric::<f64>(n).map_err(|e| e.to_string())?;
            let image = embed_knn_lp(n, p).map_err(|e| e.to_string())?;
            let d = distortion_identity(&knn, &image).map_err(|e| e.to_string())?.distortion;
            ensure(lower - TOL <= d && d <= upper + TOL && (d - formula).abs() <= TOL, || {
                format!("p={p} n={n}: {lower} <= {d} <= {upper}, formula {formula}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, n) pairs within the sandwich"))
}

fn c3() -> Check {
    for p in [3.0, 4.0, 8.0] {
        for n in [2usize, 3, 4, 6, 8] {
            let knn = knn_metric::<f64>(n).map_err(|e| e.to_string())?;
            let image = embed_knn_lp_basic(n, p).map_err(|e| e.to_string())?;
            let d = distortion_identity(&knn, &image).map_err(|e| e.to_string())?.distortion;
            let target = 2f64.powf(2.0 / p);
            ensure((d - target).abs() <= TOL, || format!("p={p} n={n}: {d} vs {target}"))?;
        }
    }
    Ok("distortion 2^{2/p} on the grid".into())
}

fn random_points(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()
}

fn c4() -> Check {
    let mut worst = f64::INFINITY;
    for (pi, p) in [1.0, 1.5, 2.0, 3.0, 4.0].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + pi as u64);
        for case in 0..500 {
            let n = rng.gen_range(1..=6);
            let dim = rng.gen_range(1..=5);
            let xs = random_points(&mut rng, n, dim);
            let ys = random_points(&mut rng, n, dim);
            let r = roundness_slack(&xs, &ys, p).map_err(|e| e.to_string())?;
            ensure(r.slack >= -TOL * r.rhs, || format!("p={p} case {case}: slack {} rhs {}", r.slack, r.rhs))?;
            if r.rhs > 0.0 {
                worst = worst.min(r.slack / r.rhs);
            }
        }
    }
    let image = embed_knn_l2(2).map_err(|e| e.to_string())?;
    let pts = image.points();
    let r = roundness_slack(&pts[0..2], &pts[2..4], 2.0).map_err(|e| e.to_string())?;
    ensure(r.slack.abs() <= TOL * r.rhs.max(1.0), || format!("K_{{2,2}} slack {}", r.slack))?;
    Ok(format!("2500 configurations, min slack/rhs {worst:.3e}; K_{{2,2}} slack {:.1e}", r.slack))
}

fn c5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    for case in 0..500 {
        let n = rng.gen_range(1..=8);
        let a: Vec<Vec<f64>> = random_points(&mut rng, n, n);
        let id = matrix_identity_residual(&a).map_err(|e| e.to_string())?;
        ensure(id.residual <= TOL * (1.0 + id.lhs), || format!("case {case}: residual {}", id.residual))?;
        for p in [2.0, 3.0, 7.0, 16.0] {
            let s = matrix_rowcol_slack(&a, p).map_err(|e| e.to_string())?;
            ensure(s.slack >= -TOL * s.rhs, || format!("case {case} p={p}: slack {} rhs {}", s.slack, s.rhs))?;
            count += 1;
        }
    }
    Ok(format!("{count} slack checks and 500 identity residuals"))
}

fn c6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut with_both = 0;
    for case in 0..200 {
        let n = rng.gen_range(2..=12);
        let g = sample_gn_half(n, rng.gen());
        let m: MetricSpace<f64> = metric_from_graph_012(&g).map_err(|e| e.to_string())?;
        let image = embed_012_l2(&m).map_err(|e| e.to_string())?;
        let edge = (4.0 - 4.0 / n as f64).sqrt();
        for i in 0..n {
            for j in i + 1..n {
                let want = if g.has_edge(i, j) { edge } else { 2.0 };
                let got = image.distance(i, j);
                ensure((got - want).abs() <= TOL, || format!("case {case} ({i},{j}): {got} vs {want}"))?;
            }
        }
        let edges = g.edge_count();
        if edges > 0 && edges < n * (n - 1) / 2 {
            with_both += 1;
            let d = distortion_identity(&m, &image).map_err(|e| e.to_string())?.distortion;
            let target = 2.0 * ((n as f64 - 1.0) / n as f64).sqrt();
            ensure((d - target).abs() <= TOL, || format!("case {case}: distortion {d} vs {target}"))?;
        }
    }
    Ok(format!("200 metrics, {with_both} with both distances"))
}

fn c7() -> Check {
    let mut notes = Vec::new();
    for n in 4..=8 {
        let h = build_l2_hard_metric(n).map_err(|e| e.to_string())?;
        let report = verify_no_isometric_quadruple(&h.metric).map_err(|e| e.to_string())?;
        for q in &report.certificates {
            let c = &q.certificate;
            let negative = matches!(&c.witness, Some(PsdWitness::NegativeMinor { minor, .. }) if minor.is_negative());
            ensure(c.verdict == Verdict::NotPsd && negative, || format!("n={n} quad {:?} not certified", q.quad))?;
        }
        let (size, _) = iso_ramsey_l2(&h.metric).map_err(|e| e.to_string())?;
        ensure(size == 3, || format!("n={n}: largest isometric subspace {size}"))?;
        notes.push(format!("n={n}:{}", h.shrink_rounds));
    }
    Ok(format!("all quadruples NotPSD, R = 3; shrink rounds {}", notes.join(" ")))
}

/// Counts of negative margins and of quadruples missing `gap ≤ −η_l/(2d_jk)`
/// (relative tolerance 1e−9) or `gap < 0`.
fn uc_failures(c: &UCConstruction, eta_of: impl Fn(usize) -> metric_ramsey::scalar::Dyadic) -> Result<(usize, usize, usize, usize), String> {
    let margins = all_margins_with(c, eta_of).map_err(|e| e.to_string())?;
    let gaps = quadruple_gaps(c).map_err(|e| e.to_string())?;
    let slack = Wide::from(1.0 - TOL);
    let bad_margins = margins.iter().filter(|r| r.margin.is_negative()).count();
    let bad_gaps = gaps.iter().filter(|q| !(q.gap <= q.bound * slack && q.gap.is_negative())).count();
    Ok((bad_margins, margins.len(), bad_gaps, gaps.len()))
}

fn c8(schedule: EtaSchedule) -> Check {
    let mut failures = Vec::new();
    let mut totals = (0, 0);
    for delta in [ConvexityModulus::l2(), ConvexityModulus::lp(4.0).unwrap()] {
        for n in 4..=12 {
            let c = build_uc_hard_metric_with(n, &delta, schedule).map_err(|e| e.to_string())?;
            let (bm, tm, bg, tg) = match schedule {
                EtaSchedule::Halving => uc_failures(&c, halving_eta)?,
                EtaSchedule::SlackBounded => uc_failures(&c, |stage| c.eta(stage).clone())?,
            };
            totals.0 += tm;
            totals.1 += tg;
            if bm > 0 || bg > 0 {
                failures.push(format!("{} n={n}: {bm}/{tm} margins < 0, {bg}/{tg} gaps above bound", delta.name()));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{} margins >= 0 and {} quadruple gaps below -η_l/(2 d_jk)", totals.0, totals.1))
    } else {
        Err(format!("{} of 18 constructions fail; first: {}; last: {}", failures.len(), failures[0], failures[failures.len() - 1]))
    }
}

fn pairwise_ok(sets: &[Vec<usize>]) -> bool {
    sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| a.iter().filter(|x| b.contains(x)).count() <= 1))
}

fn c9() -> Check {
    let mut min = f64::INFINITY;
    for p in [2.0, 3.0, 4.0] {
        let delta = ConvexityModulus::lp(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(900 + p as u64);
        for case in 0..500 {
            let dim = rng.gen_range(1..=5);
            let pts = random_points(&mut rng, 3, dim);
            let s = uc_slack(&pts[0], &pts[1], &pts[2], p, &delta).map_err(|e| format!("case {case}: {e}"))?;
            ensure(s.slack >= -TOL * (1.0 + s.rhs), || format!("p={p} case {case}: slack {}", s.slack))?;
            min = min.min(s.slack);
        }
    }
    Ok(format!("1500 triples, min slack {min:.3e}"))
}

fn c10() -> Check {
    for (s, k) in [(19, 3), (25, 3), (35, 4), (51, 5)] {
        let f = almost_disjoint_family(s, k).map_err(|e| e.to_string())?;
        let floor = s / (2 * k);
        ensure(
            f.sets.iter().all(|x| x.len() == k && x.iter().all(|&i| i < s))
                && pairwise_ok(&f.sets)
                && f.sets.len() >= floor * floor,
            || format!("family ({s},{k}) broken"),
        )?;
    }
    let trials = 10_000;
    let mut mc = Vec::new();
    for (h, s, seed) in [(Graph::path(3), 19, 31), (Graph::complete(2), 9, 32)] {
        let k = h.vertex_count();
        let bound = miss_probability_bound(k, s).map_err(|e| e.to_string())?;
        let fraction = monte_carlo_universality(&h, s, trials, seed).map_err(|e| e.to_string())?;
        let limit = bound + 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt();
        ensure(fraction <= limit, || format!("k={k} s={s}: miss {fraction} > {limit}"))?;
        mc.push(format!("k={k},s={s}: {fraction:.4} <= {limit:.4}"));
    }
    let mut found = Vec::new();
    for seed in 0..5u64 {
        if let Ok(u) = build_universal_metric(16, 2, 10, 50, seed) {
            ensure(u.report.mode == VerificationMode::Exhaustive && u.report.checked == 8008 && u.report.misses.is_empty(), || {
                format!("seed {seed}: report is not an exhaustive certificate")
            })?;
            let copy = find_knn_copy(&u.metric, 2, &(0..10).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
            ensure(copy.is_some(), || format!("seed {seed}: first 10 points hold no K_{{2,2}}"))?;
            found.push(format!("seed {seed} attempt {}", u.report.attempt));
        }
    }
    ensure(!found.is_empty(), || "no (K_{2,2}, 10)-universal graph on 16 vertices in 5 x 50 attempts".into())?;
    Ok(format!("families ok; {}; universal: {}", mc.join(", "), found.join(", ")))
}

fn c11() -> Check {
    let mut lines = 0;
    for i in 1..=9 {
        let delta = i as f64 / 10.0;
        let k = (2.0 / delta).floor() as usize + 1;
        let knn = knn_metric::<f64>(k).map_err(|e| e.to_string())?;
        let (a, b) = halves(k);
        for p in [1.0, 1.5, 2.0] {
            let lb = bipartite_lower_bound(&knn, &a, &b, p).map_err(|e| e.to_string())?;
            ensure(lb > 2.0 - delta, || format!("δ={delta} k={k} p={p}: {lb} <= {}", 2.0 - delta))?;
            lines += 1;
        }
    }
    Ok(format!("{lines} (δ, p) pairs exceed 2 − δ"))
}

fn c12() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut commands: Vec<Vec<String>> = vec![
        vec!["gen", "knn", "--n", "3"],
        vec!["gen", "knn", "--n", "4", "--kind", "rational"],
        vec!["gen", "l2hard", "--n", "5"],
        vec!["gen", "uchard", "--n", "6"],
        vec!["gen", "uchard", "--n", "5", "--modulus", "lp:4", "--kind", "real"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for seed in [1u64, 7, 42] {
        commands.push(["gen", "graph012", "--n", "10", "--seed", &seed.to_string()].map(String::from).to_vec());
    }
    for (i, cmd) in commands.iter().enumerate() {
        let first = dir.path().join(format!("out{i}.json"));
        let manifest = dir.path().join(format!("manifest{i}.json"));
        let mut argv = vec!["metric-ramsey".to_owned()];
        argv.extend(cmd.iter().cloned());
        argv.extend(["--out".to_owned(), first.display().to_string(), "--manifest".to_owned(), manifest.display().to_string()]);
        ensure(run(&argv) == 0, || format!("{cmd:?} failed"))?;
        let text = std::fs::read_to_string(&first).map_err(|e| e.to_string())?;
        let parsed = metric_from_json(&read_json(&first).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(to_text(&parsed.to_json()) == text, || format!("{cmd:?}: serialization is not a fixed point"))?;
        let reparsed = metric_from_json(&parsed.to_json()).map_err(|e| e.to_string())?;
        ensure(reparsed == parsed, || format!("{cmd:?}: round trip changed the metric"))?;
        let m = read_json(&manifest).map_err(|e| e.to_string())?;
        let second = dir.path().join(format!("replay{i}.json"));
        let replay = manifest_argv(&m, &second)?;
        ensure(run(&replay) == 0, || format!("replay of {cmd:?} failed"))?;
        let again = std::fs::read(&second).map_err(|e| e.to_string())?;
        ensure(again == text.as_bytes(), || format!("{cmd:?}: replay differs"))?;
    }
    Ok(format!("{} gen outputs round-trip and replay byte-identically", commands.len()))
}

#[test]
fn acceptance() {
    let mut suite = Suite { failed: Vec::new() };
    suite.line("acceptance criteria");
    suite.run("1", "K_{n,n} in l2 solved exactly", secs(1), c1);
    suite.run("2", "K_{n,n} in lp, p > 2 sandwich", secs(1), c2);
    suite.run("3", "basic lp embedding distortion 2^{2/p}", secs(1), c3);
    suite.run("4", "roundness inequality suite", secs(5), c4);
    suite.run("5", "matrix inequality and identity", secs(5), c5);
    suite.run("6", "{0,1,2} PSD embedding", secs(5), c6);
    suite.run("7", "l2-hard construction, exact", secs(60), c7);
    suite.run("8", "uniformly convex construction, η_n = 2^{3-n}", secs(10), || c8(EtaSchedule::Halving));
    suite.run("8b", "uniformly convex construction, η_{k+1} = min(η_k/2, s/2)", secs(10), || {
        c8(EtaSchedule::SlackBounded)
    });
    suite.run("9", "three-point uniform convexity inequality", secs(5), c9);
    suite.run("10", "combinatorial pipeline", secs(120), c10);
    suite.run("11", "K_{k,k} certificate exceeds 2 − δ", secs(1), c11);
    suite.run("12", "CLI round trip and manifest replay", secs(10), c12);
    let unexpected: Vec<&String> = suite.failed.iter().filter(|id| !KNOWN_RED.contains(&id.as_str())).collect();
    let fixed: Vec<&&str> = KNOWN_RED.iter().filter(|id| !suite.failed.iter().any(|f| f == *id)).collect();
    suite.line(&format!(
        "summary: {} failing ({}); expected failing: {}",
        suite.failed.len(),
        suite.failed.join(", "),
        KNOWN_RED.join(", ")
    ));
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    assert!(fixed.is_empty(), "criteria expected to fail now pass: {fixed:?}");
}
