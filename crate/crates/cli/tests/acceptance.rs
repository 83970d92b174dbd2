// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Pass criterion numbers after `--` to run a subset.

use std::f64::consts::FRAC_PI_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgcov::geometry::{intersection_area, intersection_area_derivative};
use sgcov::montecarlo::{estimate_contact_cdf, estimate_multi_cluster, estimate_single_cluster, SimConfig};
use sgcov::multi_cluster::{contact_cdf, coverage_closed_access, coverage_open_access, coverage_open_access_with, OpenAccessModel};
use sgcov::quadrature::kernel_f;
use sgcov::single_cluster::{coverage, coverage_lower_bound, spectral_efficiency};
use sgcov::{db_to_linear, ChannelModel, CircleConfig, KernelArgs, MultiClusterParams, QuadratureSettings, SingleClusterGeometry, Strategy};

const LAMBDA: f64 = 0.01;
const RADIUS: f64 = 15.0;
const SIGMA2: f64 = 1e-4;
const LAMBDA_P: f64 = 4e-4;
const STRATEGIES: [Strategy; 2] = [Strategy::Closest, Strategy::Uniform];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn q() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn channel(alpha: f64) -> ChannelModel {
    ChannelModel::new(alpha, SIGMA2).unwrap()
}

fn cluster(delta: f64) -> SingleClusterGeometry {
    SingleClusterGeometry::new(LAMBDA, RADIUS, delta * RADIUS).unwrap()
}

fn network(delta_c: f64) -> MultiClusterParams {
    MultiClusterParams::new(LAMBDA_P, LAMBDA, RADIUS, delta_c * RADIUS).unwrap()
}

fn sim(n_trials: u64, seed: u64) -> SimConfig {
    SimConfig {
        n_trials,
        seed,
        ..SimConfig::default()
    }
}

fn name(s: Strategy) -> &'static str {
    match s {
        Strategy::Closest => "closest",
        Strategy::Uniform => "uniform",
    }
}

// ---------------------------------------------------------------------------
// 1. Kernel against independent quadrature
// ---------------------------------------------------------------------------

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 60)
}

fn kernel_oracle(s: f64, x: f64, alpha: f64) -> f64 {
    let f = |t: f64| 2.0 * t / (1.0 + t.powf(alpha) / s);
    let knee = s.powf(1.0 / alpha).min(x);
    let tol = 1e-13 * knee.max(1e-150).powi(2);
    let mut total = simpson(&f, 0.0, knee, tol);
    let mut lo = knee;
    while lo < x {
        let hi = (2.0 * lo).min(x);
        total += simpson(&f, lo, hi, tol);
        lo = hi;
    }
    total
}

fn kernel_draws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<(f64, f64, f64)> = (0..1000)
        .map(|_| {
            let s = 10f64.powf(rng.random_range(-3.0..6.0));
            let x = rng.random_range(0.0..100.0);
            let alpha = 6.0 - rng.random_range(0.0..4.0);
            (s, x, alpha)
        })
        .collect();
    let start = Instant::now();
    let values: Vec<f64> = draws.iter().map(|&(s, x, alpha)| kernel_f(KernelArgs { s, x, alpha }).unwrap()).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let mut worst: f64 = 0.0;
    for (&(s, x, alpha), v) in draws.iter().zip(&values) {
        let want = kernel_oracle(s, x, alpha);
        let rel = if want == 0.0 { v.abs() } else { (v - want).abs() / want };
        worst = worst.max(rel);
    }
    outcome(worst <= 1e-8 && elapsed < 10.0, format!("worst relative error {worst:.2e} over 1000 draws, kernel time {elapsed:.3} s"))
}

// ---------------------------------------------------------------------------
// 2. Geometry
// ---------------------------------------------------------------------------

/// Jittered-grid estimate of `|b(o,r) ∩ b((d,0),D)|` over the bounding box
/// of the intersection.
fn stratified_area(d: f64, big: f64, r: f64, n: usize, rng: &mut ChaCha8Rng) -> f64 {
    let x0 = (-r).max(d - big);
    let x1 = r.min(d + big);
    let y1 = r.min(big);
    if x1 <= x0 {
        return 0.0;
    }
    let (hx, hy) = ((x1 - x0) / n as f64, 2.0 * y1 / n as f64);
    let mut hits = 0u64;
    for i in 0..n {
        for j in 0..n {
            let x = x0 + (i as f64 + rng.random::<f64>()) * hx;
            let y = -y1 + (j as f64 + rng.random::<f64>()) * hy;
            if x * x + y * y <= r * r && (x - d) * (x - d) + y * y <= big * big {
                hits += 1;
            }
        }
    }
    hits as f64 * hx * hy
}

fn geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_area, mut worst_jump, mut worst_deriv): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let big: f64 = rng.random_range(5.0..30.0);
        let d: f64 = rng.random_range(0.0..2.0 * big);
        let (lo, hi) = ((d - big).abs(), d + big);
        let r = lo + rng.random_range(0.05..0.95) * (hi - lo);
        let cfg = CircleConfig::new(d, big).unwrap();

        let exact = intersection_area(cfg, r).unwrap();
        let mc = stratified_area(d, big, r, 3000, &mut rng);
        worst_area = worst_area.max((exact - mc).abs() / exact);

        for edge in [lo, hi] {
            if edge > 0.0 {
                let below = intersection_area(cfg, edge * (1.0 - 1e-13)).unwrap();
                let above = intersection_area(cfg, edge * (1.0 + 1e-13)).unwrap();
                worst_jump = worst_jump.max((below - above).abs());
            }
        }

        let h = 1e-5 * r;
        let fd = (intersection_area(cfg, r + h).unwrap() - intersection_area(cfg, r - h).unwrap()) / (2.0 * h);
        let an = intersection_area_derivative(cfg, r).unwrap();
        worst_deriv = worst_deriv.max((an - fd).abs() / an.abs());
    }
    // Four significant digits: within half a unit of the fourth digit.
    outcome(
        worst_area <= 5e-5 && worst_jump < 1e-9 && worst_deriv <= 1e-6,
        format!("area vs MC rel {worst_area:.2e}, boundary jump {worst_jump:.2e}, derivative rel {worst_deriv:.2e} (20 triples)"),
    )
}

// ---------------------------------------------------------------------------
// 3. Single cluster vs simulation
// ---------------------------------------------------------------------------

fn single_cluster_vs_mc() -> Outcome {
    let betas_db = [-10.0, -5.0, 0.0, 5.0, 10.0];
    let betas: Vec<f64> = betas_db.iter().map(|&b| db_to_linear(b)).collect();
    let (mut failed, mut worst_ratio) = (Vec::new(), 0.0_f64);
    for alpha in [3.0, 4.0] {
        for delta in [2.0 / 3.0, 4.0 / 3.0] {
            let g = cluster(delta);
            let ch = channel(alpha);
            let mc = estimate_single_cluster(&g, &ch, &betas, &sim(1_000_000, 1)).unwrap();
            for strategy in STRATEGIES {
                let sweep = match strategy {
                    Strategy::Closest => &mc.closest,
                    Strategy::Uniform => &mc.uniform,
                };
                for (i, &beta) in betas.iter().enumerate() {
                    let exact = coverage(strategy, &g, &ch, beta, &q()).unwrap();
                    let e = sweep.coverage[i];
                    let tol = 0.005_f64.max(3.0 * e.std_error);
                    let err = (exact - e.mean).abs();
                    worst_ratio = worst_ratio.max(err / tol);
                    if err > tol {
                        failed.push(format!("{} a={alpha} d={delta:.3} {} dB: {exact:.5} vs {:.5}", name(strategy), betas_db[i], e.mean));
                    }
                }
            }
        }
    }
    outcome(failed.is_empty(), format!("40 points, worst |error|/tolerance {worst_ratio:.3}; {}", list(&failed)))
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "no failures".into()
    } else {
        format!("failures: {}", items.join("; "))
    }
}

// ---------------------------------------------------------------------------
// 4. Horizontal gap at coverage 0.8
// ---------------------------------------------------------------------------

/// Threshold in dB at which coverage drops to `level` (coverage decreases
/// in the threshold).
fn threshold_at(strategy: Strategy, g: &SingleClusterGeometry, ch: &ChannelModel, level: f64) -> f64 {
    let (mut lo, mut hi) = (-80.0, 40.0);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if coverage(strategy, g, ch, db_to_linear(mid), &q()).unwrap() > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn coverage_gaps() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (delta, label, targets) in [(2.0 / 3.0, "2/3", [20.0, 25.0]), (4.0 / 3.0, "4/3", [12.0, 18.0])] {
        for (alpha, target) in [3.0, 4.0].into_iter().zip(targets) {
            let g = cluster(delta);
            let ch = channel(alpha);
            let gap = threshold_at(Strategy::Closest, &g, &ch, 0.8) - threshold_at(Strategy::Uniform, &g, &ch, 0.8);
            let ok = (gap - target).abs() <= 2.0;
            pass &= ok;
            parts.push(format!("d={label} a={alpha}: {gap:.2} dB (target {target}) {}", if ok { "ok" } else { "off" }));
        }
    }
    outcome(pass, parts.join("; "))
}

// ---------------------------------------------------------------------------
// 5. Optimal receiver offset
// ---------------------------------------------------------------------------

fn argmax_delta(strategy: Strategy, beta_db: f64) -> (f64, f64) {
    let ch = channel(4.0);
    let beta = db_to_linear(beta_db);
    let f = |delta: f64| coverage(strategy, &cluster(delta), &ch, beta, &q()).unwrap();
    let step = 0.05;
    let (mut best, mut best_v) = (0.0, f(0.0));
    for i in 1..=60 {
        let delta = i as f64 * step;
        let v = f(delta);
        if v > best_v {
            (best, best_v) = (delta, v);
        }
    }
    // Golden-section refinement inside the bracketing cells.
    let (mut a, mut b) = ((best - step).max(0.0), (best + step).min(3.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-4 {
        if fc > fd {
            (b, d, fd) = (d, c, fc);
            c = b - g * (b - a);
            fc = f(c);
        } else {
            (a, c, fc) = (c, d, fd);
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    if v >= best_v {
        (x, v)
    } else {
        (best, best_v)
    }
}

fn optimal_offset() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (strategy, beta_db, target, tol) in [
        (Strategy::Closest, -5.0, 0.8, 0.15),
        (Strategy::Closest, 0.0, 0.8, 0.15),
        (Strategy::Uniform, -5.0, 2.0, 0.3),
    ] {
        let (x, v) = argmax_delta(strategy, beta_db);
        let ok = (x - target).abs() <= tol;
        pass &= ok;
        parts.push(format!("{} {beta_db} dB: argmax {x:.3} (coverage {v:.4}, target {target}±{tol}) {}", name(strategy), if ok { "ok" } else { "off" }));
    }
    outcome(pass, parts.join("; "))
}

// ---------------------------------------------------------------------------
// 6. Lower bounds
// ---------------------------------------------------------------------------

/// Largest exact − bound gap on the 41-point threshold grid, frozen after
/// the first validated run.
const PINNED_MAX_GAP: [(Strategy, f64, f64); 4] = [
    (Strategy::Closest, 2.0 / 3.0, 0.058626),
    (Strategy::Closest, 4.0 / 3.0, 0.008309),
    (Strategy::Uniform, 2.0 / 3.0, 0.052732),
    (Strategy::Uniform, 4.0 / 3.0, 0.037275),
];

fn lower_bounds() -> Outcome {
    let ch = channel(4.0);
    let mut violations = 0;
    let mut pass = true;
    let mut parts = Vec::new();
    for (strategy, delta, pinned) in PINNED_MAX_GAP {
        let g = cluster(delta);
        let mut max_gap: f64 = 0.0;
        for i in 0..=40 {
            let beta = db_to_linear(-20.0 + i as f64);
            let exact = coverage(strategy, &g, &ch, beta, &q()).unwrap();
            let lb = coverage_lower_bound(strategy, &g, &ch, beta, &q()).unwrap();
            if lb > exact + 1e-9 {
                violations += 1;
            }
            max_gap = max_gap.max(exact - lb);
        }
        let ok = (max_gap - pinned).abs() <= 1e-5;
        pass &= ok;
        parts.push(format!("{} d={delta:.3}: max gap {max_gap:.6} (pinned {pinned:.6})", name(strategy)));
    }
    outcome(pass && violations == 0, format!("{violations} violations; {}", parts.join("; ")))
}

// ---------------------------------------------------------------------------
// 7. Poisson network limit
// ---------------------------------------------------------------------------

fn poisson_limit() -> Outcome {
    let g = SingleClusterGeometry::new(LAMBDA, 50.0 / LAMBDA.sqrt(), 0.0).unwrap();
    let ch = ChannelModel::new(4.0, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=8 {
        let beta = db_to_linear(-20.0 + 5.0 * i as f64);
        let rb = beta.sqrt();
        let oracle = 1.0 / (1.0 + rb * (FRAC_PI_2 - (1.0 / rb).atan()));
        let p = coverage(Strategy::Closest, &g, &ch, beta, &q()).unwrap();
        worst = worst.max((p - oracle).abs());
    }
    outcome(worst <= 1e-3, format!("worst |error| {worst:.2e} over -20..20 dB"))
}

// ---------------------------------------------------------------------------
// 8. Contact distance
// ---------------------------------------------------------------------------

fn contact_distance() -> Outcome {
    let p = network(1.0);
    let radii: Vec<f64> = (0..20).map(|i| 2.0 + 2.0 * i as f64).collect();
    let mc = estimate_contact_cdf(&p, &radii, &sim(100_000, 1)).unwrap();
    let mut worst: f64 = 0.0;
    for (r, e) in radii.iter().zip(&mc) {
        let exact = contact_cdf(&p, *r, &q()).unwrap();
        worst = worst.max((exact - e.mean).abs() / e.std_error);
    }
    let below = contact_cdf(&p, RADIUS * (1.0 - 1e-13), &q()).unwrap();
    let above = contact_cdf(&p, RADIUS * (1.0 + 1e-13), &q()).unwrap();
    let jump = (below - above).abs();
    outcome(worst <= 3.0 && jump < 1e-9, format!("worst |error|/SE {worst:.2} at 20 radii, jump at r=D {jump:.2e}"))
}

// ---------------------------------------------------------------------------
// 9. Cluster network vs simulation, and receiver spread
// ---------------------------------------------------------------------------

fn cluster_network() -> Outcome {
    let betas_db = [-10.0, 0.0, 10.0];
    let betas: Vec<f64> = betas_db.iter().map(|&b| db_to_linear(b)).collect();
    let p = network(2.0 / 3.0);
    let mut failed = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut printed_worst: f64 = 0.0;
    for alpha in [3.0, 4.0] {
        let ch = channel(alpha);
        let mc = estimate_multi_cluster(&p, &ch, &betas, &sim(1_000_000, 1)).unwrap();
        for (i, &beta) in betas.iter().enumerate() {
            let cases = [
                ("CA closest", coverage_closed_access(Strategy::Closest, &p, &ch, beta, &q()).unwrap(), mc.closed_closest.coverage[i]),
                ("CA uniform", coverage_closed_access(Strategy::Uniform, &p, &ch, beta, &q()).unwrap(), mc.closed_uniform.coverage[i]),
                (
                    "OA",
                    coverage_open_access_with(OpenAccessModel::Conditioned, &p, &ch, beta, &q()).unwrap(),
                    mc.open_access.coverage[i],
                ),
            ];
            for (label, exact, e) in cases {
                let tol = 0.01_f64.max(3.0 * e.std_error);
                let err = (exact - e.mean).abs();
                worst_ratio = worst_ratio.max(err / tol);
                if err > tol {
                    failed.push(format!("{label} a={alpha} {} dB: {exact:.4} vs {:.4}", betas_db[i], e.mean));
                }
            }
            let printed = coverage_open_access(&p, &ch, beta, &q()).unwrap();
            let e = mc.open_access.coverage[i];
            printed_worst = printed_worst.max((printed - e.mean).abs());
        }
    }
    println!("  info: unconditioned open-access transform, worst |error| vs MC {printed_worst:.4} (tolerance 0.01)");

    let ch = channel(4.0);
    let mut increases = Vec::new();
    for strategy in STRATEGIES {
        for beta_db in [-5.0, 0.0] {
            let beta = db_to_linear(beta_db);
            let curve: Vec<f64> = (0..14)
                .map(|i| coverage_closed_access(strategy, &network(0.2 + 0.1 * i as f64), &ch, beta, &q()).unwrap())
                .collect();
            for w in curve.windows(2) {
                if w[1] > w[0] + 1e-7 {
                    increases.push(format!("{} {beta_db} dB: {:.6} -> {:.6}", name(strategy), w[0], w[1]));
                }
            }
        }
    }
    outcome(
        failed.is_empty() && increases.is_empty(),
        format!(
            "18 points, worst |error|/tolerance {worst_ratio:.3}; {}; spread sweep {}",
            list(&failed),
            if increases.is_empty() { "nonincreasing".to_string() } else { increases.join("; ") }
        ),
    )
}

// ---------------------------------------------------------------------------
// 10. Spectral efficiency
// ---------------------------------------------------------------------------

fn rate() -> Outcome {
    let tight = QuadratureSettings {
        abs_tol: 1e-6,
        rel_tol: 1e-6,
        ..q()
    };
    let deltas: Vec<f64> = (0..13).map(|i| 0.25 * i as f64).collect();
    let mut closest = [Vec::new(), Vec::new()];
    let mut dominance = Vec::new();
    let mut mc_failed = Vec::new();
    let mut worst_z: f64 = 0.0;
    for (k, alpha) in [3.0, 4.0].into_iter().enumerate() {
        let ch = channel(alpha);
        for &delta in &deltas {
            let g = cluster(delta);
            let tc = spectral_efficiency(Strategy::Closest, &g, &ch, &tight).unwrap();
            let tu = spectral_efficiency(Strategy::Uniform, &g, &ch, &tight).unwrap();
            closest[k].push(tc);
            if tc <= tu {
                dominance.push(format!("a={alpha} d={delta}"));
            }
            let mc = estimate_single_cluster(&g, &ch, &[], &sim(1_000_000, 1)).unwrap();
            for (label, exact, e) in [("closest", tc, mc.closest.spectral_efficiency), ("uniform", tu, mc.uniform.spectral_efficiency)] {
                let z = (exact - e.mean).abs() / e.std_error;
                worst_z = worst_z.max(z);
                if z > 3.0 {
                    mc_failed.push(format!("{label} a={alpha} d={delta}: {exact:.5} vs {:.5}±{:.5}", e.mean, e.std_error));
                }
            }
        }
    }
    let diff: Vec<f64> = closest[0].iter().zip(&closest[1]).map(|(a, b)| a - b).collect();
    let crossing = (1..deltas.len()).find(|&i| deltas[i - 1] >= 1.0 && diff[i - 1].signum() != diff[i].signum());
    let crossing_text = match crossing {
        Some(i) => format!("alpha curves cross between d={} and d={}", deltas[i - 1], deltas[i]),
        None => "no crossing above d=1".into(),
    };
    outcome(
        dominance.is_empty() && crossing.is_some() && mc_failed.is_empty(),
        format!(
            "closest > uniform {}; {crossing_text}; MC worst |error|/SE {worst_z:.2} at 52 points; {}",
            if dominance.is_empty() { "everywhere".to_string() } else { format!("violated at {}", dominance.join(", ")) },
            list(&mc_failed)
        ),
    )
}

// ---------------------------------------------------------------------------
// 11. Determinism across thread counts
// ---------------------------------------------------------------------------

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for (scenario, trials) in [("compare_single_closest_a4_d43", "200000"), ("compare_open_access", "20000")] {
        let mut outputs = Vec::new();
        for threads in ["1", "3"] {
            let out = dir.path().join(format!("{scenario}_{threads}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_sgcov"))
                .args(["compare", "--config", scenario, "--trials", trials, "--threads", threads, "--out"])
                .arg(&out)
                .output()
                .unwrap();
            assert!(matches!(status.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&status.stderr));
            outputs.push(std::fs::read(&out).unwrap());
        }
        let same = outputs[0] == outputs[1];
        pass &= same;
        parts.push(format!("{scenario}: {}", if same { "identical" } else { "different" }));
    }
    outcome(pass, parts.join("; "))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "kernel oracle", kernel_draws),
        (2, "geometry", geometry),
        (3, "single cluster vs MC", single_cluster_vs_mc),
        (4, "coverage gap at 0.8", coverage_gaps),
        (5, "optimal receiver offset", optimal_offset),
        (6, "lower bound dominance", lower_bounds),
        (7, "Poisson network limit", poisson_limit),
        (8, "contact distance", contact_distance),
        (9, "cluster network vs MC", cluster_network),
        (10, "spectral efficiency", rate),
        (11, "determinism", determinism),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, label, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {status} {label} ({:.1} s): {}", start.elapsed().as_secs_f64(), result.detail);
        if !result.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
