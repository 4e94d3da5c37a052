//! Acceptance suite. Each test prints one `PASS` or `FAIL` line and then
//! asserts on the same condition.
//!
//! Run with `cargo test -p relaysim-cli --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use relaysim::strategies::{af_equivalent_snr, twoway_af_snrs};
use relaysim::*;
use sha2::{Digest, Sha256};

const ORACLE_SYMBOLS: usize = 1_000_000;
const ORACLE_REL_TOL: f64 = 0.01;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const INVARIANT_BUDGET: Duration = Duration::from_secs(30);
const BEAMFORM_REL_TOL: f64 = 0.15;
const CROSSOVER_BRACKET_M: (f64, f64) = (20.0, 60.0);
const SLOT_ADVANTAGE_FROM_M: f64 = 30.0;
const CDF_DISTANCE_M: f64 = 70.0;

fn report(criterion: u32, name: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {criterion} ({name}): {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn sweep_distances() -> Vec<f64> {
    (1..=10).map(|i| 10.0 * i as f64).collect()
}

// -- signal-level oracles ---------------------------------------------------

fn cn(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn channel(gain: f64, rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(gain.sqrt(), rng.random::<f64>() * std::f64::consts::TAU)
}

/// Sends unit-power symbols through a variable-gain AF relay with unit noise
/// at both hops. The relay normalises by its measured receive power; the SNR
/// is measured from the separated signal and noise components.
fn af_oracle(g1: f64, g2: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (h1, h2) = (channel(g1, &mut rng), channel(g2, &mut rng));
    let mut sig = Vec::with_capacity(ORACLE_SYMBOLS);
    let mut relay_noise = Vec::with_capacity(ORACLE_SYMBOLS);
    let mut dest_noise = Vec::with_capacity(ORACLE_SYMBOLS);
    let mut rx_power = 0.0;
    for _ in 0..ORACLE_SYMBOLS {
        let x = cn(&mut rng);
        let n1 = cn(&mut rng);
        rx_power += (h1 * x + n1).norm_sqr();
        sig.push(h1 * x);
        relay_noise.push(n1);
        dest_noise.push(cn(&mut rng));
    }
    let beta = (ORACLE_SYMBOLS as f64 / rx_power).sqrt();
    let mut p_sig = 0.0;
    let mut p_noise = 0.0;
    for i in 0..ORACLE_SYMBOLS {
        p_sig += (h2 * beta * sig[i]).norm_sqr();
        p_noise += (h2 * beta * relay_noise[i] + dest_noise[i]).norm_sqr();
    }
    p_sig / p_noise
}

/// Both ends transmit at once; the relay scales the superposition to unit
/// power and broadcasts it back. Each end subtracts its own known
/// contribution and measures what is left. Returns (SNR at A, SNR at B).
fn twoway_af_oracle(g_a: f64, g_b: f64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (h_a, h_b) = (channel(g_a, &mut rng), channel(g_b, &mut rng));
    let mut frames = Vec::with_capacity(ORACLE_SYMBOLS);
    let mut rx_power = 0.0;
    for _ in 0..ORACLE_SYMBOLS {
        let (xa, xb, nr) = (cn(&mut rng), cn(&mut rng), cn(&mut rng));
        let yr = h_a * xa + h_b * xb + nr;
        rx_power += yr.norm_sqr();
        frames.push((xa, xb, yr, cn(&mut rng), cn(&mut rng)));
    }
    let beta = (ORACLE_SYMBOLS as f64 / rx_power).sqrt();
    let (mut sig_a, mut noise_a, mut sig_b, mut noise_b) = (0.0, 0.0, 0.0, 0.0);
    for &(xa, xb, yr, na, nb) in &frames {
        let at_a = h_a * beta * yr + na - h_a * beta * h_a * xa;
        let want_a = h_a * beta * h_b * xb;
        sig_a += want_a.norm_sqr();
        noise_a += (at_a - want_a).norm_sqr();
        let at_b = h_b * beta * yr + nb - h_b * beta * h_b * xb;
        let want_b = h_b * beta * h_a * xa;
        sig_b += want_b.norm_sqr();
        noise_b += (at_b - want_b).norm_sqr();
    }
    (sig_a / noise_a, sig_b / noise_b)
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

#[test]
fn criterion_1_af_oracle() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (i, (g1, g2)) in [(3.0, 3.0), (10.0, 2.0), (100.0, 100.0)]
        .into_iter()
        .enumerate()
    {
        let oracle = af_oracle(g1, g2, 100 + i as u64);
        let formula = af_equivalent_snr(g1, g2);
        let err = rel_err(formula, oracle);
        worst = worst.max(err);
        parts.push(format!(
            "({g1},{g2}) formula {formula:.4} oracle {oracle:.4}"
        ));
    }
    let elapsed = start.elapsed();
    report(
        1,
        "AF oracle",
        worst < ORACLE_REL_TOL && elapsed < ORACLE_BUDGET,
        format!(
            "{}; max rel err {worst:.2e}; {elapsed:.2?}",
            parts.join(", ")
        ),
    );
}

#[test]
fn criterion_2_twoway_af_oracle() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (i, (g_a, g_b)) in [(10.0, 10.0), (50.0, 5.0)].into_iter().enumerate() {
        let (oracle_a, oracle_b) = twoway_af_oracle(g_a, g_b, 200 + i as u64);
        let (at_a, at_b) = twoway_af_snrs(g_a, g_b);
        worst = worst
            .max(rel_err(at_a, oracle_a))
            .max(rel_err(at_b, oracle_b));
        parts.push(format!(
            "({g_a},{g_b}) A {at_a:.4}/{oracle_a:.4} B {at_b:.4}/{oracle_b:.4}"
        ));
    }
    let elapsed = start.elapsed();
    report(
        2,
        "two-way AF oracle",
        worst < ORACLE_REL_TOL && elapsed < ORACLE_BUDGET,
        format!(
            "{}; max rel err {worst:.2e}; {elapsed:.2?}",
            parts.join(", ")
        ),
    );
}

// -- default sweep ----------------------------------------------------------

struct Sweep {
    table: SweepTable,
    elapsed: Duration,
}

fn default_sweep() -> &'static Sweep {
    static SWEEP: OnceLock<Sweep> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let spec = SweepSpec::new(
            ScenarioConfig::default(),
            sweep_distances(),
            StrategyKind::ALL,
            DEFAULT_TRIALS,
        )
        .unwrap();
        let table = run_sweep(&spec).unwrap();
        Sweep {
            table,
            elapsed: start.elapsed(),
        }
    })
}

fn mean(kind: StrategyKind, distance: f64) -> f64 {
    default_sweep().table.get(kind, distance).unwrap().mean
}

#[test]
fn criterion_3_relaying_beats_direct() {
    let sweep = default_sweep();
    let mut failures = Vec::new();
    for d in sweep_distances() {
        let direct = mean(StrategyKind::Direct, d);
        for kind in [StrategyKind::AfSingle, StrategyKind::DfSingle] {
            let m = mean(kind, d);
            if m <= direct {
                failures.push(format!("{kind}@{d}m {m:.4}<={direct:.4}"));
            }
        }
    }
    let pass = failures.is_empty() && sweep.elapsed < SWEEP_BUDGET;
    let shown = failures
        .iter()
        .take(4)
        .cloned()
        .collect::<Vec<_>>()
        .join(", ");
    report(
        3,
        "AF/DF single relay above direct",
        pass,
        format!(
            "{} of 20 comparisons not above direct [{shown}]; sweep {:.2?}",
            failures.len(),
            sweep.elapsed
        ),
    );
}

#[test]
fn criterion_4_df_beamform_close_to_single() {
    let mut worst: f64 = 0.0;
    let mut worst_at = 0.0;
    for d in sweep_distances() {
        let dev = rel_err(
            mean(StrategyKind::DfBeamform2, d),
            mean(StrategyKind::DfSingle, d),
        );
        if dev > worst {
            worst = dev;
            worst_at = d;
        }
    }
    report(
        4,
        "two-relay DF within 15% of single DF",
        worst <= BEAMFORM_REL_TOL,
        format!(
            "max relative deviation {:.1}% at {worst_at} m",
            100.0 * worst
        ),
    );
}

/// Linear interpolation of the first sign change of `diff`, if it goes from
/// negative to positive.
fn crossover(points: &[(f64, f64)]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((d0, y0), (d1, y1)) = (w[0], w[1]);
        (y0 < 0.0 && y1 >= 0.0).then(|| d0 + (d1 - d0) * (-y0) / (y1 - y0))
    })
}

#[test]
fn criterion_5_twoway_df_crossover() {
    let diff: Vec<(f64, f64)> = sweep_distances()
        .into_iter()
        .map(|d| {
            (
                d,
                mean(StrategyKind::TwoWayDf, d) - mean(StrategyKind::DirectExchange, d),
            )
        })
        .collect();
    let below_small = diff[0].1 < 0.0;
    let above_large = diff[diff.len() - 1].1 > 0.0;
    let cross = crossover(&diff);
    let in_bracket =
        cross.is_some_and(|x| x >= CROSSOVER_BRACKET_M.0 && x <= CROSSOVER_BRACKET_M.1);
    let shown: Vec<String> = diff.iter().map(|(d, y)| format!("{d}:{y:+.4}")).collect();
    report(
        5,
        "two-way DF / direct exchange crossover",
        below_small && above_large && in_bracket,
        format!(
            "twoway_df - direct_exchange by distance [{}]; crossover {:?}",
            shown.join(" "),
            cross
        ),
    );
}

#[test]
fn criterion_6_twoway_af_slot_advantage() {
    let mut failures = Vec::new();
    for d in sweep_distances()
        .into_iter()
        .filter(|&d| d >= SLOT_ADVANTAGE_FROM_M)
    {
        let two = mean(StrategyKind::TwoWayAf, d);
        let uni = mean(StrategyKind::UniAfExchange, d);
        if two <= uni {
            failures.push(format!("{d}m {two:.4}<={uni:.4}"));
        }
    }
    let shown = failures
        .iter()
        .take(3)
        .cloned()
        .collect::<Vec<_>>()
        .join(", ");
    report(
        6,
        "two-way AF above unidirectional AF exchange",
        failures.is_empty(),
        format!("{} of 8 distances not above [{shown}]", failures.len()),
    );
}

#[test]
fn criterion_7_relaying_is_steeper() {
    let config = ScenarioConfig::default().at_distance(CDF_DISTANCE_M);
    let strategies = [
        StrategyKind::Direct,
        StrategyKind::AfSingle,
        StrategyKind::DfSingle,
    ];
    let samples = run_point(&config, &strategies, DEFAULT_TRIALS).unwrap();
    let spread: BTreeMap<StrategyKind, f64> = samples
        .iter()
        .map(|(&k, v)| {
            (
                k,
                SummaryStats::from_samples(v).unwrap().normalized_spread(),
            )
        })
        .collect();
    let direct = spread[&StrategyKind::Direct];
    let pass = spread[&StrategyKind::AfSingle] < direct && spread[&StrategyKind::DfSingle] < direct;
    report(
        7,
        "relay CDFs steeper than direct",
        pass,
        format!(
            "(p90-p10)/p50 direct {direct:.3}, af_single {:.3}, df_single {:.3}",
            spread[&StrategyKind::AfSingle],
            spread[&StrategyKind::DfSingle]
        ),
    );
}

#[test]
fn criterion_8_determinism_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let hash_for = |workers: &str| {
        let path = dir.path().join(format!("sweep_{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_relaysim"))
            .args(["--seed", "20240611", "--workers", workers, "--out"])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        let bytes = std::fs::read(&path).unwrap();
        let hex: String = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        (hex, bytes.len())
    };
    let (one, len) = hash_for("1");
    let (four, _) = hash_for("4");
    report(
        8,
        "byte-identical CSVs across worker counts",
        one == four,
        format!("sha256 {one} (1 worker) vs {four} (4 workers), {len} bytes"),
    );
}

// -- condensed invariants ---------------------------------------------------

fn ks_exponential(mut x: Vec<f64>) -> f64 {
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = 1.0 - (-v).exp();
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn invariant_checks() -> Vec<(&'static str, bool)> {
    let mut checks = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let power: Vec<f64> = (0..1_000_000)
        .map(|_| propagation::draw_fading(&mut rng).norm_sqr())
        .collect();
    let mean_power = power.iter().sum::<f64>() / power.len() as f64;
    checks.push(("fading mean |h|^2", (mean_power - 1.0).abs() < 0.005));
    checks.push(("fading KS vs exponential", ks_exponential(power) < 0.005));

    let round_trip = (0..=2500).all(|i| {
        let dbm = -200.0 + 0.1 * i as f64;
        let back = propagation::mw_to_dbm(propagation::dbm_to_mw(dbm));
        (back - dbm).abs() <= 1e-9 * dbm.abs().max(1.0)
    });
    checks.push(("dB round trip", round_trip));

    let config = ScenarioConfig::default();
    let sinr_monotone = (0..200).all(|i| {
        let near = config.at_distance(5.0 + i as f64);
        let far = config.at_distance(5.5 + i as f64);
        let s_near =
            LinkSet::compute(&sample_trial(&near, i), &near).sinr(Node::Source, Node::Destination);
        let s_far =
            LinkSet::compute(&sample_trial(&far, i), &far).sinr(Node::Source, Node::Destination);
        s_far < s_near
    });
    checks.push(("SINR decreasing in distance", sinr_monotone));

    let grid = [0.0, 0.1, 1.0, 3.0, 10.0, 100.0, 1e3];
    let mut rates_monotone = true;
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let base = strategies::rate_af_single(a, b, c).unwrap();
                let df = strategies::rate_df_single(a, b, c).unwrap();
                let tw = strategies::rate_twoway_af(b, c)
                    .unwrap()
                    .spectral_efficiency;
                for bump in [0.5, 10.0] {
                    rates_monotone &= strategies::rate_af_single(a, b + bump, c).unwrap() >= base
                        && strategies::rate_af_single(a + bump, b, c).unwrap() >= base
                        && strategies::rate_df_single(a, b, c + bump).unwrap() >= df
                        && strategies::rate_twoway_af(b + bump, c)
                            .unwrap()
                            .spectral_efficiency
                            >= tw - 1e-12;
                }
            }
        }
    }
    checks.push(("rate monotonicity", rates_monotone));

    let samples = run_point(&config, &[StrategyKind::TwoWayDf], 2000).unwrap();
    let cdf = empirical_cdf(&samples[&StrategyKind::TwoWayDf]).unwrap();
    let points: Vec<(f64, f64)> = cdf.points().collect();
    let cdf_valid = points
        .windows(2)
        .all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1)
        && points.last().map(|p| p.1) == Some(1.0)
        && points.iter().all(|p| p.1 > 0.0 && p.1 <= 1.0);
    checks.push(("CDF validity", cdf_valid));

    let wide = config.at_distance(100.0);
    let xs: Vec<f64> = (0..10_000)
        .map(|i| sample_trial(&wide, i).relay_positions[0].x)
        .collect();
    let relay_mean = xs.iter().sum::<f64>() / xs.len() as f64;
    checks.push(("relay position mean", (relay_mean - 50.0).abs() < 1.5));

    checks
}

#[test]
fn criterion_9_invariant_suite() {
    let start = Instant::now();
    let checks = invariant_checks();
    let elapsed = start.elapsed();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    report(
        9,
        "invariant suite",
        failed.is_empty() && elapsed < INVARIANT_BUDGET,
        format!("{} checks, failed {failed:?}; {elapsed:.2?}", checks.len()),
    );
}
