//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use peakcap::bounds::{
    evaluate, epi_lower_bound, per_antenna_bound, subspace_upper_bound, waterfill,
    waterfilling_upper_bound, GaussianPower, McKellips, NoiseCovariance, SubspaceBounder,
};
use peakcap::channel::{
    random_channel, reference_model, unit_spectral_norm, ChannelModel, ConstraintRegion, Shape,
    SubRegion, REFERENCE_WHITENER_GAINS,
};
use peakcap::linalg::{self, ComplexMatrix, Partition, RealMatrix};
use peakcap::oracle::{
    default_constellation, mc_mutual_information, waterfill_bisection_oracle, Constellation,
};
use peakcap::sweep::{snr_range, sweep};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(r: &mut ChaCha8Rng) -> f64 {
    r.sample(StandardNormal)
}

/// Random composition of `n` into positive parts.
fn random_partition(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let k = r.random_range(1..=left);
        parts.push(k);
        left -= k;
    }
    parts
}

// 1
fn reference_sweep() -> Outcome {
    let model = reference_model(0.0).map_err(err)?;
    let gains = NoiseCovariance::from_model(&model)
        .and_then(|nc| nc.whitener_gains())
        .map_err(err)?;
    for (got, want) in gains.iter().zip(REFERENCE_WHITENER_GAINS) {
        check((got - want).abs() < 1e-6, || {
            format!("whitener gain {got} does not match {want}")
        })?;
    }
    let grid = snr_range(-10.0, 1.0, 40.0).map_err(err)?;
    let rows = sweep(&model, &grid).map_err(err)?;
    check(rows.len() == 51, || format!("{} rows", rows.len()))?;
    for r in &rows {
        check(r.epi.value_bits <= r.compound.value_bits, || {
            format!(
                "at {} dB: epi {} > compound {}",
                r.snr_db, r.epi.value_bits, r.compound.value_bits
            )
        })?;
    }
    let gap = |snr: f64| {
        rows.iter()
            .find(|r| r.snr_db == snr)
            .map(|r| r.gap_bits())
            .unwrap()
    };
    check(gap(40.0) < gap(10.0), || {
        format!("gap at 40 dB {} not below gap at 10 dB {}", gap(40.0), gap(10.0))
    })?;
    Ok(format!(
        "gains ({:.6}, {:.6}); gap {:.4} bits @10 dB -> {:.4} bits @40 dB",
        gains[0],
        gains[1],
        gap(10.0),
        gap(40.0)
    ))
}

// 2
fn high_snr_gap() -> Outcome {
    let model = reference_model(0.0).map_err(err)?;
    let mut gaps = Vec::new();
    for snr in snr_range(20.0, 1.0, 60.0).map_err(err)? {
        let m = model.with_snr_db(snr).map_err(err)?;
        let ub = per_antenna_bound(&m).map_err(err)?.value_bits;
        let lb = epi_lower_bound(&m).map_err(err)?.value_bits;
        gaps.push((snr, ub - lb));
    }
    for w in gaps.windows(2) {
        check(w[1].1 <= w[0].1 + 1e-6, || {
            format!("gap rises from {} to {} at {} dB", w[0].1, w[1].1, w[1].0)
        })?;
    }
    let last = gaps.last().unwrap().1;
    check(last < 0.25, || format!("gap at 60 dB is {last}"))?;
    Ok(format!(
        "gap {:.4} bits @20 dB -> {:.5} bits @60 dB",
        gaps[0].1, last
    ))
}

// 3
fn low_snr_vanishing() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let hc = unit_spectral_norm(&random_channel(2, seed).map_err(err)?).map_err(err)?;
        let base = ChannelModel::per_antenna(&hc, 1.0, 1.0).map_err(err)?;
        let mut prev = f64::INFINITY;
        for snr in (-30..=-10).rev() {
            let v = waterfilling_upper_bound(&base.with_snr_db(snr as f64).map_err(err)?)
                .map_err(err)?
                .value_bits;
            check(v <= prev, || {
                format!("seed {seed}: bound rises to {v} at {snr} dB")
            })?;
            prev = v;
        }
        check(prev < 0.01, || format!("seed {seed}: {prev} bits at -30 dB"))?;
        worst = worst.max(prev);
    }
    Ok(format!("largest value at -30 dB: {worst:.5} bits"))
}

// 4
fn fischer_nonnegative() -> Outcome {
    let mut r = rng(4);
    let mut min_corr = f64::INFINITY;
    for _ in 0..1000 {
        let n = r.random_range(2..=8);
        let a = DMatrix::from_fn(n, n, |_, _| normal(&mut r));
        let d = &a * a.transpose() + DMatrix::identity(n, n) * 1e-2;
        let partition = Partition::new(random_partition(&mut r, n)).map_err(err)?;
        let nc = NoiseCovariance::from_covariance(RealMatrix::new(d).map_err(err)?, partition, 1.0)
            .map_err(err)?;
        let c = nc.log_det_correction().map_err(err)?;
        check(c >= -1e-12, || format!("correction {c}"))?;
        min_corr = min_corr.min(c);
    }
    Ok(format!("smallest correction {min_corr:.3e} nats"))
}

// 5
fn diagonal_equality() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let per_antenna = i % 2 == 0;
        let (region, bounder): (ConstraintRegion, &dyn SubspaceBounder) = if per_antenna {
            let k = r.random_range(1..=4);
            (ConstraintRegion::per_antenna(k, 1.0).map_err(err)?, &McKellips)
        } else {
            let n = r.random_range(1..=8);
            let subs = random_partition(&mut r, n)
                .into_iter()
                .map(|d| {
                    let shape = if r.random_bool(0.5) { Shape::Ball } else { Shape::Box };
                    SubRegion::new(d, shape, 1.0)
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            (ConstraintRegion::new(subs).map_err(err)?, &GaussianPower)
        };
        let n = region.dimension();
        let diag: Vec<f64> = if per_antenna {
            (0..n / 2)
                .flat_map(|_| {
                    let g = r.random_range(0.2..3.0);
                    [g, g]
                })
                .collect()
        } else {
            (0..n)
                .map(|_| r.random_range(0.2..3.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect()
        };
        let h = RealMatrix::from_diagonal(&diag).map_err(err)?;
        let sigma_z2 = 10f64.powf(r.random_range(-3.0..1.0));
        let model = ChannelModel::new(h, sigma_z2, region).map_err(err)?;
        let b = subspace_upper_bound(&model, bounder).map_err(err)?;
        let detail = b.detail.clone().unwrap();
        check(detail.correction_bits.abs() < 1e-12, || {
            format!("instance {i}: correction {}", detail.correction_bits)
        })?;
        let sum: f64 = detail.subspace_bits.iter().sum();
        let diff = (b.value_bits - sum).abs();
        check(diff < 1e-12, || format!("instance {i}: bound differs from sum by {diff}"))?;
        worst = worst.max(detail.correction_bits.abs()).max(diff);
    }
    Ok(format!("largest deviation {worst:.3e} bits"))
}

// 6
fn waterfilling_correctness() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let n = r.random_range(1..=16);
        let noise: Vec<f64> = (0..n).map(|_| 10f64.powf(r.random_range(-2.0..2.0))).collect();
        let budget = 10f64.powf(r.random_range(-3.0..2.0));
        let exact = waterfill(&noise, budget).map_err(err)?;
        let oracle = waterfill_bisection_oracle(&noise, budget).map_err(err)?;
        for (a, b) in exact.powers.iter().zip(&oracle.powers) {
            check((a - b).abs() < 1e-8, || format!("instance {i}: {a} vs {b}"))?;
            worst = worst.max((a - b).abs());
        }
        check(exact.satisfies_kkt(&noise, 1e-10), || {
            format!("instance {i}: KKT conditions violated")
        })?;
    }
    Ok(format!("largest power difference {worst:.3e}"))
}

// 7
fn realification_algebra() -> Outcome {
    let mut r = rng(7);
    let mut worst_pair: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    for i in 0..200 {
        let n = r.random_range(1..=4);
        let hc = ComplexMatrix::new(DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(normal(&mut r), normal(&mut r))
        }))
        .map_err(err)?;
        let h = linalg::realify(&hc).map_err(err)?;
        let s = linalg::svd(&h).map_err(err)?.singular_values;
        for pair in s.chunks_exact(2) {
            let rel = (pair[0] - pair[1]).abs() / pair[0];
            check(rel < 1e-8, || format!("matrix {i}: pair {pair:?}"))?;
            worst_pair = worst_pair.max(rel);
        }
        let det_real = h.as_dmatrix().clone().determinant();
        let det_complex = hc.as_dmatrix().clone().determinant().norm_sqr();
        let rel = (det_real - det_complex).abs() / det_complex;
        check(rel < 1e-8, || format!("matrix {i}: det {det_real} vs {det_complex}"))?;
        worst_det = worst_det.max(rel);
    }
    Ok(format!(
        "worst pair mismatch {worst_pair:.2e}, worst det mismatch {worst_det:.2e}"
    ))
}

// 8
fn oracle_sandwich() -> Outcome {
    let mut worst_margin = f64::INFINITY;
    for seed in 0..10 {
        let base = ChannelModel::per_antenna(&random_channel(2, 1000 + seed).map_err(err)?, 1.0, 1.0)
            .map_err(err)?;
        for snr in [-5.0, 5.0, 15.0, 25.0] {
            let m = base.with_snr_db(snr).map_err(err)?;
            let c = default_constellation(&m).map_err(err)?;
            let est = mc_mutual_information(&m, &c, 100_000, seed).map_err(err)?;
            let ub = evaluate(&m).map_err(err)?.compound.value_bits;
            let margin = ub - (est.value_bits - 3.0 * est.std_error_bits);
            check(margin >= 0.0, || {
                format!(
                    "seed {seed} at {snr} dB: estimate {} +- {} exceeds bound {ub}",
                    est.value_bits, est.std_error_bits
                )
            })?;
            worst_margin = worst_margin.min(margin);
        }
    }
    Ok(format!("smallest margin {worst_margin:.4} bits"))
}

/// `I(X; X + N(0, s^2))` for `X = +-a` equiprobable, by Simpson's rule.
fn two_point_mi_quadrature(a: f64, sigma: f64) -> f64 {
    let softplus = |t: f64| if t > 0.0 { t + (-t).exp().ln_1p() } else { t.exp().ln_1p() };
    let steps = 40_000;
    let (lo, hi) = (a - 12.0 * sigma, a + 12.0 * sigma);
    let h = (hi - lo) / steps as f64;
    let f = |y: f64| {
        let pdf = (-(y - a).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
        pdf * softplus(-2.0 * a * y / (sigma * sigma))
    };
    let mut acc = f(lo) + f(hi);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + k as f64 * h);
    }
    (LN_2 - acc * h / 3.0) / LN_2
}

// 9
fn estimator_validation() -> Outcome {
    let a = 1.0;
    let region = ConstraintRegion::new(vec![SubRegion::ball(1, a).map_err(err)?]).map_err(err)?;
    let base = ChannelModel::new(RealMatrix::identity(1), 1.0, region).map_err(err)?;
    let c = Constellation::uniform(vec![vec![-a], vec![a]]).map_err(err)?;
    let mut report = Vec::new();
    for snr in [-5.0, 0.0, 5.0] {
        let m = base.with_snr_db(snr).map_err(err)?;
        let exact = two_point_mi_quadrature(a, m.sigma_z());
        let est = mc_mutual_information(&m, &c, 100_000, 9).map_err(err)?;
        let dev = (est.value_bits - exact).abs();
        check(dev <= 3.0 * est.std_error_bits, || {
            format!(
                "{snr} dB: estimate {} +- {} vs quadrature {exact}",
                est.value_bits, est.std_error_bits
            )
        })?;
        report.push(format!("{snr} dB: {:.2} se", dev / est.std_error_bits));
    }
    Ok(report.join(", "))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "reference configuration sweep",
            limit: Some(Duration::from_secs(5)),
            run: reference_sweep,
        },
        Criterion {
            id: 2,
            name: "high-SNR gap decreases",
            limit: Some(Duration::from_secs(5)),
            run: high_snr_gap,
        },
        Criterion {
            id: 3,
            name: "low-SNR water-filling bound vanishes",
            limit: Some(Duration::from_secs(10)),
            run: low_snr_vanishing,
        },
        Criterion {
            id: 4,
            name: "log-det correction non-negative",
            limit: Some(Duration::from_secs(10)),
            run: fischer_nonnegative,
        },
        Criterion {
            id: 5,
            name: "diagonal channel equality",
            limit: None,
            run: diagonal_equality,
        },
        Criterion {
            id: 6,
            name: "water-filling vs bisection",
            limit: None,
            run: waterfilling_correctness,
        },
        Criterion {
            id: 7,
            name: "realification algebra",
            limit: None,
            run: realification_algebra,
        },
        Criterion {
            id: 8,
            name: "achievable rate below compound bound",
            limit: Some(Duration::from_secs(60)),
            run: oracle_sandwich,
        },
        Criterion {
            id: 9,
            name: "Monte Carlo vs quadrature",
            limit: None,
            run: estimator_validation,
        },
    ];

    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:.0?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!(
                "[PASS] criterion {}: {} ({:.2?}) {}",
                c.id, c.name, elapsed, detail
            ),
            Err(why) => {
                failures += 1;
                println!(
                    "[FAIL] criterion {}: {} ({:.2?}) {}",
                    c.id, c.name, elapsed, why
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failures,
        failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
