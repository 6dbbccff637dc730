//! Re-measures every frozen constant and asserts it at larger scale.

use ggl_core::arith::{class_prime_counts, sieve, ArithTables};
use ggl_core::bounds::corollary1_ratio;
use ggl_core::expsum::{prime_sum, vaughan_cutoff, vaughan_split, PrimeWeight};
use ggl_core::fixtures::*;
use ggl_core::goldbach::{ratio_report, rep_counts_fast};
use ggl_core::sampling::uniform_grid;
use ggl_core::spectrum::{corollary3_ratio, corollary4_ratio};

#[test]
fn corollary1_constant_calibration_and_extension() {
    let grid = uniform_grid(10_000);
    let calibrated = COROLLARY1_CALIBRATION_J
        .map(|j| corollary1_ratio(1 << j, &grid))
        .fold(0.0, f64::max);
    assert!(calibrated <= COROLLARY1_C);
    assert!(COROLLARY1_C - calibrated < 1e-3);
    for j in 9..=14 {
        let r = corollary1_ratio(1 << j, &grid);
        assert!(r <= COROLLARY1_C, "j = {j}: {r}");
    }
}

#[test]
fn spectrum_constants_calibration() {
    let c3 = (1..=SPECTRUM_CALIBRATION_K)
        .map(|k| corollary3_ratio(k).unwrap())
        .fold(0.0, f64::max);
    assert!(c3 <= COROLLARY3_C && COROLLARY3_C - c3 < 1e-4);
    let c4 = (1..=SPECTRUM_CALIBRATION_K)
        .map(|k| corollary4_ratio(k).unwrap())
        .fold(0.0, f64::max);
    assert!((c4 - COROLLARY4_C).abs() < 1e-12);
    for k in 13..=16 {
        assert!(corollary3_ratio(k).unwrap() <= COROLLARY3_C, "k = {k}");
    }
}

#[test]
fn vaughan_constant_calibration() {
    let tables = ArithTables::new(1 << 15);
    let mut worst = 0.0f64;
    for x in VAUGHAN_CALIBRATION_X {
        let scale = vaughan_cutoff(x) * (x as f64).ln();
        for i in 0..64 {
            let split = vaughan_split(i as f64 / 64.0, x, &tables).unwrap();
            worst = worst.max(split.residual.norm() / scale);
            if x < 1024 {
                assert!(split.residual.norm() < 1e-9 * x as f64, "X = {x}");
            }
        }
    }
    assert!(worst <= VAUGHAN_RESIDUAL_C && VAUGHAN_RESIDUAL_C - worst < 1e-3);
    for x in [20_000u64, 32_768] {
        let scale = vaughan_cutoff(x) * (x as f64).ln();
        for i in 0..16 {
            let split = vaughan_split(i as f64 / 16.0 + 0.01, x, &tables).unwrap();
            assert!(
                split.residual.norm() <= VAUGHAN_RESIDUAL_C * scale,
                "X = {x}"
            );
        }
    }
}

#[test]
fn goldbach_checkpoints_regression() {
    let table = sieve(GOLDBACH_SIEVE_LIMIT);
    let checkpoints: Vec<u64> = GOLDBACH_CHECKPOINTS.iter().map(|c| c.0).collect();
    let rows = ratio_report(&checkpoints, &table).unwrap();
    for ((row, &(n, j, j0)), dev) in rows
        .iter()
        .zip(&GOLDBACH_CHECKPOINTS)
        .zip(GOLDBACH_DEVIATIONS)
    {
        assert_eq!((row.n, row.j, row.j0), (n, j, j0));
        assert!((row.deviation() - dev).abs() < 1e-12);
    }
}

#[test]
fn parity_prime_bias() {
    let table = sieve(100_000);
    let s0 = prime_sum(0.0, 100_000, &table, PrimeWeight::Parity).unwrap();
    let bias = s0.norm() / table.len() as f64;
    assert!(bias < PARITY_PRIME_BIAS_MAX, "{bias}");
    assert!(bias > PARITY_PRIME_BIAS_MAX - 0.01);
}

#[test]
fn class_counts_to_one_million() {
    let table = sieve(1_000_000);
    let (total, plus) = class_prime_counts(&table, 1_000_000).unwrap();
    assert_eq!(total, 78_498);
    assert_eq!(plus, CLASS0_PRIMES_TO_1E6);
    let density = plus as f64 / 78_498.0;
    assert!((density - 0.5).abs() < CLASS0_DENSITY_BAND);
}

#[test]
fn sweep_has_positive_counts() {
    let table = sieve(100_001);
    for c in rep_counts_fast(100_001, &table).unwrap() {
        if c.n >= 7 {
            assert!(c.t0 > 0, "N = {}", c.n);
        }
        assert_eq!(c.assembly() % 8, 0);
    }
}
