//! Suite runners. Each check row mirrors one library invariant.

use std::collections::BTreeMap;
use std::path::PathBuf;

use ggl_core::arith::{self, class_prime_counts, load_or_sieve, ArithTables, CACHE_DIR_ENV};
use ggl_core::bounds::{
    corollary2_rhs, gallagher_check, l1_norm_charsum, lemma1_rhs, lemma2_check, lemma4_check,
    min_norm_sum, BoundCheck, QUADRATURE_TOL,
};
use ggl_core::constants::LAMBDA;
use ggl_core::expsum::{
    char_sum, gelfond_product, theorem1_on_grid, vaughan_cutoff, vaughan_split,
};
use ggl_core::fixtures::{
    COROLLARY1_C, COROLLARY3_C, COROLLARY4_C, VAUGHAN_CALIBRATION_X, VAUGHAN_RESIDUAL_C,
};
use ggl_core::goldbach::{
    circle_identity_check, circle_modulus, ratio_report, rep_counts, rep_counts_fast,
    RATIO_CSV_HEADER,
};
use ggl_core::parity::{epsilon, epsilon_k};
use ggl_core::sampling::{random_alphas, uniform_grid, AlphaSampler};
use ggl_core::spectrum::{
    corollary3_ratio, corollary4_ratio, dft_direct, dft_product, tail_factor, Spectrum,
};

use crate::output::Table;
use crate::CliError;

/// Every check name a `--tolerance` override may target.
pub const CHECK_NAMES: [&str; 25] = [
    "parity_recurrence",
    "parity_splitting",
    "parity_balance",
    "parity_truncation",
    "chebyshev",
    "moebius_sum",
    "sieve_trial",
    "gelfond_identity",
    "corollary1",
    "vaughan_residual",
    "theorem1_decay",
    "parseval",
    "dft_product",
    "corollary3",
    "corollary4",
    "hierarchy",
    "lemma1",
    "lemma2",
    "lemma4",
    "corollary2",
    "gallagher",
    "circle_residual",
    "circle_exact",
    "fast_oracle",
    "convergence",
];

/// Settings shared by every suite.
#[derive(Debug, Clone)]
pub struct Context {
    pub limit: Option<u64>,
    pub alpha_grid: Option<usize>,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Context {
    pub fn limit_or(&self, default: u64) -> u64 {
        self.limit.unwrap_or(default)
    }

    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    fn push(&self, table: &mut Table, check: BoundCheck, default_tol: f64) {
        let tol = self.tol(&check.name, default_tol);
        table.push_check(check, tol);
    }

    fn grid_or(&self, default: usize) -> usize {
        self.alpha_grid.unwrap_or(default)
    }

    /// Uniform grid of `--alpha-grid` points (default 10⁴) plus a tenth as
    /// many seeded samples.
    fn alphas(&self) -> Vec<f64> {
        let points = self.grid_or(10_000);
        let mut alphas = uniform_grid(points);
        alphas.extend(random_alphas(self.seed, points / 10));
        alphas
    }
}

fn exact(name: &str, params: String, failures: u64) -> BoundCheck {
    BoundCheck::new(name, params, failures as f64, 0.0)
}

fn log2_floor(n: u64) -> u32 {
    63 - n.max(1).leading_zeros()
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

fn select<'a>(suite: &'a str, all: &[&'a str]) -> Result<Vec<&'a str>, CliError> {
    if suite == "all" {
        Ok(all.to_vec())
    } else if all.contains(&suite) {
        Ok(vec![suite])
    } else {
        Err(CliError::Usage(format!(
            "unknown suite `{suite}`; expected one of: all, {}",
            all.join(", ")
        )))
    }
}

// ---------------------------------------------------------------------------
// parity

pub fn parity(ctx: &Context) -> Result<Table, CliError> {
    let limit = ctx.limit_or(1 << 16);
    if limit > 1 << 26 {
        return Err(CliError::Usage(format!(
            "--limit {limit} exceeds 2^26 for parity"
        )));
    }
    let mut table = Table::checks();

    let failures = (0..limit)
        .filter(|&n| epsilon(2 * n) != epsilon(n) || epsilon(2 * n + 1) != -epsilon(n))
        .count() as u64;
    ctx.push(
        &mut table,
        exact("parity_recurrence", format!("n<{limit}"), failures),
        0.0,
    );

    let mut failures = 0;
    for m in 0..=8u32 {
        for x in 0..1u64 << m {
            for y in 0..1u64 << 8 {
                failures += (epsilon(x + (y << m)) != epsilon(x) * epsilon(y)) as u64;
            }
        }
    }
    ctx.push(
        &mut table,
        exact("parity_splitting", "m<=8;y<256".into(), failures),
        0.0,
    );

    let k_max = log2_floor(limit);
    let failures = (1..=k_max)
        .filter(|&k| (0..1u64 << k).map(|n| epsilon(n).as_i64()).sum::<i64>() != 0)
        .count() as u64;
    ctx.push(
        &mut table,
        exact("parity_balance", format!("k<={k_max}"), failures),
        0.0,
    );

    let k_max = k_max.min(16);
    let failures = (1..=k_max)
        .map(|k| {
            (0..1u64 << k)
                .filter(|&n| epsilon_k(n, k) != epsilon(n))
                .count() as u64
        })
        .sum();
    ctx.push(
        &mut table,
        exact("parity_truncation", format!("k<={k_max}"), failures),
        0.0,
    );
    Ok(table)
}

// ---------------------------------------------------------------------------
// sieve

pub fn sieve(ctx: &Context, suite: &str) -> Result<Table, CliError> {
    let limit = ctx.limit_or(1_000_000);
    match suite {
        "counts" => {
            let primes = load_or_sieve(limit, cache_dir().as_deref())?;
            let (total, class0) = class_prime_counts(&primes, limit)?;
            let mut table = Table::new(&["limit", "primes", "class0", "class1"]);
            table.push(vec![
                limit.into(),
                total.into(),
                class0.into(),
                (total - class0).into(),
            ]);
            Ok(table)
        }
        "identities" => sieve_identities(ctx, limit),
        other => Err(CliError::Usage(format!(
            "unknown suite `{other}`; expected counts or identities"
        ))),
    }
}

fn sieve_identities(ctx: &Context, limit: u64) -> Result<Table, CliError> {
    let mut table = Table::checks();
    let n_max = limit.min(10_000);
    let tables = ArithTables::new(n_max);
    let mut worst = 0.0f64;
    let mut moebius_failures = 0;
    for n in 1..=n_max {
        let (mut lam, mut mu) = (0.0, 0i64);
        for d in (1..=n).filter(|d| n % d == 0) {
            lam += tables.mangoldt(d);
            mu += tables.moebius(d) as i64;
        }
        let ln = (n as f64).ln();
        worst = worst.max((lam - ln).abs() / ln.max(1.0));
        moebius_failures += (mu != (n == 1) as i64) as u64;
    }
    ctx.push(
        &mut table,
        BoundCheck::new("chebyshev", format!("n<={n_max}"), worst, 1e-12),
        0.0,
    );
    ctx.push(
        &mut table,
        exact("moebius_sum", format!("n<={n_max}"), moebius_failures),
        0.0,
    );

    let n_max = limit.min(100_000);
    let primes = load_or_sieve(n_max, cache_dir().as_deref())?;
    let indicator = primes.indicator(n_max);
    let mismatches = (1..=n_max)
        .filter(|&n| (indicator[n as usize] == 1) != (arith::divisor_count(n) == 2))
        .count() as u64;
    ctx.push(
        &mut table,
        exact("sieve_trial", format!("n<={n_max}"), mismatches),
        0.0,
    );
    Ok(table)
}

// ---------------------------------------------------------------------------
// expsum

pub const EXPSUM_SUITES: [&str; 4] = ["gelfond_identity", "corollary1", "vaughan", "theorem1"];

pub fn expsum(ctx: &Context, suite: &str) -> Result<Table, CliError> {
    let mut table = Table::checks();
    for s in select(suite, &EXPSUM_SUITES)? {
        match s {
            "gelfond_identity" => gelfond_identity(ctx, &mut table),
            "corollary1" => corollary1(ctx, &mut table)?,
            "vaughan" => vaughan(ctx, &mut table)?,
            _ => theorem1(ctx, &mut table)?,
        }
    }
    Ok(table)
}

fn gelfond_identity(ctx: &Context, table: &mut Table) {
    let alphas = random_alphas(ctx.seed, ctx.grid_or(256));
    for q in 1..=8u32 {
        let worst = alphas
            .iter()
            .map(|&a| (gelfond_product(a, q) - 1.0 - char_sum(a, (1 << (2 * q)) - 1)).norm())
            .fold(0.0, f64::max);
        let tol = 1e-9 * (1u64 << (2 * q)) as f64;
        let check = BoundCheck::new("gelfond_identity", format!("Q={q}"), worst, tol)
            .with_grid(alphas.len());
        ctx.push(table, check, 0.0);
    }
}

fn corollary1(ctx: &Context, table: &mut Table) -> Result<(), CliError> {
    let limit = ctx.limit_or(1 << 12);
    if limit > 1 << 20 {
        return Err(CliError::Usage(format!(
            "--limit {limit} exceeds 2^20 for corollary1"
        )));
    }
    let alphas = ctx.alphas();
    for j in 1..=log2_floor(limit) {
        let x = 1u64 << j;
        let worst = alphas
            .iter()
            .map(|&a| char_sum(a, x).norm())
            .fold(0.0, f64::max);
        let rhs = COROLLARY1_C * (x as f64).powf(LAMBDA) * (x as f64).ln();
        let check =
            BoundCheck::new("corollary1", format!("X={x}"), worst, rhs).with_grid(alphas.len());
        ctx.push(table, check, 0.0);
    }
    Ok(())
}

fn vaughan(ctx: &Context, table: &mut Table) -> Result<(), CliError> {
    let limit = ctx.limit_or(16_384);
    let tables = ArithTables::new(limit);
    for x in VAUGHAN_CALIBRATION_X.into_iter().filter(|&x| x <= limit) {
        let mut worst = 0.0f64;
        for i in 0..64 {
            worst = worst.max(vaughan_split(i as f64 / 64.0, x, &tables)?.residual.norm());
        }
        let rhs = VAUGHAN_RESIDUAL_C * vaughan_cutoff(x) * (x as f64).ln();
        ctx.push(
            table,
            BoundCheck::new("vaughan_residual", format!("X={x}"), worst, rhs).with_grid(64),
            0.0,
        );
    }
    Ok(())
}

/// Strict decrease of `max_α |Σ ε(n)Λ(n)e(αn)|/X` over the last four `X = 2^j`.
fn theorem1(ctx: &Context, table: &mut Table) -> Result<(), CliError> {
    let limit = ctx.limit_or(1 << 18);
    let j_max = log2_floor(limit);
    if !(13..=22).contains(&j_max) {
        return Err(CliError::Usage(format!(
            "theorem1 needs 2^13 <= --limit < 2^23, got {limit}"
        )));
    }
    let grid = ctx.grid_or(2048);
    let tables = ArithTables::new(1 << j_max);
    let maxima: Vec<(u64, f64)> = (j_max - 3..=j_max)
        .map(|j| {
            let x = 1u64 << j;
            let sums = theorem1_on_grid(grid, x, &tables)?;
            let worst = sums.iter().map(|z| z.norm()).fold(0.0, f64::max);
            Ok((x, worst / x as f64))
        })
        .collect::<Result<_, ggl_core::Error>>()?;
    for w in maxima.windows(2) {
        let ((x0, m0), (x1, m1)) = (w[0], w[1]);
        // strict: rhs sits one ulp below the previous maximum
        let check = BoundCheck::new(
            "theorem1_decay",
            format!("X={x1};prev_X={x0}"),
            m1,
            m0 - f64::EPSILON * m0,
        )
        .with_grid(grid);
        ctx.push(table, check, 0.0);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// spectrum

pub const SPECTRUM_CHECKS: [&str; 5] = [
    "parseval",
    "product",
    "corollary3",
    "corollary4",
    "hierarchy",
];

pub fn spectrum(ctx: &Context, k_max: u32, check: &str) -> Result<Table, CliError> {
    let mut table = Table::checks();
    for c in select(check, &SPECTRUM_CHECKS)? {
        match c {
            "parseval" => {
                for k in 1..=k_max {
                    let mass = Spectrum::from_product(k)?.parseval_mass();
                    let check =
                        BoundCheck::new("parseval", format!("k={k}"), (mass - 1.0).abs(), 1e-10)
                            .with_grid(1 << k);
                    ctx.push(&mut table, check, 0.0);
                }
            }
            "product" => {
                for k in 1..=k_max {
                    let direct = dft_direct(k)?;
                    let worst = (0..1u64 << k)
                        .map(|r| (dft_product(k, r) - direct.get(r as usize)).norm())
                        .fold(0.0, f64::max);
                    let check = BoundCheck::new("dft_product", format!("k={k}"), worst, 1e-9)
                        .with_grid(1 << k);
                    ctx.push(&mut table, check, 0.0);
                }
            }
            "corollary3" => {
                for k in 1..=k_max {
                    let check = BoundCheck::new(
                        "corollary3",
                        format!("k={k}"),
                        corollary3_ratio(k)?,
                        COROLLARY3_C,
                    );
                    ctx.push(&mut table, check, 0.0);
                }
            }
            "corollary4" => {
                for k in 1..=k_max {
                    let check = BoundCheck::new(
                        "corollary4",
                        format!("k={k}"),
                        corollary4_ratio(k)?,
                        COROLLARY4_C,
                    );
                    ctx.push(&mut table, check, 1e-12);
                }
            }
            _ => {
                let spectrum = Spectrum::from_product(k_max)?;
                let mut worst = 0.0f64;
                for t in 0..=k_max {
                    for r in 0..1u64 << k_max {
                        let head = dft_product(t, r % (1 << t)).norm();
                        let lhs = spectrum.get(r as usize).norm();
                        worst = worst.max((lhs - head * tail_factor(k_max, t, r).norm()).abs());
                    }
                }
                let check = BoundCheck::new("hierarchy", format!("k={k_max}"), worst, 1e-9)
                    .with_grid(1 << k_max);
                ctx.push(&mut table, check, 0.0);
            }
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// bounds

pub const BOUNDS_SUITES: [&str; 5] = ["lemma1", "lemma2", "lemma4", "corollary2", "gallagher"];

pub struct BoundsScale {
    pub q_max: Option<u32>,
    pub k_max: Option<u32>,
}

pub fn bounds(ctx: &Context, suite: &str, scale: &BoundsScale) -> Result<Table, CliError> {
    let mut table = Table::checks();
    for s in select(suite, &BOUNDS_SUITES)? {
        match s {
            "lemma1" => {
                let mut rng = AlphaSampler::new(ctx.seed);
                for _ in 0..64 {
                    let q = 2 + rng.next_below(200);
                    let a = 1 + rng.next_below(q - 1);
                    let beta = rng.next_alpha();
                    let cap = 1.0 + (rng.next_alpha() * 1_000.0).floor();
                    let count = 1 + rng.next_below(2_000);
                    let lhs = min_norm_sum(a as f64 / q as f64, beta, cap, count);
                    let check = BoundCheck::new(
                        "lemma1",
                        format!("a={a};q={q};beta={beta};U={cap};P={count}"),
                        lhs,
                        lemma1_rhs(q, cap, count),
                    );
                    ctx.push(&mut table, check, 0.0);
                }
            }
            "lemma2" => {
                let alphas = ctx.alphas();
                for q in 1..=scale.q_max.unwrap_or(12) {
                    ctx.push(&mut table, lemma2_check(q, &alphas), 0.0);
                }
            }
            "lemma4" => {
                for q in 1..=scale.q_max.unwrap_or(10) {
                    ctx.push(&mut table, lemma4_check(q)?, QUADRATURE_TOL);
                }
            }
            "corollary2" => {
                let limit = ctx.limit_or(1 << 12);
                for j in 1..=log2_floor(limit) {
                    let x = 1u64 << j;
                    let l1 = l1_norm_charsum(x)?;
                    let check = BoundCheck::new(
                        "corollary2",
                        format!("X={x}"),
                        l1.value,
                        corollary2_rhs(x),
                    )
                    .with_grid(l1.grid_points);
                    ctx.push(&mut table, check, QUADRATURE_TOL);
                }
            }
            _ => {
                for k in 1..=scale.k_max.unwrap_or(10) {
                    let g = gallagher_check(k)?;
                    let check = BoundCheck::new("gallagher", format!("k={k}"), g.lhs, g.rhs)
                        .with_grid(g.grid_points);
                    ctx.push(&mut table, check, QUADRATURE_TOL);
                }
            }
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// goldbach

pub const GOLDBACH_SUITES: [&str; 4] = ["ratio", "circle", "oracle", "convergence"];

pub fn goldbach(ctx: &Context, suite: &str, checkpoints: &[u64]) -> Result<Table, CliError> {
    let limit = ctx.limit_or(100_003);
    if let Some(&bad) = checkpoints.iter().find(|&&n| n > limit || n % 2 == 0) {
        return Err(CliError::Usage(format!(
            "checkpoint {bad} must be odd and at most --limit {limit}"
        )));
    }
    match suite {
        "ratio" => {
            let primes = load_or_sieve(limit, cache_dir().as_deref())?;
            let mut table = Table::new(&RATIO_CSV_HEADER);
            for row in ratio_report(checkpoints, &primes)? {
                table.push(vec![
                    row.n.into(),
                    row.j.into(),
                    row.j0.into(),
                    row.ratio.into(),
                    row.lower_bound_proxy.into(),
                ]);
            }
            Ok(table)
        }
        "circle" => circle(ctx, limit.min(1_501)),
        "oracle" => {
            let n_max = limit.min(2_001);
            let primes = load_or_sieve(n_max, cache_dir().as_deref())?;
            let fast = rep_counts_fast(n_max, &primes)?;
            let mut mismatches = 0;
            for c in &fast {
                mismatches += (*c != rep_counts(c.n, &primes)?) as u64;
            }
            let mut table = Table::checks();
            ctx.push(
                &mut table,
                exact("fast_oracle", format!("odd N<={n_max}"), mismatches),
                0.0,
            );
            Ok(table)
        }
        "convergence" => {
            let primes = load_or_sieve(limit, cache_dir().as_deref())?;
            let rows = ratio_report(checkpoints, &primes)?;
            let mut table = Table::checks();
            for w in rows.windows(2) {
                let check = BoundCheck::new(
                    "convergence",
                    format!("N={};prev_N={}", w[1].n, w[0].n),
                    w[1].deviation(),
                    w[0].deviation(),
                );
                ctx.push(&mut table, check, 0.0);
            }
            Ok(table)
        }
        other => Err(CliError::Usage(format!(
            "unknown suite `{other}`; expected one of: {}",
            GOLDBACH_SUITES.join(", ")
        ))),
    }
}

fn circle(ctx: &Context, n_max: u64) -> Result<Table, CliError> {
    if n_max < 7 {
        return Err(CliError::Usage("circle suite needs --limit >= 7".into()));
    }
    let primes = load_or_sieve(n_max, cache_dir().as_deref())?;
    let mut rng = AlphaSampler::new(ctx.seed);
    let odd_count = (n_max - 7) / 2 + 1;
    let mut ns: Vec<u64> = (0..50).map(|_| 7 + 2 * rng.next_below(odd_count)).collect();
    ns.sort_unstable();
    let mut table = Table::checks();
    for n in ns {
        let l = circle_modulus(n);
        let c = circle_identity_check(n, l, &primes)?;
        let params = format!("N={n};L={l}");
        let residual = BoundCheck::new("circle_residual", params.clone(), c.max_residual, 1e-6)
            .with_grid(l as usize);
        ctx.push(&mut table, residual, 0.0);
        let gap = (c.j_integral - c.j_direct).unsigned_abs()
            + (c.j0_integral - c.j0_direct).unsigned_abs();
        ctx.push(
            &mut table,
            exact("circle_exact", params, gap).with_grid(l as usize),
            0.0,
        );
    }
    Ok(table)
}

/// A reduced pass over every suite.
pub fn report(ctx: &Context) -> Result<Table, CliError> {
    let mut table = parity(&Context {
        limit: None,
        ..ctx.clone()
    })?;
    let scoped = |limit: Option<u64>| Context {
        limit,
        ..ctx.clone()
    };
    table.extend(sieve_identities(ctx, 100_000)?);
    table.extend(expsum(&scoped(None), "all")?);
    table.extend(spectrum(ctx, 12, "all")?);
    let scale = BoundsScale {
        q_max: None,
        k_max: None,
    };
    table.extend(bounds(&scoped(None), "all", &scale)?);
    let default_checkpoints = [1_001, 10_001, 100_001];
    table.extend(goldbach(&scoped(None), "circle", &default_checkpoints)?);
    table.extend(goldbach(&scoped(None), "oracle", &default_checkpoints)?);
    table.extend(goldbach(
        &scoped(None),
        "convergence",
        &default_checkpoints,
    )?);
    Ok(table)
}
