//! Finite-scale harnesses for the auxiliary inequalities: min-norm sums,
//! rational approximation, Gallagher's sampling inequality and the L¹ norms of
//! the Gelfond product and the partial character sum.
//!
//! Every check reduces to a [`BoundCheck`]: a left side, a right side and a
//! pass rule `lhs <= rhs·(1 + tol)`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::constants::{gelfond_bound, l1_product_bound, LAMBDA, THETA0};
use crate::error::{Error, Result};
use crate::expsum::{char_sum, gelfond_product, unit};
use crate::parity::epsilon;

/// Relative tolerance for checks whose sides come from quadrature.
pub const QUADRATURE_TOL: f64 = 1e-3;

/// One inequality evaluated at one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: String,
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    pub grid_points: usize,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, params: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            name: name.into(),
            params: params.into(),
            lhs,
            rhs,
            grid_points: 0,
        }
    }

    pub fn with_grid(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    /// `rhs - lhs`; negative means the inequality is violated before tolerance.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.lhs.is_finite() && self.lhs <= self.rhs * (1.0 + tol)
    }
}

// ---------------------------------------------------------------------------
// Lemma 1

/// Distance from `x` to the nearest integer.
pub fn nearest_int_distance(x: f64) -> f64 {
    let f = x.rem_euclid(1.0);
    f.min(1.0 - f)
}

/// `Σ_{x=1}^{P} min(U, ‖αx + β‖⁻¹)`; a zero norm contributes `U`.
pub fn min_norm_sum(alpha: f64, beta: f64, cap: f64, count: u64) -> f64 {
    (1..=count)
        .map(|x| {
            let d = nearest_int_distance(alpha * x as f64 + beta);
            if d == 0.0 {
                cap
            } else {
                cap.min(1.0 / d)
            }
        })
        .sum()
}

/// `6 (P/q + 1)(U + q ln q)`.
pub fn lemma1_rhs(q: u64, cap: f64, count: u64) -> f64 {
    let q = q as f64;
    6.0 * (count as f64 / q + 1.0) * (cap + q * q.ln())
}

/// `α = a/q + θ/q²` with `gcd(a, q) = 1` and `|θ| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub a: i64,
    pub q: u64,
    pub theta: f64,
}

impl RationalApprox {
    pub fn value(&self) -> f64 {
        self.a as f64 / self.q as f64 + self.theta / (self.q as f64 * self.q as f64)
    }
}

/// Last continued-fraction convergent of `alpha` with denominator `<= q_max`.
pub fn rational_approx(alpha: f64, q_max: u64) -> RationalApprox {
    assert!(q_max >= 1);
    let floor = alpha.floor();
    // convergents p/q of the fractional part, shifted back by floor at the end
    let (mut p_prev, mut q_prev) = (1i64, 0u64);
    let (mut p, mut q) = (0i64, 1u64);
    let mut x = alpha - floor;
    while x > 1e-15 {
        let inv = 1.0 / x;
        let digit = inv.floor();
        if !digit.is_finite() || digit > 1e15 {
            break;
        }
        let d = digit as u64;
        let Some(q_next) = d.checked_mul(q).and_then(|v| v.checked_add(q_prev)) else {
            break;
        };
        if q_next > q_max {
            break;
        }
        let p_next = d as i64 * p + p_prev;
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        x = inv - digit;
    }
    let a = p + floor as i64 * q as i64;
    let qf = q as f64;
    let theta = ((alpha - floor) - p as f64 / qf) * qf * qf;
    RationalApprox { a, q, theta }
}

// ---------------------------------------------------------------------------
// Quadrature

/// Value of `∫₀¹` by a refined midpoint rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub grid_points: usize,
    /// `|I_n - I_{n/2}|` for the last two levels.
    pub est_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_points: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-4,
            max_points: 1 << 28,
        }
    }
}

/// Doubles the midpoint grid from `start` until two successive levels agree to
/// `rel_tol`. `mean_at(n)` must return the mean of the integrand over the
/// midpoints `(j + 1/2)/n`.
fn refine<F>(start: usize, config: QuadratureConfig, mean_at: F) -> Result<QuadratureResult>
where
    F: Fn(usize) -> f64,
{
    let mut n = start.max(2);
    let mut prev = mean_at(n);
    loop {
        let next_n = n * 2;
        if next_n > config.max_points {
            return Err(Error::Quadrature {
                value: prev,
                est_error: f64::NAN,
                grid_points: n,
            });
        }
        let cur = mean_at(next_n);
        let est = (cur - prev).abs();
        if est <= config.rel_tol * cur.abs() {
            return Ok(QuadratureResult {
                value: cur,
                grid_points: next_n,
                est_error: est,
            });
        }
        n = next_n;
        prev = cur;
    }
}

/// `|sin(π·idx/2^bits)|` for `idx < 2^bits` by angle addition over two
/// tables of size about `2^{bits/2}`.
struct DyadicSine {
    bits: u32,
    low_bits: u32,
    high: Vec<(f64, f64)>,
    low: Vec<(f64, f64)>,
}

impl DyadicSine {
    fn new(bits: u32) -> Self {
        let low_bits = bits / 2;
        let denom = 2f64.powi(bits as i32);
        let table = |count: u64, step: u64| {
            (0..count)
                .map(|i| {
                    let angle = std::f64::consts::PI * (i * step) as f64 / denom;
                    (angle.sin(), angle.cos())
                })
                .collect::<Vec<_>>()
        };
        DyadicSine {
            bits,
            low_bits,
            high: table(1 << (bits - low_bits), 1 << low_bits),
            low: table(1 << low_bits, 1),
        }
    }

    #[inline]
    fn abs_sin(&self, idx: u64) -> f64 {
        debug_assert!(idx < 1 << self.bits);
        let (sh, ch) = self.high[(idx >> self.low_bits) as usize];
        let (sl, cl) = self.low[(idx & ((1 << self.low_bits) - 1)) as usize];
        (sh * cl + ch * sl).abs()
    }
}

/// Mean of `|S_Q|` over the `2^m` midpoints `(2j+1)/2^{m+1}`.
///
/// The factors with `r >= s` depend only on `j mod 2^{m-s}`, so they are
/// tabulated once and only the `s` low factors are evaluated per point.
fn gelfond_abs_mean(q: u32, m: u32) -> f64 {
    let bits = m + 1;
    let table = DyadicSine::new(bits);
    let mask = (1u64 << bits) - 1;
    let factor = |base: u64, r: u32| 2.0 * table.abs_sin((base << r) & mask);

    let split = m.saturating_sub(20).min(2 * q);
    let high_len = 1u64 << (m - split);
    let high: Vec<f64> = (0..high_len)
        .into_par_iter()
        .map(|j| (split..2 * q).map(|r| factor(2 * j + 1, r)).product())
        .collect();

    const CHUNK: u64 = 1 << 14;
    let points = 1u64 << m;
    let partials: Vec<f64> = (0..points.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(points);
            (lo..hi)
                .map(|j| {
                    let low: f64 = (0..split).map(|r| factor(2 * j + 1, r)).product();
                    low * high[(j & (high_len - 1)) as usize]
                })
                .sum::<f64>()
        })
        .collect();
    partials.iter().sum::<f64>() / points as f64
}

/// Largest `Q` accepted by [`l1_norm_sq`].
pub const MAX_L1_Q: u32 = 14;

/// `∫₀¹ |S_Q(α)| dα`.
pub fn l1_norm_sq(q: u32) -> Result<QuadratureResult> {
    l1_norm_sq_with(q, QuadratureConfig::default())
}

pub fn l1_norm_sq_with(q: u32, config: QuadratureConfig) -> Result<QuadratureResult> {
    if q == 0 || q > MAX_L1_Q {
        return Err(Error::Guard {
            what: "Q",
            value: q as u64,
            max: MAX_L1_Q as u64,
        });
    }
    // kinks sit at multiples of 2^{1-2Q}; start with cells aligned to them
    let start = 1usize << (2 * q + 1);
    refine(start, config, |n| gelfond_abs_mean(q, n.trailing_zeros()))
}

/// Mean of `|Σ_n c_n e(αn)|` over the `n_grid` midpoints, by one FFT.
fn trig_poly_abs_mean(coeffs: &[f64], n_grid: usize) -> f64 {
    assert!(coeffs.len() <= n_grid);
    let mut buf: Vec<Complex64> = vec![Complex64::default(); n_grid];
    for (x, &c) in coeffs.iter().enumerate() {
        // shift by half a cell so the inverse FFT samples (j + 1/2)/n
        buf[x] = unit(x as f64 / (2 * n_grid) as f64) * c;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n_grid).process(&mut buf);
    buf.iter().map(|z| z.norm()).sum::<f64>() / n_grid as f64
}

fn trig_poly_l1(coeffs: &[f64], config: QuadratureConfig) -> Result<QuadratureResult> {
    let start = (4 * coeffs.len()).next_power_of_two().max(64);
    refine(start, config, |n| trig_poly_abs_mean(coeffs, n))
}

/// Largest `X` accepted by [`l1_norm_charsum`].
pub const MAX_L1_X: u64 = 1 << 14;

/// `∫₀¹ |Σ_{n<=X} ε(n) e(αn)| dα`.
pub fn l1_norm_charsum(x: u64) -> Result<QuadratureResult> {
    if x == 0 || x > MAX_L1_X {
        return Err(Error::Guard {
            what: "X",
            value: x,
            max: MAX_L1_X,
        });
    }
    let coeffs: Vec<f64> = (0..=x)
        .map(|n| if n == 0 { 0.0 } else { epsilon(n).as_f64() })
        .collect();
    trig_poly_l1(&coeffs, QuadratureConfig::default())
}

/// `X^{θ₀} ln X`, the right side the character-sum L¹ norm is checked against.
pub fn corollary2_rhs(x: u64) -> f64 {
    (x as f64).powf(THETA0) * (x as f64).ln()
}

// ---------------------------------------------------------------------------
// Lemma 3 (Gallagher)

/// Both sides of Gallagher's inequality for `S(t) = Σ_{x<2^k} ε(x) e(tx)`
/// sampled at `t_r = r/2^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GallagherCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub grid_points: usize,
}

pub const MAX_GALLAGHER_K: u32 = 12;

pub fn gallagher_check(k: u32) -> Result<GallagherCheck> {
    if k == 0 || k > MAX_GALLAGHER_K {
        return Err(Error::Guard {
            what: "k",
            value: k as u64,
            max: MAX_GALLAGHER_K as u64,
        });
    }
    let size = 1usize << k;
    let signs: Vec<f64> = (0..size as u64).map(|x| epsilon(x).as_f64()).collect();
    let twiddle: Vec<Complex64> = (0..size).map(|i| unit(i as f64 / size as f64)).collect();
    let samples: Vec<f64> = (0..size)
        .into_par_iter()
        .map(|r| {
            signs
                .iter()
                .enumerate()
                .map(|(x, &s)| twiddle[(r * x) % size] * s)
                .sum::<Complex64>()
                .norm()
        })
        .collect();
    let lhs: f64 = samples.iter().sum();

    let config = QuadratureConfig::default();
    let s_l1 = trig_poly_l1(&signs, config)?;
    let derivative: Vec<f64> = signs
        .iter()
        .enumerate()
        .map(|(x, &s)| std::f64::consts::TAU * x as f64 * s)
        .collect();
    let ds_l1 = trig_poly_l1(&derivative, config)?;
    let delta = 1.0 / size as f64;
    Ok(GallagherCheck {
        lhs,
        rhs: s_l1.value / delta + 0.5 * ds_l1.value,
        grid_points: s_l1.grid_points.max(ds_l1.grid_points),
    })
}

// ---------------------------------------------------------------------------
// Pointwise product bounds

/// `max_α |S_Q(α)|` over `alphas` against `(2/√3)·2^{2Qλ}`.
pub fn lemma2_check(q: u32, alphas: &[f64]) -> BoundCheck {
    let worst = alphas
        .par_iter()
        .map(|&a| gelfond_product(a, q).norm())
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);
    BoundCheck::new(
        "lemma2",
        format!("Q={q};alphas={}", alphas.len()),
        worst,
        gelfond_bound(q),
    )
    .with_grid(alphas.len())
}

/// Number of `α` where `|S_Q(α)|` exceeds the Lemma 2 bound.
pub fn lemma2_violations(q: u32, alphas: &[f64]) -> usize {
    let bound = gelfond_bound(q);
    alphas
        .iter()
        .filter(|&&a| gelfond_product(a, q).norm() > bound)
        .count()
}

/// `max_α |Σ_{n<=X} ε(n)e(αn)| / (X^λ ln X)`.
pub fn corollary1_ratio(x: u64, alphas: &[f64]) -> f64 {
    let worst = alphas
        .par_iter()
        .map(|&a| char_sum(a, x).norm())
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);
    worst / ((x as f64).powf(LAMBDA) * (x as f64).ln())
}

/// `∫|S_Q|` against `2^{Qθ₀}`.
pub fn lemma4_check(q: u32) -> Result<BoundCheck> {
    let quad = l1_norm_sq(q)?;
    Ok(
        BoundCheck::new("lemma4", format!("Q={q}"), quad.value, l1_product_bound(q))
            .with_grid(quad.grid_points),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn min_norm_examples() {
        assert_eq!(min_norm_sum(0.0, 0.5, 10.0, 5), 10.0);
        assert_eq!(min_norm_sum(0.5, 0.0, 100.0, 4), 204.0);
    }

    #[test]
    fn min_norm_monotone() {
        let mut s = crate::sampling::AlphaSampler::new(7);
        for _ in 0..50 {
            let (a, b) = (s.next_alpha(), s.next_alpha());
            let u = 1.0 + 50.0 * s.next_alpha();
            let p = 1 + s.next_below(200);
            assert!(min_norm_sum(a, b, u, p) <= min_norm_sum(a, b, u * 1.5, p));
            assert!(min_norm_sum(a, b, u, p) <= min_norm_sum(a, b, u, p + 7));
        }
    }

    #[test]
    fn rational_approx_examples() {
        let third = rational_approx(1.0 / 3.0, 10);
        assert_eq!((third.a, third.q), (1, 3));
        assert!(third.theta.abs() < 1e-12);
        let zero = rational_approx(0.0, 10);
        assert_eq!((zero.a, zero.q, zero.theta), (0, 1, 0.0));

        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let approx = rational_approx(golden, 100);
        // continued-fraction oracle: all partial quotients are 1, so the
        // denominators run through the Fibonacci numbers
        let mut fib = vec![1u64, 1];
        while *fib.last().unwrap() <= 100 {
            fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
        }
        assert_eq!(approx.q, 89);
        assert!(fib.contains(&approx.q));
    }

    #[test]
    fn rational_approx_invariants() {
        let mut s = crate::sampling::AlphaSampler::new(11);
        for _ in 0..500 {
            let alpha = s.next_alpha() * 4.0 - 2.0;
            let q_max = 1 + s.next_below(1000);
            let r = rational_approx(alpha, q_max);
            assert!(r.q <= q_max && r.theta.abs() <= 1.0);
            assert_eq!(gcd(r.a.unsigned_abs(), r.q), 1);
            assert!((r.value() - alpha).abs() <= 1e-15 * alpha.abs().max(1.0));
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn lemma1_random_rationals() {
        let mut s = crate::sampling::AlphaSampler::new(3);
        for _ in 0..300 {
            let q = 1 + s.next_below(50);
            let a = s.next_below(q) as i64;
            let theta = 2.0 * s.next_alpha() - 1.0;
            let alpha = a as f64 / q as f64 + theta / (q * q) as f64;
            let beta = s.next_alpha();
            let cap = 1.0 + 100.0 * s.next_alpha();
            let p = 1 + s.next_below(500);
            assert!(min_norm_sum(alpha, beta, cap, p) <= lemma1_rhs(q, cap, p));
        }
    }

    #[test]
    fn dyadic_sine_table() {
        let t = DyadicSine::new(9);
        for idx in 0..512u64 {
            let expect = (PI * idx as f64 / 512.0).sin().abs();
            assert!((t.abs_sin(idx) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn l1_sq_q1_closed_form() {
        // ∫ 4|sin πα sin 2πα| dα = 16/(3π)
        let r = l1_norm_sq(1).unwrap();
        let exact = 16.0 / (3.0 * PI);
        assert!(((r.value - exact) / exact).abs() < 1e-4, "{r:?}");
        assert!(r.value <= l1_product_bound(1));
    }

    #[test]
    fn l1_charsum_closed_forms() {
        let one = l1_norm_charsum(1).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        // ∫|1 + e(α)| dα = 4/π
        let two = l1_norm_charsum(2).unwrap();
        assert!(
            ((two.value - 4.0 / PI) / (4.0 / PI)).abs() < 1e-4,
            "{two:?}"
        );
        assert!(matches!(l1_norm_charsum(0), Err(Error::Guard { .. })));
    }

    #[test]
    fn quadrature_doubling_is_stable() {
        for q in 1..=4 {
            let r = l1_norm_sq(q).unwrap();
            let finer = gelfond_abs_mean(q, r.grid_points.trailing_zeros() + 1);
            assert!((finer - r.value).abs() < r.est_error, "Q={q}");
        }
    }

    #[test]
    fn gallagher_k1() {
        let g = gallagher_check(1).unwrap();
        assert!((g.lhs - 2.0).abs() < 1e-12);
        // 2·(4/π) + π
        assert!((g.rhs - (8.0 / PI + PI)).abs() < 1e-3);
        assert!(matches!(gallagher_check(13), Err(Error::Guard { .. })));
    }

    #[test]
    fn gallagher_small_k() {
        for k in 1..=6 {
            let g = gallagher_check(k).unwrap();
            assert!(g.lhs <= g.rhs * (1.0 + QUADRATURE_TOL), "k={k}: {g:?}");
        }
    }

    #[test]
    fn bound_check_rules() {
        let c = BoundCheck::new("x", "", 1.0005, 1.0);
        assert!(c.passes(1e-3));
        assert!(!c.passes(0.0));
        assert!(c.margin() < 0.0);
        assert!(!BoundCheck::new("x", "", f64::NAN, 1.0).passes(1.0));
    }
}
