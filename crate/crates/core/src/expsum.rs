//! Exponential sums twisted by the parity character.
//!
//! Everything here is evaluated by direct summation. These routines are the
//! reference layer the faster paths in [`crate::spectrum`] and
//! [`crate::goldbach`] are checked against, so none of them take shortcuts.

use num_complex::Complex64;

use crate::arith::{ArithTables, PrimeTable};
use crate::error::{Error, Result};
use crate::parity::{epsilon, epsilon_k, ParityValue};

pub type ComplexAmplitude = Complex64;

/// `e(x) = exp(2πi·x)`, with `x` reduced mod 1 before the trig call.
#[inline]
pub fn unit(turns: f64) -> ComplexAmplitude {
    Complex64::cis(std::f64::consts::TAU * turns.rem_euclid(1.0))
}

#[inline]
fn phase(alpha: f64, n: u64) -> ComplexAmplitude {
    unit(alpha * n as f64)
}

/// `Σ_{n=1}^{X} ε(n) e(αn)`.
pub fn char_sum(alpha: f64, x: u64) -> ComplexAmplitude {
    (1..=x).map(|n| phase(alpha, n) * epsilon(n).as_f64()).sum()
}

/// The Gelfond product `∏_{r=0}^{2Q-1} (1 - e(α·2^r))`, which equals
/// `Σ_{0 <= n < 2^{2Q}} ε(n) e(αn)`.
pub fn gelfond_product(alpha: f64, q: u32) -> ComplexAmplitude {
    let mut frac = alpha.rem_euclid(1.0);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..2 * q {
        acc *= Complex64::new(1.0, 0.0) - unit(frac);
        // doubling mod 1 is exact in binary floating point
        frac = (2.0 * frac).rem_euclid(1.0);
    }
    acc
}

/// Which prime sum [`prime_sum`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeWeight {
    /// `S(α) = Σ_{p<=N} e(αp)`
    Unweighted,
    /// `S₀(α) = Σ_{p<=N} ε(p) e(αp)`
    Parity,
}

pub fn prime_sum(
    alpha: f64,
    n: u64,
    table: &PrimeTable,
    weight: PrimeWeight,
) -> Result<ComplexAmplitude> {
    table.check_covers("N", n)?;
    let end = table.primes_up_to(n).len();
    let sum = table
        .iter()
        .take(end)
        .map(|(p, tag)| match weight {
            PrimeWeight::Unweighted => phase(alpha, p),
            PrimeWeight::Parity => phase(alpha, p) * tag.as_f64(),
        })
        .sum();
    Ok(sum)
}

/// `Σ_{n<=X} ε(n) Λ(n) e(αn)`.
pub fn theorem1_sum(alpha: f64, x: u64, tables: &ArithTables) -> Result<ComplexAmplitude> {
    tables.check_covers("X", x)?;
    Ok((2..=x)
        .filter_map(|n| {
            let lam = tables.mangoldt(n);
            (lam != 0.0).then(|| phase(alpha, n) * (lam * epsilon(n).as_f64()))
        })
        .sum())
}

/// The same sum at every `α = j/L`, `0 <= j < L`.
///
/// Coefficients are folded by residue mod `L` and then transformed by an
/// `O(L²)` direct DFT over exact integer phases.
pub fn theorem1_on_grid(
    grid: usize,
    x: u64,
    tables: &ArithTables,
) -> Result<Vec<ComplexAmplitude>> {
    tables.check_covers("X", x)?;
    if grid == 0 {
        return Ok(Vec::new());
    }
    let mut folded = vec![0.0f64; grid];
    for n in 2..=x {
        let lam = tables.mangoldt(n);
        if lam != 0.0 {
            folded[(n % grid as u64) as usize] += lam * epsilon(n).as_f64();
        }
    }
    let twiddle: Vec<ComplexAmplitude> = (0..grid).map(|i| unit(i as f64 / grid as f64)).collect();
    Ok((0..grid)
        .map(|j| {
            folded
                .iter()
                .enumerate()
                .map(|(r, &c)| twiddle[(j * r) % grid] * c)
                .sum()
        })
        .collect())
}

/// `a_m = Σ_{d | m, d <= u} μ(d)`.
pub fn vaughan_coefficient(m: u64, u: f64, tables: &ArithTables) -> i64 {
    assert!(m >= 1);
    (1..=m)
        .take_while(|&d| d as f64 <= u)
        .filter(|d| m % d == 0)
        .map(|d| tables.moebius(d) as i64)
        .sum()
}

/// `a_m` for every `m <= m_max`, by scattering `μ(d)` over multiples of each `d <= u`.
fn vaughan_coefficients(m_max: u64, u: f64, tables: &ArithTables) -> Vec<i64> {
    let mut a = vec![0i64; m_max as usize + 1];
    let mut d = 1u64;
    while d as f64 <= u && d <= m_max {
        let mu = tables.moebius(d) as i64;
        if mu != 0 {
            for m in (d..=m_max).step_by(d as usize) {
                a[m as usize] += mu;
            }
        }
        d += 1;
    }
    a
}

/// Vaughan cutoff `u = X^{0.1}` as a real number.
pub fn vaughan_cutoff(x: u64) -> f64 {
    (x as f64).powf(0.1)
}

/// The three Vaughan pieces of the Theorem 1 sum, with
/// `residual = S - (w1 - w2 - w3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaughanSplit {
    pub w1: ComplexAmplitude,
    pub w2: ComplexAmplitude,
    pub w3: ComplexAmplitude,
    pub residual: ComplexAmplitude,
    pub u: f64,
}

impl VaughanSplit {
    /// `w1 - w2 - w3 + residual`; reproduces the direct sum.
    pub fn reassembled(&self) -> ComplexAmplitude {
        self.w1 - self.w2 - self.w3 + self.residual
    }
}

/// Splits `Σ_{n<=X} ε(n)Λ(n)e(αn)` with cutoff `u = X^{0.1}`.
///
/// `d <= u`, `n <= u`, `u < m <= X/u` and `u < n` all compare integers
/// against the real cutoff.
pub fn vaughan_split(alpha: f64, x: u64, tables: &ArithTables) -> Result<VaughanSplit> {
    if x < 100 {
        return Err(Error::Precondition(format!(
            "vaughan_split needs X >= 100, got {x}"
        )));
    }
    tables.check_covers("X", x)?;
    let u = vaughan_cutoff(x);
    let small: Vec<u64> = (1..=x).take_while(|&d| d as f64 <= u).collect();

    let twisted = |n: u64| phase(alpha, n) * epsilon(n).as_f64();

    let mut w1 = ComplexAmplitude::default();
    for &d in &small {
        let mu = tables.moebius(d) as f64;
        if mu == 0.0 {
            continue;
        }
        let inner: ComplexAmplitude = (1..=x / d).map(|n| twisted(d * n) * (n as f64).ln()).sum();
        w1 += inner * mu;
    }

    let mut w2 = ComplexAmplitude::default();
    for &d in &small {
        let mu = tables.moebius(d) as f64;
        if mu == 0.0 {
            continue;
        }
        for &n in &small {
            let lam = tables.mangoldt(n);
            if lam == 0.0 {
                continue;
            }
            let inner: ComplexAmplitude = (1..=x / (d * n)).map(|r| twisted(d * n * r)).sum();
            w2 += inner * (mu * lam);
        }
    }

    let m_max = (x as f64 / u).floor() as u64;
    let a = vaughan_coefficients(m_max, u, tables);
    let mut w3 = ComplexAmplitude::default();
    for m in 1..=m_max {
        if m as f64 <= u || a[m as usize] == 0 {
            continue;
        }
        let inner: ComplexAmplitude = (1..=x / m)
            .filter(|&n| n as f64 > u)
            .filter_map(|n| {
                let lam = tables.mangoldt(n);
                (lam != 0.0).then(|| twisted(m * n) * lam)
            })
            .sum();
        w3 += inner * a[m as usize] as f64;
    }

    let direct = theorem1_sum(alpha, x, tables)?;
    Ok(VaughanSplit {
        w1,
        w2,
        w3,
        residual: direct - (w1 - w2 - w3),
        u,
    })
}

/// A half-open summation range `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dyadic {
    pub lo: u64,
    pub hi: u64,
}

impl Dyadic {
    pub fn new(lo: u64, hi: u64) -> Self {
        Dyadic { lo, hi }
    }

    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.lo + 1..=self.hi
    }

    pub fn is_empty(self) -> bool {
        self.hi <= self.lo
    }

    pub fn len(self) -> u64 {
        self.hi.saturating_sub(self.lo)
    }
}

/// `|Σ_{m∈M} a_m Σ_{n∈N} Λ(n) ε(mn) e(αmn)|`.
pub fn bilinear_sum_w3(
    alpha: f64,
    m_range: Dyadic,
    n_range: Dyadic,
    u: f64,
    tables: &ArithTables,
) -> Result<f64> {
    if m_range.is_empty() || n_range.is_empty() {
        return Ok(0.0);
    }
    let product = m_range.hi.checked_mul(n_range.hi).ok_or(Error::Range {
        what: "M1·N1",
        value: u64::MAX,
        limit: tables.limit(),
    })?;
    tables.check_covers("M1·N1", product)?;

    let a = vaughan_coefficients(m_range.hi, u, tables);
    let total: ComplexAmplitude = m_range
        .iter()
        .filter(|&m| a[m as usize] != 0)
        .map(|m| {
            let inner: ComplexAmplitude = n_range
                .iter()
                .filter_map(|n| {
                    let lam = tables.mangoldt(n);
                    (lam != 0.0).then(|| phase(alpha, m * n) * (lam * epsilon(m * n).as_f64()))
                })
                .sum();
            inner * a[m as usize] as f64
        })
        .sum();
    Ok(total.norm())
}

fn w4_with<F>(alpha: f64, h: u64, m_range: Dyadic, n_range: Dyadic, chi: F) -> f64
where
    F: Fn(u64) -> ParityValue,
{
    n_range
        .iter()
        .map(|n| {
            m_range
                .iter()
                .map(|m| {
                    let sign = chi(m * n) * chi(m * n + m * h);
                    phase(-alpha, m * (n + h)) * sign.as_f64()
                })
                .sum::<ComplexAmplitude>()
                .norm()
        })
        .sum()
}

/// `Σ_{n∈N} |Σ_{m∈M} ε(mn) ε(mn+mh) e(-αm(n+h))|`.
pub fn bilinear_sum_w4(alpha: f64, h: u64, m_range: Dyadic, n_range: Dyadic) -> f64 {
    w4_with(alpha, h, m_range, n_range, epsilon)
}

/// [`bilinear_sum_w4`] with `ε` replaced by the `k`-bit truncation `ε_k`.
pub fn bilinear_sum_w4_truncated(
    alpha: f64,
    h: u64,
    m_range: Dyadic,
    n_range: Dyadic,
    k: u32,
) -> f64 {
    w4_with(alpha, h, m_range, n_range, |n| epsilon_k(n, k))
}

/// Smallest `k` with `2^{k-1} < m_scale·X^{2ρ} <= 2^k`.
pub fn truncation_bits(m_scale: f64, x: f64, rho: f64) -> u32 {
    let target = m_scale * x.powf(2.0 * rho);
    let mut k = 1u32;
    while 2f64.powi(k as i32) < target {
        k += 1;
    }
    k
}

/// Pairs `(m, n)` whose low `k` bits of `mn` lie at or above `2^k - 2·M1·h`,
/// the only pairs where `ε(mn)ε(mn+mh)` can differ from its truncation.
pub fn truncation_defect_pairs(h: u64, m_range: Dyadic, n_range: Dyadic, k: u32) -> u64 {
    let modulus = 1u128 << k;
    let threshold = modulus.saturating_sub(2 * m_range.hi as u128 * h as u128);
    let mut count = 0;
    for m in m_range.iter() {
        for n in n_range.iter() {
            if (m as u128 * n as u128) % modulus >= threshold {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve;
    use crate::constants::LAMBDA;
    use proptest::prelude::*;

    fn close(a: ComplexAmplitude, b: ComplexAmplitude, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn char_sum_balanced_blocks() {
        for q in 1..=6 {
            let x = (1u64 << (2 * q)) - 1;
            assert!(close(char_sum(0.0, x), Complex64::new(-1.0, 0.0), 1e-9));
        }
    }

    #[test]
    fn char_sum_four_terms_by_hand() {
        // ε(1..4) = -1, -1, +1, -1
        let i_pi = |k: f64| Complex64::cis(std::f64::consts::PI * k);
        let expected = -i_pi(1.0) - i_pi(2.0) + i_pi(3.0) - i_pi(4.0);
        assert!(close(char_sum(0.5, 4), expected, 1e-12));
        assert!(close(char_sum(0.5, 4), Complex64::new(-2.0, 0.0), 1e-12));
    }

    #[test]
    fn gelfond_product_zeros() {
        for q in 1..=5 {
            assert_eq!(gelfond_product(0.0, q).norm(), 0.0);
        }
        assert!(gelfond_product(0.5, 1).norm() < 1e-15);
    }

    #[test]
    fn gelfond_product_third() {
        let value = gelfond_product(1.0 / 3.0, 2);
        let bound = 2.0 / 3f64.sqrt() * 2f64.powf(4.0 * LAMBDA);
        assert!((bound - 10.392).abs() < 1e-3);
        assert!(value.norm() <= bound);
        let direct: ComplexAmplitude = (0..16u64)
            .map(|n| unit(n as f64 / 3.0) * epsilon(n).as_f64())
            .sum();
        assert!(close(value, direct, 1e-9));
    }

    #[test]
    fn prime_sum_at_zero() {
        let t = sieve(100_000);
        assert_eq!(
            prime_sum(0.0, 10, &t, PrimeWeight::Unweighted).unwrap().re,
            4.0
        );
        assert_eq!(prime_sum(0.0, 10, &t, PrimeWeight::Parity).unwrap().re, 0.0);
        assert!(matches!(
            prime_sum(0.0, 100_001, &t, PrimeWeight::Parity),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn theorem1_small_cases() {
        let tables = ArithTables::new(1_000);
        assert_eq!(theorem1_sum(0.37, 1, &tables).unwrap().norm(), 0.0);
        // n = 2, 3, 4, 5, 7, 8, 9 with ε = -1, +1, -1, +1, -1, -1, +1
        let (l2, l3, l5, l7) = (2f64.ln(), 3f64.ln(), 5f64.ln(), 7f64.ln());
        let expected = -3.0 * l2 + 2.0 * l3 + l5 - l7;
        let got = theorem1_sum(0.0, 10, &tables).unwrap();
        assert!((got.re - expected).abs() < 1e-12 && got.im.abs() < 1e-12);
    }

    #[test]
    fn theorem1_grid_matches_pointwise() {
        let tables = ArithTables::new(5_000);
        let grid = theorem1_on_grid(64, 5_000, &tables).unwrap();
        for j in [0usize, 1, 17, 32, 63] {
            let direct = theorem1_sum(j as f64 / 64.0, 5_000, &tables).unwrap();
            assert!(close(grid[j], direct, 1e-8), "j = {j}");
        }
    }

    #[test]
    fn vaughan_coefficient_examples() {
        let tables = ArithTables::new(100);
        assert_eq!(vaughan_coefficient(1, 10.0, &tables), 1);
        assert_eq!(vaughan_coefficient(7, 7.0, &tables), 0);
        assert_eq!(vaughan_coefficient(7, 9.5, &tables), 0);
        assert_eq!(vaughan_coefficient(11, 3.0, &tables), 1);
        for m in 1..=100 {
            let a = vaughan_coefficient(m, 4.2, &tables);
            assert!(a.unsigned_abs() <= tables.divisor_count(m) as u64);
        }
        assert_eq!(
            vaughan_coefficients(100, 4.2, &tables)[60],
            vaughan_coefficient(60, 4.2, &tables)
        );
    }

    #[test]
    fn vaughan_split_reassembles() {
        let tables = ArithTables::new(1024);
        let split = vaughan_split(0.5, 1024, &tables).unwrap();
        let direct = theorem1_sum(0.5, 1024, &tables).unwrap();
        assert!(close(split.reassembled(), direct, 1e-8));
        assert!((split.u - 2.0).abs() < 1e-12);
        assert!(matches!(
            vaughan_split(0.0, 99, &tables),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn vaughan_w2_empty_when_no_prime_powers_below_cutoff() {
        // u = 100^0.1 < 2, so n <= u admits only n = 1 with Λ(1) = 0
        let tables = ArithTables::new(100);
        let split = vaughan_split(0.123, 100, &tables).unwrap();
        assert_eq!(split.w2, ComplexAmplitude::default());
    }

    #[test]
    fn bilinear_w3_small() {
        let tables = ArithTables::new(1_000);
        let empty = bilinear_sum_w3(0.2, Dyadic::new(8, 8), Dyadic::new(8, 16), 2.0, &tables);
        assert_eq!(empty.unwrap(), 0.0);
        let value =
            bilinear_sum_w3(0.0, Dyadic::new(8, 16), Dyadic::new(8, 16), 2.0, &tables).unwrap();
        // triangle inequality
        let a_mass: f64 = (9..=16)
            .map(|m| vaughan_coefficient(m, 2.0, &tables).abs() as f64)
            .sum();
        let lam_mass: f64 = (9..=16).map(|n| tables.mangoldt(n)).sum();
        assert!(value <= a_mass * lam_mass + 1e-12);
        assert!(matches!(
            bilinear_sum_w3(0.0, Dyadic::new(8, 40), Dyadic::new(8, 40), 2.0, &tables),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn bilinear_w4_small() {
        assert_eq!(
            bilinear_sum_w4(0.3, 2, Dyadic::new(8, 16), Dyadic::new(16, 16)),
            0.0
        );
        let at_zero = bilinear_sum_w4(0.0, 1, Dyadic::new(8, 16), Dyadic::new(8, 16));
        assert!(at_zero <= 64.0);
    }

    #[test]
    fn truncation_bits_brackets_target() {
        for (m, x, rho) in [(16.0, 1e4, 0.0003), (100.0, 1e6, 0.01), (3.0, 10.0, 0.0)] {
            let k = truncation_bits(m, x, rho);
            let target = m * f64::powf(x, 2.0 * rho);
            assert!(2f64.powi(k as i32 - 1) < target && target <= 2f64.powi(k as i32));
        }
    }

    proptest! {
        #[test]
        fn product_identity(alpha in 0.0f64..1.0, q in 1u32..=6) {
            let lhs = gelfond_product(alpha, q);
            let rhs = char_sum(alpha, (1 << (2 * q)) - 1) + 1.0;
            prop_assert!(close(lhs, rhs, 1e-9 * (1u64 << (2 * q)) as f64));
        }

        #[test]
        fn conjugate_symmetry(alpha in 0.001f64..0.999) {
            let table = sieve(2_000);
            let tables = ArithTables::new(2_000);
            let pairs = [
                (char_sum(alpha, 777), char_sum(1.0 - alpha, 777)),
                (gelfond_product(alpha, 4), gelfond_product(1.0 - alpha, 4)),
                (
                    prime_sum(alpha, 2_000, &table, PrimeWeight::Parity).unwrap(),
                    prime_sum(1.0 - alpha, 2_000, &table, PrimeWeight::Parity).unwrap(),
                ),
                (
                    theorem1_sum(alpha, 2_000, &tables).unwrap(),
                    theorem1_sum(1.0 - alpha, 2_000, &tables).unwrap(),
                ),
            ];
            for (f, g) in pairs {
                prop_assert!(close(g, f.conj(), 1e-8));
            }
        }
    }
}
