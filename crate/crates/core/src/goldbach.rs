//! Ternary Goldbach counts over all primes and over the class ℕ₀.
//!
//! Representations are ordered triples `(p₁, p₂, p₃)` with repetition and
//! `p = 2` allowed, which is what `∫₀¹ S(α)³ e(-Nα) dα` counts. Expanding
//! `∏ (1 + ε(pᵢ))/2` over a triple gives
//! `J₀ = (T₀ + 3T₁ + 3T₂ + T₃) / 8`, where `T_j` puts `ε` on the first `j`
//! coordinates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::PrimeTable;
use crate::error::{Error, Result};
use crate::expsum::unit;
use crate::parity::epsilon;

/// The four ε-signed triple counts at one odd `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepCounts {
    pub n: u64,
    pub t0: i64,
    pub t1: i64,
    pub t2: i64,
    pub t3: i64,
}

impl RepCounts {
    /// `J(N)`, the number of ordered prime triples summing to `N`.
    pub fn j(&self) -> i64 {
        self.t0
    }

    /// `J₀(N)`. Panics if the assembly is not divisible by 8, which would mean
    /// the counts are corrupt.
    pub fn j0(&self) -> i64 {
        let s = self.assembly();
        assert_eq!(
            s % 8,
            0,
            "J0 assembly {s} not divisible by 8 at N = {}",
            self.n
        );
        s / 8
    }

    /// `T₀ + 3T₁ + 3T₂ + T₃`.
    pub fn assembly(&self) -> i64 {
        self.t0 + 3 * self.t1 + 3 * self.t2 + self.t3
    }

    /// `8·J₀/J`, or 0 when `J = 0`.
    pub fn ratio(&self) -> f64 {
        if self.t0 == 0 {
            0.0
        } else {
            8.0 * self.j0() as f64 / self.t0 as f64
        }
    }
}

fn check_odd(n: u64) -> Result<()> {
    if n % 2 == 0 {
        return Err(Error::Domain(format!("N = {n} must be odd")));
    }
    Ok(())
}

/// Per-integer sign table on `0..=n`: `ε(m)` at primes, 0 elsewhere.
fn signed_indicator(table: &PrimeTable, n: u64) -> Vec<i8> {
    let mut out = vec![0i8; n as usize + 1];
    for (p, tag) in table.iter().take_while(|&(p, _)| p <= n) {
        out[p as usize] = tag.value();
    }
    out
}

/// `Σ_{p₁+p₂+p₃=N} ∏_{i ∈ coords} ε(pᵢ)` over ordered prime triples, by
/// exhaustive enumeration.
pub fn signed_triple_sum(n: u64, table: &PrimeTable, coords: [bool; 3]) -> Result<i64> {
    table.check_covers("N", n)?;
    let sign = signed_indicator(table, n);
    let primes = table.primes_up_to(n);
    let mut total = 0i64;
    for &p1 in primes {
        for &p2 in primes {
            if p1 + p2 >= n {
                break;
            }
            let p3 = n - p1 - p2;
            let s3 = sign[p3 as usize];
            if s3 == 0 {
                continue;
            }
            let mut w = 1i64;
            for (on, s) in coords
                .iter()
                .zip([sign[p1 as usize], sign[p2 as usize], s3])
            {
                if *on {
                    w *= s as i64;
                }
            }
            total += w;
        }
    }
    Ok(total)
}

/// Exact counts at one odd `N` by a double loop over `(p₁, p₂)` with a
/// primality lookup for `p₃`. Odd `N < 7` have no representations.
pub fn rep_counts(n: u64, table: &PrimeTable) -> Result<RepCounts> {
    check_odd(n)?;
    table.check_covers("N", n)?;
    let sign = signed_indicator(table, n);
    let primes = table.primes_up_to(n);
    let (mut t0, mut t1, mut t2, mut t3) = (0i64, 0i64, 0i64, 0i64);
    for &p1 in primes {
        let e1 = sign[p1 as usize] as i64;
        for &p2 in primes {
            if p1 + p2 >= n {
                break;
            }
            let e3 = sign[(n - p1 - p2) as usize] as i64;
            if e3 == 0 {
                continue;
            }
            let e12 = e1 * sign[p2 as usize] as i64;
            t0 += 1;
            t1 += e1;
            t2 += e12;
            t3 += e12 * e3;
        }
    }
    Ok(RepCounts { n, t0, t1, t2, t3 })
}

/// Default ceiling on `N_max` for [`rep_counts_fast`]; two `i64` pair tables
/// of this length are allocated.
pub const DEFAULT_FAST_GUARD: u64 = 10_000_000;

/// Counts for every odd `N <= n_max`, from pairwise-sum tables
/// `A[s] = #{p + q = s}` and `C[s] = Σ_{p+q=s} ε(p)ε(q)`.
pub fn rep_counts_fast(n_max: u64, table: &PrimeTable) -> Result<Vec<RepCounts>> {
    rep_counts_fast_guarded(n_max, table, DEFAULT_FAST_GUARD)
}

pub fn rep_counts_fast_guarded(
    n_max: u64,
    table: &PrimeTable,
    guard: u64,
) -> Result<Vec<RepCounts>> {
    if n_max > guard {
        return Err(Error::Guard {
            what: "N_max",
            value: n_max,
            max: guard,
        });
    }
    table.check_covers("N_max", n_max)?;
    let primes = table.primes_up_to(n_max);
    let signs: Vec<i64> = primes.iter().map(|&p| epsilon(p).as_i64()).collect();
    let len = n_max as usize + 1;

    let mut plain = vec![0i64; len];
    let mut signed = vec![0i64; len];
    for (i, &p) in primes.iter().enumerate() {
        for (j, &q) in primes.iter().enumerate() {
            let s = p + q;
            if s > n_max {
                break;
            }
            plain[s as usize] += 1;
            signed[s as usize] += signs[i] * signs[j];
        }
    }

    let odd: Vec<u64> = (1..=n_max).step_by(2).collect();
    Ok(odd
        .into_par_iter()
        .map(|n| {
            let (mut t0, mut t1, mut t2, mut t3) = (0i64, 0i64, 0i64, 0i64);
            for (&p, &e) in primes.iter().zip(&signs) {
                if p >= n {
                    break;
                }
                let rest = (n - p) as usize;
                let a = plain[rest];
                let c = signed[rest];
                t0 += a;
                t1 += e * a;
                t2 += c;
                t3 += e * c;
            }
            RepCounts { n, t0, t1, t2, t3 }
        })
        .collect())
}

/// Both sides of the discretized circle-method identities at one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleCheck {
    pub n: u64,
    pub modulus: u64,
    pub j_integral: i64,
    pub j_direct: i64,
    pub j0_integral: i64,
    pub j0_direct: i64,
    /// Largest distance of either integral from its rounded value,
    /// imaginary part included.
    pub max_residual: f64,
}

impl CircleCheck {
    pub fn exact(&self) -> bool {
        self.j_integral == self.j_direct && self.j0_integral == self.j0_direct
    }
}

/// Evaluates `(1/L) Σ_{j<L} S(j/L)³ e(-jN/L)` and
/// `(1/8L) Σ_{j<L} (S + S₀)(j/L)³ e(-jN/L)`, which count ordered triples
/// exactly once `L > 3N`.
pub fn circle_identity_check(n: u64, modulus: u64, table: &PrimeTable) -> Result<CircleCheck> {
    check_odd(n)?;
    table.check_covers("N", n)?;
    if modulus <= 3 * n {
        return Err(Error::Precondition(format!(
            "modulus L = {modulus} must exceed 3N = {}",
            3 * n
        )));
    }
    let l = modulus as usize;
    let twiddle: Vec<Complex64> = (0..l).map(|i| unit(i as f64 / l as f64)).collect();
    let primes = table.primes_up_to(n);
    let weights: Vec<f64> = primes.iter().map(|&p| 1.0 + epsilon(p).as_f64()).collect();

    let terms: Vec<(Complex64, Complex64)> = (0..l)
        .into_par_iter()
        .map(|j| {
            let mut s = Complex64::default();
            let mut s_sum = Complex64::default();
            for (&p, &w) in primes.iter().zip(&weights) {
                let z = twiddle[(j * p as usize) % l];
                s += z;
                s_sum += z * w;
            }
            let back = twiddle[(l - (j * n as usize) % l) % l];
            (s * s * s * back, s_sum * s_sum * s_sum * back)
        })
        .collect();
    let (mut j_sum, mut j0_sum) = (Complex64::default(), Complex64::default());
    for (a, b) in terms {
        j_sum += a;
        j0_sum += b;
    }
    let j_val = j_sum / l as f64;
    let j0_val = j0_sum / (8.0 * l as f64);

    let residual = |z: Complex64| (z.re - z.re.round()).abs().max(z.im.abs());
    let direct = rep_counts(n, table)?;
    Ok(CircleCheck {
        n,
        modulus,
        j_integral: j_val.re.round() as i64,
        j_direct: direct.j(),
        j0_integral: j0_val.re.round() as i64,
        j0_direct: direct.j0(),
        max_residual: residual(j_val).max(residual(j0_val)),
    })
}

/// Smallest power of two strictly above `3N`.
pub fn circle_modulus(n: u64) -> u64 {
    (3 * n + 1).next_power_of_two()
}

pub const RATIO_CSV_HEADER: [&str; 5] = ["N", "J", "J0", "ratio", "lower_bound_proxy"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub n: u64,
    pub j: i64,
    pub j0: i64,
    /// `8·J₀/J`
    pub ratio: f64,
    /// `J·(ln N)³/N²`
    pub lower_bound_proxy: f64,
}

impl RatioRow {
    pub fn from_counts(c: &RepCounts) -> Self {
        let nf = c.n as f64;
        RatioRow {
            n: c.n,
            j: c.j(),
            j0: c.j0(),
            ratio: c.ratio(),
            lower_bound_proxy: c.j() as f64 * nf.ln().powi(3) / (nf * nf),
        }
    }

    /// `|8·J₀/J - 1|`.
    pub fn deviation(&self) -> f64 {
        (self.ratio - 1.0).abs()
    }
}

pub fn ratio_report(checkpoints: &[u64], table: &PrimeTable) -> Result<Vec<RatioRow>> {
    checkpoints
        .iter()
        .map(|&n| rep_counts(n, table).map(|c| RatioRow::from_counts(&c)))
        .collect()
}
