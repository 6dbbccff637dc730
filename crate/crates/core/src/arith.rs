//! Prime sieve with parity tags, classical arithmetic functions, and the
//! on-disk prime cache.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::parity::{epsilon, ParityValue};

/// Above this limit the sieve runs segment by segment.
pub const SEGMENT_THRESHOLD: u64 = 1 << 20;
/// Odd numbers per segment.
const SEGMENT_ODDS: u64 = 1 << 17;

/// Sieved primes up to `limit`, each tagged with `ε(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    tags: Vec<ParityValue>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn tags(&self) -> &[ParityValue] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Iterator over `(p, ε(p))`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, ParityValue)> + '_ {
        self.primes.iter().copied().zip(self.tags.iter().copied())
    }

    /// Primes `<= n` as a prefix slice.
    pub fn primes_up_to(&self, n: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= n);
        &self.primes[..end]
    }

    pub fn check_covers(&self, what: &'static str, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::Range {
                what,
                value: n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Dense indicator `0..=n`, 1 at primes.
    pub fn indicator(&self, n: u64) -> Vec<u8> {
        let mut out = vec![0u8; n as usize + 1];
        for &p in self.primes_up_to(n) {
            out[p as usize] = 1;
        }
        out
    }

    fn from_primes(limit: u64, primes: Vec<u64>) -> Self {
        let tags = primes.iter().map(|&p| epsilon(p)).collect();
        PrimeTable {
            limit,
            primes,
            tags,
        }
    }
}

/// All primes `<= limit`. `limit < 2` gives an empty table.
pub fn sieve(limit: u64) -> PrimeTable {
    let primes = if limit < 2 {
        Vec::new()
    } else if limit <= SEGMENT_THRESHOLD {
        simple_sieve(limit)
    } else {
        segmented_sieve(limit)
    };
    PrimeTable::from_primes(limit, primes)
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    let root = isqrt(limit);
    let base = simple_sieve(root);
    let odd_base: Vec<u64> = base.iter().copied().filter(|&p| p > 2).collect();

    // odd number 2i+1 lives at index i; index 0 (the number 1) is skipped
    let odd_count = (limit - 1) / 2 + 1;
    let segments: Vec<(u64, u64)> = (0..odd_count)
        .step_by(SEGMENT_ODDS as usize)
        .map(|lo| (lo, (lo + SEGMENT_ODDS).min(odd_count)))
        .collect();

    let chunks: Vec<Vec<u64>> = segments
        .par_iter()
        .map(|&(lo, hi)| {
            let mut composite = vec![false; (hi - lo) as usize];
            for &p in &odd_base {
                let p2 = p * p;
                if p2 > 2 * (hi - 1) + 1 {
                    break;
                }
                let first_value = 2 * lo + 1;
                let mut start = if p2 >= first_value {
                    p2
                } else {
                    let m = first_value.div_ceil(p) * p;
                    if m % 2 == 0 {
                        m + p
                    } else {
                        m
                    }
                };
                while start <= 2 * (hi - 1) + 1 {
                    composite[((start - 1) / 2 - lo) as usize] = true;
                    start += 2 * p;
                }
            }
            composite
                .iter()
                .enumerate()
                .filter(|&(i, &c)| !c && lo + i as u64 > 0)
                .map(|(i, _)| 2 * (lo + i as u64) + 1)
                .collect()
        })
        .collect();

    let mut primes = Vec::with_capacity(chunks.iter().map(Vec::len).sum::<usize>() + 1);
    primes.push(2);
    for chunk in chunks {
        primes.extend(chunk);
    }
    primes
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `(π(n_limit), #{p <= n_limit : ε(p) = +1})`.
pub fn class_prime_counts(table: &PrimeTable, n_limit: u64) -> Result<(u64, u64)> {
    table.check_covers("n_limit", n_limit)?;
    let end = table.primes_up_to(n_limit).len();
    let class0 = table.tags[..end].iter().filter(|t| t.is_plus()).count();
    Ok((end as u64, class0 as u64))
}

/// Factorization by trial division, as `(p, exponent)` pairs.
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Von Mangoldt function in natural-log units.
pub fn mangoldt(n: u64) -> f64 {
    assert!(n >= 1, "mangoldt is defined for n >= 1");
    match factorize(n).as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisor_count(n: u64) -> u32 {
    assert!(n >= 1, "divisor_count is defined for n >= 1");
    factorize(n).iter().map(|&(_, e)| e + 1).product()
}

/// Dense tables of Λ, μ and τ on `1..=limit` (index 0 unused).
#[derive(Debug, Clone)]
pub struct ArithTables {
    limit: u64,
    mangoldt: Vec<f64>,
    moebius: Vec<i8>,
    divisor_count: Vec<u32>,
}

impl ArithTables {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        // smallest prime factor via a linear sieve
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
            }
        }

        let mut mangoldt = vec![0.0; n + 1];
        let mut moebius = vec![0i8; n + 1];
        let mut divisor_count = vec![0u32; n + 1];
        if n >= 1 {
            moebius[1] = 1;
            divisor_count[1] = 1;
        }
        for i in 2..=n {
            let p = spf[i] as usize;
            let mut rest = i;
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            divisor_count[i] = divisor_count[rest] * (e + 1);
            moebius[i] = if e > 1 { 0 } else { -moebius[rest] };
            if rest == 1 {
                mangoldt[i] = (p as f64).ln();
            }
        }

        ArithTables {
            limit,
            mangoldt,
            moebius,
            divisor_count,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn mangoldt(&self, n: u64) -> f64 {
        self.mangoldt[n as usize]
    }

    #[inline]
    pub fn moebius(&self, n: u64) -> i8 {
        self.moebius[n as usize]
    }

    #[inline]
    pub fn divisor_count(&self, n: u64) -> u32 {
        self.divisor_count[n as usize]
    }

    pub fn check_covers(&self, what: &'static str, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::Range {
                what,
                value: n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Binary cache
//
// Layout (all integers little-endian):
//   b"GGL1" | limit: u64 | count: u64 | count × delta: u32 | count × tag: u8
// Deltas are taken from 0 for the first prime. Tag byte 0 = ε(p) = +1, 1 = ε(p) = -1.

pub const CACHE_MAGIC: &[u8; 4] = b"GGL1";
pub const CACHE_DIR_ENV: &str = "GGL_CACHE_DIR";

pub fn write_cache<W: Write>(table: &PrimeTable, mut w: W) -> Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&table.limit.to_le_bytes())?;
    w.write_all(&(table.primes.len() as u64).to_le_bytes())?;
    let mut prev = 0u64;
    let mut buf = Vec::with_capacity(table.primes.len() * 4);
    for &p in &table.primes {
        let delta = u32::try_from(p - prev)
            .map_err(|_| Error::Cache(format!("prime gap before {p} does not fit u32")))?;
        buf.extend_from_slice(&delta.to_le_bytes());
        prev = p;
    }
    w.write_all(&buf)?;
    let tags: Vec<u8> = table
        .tags
        .iter()
        .map(|t| if t.is_plus() { 0 } else { 1 })
        .collect();
    w.write_all(&tags)?;
    Ok(())
}

pub fn read_cache<R: Read>(mut r: R) -> Result<PrimeTable> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Cache(format!("bad magic {magic:?}")));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let limit = u64::from_le_bytes(word);
    r.read_exact(&mut word)?;
    let count = u64::from_le_bytes(word) as usize;

    let mut deltas = vec![0u8; count * 4];
    r.read_exact(&mut deltas)?;
    let mut primes = Vec::with_capacity(count);
    let mut prev = 0u64;
    for chunk in deltas.chunks_exact(4) {
        prev += u32::from_le_bytes(chunk.try_into().unwrap()) as u64;
        primes.push(prev);
    }
    let mut raw_tags = vec![0u8; count];
    r.read_exact(&mut raw_tags)?;
    let tags = raw_tags
        .iter()
        .map(|&b| match b {
            0 => Ok(ParityValue::PLUS),
            1 => Ok(ParityValue::MINUS),
            other => Err(Error::Cache(format!("bad tag byte {other}"))),
        })
        .collect::<Result<Vec<_>>>()?;

    if primes.windows(2).any(|w| w[0] >= w[1]) || primes.last().is_some_and(|&p| p > limit) {
        return Err(Error::Cache("primes not increasing or exceed limit".into()));
    }
    if primes.iter().zip(&tags).any(|(&p, &t)| epsilon(p) != t) {
        return Err(Error::Cache("tag stream disagrees with ε(p)".into()));
    }
    Ok(PrimeTable {
        limit,
        primes,
        tags,
    })
}

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.ggl"))
}

/// Sieve to `limit`, reading from or populating `dir` when given.
pub fn load_or_sieve(limit: u64, dir: Option<&Path>) -> Result<PrimeTable> {
    let Some(dir) = dir else {
        return Ok(sieve(limit));
    };
    let path = cache_path(dir, limit);
    if let Ok(file) = fs::File::open(&path) {
        let table = read_cache(std::io::BufReader::new(file))?;
        if table.limit == limit {
            return Ok(table);
        }
    }
    let table = sieve(limit);
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        write_cache(&table, &mut w)?;
        w.flush()?;
    }
    fs::rename(tmp, &path)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_sieves() {
        let t = sieve(10);
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        let tags: Vec<i8> = t.tags().iter().map(|t| t.value()).collect();
        assert_eq!(tags, vec![-1, 1, 1, -1]);
        assert_eq!(sieve(2).primes(), &[2]);
        assert!(sieve(1).is_empty());
        assert!(sieve(0).is_empty());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let t = sieve(100_000);
        let reference: Vec<u64> = (0..=100_000).filter(|&n| is_prime_trial(n)).collect();
        assert_eq!(t.primes(), reference.as_slice());
    }

    #[test]
    fn segmented_matches_simple() {
        for limit in [SEGMENT_THRESHOLD + 1, 3_000_001, 2_097_152] {
            assert_eq!(segmented_sieve(limit), simple_sieve(limit), "limit {limit}");
        }
    }

    #[test]
    fn prime_count_to_a_million() {
        // reference count from the non-segmented sieve, written independently
        let reference = simple_sieve(1_000_000).len();
        assert_eq!(reference, 78_498);
        assert_eq!(sieve(1_000_000).len(), 78_498);
    }

    #[test]
    fn class_counts() {
        let t = sieve(100);
        assert_eq!(class_prime_counts(&t, 10).unwrap(), (4, 2));
        let oracle = (2..=100u64)
            .filter(|&n| is_prime_trial(n) && n.count_ones() % 2 == 0)
            .count() as u64;
        assert_eq!(class_prime_counts(&t, 100).unwrap(), (25, oracle));
        assert_eq!(oracle, 10);
        assert!(matches!(
            class_prime_counts(&t, 101),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        assert!((mangoldt(8) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(mangoldt(6), 0.0);
        assert_eq!(mangoldt(1), 0.0);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(1), 1);
    }

    #[test]
    fn tables_agree_with_pointwise_functions() {
        let tables = ArithTables::new(10_000);
        for n in 1..=10_000u64 {
            assert_eq!(tables.moebius(n), moebius(n), "n = {n}");
            assert_eq!(tables.mangoldt(n), mangoldt(n), "n = {n}");
            let brute = (1..=n).filter(|d| n % d == 0).count() as u32;
            assert_eq!(tables.divisor_count(n), brute, "n = {n}");
        }
    }

    #[test]
    fn chebyshev_identity() {
        let tables = ArithTables::new(10_000);
        for n in 1..=10_000u64 {
            let lhs: f64 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| tables.mangoldt(d))
                .sum();
            let rhs = (n as f64).ln();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.max(1.0),
                "n = {n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn moebius_sums_vanish() {
        let tables = ArithTables::new(2_000);
        for n in 1..=2_000u64 {
            let s: i64 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| tables.moebius(d) as i64)
                .sum();
            assert_eq!(s, (n == 1) as i64);
        }
    }

    #[test]
    fn cache_round_trip() {
        let t = sieve(50_000);
        let mut buf = Vec::new();
        write_cache(&t, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"GGL1");
        assert_eq!(u64::from_le_bytes(buf[4..12].try_into().unwrap()), 50_000);
        assert_eq!(buf.len(), 4 + 8 + 8 + 5 * t.len());
        assert_eq!(read_cache(buf.as_slice()).unwrap(), t);
    }

    #[test]
    fn cache_rejects_corruption() {
        let t = sieve(1_000);
        let mut buf = Vec::new();
        write_cache(&t, &mut buf).unwrap();
        let mut bad_magic = buf.clone();
        bad_magic[3] = b'2';
        assert!(matches!(
            read_cache(bad_magic.as_slice()),
            Err(Error::Cache(_))
        ));
        let mut bad_tag = buf.clone();
        let last = bad_tag.len() - 1;
        bad_tag[last] ^= 1;
        assert!(matches!(
            read_cache(bad_tag.as_slice()),
            Err(Error::Cache(_))
        ));
    }

    #[test]
    fn load_or_sieve_populates_cache() {
        let dir = tempfile::tempdir().unwrap();
        let first = load_or_sieve(20_000, Some(dir.path())).unwrap();
        assert!(cache_path(dir.path(), 20_000).exists());
        let second = load_or_sieve(20_000, Some(dir.path())).unwrap();
        assert_eq!(first, second);
    }
}
