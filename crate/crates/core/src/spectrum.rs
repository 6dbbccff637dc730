//! Discrete Fourier spectrum of the truncated parity character.
//!
//! `ε̂_k(r) = 2^{-k} Σ_{l<2^k} ε_k(l) e(-rl/2^k)`. Because `ε` is multiplicative
//! across binary digits the sum collapses to a product,
//! `ε̂_k(r) = 2^{-k} ∏_{j<k} (1 - e(-r·2^j/2^k))`, which is what
//! [`dft_product`] evaluates. [`dft_direct`] is the quadratic reference.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{DECAY_C, THETA0};
use crate::error::{Error, Result};
use crate::expsum::{unit, ComplexAmplitude};
use crate::parity::epsilon_k;

/// Largest `k` for which a full spectrum is materialized.
pub const MAX_MATERIALIZED_K: u32 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    k: u32,
    coeffs: Vec<ComplexAmplitude>,
}

impl Spectrum {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[ComplexAmplitude] {
        &self.coeffs
    }

    pub fn get(&self, r: usize) -> ComplexAmplitude {
        self.coeffs[r]
    }

    /// Builds the table from [`dft_product`].
    pub fn from_product(k: u32) -> Result<Spectrum> {
        guard(k)?;
        let coeffs = (0..1u64 << k)
            .into_par_iter()
            .map(|r| dft_product(k, r))
            .collect();
        Ok(Spectrum { k, coeffs })
    }

    /// `Σ_r |ε̂_k(r)|²`; equals 1 for a unimodular sequence.
    pub fn parseval_mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_r |ε̂_k(r)|`.
    pub fn l1_mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Writes `r,re,im,abs` rows under a header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r,re,im,abs")?;
        for (r, c) in self.coeffs.iter().enumerate() {
            writeln!(w, "{r},{},{},{}", c.re, c.im, c.norm())?;
        }
        Ok(())
    }
}

fn guard(k: u32) -> Result<()> {
    if k == 0 || k > MAX_MATERIALIZED_K {
        return Err(Error::Guard {
            what: "k",
            value: k as u64,
            max: MAX_MATERIALIZED_K as u64,
        });
    }
    Ok(())
}

/// Reference `O(4^k)` evaluation of every coefficient.
pub fn dft_direct(k: u32) -> Result<Spectrum> {
    guard(k)?;
    let size = 1usize << k;
    let mask = size - 1;
    let twiddle: Vec<ComplexAmplitude> =
        (0..size).map(|i| unit(-(i as f64) / size as f64)).collect();
    let signs: Vec<f64> = (0..size as u64).map(|l| epsilon_k(l, k).as_f64()).collect();
    let scale = 1.0 / size as f64;
    let coeffs = (0..size)
        .into_par_iter()
        .map(|r| {
            let s: ComplexAmplitude = signs
                .iter()
                .enumerate()
                .map(|(l, &sign)| twiddle[(r * l) & mask] * sign)
                .sum();
            s * scale
        })
        .collect();
    Ok(Spectrum { k, coeffs })
}

/// `2^{-k} ∏_{j<k} (1 - e(-r·2^j / 2^k))`; `r` is taken mod `2^k`.
///
/// `k = 0` gives the empty product `1`.
pub fn dft_product(k: u32, r: u64) -> ComplexAmplitude {
    partial_product(k, r, k) * 2f64.powi(-(k as i32))
}

/// `∏_{j<len} (1 - e(-r·2^j / 2^k))`, unnormalized.
fn partial_product(k: u32, r: u64, len: u32) -> ComplexAmplitude {
    let modulus = 1u128 << k;
    let denom = modulus as f64;
    let one = Complex64::new(1.0, 0.0);
    (0..len)
        .map(|j| {
            let idx = ((r as u128) << j) % modulus;
            one - unit(-(idx as f64) / denom)
        })
        .product()
}

/// The length-`(k - t)` factor in `ε̂_k(r) = ε̂_t(r mod 2^t) · tail_factor(k, t, r)`.
pub fn tail_factor(k: u32, t: u32, r: u64) -> ComplexAmplitude {
    assert!(t <= k);
    partial_product(k, r, k - t) * 2f64.powi(-((k - t) as i32))
}

/// `Σ_{r<2^k} |ε̂_k(r)|`.
pub fn coefficient_mass(k: u32) -> Result<f64> {
    guard(k)?;
    let terms: Vec<f64> = (0..1u64 << k)
        .into_par_iter()
        .map(|r| dft_product(k, r).norm())
        .collect();
    Ok(terms.iter().sum())
}

/// `Σ_{r<2^k, r ≡ a (mod 2^t)} |ε̂_k(r)|`.
pub fn residue_class_mass(k: u32, t: u32, a: u64) -> Result<f64> {
    guard(k)?;
    if t > k {
        return Err(Error::Domain(format!("t = {t} exceeds k = {k}")));
    }
    if a >= 1u64 << t {
        return Err(Error::Domain(format!("a = {a} is not below 2^{t}")));
    }
    Ok((0..1u64 << (k - t))
        .map(|r2| dft_product(k, a + (r2 << t)).norm())
        .sum())
}

/// `mass / (k · 2^{θ₀k})`, the ratio bounded by the Corollary 3 constant.
pub fn corollary3_ratio(k: u32) -> Result<f64> {
    Ok(coefficient_mass(k)? / (k as f64 * 2f64.powf(THETA0 * k as f64)))
}

/// Right-hand side shape `2^{(1/2 - c)(k-t)} · |ε̂_t(a)| · k` of Corollary 4.
pub fn corollary4_shape(k: u32, t: u32, a: u64) -> f64 {
    2f64.powf((0.5 - DECAY_C) * (k - t) as f64) * dft_product(t, a).norm() * k as f64
}

/// Largest `lhs / shape` over all `(t, a)` at level `k`, skipping classes
/// where both sides vanish.
pub fn corollary4_ratio(k: u32) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in 0..=k {
        for a in 0..1u64 << t {
            let lhs = residue_class_mass(k, t, a)?;
            let shape = corollary4_shape(k, t, a);
            if shape > 1e-300 {
                worst = worst.max(lhs / shape);
            } else if lhs > 1e-12 {
                return Ok(f64::INFINITY);
            }
        }
    }
    Ok(worst)
}
