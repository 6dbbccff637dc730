//! Exponents appearing in the pointwise and L¹ bounds.

/// Pointwise exponent of the Gelfond product, `ln 3 / ln 4`.
pub const LAMBDA: f64 = 0.792_481_250_360_578_1;

/// L¹ exponent, `log₂ √(2 + √2)`.
pub const THETA0: f64 = 0.885_776_651_581_806;

/// Decay constant `(1 - θ₀) / 2`.
pub const DECAY_C: f64 = (1.0 - THETA0) / 2.0;

/// Default van der Corput parameter `ρ = c / 200`.
pub const RHO_DEFAULT: f64 = DECAY_C / 200.0;

/// `2/√3`, the constant in the pointwise product bound.
pub const GELFOND_CONSTANT: f64 = 1.154_700_538_379_251_7;

/// `(2/√3)·2^{2Qλ}`.
pub fn gelfond_bound(q: u32) -> f64 {
    GELFOND_CONSTANT * 2f64.powf(2.0 * q as f64 * LAMBDA)
}

/// `2^{Qθ₀}`.
pub fn l1_product_bound(q: u32) -> f64 {
    2f64.powf(q as f64 * THETA0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert!((LAMBDA - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
        assert!((THETA0 - (2.0 + 2f64.sqrt()).sqrt().log2()).abs() < 1e-15);
        assert!((GELFOND_CONSTANT - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((LAMBDA - 0.792_481_2).abs() < 1e-7);
        assert!((THETA0 - 0.885_77).abs() < 1e-4);
        assert!(DECAY_C < 0.06);
    }
}
