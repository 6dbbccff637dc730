//! Frozen constants and regression values.
//!
//! The asymptotic bounds carry unspecified implied constants. Each one is
//! measured once at small scale, rounded up and stored here, then asserted at
//! larger scale. Goldbach checkpoint counts are stored exactly.
//! `tests/fixtures.rs` re-measures every calibrated value.

/// Corollary 1: `max_α |Σ_{n<=X} ε(n)e(αn)| <= C·X^λ·ln X`.
/// Calibrated over `X = 2^j`, `1 <= j <= 8`, on the 10⁴-point grid `α = i/10⁴`.
/// Measured maximum 1.665880740 (at `j = 1`).
pub const COROLLARY1_C: f64 = 1.666;

/// Exponent range used to calibrate [`COROLLARY1_C`].
pub const COROLLARY1_CALIBRATION_J: std::ops::RangeInclusive<u32> = 1..=8;

/// Corollary 3: `Σ_r |ε̂_k(r)| <= C·k·2^{θ₀k}`.
/// Calibrated on `k <= 8`; measured maximum 0.541196100 (at `k = 1`).
pub const COROLLARY3_C: f64 = 0.5412;

/// Corollary 4: `Σ_{r≡a (2^t)} |ε̂_k(r)| <= C·2^{(1/2-c)(k-t)}·|ε̂_t(a)|·k`.
/// Calibrated on `k <= 8` over all `t <= k`, `a < 2^t`; measured maximum 1 (at `k = 1`).
pub const COROLLARY4_C: f64 = 1.0;

/// Largest `k` used to calibrate the spectrum constants.
pub const SPECTRUM_CALIBRATION_K: u32 = 8;

/// Vaughan residual: `|S - (W₁ - W₂ - W₃)| <= C·u·ln X`.
/// For `X < 1024` the cutoff `u = X^{0.1}` is below 2 and the residual is
/// identically zero. Calibrated on `X ∈ {100, 200, 500, 1000, 1024, 2048,
/// 4096, 8192, 16384}` with `α = i/64`; measured maximum 0.0500000 at `X = 1024`.
pub const VAUGHAN_RESIDUAL_C: f64 = 0.0501;

pub const VAUGHAN_CALIBRATION_X: [u64; 9] = [100, 200, 500, 1000, 1024, 2048, 4096, 8192, 16384];

/// `(N, J(N), J₀(N))` at the convergence checkpoints.
pub const GOLDBACH_CHECKPOINTS: [(u64, i64, i64); 3] = [
    (1_001, 6_468, 423),
    (10_001, 255_348, 22_065),
    (100_001, 11_596_623, 1_179_960),
];

/// `|8·J₀/J - 1|` at each checkpoint, in the same order.
pub const GOLDBACH_DEVIATIONS: [f64; 3] = [
    0.476_808_905_380_333_94,
    0.308_708_115_982_893_94,
    0.185_997_509_792_290_35,
];

/// Sieve bound for the convergence checkpoints.
pub const GOLDBACH_SIEVE_LIMIT: u64 = 100_003;

/// `|S₀(0)| / π(N)` at `N = 10⁵` measured 0.063386; bound rounded up.
pub const PARITY_PRIME_BIAS_MAX: f64 = 0.07;

/// `#{p <= 10⁶ : ε(p) = +1}`.
pub const CLASS0_PRIMES_TO_1E6: u64 = 36_867;

/// `|count_class0/π(10⁶) - 1/2|` measured 0.030345; band rounded up.
pub const CLASS0_DENSITY_BAND: f64 = 0.035;
