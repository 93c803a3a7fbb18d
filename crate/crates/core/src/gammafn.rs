//! Gamma function kernel.
//!
//! Every recurrence in this crate needs ratios such as `Γ(mα+1)/Γ((m-1)α+1)`
//! for real `α`, and the raw gammas overflow `f64` long before the ratios do.
//! [`gamma_ratio`] therefore works in log space.
//!
//! Arguments below 10 use a Lanczos approximation (g = 7, 9 terms); from 10
//! up the Stirling series with eight Bernoulli corrections takes over. Integer
//! arguments up to 171 come from a factorial table. Only positive arguments
//! are supported.

use std::f64::consts::PI;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GammaError {
    #[error("gamma argument must be finite and positive, got {0}")]
    Domain(f64),
    #[error("gamma({0}) overflows f64; use log_gamma")]
    Overflow(f64),
}

/// A finite, strictly positive real number: the admissible argument of Γ.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self, GammaError> {
        if value.is_finite() && value > 0.0 {
            Ok(PositiveReal(value))
        } else {
            Err(GammaError::Domain(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PositiveReal {
    type Error = GammaError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        PositiveReal::new(value)
    }
}

/// Largest argument for which Γ is representable as an `f64`.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn factorials() -> &'static [f64; 171] {
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; 171];
        for i in 1..171 {
            t[i] = t[i - 1] * i as f64;
        }
        t
    })
}

fn ln_factorials() -> &'static [f64; 171] {
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let f = factorials();
        let mut t = [0.0; 171];
        for i in 0..171 {
            t[i] = f[i].ln();
        }
        t
    })
}

/// `Some(n - 1)` when `x` is an integer `n` in `1..=171`.
#[inline]
fn factorial_index(x: f64) -> Option<usize> {
    if x.fract() == 0.0 && (1.0..=171.0).contains(&x) {
        Some(x as usize - 1)
    } else {
        None
    }
}

/// Lanczos approximation, valid for x >= 0.5 up to the overflow limit.
fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // Split the power so t^(z+0.5) does not overflow before e^-t brings it back.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * sum * half * (-t).exp() * half
}

fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING_COEFFS {
        series += c * p;
        p *= inv2;
    }
    series
}

fn stirling_ln(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x)
}

/// Stirling in product form, so the result carries no error from exponentiating a large log.
fn stirling(x: f64) -> f64 {
    let half = x.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * half * (-x).exp() * half * stirling_correction(x).exp()
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if let Some(i) = factorial_index(x) {
        return factorials()[i];
    }
    if x < 0.5 {
        return gamma_unchecked(x + 1.0) / x;
    }
    if x < 10.0 {
        return lanczos(x);
    }
    stirling(x)
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if let Some(i) = factorial_index(x) {
        return ln_factorials()[i];
    }
    if x < 0.5 {
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x < 10.0 {
        return lanczos(x).ln();
    }
    stirling_ln(x)
}

/// Γ(x) for `0 < x ≤ 171.62`.
pub fn gamma(x: f64) -> Result<f64, GammaError> {
    let x = PositiveReal::new(x)?.get();
    if x > GAMMA_MAX_ARG {
        return Err(GammaError::Overflow(x));
    }
    Ok(gamma_unchecked(x))
}

/// ln Γ(x) for any finite `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64, GammaError> {
    let x = PositiveReal::new(x)?.get();
    Ok(log_gamma_unchecked(x))
}

/// Γ(a)/Γ(b), computed as `exp(ln Γ(a) − ln Γ(b))` so it stays finite
/// whenever the ratio itself is representable.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64, GammaError> {
    let a = PositiveReal::new(a)?.get();
    let b = PositiveReal::new(b)?.get();
    if a == b {
        return Ok(1.0);
    }
    Ok((log_gamma_unchecked(a) - log_gamma_unchecked(b)).exp())
}
