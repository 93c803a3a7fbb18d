//! Truncated fractional power series `Σ_{m=0}^{M} A_m x^{mα}`.
//!
//! Writing `X = x^α`, a [`FracSeries`] is an ordinary coefficient list in `X`
//! tagged with its order `α`. Differentiation follows the power rule
//! `D^α X^m = Γ(mα+1)/Γ((m-1)α+1) X^{m-1}`, and products follow the
//! gamma-weighted Leibniz expansion
//!
//! ```text
//! H_k = Σ_j C(k,j) Γ(jα+1) Γ((k-j)α+1) / Γ(kα+1) · F_j G_{k-j}
//! ```
//!
//! which is the ordinary Cauchy product at α = 1. Powers use the generalized
//! Miller recurrence and exponentials the matching first-order recurrence.
//!
//! Every binary operation truncates to the shorter operand. Nothing is ever
//! zero-padded, so unknown tail coefficients never leak into a result.

use thiserror::Error;

use crate::gammafn::log_gamma_unchecked;

mod twofold;

use twofold::TwoFold;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("fractional order must satisfy 0 < alpha <= 1, got {0}")]
    Alpha(f64),
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("series have different orders: alpha {0} vs {1}")]
    Incompatible(f64, f64),
    #[error("evaluation point must be >= 0, got {0}")]
    NegativeX(f64),
    #[error("linear combination needs at least one term")]
    EmptyCombination,
}

/// A truncated series in `X = x^α` with finite coefficients `A_0..A_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSeries {
    alpha: f64,
    coeffs: Vec<f64>,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), SeriesError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(SeriesError::Alpha(alpha))
    }
}

fn check_finite(coeffs: &[f64]) -> Result<(), SeriesError> {
    match coeffs.iter().position(|c| !c.is_finite()) {
        Some(index) => Err(SeriesError::NonFinite { index }),
        None => Ok(()),
    }
}

impl FracSeries {
    pub fn new(alpha: f64, coeffs: Vec<f64>) -> Result<Self, SeriesError> {
        check_alpha(alpha)?;
        check_finite(&coeffs)?;
        Ok(FracSeries { alpha, coeffs })
    }

    /// The series with no retained coefficients.
    pub fn empty(alpha: f64) -> Result<Self, SeriesError> {
        FracSeries::new(alpha, Vec::new())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Number of retained coefficients, `M + 1`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncation order `M`, or `None` for the empty series.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Keeps at most `len` leading coefficients.
    pub fn truncated(&self, len: usize) -> FracSeries {
        FracSeries {
            alpha: self.alpha,
            coeffs: self.coeffs[..len.min(self.coeffs.len())].to_vec(),
        }
    }

    fn same_alpha(&self, other: &FracSeries) -> Result<(), SeriesError> {
        if self.alpha == other.alpha {
            Ok(())
        } else {
            Err(SeriesError::Incompatible(self.alpha, other.alpha))
        }
    }
}

/// Log-space gamma weights for one `α`.
///
/// Stores `h_i = ln(i!) − ln Γ(iα+1)`. Every weight used by the recurrences
/// is an exponential of a combination of these, and at α = 1 all of them are
/// exactly zero, so the classical recurrences come out exactly.
#[derive(Debug, Clone)]
pub(crate) struct Weights {
    alpha: f64,
    h: Vec<f64>,
    tilt: f64,
}

/// Index at which the tilted table `h_i − i·tilt` returns to zero.
const TILT_ANCHOR: f64 = 256.0;

impl Weights {
    pub(crate) fn new(alpha: f64, max_index: usize) -> Self {
        let tilt = if alpha == 1.0 {
            0.0
        } else {
            (log_gamma_unchecked(TILT_ANCHOR + 1.0)
                - log_gamma_unchecked(TILT_ANCHOR * alpha + 1.0))
                / TILT_ANCHOR
        };
        let mut w = Weights {
            alpha,
            h: Vec::with_capacity(max_index + 1),
            tilt,
        };
        w.reserve(max_index);
        w
    }

    pub(crate) fn reserve(&mut self, max_index: usize) {
        for i in self.h.len()..=max_index {
            let i = i as f64;
            self.h
                .push(log_gamma_unchecked(i + 1.0) - log_gamma_unchecked(i * self.alpha + 1.0));
        }
    }

    /// `C(k,j) Γ(jα+1) Γ((k-j)α+1) / Γ(kα+1)`; symmetric in `j ↔ k−j` bit for bit.
    #[inline]
    pub(crate) fn product(&self, k: usize, j: usize) -> f64 {
        (self.h[k] - (self.h[j] + self.h[k - j])).exp()
    }

    /// `Γ(mα+1) / Γ((m−1)α+1)` for `m ≥ 1`.
    #[inline]
    pub(crate) fn deriv(&self, m: usize) -> f64 {
        m as f64 * (self.h[m - 1] - self.h[m]).exp()
    }

    /// `e^{-(h_j − j·tilt)}`. Multiplying `A_j` by this turns the weighted
    /// product into a plain Cauchy product (up to a geometric rescaling of
    /// the variable that keeps the factors in range). Depends on `α` only.
    #[inline]
    fn down(&self, j: usize) -> f64 {
        (j as f64 * self.tilt - self.h[j]).exp()
    }

    #[inline]
    fn up(&self, j: usize) -> f64 {
        (self.h[j] - j as f64 * self.tilt).exp()
    }
}

/// Coefficient `k` of the gamma-weighted product. Pairs `j` and `k−j` are
/// summed together so the result does not depend on operand order.
pub(crate) fn product_coeff(w: &Weights, f: &[f64], g: &[f64], k: usize) -> f64 {
    let mut sum = 0.0;
    let mut lo = 0;
    let mut hi = k;
    while lo < hi {
        sum += w.product(k, lo) * (f[lo] * g[hi] + f[hi] * g[lo]);
        lo += 1;
        hi -= 1;
    }
    if lo == hi {
        sum += w.product(k, lo) * (f[lo] * g[lo]);
    }
    sum
}

/// Coefficient `m ≥ 1` of `y^n` when `A_0 ≠ 0`, from
/// `Q_m = 1/(m A_0) Σ_{i=1}^{m} w(m,i) ((n+1)i − m) A_i Q_{m−i}`.
///
/// The recurrence amplifies rounding badly for small `α`, so it runs on the
/// rescaled coefficients (`scaled[i] = A_i · down(i)`), where every weight is
/// an exact integer, and accumulates in double-double.
fn miller_coeff(scaled: &[f64], q: &[TwoFold], n: u32, m: usize) -> TwoFold {
    let np1 = i64::from(n) + 1;
    let mut sum = TwoFold::new(0.0);
    for i in 1..=m {
        let factor = (np1 * i as i64 - m as i64) as f64;
        sum = sum.add(q[m - i].mul_f64(scaled[i]).mul_f64(factor));
    }
    sum.div_f64(scaled[0]).div_f64(m as f64)
}

/// Coefficient `l ≥ 1` of `e^{λy}`: `R_l = λ/l Σ_{i=1}^{l} i w(l,i) A_i R_{l−i}`.
fn exp_coeff(w: &Weights, a: &[f64], r: &[f64], lambda: f64, l: usize) -> f64 {
    let mut sum = 0.0;
    for i in 1..=l {
        sum += i as f64 * w.product(l, i) * a[i] * r[l - i];
    }
    lambda * sum / l as f64
}

/// Incrementally built composition series, one coefficient at a time.
///
/// Coefficient `j` only reads `A_0..A_j`, which is what lets the solver grow
/// the composition alongside the solution it is marching.
#[derive(Debug, Clone)]
pub(crate) enum Composer {
    /// `y^0 = 1`.
    Unit {
        out: Vec<f64>,
    },
    /// `y^1 = y`.
    Identity {
        out: Vec<f64>,
    },
    Miller {
        n: u32,
        scaled: Vec<f64>,
        q: Vec<TwoFold>,
        out: Vec<f64>,
    },
    /// `A_0 = 0`: the recurrence divides by `A_0`, so build `y^n` as a fold of
    /// products. `partials[k]` holds `y^{k+2}`.
    Products {
        partials: Vec<Vec<f64>>,
    },
    Exp {
        lambda: f64,
        out: Vec<f64>,
    },
}

impl Composer {
    pub(crate) fn power(n: u32, a0: f64) -> Self {
        match n {
            0 => Composer::Unit { out: Vec::new() },
            1 => Composer::Identity { out: Vec::new() },
            _ if a0 != 0.0 => Composer::Miller {
                n,
                scaled: Vec::new(),
                q: Vec::new(),
                out: Vec::new(),
            },
            _ => Composer::Products {
                partials: vec![Vec::new(); n as usize - 1],
            },
        }
    }

    pub(crate) fn exp(lambda: f64) -> Self {
        Composer::Exp {
            lambda,
            out: Vec::new(),
        }
    }

    pub(crate) fn coeffs(&self) -> &[f64] {
        match self {
            Composer::Unit { out }
            | Composer::Identity { out }
            | Composer::Miller { out, .. }
            | Composer::Exp { out, .. } => out,
            Composer::Products { partials } => partials.last().map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    /// Computes coefficients up to and including index `j`, reading `a[..=j]`.
    pub(crate) fn extend_to(&mut self, w: &Weights, a: &[f64], j: usize) {
        loop {
            let next = self.coeffs().len();
            if next > j {
                return;
            }
            match self {
                Composer::Unit { out } => out.push(if next == 0 { 1.0 } else { 0.0 }),
                Composer::Identity { out } => out.push(a[next]),
                Composer::Miller { n, scaled, q, out } => {
                    scaled.push(a[next] * w.down(next));
                    let v = if next == 0 {
                        (0..*n).fold(TwoFold::new(1.0), |p, _| p.mul_f64(a[0]))
                    } else {
                        miller_coeff(scaled, q, *n, next)
                    };
                    q.push(v);
                    out.push(v.mul_f64(w.up(next)).to_f64());
                }
                Composer::Products { partials } => {
                    for k in 0..partials.len() {
                        let v = if k == 0 {
                            product_coeff(w, a, a, next)
                        } else {
                            product_coeff(w, &partials[k - 1], a, next)
                        };
                        partials[k].push(v);
                    }
                }
                Composer::Exp { lambda, out } => {
                    let v = if next == 0 {
                        (*lambda * a[0]).exp()
                    } else {
                        exp_coeff(w, a, out, *lambda, next)
                    };
                    out.push(v);
                }
            }
        }
    }
}

fn compose(f: &FracSeries, mut composer: Composer) -> Result<FracSeries, SeriesError> {
    if let Some(m) = f.order() {
        let w = Weights::new(f.alpha, m);
        composer.extend_to(&w, &f.coeffs, m);
    }
    FracSeries::new(f.alpha, composer.coeffs().to_vec())
}

/// `Σ c · X^s · F` over the given terms. The result keeps
/// `min(len(F) + s)` coefficients.
pub fn linear_combine(terms: &[(f64, usize, &FracSeries)]) -> Result<FracSeries, SeriesError> {
    let (_, _, first) = terms.first().ok_or(SeriesError::EmptyCombination)?;
    let alpha = first.alpha;
    for (_, _, f) in terms {
        first.same_alpha(f)?;
    }
    let len = terms.iter().map(|(_, s, f)| f.len() + s).min().unwrap_or(0);
    let mut out = vec![0.0; len];
    for &(c, s, f) in terms {
        for (m, slot) in out.iter_mut().enumerate().skip(s) {
            *slot += c * f.coeffs[m - s];
        }
    }
    FracSeries::new(alpha, out)
}

/// Gamma-weighted product of two series of the same order.
pub fn frac_product(f: &FracSeries, g: &FracSeries) -> Result<FracSeries, SeriesError> {
    f.same_alpha(g)?;
    let len = f.len().min(g.len());
    let Some(max) = len.checked_sub(1) else {
        return FracSeries::empty(f.alpha);
    };
    let w = Weights::new(f.alpha, max);
    let coeffs = (0..len)
        .map(|k| product_coeff(&w, &f.coeffs, &g.coeffs, k))
        .collect();
    FracSeries::new(f.alpha, coeffs)
}

/// Series of `y^n`.
///
/// Uses the Miller-type recurrence when `A_0 ≠ 0` and repeated products
/// otherwise; `n = 0` and `n = 1` are handled directly.
pub fn frac_power(f: &FracSeries, n: u32) -> Result<FracSeries, SeriesError> {
    let a0 = f.coeffs.first().copied().unwrap_or(0.0);
    compose(f, Composer::power(n, a0))
}

/// Series of `e^{λy}`.
pub fn frac_exp(f: &FracSeries, lambda: f64) -> Result<FracSeries, SeriesError> {
    compose(f, Composer::exp(lambda))
}

/// α-derivative: `A_m X^m ↦ A_m Γ(mα+1)/Γ((m−1)α+1) X^{m−1}`. The constant
/// term is annihilated and the truncation order drops by one.
pub fn frac_deriv(f: &FracSeries) -> FracSeries {
    let Some(m) = f.order() else {
        return f.clone();
    };
    let w = Weights::new(f.alpha, m);
    let coeffs = (1..f.len()).map(|m| f.coeffs[m] * w.deriv(m)).collect();
    FracSeries {
        alpha: f.alpha,
        coeffs,
    }
}

/// Partial sum `Σ A_m x^{mα}` at `x ≥ 0`, accumulated in ascending order with
/// Neumaier compensation.
pub fn evaluate(f: &FracSeries, x: f64) -> Result<f64, SeriesError> {
    if x.is_nan() || x < 0.0 {
        return Err(SeriesError::NegativeX(x));
    }
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for (m, &a) in f.coeffs.iter().enumerate() {
        let term = if m == 0 {
            a
        } else {
            a * x.powf(m as f64 * f.alpha)
        };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}
