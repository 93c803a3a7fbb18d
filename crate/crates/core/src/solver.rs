//! Coefficient march for [`EquationSpec`]s and residual verification.
//!
//! Multiplying the equation by `X²` and matching the coefficient of `X^m`
//! gives, for every `m ≥ 2`,
//!
//! ```text
//! L(m) A_m + Σ_t c_t Q^{(t)}_{m−2−s_t} = r_{m−2}
//! L(m) = Γ(mα+1)/Γ((m−2)α+1) + k Γ(mα+1)/Γ((m−1)α+1)
//! ```
//!
//! where `Q^{(t)}` is the series of `F_t(y)`. `Q^{(t)}_j` only needs
//! `A_0..A_j` with `j ≤ m−2`, so each `A_m` follows from earlier ones.
//! `A_0` and `A_1` come from the initial conditions.

use thiserror::Error;

use crate::eqmodel::{validate, EquationSpec, SourceKind, Violation};
use crate::fracseries::{
    frac_deriv, frac_exp, frac_power, linear_combine, Composer, FracSeries, SeriesError, Weights,
};
use crate::gammafn::{gamma, gamma_ratio, GammaError};

/// Coefficients beyond this magnitude abort the march.
pub const OVERFLOW_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid equation: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("truncation order must be at least 2, got {0}")]
    TooFewTerms(usize),
    #[error("lhs factor needs m >= 2, got {0}")]
    OrderTooLow(usize),
    #[error("singular recurrence at order {0}: L(m) = {1}")]
    Singular(usize, f64),
    #[error("coefficient growth overflowed at order {0}")]
    Overflow(usize),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl SolveError {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            SolveError::Singular(..) | SolveError::Overflow(_) | SolveError::Series(_)
        )
    }
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// The bracket multiplying `A_m` in the matched recurrence.
pub fn lhs_factor(m: usize, alpha: f64, k: f64) -> Result<f64, SolveError> {
    if m < 2 {
        return Err(SolveError::OrderTooLow(m));
    }
    let mf = m as f64;
    let top = mf * alpha + 1.0;
    let second = gamma_ratio(top, (mf - 2.0) * alpha + 1.0)?;
    let first = gamma_ratio(top, (mf - 1.0) * alpha + 1.0)?;
    Ok(second + k * first)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub spec: EquationSpec,
    pub series: FracSeries,
    /// Composition series `F_t(y)` per source term, as far as the march used them.
    pub compositions: Vec<FracSeries>,
}

impl SeriesSolution {
    pub fn coeffs(&self) -> &[f64] {
        self.series.coeffs()
    }

    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.series.len() - 1
    }
}

pub fn solve(spec: &EquationSpec, order: usize) -> Result<SeriesSolution, SolveError> {
    validate(spec).map_err(SolveError::Invalid)?;
    if order < 2 {
        return Err(SolveError::TooFewTerms(order));
    }
    let alpha = spec.alpha;
    let weights = Weights::new(alpha, order);

    let mut a = Vec::with_capacity(order + 1);
    a.push(spec.y0);
    a.push(spec.dy0 / gamma(alpha + 1.0)?);

    let mut composers: Vec<Composer> = spec
        .terms
        .iter()
        .map(|t| match t.kind {
            SourceKind::Power(n) => Composer::power(n, spec.y0),
            SourceKind::Exp(lambda) => Composer::exp(lambda),
        })
        .collect();

    for m in 2..=order {
        let l = lhs_factor(m, alpha, spec.k)?;
        if l == 0.0 || !l.is_finite() {
            return Err(SolveError::Singular(m, l));
        }
        let mut rhs = spec.rhs.get(m - 2).copied().unwrap_or(0.0);
        for (term, comp) in spec.terms.iter().zip(composers.iter_mut()) {
            let Some(j) = (m - 2).checked_sub(term.s) else {
                continue;
            };
            comp.extend_to(&weights, &a, j);
            rhs -= term.c * comp.coeffs()[j];
        }
        let am = rhs / l;
        if !am.is_finite() || am.abs() > OVERFLOW_LIMIT {
            return Err(SolveError::Overflow(m));
        }
        a.push(am);
    }

    let compositions = composers
        .iter()
        .map(|c| FracSeries::new(alpha, c.coeffs().to_vec()))
        .collect::<Result<_, _>>()?;
    Ok(SeriesSolution {
        spec: spec.clone(),
        series: FracSeries::new(alpha, a)?,
        compositions,
    })
}

/// Coefficients of `X²·[D^{αα}y + (k/X) D^α y + Σ c_t X^{s_t} F_t(y) − RHS]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub orders: Vec<usize>,
    pub residual_coeffs: Vec<f64>,
    pub max_abs: f64,
    /// Largest single contribution seen at any checked order.
    pub scale: f64,
}

impl ResidualReport {
    /// `max_abs / scale`, or zero when everything vanished.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_abs / self.scale
        } else {
            self.max_abs
        }
    }
}

pub fn residual(sol: &SeriesSolution) -> Result<ResidualReport, SolveError> {
    residual_for(&sol.spec, &sol.series)
}

/// Substitutes an arbitrary truncated series into `spec`.
pub fn residual_for(spec: &EquationSpec, y: &FracSeries) -> Result<ResidualReport, SolveError> {
    let alpha = y.alpha();
    let Some(order) = y.order() else {
        return Ok(ResidualReport {
            orders: vec![],
            residual_coeffs: vec![],
            max_abs: 0.0,
            scale: 0.0,
        });
    };
    let len = order + 1;

    let d1 = frac_deriv(y);
    let d2 = frac_deriv(&d1);
    let mut parts: Vec<(f64, usize, FracSeries)> = vec![(1.0, 2, d2), (spec.k, 1, d1)];
    for t in &spec.terms {
        let f = match t.kind {
            SourceKind::Power(n) => frac_power(y, n)?,
            SourceKind::Exp(lambda) => frac_exp(y, lambda)?,
        };
        parts.push((t.c, 2 + t.s, f));
    }
    // The right-hand side is an exact polynomial, so padding it with zeros is sound.
    let mut rhs = spec.rhs.clone();
    rhs.resize(rhs.len().max(len), 0.0);
    parts.push((-1.0, 2, FracSeries::new(alpha, rhs)?));

    let refs: Vec<(f64, usize, &FracSeries)> = parts.iter().map(|(c, s, f)| (*c, *s, f)).collect();
    let total = linear_combine(&refs)?.truncated(len);

    let mut scale = 0.0_f64;
    for m in 0..total.len() {
        for (c, s, f) in &refs {
            if m >= *s {
                scale = scale.max((c * f.coeffs()[m - s]).abs());
            }
        }
    }
    let residual_coeffs = total.into_coeffs();
    let max_abs = residual_coeffs
        .iter()
        .fold(0.0_f64, |acc, r| acc.max(r.abs()));
    Ok(ResidualReport {
        orders: (0..residual_coeffs.len()).collect(),
        residual_coeffs,
        max_abs,
        scale,
    })
}
