//! Equation model for the generalized fractional Lane–Emden family
//!
//! ```text
//! D^{αα} y + (k / x^α) D^α y + Σ_t c_t x^{s_t α} F_t(y) = Σ_j r_j x^{jα}
//! y(0) = y0,  D^α y(0) = dy0
//! ```
//!
//! with `F_t(y)` either `y^n` or `e^{λy}`.

mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_equation, ParseError};

/// The nonlinearity `F(y)` of a source term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    /// `y^n`
    Power(u32),
    /// `e^{λy}`
    Exp(f64),
}

/// One additive term `c · x^{sα} · F(y)` on the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceTerm {
    pub c: f64,
    /// Power of `X = x^α` multiplying the term.
    pub s: usize,
    pub kind: SourceKind,
}

impl SourceTerm {
    pub fn new(c: f64, s: usize, kind: SourceKind) -> Self {
        SourceTerm { c, s, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSpec {
    pub alpha: f64,
    /// Drag coefficient of the singular `(k/x^α) D^α y` term.
    pub k: f64,
    pub terms: Vec<SourceTerm>,
    /// Right-hand side coefficients `r_0..r_d` of `Σ r_j x^{jα}`.
    pub rhs: Vec<f64>,
    pub y0: f64,
    pub dy0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    AlphaOutOfRange(f64),
    NonFinite(String),
    ZeroExpRate { term: usize },
    SingularDrag { k: f64, dy0: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphaOutOfRange(a) => write!(f, "alpha out of range (0, 1]: {a}"),
            Violation::NonFinite(field) => write!(f, "non-finite value in {field}"),
            Violation::ZeroExpRate { term } => {
                write!(f, "exponential rate of term {term} must be nonzero")
            }
            Violation::SingularDrag { k, dy0 } => write!(
                f,
                "nonzero first derivative with singular drag (k = {k}, dy0 = {dy0})"
            ),
        }
    }
}

/// Returns every violated invariant of `spec`.
pub fn validate(spec: &EquationSpec) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if !(spec.alpha > 0.0 && spec.alpha <= 1.0) {
        out.push(Violation::AlphaOutOfRange(spec.alpha));
    }
    for (name, v) in [("k", spec.k), ("y0", spec.y0), ("dy0", spec.dy0)] {
        if !v.is_finite() {
            out.push(Violation::NonFinite(name.to_string()));
        }
    }
    for (i, t) in spec.terms.iter().enumerate() {
        if !t.c.is_finite() {
            out.push(Violation::NonFinite(format!("terms[{i}].c")));
        }
        if let SourceKind::Exp(lambda) = t.kind {
            if !lambda.is_finite() {
                out.push(Violation::NonFinite(format!("terms[{i}].kind.exp")));
            } else if lambda == 0.0 {
                out.push(Violation::ZeroExpRate { term: i });
            }
        }
    }
    for (j, r) in spec.rhs.iter().enumerate() {
        if !r.is_finite() {
            out.push(Violation::NonFinite(format!("rhs[{j}]")));
        }
    }
    if spec.k != 0.0 && spec.dy0 != 0.0 {
        out.push(Violation::SingularDrag {
            k: spec.k,
            dy0: spec.dy0,
        });
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

impl EquationSpec {
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        validate(self)
    }
}

#[derive(Debug, Error)]
#[error("invalid equation JSON: {0}")]
pub struct JsonError(#[from] serde_json::Error);

pub fn spec_to_json(spec: &EquationSpec) -> String {
    serde_json::to_string_pretty(spec).expect("EquationSpec always serializes")
}

pub fn spec_from_json(text: &str) -> Result<EquationSpec, JsonError> {
    Ok(serde_json::from_str(text)?)
}
