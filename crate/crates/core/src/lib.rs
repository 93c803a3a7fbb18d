//! Series solutions of fractional Lane–Emden type equations in the modified
//! Riemann–Liouville calculus.
//!
//! A solution is represented as a truncated series `y = Σ A_m x^{mα}`, i.e. an
//! ordinary power series in `X = x^α`. The crate is layered bottom-up:
//!
//! - [`gammafn`]: overflow-safe Γ, ln Γ and Γ ratios.
//! - [`fracseries`]: the [`FracSeries`] type with gamma-weighted products,
//!   powers, exponentials and the α-derivative.
//! - [`eqmodel`]: [`EquationSpec`], its validation, JSON form and a small
//!   text DSL.
//! - [`solver`]: the coefficient march and residual verification.
//! - [`catalog`]: the seven built-in worked examples with their classical
//!   (α = 1) reference solutions.

pub mod catalog;
pub mod eqmodel;
pub mod fracseries;
pub mod gammafn;
pub mod solver;

pub use catalog::{
    all_examples, classical_reference, entry, example_spec, CatalogEntry, CatalogError, ExampleId,
    Reference, Sign,
};
pub use eqmodel::{
    parse_equation, spec_from_json, spec_to_json, validate, EquationSpec, JsonError, ParseError,
    SourceKind, SourceTerm, Violation,
};
pub use fracseries::{
    evaluate, frac_deriv, frac_exp, frac_power, frac_product, linear_combine, FracSeries,
    SeriesError,
};
pub use gammafn::{gamma, gamma_ratio, log_gamma, GammaError, PositiveReal};
pub use solver::{
    lhs_factor, residual, residual_for, solve, ResidualReport, SeriesSolution, SolveError,
};
