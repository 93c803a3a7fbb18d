//! Shared inputs for the benchmarks.

use fracle_core::FracSeries;

/// Deterministic, slowly decaying test series with a nonzero constant term.
pub fn sample_series(alpha: f64, len: usize) -> FracSeries {
    let coeffs = (0..len)
        .map(|i| {
            let s = if i % 3 == 1 { -1.0 } else { 1.0 };
            s / (1.0 + i as f64).sqrt()
        })
        .collect();
    FracSeries::new(alpha, coeffs).expect("finite coefficients")
}
