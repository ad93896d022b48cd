//! Numerical integration for Mellin-type integrals `∫₀^∞ g(t) dt/t`,
//! periodic integrals over a full period, and integrands with logarithmic
//! endpoint singularities.
//!
//! Every routine either meets its tolerance or returns
//! [`Error::Quadrature`](crate::Error::Quadrature) carrying the partial value.

mod adaptive;
mod mellin;
mod periodic;
mod tanh_sinh;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use mellin::{integrate_mellin, integrate_mellin_with_tail, PowerTail};
pub use periodic::{integrate_periodic, integrate_periodic_even, integrate_periodic_even_from};

/// Tolerances and limits for [`integrate_mellin`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// The integral is assembled as `∫₀^split + ∫_split^∞`.
    pub split_point: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            split_point: 1.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn with_split(mut self, split_point: f64) -> Self {
        self.split_point = split_point;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if !positive(self.split_point) {
            return Err(Error::InvalidArgument("split point must be positive".into()));
        }
        Ok(())
    }
}

/// Value of an integral with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl IntegralResult {
    pub(crate) fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// `∫₀¹ h(w) dw` for `h` with integrable (logarithmic or weaker) singularities
/// at the endpoints.
pub fn integrate_log_endpoint<H: Fn(f64) -> f64>(h: &H, tol: f64) -> Result<IntegralResult> {
    integrate_log_singular(h, 0.0, 1.0, &[], tol)
}

/// `∫_a^b h(w) dw` where `h` may be singular at `a`, `b` and at the listed
/// interior `breakpoints`. Each piece is handled by a double-exponential rule,
/// which clusters nodes at both ends of the piece.
pub fn integrate_log_singular<H: Fn(f64) -> f64>(
    h: &H,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<IntegralResult> {
    if !(a < b) || !(tol > 0.0) {
        return Err(Error::InvalidArgument("need a < b and tol > 0".into()));
    }
    let mut points = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    points.extend(inner);
    points.push(b);
    let pieces = (points.len() - 1) as f64;
    let mut total = IntegralResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in points.windows(2) {
        let r = tanh_sinh::tanh_sinh(h, w[0], w[1], tol / pieces)?;
        total = total.combine(r);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn log_sine_squared() {
        let r = integrate_log_endpoint(&|w: f64| (PI * w).sin().powi(2).ln(), 1e-12).unwrap();
        assert!((r.value + 2.0 * 2f64.ln()).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn golden_log_integral() {
        let h = |w: f64| ((PI * w).sin().powi(2) + (2.0 * PI * w).sin().powi(2)).ln();
        let r = integrate_log_endpoint(&h, 1e-12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = 2.0 * phi.ln() - 4f64.ln();
        assert!((r.value - expected).abs() < 1e-11, "{} vs {expected}", r.value);
        assert!((r.value + 0.4238).abs() < 1e-4);
    }

    #[test]
    fn constant_integrand() {
        let r = integrate_log_endpoint(&|_| 1.0, 1e-13).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interior_breakpoint() {
        // ∫₀¹ log|w − 1/3| dw
        let exact = (2.0 / 3.0) * (2.0f64 / 3.0).ln() + (1.0 / 3.0) * (1.0f64 / 3.0).ln() - 1.0;
        let r = integrate_log_singular(&|w: f64| (w - 1.0 / 3.0).abs().ln(), 0.0, 1.0, &[1.0 / 3.0], 1e-12)
            .unwrap();
        assert!((r.value - exact).abs() < 1e-11);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        assert!(QuadratureConfig::with_tolerance(0.0).validate().is_err());
        assert!(QuadratureConfig::default().with_split(-1.0).validate().is_err());
    }
}
