use std::f64::consts::PI;

use super::IntegralResult;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

const MAX_NODES: usize = 1 << 24;

/// `(1/2π) ∫_{−π}^{π} f(w) dw` for a smooth `2π`-periodic `f`.
///
/// Trapezoid sums with the node count doubled until two successive levels
/// differ by at most `tol` twice in a row; for analytic integrands the
/// convergence is geometric.
pub fn integrate_periodic<F: Fn(f64) -> f64>(f: &F, tol: f64) -> Result<IntegralResult> {
    trapezoid_doubling(f, -PI, 2.0 * PI, 8, tol, false)
}

/// `(1/π) ∫_0^π f(w) dw` for a smooth, even, `2π`-periodic `f`; equals
/// [`integrate_periodic`] at half the cost.
pub fn integrate_periodic_even<F: Fn(f64) -> f64>(f: &F, tol: f64) -> Result<IntegralResult> {
    integrate_periodic_even_from(f, 8, tol)
}

/// As [`integrate_periodic_even`], starting from `initial_intervals`
/// subintervals of `[0, π]`; useful when `f` is sharply peaked.
pub fn integrate_periodic_even_from<F: Fn(f64) -> f64>(
    f: &F,
    initial_intervals: usize,
    tol: f64,
) -> Result<IntegralResult> {
    trapezoid_doubling(f, 0.0, PI, initial_intervals.max(2), tol, true)
}

/// Trapezoid on `[start, start + length]`, normalized by `length`.
/// With `closed` the two endpoints get half weight (even-function case);
/// otherwise the rule is the periodic one and `start + length` is skipped.
fn trapezoid_doubling<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    length: f64,
    initial: usize,
    tol: f64,
    closed: bool,
) -> Result<IntegralResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut intervals = initial;
    let mut evaluations = 0usize;
    let mut sum = CompensatedSum::new();
    let eval = |x: f64, evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Quadrature {
                reason: format!("non-finite integrand at {x}"),
                partial: f64::NAN,
                error_estimate: f64::INFINITY,
            })
        }
    };
    if closed {
        sum.add(0.5 * eval(start, &mut evaluations)?);
        sum.add(0.5 * eval(start + length, &mut evaluations)?);
        for k in 1..intervals {
            sum.add(eval(start + length * k as f64 / intervals as f64, &mut evaluations)?);
        }
    } else {
        for k in 0..intervals {
            sum.add(eval(start + length * k as f64 / intervals as f64, &mut evaluations)?);
        }
    }
    let mut previous = sum.value() / intervals as f64;
    let mut quiet_levels = 0;
    let mut diff = f64::INFINITY;
    while intervals < MAX_NODES {
        let finer = 2 * intervals;
        for k in (1..finer).step_by(2) {
            sum.add(eval(start + length * k as f64 / finer as f64, &mut evaluations)?);
        }
        intervals = finer;
        let current = sum.value() / intervals as f64;
        diff = (current - previous).abs();
        previous = current;
        if diff <= tol {
            quiet_levels += 1;
            if quiet_levels == 2 {
                return Ok(IntegralResult {
                    value: current,
                    error_estimate: diff,
                    evaluations,
                });
            }
        } else {
            quiet_levels = 0;
        }
    }
    Err(Error::Quadrature {
        reason: format!("trapezoid did not converge with {MAX_NODES} nodes"),
        partial: previous,
        error_estimate: diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_orthogonality() {
        assert!((integrate_periodic(&|_| 1.0, 1e-14).unwrap().value - 1.0).abs() < 1e-15);
        assert!(integrate_periodic(&|w: f64| (3.0 * w).cos(), 1e-14).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn scaled_bessel_zero_at_two() {
        let r = integrate_periodic(&|w: f64| (2.0 * (w.cos() - 1.0)).exp(), 1e-15).unwrap();
        assert!((r.value - 0.308_508_322_553_671).abs() < 1e-14, "{}", r.value);
        let e = integrate_periodic_even(&|w: f64| (2.0 * (w.cos() - 1.0)).exp(), 1e-15).unwrap();
        assert!((e.value - r.value).abs() < 1e-15);
    }

    #[test]
    fn sharply_peaked_even_integrand() {
        // e^{−t} I_0(t) at t = 1e4 ≈ (2πt)^{−1/2}(1 + 1/(8t) + 9/(128t²))
        let t = 1e4;
        let r = integrate_periodic_even_from(&|w: f64| (t * (w.cos() - 1.0)).exp(), 64, 1e-16).unwrap();
        let expected = (1.0 + 1.0 / (8.0 * t) + 9.0 / (128.0 * t * t)) / (2.0 * PI * t).sqrt();
        assert!(((r.value - expected) / expected).abs() < 1e-11);
    }
}
