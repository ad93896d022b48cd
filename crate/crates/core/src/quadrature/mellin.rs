use serde::{Deserialize, Serialize};

use super::adaptive::integrate_adaptive;
use super::{IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};

/// Furthest the log-time variable `u = ln t` is marched in either direction.
const U_LIMIT: f64 = 230.0;

/// Asymptotic model `g(t) ≈ Σ c_j t^{−p_j}` for `t ≥ cutoff`, used to close a
/// Mellin integral whose integrand decays only algebraically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTail {
    pub cutoff: f64,
    /// Pairs `(c_j, p_j)` with `p_j > 0`.
    pub terms: Vec<(f64, f64)>,
}

impl PowerTail {
    pub fn model(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(c, p)| c * t.powf(-p)).sum()
    }

    /// `∫_cutoff^∞ model(t) dt/t`.
    pub fn tail_integral(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(c, p)| c * self.cutoff.powf(-p) / p)
            .sum()
    }

    fn smallest_exponent(&self) -> f64 {
        self.terms.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min)
    }
}

/// `∫₀^∞ g(t) dt/t` for `g` vanishing at least linearly at `0⁺` and decaying
/// at infinity.
///
/// After `t = e^u` both halves become integrals over `du`. Each half is
/// extended one unit of `u` at a time until `|g|` is negligible; the
/// remaining sliver near `0` is closed with the linear model `g(t) ≈ g(t₀)t/t₀`.
/// Beyond the last upper panel the decay rate is measured: exponential decay
/// needs no correction, algebraic decay `t^{−p}` is closed analytically with
/// the fitted `p`. An integrand that has not decayed by `t = e^{230}` is
/// reported as non-convergent.
pub fn integrate_mellin<G: Fn(f64) -> f64>(g: &G, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    let split = cfg.split_point.ln();
    let lower = lower_half(g, split, cfg)?;
    let upper = upper_half(g, split, None, cfg)?;
    Ok(lower.combine(upper))
}

/// As [`integrate_mellin`], but stops the upper half at `tail.cutoff` and adds
/// the analytic integral of the model beyond it. The model is checked
/// against `g` at the cutoff.
pub fn integrate_mellin_with_tail<G: Fn(f64) -> f64>(
    g: &G,
    cfg: &QuadratureConfig,
    tail: &PowerTail,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if !(tail.cutoff > cfg.split_point) || tail.terms.iter().any(|&(_, p)| !(p > 0.0)) {
        return Err(Error::InvalidArgument(
            "tail cutoff must exceed the split point and exponents must be positive".into(),
        ));
    }
    let split = cfg.split_point.ln();
    let lower = lower_half(g, split, cfg)?;
    let upper = upper_half(g, split, Some(tail), cfg)?;
    Ok(lower.combine(upper))
}

fn target(cfg: &QuadratureConfig, scale: f64) -> f64 {
    cfg.abs_tol.max(cfg.rel_tol * scale)
}

fn lower_half<G: Fn(f64) -> f64>(g: &G, split: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let h = |u: f64| g(u.exp());
    // the integrand may be piecewise with its jump at the split, so the
    // scale is taken just below it and the march starts one unit down
    let scale = h(split - 1e-9).abs();
    let mut lo = split - 1.0;
    let mut evaluations = 1usize;
    // march down until the integrand is negligible relative to the tolerance
    loop {
        let value = h(lo).abs();
        evaluations += 1;
        if value <= 1e-3 * target(cfg, scale) {
            break;
        }
        lo -= 1.0;
        if lo < split - U_LIMIT {
            return Err(Error::Quadrature {
                reason: "integrand does not vanish as t → 0⁺".into(),
                partial: f64::NAN,
                error_estimate: value,
            });
        }
    }
    let panels = ((split - lo).ceil() as usize).max(1);
    let body = integrate_adaptive(
        &h,
        lo,
        split,
        0.5 * cfg.abs_tol,
        0.5 * cfg.rel_tol,
        panels,
        cfg.max_subdivisions,
    )?;
    // ∫₀^{t₀} g dt/t ≈ g(t₀) for linear behaviour near 0
    let sliver = h(lo);
    Ok(IntegralResult {
        value: body.value + sliver,
        error_estimate: body.error_estimate + sliver.abs(),
        evaluations: body.evaluations + evaluations + 1,
    })
}

fn upper_half<G: Fn(f64) -> f64>(
    g: &G,
    split: f64,
    tail: Option<&PowerTail>,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let h = |u: f64| g(u.exp());
    let mut evaluations = 0usize;
    let (hi, closure) = match tail {
        Some(tail) => {
            let hi = tail.cutoff.ln();
            let actual = h(hi);
            evaluations += 1;
            let model = tail.model(tail.cutoff);
            let mismatch = (actual - model).abs();
            // the model error at the cutoff bounds the tail error up to 1/p
            let closure_error = mismatch / tail.smallest_exponent();
            if closure_error > target(cfg, actual.abs()) {
                return Err(Error::Quadrature {
                    reason: format!(
                        "tail model mismatch at t = {}: g = {actual:e}, model = {model:e}",
                        tail.cutoff
                    ),
                    partial: f64::NAN,
                    error_estimate: closure_error,
                });
            }
            (hi, (tail.tail_integral(), closure_error))
        }
        None => {
            let scale = h(split).abs();
            let mut hi = split;
            let mut previous = h(hi);
            evaluations += 1;
            loop {
                let next = h(hi + 1.0);
                evaluations += 1;
                hi += 1.0;
                let small = next.abs() <= 1e-3 * target(cfg, scale);
                if small && next.abs() <= previous.abs() {
                    break;
                }
                if hi > split + U_LIMIT {
                    return Err(Error::Quadrature {
                        reason: "integrand tail does not decay".into(),
                        partial: f64::NAN,
                        error_estimate: next.abs(),
                    });
                }
                previous = next;
            }
            (hi, algebraic_closure(&h, hi, &mut evaluations))
        }
    };
    let panels = ((hi - split).ceil() as usize).max(1);
    let body = integrate_adaptive(
        &h,
        split,
        hi,
        0.5 * cfg.abs_tol,
        0.5 * cfg.rel_tol,
        panels,
        cfg.max_subdivisions,
    )?;
    Ok(IntegralResult {
        value: body.value + closure.0,
        error_estimate: body.error_estimate + closure.1,
        evaluations: body.evaluations + evaluations,
    })
}

/// Fits `h(u) ≈ C e^{−p u}` from two samples past the last panel and returns
/// `(∫_hi^∞ h du, error)`. A fast-decaying tail contributes nothing.
fn algebraic_closure<H: Fn(f64) -> f64>(h: &H, hi: f64, evaluations: &mut usize) -> (f64, f64) {
    let a = h(hi);
    let b = h(hi + 1.0);
    *evaluations += 2;
    if a == 0.0 {
        return (0.0, b.abs());
    }
    let ratio = b / a;
    if ratio <= 0.0 || ratio >= 1.0 {
        return (0.0, a.abs());
    }
    let p = -ratio.ln();
    if p > 20.0 {
        return (0.0, b.abs());
    }
    let closure = a / p;
    (closure, 0.1 * closure.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frullani() {
        let cfg = QuadratureConfig::with_tolerance(1e-12);
        for x in [1.0, 2.0, std::f64::consts::E, 10.0] {
            let r = integrate_mellin(&|t: f64| (-t).exp() - (-x * t).exp(), &cfg).unwrap();
            assert!((r.value - f64::ln(x)).abs() < 1e-11, "x = {x}: {}", r.value);
        }
    }

    #[test]
    fn algebraic_tail_is_closed() {
        // ∫₀^∞ t/(1+t)^{3/2} dt/t = 2
        let cfg = QuadratureConfig::with_tolerance(1e-10);
        let r = integrate_mellin(&|t: f64| t / (1.0 + t).powf(1.5), &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn power_tail_model() {
        // ∫₀^∞ t/(1+t)² dt/t = 1, with t/(1+t)² = t^{-1} − 2t^{-2} + 3t^{-3} − …
        let cfg = QuadratureConfig::with_tolerance(1e-11);
        let tail = PowerTail {
            cutoff: 1e5,
            terms: vec![(1.0, 1.0), (-2.0, 2.0), (3.0, 3.0)],
        };
        let r = integrate_mellin_with_tail(&|t: f64| t / (1.0 + t).powi(2), &cfg, &tail).unwrap();
        assert!((r.value - 1.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn bad_tail_model_is_rejected() {
        let cfg = QuadratureConfig::with_tolerance(1e-11);
        let tail = PowerTail {
            cutoff: 1e3,
            terms: vec![(2.0, 1.0)],
        };
        assert!(integrate_mellin_with_tail(&|t: f64| t / (1.0 + t).powi(2), &cfg, &tail).is_err());
    }

    #[test]
    fn non_decaying_tail_is_reported() {
        let cfg = QuadratureConfig::with_tolerance(1e-10);
        assert!(integrate_mellin(&|t: f64| t / (1.0 + t), &cfg).is_err());
    }

    #[test]
    fn split_invariance() {
        let g = |t: f64| (-t).exp() - (-3.0 * t).exp();
        let tol = 1e-12;
        let base = integrate_mellin(&g, &QuadratureConfig::with_tolerance(tol)).unwrap();
        for split in [0.5, 5.0] {
            let r = integrate_mellin(&g, &QuadratureConfig::with_tolerance(tol).with_split(split)).unwrap();
            assert!((r.value - base.value).abs() <= 2.0 * (base.error_estimate + r.error_estimate).max(tol));
        }
    }
}
