use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::validate_generators;
use crate::quadrature::{
    integrate_log_singular, integrate_mellin, integrate_mellin_with_tail, PowerTail,
    QuadratureConfig,
};
use crate::specfun::{bessel_i_scaled, bessel_multi_scaled};

/// Default accuracy target for lead-term quadratures.
pub const LEAD_TOLERANCE: f64 = 1e-10;

/// How a lead-term value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeadMethod {
    /// Mellin integral of scaled Bessel functions.
    MellinBessel,
    /// `log 4 + ∫₀¹ log(Σ sin²(πγw)) dw`.
    LogSinClosedForm,
    /// `arccosh(x/2)`.
    ArccoshClosedForm,
}

/// One route's value and error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteValue {
    pub method: LeadMethod,
    pub value: f64,
    pub error_estimate: f64,
}

/// A lead-term constant with the route that produced it and, when available,
/// the independent route it was checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadTerm {
    pub value: f64,
    pub method: LeadMethod,
    pub error_estimate: f64,
    pub cross_check: Option<RouteValue>,
}

/// `arccosh(x/2) = log((x + √(x² − 4))/2)` for `x ≥ 2`.
pub fn arccosh_lead(x: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("arccosh lead needs x ≥ 2, got {x}")));
    }
    // with y = x/2 − 1: log(1 + y + √(y(y + 2))), accurate as x → 2
    let y = 0.5 * x - 1.0;
    Ok((y + (y * (y + 2.0)).sqrt()).ln_1p())
}

/// `∫₀^∞ (e^{−t} − e^{−κt} (e^{−2t} I_0(2t))^d) dt/t`.
///
/// For `κ > 0` the integrand decays exponentially. For `κ = 0` it decays like
/// `t^{−d/2}`, and the integral past `t = 10⁴` is closed with the Hankel
/// expansion of `(e^{−2t} I_0(2t))^d` to third order.
pub fn bessel_power_mellin(d: u32, kappa: f64, tol: f64) -> Result<RouteValue> {
    if d == 0 || !(kappa >= 0.0) {
        return Err(Error::InvalidArgument("need d ≥ 1 and κ ≥ 0".into()));
    }
    let g = |t: f64| {
        let b = bessel_i_scaled(0, 2.0 * t).unwrap_or(f64::NAN);
        (-t).exp() - (-kappa * t).exp() * b.powi(d as i32)
    };
    let cfg = QuadratureConfig::with_tolerance(tol);
    let r = if kappa > 0.0 {
        integrate_mellin(&g, &cfg)?
    } else {
        integrate_mellin_with_tail(&g, &cfg, &bessel_power_tail(d, 1e4))?
    };
    Ok(RouteValue {
        method: LeadMethod::MellinBessel,
        value: r.value,
        error_estimate: r.error_estimate,
    })
}

/// Tail model `−(4πt)^{−d/2} S(t)^d` with
/// `S(t) = 1 + 1/(16t) + 9/(512t²) + 75/(8192t³)`.
fn bessel_power_tail(d: u32, cutoff: f64) -> PowerTail {
    let s = [1.0, 1.0 / 16.0, 9.0 / 512.0, 75.0 / 8192.0];
    let mut power = vec![1.0, 0.0, 0.0, 0.0];
    for _ in 0..d {
        let mut next = [0.0; 4];
        for (i, a) in power.iter().enumerate() {
            for (j, b) in s.iter().enumerate() {
                if i + j < 4 {
                    next[i + j] += a * b;
                }
            }
        }
        power = next.to_vec();
    }
    let lead = -(4.0 * PI).powf(-0.5 * d as f64);
    PowerTail {
        cutoff,
        terms: power
            .iter()
            .enumerate()
            .map(|(j, &c)| (lead * c, 0.5 * d as f64 + j as f64))
            .collect(),
    }
}

/// Route (a) for circulants: `∫₀^∞ (e^{−t} − e^{−2dt} I_0^Γ(2t)) dt/t`.
///
/// Past `t = 2·10⁴` the Laplace expansion
/// `e^{−2dt} I_0^Γ(2t) ≈ (4πc_Γ t)^{−1/2}(1 + a_1/t + a_2/t²)` closes the
/// integral, with `a_1 = Σγ⁴/(16c²)` and
/// `a_2 = 35(Σγ⁴)²/(1536c⁴) − Σγ⁶/(192c³)`.
pub fn lead_term_mellin(generators: &[u64], tol: f64) -> Result<RouteValue> {
    validate_generators(generators)?;
    let c: f64 = generators.iter().map(|&g| (g * g) as f64).sum();
    let a4: f64 = generators.iter().map(|&g| (g as f64).powi(4)).sum();
    let a6: f64 = generators.iter().map(|&g| (g as f64).powi(6)).sum();
    let a1 = a4 / (16.0 * c * c);
    let a2 = 35.0 * a4 * a4 / (1536.0 * c.powi(4)) - a6 / (192.0 * c.powi(3));
    let lead = -(4.0 * PI * c).powf(-0.5);
    let tail = PowerTail {
        cutoff: 2e4,
        terms: vec![(lead, 0.5), (lead * a1, 1.5), (lead * a2, 2.5)],
    };
    let g = |t: f64| (-t).exp() - bessel_multi_scaled(generators, 0, 2.0 * t).unwrap_or(f64::NAN);
    let r = integrate_mellin_with_tail(&g, &QuadratureConfig::with_tolerance(tol), &tail)?;
    Ok(RouteValue {
        method: LeadMethod::MellinBessel,
        value: r.value,
        error_estimate: r.error_estimate,
    })
}

/// Route (b) for circulants: `log 4 + 2∫₀^{1/2} log(Σ_γ sin²(πγw)) dw`.
/// The integrand is symmetric about `w = 1/2` and singular only at `w = 0`.
pub fn lead_term_log_sin(generators: &[u64], tol: f64) -> Result<RouteValue> {
    validate_generators(generators)?;
    let h = |w: f64| {
        generators
            .iter()
            .map(|&g| (PI * g as f64 * w).sin().powi(2))
            .sum::<f64>()
            .ln()
    };
    let r = integrate_log_singular(&h, 0.0, 0.5, &[], 0.5 * tol)?;
    Ok(RouteValue {
        method: LeadMethod::LogSinClosedForm,
        value: 4f64.ln() + 2.0 * r.value,
        error_estimate: 2.0 * r.error_estimate,
    })
}

/// The circulant lead term `𝓘_d^Γ` at the default tolerance.
pub fn lead_term_circulant(generators: &[u64]) -> Result<LeadTerm> {
    lead_term_circulant_with(generators, LEAD_TOLERANCE)
}

/// Computes `𝓘_d^Γ` by both routes and returns the log-sine value, with the
/// Mellin–Bessel value attached as its cross-check. Disagreement beyond the
/// combined error estimates plus `tol` is an error.
pub fn lead_term_circulant_with(generators: &[u64], tol: f64) -> Result<LeadTerm> {
    let closed = lead_term_log_sin(generators, tol)?;
    let mellin = lead_term_mellin(generators, tol)?;
    let allowed = 2.0 * (closed.error_estimate + mellin.error_estimate) + tol;
    let gap = (closed.value - mellin.value).abs();
    if !(gap <= allowed) {
        return Err(Error::RouteDisagreement(format!(
            "lead term for {generators:?}: log-sine {} vs Mellin–Bessel {} (gap {gap:e}, allowed {allowed:e})",
            closed.value, mellin.value
        )));
    }
    Ok(LeadTerm {
        value: closed.value,
        method: closed.method,
        error_estimate: closed.error_estimate,
        cross_check: Some(mellin),
    })
}

/// `c_d = ∫₀^∞ (e^{−t} − (e^{−2t} I_0(2t))^d) dt/t`.
pub fn c_d(d: u32) -> Result<LeadTerm> {
    c_d_with(d, LEAD_TOLERANCE)
}

pub fn c_d_with(d: u32, tol: f64) -> Result<LeadTerm> {
    let r = bessel_power_mellin(d, 0.0, tol)?;
    Ok(LeadTerm {
        value: r.value,
        method: r.method,
        error_estimate: r.error_estimate,
        cross_check: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::catalan_constant;

    #[test]
    fn arccosh_closed_form() {
        assert_eq!(arccosh_lead(2.0).unwrap(), 0.0);
        assert!((arccosh_lead(4.0).unwrap() - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-15);
        assert!((arccosh_lead(3.0).unwrap() - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-15);
        assert!(arccosh_lead(1.9).is_err());
    }

    #[test]
    fn arccosh_by_quadrature() {
        for x in [2.0, 2.5, 3.0, 4.0, 10.0] {
            let q = bessel_power_mellin(1, x - 2.0, 1e-11).unwrap();
            let exact = arccosh_lead(x).unwrap();
            assert!((q.value - exact).abs() < 1e-9, "x={x}: {} vs {exact}", q.value);
        }
    }

    #[test]
    fn golden_ratio_lead_term() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let l = lead_term_circulant(&[1, 2]).unwrap();
        let cross = l.cross_check.unwrap();
        assert!((l.value - 2.0 * phi.ln()).abs() < 1e-10);
        assert!((cross.value - 2.0 * phi.ln()).abs() < 1e-9);
    }

    #[test]
    fn cycle_lead_term_is_zero() {
        let l = lead_term_circulant(&[1]).unwrap();
        assert!(l.value.abs() < 1e-12);
        assert!(l.cross_check.unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn catalan_lead_and_monotone() {
        let c1 = c_d(1).unwrap().value;
        let c2 = c_d(2).unwrap().value;
        let c3 = c_d(3).unwrap().value;
        assert!(c1.abs() < 1e-10);
        assert!((c2 - 4.0 * catalan_constant() / PI).abs() < 1e-9);
        assert!(c3 > c2);
    }
}
