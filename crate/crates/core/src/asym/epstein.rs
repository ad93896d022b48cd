use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{gamma_half_integer, CompensatedSum, EULER_GAMMA};
use crate::quadrature::{integrate_mellin, QuadratureConfig};
use crate::specfun::{theta_real_torus_minus_heat, theta_real_torus_minus_one};

/// Default bound on the truncation error of [`epstein_zeta_sum`].
pub const EPSTEIN_TOLERANCE: f64 = 1e-10;
/// Lattice points a single Epstein evaluation may visit.
pub const EPSTEIN_POINT_BUDGET: u64 = 40_000_000;

/// Spectral zeta value of a diagonal real torus in its convergent regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsteinValue {
    pub sides: Vec<f64>,
    pub s: f64,
    pub value: f64,
    /// Certified bound on the error of the truncated lattice sum.
    pub tail_bound: f64,
}

/// `ζ(s) = (4π²)^{−s} Σ_{k ≠ 0} (Σ k_i²/m_i²)^{−s}` for `ℝ^r / diag(m) ℤ^r`,
/// `s > r/2`, with truncation error at most `1e−10`.
pub fn epstein_zeta_sum(sides: &[f64], s: f64) -> Result<EpsteinValue> {
    epstein_zeta_sum_with(sides, s, EPSTEIN_TOLERANCE, EPSTEIN_POINT_BUDGET)
}

/// As [`epstein_zeta_sum`] with an explicit tolerance and point budget.
///
/// In one dimension the sum runs to `K` and the rest is the midpoint integral
/// `∫_{K+1/2}^∞ x^{−2s} dx`; the midpoint error is bounded by
/// `(f''(K+½) + |f'(K+½)|)/24`. In higher dimensions the sum covers the ball
/// `|y| ≤ ρ` of the dual points `y = k/m` and adds `det·S_{r−1} ρ^{r−2s}/(2s−r)`.
/// The discrepancy between the lattice sum and that integral comes from cells
/// straddling the sphere and from the variation of `|y|^{−2s}` across a cell;
/// both are bounded in terms of the cell half-diagonal.
pub fn epstein_zeta_sum_with(sides: &[f64], s: f64, tol: f64, budget: u64) -> Result<EpsteinValue> {
    if sides.is_empty() || sides.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::InvalidArgument("torus sides must be positive and finite".into()));
    }
    let r = sides.len();
    if !(2.0 * s > r as f64) {
        return Err(Error::InvalidArgument(format!(
            "Epstein sum needs s > r/2 = {}, got {s}",
            r as f64 / 2.0
        )));
    }
    let prefactor = (4.0 * PI * PI).powf(-s);
    let (sum, bound) = if r == 1 {
        one_dimensional(sides[0], s, tol / prefactor, budget)?
    } else {
        ball_sum(sides, s, tol / prefactor, budget)?
    };
    Ok(EpsteinValue {
        sides: sides.to_vec(),
        s,
        value: prefactor * sum,
        tail_bound: prefactor * bound,
    })
}

fn one_dimensional(m: f64, s: f64, tol: f64, budget: u64) -> Result<(f64, f64)> {
    let p = 2.0 * s;
    // Σ_{k≠0} (k/m)^{−p} = 2 m^p Σ_{k≥1} k^{−p}
    let scale = 2.0 * m.powf(p);
    let bound_at = |k: f64| {
        let x = k + 0.5;
        scale * (p * (p + 1.0) * x.powf(-p - 2.0) + p * x.powf(-p - 1.0)) / 24.0
    };
    let mut k = 16.0f64;
    while bound_at(k) > tol {
        k *= 2.0;
        if k > budget as f64 {
            return Err(Error::Truncation(format!(
                "one-dimensional Epstein sum needs more than {budget} terms"
            )));
        }
    }
    let kk = k as u64;
    let mut sum = CompensatedSum::new();
    // smallest terms first
    for j in (1..=kk).rev() {
        sum.add((j as f64).powf(-p));
    }
    sum.add((k + 0.5).powf(1.0 - p) / (p - 1.0));
    Ok((scale * sum.value(), bound_at(k)))
}

fn ball_sum(sides: &[f64], s: f64, tol: f64, budget: u64) -> Result<(f64, f64)> {
    let r = sides.len();
    let rf = r as f64;
    let volume: f64 = sides.iter().map(|m| 1.0 / m).product();
    let delta = 0.5 * sides.iter().map(|m| 1.0 / (m * m)).sum::<f64>().sqrt();
    let sphere = 2.0 * PI.powf(0.5 * rf) / gamma_half_integer(r as u32);
    let bound_at = |rho: f64| {
        let growth = (rho / (rho - 3.0 * delta)).powf(2.0 * s + 2.0);
        delta * sphere / volume
            * rho.powf(rf - 1.0 - 2.0 * s)
            * (2.0 + 2.0 * s / (2.0 * s + 1.0 - rf))
            * growth
    };
    let mut rho = 8.0 * delta;
    while bound_at(rho) > tol {
        rho *= 1.1;
    }
    let ball_volume = PI.powf(0.5 * rf) / gamma_half_integer(r as u32 + 2) * rho.powf(rf);
    let points = ball_volume / volume;
    if points > budget as f64 {
        return Err(Error::Truncation(format!(
            "Epstein ball sum needs about {points:.3e} points (budget {budget}); \
             raise the tolerance"
        )));
    }
    let limits: Vec<i64> = sides.iter().map(|m| (rho * m).floor() as i64).collect();
    let mut k: Vec<i64> = limits.iter().map(|&l| -l).collect();
    let mut sum = CompensatedSum::new();
    let rho2 = rho * rho;
    loop {
        let norm2: f64 = k
            .iter()
            .zip(sides)
            .map(|(&ki, m)| (ki as f64 / m).powi(2))
            .sum();
        if norm2 > 0.0 && norm2 <= rho2 {
            sum.add(norm2.powf(-s));
        }
        let mut i = r;
        loop {
            if i == 0 {
                let tail = sphere * rho.powf(rf - 2.0 * s) / ((2.0 * s - rf) * volume);
                sum.add(tail);
                return Ok((sum.value(), bound_at(rho)));
            }
            i -= 1;
            k[i] += 1;
            if k[i] <= limits[i] {
                break;
            }
            k[i] = -limits[i];
        }
    }
}

/// `ζ'(0)` of `ℝ^r / diag(sides) ℤ^r`, splitting the Mellin integral at 1.
pub fn epstein_zeta_prime_zero(sides: &[f64]) -> Result<f64> {
    epstein_zeta_prime_zero_split(sides, 1.0, 1e-12)
}

/// `ζ'(0)` with the theta integral split at `c`:
/// `∫₀^c (Θ − V(4πt)^{−r/2}) dt/t − (2/r)V(4πc)^{−r/2} − log c − γ + ∫_c^∞ (Θ − 1) dt/t`,
/// where `V = Π sides` and `γ = −Γ'(1)`. The value does not depend on `c`.
pub fn epstein_zeta_prime_zero_split(sides: &[f64], c: f64, tol: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::InvalidArgument("split point must be positive".into()));
    }
    let r = sides.len() as f64;
    let volume: f64 = sides.iter().product();
    let g = |t: f64| {
        let v = if t < c {
            theta_real_torus_minus_heat(sides, t)
        } else {
            theta_real_torus_minus_one(sides, t)
        };
        v.unwrap_or(f64::NAN)
    };
    let cfg = QuadratureConfig::with_tolerance(tol).with_split(c);
    let integral = integrate_mellin(&g, &cfg)?;
    Ok(integral.value - 2.0 / r * volume * (4.0 * PI * c).powf(-0.5 * r) - c.ln() - EULER_GAMMA)
}
