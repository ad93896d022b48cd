use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bessel::bessel_i_scaled_table;
use crate::error::{Error, Result};
use crate::graphs::{spectrum_capped, GraphSpec, DEFAULT_ENUMERATION_CAP};
use crate::numeric::{cos_two_pi_ratio, CompensatedSum};

/// Certified tail budget for the lattice side of theta inversion.
pub const THETA_TAIL_TOLERANCE: f64 = 1e-12;

/// A theta function value together with how it was truncated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaValue {
    pub t: f64,
    pub value: f64,
    /// Largest Bessel order kept, for lattice-sum evaluations.
    pub truncation: Option<u64>,
    /// Upper bound on everything that was dropped.
    pub tail_bound: f64,
}

/// Upper bound on `Σ_{j>K} e^{−u} I_j(u)`.
///
/// From `e^{−u} I_j(u) ≤ (u/2)^j / j!` the tail is dominated by a geometric
/// series with ratio `(u/2)/(K+2)`; the bound is infinite when that ratio
/// reaches 1.
pub fn bessel_tail_bound(u: f64, k: u64) -> f64 {
    let half = 0.5 * u;
    let ratio = half / (k + 2) as f64;
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    if half == 0.0 {
        return 0.0;
    }
    let log_first = (k + 1) as f64 * half.ln() - (1..=k + 1).map(|j| (j as f64).ln()).sum::<f64>();
    log_first.exp() / (1.0 - ratio)
}

/// Smallest `K` whose [`bessel_tail_bound`] is at most `tol`.
pub fn required_truncation(u: f64, tol: f64) -> u64 {
    let mut k = (0.5 * u).ceil() as u64;
    while bessel_tail_bound(u, k) > tol {
        k += 1;
    }
    k
}

/// `Σ_j e^{−λ_j t}` over the full Laplacian spectrum, summed in index order.
pub fn theta_discrete_spectral(spec: &GraphSpec, t: f64) -> Result<ThetaValue> {
    check_time(t)?;
    let s = spectrum_capped(spec, DEFAULT_ENUMERATION_CAP)?;
    let value = s
        .eigenvalues()
        .iter()
        .map(|&l| (-l * t).exp())
        .collect::<CompensatedSum>()
        .value();
    Ok(ThetaValue {
        t,
        value,
        truncation: None,
        tail_bound: 0.0,
    })
}

/// The lattice side of theta inversion,
/// `|det Λ| Σ_{y ∈ Λℤ^d} Π_i e^{−2t} I_{y_i}(2t)`, keeping `|y_i| ≤ truncation`.
///
/// Every dropped lattice point has some coordinate beyond the truncation, so
/// the dropped mass is at most `|det Λ| · d · 2 · bessel_tail_bound(2t, K)`
/// (a product bound for tori). If that exceeds `1e−12` the call fails and
/// names the truncation that would suffice.
pub fn theta_discrete_bessel(spec: &GraphSpec, t: f64, truncation: u64) -> Result<ThetaValue> {
    check_time(t)?;
    let u = 2.0 * t;
    let bound = bessel_tail_bound(u, truncation);
    let table = bessel_i_scaled_table(truncation as usize, u)?;
    let (value, tail_bound) = match spec {
        GraphSpec::Circulant(c) => (
            circulant_lattice_sum(c.n(), c.generators(), &table),
            c.n() as f64 * c.dimension() as f64 * 2.0 * bound,
        ),
        GraphSpec::Torus(torus) => torus_lattice_product(torus.sides(), &table, bound),
    };
    if !(tail_bound <= THETA_TAIL_TOLERANCE) {
        let needed = required_for(spec, u);
        return Err(Error::Truncation(format!(
            "truncation {truncation} leaves a tail bound of {tail_bound:e} at t = {t}; \
             truncation {needed} is required"
        )));
    }
    Ok(ThetaValue {
        t,
        value,
        truncation: Some(truncation),
        tail_bound,
    })
}

/// [`theta_discrete_bessel`] with the smallest certified truncation.
pub fn theta_discrete_bessel_auto(spec: &GraphSpec, t: f64) -> Result<ThetaValue> {
    check_time(t)?;
    theta_discrete_bessel(spec, t, required_for(spec, 2.0 * t))
}

fn required_for(spec: &GraphSpec, u: f64) -> u64 {
    let scale = match spec {
        GraphSpec::Circulant(c) => c.n() as f64 * c.dimension() as f64 * 2.0,
        GraphSpec::Torus(torus) => {
            // product bound: Π(f_i + e_i) − Π f_i ≤ Π(ℓ_i + e_i) − Π ℓ_i, roughly
            // det · d · max e_i / min ℓ
            let det: f64 = torus.sides().iter().map(|&s| s as f64).product();
            det * torus.dimension() as f64 * 4.0
        }
    };
    required_truncation(u, 0.5 * THETA_TAIL_TOLERANCE / scale)
}

fn circulant_lattice_sum(n: u64, generators: &[u64], table: &[f64]) -> f64 {
    let k = (table.len() - 1) as i64;
    let n_i = n as i64;
    // P[r] = Σ_{j ≡ r (mod n), |j| ≤ K} e^{−u} I_j(u)
    let mut periodized = vec![CompensatedSum::new(); n as usize];
    for j in -k..=k {
        periodized[j.rem_euclid(n_i) as usize].add(table[j.unsigned_abs() as usize]);
    }
    let periodized: Vec<f64> = periodized.iter().map(CompensatedSum::value).collect();
    let rest = &generators[1..];
    let mut sum = CompensatedSum::new();
    let mut ks = vec![-k; rest.len()];
    loop {
        let mut weight = 1.0;
        let mut shift = 0i64;
        for (&g, &ki) in rest.iter().zip(&ks) {
            weight *= table[ki.unsigned_abs() as usize];
            shift += g as i64 * ki;
        }
        if weight > 0.0 {
            sum.add(weight * periodized[(-shift).rem_euclid(n_i) as usize]);
        }
        // odometer over (k_2, …, k_d)
        let mut i = ks.len();
        loop {
            if i == 0 {
                return n as f64 * sum.value();
            }
            i -= 1;
            ks[i] += 1;
            if ks[i] <= k {
                break;
            }
            ks[i] = -k;
        }
    }
}

/// `Π_i ℓ_i Σ_{|kℓ_i| ≤ K} e^{−u} I_{kℓ_i}(u)` and a bound on what was dropped.
fn torus_lattice_product(sides: &[u64], table: &[f64], bound: f64) -> (f64, f64) {
    let k = (table.len() - 1) as u64;
    let mut kept = 1.0f64;
    let mut upper = 1.0f64;
    for &side in sides {
        let mut s = CompensatedSum::new();
        s.add(table[0]);
        let mut m = side;
        while m <= k {
            s.add(2.0 * table[m as usize]);
            m += side;
        }
        let factor = side as f64 * s.value();
        kept *= factor;
        upper *= factor + side as f64 * 2.0 * bound;
    }
    (kept, upper - kept)
}

/// `Σ_k e^{−z} I_{x+km}(z)`, truncated with a certified tail below `1e−15`.
pub fn translated_bessel_sum(x: i64, m: u64, z: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let k = required_truncation(z, 1e-16);
    let table = bessel_i_scaled_table(k as usize, z)?;
    let m = m as i64;
    let mut sum = CompensatedSum::new();
    for j in -(k as i64)..=(k as i64) {
        if (j - x).rem_euclid(m) == 0 {
            sum.add(table[j.unsigned_abs() as usize]);
        }
    }
    Ok(sum.value())
}

/// The dual side `(1/m) Σ_j e^{z(cos(2πj/m) − 1)} cos(2πjx/m)`.
pub fn translated_bessel_dual(x: i64, m: u64, z: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let xr = x.rem_euclid(m as i64) as u64;
    let sum: CompensatedSum = (0..m)
        .map(|j| (z * (cos_two_pi_ratio(j, m) - 1.0)).exp() * cos_two_pi_ratio(j * xr, m))
        .collect();
    Ok(sum.value() / m as f64)
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("time must be positive and finite, got {t}")))
    }
}

/// `2 Σ_{k≥1} e^{−a k²}` summed until terms drop below `1e−18` of the total.
fn gaussian_tail(a: f64) -> f64 {
    let mut sum = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (-a * k * k).exp();
        sum += term;
        if term <= 1e-18 * sum.max(1e-300) || term == 0.0 {
            return 2.0 * sum;
        }
        k += 1.0;
    }
}

/// `Σ_{k∈ℤ} e^{−4π²k²t}`, the eigenvalue form of the circle theta function.
pub fn theta_circle_spectral(t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(1.0 + gaussian_tail(4.0 * PI * PI * t))
}

/// `(4πt)^{−1/2} Σ_{k∈ℤ} e^{−k²/(4t)}`, the heat-kernel form.
pub fn theta_circle_gaussian(t: f64) -> Result<f64> {
    check_time(t)?;
    Ok((1.0 + gaussian_tail(0.25 / t)) / (4.0 * PI * t).sqrt())
}

/// Theta function of the unit circle `ℝ/ℤ`: the eigenvalue form for `t ≥ 1`,
/// the heat-kernel form below.
pub fn theta_circle(t: f64) -> Result<f64> {
    if t >= 1.0 {
        theta_circle_spectral(t)
    } else {
        theta_circle_gaussian(t)
    }
}

/// Theta function of `ℝ^r / diag(sides) ℤ^r`, a product of circle thetas at
/// `t/β_i²`.
pub fn theta_real_torus(sides: &[f64], t: f64) -> Result<f64> {
    check_sides(sides)?;
    sides.iter().try_fold(1.0, |acc, &b| Ok(acc * theta_circle(t / (b * b))?))
}

/// `Θ(t) − 1` without cancellation for large `t`.
pub fn theta_real_torus_minus_one(sides: &[f64], t: f64) -> Result<f64> {
    check_sides(sides)?;
    check_time(t)?;
    let mut acc = 0.0f64;
    for &b in sides {
        let s = t / (b * b);
        let eps = if s >= 0.1 {
            gaussian_tail(4.0 * PI * PI * s)
        } else {
            theta_circle_gaussian(s)? - 1.0
        };
        // (1 + acc)(1 + eps) − 1
        acc = acc + eps + acc * eps;
    }
    Ok(acc)
}

/// `Θ(t) − det(4πt)^{−r/2}` without cancellation for small `t`.
pub fn theta_real_torus_minus_heat(sides: &[f64], t: f64) -> Result<f64> {
    check_sides(sides)?;
    check_time(t)?;
    let mut heat = 1.0f64;
    let mut acc = 0.0f64;
    for &b in sides {
        let s = t / (b * b);
        // Θ_circle(s) = (4πs)^{−1/2}(1 + δ)
        let delta = if s <= 4.0 {
            gaussian_tail(0.25 / s)
        } else {
            theta_circle_spectral(s)? * (4.0 * PI * s).sqrt() - 1.0
        };
        heat *= b / (4.0 * PI * t).sqrt();
        acc = acc + delta + acc * delta;
    }
    Ok(heat * acc)
}

fn check_sides(sides: &[f64]) -> Result<()> {
    if sides.is_empty() || sides.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
        return Err(Error::InvalidArgument("torus sides must be positive and finite".into()));
    }
    Ok(())
}
