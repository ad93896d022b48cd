use serde::{Deserialize, Serialize};

use super::epstein::{
    epstein_zeta_prime_zero, epstein_zeta_sum_with, EPSTEIN_POINT_BUDGET, EPSTEIN_TOLERANCE,
};
use super::lead::{arccosh_lead, bessel_power_mellin, c_d, lead_term_circulant, LEAD_TOLERANCE};
use crate::error::{Error, Result};
use crate::graphs::{generator_c, torus_spectrum, validate_generators, TorusSpec};
use crate::numeric::{gamma_half_integer, CompensatedSum};

/// One labelled term of a prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub value: f64,
}

/// Predicted versus measured `log det* Δ` for one graph in a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub family: String,
    pub n: u64,
    pub params: String,
    /// Vertex count of the graph the prediction refers to.
    pub vertices: f64,
    pub predicted_log_det: f64,
    pub exact_log_det: Option<f64>,
    pub residual: Option<f64>,
    pub components: Vec<Component>,
}

impl AsymptoticReport {
    fn new(family: &str, n: u64, params: String, vertices: f64, components: Vec<Component>) -> Self {
        let predicted_log_det = components.iter().map(|c| c.value).collect::<CompensatedSum>().value();
        Self {
            family: family.to_string(),
            n,
            params,
            vertices,
            predicted_log_det,
            exact_log_det: None,
            residual: None,
            components,
        }
    }

    /// Attaches a measured `log det*` and fills `residual = exact − predicted`.
    pub fn with_exact(mut self, exact_log_det: f64) -> Self {
        self.exact_log_det = Some(exact_log_det);
        self.residual = Some(exact_log_det - self.predicted_log_det);
        self
    }

    /// `log τ` implied by the prediction, via `τ = det*/|V|`.
    pub fn predicted_log_tree_count(&self) -> f64 {
        self.predicted_log_det - self.vertices.ln()
    }

    pub fn component(&self, label: &str) -> Option<f64> {
        self.components.iter().find(|c| c.label == label).map(|c| c.value)
    }
}

fn component(label: &str, value: f64) -> Component {
    Component {
        label: label.to_string(),
        value,
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Circulant prediction `n𝓘 + 2 log n − log c_Γ`.
pub fn predict_circulant(n: u64, generators: &[u64]) -> Result<AsymptoticReport> {
    let lead = lead_term_circulant(generators)?;
    predict_circulant_with_lead(n, generators, lead.value)
}

/// As [`predict_circulant`] with a precomputed lead term, so a table over many
/// `n` needs only one quadrature.
pub fn predict_circulant_with_lead(n: u64, generators: &[u64], lead: f64) -> Result<AsymptoticReport> {
    validate_generators(generators)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let nf = n as f64;
    let c = generator_c(generators) as f64;
    let components = vec![
        component("lead", nf * lead),
        component("2log_n", 2.0 * nf.ln()),
        component("-log_c", -c.ln()),
    ];
    Ok(AsymptoticReport::new("circulant", n, join(generators), nf, components))
}

/// Prediction for `ℤ^p/A × ℤ^{d−p}/(nB)` with fixed `A = diag(α)`,
/// `B = diag(β)`:
/// `n^{d−p} det B Σ_j L(λ_j) + 2 log n − ζ'_{ℝ^{d−p}/Bℤ^{d−p}}(0)`, where `λ_j`
/// runs over the spectrum of `ℤ^p/A` and
/// `L(λ) = ∫ (e^{−t} − I_0(2t)^{d−p} e^{−(2(d−p)+λ)t}) dt/t`.
/// For `d − p = 1` the integral is `arccosh(1 + λ/2)` and `ζ'(0) = −2 log β`.
pub fn predict_torus_constant(n: u64, alpha: &[u64], beta: &[u64]) -> Result<AsymptoticReport> {
    if beta.is_empty() || n == 0 {
        return Err(Error::InvalidArgument("need d − p ≥ 1 and n ≥ 1".into()));
    }
    if alpha.iter().chain(beta).any(|&x| x == 0) {
        return Err(Error::InvalidSpec("torus sides must be positive".into()));
    }
    let q = beta.len() as u32;
    let nf = n as f64;
    let det_b: f64 = beta.iter().map(|&b| b as f64).product();
    let eigenvalues = if alpha.is_empty() {
        vec![0.0]
    } else {
        torus_spectrum(&TorusSpec::new(alpha.to_vec())?)?.eigenvalues().to_vec()
    };
    let mut per_vertex = CompensatedSum::new();
    for &lambda in &eigenvalues {
        let l = if q == 1 {
            arccosh_lead(2.0 + lambda)?
        } else {
            bessel_power_mellin(q, lambda, LEAD_TOLERANCE)?.value
        };
        per_vertex.add(l);
    }
    let zeta_prime = if q == 1 {
        -2.0 * det_b.ln()
    } else {
        let sides: Vec<f64> = beta.iter().map(|&b| b as f64).collect();
        epstein_zeta_prime_zero(&sides)?
    };
    let components = vec![
        component("lead", nf.powi(q as i32) * det_b * per_vertex.value()),
        component("2log_n", 2.0 * nf.ln()),
        component("-zeta_prime_0", -zeta_prime),
    ];
    let vertices = alpha.iter().map(|&a| a as f64).product::<f64>() * det_b * nf.powi(q as i32);
    let params = format!("alpha={};beta={}", join(alpha), join(beta));
    Ok(AsymptoticReport::new("torus-constant", n, params, vertices, components))
}

/// Prediction for `ℤ^p/(a_n A) × ℤ^{d−p}/(nB)` with `a_n → ∞` sublinearly:
/// `n^{d−p} a_n^p det(Λ) c_d − (n/a_n)^{d−p} det(Λ)(4π)^{d/2} Γ(d/2) ζ_{ℝ^p/A^{−1}ℤ^p}(d/2)`.
pub fn predict_torus_sublinear(n: u64, a_n: u64, alpha: &[u64], beta: &[u64]) -> Result<AsymptoticReport> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument(
            "the sublinear prediction needs p ≥ 1 (no A-block given)".into(),
        ));
    }
    if beta.is_empty() || n == 0 || a_n == 0 {
        return Err(Error::InvalidArgument("need d − p ≥ 1, n ≥ 1 and a_n ≥ 1".into()));
    }
    if alpha.iter().chain(beta).any(|&x| x == 0) {
        return Err(Error::InvalidSpec("torus sides must be positive".into()));
    }
    let p = alpha.len() as i32;
    let q = beta.len() as i32;
    let d = (p + q) as u32;
    let nf = n as f64;
    let af = a_n as f64;
    let det: f64 = alpha.iter().chain(beta).map(|&x| x as f64).product();
    let lead = nf.powi(q) * af.powi(p) * det * c_d(d)?.value;
    let dual: Vec<f64> = alpha.iter().map(|&a| 1.0 / a as f64).collect();
    let factor = det * (4.0 * std::f64::consts::PI).powf(0.5 * d as f64) * gamma_half_integer(d);
    let zeta = epstein_zeta_sum_with(
        &dual,
        0.5 * d as f64,
        EPSTEIN_TOLERANCE / factor.max(1.0),
        EPSTEIN_POINT_BUDGET,
    )?;
    let constant = factor * zeta.value;
    let components = vec![
        component("lead", lead),
        component("second_order", -(nf / af).powi(q) * constant),
    ];
    let params = format!("alpha={};beta={};a_n={a_n}", join(alpha), join(beta));
    let vertices = det * af.powi(p) * nf.powi(q);
    Ok(AsymptoticReport::new("torus-sublinear", n, params, vertices, components))
}

/// The second-order constant `det(Λ)(4π)^{d/2}Γ(d/2)ζ_{ℝ^p/A^{−1}ℤ^p}(d/2)`
/// that multiplies `−(n/a_n)^{d−p}`.
pub fn sublinear_second_order_constant(alpha: &[u64], beta: &[u64]) -> Result<f64> {
    let report = predict_torus_sublinear(1, 1, alpha, beta)?;
    Ok(-report.component("second_order").expect("always present"))
}

/// Rule producing `a_n` for sublinear families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SublinearRule {
    FloorSqrt,
    FloorLog,
    Constant(u64),
}

impl SublinearRule {
    pub fn apply(self, n: u64) -> u64 {
        match self {
            SublinearRule::FloorSqrt => {
                let mut r = (n as f64).sqrt() as u64;
                while r * r > n {
                    r -= 1;
                }
                while (r + 1) * (r + 1) <= n {
                    r += 1;
                }
                r.max(1)
            }
            SublinearRule::FloorLog => ((n as f64).ln().floor() as u64).max(1),
            SublinearRule::Constant(a) => a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{circulant_spectrum, log_det_star, torus_log_det_star, CirculantSpec};
    use std::f64::consts::PI;

    #[test]
    fn cycle_prediction_is_exact() {
        for n in [3u64, 10, 57, 200] {
            let r = predict_circulant(n, &[1]).unwrap();
            assert!((r.predicted_log_det - 2.0 * (n as f64).ln()).abs() < 1e-11);
            let exact = log_det_star(&circulant_spectrum(&CirculantSpec::new(n, vec![1]).unwrap())).unwrap();
            let r = r.with_exact(exact);
            assert!(r.residual.unwrap().abs() < 1e-11);
        }
    }

    #[test]
    fn fibonacci_family_prediction() {
        let r = predict_circulant(30, &[1, 2]).unwrap();
        let exact = log_det_star(&circulant_spectrum(&CirculantSpec::new(30, vec![1, 2]).unwrap())).unwrap();
        assert!(r.with_exact(exact).residual.unwrap().abs() < 1e-6);
    }

    #[test]
    fn components_sum_to_prediction() {
        let r = predict_circulant(77, &[1, 3]).unwrap();
        let sum: f64 = r.components.iter().map(|c| c.value).sum();
        assert!((sum - r.predicted_log_det).abs() < 1e-9);
    }

    #[test]
    fn torus_constant_trivial_block() {
        let r = predict_torus_constant(40, &[1], &[1]).unwrap();
        assert!((r.predicted_log_det - 2.0 * 40f64.ln()).abs() < 1e-12);
        let exact = torus_log_det_star(&TorusSpec::new(vec![1, 40]).unwrap(), 1 << 20).unwrap();
        assert!(r.with_exact(exact).residual.unwrap().abs() < 1e-10);
    }

    #[test]
    fn torus_constant_residual_decays() {
        let res = |n: u64| {
            let r = predict_torus_constant(n, &[2], &[1]).unwrap();
            let exact = torus_log_det_star(&TorusSpec::new(vec![2, n]).unwrap(), 1 << 20).unwrap();
            r.with_exact(exact).residual.unwrap().abs()
        };
        assert!(res(20) < res(5));
        assert!(res(20) < 1e-9);
    }

    #[test]
    fn torus_constant_beta_constant() {
        let r = predict_torus_constant(10, &[3], &[2]).unwrap();
        assert!((r.component("-zeta_prime_0").unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn sublinear_constants() {
        for (a, b) in [(1u64, 1u64), (2, 3), (3, 1)] {
            let c = sublinear_second_order_constant(&[a], &[b]).unwrap();
            assert!((c - b as f64 / a as f64 * PI / 3.0).abs() < 1e-9, "α={a} β={b}: {c}");
        }
        let c = sublinear_second_order_constant(&[1], &[1, 1]).unwrap();
        assert!((c - 1.202_056_903_159_594 / PI).abs() < 1e-9);
        assert!(predict_torus_sublinear(10, 3, &[], &[1]).is_err());
    }

    #[test]
    fn rules() {
        assert_eq!(SublinearRule::FloorSqrt.apply(10_000), 100);
        assert_eq!(SublinearRule::FloorSqrt.apply(99), 9);
        assert_eq!(SublinearRule::FloorLog.apply(100), 4);
        assert_eq!(SublinearRule::Constant(7).apply(100), 7);
    }
}
