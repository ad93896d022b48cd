use serde::{Deserialize, Serialize};

use super::spec::{CirculantSpec, GraphSpec, TorusSpec};
use crate::error::{Error, Result};
use crate::numeric::{sin_pi_ratio, CompensatedSum};

/// Default guard on the number of eigenvalues enumerated for one spectrum.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Eigenvalues closer to zero than this (relative to the degree) count as zero.
const ZERO_TOLERANCE: f64 = 1e-12;

/// Combinatorial Laplacian spectrum in enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    zero_multiplicity: usize,
}

impl Spectrum {
    /// Wraps a list of eigenvalues, counting (numerical) zeros.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Self {
        let scale = eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let zero_multiplicity = eigenvalues
            .iter()
            .filter(|x| x.abs() <= ZERO_TOLERANCE * scale)
            .count();
        Self {
            eigenvalues,
            zero_multiplicity,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn zero_multiplicity(&self) -> usize {
        self.zero_multiplicity
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().copied().collect::<CompensatedSum>().value()
    }

    /// Sorted copy, handy for multiset comparisons.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

/// Closed-form circulant eigenvalues `λ_j = 4 Σ_γ sin²(π γ j / n)`,
/// `j = 0, …, n−1`.
///
/// The sine form equals `2d − 2 Σ cos(2πγj/n)` and keeps full relative
/// accuracy for the small eigenvalues.
pub fn circulant_spectrum(spec: &CirculantSpec) -> Spectrum {
    let n = spec.n();
    let eigenvalues = (0..n)
        .map(|j| circulant_eigenvalue(spec.generators(), n, j))
        .collect();
    Spectrum::from_eigenvalues(eigenvalues)
}

pub(crate) fn circulant_eigenvalue(generators: &[u64], n: u64, j: u64) -> f64 {
    let mut acc = 0.0;
    for &g in generators {
        let s = sin_pi_ratio((g % n) * (j % n) % n, n);
        acc += s * s;
    }
    4.0 * acc
}

/// Torus eigenvalues `λ_m = 4 Σ_i sin²(π m_i / ℓ_i)` over `0 ≤ m_i < ℓ_i`,
/// enumerated lexicographically with the last coordinate fastest.
pub fn torus_spectrum(spec: &TorusSpec) -> Result<Spectrum> {
    torus_spectrum_capped(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn torus_spectrum_capped(spec: &TorusSpec, cap: u128) -> Result<Spectrum> {
    let size = spec.vertex_count();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    // One-dimensional factors; the full spectrum is their Minkowski sum.
    let factors: Vec<Vec<f64>> = spec.sides().iter().map(|&l| side_eigenvalues(l)).collect();
    let mut eigenvalues = vec![0.0f64];
    for f in &factors {
        let mut next = Vec::with_capacity(eigenvalues.len() * f.len());
        for &base in &eigenvalues {
            for &x in f {
                next.push(base + x);
            }
        }
        eigenvalues = next;
    }
    Ok(Spectrum::from_eigenvalues(eigenvalues))
}

/// `4 sin²(π m / ℓ)` for `m = 0, …, ℓ−1`: the cycle of length ℓ, with the
/// conventions that ℓ = 1 is a loop (eigenvalue 0) and ℓ = 2 a doubled edge.
pub fn side_eigenvalues(side: u64) -> Vec<f64> {
    (0..side)
        .map(|m| {
            let s = sin_pi_ratio(m, side);
            4.0 * s * s
        })
        .collect()
}

/// Spectrum of either graph kind.
pub fn spectrum(spec: &GraphSpec) -> Result<Spectrum> {
    spectrum_capped(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn spectrum_capped(spec: &GraphSpec, cap: u128) -> Result<Spectrum> {
    match spec {
        GraphSpec::Circulant(c) => {
            let size = c.n() as u128;
            if size > cap {
                return Err(Error::CapExceeded { size, cap });
            }
            Ok(circulant_spectrum(c))
        }
        GraphSpec::Torus(t) => torus_spectrum_capped(t, cap),
    }
}

/// `log det* = Σ log λ` over the non-zero eigenvalues, accumulated in
/// enumeration order with compensation.
pub fn log_det_star(spectrum: &Spectrum) -> Result<f64> {
    if spectrum.zero_multiplicity() != 1 {
        return Err(Error::DegenerateSpectrum(format!(
            "expected exactly one zero eigenvalue, found {}",
            spectrum.zero_multiplicity()
        )));
    }
    if spectrum.len() < 2 {
        return Err(Error::DegenerateSpectrum("no non-zero eigenvalues".into()));
    }
    let scale = spectrum
        .eigenvalues()
        .iter()
        .fold(1.0f64, |m, x| m.max(x.abs()));
    let mut sum = CompensatedSum::new();
    let mut skipped_zero = false;
    for &lambda in spectrum.eigenvalues() {
        if !skipped_zero && lambda.abs() <= ZERO_TOLERANCE * scale {
            skipped_zero = true;
            continue;
        }
        if lambda <= 0.0 {
            return Err(Error::DegenerateSpectrum(format!(
                "non-positive eigenvalue {lambda}"
            )));
        }
        sum.add(lambda.ln());
    }
    Ok(sum.value())
}

/// Streaming `log det*` of a diagonal torus that never materializes the
/// spectrum: iterates the same lexicographic order as [`torus_spectrum`].
pub fn torus_log_det_star(spec: &TorusSpec, cap: u128) -> Result<f64> {
    let size = spec.vertex_count();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    if size < 2 {
        return Err(Error::DegenerateSpectrum("no non-zero eigenvalues".into()));
    }
    let d = spec.dimension();
    let factors: Vec<Vec<f64>> = spec.sides().iter().map(|&l| side_eigenvalues(l)).collect();
    // Partial sums over all leading coordinates, innermost loop explicit.
    let (outer, last) = factors.split_at(d - 1);
    let last = &last[0];
    let mut prefixes = vec![0.0f64];
    for f in outer {
        let mut next = Vec::with_capacity(prefixes.len() * f.len());
        for &base in &prefixes {
            for &x in f {
                next.push(base + x);
            }
        }
        prefixes = next;
    }
    let mut sum = CompensatedSum::new();
    for (idx, &base) in prefixes.iter().enumerate() {
        let start = usize::from(idx == 0);
        for &x in &last[start..] {
            sum.add((base + x).ln());
        }
    }
    Ok(sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn four_cycle() {
        let s = circulant_spectrum(&CirculantSpec::new(4, vec![1]).unwrap());
        assert!(close(s.eigenvalues(), &[0.0, 2.0, 4.0, 2.0], 1e-14));
        assert_eq!(s.eigenvalues()[0], 0.0);
        assert_eq!(s.zero_multiplicity(), 1);
    }

    #[test]
    fn four_vertices_with_doubled_opposite_edge() {
        let s = circulant_spectrum(&CirculantSpec::new(4, vec![1, 2]).unwrap());
        assert!(close(s.eigenvalues(), &[0.0, 6.0, 4.0, 6.0], 1e-14));
    }

    #[test]
    fn trace_is_degree_sum() {
        let s = circulant_spectrum(&CirculantSpec::new(7, vec![1, 2]).unwrap());
        assert_eq!(s.len(), 7);
        assert!((s.trace() - 28.0).abs() < 1e-12);
    }

    #[test]
    fn torus_examples() {
        let s = torus_spectrum(&TorusSpec::new(vec![2, 2]).unwrap()).unwrap();
        assert!(close(s.eigenvalues(), &[0.0, 4.0, 4.0, 8.0], 1e-14));
        let s = torus_spectrum(&TorusSpec::new(vec![3]).unwrap()).unwrap();
        assert!(close(s.eigenvalues(), &[0.0, 3.0, 3.0], 1e-14));
        let s = torus_spectrum(&TorusSpec::new(vec![1, 4]).unwrap()).unwrap();
        assert!(close(s.eigenvalues(), &[0.0, 2.0, 4.0, 2.0], 1e-14));
    }

    #[test]
    fn torus_cap_is_enforced() {
        let t = TorusSpec::new(vec![1000, 1000]).unwrap();
        assert_eq!(
            torus_spectrum_capped(&t, 999_999),
            Err(Error::CapExceeded {
                size: 1_000_000,
                cap: 999_999
            })
        );
    }

    #[test]
    fn log_det_star_examples() {
        let s = circulant_spectrum(&CirculantSpec::new(4, vec![1]).unwrap());
        assert!((log_det_star(&s).unwrap() - 16f64.ln()).abs() < 1e-14);
        let s = circulant_spectrum(&CirculantSpec::new(7, vec![1, 2]).unwrap());
        assert!((log_det_star(&s).unwrap() - 8281f64.ln()).abs() < 1e-12);
        let s = Spectrum::from_eigenvalues(vec![0.0]);
        assert!(log_det_star(&s).is_err());
        let s = Spectrum::from_eigenvalues(vec![0.0, 0.0, 3.0]);
        assert!(log_det_star(&s).is_err());
        let s = Spectrum::from_eigenvalues(vec![0.0, -1.0, 3.0]);
        assert!(log_det_star(&s).is_err());
    }

    #[test]
    fn streaming_torus_log_det_matches_materialized() {
        let t = TorusSpec::new(vec![3, 5, 4]).unwrap();
        let a = log_det_star(&torus_spectrum(&t).unwrap()).unwrap();
        let b = torus_log_det_star(&t, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn small_eigenvalues_keep_relative_accuracy() {
        let n = 10_000_000u64;
        let s = sin_pi_ratio(1, n);
        let lambda = 4.0 * s * s;
        let expected = (2.0 * std::f64::consts::PI / n as f64).powi(2);
        assert!(((lambda - expected) / expected).abs() < 1e-12);
    }
}
