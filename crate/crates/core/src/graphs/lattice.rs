use serde::{Deserialize, Serialize};

use super::spec::CirculantSpec;
use super::spectrum::Spectrum;
use crate::error::{Error, Result};

/// Square integer matrix whose columns generate a sublattice of `ℤ^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMatrix {
    d: usize,
    entries: Vec<i64>,
}

impl LatticeMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidArgument("lattice matrix must be square".into()));
        }
        Ok(Self {
            d,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.d).map(<[i64]>::to_vec).collect()
    }

    /// Determinant via fraction-free elimination on `i128`.
    pub fn determinant(&self) -> i128 {
        let d = self.d;
        let mut m: Vec<Vec<i128>> = self
            .entries
            .chunks(d)
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..d.saturating_sub(1) {
            if m[k][k] == 0 {
                match (k + 1..d).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        sign * m[d - 1][d - 1]
    }
}

/// `Λ_Γ`: first row `(n, −γ_1, …, −γ_{d−1})` over an identity block, so that
/// `ℤ^d / Λ_Γ ℤ^d` with nearest-neighbor edges is isomorphic to `C_n^Γ`.
pub fn circulant_to_lattice(spec: &CirculantSpec) -> LatticeMatrix {
    let d = spec.dimension();
    let mut rows = vec![vec![0i64; d]; d];
    rows[0][0] = spec.n() as i64;
    for (i, &g) in spec.generators().iter().enumerate().skip(1) {
        rows[0][i] = -(g as i64);
        rows[i][i] = 1;
    }
    LatticeMatrix::from_rows(rows).expect("square by construction")
}

/// Spectrum of `ℤ^d / Λ ℤ^d` by exhaustive character enumeration.
///
/// Characters are `x ↦ e^{2πi⟨v, x⟩}` with `v ∈ Λ^{-T} ℤ^d / ℤ^d`. Every such
/// `v` has denominator dividing `D = |det Λ|`, so all `w ∈ [0, D)^d` are
/// scanned and kept when `Λ^T w ≡ 0 (mod D)`. Each kept `v = w / D` gives the
/// eigenvalue `2d − 2 Σ cos(2π v_i)`. Cost is `D^d`; meant for small cases.
pub fn quotient_spectrum_exhaustive(lattice: &LatticeMatrix) -> Result<Spectrum> {
    let d = lattice.dimension();
    let det = lattice.determinant().unsigned_abs();
    if det == 0 {
        return Err(Error::InvalidArgument("singular lattice matrix".into()));
    }
    let big_d = det as u64;
    let total = (big_d as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if total > 50_000_000 {
        return Err(Error::CapExceeded {
            size: total,
            cap: 50_000_000,
        });
    }
    let mut eigenvalues = Vec::with_capacity(det as usize);
    let mut w = vec![0u64; d];
    loop {
        let is_character = (0..d).all(|j| {
            // (Λ^T w)_j = Σ_i Λ_{ij} w_i
            let s: i128 = (0..d)
                .map(|i| lattice.get(i, j) as i128 * w[i] as i128)
                .sum();
            s.rem_euclid(big_d as i128) == 0
        });
        if is_character {
            let lambda: f64 = w
                .iter()
                .map(|&wi| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * wi as f64 / big_d as f64).cos())
                .sum();
            eigenvalues.push(lambda);
        }
        // odometer
        let mut i = d;
        loop {
            if i == 0 {
                return finish(eigenvalues, det);
            }
            i -= 1;
            w[i] += 1;
            if w[i] < big_d {
                break;
            }
            w[i] = 0;
        }
    }
}

fn finish(eigenvalues: Vec<f64>, det: u128) -> Result<Spectrum> {
    if eigenvalues.len() as u128 != det {
        return Err(Error::InvalidArgument(format!(
            "found {} characters, expected {det}",
            eigenvalues.len()
        )));
    }
    Ok(Spectrum::from_eigenvalues(eigenvalues))
}
