use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::laplacian::IntLaplacian;
use super::spec::GraphSpec;
use crate::error::{Error, Result};

/// Default vertex cap for exact determinant evaluation.
pub const DEFAULT_EXACT_CAP: usize = 2000;

/// Exact number of spanning trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeCount {
    #[serde(with = "bigint_string")]
    value: BigInt,
}

impl TreeCount {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn into_inner(self) -> BigInt {
        self.value
    }

    /// Natural logarithm, accurate for counts far beyond `f64` range.
    pub fn ln(&self) -> f64 {
        bigint_ln(&self.value)
    }
}

impl fmt::Display for TreeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl From<BigInt> for TreeCount {
    fn from(value: BigInt) -> Self {
        Self { value }
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `ln |x|` for a non-zero big integer.
pub fn bigint_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(&x.abs()).unwrap_or(f64::INFINITY);
        return f.ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    let f: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap();
    f.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so each division is
/// exact. Rows are swapped when a pivot vanishes.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let mut v = &row[j] * pivot;
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Spanning-tree count of a Laplacian: the determinant of the minor obtained
/// by deleting row and column `deleted`.
pub fn spanning_trees_of_laplacian(l: &IntLaplacian, deleted: usize) -> Result<TreeCount> {
    if !l.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = l.size();
    if n == 1 {
        return Ok(TreeCount::from(BigInt::one()));
    }
    let minor: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| i != deleted)
        .map(|i| {
            (0..n)
                .filter(|&j| j != deleted)
                .map(|j| BigInt::from(l.get(i, j)))
                .collect()
        })
        .collect();
    Ok(TreeCount::from(bareiss_determinant(minor)))
}

/// Exact spanning-tree count of a circulant graph or torus (vertex 0 deleted).
pub fn spanning_tree_count_exact(spec: &GraphSpec) -> Result<TreeCount> {
    spanning_tree_count_exact_capped(spec, DEFAULT_EXACT_CAP)
}

pub fn spanning_tree_count_exact_capped(spec: &GraphSpec, cap: usize) -> Result<TreeCount> {
    let l = IntLaplacian::from_spec(spec, cap)?;
    spanning_trees_of_laplacian(&l, 0)
}
