use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Circulant graph `C_n^Γ`: vertices `ℤ/nℤ`, each `v` joined to `v ± γ` for
/// every generator `γ ∈ Γ`. The first generator is always 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CirculantSpec {
    n: u64,
    generators: Vec<u64>,
}

impl CirculantSpec {
    /// Validates and builds a circulant specification.
    ///
    /// Generators must be sorted, start with 1 and not exceed `⌊n/2⌋`.
    pub fn new(n: u64, generators: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("vertex count must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidSpec("generator set is empty".into()));
        }
        if generators[0] != 1 {
            return Err(Error::InvalidSpec(format!(
                "first generator must be 1, got {}",
                generators[0]
            )));
        }
        if generators.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpec("generators must be sorted ascending".into()));
        }
        let half = n / 2;
        if let Some(&g) = generators.iter().find(|&&g| g > half) {
            return Err(Error::InvalidSpec(format!(
                "generator {g} exceeds floor(n/2) = {half}"
            )));
        }
        Ok(Self { n, generators })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Number of generators `d`; the graph is `2d`-regular.
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self) -> usize {
        2 * self.dimension()
    }

    /// `c_Γ = 1 + Σ γ_i²`, the sum of squared generators.
    pub fn c_gamma(&self) -> u64 {
        generator_c(&self.generators)
    }
}

/// `c_Γ` for a bare generator list `{1, γ_1, …}`.
pub fn generator_c(generators: &[u64]) -> u64 {
    generators.iter().map(|g| g * g).sum()
}

/// Checks a bare generator set `{1, γ_1, …, γ_{d-1}}` independent of `n`.
pub fn validate_generators(generators: &[u64]) -> Result<()> {
    match generators.first() {
        None => Err(Error::InvalidSpec("generator set is empty".into())),
        Some(&g) if g != 1 => Err(Error::InvalidSpec(format!(
            "first generator must be 1, got {g}"
        ))),
        _ if generators.windows(2).any(|w| w[0] > w[1]) => {
            Err(Error::InvalidSpec("generators must be sorted ascending".into()))
        }
        _ => Ok(()),
    }
}

/// Diagonal discrete torus `ℤ^d / diag(ℓ_1, …, ℓ_d) ℤ^d`.
///
/// `split = Some(p)` records that the first `p` sides form the slowly growing
/// (or constant) A-block and the remaining sides the B-block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusSpec {
    sides: Vec<u64>,
    split: Option<usize>,
}

impl TorusSpec {
    pub fn new(sides: Vec<u64>) -> Result<Self> {
        Self::with_split(sides, None)
    }

    pub fn with_split(sides: Vec<u64>, split: Option<usize>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidSpec("torus needs at least one side".into()));
        }
        if sides.contains(&0) {
            return Err(Error::InvalidSpec("torus sides must be positive".into()));
        }
        if let Some(p) = split {
            if p > sides.len() {
                return Err(Error::InvalidSpec(format!(
                    "split index {p} exceeds dimension {}",
                    sides.len()
                )));
            }
        }
        Ok(Self { sides, split })
    }

    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    pub fn split(&self) -> Option<usize> {
        self.split
    }

    pub fn dimension(&self) -> usize {
        self.sides.len()
    }

    pub fn degree(&self) -> usize {
        2 * self.dimension()
    }

    /// `det Λ = Π ℓ_i`, saturating at `u128::MAX`.
    pub fn vertex_count(&self) -> u128 {
        self.sides
            .iter()
            .fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
    }

    /// Sides of the A-block (empty when no split is recorded).
    pub fn a_block(&self) -> &[u64] {
        &self.sides[..self.split.unwrap_or(0)]
    }

    /// Sides of the B-block (all sides when no split is recorded).
    pub fn b_block(&self) -> &[u64] {
        &self.sides[self.split.unwrap_or(0)..]
    }
}

/// Either kind of graph handled by the spectrum and counting routines.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphSpec {
    Circulant(CirculantSpec),
    Torus(TorusSpec),
}

impl GraphSpec {
    pub fn vertex_count(&self) -> u128 {
        match self {
            GraphSpec::Circulant(c) => c.n() as u128,
            GraphSpec::Torus(t) => t.vertex_count(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            GraphSpec::Circulant(c) => c.dimension(),
            GraphSpec::Torus(t) => t.dimension(),
        }
    }

    /// Generator steps as signed offsets in a mixed-radix vertex numbering.
    ///
    /// Vertex `v` is joined to `v + s` and `v − s` for each returned step,
    /// where addition is componentwise modulo the radices.
    pub(crate) fn radices_and_steps(&self) -> (Vec<u64>, Vec<Vec<u64>>) {
        match self {
            GraphSpec::Circulant(c) => (
                vec![c.n()],
                c.generators().iter().map(|&g| vec![g % c.n()]).collect(),
            ),
            GraphSpec::Torus(t) => {
                let d = t.dimension();
                let steps = (0..d)
                    .map(|i| {
                        let mut e = vec![0u64; d];
                        e[i] = 1 % t.sides()[i];
                        e
                    })
                    .collect();
                (t.sides().to_vec(), steps)
            }
        }
    }
}

impl From<CirculantSpec> for GraphSpec {
    fn from(c: CirculantSpec) -> Self {
        GraphSpec::Circulant(c)
    }
}

impl From<TorusSpec> for GraphSpec {
    fn from(t: TorusSpec) -> Self {
        GraphSpec::Torus(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_generators() {
        assert!(CirculantSpec::new(7, vec![2, 3]).is_err());
        assert!(CirculantSpec::new(7, vec![1, 4]).is_err());
        assert!(CirculantSpec::new(7, vec![1, 3, 2]).is_err());
        assert!(CirculantSpec::new(0, vec![1]).is_err());
        assert!(CirculantSpec::new(7, vec![]).is_err());
        assert!(CirculantSpec::new(8, vec![1, 4]).is_ok());
    }

    #[test]
    fn c_gamma_and_degree() {
        let c = CirculantSpec::new(13, vec![1, 3]).unwrap();
        assert_eq!(c.c_gamma(), 10);
        assert_eq!(c.degree(), 4);
        assert_eq!(CirculantSpec::new(5, vec![1]).unwrap().c_gamma(), 1);
    }

    #[test]
    fn torus_validation_and_blocks() {
        assert!(TorusSpec::new(vec![]).is_err());
        assert!(TorusSpec::new(vec![3, 0]).is_err());
        assert!(TorusSpec::with_split(vec![2, 5], Some(3)).is_err());
        let t = TorusSpec::with_split(vec![2, 5, 7], Some(1)).unwrap();
        assert_eq!(t.vertex_count(), 70);
        assert_eq!(t.a_block(), &[2]);
        assert_eq!(t.b_block(), &[5, 7]);
    }
}
