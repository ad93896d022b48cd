use super::spec::GraphSpec;
use crate::error::{Error, Result};

/// Dense integer Laplacian `L = D − A` of a multigraph.
///
/// Loops cancel (they add 2 to the degree and 2 to the adjacency diagonal),
/// and a step that reaches the same neighbor twice yields an adjacency of 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLaplacian {
    n: usize,
    entries: Vec<i64>,
}

impl IntLaplacian {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    /// Adds an undirected edge between `u` and `v` (a loop when `u == v`).
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.entries[u * self.n + u] += 1;
        self.entries[v * self.n + v] += 1;
        self.entries[u * self.n + v] -= 1;
        self.entries[v * self.n + u] -= 1;
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut l = Self::zeros(n);
        for &(u, v) in edges {
            l.add_edge(u, v);
        }
        l
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Breadth-first connectivity over the off-diagonal support.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for (v, &x) in self.row(u).iter().enumerate() {
                if v != u && x != 0 && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Builds the Laplacian of a circulant or torus specification.
    ///
    /// Each vertex `v` receives `+2` on the diagonal and `−1` towards
    /// `v + s` and `v − s` for every generator step `s`; the two entries
    /// coincide for steps of order two and vanish for loops.
    pub fn from_spec(spec: &GraphSpec, cap: usize) -> Result<Self> {
        let size = spec.vertex_count();
        if size > cap as u128 {
            return Err(Error::CapExceeded {
                size,
                cap: cap as u128,
            });
        }
        let n = size as usize;
        let (radices, steps) = spec.radices_and_steps();
        let mut l = Self::zeros(n);
        let mut coords = vec![0u64; radices.len()];
        for v in 0..n {
            decode(v as u64, &radices, &mut coords);
            for step in &steps {
                let plus = encode_shifted(&coords, step, &radices, true);
                let minus = encode_shifted(&coords, step, &radices, false);
                l.entries[v * n + v] += 2;
                l.entries[v * n + plus as usize] -= 1;
                l.entries[v * n + minus as usize] -= 1;
            }
        }
        Ok(l)
    }
}

/// Mixed-radix decoding, last coordinate fastest.
fn decode(mut v: u64, radices: &[u64], out: &mut [u64]) {
    for i in (0..radices.len()).rev() {
        out[i] = v % radices[i];
        v /= radices[i];
    }
}

fn encode_shifted(coords: &[u64], step: &[u64], radices: &[u64], forward: bool) -> u64 {
    let mut v = 0u64;
    for i in 0..radices.len() {
        let r = radices[i];
        let c = if forward {
            (coords[i] + step[i]) % r
        } else {
            (coords[i] + r - step[i] % r) % r
        };
        v = v * r + c;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::spec::{CirculantSpec, TorusSpec};

    #[test]
    fn doubled_edge_for_half_generator() {
        let spec: GraphSpec = CirculantSpec::new(4, vec![1, 2]).unwrap().into();
        let l = IntLaplacian::from_spec(&spec, 100).unwrap();
        assert_eq!(l.row(0), &[4, -1, -2, -1]);
        assert!(l.is_connected());
    }

    #[test]
    fn side_one_is_a_loop_and_side_two_doubles() {
        let spec: GraphSpec = TorusSpec::new(vec![1, 3]).unwrap().into();
        let l = IntLaplacian::from_spec(&spec, 100).unwrap();
        assert_eq!(l.row(0), &[2, -1, -1]);
        let spec: GraphSpec = TorusSpec::new(vec![2, 2]).unwrap().into();
        let l = IntLaplacian::from_spec(&spec, 100).unwrap();
        assert_eq!(l.row(0), &[4, -2, -2, 0]);
    }

    #[test]
    fn rows_sum_to_zero() {
        let spec: GraphSpec = TorusSpec::new(vec![3, 4, 2]).unwrap().into();
        let l = IntLaplacian::from_spec(&spec, 100).unwrap();
        for i in 0..l.size() {
            assert_eq!(l.row(i).iter().sum::<i64>(), 0);
            assert_eq!(l.get(i, i), 6);
        }
    }

    #[test]
    fn detects_disconnection() {
        let l = IntLaplacian::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(!l.is_connected());
    }

    #[test]
    fn cap_is_enforced() {
        let spec: GraphSpec = CirculantSpec::new(50, vec![1]).unwrap().into();
        assert!(matches!(
            IntLaplacian::from_spec(&spec, 49),
            Err(Error::CapExceeded { .. })
        ));
    }
}
