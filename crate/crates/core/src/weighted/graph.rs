use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Complete graph with symmetric edge weights in `{0, …, p}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PWeightedGraph {
    p: u32,
    m: usize,
    w: Vec<u32>,
}

impl PWeightedGraph {
    pub fn new(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        if p == 0 {
            return Err(invalid("weight ceiling p must be positive"));
        }
        let m = rows.len();
        let mut w = Vec::with_capacity(m * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(invalid(format!("row {i} has {} entries, expected {m}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j && x != 0 {
                    return Err(invalid(format!("nonzero diagonal entry at {i}")));
                }
                if x > p {
                    return Err(invalid(format!("weight {x} at ({i},{j}) exceeds p = {p}")));
                }
                if rows[j][i] != x {
                    return Err(invalid(format!("asymmetric weights at ({i},{j})")));
                }
                w.push(x);
            }
        }
        Ok(PWeightedGraph { p, m, w })
    }

    /// Builds from the upper triangle listed row by row: `w(0,1), w(0,2), …, w(m-2,m-1)`.
    pub fn from_upper_triangle(p: u32, m: usize, upper: &[u32]) -> Result<Self> {
        if upper.len() != m * m.saturating_sub(1) / 2 {
            return Err(invalid(format!(
                "expected {} upper-triangle weights for m = {m}, got {}",
                m * m.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        let mut rows = vec![vec![0u32; m]; m];
        let mut it = upper.iter();
        for i in 0..m {
            for j in i + 1..m {
                let x = *it.next().unwrap();
                rows[i][j] = x;
                rows[j][i] = x;
            }
        }
        Self::new(p, &rows)
    }

    /// Every pair at weight `w`.
    pub fn uniform(p: u32, m: usize, w: u32) -> Result<Self> {
        Self::from_upper_triangle(p, m, &vec![w; m * m.saturating_sub(1) / 2])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn weight(&self, x: usize, y: usize) -> u32 {
        self.w[x * self.m + y]
    }

    /// `w̃(x, y) = p − w(x, y)`.
    pub fn tilde(&self, x: usize, y: usize) -> u32 {
        if x == y {
            0
        } else {
            self.p - self.weight(x, y)
        }
    }

    pub fn upper_triangle(&self) -> Vec<u32> {
        (0..self.m)
            .flat_map(|i| (i + 1..self.m).map(move |j| (i, j)))
            .map(|(i, j)| self.weight(i, j))
            .collect()
    }

    pub fn degree(&self, x: usize) -> u32 {
        (0..self.m).map(|y| self.weight(x, y)).sum()
    }

    pub fn min_degree(&self) -> u32 {
        (0..self.m).map(|x| self.degree(x)).min().unwrap_or(0)
    }

    pub fn is_positive(&self) -> bool {
        self.is_positive_on(full_mask(self.m))
    }

    pub fn is_positive_on(&self, mask: u64) -> bool {
        let vs = mask_to_vec(mask);
        vs.iter()
            .enumerate()
            .all(|(i, &x)| vs[i + 1..].iter().all(|&y| self.weight(x, y) > 0))
    }

    /// `γ_K(x) = Σ_{y ∈ K∖{x}} w̃(x, y)`.
    pub fn gamma(&self, k: u64, x: usize) -> u32 {
        iter_mask(k).filter(|&y| y != x).map(|y| self.tilde(x, y)).sum()
    }

    /// `w̃(K)`, summed over unordered pairs of `K`.
    pub fn tilde_sum(&self, k: u64) -> u32 {
        let vs = mask_to_vec(k);
        vs.iter()
            .enumerate()
            .map(|(i, &x)| vs[i + 1..].iter().map(|&y| self.tilde(x, y)).sum::<u32>())
            .sum()
    }

    /// `p|K| − w̃(K)`, which may be negative.
    pub fn heroic_target(&self, k: u64) -> i64 {
        self.p as i64 * k.count_ones() as i64 - self.tilde_sum(k) as i64
    }

    /// Induced subgraph; vertex `i` of the result is `vs[i]`.
    pub fn induced(&self, vs: &[usize]) -> PWeightedGraph {
        let m = vs.len();
        let mut w = Vec::with_capacity(m * m);
        for &x in vs {
            for &y in vs {
                w.push(if x == y { 0 } else { self.weight(x, y) });
            }
        }
        PWeightedGraph { p: self.p, m, w }
    }

    /// Weight matrix as rows, for the quadratic program.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.w.chunks(self.m.max(1)).map(<[u32]>::to_vec).take(self.m).collect()
    }
}

pub(crate) fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

pub(crate) fn iter_mask(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

pub(crate) fn mask_to_vec(mask: u64) -> Vec<usize> {
    iter_mask(mask).collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PWeightedGraph::new(3, &[vec![0, 4], vec![4, 0]]).is_err());
        assert!(PWeightedGraph::new(3, &[vec![0, 1], vec![2, 0]]).is_err());
        assert!(PWeightedGraph::new(3, &[vec![1, 1], vec![1, 0]]).is_err());
        assert!(PWeightedGraph::from_upper_triangle(3, 3, &[1, 2]).is_err());
        let g = PWeightedGraph::from_upper_triangle(3, 3, &[1, 2, 3]).unwrap();
        assert_eq!(g.weight(2, 0), 2);
        assert_eq!(g.upper_triangle(), vec![1, 2, 3]);
    }

    #[test]
    fn derived_quantities() {
        let g = PWeightedGraph::from_upper_triangle(4, 3, &[4, 2, 1]).unwrap();
        assert_eq!(g.degree(0), 6);
        assert_eq!(g.min_degree(), 3);
        assert_eq!(g.tilde_sum(0b111), 0 + 2 + 3);
        assert_eq!(g.gamma(0b111, 2), 2 + 3);
        assert_eq!(g.gamma(0b011, 2), 2 + 3);
        assert_eq!(g.gamma(0b011, 0), 0);
        assert_eq!(g.heroic_target(0b111), 12 - 5);
        assert!(g.is_positive());
        let h = PWeightedGraph::from_upper_triangle(4, 3, &[4, 0, 1]).unwrap();
        assert!(!h.is_positive());
        assert!(h.is_positive_on(0b110));
        assert_eq!(h.induced(&[2, 0]).weight(0, 1), 0);
    }
}
