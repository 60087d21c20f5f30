use serde::Serialize;

use super::clique::has_clique_of_size;
use super::graph::LabeledGraph;
use crate::bitset::BitSet;
use crate::error::{invalid, Result};

/// Bounds on `α_p(G)`, the largest vertex set spanning no `K_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PIndependence {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    /// A `K_p`-free set of size `lower`.
    pub witness: Vec<usize>,
}

/// Exact branch and bound when `n ≤ exact_limit`, otherwise a greedy lower
/// bound paired with the clique-cover upper bound `Σ min(|C_i|, p-1)`.
pub fn p_independence(g: &LabeledGraph, p: usize, exact_limit: usize) -> Result<PIndependence> {
    if p < 2 {
        return Err(invalid(format!("p must be at least 2, got {p}")));
    }
    let n = g.len();
    let greedy = greedy_free_set(g, p);
    let cover = clique_cover(g, &BitSet::full(n));
    let upper = cover_bound(&cover, p);
    if n > exact_limit {
        return Ok(PIndependence { lower: greedy.len(), upper, exact: false, witness: greedy });
    }
    let order: Vec<usize> = cover.into_iter().flatten().collect();
    let mut suffix_bound = vec![0usize; n + 1];
    let mut rest = BitSet::new(n);
    for i in (0..n).rev() {
        rest.insert(order[i]);
        suffix_bound[i] = cover_bound(&clique_cover(g, &rest), p);
    }
    let mut s = Exact {
        g,
        p,
        order,
        suffix_bound,
        best: greedy,
        cur: Vec::new(),
        cur_set: BitSet::new(n),
    };
    s.search(0);
    let mut witness = s.best;
    witness.sort_unstable();
    Ok(PIndependence { lower: witness.len(), upper: witness.len(), exact: true, witness })
}

fn admits(g: &LabeledGraph, set: &BitSet, v: usize, p: usize) -> bool {
    !has_clique_of_size(g, &set.intersection(g.neighbors(v)), p - 1)
}

fn greedy_free_set(g: &LabeledGraph, p: usize) -> Vec<usize> {
    let mut vs: Vec<usize> = (0..g.len()).collect();
    vs.sort_by_key(|&v| (g.degree(v), v));
    let mut set = BitSet::new(g.len());
    let mut out = Vec::new();
    for v in vs {
        if admits(g, &set, v, p) {
            set.insert(v);
            out.push(v);
        }
    }
    out
}

/// Greedy partition of `vs` into cliques.
fn clique_cover(g: &LabeledGraph, vs: &BitSet) -> Vec<Vec<usize>> {
    let mut left = vs.clone();
    let mut cover = Vec::new();
    while let Some(v) = left.first() {
        left.remove(v);
        let mut clique = vec![v];
        let mut cand = left.intersection(g.neighbors(v));
        while let Some(u) = cand.first() {
            cand.remove(u);
            cand.intersect_with(g.neighbors(u));
            left.remove(u);
            clique.push(u);
        }
        cover.push(clique);
    }
    cover
}

fn cover_bound(cover: &[Vec<usize>], p: usize) -> usize {
    cover.iter().map(|c| c.len().min(p - 1)).sum()
}

struct Exact<'a> {
    g: &'a LabeledGraph,
    p: usize,
    order: Vec<usize>,
    suffix_bound: Vec<usize>,
    best: Vec<usize>,
    cur: Vec<usize>,
    cur_set: BitSet,
}

impl Exact<'_> {
    fn search(&mut self, i: usize) {
        if self.cur.len() + self.suffix_bound[i] <= self.best.len() {
            return;
        }
        if i == self.order.len() {
            self.best = self.cur.clone();
            return;
        }
        let v = self.order[i];
        if admits(self.g, &self.cur_set, v, self.p) {
            self.cur.push(v);
            self.cur_set.insert(v);
            self.search(i + 1);
            self.cur.pop();
            self.cur_set.remove(v);
        }
        self.search(i + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &LabeledGraph, p: usize) -> usize {
        let n = g.len();
        (0u32..1 << n)
            .filter(|&m| {
                let set = (0..n).filter(|&i| m >> i & 1 == 1).fold(BitSet::new(n), |mut s, i| {
                    s.insert(i);
                    s
                });
                !has_clique_of_size(g, &set, p)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn examples() {
        let k5 = LabeledGraph::complete(5);
        assert_eq!(p_independence(&k5, 3, 40).unwrap().lower, 2);
        let c5 = LabeledGraph::cycle(5);
        assert_eq!(p_independence(&c5, 2, 40).unwrap().lower, 2);
        assert_eq!(p_independence(&c5, 3, 40).unwrap().lower, 5);
        assert!(p_independence(&c5, 1, 40).is_err());
    }

    #[test]
    fn heuristic_brackets_exact() {
        use crate::rng::stream;
        use rand::Rng;
        for seed in 0..30u64 {
            let mut rng = stream(seed, 9);
            let n = 4 + (seed as usize % 9);
            let mut g = LabeledGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.55) {
                        g.add_edge(u, v);
                    }
                }
            }
            for p in 2..=4 {
                let ex = p_independence(&g, p, 40).unwrap();
                let h = p_independence(&g, p, 0).unwrap();
                assert_eq!(ex.lower, brute(&g, p), "seed {seed} p {p}");
                assert!(h.lower <= ex.lower && ex.lower <= h.upper);
                let set = ex.witness.iter().copied().fold(BitSet::new(n), |mut s, i| {
                    s.insert(i);
                    s
                });
                assert!(!has_clique_of_size(&g, &set, p));
            }
        }
    }
}
