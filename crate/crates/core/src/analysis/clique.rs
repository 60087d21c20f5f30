use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::graph::LabeledGraph;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Largest graph accepted by an uncapped exhaustive search.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 5000;

const ROOT_CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCertificate {
    pub size: usize,
    pub witness: Vec<usize>,
    /// True when `size` is the clique number; false when the search stopped
    /// early after exceeding the cutoff.
    pub exhaustive: bool,
}

/// Maximum clique by branch and bound with greedy-colouring bounds.
///
/// With `cutoff = Some(c)` the search stops as soon as a clique of size
/// `c + 1` is found. The witness is deterministic regardless of thread count.
pub fn max_clique(g: &LabeledGraph, cutoff: Option<usize>) -> Result<CliqueCertificate> {
    let n = g.len();
    if cutoff.is_none() && n > EXHAUSTIVE_VERTEX_LIMIT {
        return Err(Error::SizeLimit(format!(
            "exhaustive clique search capped at {EXHAUSTIVE_VERTEX_LIMIT} vertices (got {n}); pass a cutoff"
        )));
    }
    if n == 0 {
        return Ok(CliqueCertificate { size: 0, witness: vec![], exhaustive: true });
    }
    let target = cutoff.map(|c| c + 1);
    if target == Some(1) {
        return Ok(CliqueCertificate { size: 1, witness: vec![0], exhaustive: false });
    }

    let order = degeneracy_order(g);
    let mut later = BitSet::full(n);
    let mut roots = Vec::with_capacity(n);
    for &v in &order {
        later.remove(v);
        roots.push((v, later.intersection(g.neighbors(v))));
    }

    let shared = AtomicUsize::new(1);
    let mut best: Option<Vec<usize>> = None;
    for chunk in roots.chunks(ROOT_CHUNK) {
        let found: Vec<Vec<usize>> = chunk
            .par_iter()
            .map(|(v, cand)| {
                let mut s = Search { g, shared: &shared, target, best: Vec::new(), done: false };
                let mut clique = vec![*v];
                s.record(&clique);
                s.expand(cand.clone(), &mut clique);
                s.best
            })
            .collect();
        for f in found {
            if best.as_ref().is_none_or(|b| f.len() > b.len()) {
                best = Some(f);
            }
        }
        if let (Some(t), Some(b)) = (target, &best) {
            if b.len() >= t {
                let mut w = b.clone();
                w.sort_unstable();
                return Ok(CliqueCertificate { size: w.len(), witness: w, exhaustive: false });
            }
        }
    }
    let mut w = best.unwrap_or_default();
    w.sort_unstable();
    Ok(CliqueCertificate { size: w.len(), witness: w, exhaustive: true })
}

/// Clique number, for callers that only need the size.
pub fn clique_number(g: &LabeledGraph) -> Result<usize> {
    max_clique(g, None).map(|c| c.size)
}

/// Calls `f` on every maximal clique (Bron–Kerbosch with pivoting) until it
/// returns `false`. Returns whether the enumeration ran to completion.
pub fn for_each_maximal_clique(g: &LabeledGraph, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(g: &LabeledGraph, r: &mut Vec<usize>, mut p: BitSet, mut x: BitSet, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if p.is_empty() {
            return !x.is_empty() || f(r);
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| p.intersection_count(g.neighbors(u)))
            .expect("p is nonempty");
        let mut cand = p.clone();
        cand.difference_with(g.neighbors(pivot));
        for v in cand.iter().collect::<Vec<_>>() {
            r.push(v);
            let ok = rec(g, r, p.intersection(g.neighbors(v)), x.intersection(g.neighbors(v)), f);
            r.pop();
            if !ok {
                return false;
            }
            p.remove(v);
            x.insert(v);
        }
        true
    }
    let n = g.len();
    rec(g, &mut Vec::new(), BitSet::full(n), BitSet::new(n), &mut f)
}

/// Smallest-last order: vertex `i` is adjacent to at most `degeneracy` of the
/// vertices after it.
fn degeneracy_order(g: &LabeledGraph) -> Vec<usize> {
    let n = g.len();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        d = d.min(maxd);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().unwrap();
        if removed[v] || deg[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v).iter() {
            if !removed[u] {
                deg[u] -= 1;
                buckets[deg[u]].push(u);
            }
        }
        d = d.saturating_sub(1);
    }
    order
}

struct Search<'a> {
    g: &'a LabeledGraph,
    shared: &'a AtomicUsize,
    target: Option<usize>,
    best: Vec<usize>,
    done: bool,
}

impl Search<'_> {
    fn record(&mut self, clique: &[usize]) {
        if clique.len() > self.best.len() {
            self.best = clique.to_vec();
            self.shared.fetch_max(clique.len(), Ordering::Relaxed);
            if self.target.is_some_and(|t| clique.len() >= t) {
                self.done = true;
            }
        }
    }

    fn expand(&mut self, mut cand: BitSet, clique: &mut Vec<usize>) {
        let (order, colors) = color_sort(self.g, &cand);
        for i in (0..order.len()).rev() {
            if self.done {
                return;
            }
            let bound = clique.len() + colors[i];
            // Strict against the shared bound so pruning never depends on
            // which thread found an equally large clique first.
            if bound <= self.best.len() || bound < self.shared.load(Ordering::Relaxed) {
                return;
            }
            let v = order[i];
            clique.push(v);
            let next = cand.intersection(self.g.neighbors(v));
            self.record(clique);
            if !next.is_empty() {
                self.expand(next, clique);
            }
            clique.pop();
            cand.remove(v);
        }
    }
}

/// Greedy sequential colouring; returns vertices sorted by colour and the
/// colour (1-based) of each.
fn color_sort(g: &LabeledGraph, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.clone();
    let mut order = Vec::with_capacity(cand.count());
    let mut colors = Vec::with_capacity(order.capacity());
    let mut k = 0;
    while !uncolored.is_empty() {
        k += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.neighbors(v));
            uncolored.remove(v);
            order.push(v);
            colors.push(k);
        }
    }
    (order, colors)
}

/// Whether the vertices of `cand` contain a clique on `k` vertices.
pub(crate) fn has_clique_of_size(g: &LabeledGraph, cand: &BitSet, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if cand.count() < k {
        return false;
    }
    if k == 1 {
        return true;
    }
    let mut rest = cand.clone();
    while let Some(v) = rest.first() {
        rest.remove(v);
        if rest.count() + 1 < k {
            return false;
        }
        if has_clique_of_size(g, &rest.intersection(g.neighbors(v)), k - 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn random_graph(n: usize, p: f64, seed: u64) -> LabeledGraph {
        let mut rng = stream(seed, 0);
        let mut g = LabeledGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Independent oracle: plain recursive enumeration of every clique.
    fn oracle(g: &LabeledGraph) -> usize {
        fn rec(g: &LabeledGraph, cur: &mut Vec<usize>, start: usize, best: &mut usize) {
            *best = (*best).max(cur.len());
            for v in start..g.len() {
                if cur.iter().all(|&u| g.has_edge(u, v)) {
                    cur.push(v);
                    rec(g, cur, v + 1, best);
                    cur.pop();
                }
            }
        }
        let mut best = 0;
        rec(g, &mut Vec::new(), 0, &mut best);
        best
    }

    #[test]
    fn small_examples() {
        assert_eq!(max_clique(&LabeledGraph::complete(4), None).unwrap().size, 4);
        assert_eq!(max_clique(&LabeledGraph::cycle(5), None).unwrap().size, 2);
        let e = max_clique(&LabeledGraph::new(10), None).unwrap();
        assert_eq!((e.size, e.exhaustive), (1, true));
        assert_eq!(max_clique(&LabeledGraph::new(0), None).unwrap().size, 0);
    }

    #[test]
    fn matches_enumeration_oracle() {
        for seed in 0..200u64 {
            let n = 1 + (seed as usize % 20);
            let g = random_graph(n, 0.2 + 0.6 * ((seed % 7) as f64 / 6.0), seed);
            let c = max_clique(&g, None).unwrap();
            assert_eq!(c.size, oracle(&g), "seed {seed}");
            assert!(g.is_clique(&c.witness));
            assert!(c.exhaustive);
        }
    }

    #[test]
    fn cutoff_stops_early() {
        let c = max_clique(&LabeledGraph::complete(10), Some(3)).unwrap();
        assert_eq!(c.size, 4);
        assert!(!c.exhaustive);
        let c = max_clique(&LabeledGraph::cycle(7), Some(3)).unwrap();
        assert_eq!(c.size, 2);
        assert!(c.exhaustive);
    }

    #[test]
    fn witness_independent_of_threads() {
        let g = random_graph(300, 0.5, 42);
        let run = |t| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .unwrap()
                .install(|| max_clique(&g, None).unwrap())
        };
        let a = run(1);
        assert_eq!(a, run(4));
        assert_eq!(a, run(3));
    }

    #[test]
    fn has_clique_agrees() {
        for seed in 0..40u64 {
            let g = random_graph(12, 0.5, seed);
            let w = oracle(&g);
            let all = BitSet::full(12);
            assert!(has_clique_of_size(&g, &all, w));
            assert!(!has_clique_of_size(&g, &all, w + 1));
        }
    }

    #[test]
    fn maximal_cliques_match_brute_force() {
        for seed in 0..40 {
            let n = 4 + (seed as usize % 9);
            let g = random_graph(n, 0.5, 1000 + seed);
            let mut found = Vec::new();
            assert!(for_each_maximal_clique(&g, |c| {
                let mut c = c.to_vec();
                c.sort_unstable();
                found.push(c);
                true
            }));
            found.sort();
            let mut brute = Vec::new();
            for s in 1u32..1 << n {
                let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
                let maximal = (0..n).all(|w| s >> w & 1 == 1 || !vs.iter().all(|&v| g.has_edge(v, w)));
                if g.is_clique(&vs) && maximal {
                    brute.push(vs);
                }
            }
            brute.sort();
            assert_eq!(found, brute);
        }
    }
}
