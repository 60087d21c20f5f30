use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::graph::{full_mask, iter_mask, PWeightedGraph};
use crate::error::{invalid, Error, Result};

/// Largest vertex count for exact subset dynamic programming.
pub const EXACT_VERTEX_LIMIT: usize = 20;

/// Vertex order with weights; `size` is the weight total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominatingExtension {
    pub order: Vec<usize>,
    pub weights: Vec<u32>,
    pub size: u32,
}

/// Sorts both ascending and compares pointwise.
pub fn multiset_dominates(a: &[Rational64], b: &[Rational64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(invalid(format!("multiset sizes differ: {} vs {}", a.len(), b.len())));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    Ok(a.iter().zip(&b).all(|(x, y)| x >= y))
}

/// `{c, …, c, a}` with `n − 1` copies of `c = p(a−1)/a + 1`.
pub fn dominance_target(p: u32, a: u32, n: usize) -> Vec<Rational64> {
    let c = Rational64::new(p as i64 * (a as i64 - 1), a as i64) + 1;
    let mut t = vec![c; n.saturating_sub(1)];
    t.push(Rational64::from_integer(a as i64));
    t
}

/// Reference check against the definition, with exact rational targets.
/// `order` may enumerate any subset of the vertices.
pub fn is_dominating_extension(g: &PWeightedGraph, order: &[usize], weights: &[u32]) -> bool {
    if order.len() != weights.len() {
        return false;
    }
    let mut seen = vec![false; g.len()];
    for &v in order {
        if v >= g.len() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    if weights.iter().any(|&a| a == 0 || a > g.p()) {
        return false;
    }
    (1..order.len()).all(|j| {
        let back: Vec<Rational64> =
            order[..j].iter().map(|&u| Rational64::from_integer(g.weight(u, order[j]) as i64)).collect();
        multiset_dominates(&back, &dominance_target(g.p(), weights[j], j)).unwrap()
    })
}

/// Largest admissible weight for a vertex whose backward edge weights are
/// `back`; 0 when none is admissible.
///
/// With the backward weights sorted, dominance reduces to `min ≥ a` and
/// `second-min ≥ p(a−1)/a + 1`, compared here in integers.
pub fn admissible_weight(p: u32, back: impl IntoIterator<Item = u32>) -> u32 {
    let (mut m1, mut m2, mut n) = (u32::MAX, u32::MAX, 0usize);
    for x in back {
        n += 1;
        if x < m1 {
            m2 = m1;
            m1 = x;
        } else if x < m2 {
            m2 = x;
        }
    }
    if n == 0 {
        return p;
    }
    (1..=p)
        .rev()
        .find(|&a| m1 >= a && (n == 1 || (m2 as u64) * a as u64 >= p as u64 * (a as u64 - 1) + a as u64))
        .unwrap_or(0)
}

fn weight_after(g: &PWeightedGraph, pred: u64, v: usize) -> u32 {
    admissible_weight(g.p(), iter_mask(pred).map(|u| g.weight(u, v)))
}

/// Pointwise-maximal weights for a fixed order.
pub fn maximal_dominating_extension(g: &PWeightedGraph, order: &[usize]) -> Result<DominatingExtension> {
    for (j, &v) in order.iter().enumerate() {
        if v >= g.len() || order[..j].contains(&v) {
            return Err(invalid(format!("order is not a list of distinct vertices (at position {j})")));
        }
        if let Some(&u) = order[..j].iter().find(|&&u| g.weight(u, v) == 0) {
            return Err(invalid(format!("zero weight on ordered pair ({u},{v})")));
        }
    }
    let weights: Vec<u32> = (0..order.len())
        .map(|j| admissible_weight(g.p(), order[..j].iter().map(|&u| g.weight(u, order[j]))))
        .collect();
    let size = weights.iter().sum();
    Ok(DominatingExtension { order: order.to_vec(), weights, size })
}

/// Best dominating-extension size of every vertex subset.
///
/// A vertex's maximal weight depends only on the set of its predecessors, so
/// the optimum over all orders satisfies
/// `best(S) = max_{v ∈ S} best(S∖v) + weight(v | S∖v)`.
pub struct ExtensionTable<'a> {
    g: &'a PWeightedGraph,
    /// `-1` marks subsets that are not positive.
    best: Vec<i32>,
    last: Vec<u8>,
}

impl<'a> ExtensionTable<'a> {
    pub fn new(g: &'a PWeightedGraph) -> Result<Self> {
        let m = g.len();
        if m > EXACT_VERTEX_LIMIT {
            return Err(Error::SizeLimit(format!(
                "exact extension search capped at {EXACT_VERTEX_LIMIT} vertices, got {m}"
            )));
        }
        let n = 1usize << m;
        let mut best = vec![-1i32; n];
        let mut last = vec![0u8; n];
        best[0] = 0;
        for s in 1..n as u64 {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            if best[rest as usize] < 0 || iter_mask(rest).any(|u| g.weight(u, low) == 0) {
                continue;
            }
            let mut top = (-1, 0u8);
            for v in iter_mask(s) {
                let pred = s & !(1 << v);
                let val = best[pred as usize] + weight_after(g, pred, v) as i32;
                if val > top.0 {
                    top = (val, v as u8);
                }
            }
            best[s as usize] = top.0;
            last[s as usize] = top.1;
        }
        Ok(ExtensionTable { g, best, last })
    }

    pub fn graph(&self) -> &PWeightedGraph {
        self.g
    }

    /// Largest extension size of `G[S]`, or `None` if `G[S]` is not positive.
    pub fn best(&self, mask: u64) -> Option<u32> {
        let b = self.best[mask as usize];
        (b >= 0).then_some(b as u32)
    }

    /// An optimal extension of `G[S]` in original vertex labels.
    pub fn extension(&self, mask: u64) -> Option<DominatingExtension> {
        self.best(mask)?;
        let mut order = Vec::with_capacity(mask.count_ones() as usize);
        let mut s = mask;
        while s != 0 {
            let v = self.last[s as usize] as usize;
            order.push(v);
            s &= !(1 << v);
        }
        order.reverse();
        let ext = maximal_dominating_extension(self.g, &order).expect("positive subset");
        debug_assert_eq!(Some(ext.size), self.best(mask));
        Some(ext)
    }

    /// The subset with the largest extension, ties to the smallest mask.
    pub fn overall_best(&self) -> (u64, u32) {
        let mut top = (0u64, 0u32);
        for (s, &b) in self.best.iter().enumerate() {
            if b > top.1 as i32 {
                top = (s as u64, b as u32);
            }
        }
        top
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    /// Extension reaching the target, if one was found.
    pub extension: Option<DominatingExtension>,
    /// Largest size found on the full vertex set.
    pub best_size: u32,
    /// True when `best_size` is the optimum over all orders.
    pub exhaustive: bool,
}

/// Whether `G ∈ G_p(q)`: some order of all vertices has a dominating
/// extension of size at least `q`.
pub fn in_g_p_q(g: &PWeightedGraph, q: u32) -> Result<Membership> {
    let m = g.len();
    if !g.is_positive() {
        return Ok(Membership { extension: None, best_size: 0, exhaustive: true });
    }
    let (ext, exhaustive) = if m <= EXACT_VERTEX_LIMIT {
        let table = ExtensionTable::new(g)?;
        (table.extension(full_mask(m)).expect("positive"), true)
    } else {
        (greedy_extension(g), false)
    };
    let best_size = ext.size;
    Ok(Membership { extension: (ext.size >= q).then_some(ext), best_size, exhaustive })
}

/// Heaviest edge first, then repeatedly the vertex with the largest weight.
fn greedy_extension(g: &PWeightedGraph) -> DominatingExtension {
    let m = g.len();
    let mut order = Vec::with_capacity(m);
    if m >= 2 {
        let (mut bu, mut bv, mut bw) = (0, 1, 0);
        for u in 0..m {
            for v in u + 1..m {
                if g.weight(u, v) > bw {
                    (bu, bv, bw) = (u, v, g.weight(u, v));
                }
            }
        }
        order.extend([bu, bv]);
    } else {
        order.extend(0..m);
    }
    let mut used: u64 = order.iter().fold(0, |s, &v| s | 1 << v);
    while order.len() < m {
        let v = (0..m)
            .filter(|&v| used >> v & 1 == 0)
            .max_by_key(|&v| (weight_after(g, used, v), std::cmp::Reverse(v)))
            .unwrap();
        order.push(v);
        used |= 1 << v;
    }
    maximal_dominating_extension(g, &order).expect("positive graph")
}

/// All submasks of `mask`, from `mask` down to 0.
pub(crate) fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> Vec<Rational64> {
        xs.iter().map(|&x| Rational64::from_integer(x)).collect()
    }

    #[test]
    fn multiset_examples() {
        assert!(multiset_dominates(&ints(&[3, 4, 4]), &ints(&[3, 3, 4])).unwrap());
        assert!(!multiset_dominates(&ints(&[3, 4, 4]), &ints(&[2, 2, 5])).unwrap());
        assert!(multiset_dominates(&ints(&[4, 3, 4]), &ints(&[4, 4, 3])).unwrap());
        assert!(multiset_dominates(&ints(&[1]), &ints(&[1, 1])).is_err());
    }

    #[test]
    fn extension_examples() {
        let g = PWeightedGraph::uniform(4, 3, 2).unwrap();
        assert!(!is_dominating_extension(&g, &[0, 1, 2], &[4, 2, 2]));
        assert!(is_dominating_extension(&g, &[0, 1, 2], &[4, 2, 1]));
        let one = PWeightedGraph::uniform(5, 1, 0).unwrap();
        assert!(is_dominating_extension(&one, &[0], &[5]));
        assert!(!is_dominating_extension(&g, &[0, 0, 2], &[4, 2, 1]));
    }

    #[test]
    fn maximal_examples() {
        let g = PWeightedGraph::uniform(4, 3, 4).unwrap();
        assert_eq!(maximal_dominating_extension(&g, &[2, 0, 1]).unwrap().size, 12);
        let g = PWeightedGraph::uniform(4, 3, 3).unwrap();
        assert_eq!(maximal_dominating_extension(&g, &[0, 1, 2]).unwrap().weights, vec![4, 3, 2]);
        let g = PWeightedGraph::uniform(3, 3, 1).unwrap();
        assert_eq!(maximal_dominating_extension(&g, &[0, 1, 2]).unwrap().weights, vec![3, 1, 1]);
        let h = PWeightedGraph::from_upper_triangle(3, 3, &[1, 0, 2]).unwrap();
        assert!(maximal_dominating_extension(&h, &[0, 1, 2]).is_err());
        assert!(maximal_dominating_extension(&h, &[0, 1]).is_ok());
    }

    /// Weight rules stated for `p ∈ {3, 4}`: `p` iff all backward weights are
    /// `p`; `≥ a` iff all are `≥ a` with equality at most once; `≥ 1` iff all
    /// are positive.
    fn rule_weight(p: u32, back: &[u32]) -> u32 {
        if back.iter().all(|&x| x == p) {
            return p;
        }
        for a in (2..p).rev() {
            if back.iter().all(|&x| x >= a) && back.iter().filter(|&&x| x == a).count() <= 1 {
                return a;
            }
        }
        u32::from(back.iter().all(|&x| x >= 1))
    }

    #[test]
    fn small_p_rules_agree() {
        for p in [3u32, 4] {
            for len in 1..=4usize {
                let mut back = vec![1u32; len];
                loop {
                    assert_eq!(admissible_weight(p, back.clone()), rule_weight(p, &back), "{p} {back:?}");
                    let Some(i) = back.iter().position(|&x| x < p) else { break };
                    back[i] += 1;
                    back[..i].iter_mut().for_each(|x| *x = 1);
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let g = PWeightedGraph::from_upper_triangle(3, 2, &[2]).unwrap();
        let r = in_g_p_q(&g, 5).unwrap();
        assert_eq!(r.best_size, 5);
        assert!(r.extension.is_some() && r.exhaustive);
        assert!(in_g_p_q(&g, 6).unwrap().extension.is_none());
        let one = PWeightedGraph::uniform(3, 1, 0).unwrap();
        assert_eq!(in_g_p_q(&one, 3).unwrap().best_size, 3);
    }

    /// Independent oracle: best extension over every permutation.
    fn best_over_orders(g: &PWeightedGraph) -> u32 {
        fn rec(g: &PWeightedGraph, order: &mut Vec<usize>, best: &mut u32) {
            if order.len() == g.len() {
                let w = maximal_dominating_extension(g, order).unwrap();
                assert!(is_dominating_extension(g, &w.order, &w.weights));
                *best = (*best).max(w.size);
                return;
            }
            for v in 0..g.len() {
                if !order.contains(&v) {
                    order.push(v);
                    rec(g, order, best);
                    order.pop();
                }
            }
        }
        let mut best = 0;
        rec(g, &mut Vec::new(), &mut best);
        best
    }

    fn rational_multiset(n: usize) -> impl Strategy<Value = Vec<Rational64>> {
        prop::collection::vec((0i64..20, 1i64..5).prop_map(|(a, b)| Rational64::new(a, b)), n)
    }

    proptest! {
        #[test]
        fn dominance_is_partial_order(
            (a, b, c) in (1usize..6).prop_flat_map(|n| (rational_multiset(n), rational_multiset(n), rational_multiset(n)))
        ) {
            prop_assert!(multiset_dominates(&a, &a).unwrap());
            if multiset_dominates(&a, &b).unwrap() && multiset_dominates(&b, &a).unwrap() {
                let (mut sa, mut sb) = (a.clone(), b.clone());
                sa.sort();
                sb.sort();
                prop_assert_eq!(sa, sb);
            }
            if multiset_dominates(&a, &b).unwrap() && multiset_dominates(&b, &c).unwrap() {
                prop_assert!(multiset_dominates(&a, &c).unwrap());
            }
        }

        #[test]
        fn maximal_extension_is_maximal(p in 2u32..6, upper in prop::collection::vec(1u32..6, 10)) {
            let upper: Vec<u32> = upper.iter().map(|&x| 1 + (x - 1) % p).collect();
            let g = PWeightedGraph::from_upper_triangle(p, 5, &upper).unwrap();
            let order = [3, 0, 4, 1, 2];
            let ext = maximal_dominating_extension(&g, &order).unwrap();
            prop_assert!(is_dominating_extension(&g, &ext.order, &ext.weights));
            for j in 0..5 {
                if ext.weights[j] < p {
                    let mut w = ext.weights.clone();
                    w[j] += 1;
                    prop_assert!(!is_dominating_extension(&g, &order, &w));
                }
            }
        }

        #[test]
        fn table_matches_all_orders(p in 2u32..5, m in 1usize..6, raw in prop::collection::vec(0u32..5, 10)) {
            let upper: Vec<u32> = raw[..m * (m - 1) / 2].iter().map(|&x| 1 + x % p).collect();
            let g = PWeightedGraph::from_upper_triangle(p, m, &upper).unwrap();
            let table = ExtensionTable::new(&g).unwrap();
            prop_assert_eq!(table.best(full_mask(m)), Some(best_over_orders(&g)));
            let ext = table.extension(full_mask(m)).unwrap();
            prop_assert!(is_dominating_extension(&g, &ext.order, &ext.weights));
        }
    }

    #[test]
    fn subsets_enumerates_all() {
        let all: Vec<u64> = subsets(0b1011).collect();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&0) && all.contains(&0b1011));
    }
}
