use num_rational::Rational64;
use serde::Serialize;

use super::dominance::{admissible_weight, is_dominating_extension, DominatingExtension, ExtensionTable};
use super::graph::{full_mask, iter_mask, mask_to_vec, PWeightedGraph};
use super::hero::{herculean_from_table, HERCULEAN_VERTEX_LIMIT};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Herculean set followed by the best augmentation from outside it.
    HerculeanAugmentation,
    /// Best extension over every vertex subset.
    Exhaustive,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundSubgraph {
    pub j: Vec<usize>,
    pub extension: DominatingExtension,
    pub route: Route,
}

/// `δ(G) > p · ϱ*_p(pt+2) · m`.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeCondition {
    pub min_degree: u32,
    pub threshold: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgraphSearch {
    pub target: u32,
    pub herculean: Vec<usize>,
    pub herculean_value: i64,
    pub found: Option<FoundSubgraph>,
    pub degree_condition: DegreeCondition,
}

fn degree_condition(g: &PWeightedGraph, t: u32) -> DegreeCondition {
    let p = g.p() as i64;
    let t = t as i64;
    let rho = Rational64::new((t - 1) * (2 * p - 1) + 1, t * (2 * p - 1) + 1);
    let threshold = rho * p * g.len() as i64;
    let min_degree = g.min_degree();
    DegreeCondition {
        min_degree,
        holds: Rational64::from_integer(min_degree as i64) > threshold,
        threshold: threshold.to_string(),
    }
}

/// Looks for `J` with `G[J] ∈ G_p(pt+2)`, `p ∈ {3, 4}`.
///
/// First takes a herculean set `K` with its best extension and appends the
/// outside vertices that add the most weight; if that falls short, searches
/// every subset.
pub fn find_g_pq_subgraph(g: &PWeightedGraph, t: u32) -> Result<SubgraphSearch> {
    let p = g.p();
    if p != 3 && p != 4 {
        return Err(invalid(format!("p must be 3 or 4, got {p}")));
    }
    if t == 0 {
        return Err(invalid("t must be positive"));
    }
    if g.len() > HERCULEAN_VERTEX_LIMIT {
        return Err(Error::SizeLimit(format!(
            "subgraph search capped at {HERCULEAN_VERTEX_LIMIT} vertices, got {}",
            g.len()
        )));
    }
    let target = p * t + 2;
    let degree_condition = degree_condition(g, t);
    let table = ExtensionTable::new(g)?;
    let hero = herculean_from_table(&table)?;
    let k_mask = hero.k.iter().fold(0u64, |s, &v| s | 1 << v);

    let mut found = None;
    if k_mask != 0 {
        let base = table.extension(k_mask).expect("heroic sets are positive");
        let (ext, j) = augment(g, k_mask, base);
        if ext.size >= target {
            found = Some(FoundSubgraph { j, extension: ext, route: Route::HerculeanAugmentation });
        }
    }
    if found.is_none() {
        let (mask, size) = table.overall_best();
        if size >= target {
            let extension = table.extension(mask).unwrap();
            found = Some(FoundSubgraph { j: mask_to_vec(mask), extension, route: Route::Exhaustive });
        }
    }
    if let Some(f) = &found {
        debug_assert!(is_dominating_extension(g, &f.extension.order, &f.extension.weights));
    }
    Ok(SubgraphSearch {
        target,
        herculean: hero.k,
        herculean_value: hero.value,
        found,
        degree_condition,
    })
}

/// Appends outside vertices after the fixed extension of `K`, choosing the
/// subset and order that maximize the total size.
fn augment(g: &PWeightedGraph, k_mask: u64, base: DominatingExtension) -> (DominatingExtension, Vec<usize>) {
    let outside = mask_to_vec(full_mask(g.len()) & !k_mask);
    let n = 1usize << outside.len();
    let to_global = |t: usize| -> u64 {
        iter_mask(t as u64).fold(0u64, |s, i| s | 1 << outside[i])
    };
    let mut best = vec![-1i64; n];
    let mut last = vec![0u8; n];
    best[0] = base.size as i64;
    for t in 1..n {
        for i in iter_mask(t as u64) {
            let prev = t & !(1 << i);
            if best[prev] < 0 {
                continue;
            }
            let pred = k_mask | to_global(prev);
            let v = outside[i];
            if iter_mask(pred).any(|u| g.weight(u, v) == 0) {
                continue;
            }
            let val = best[prev] + admissible_weight(g.p(), iter_mask(pred).map(|u| g.weight(u, v))) as i64;
            if val > best[t] {
                best[t] = val;
                last[t] = i as u8;
            }
        }
    }
    let top = (0..n).max_by_key(|&t| (best[t], std::cmp::Reverse(t))).unwrap();
    let mut tail = Vec::new();
    let mut t = top;
    while t != 0 {
        let i = last[t] as usize;
        tail.push(outside[i]);
        t &= !(1 << i);
    }
    tail.reverse();
    let mut order = base.order.clone();
    order.extend(tail);
    let ext = super::dominance::maximal_dominating_extension(g, &order).expect("positive by construction");
    debug_assert_eq!(ext.size as i64, best[top]);
    let mut j = order;
    j.sort_unstable();
    (ext, j)
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowSlack {
    pub m: i64,
    /// `(s+t−m)(m−1)/m − s(t−1)/t`; a positive value would be a counterexample.
    pub slack: String,
    /// Sign of `(m−t)(m−(s+t)/t)`.
    pub product_sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub p: i64,
    pub s: i64,
    pub t: i64,
    pub m_range: (i64, i64),
    pub rows: Vec<WindowSlack>,
    /// No `m` in range has positive slack, and every row's slack sign
    /// matches the factored form.
    pub passes: bool,
}

/// Checks, in exact rationals, that `s(t−1)/t < (s+t−m)(m−1)/m` has no
/// integer solution `m ∈ [1, s+t]` for `t(t−2) ≤ s ≤ t²`, `s+t−1 ≤ p`.
pub fn verify_theorem15_window(p: i64, s: i64, t: i64) -> Result<WindowReport> {
    if s < 1 || t < 1 {
        return Err(invalid("s and t must be positive"));
    }
    if s < t * (t - 2) || s > t * t {
        return Err(invalid(format!("need t(t−2) ≤ s ≤ t², got s = {s}, t = {t}")));
    }
    if s + t - 1 > p {
        return Err(invalid(format!("need s + t − 1 ≤ p, got {} > {p}", s + t - 1)));
    }
    let lhs = Rational64::new(s * (t - 1), t);
    let mut rows = Vec::new();
    let mut passes = true;
    for m in 1..=s + t {
        let rhs = Rational64::new((s + t - m) * (m - 1), m);
        let slack = rhs - lhs;
        let prod = Rational64::from_integer(m - t) * (Rational64::from_integer(m) - Rational64::new(s + t, t));
        let product_sign = sign(prod);
        // m·slack = −(m−t)(m−(s+t)/t), so the signs must be opposite.
        passes &= slack <= Rational64::from_integer(0) && sign(slack) == -product_sign;
        rows.push(WindowSlack { m, slack: slack.to_string(), product_sign });
    }
    Ok(WindowReport { p, s, t, m_range: (1, s + t), rows, passes })
}

fn sign(x: Rational64) -> i8 {
    match x.cmp(&Rational64::from_integer(0)) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_example() {
        let g = PWeightedGraph::uniform(3, 2, 3).unwrap();
        let r = find_g_pq_subgraph(&g, 1).unwrap();
        let f = r.found.unwrap();
        assert_eq!(f.j, vec![0, 1]);
        assert_eq!(f.extension.weights, vec![3, 3]);
        assert_eq!(r.target, 5);
    }

    #[test]
    fn failure_reports_degree_condition() {
        let g = PWeightedGraph::uniform(3, 2, 1).unwrap();
        let r = find_g_pq_subgraph(&g, 1).unwrap();
        assert!(r.found.is_none());
        assert!(!r.degree_condition.holds);
        assert!(find_g_pq_subgraph(&PWeightedGraph::uniform(5, 2, 1).unwrap(), 1).is_err());
    }

    #[test]
    fn window_examples() {
        let r = verify_theorem15_window(2, 1, 2).unwrap();
        assert!(r.passes);
        assert_eq!(r.m_range, (1, 3));
        let r = verify_theorem15_window(11, 9, 3).unwrap();
        assert!(r.passes);
        assert!(verify_theorem15_window(10, 2, 3).is_err());
        assert!(verify_theorem15_window(3, 4, 2).is_err());
    }

    #[test]
    fn window_slack_would_catch_violations() {
        // Outside the window the inequality does have integer solutions.
        let (s, t) = (1i64, 4i64);
        let lhs = Rational64::new(s * (t - 1), t);
        let hit = (1..=s + t).any(|m| Rational64::new((s + t - m) * (m - 1), m) > lhs);
        assert!(hit);
    }
}
