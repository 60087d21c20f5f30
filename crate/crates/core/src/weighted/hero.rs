use serde::Serialize;

use super::dominance::{is_dominating_extension, subsets, DominatingExtension, ExtensionTable};
use super::graph::{full_mask, iter_mask, mask_to_vec, PWeightedGraph};
use crate::error::Result;

/// Largest graph accepted by [`find_herculean`].
pub const HERCULEAN_VERTEX_LIMIT: usize = 18;

/// A heroic set `K` maximizing `p|K| − w̃(K)`, then minimizing `|K|`, with the
/// evidence needed to re-check it.
#[derive(Clone, Debug, Serialize)]
pub struct HerculeanCertificate {
    pub p: u32,
    pub k: Vec<usize>,
    /// `p|K| − w̃(K)`.
    pub value: i64,
    /// For every nonempty `L ⊆ K`: `L` and a dominating extension of `G[L]`
    /// of size at least `p|L| − w̃(L)`.
    pub heroic: Vec<(Vec<usize>, DominatingExtension)>,
    /// `γ_K(y)` for `y ∈ K`.
    pub inner_gamma: Vec<(usize, u32)>,
    /// `γ_K(x)` for `x ∉ K`.
    pub outer_gamma: Vec<(usize, u32)>,
    /// `(x, y, γ_{K∖y}(x), γ_K(y))` for `x ∉ K`, `y ∈ K`.
    pub exchange: Vec<(usize, usize, u32, u32)>,
}

impl HerculeanCertificate {
    /// Re-derives every stored quantity from `g` and checks the three
    /// properties; returns a description of the first failure.
    pub fn verify(&self, g: &PWeightedGraph) -> std::result::Result<(), String> {
        let p = g.p();
        let k_mask = self.k.iter().fold(0u64, |s, &v| s | 1 << v);
        if self.k.is_empty() {
            return if g.is_empty() { Ok(()) } else { Err("empty K on a nonempty graph".into()) };
        }
        if g.heroic_target(k_mask) != self.value {
            return Err("stored value differs from p|K| − w̃(K)".into());
        }
        let mut covered = std::collections::HashSet::new();
        for (l, ext) in &self.heroic {
            let l_mask = l.iter().fold(0u64, |s, &v| s | 1 << v);
            if l_mask & !k_mask != 0 || l.is_empty() {
                return Err(format!("heroic evidence {l:?} is not a nonempty subset of K"));
            }
            let mut sorted = ext.order.clone();
            sorted.sort_unstable();
            if sorted != *l || !is_dominating_extension(g, &ext.order, &ext.weights) {
                return Err(format!("evidence for {l:?} is not a dominating extension of G[L]"));
            }
            if ext.weights.iter().sum::<u32>() != ext.size || (ext.size as i64) < g.heroic_target(l_mask) {
                return Err(format!("extension of {l:?} is below p|L| − w̃(L)"));
            }
            covered.insert(l_mask);
        }
        if covered.len() != (1usize << self.k.len()) - 1 {
            return Err("heroic evidence does not cover every nonempty L ⊆ K".into());
        }
        for y in iter_mask(k_mask) {
            if g.gamma(k_mask, y) > p - 1 {
                return Err(format!("γ_K({y}) ≥ p"));
            }
        }
        for x in iter_mask(full_mask(g.len()) & !k_mask) {
            if g.gamma(k_mask, x) < p {
                return Err(format!("outside vertex {x} has γ_K < p"));
            }
            for y in iter_mask(k_mask) {
                if g.gamma(k_mask & !(1 << y), x) < g.gamma(k_mask, y) {
                    return Err(format!("exchange {x} for {y} would improve K"));
                }
            }
        }
        Ok(())
    }
}

/// Heroic flags and targets for every subset, from an extension table.
pub(crate) fn heroic_table(table: &ExtensionTable) -> Vec<bool> {
    let g = table.graph();
    let n = 1usize << g.len();
    let mut heroic = vec![false; n];
    for s in 1..n as u64 {
        let own = table.best(s).is_some_and(|b| b as i64 >= g.heroic_target(s));
        heroic[s as usize] = own && iter_mask(s).all(|v| s == 1 << v || heroic[(s & !(1 << v)) as usize]);
    }
    heroic
}

pub fn find_herculean(g: &PWeightedGraph) -> Result<HerculeanCertificate> {
    if g.len() > HERCULEAN_VERTEX_LIMIT {
        return Err(crate::Error::SizeLimit(format!(
            "herculean search capped at {HERCULEAN_VERTEX_LIMIT} vertices, got {}",
            g.len()
        )));
    }
    let table = ExtensionTable::new(g)?;
    herculean_from_table(&table)
}

pub(crate) fn herculean_from_table(table: &ExtensionTable) -> Result<HerculeanCertificate> {
    let g = table.graph();
    let p = g.p();
    if g.is_empty() {
        return Ok(HerculeanCertificate {
            p,
            k: vec![],
            value: 0,
            heroic: vec![],
            inner_gamma: vec![],
            outer_gamma: vec![],
            exchange: vec![],
        });
    }
    let heroic = heroic_table(table);
    let k_mask = (1..heroic.len() as u64)
        .filter(|&s| heroic[s as usize])
        .max_by_key(|&s| (g.heroic_target(s), std::cmp::Reverse(s.count_ones()), std::cmp::Reverse(s)))
        .expect("singletons are heroic");
    let outside = full_mask(g.len()) & !k_mask;
    let evidence = subsets(k_mask)
        .filter(|&l| l != 0)
        .map(|l| (mask_to_vec(l), table.extension(l).expect("heroic sets are positive")))
        .collect();
    Ok(HerculeanCertificate {
        p,
        k: mask_to_vec(k_mask),
        value: g.heroic_target(k_mask),
        heroic: evidence,
        inner_gamma: iter_mask(k_mask).map(|y| (y, g.gamma(k_mask, y))).collect(),
        outer_gamma: iter_mask(outside).map(|x| (x, g.gamma(k_mask, x))).collect(),
        exchange: iter_mask(outside)
            .flat_map(|x| {
                iter_mask(k_mask).map(move |y| (x, y, g.gamma(k_mask & !(1 << y), x), g.gamma(k_mask, y)))
            })
            .collect(),
    })
}
