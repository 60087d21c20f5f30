use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::family::BinaryStringFamily;
use super::params::MbeParams;
use crate::analysis::{for_each_maximal_clique, LabeledGraph};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream};
use crate::sphere::RealUnitVector;
use crate::GEOM_TOL;

/// Largest hyperedge count enumerated for the base hypergraph.
pub const HYPEREDGE_LIMIT: usize = 1_000_000;
/// Largest number of blown-up candidates per base hyperedge, `t^r`.
pub const CANDIDATE_LIMIT: u128 = 1 << 16;
/// Largest graph materialized as an adjacency matrix.
pub const GRAPH_VERTEX_LIMIT: usize = 20_000;

/// Points of one coordinate sphere `S^k(R)`: `m` base points and their
/// blow-up copies. Point `x·s + c` is copy `c` of base point `x`; copy 0 is
/// the base point itself.
#[derive(Clone, Debug)]
pub struct CoordinatePoints {
    points: Vec<RealUnitVector>,
    m: usize,
    s: usize,
}

impl CoordinatePoints {
    /// `m/2` uniform points and their antipodes, each moved by at most `µ/4`;
    /// copies lie within `µ/100` of their base point.
    pub fn sample(params: &MbeParams) -> Self {
        let d = params.k + 1;
        let mu = params.mu();
        let s = params.copies_per_coordinate().unwrap_or(1);
        let seed = derive_seed(params.seed, 0x50);
        let mut base = Vec::with_capacity(params.m);
        for i in 0..params.m / 2 {
            let mut rng = stream(seed, i as u64);
            let a = RealUnitVector::random(&mut rng, d);
            let step = mu / 4.0 * rng.random::<f64>();
            base.push(jitter(&a, step, &mut rng));
            let step = mu / 4.0 * rng.random::<f64>();
            base.push(jitter(&a.neg(), step, &mut rng));
        }
        let mut points = Vec::with_capacity(params.m * s);
        let copy_seed = derive_seed(params.seed, 0x51);
        for (x, b) in base.iter().enumerate() {
            let mut rng = stream(copy_seed, x as u64);
            points.push(b.clone());
            for _ in 1..s {
                let step = mu / 100.0 * rng.random::<f64>();
                points.push(jitter(b, step, &mut rng));
            }
        }
        CoordinatePoints { points, m: params.m, s }
    }

    pub fn from_points(base: Vec<RealUnitVector>) -> Self {
        CoordinatePoints { m: base.len(), s: 1, points: base }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn base_count(&self) -> usize {
        self.m
    }

    pub fn copies(&self) -> usize {
        self.s
    }

    pub fn point(&self, x: usize) -> &RealUnitVector {
        &self.points[x]
    }
}

/// `v` moved by a uniformly oriented step of length `r`, renormalized.
fn jitter<R: Rng + ?Sized>(v: &RealUnitVector, r: f64, rng: &mut R) -> RealUnitVector {
    let dir = RealUnitVector::random(rng, v.dim());
    RealUnitVector::new(v.coords().iter().zip(dir.coords()).map(|(a, b)| a + r * b).collect())
        .expect("short step keeps the vector nonzero")
}

/// Hypergraph on `ℓ`-tuples of coordinate points. Vertex `v` has digits
/// `d_h = (v / R^h) mod R` in radix `R`, and coordinate `h` is point
/// `digit_point[d_h]`. Hyperedges are labelled by the `2^ℓ` binary strings.
#[derive(Clone, Debug)]
pub struct GeometricHypergraph {
    pub ell: u32,
    pub mu: f64,
    points: Arc<CoordinatePoints>,
    digit_point: Vec<usize>,
    /// `edges[e][b]` is the vertex labelled by string `b`.
    pub edges: Vec<Vec<usize>>,
}

impl GeometricHypergraph {
    pub fn r(&self) -> usize {
        1 << self.ell
    }

    pub fn radix(&self) -> usize {
        self.digit_point.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.radix().pow(self.ell)
    }

    pub fn points(&self) -> &CoordinatePoints {
        &self.points
    }

    /// Coordinate-point index of `v` in coordinate `h`.
    pub fn coord_index(&self, v: usize, h: usize) -> usize {
        self.digit_point[(v / self.radix().pow(h as u32)) % self.radix()]
    }

    pub fn coord(&self, v: usize, h: usize) -> &RealUnitVector {
        self.points.point(self.coord_index(v, h))
    }

    /// `|v_h − v′_h| ≥ 2 − µ`.
    pub fn far_in(&self, u: usize, v: usize, h: usize) -> bool {
        self.coord(u, h).dist(self.coord(v, h)) >= 2.0 - self.mu - GEOM_TOL
    }

    /// Whether the labelled tuple satisfies every antipodality constraint.
    pub fn is_hyperedge(&self, tuple: &[usize]) -> bool {
        let fam = BinaryStringFamily { ell: self.ell };
        tuple.len() == self.r()
            && (0..self.ell as usize).all(|h| {
                fam.q_edges(h).into_iter().all(|(i, j)| self.far_in(tuple[i], tuple[j], h))
            })
    }

    /// Hyperedge vertex sets, sorted.
    pub fn edge_sets(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|e| {
                let mut s = e.clone();
                s.sort_unstable();
                s
            })
            .collect()
    }
}

/// Hypergraph on `P^ℓ` whose hyperedges are all labelled tuples meeting the
/// antipodality constraints, one per vertex set.
pub fn build_base_hypergraph(params: &MbeParams, points: Arc<CoordinatePoints>) -> Result<GeometricHypergraph> {
    let m = points.base_count();
    let s = points.copies();
    let ell = params.ell;
    let r = 1usize << ell;
    let mu = params.mu();
    let base_pts: Vec<&RealUnitVector> = (0..m).map(|x| points.point(x * s)).collect();
    let far: Vec<Vec<bool>> = (0..m)
        .map(|x| (0..m).map(|y| base_pts[x].dist(base_pts[y]) >= 2.0 - mu - GEOM_TOL).collect())
        .collect();

    let mut patterns: Vec<Vec<Vec<usize>>> = Vec::with_capacity(ell as usize);
    let mut total: usize = 1;
    for h in 0..ell as usize {
        let pats = coordinate_patterns(&far, r, h);
        total = total.saturating_mul(pats.len());
        if total > HYPEREDGE_LIMIT {
            return Err(Error::SizeLimit(format!("more than {HYPEREDGE_LIMIT} labelled hyperedges")));
        }
        patterns.push(pats);
    }

    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    if total > 0 {
        let mut idx = vec![0usize; ell as usize];
        'outer: loop {
            let tuple: Vec<usize> = (0..r)
                .map(|b| {
                    (0..ell as usize)
                        .rev()
                        .fold(0usize, |acc, h| acc * m + patterns[h][idx[h]][b])
                })
                .collect();
            let mut key = tuple.clone();
            key.sort_unstable();
            key.dedup();
            if key.len() == r && seen.insert(key) {
                edges.push(tuple);
            }
            for h in 0..ell as usize {
                idx[h] += 1;
                if idx[h] < patterns[h].len() {
                    continue 'outer;
                }
                idx[h] = 0;
            }
            break;
        }
    }
    Ok(GeometricHypergraph {
        ell,
        mu,
        digit_point: (0..m).map(|x| x * s).collect(),
        points,
        edges,
    })
}

/// Every map from labels to base points such that labels differing in bit
/// `h` go to almost antipodal points.
fn coordinate_patterns(far: &[Vec<bool>], r: usize, h: usize) -> Vec<Vec<usize>> {
    let m = far.len();
    // Pin one label on each side first so the rest are constrained.
    let mut order = vec![0, 1 << h];
    order.extend((1..r).filter(|&b| b != 1 << h));
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; r];
    fn rec(
        pos: usize,
        order: &[usize],
        assign: &mut Vec<usize>,
        far: &[Vec<bool>],
        m: usize,
        h: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == order.len() {
            out.push(assign.clone());
            return;
        }
        let b = order[pos];
        for y in 0..m {
            let ok = order[..pos]
                .iter()
                .all(|&b2| (b >> h & 1) == (b2 >> h & 1) || far[y][assign[b2]]);
            if ok {
                assign[b] = y;
                rec(pos + 1, order, assign, far, m, h, out);
            }
        }
        assign[b] = usize::MAX;
    }
    rec(0, &order, &mut assign, far, m, h, &mut out);
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SparsifyReport {
    pub candidates: usize,
    pub geometric_rejected: usize,
    pub dropped_random: usize,
    /// Removed because they would close a cycle.
    pub deleted: usize,
    pub retained: usize,
}

/// Replaces every coordinate point by its `t^{1/ℓ}` copies, so each base
/// vertex has `t` copies, and keeps a sparse set of blown-up hyperedges.
///
/// For each base hyperedge, the first blown-up copy meeting the geometric
/// constraints is always kept and every further one survives with probability
/// `retention`. Survivors are then accepted in order only while the
/// hypergraph stays a Berge forest, which rules out every dense small
/// configuration.
pub fn blowup_sparsify(base: &GeometricHypergraph, params: &MbeParams) -> Result<(GeometricHypergraph, SparsifyReport)> {
    let pts = Arc::clone(&base.points);
    let s = pts.copies();
    let m = pts.base_count();
    let ell = base.ell as usize;
    let r = base.r();
    let t = s.pow(ell as u32);
    let radix = m * s;
    let cand_count = (t as u128).pow(r as u32);
    if cand_count > CANDIDATE_LIMIT {
        return Err(Error::SizeLimit(format!(
            "t^r = {cand_count} blown-up candidates per hyperedge exceeds {CANDIDATE_LIMIT}"
        )));
    }
    let mut out = GeometricHypergraph {
        ell: base.ell,
        mu: base.mu,
        digit_point: (0..radix).collect(),
        points: pts,
        edges: Vec::new(),
    };
    let mut report = SparsifyReport::default();
    let mut uf = UnionFind::default();
    let seed = derive_seed(params.seed, 0xb1);
    for (e, tuple) in base.edges.iter().enumerate() {
        let mut rng = stream(seed, e as u64);
        let base_digits: Vec<Vec<usize>> = tuple
            .iter()
            .map(|&v| (0..ell).map(|h| (v / m.pow(h as u32)) % m).collect())
            .collect();
        let mut first = true;
        for a in 0..cand_count as usize {
            report.candidates += 1;
            let cand: Vec<usize> = (0..r)
                .map(|b| {
                    let c = (a / t.pow(b as u32)) % t;
                    (0..ell)
                        .rev()
                        .fold(0usize, |acc, h| acc * radix + base_digits[b][h] * s + (c / s.pow(h as u32)) % s)
                })
                .collect();
            if !out.is_hyperedge(&cand) {
                report.geometric_rejected += 1;
                continue;
            }
            if !first && !rng.random_bool(params.retention) {
                report.dropped_random += 1;
                continue;
            }
            first = false;
            if uf.try_join(&cand) {
                out.edges.push(cand);
                report.retained += 1;
            } else {
                report.deleted += 1;
            }
        }
    }
    Ok((out, report))
}

#[derive(Default)]
struct UnionFind {
    parent: HashMap<usize, usize>,
}

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = *self.parent.get(&x).unwrap_or(&x);
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent.insert(x, root);
        root
    }

    /// Merges the vertices of `edge` if they lie in distinct components.
    fn try_join(&mut self, edge: &[usize]) -> bool {
        let roots: Vec<usize> = edge.iter().map(|&v| self.find(v)).collect();
        let distinct: HashSet<usize> = roots.iter().copied().collect();
        if distinct.len() != roots.len() {
            return false;
        }
        for &x in &roots[1..] {
            self.parent.insert(x, roots[0]);
        }
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsityReport {
    pub subsets_checked: u64,
    /// Edge indices of a connected sub-configuration with
    /// `|V| + (1 + ζ − r)(|E| − 1) < r`, if one was found.
    pub violation: Option<Vec<usize>>,
    pub exhaustive: bool,
}

/// Scans every connected set of hyperedges spanning at most `max_vertices`
/// vertices for the density condition above. Disconnected sets need not be
/// checked: if each part satisfies the bound, so does the union.
pub fn verify_sparsity(h: &GeometricHypergraph, zeta: f64, max_vertices: usize, max_subsets: u64) -> SparsityReport {
    let r = h.r() as f64;
    let sets = h.edge_sets();
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, s) in sets.iter().enumerate() {
        for &v in s {
            by_vertex.entry(v).or_default().push(e);
        }
    }
    let nbrs: Vec<Vec<usize>> = sets
        .iter()
        .enumerate()
        .map(|(e, s)| {
            let mut n: Vec<usize> = s.iter().flat_map(|v| by_vertex[v].iter().copied()).filter(|&f| f != e).collect();
            n.sort_unstable();
            n.dedup();
            n
        })
        .collect();

    struct Scan<'a> {
        sets: &'a [Vec<usize>],
        nbrs: &'a [Vec<usize>],
        r: f64,
        zeta: f64,
        max_vertices: usize,
        max_subsets: u64,
        checked: u64,
        violation: Option<Vec<usize>>,
    }
    impl Scan<'_> {
        fn vertices(&self, sub: &[usize]) -> usize {
            let mut vs: Vec<usize> = sub.iter().flat_map(|&e| self.sets[e].iter().copied()).collect();
            vs.sort_unstable();
            vs.dedup();
            vs.len()
        }

        fn extend(&mut self, sub: &mut Vec<usize>, ext: Vec<usize>, root: usize) {
            if self.violation.is_some() || self.checked >= self.max_subsets {
                return;
            }
            let v = self.vertices(sub);
            if v > self.max_vertices {
                return;
            }
            self.checked += 1;
            let e = sub.len() as f64;
            if (v as f64) + (1.0 + self.zeta - self.r) * (e - 1.0) < self.r {
                self.violation = Some(sub.clone());
                return;
            }
            let mut ext = ext;
            while let Some(w) = ext.pop() {
                let mut next = ext.clone();
                for &u in &self.nbrs[w] {
                    if u > root
                        && !sub.contains(&u)
                        && !next.contains(&u)
                        && !sub.iter().any(|&x| self.nbrs[x].contains(&u))
                    {
                        next.push(u);
                    }
                }
                sub.push(w);
                self.extend(sub, next, root);
                sub.pop();
            }
        }
    }

    let mut scan = Scan {
        sets: &sets,
        nbrs: &nbrs,
        r,
        zeta,
        max_vertices,
        max_subsets,
        checked: 0,
        violation: None,
    };
    for e in 0..sets.len() {
        let ext: Vec<usize> = nbrs[e].iter().copied().filter(|&u| u > e).collect();
        scan.extend(&mut vec![e], ext, e);
    }
    SparsityReport {
        subsets_checked: scan.checked,
        exhaustive: scan.checked < max_subsets,
        violation: scan.violation,
    }
}

/// The shadow graph of a hypergraph: pairs covered by some hyperedge.
#[derive(Clone, Debug)]
pub struct BorsukGraph {
    pub hypergraph: GeometricHypergraph,
    pub graph: LabeledGraph,
    by_vertex: HashMap<usize, Vec<usize>>,
}

impl BorsukGraph {
    /// Index of a hyperedge containing both `u` and `v`.
    pub fn cover(&self, u: usize, v: usize) -> Option<usize> {
        self.by_vertex
            .get(&u)?
            .iter()
            .copied()
            .find(|&e| self.hypergraph.edges[e].contains(&v))
    }

    /// Whether some hyperedge contains all of `vs`.
    pub fn in_one_hyperedge(&self, vs: &[usize]) -> bool {
        match vs.first() {
            None => true,
            Some(&u) => self.by_vertex.get(&u).is_some_and(|es| {
                es.iter().any(|&e| vs.iter().all(|v| self.hypergraph.edges[e].contains(v)))
            }),
        }
    }

    /// A maximal clique of size at least 2 not inside any hyperedge.
    pub fn clique_containment_violation(&self) -> Option<Vec<usize>> {
        let mut bad = None;
        for_each_maximal_clique(&self.graph, |c| {
            if c.len() >= 2 && !self.in_one_hyperedge(c) {
                bad = Some(c.to_vec());
                return false;
            }
            true
        });
        bad
    }
}

pub fn shadow_graph(h: GeometricHypergraph) -> Result<BorsukGraph> {
    let n = h.vertex_count();
    if n > GRAPH_VERTEX_LIMIT {
        return Err(Error::SizeLimit(format!("shadow graph on {n} vertices exceeds {GRAPH_VERTEX_LIMIT}")));
    }
    let mut g = LabeledGraph::new(n);
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, tuple) in h.edges.iter().enumerate() {
        for (i, &u) in tuple.iter().enumerate() {
            by_vertex.entry(u).or_default().push(e);
            for &v in &tuple[i + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    Ok(BorsukGraph { hypergraph: h, graph: g, by_vertex })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_points(extra: Vec<Vec<f64>>) -> Arc<CoordinatePoints> {
        Arc::new(CoordinatePoints::from_points(
            extra.into_iter().map(|c| RealUnitVector::new(c).unwrap()).collect(),
        ))
    }

    fn params(ell: u32, p: u32, q: u32, m: usize) -> MbeParams {
        MbeParams::new(ell, p, q, 12, m, 3).unwrap()
    }

    #[test]
    fn antipodal_pair_is_hyperedge() {
        let prm = params(1, 1, 2, 2);
        let pts = line_points(vec![vec![1.0, 0.0, 1e-4], vec![-1.0, 0.0, 0.0]]);
        let h = build_base_hypergraph(&prm, pts).unwrap();
        assert_eq!(h.edges.len(), 1);
        let pts = line_points(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let h = build_base_hypergraph(&prm, pts).unwrap();
        assert!(h.edges.is_empty());
    }

    #[test]
    fn two_coordinate_pattern() {
        let prm = params(2, 1, 2, 4);
        let pts = line_points(vec![
            vec![1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, -1.0, 0.0],
        ]);
        let h = build_base_hypergraph(&prm, pts).unwrap();
        // Each coordinate picks one of two antipodal pairs: 2·2 vertex sets.
        assert_eq!(h.edges.len(), 4);
        for e in &h.edges {
            assert!(h.is_hyperedge(e));
            for h_ in 0..2 {
                for (i, j) in (BinaryStringFamily { ell: 2 }).q_edges(h_) {
                    assert!(h.far_in(e[i], e[j], h_));
                }
            }
        }
        // Direct construction: label b takes point 0 or 1 in coordinate 0
        // by bit 0, and point 2 or 3 in coordinate 1 by bit 1.
        let tuple: Vec<usize> = (0..4).map(|b| (b & 1) + 4 * (2 + (b >> 1))).collect();
        assert!(h.is_hyperedge(&tuple));
        let mut bad = tuple.clone();
        bad.swap(0, 1);
        bad[0] = bad[1];
        assert!(!h.is_hyperedge(&bad));
    }

    #[test]
    fn sampled_base_is_perfect_matching_of_r_sets() {
        let prm = params(2, 1, 2, 8);
        let pts = Arc::new(CoordinatePoints::sample(&prm));
        let h = build_base_hypergraph(&prm, pts).unwrap();
        assert_eq!(h.edges.len(), 16);
        let mut all: Vec<usize> = h.edge_sets().concat();
        all.sort_unstable();
        assert_eq!(all, (0..64).collect::<Vec<_>>());
    }

    #[test]
    fn identity_blowup() {
        let prm = params(2, 1, 2, 8);
        let pts = Arc::new(CoordinatePoints::sample(&prm));
        let b = build_base_hypergraph(&prm, pts).unwrap();
        let (b2, rep) = blowup_sparsify(&b, &prm).unwrap();
        assert_eq!(b2.edges, b.edges);
        assert_eq!(b2.vertex_count(), b.vertex_count());
        assert_eq!(rep.retained, b.edges.len());
        assert_eq!(rep.deleted, 0);
    }

    #[test]
    fn blowup_is_sparse_and_covering() {
        let prm = params(2, 1, 2, 8).with_blowup(4).unwrap();
        let pts = Arc::new(CoordinatePoints::sample(&prm));
        let b = build_base_hypergraph(&prm, pts).unwrap();
        let (b2, rep) = blowup_sparsify(&b, &prm).unwrap();
        assert_eq!(b2.vertex_count(), 256);
        assert!(rep.deleted > 0 && rep.retained > b.edges.len());
        assert_eq!(rep.candidates, rep.geometric_rejected + rep.dropped_random + rep.deleted + rep.retained);
        for e in &b2.edges {
            assert!(b2.is_hyperedge(e));
        }
        let sp = verify_sparsity(&b2, prm.zeta(), prm.r().pow(3), 10_000_000);
        assert!(sp.exhaustive && sp.violation.is_none(), "{sp:?}");
        // Every base hyperedge keeps a transversal of its copies.
        let s = 2;
        for base in &b.edges {
            let base_set: HashSet<usize> = base.iter().copied().collect();
            let project = |v: usize| -> usize {
                (0..2).rev().fold(0, |acc, h| acc * 8 + ((v / 16usize.pow(h)) % 16) / s)
            };
            let hit = b2.edges.iter().any(|e| {
                let img: HashSet<usize> = e.iter().map(|&v| project(v)).collect();
                img == base_set
            });
            assert!(hit);
        }
        let sh = shadow_graph(b2).unwrap();
        assert_eq!(sh.clique_containment_violation(), None);
    }

    #[test]
    fn sparsity_scan_finds_dense_configuration() {
        let prm = params(1, 1, 2, 2);
        let pts = line_points(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
        let mut h = build_base_hypergraph(&prm, pts).unwrap();
        // A triangle of 2-edges on 3 vertices: |V| = 3, |E| = 3,
        // 3 + (1 + ζ − 2)·2 < 2 iff ζ < 0.5.
        h.edges = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert!(verify_sparsity(&h, 0.4, 8, 1000).violation.is_some());
        assert!(verify_sparsity(&h, 0.9, 8, 1000).violation.is_none());
    }

    #[test]
    fn shadow_examples() {
        let prm = params(2, 1, 2, 8);
        let pts = Arc::new(CoordinatePoints::sample(&prm));
        let mut b = build_base_hypergraph(&prm, pts).unwrap();
        b.edges.truncate(1);
        let s = shadow_graph(b.clone()).unwrap();
        let e = &b.edges[0];
        assert!(s.graph.is_clique(e));
        assert_eq!(s.graph.edge_count(), 6);
        assert_eq!(s.cover(e[0], e[3]), Some(0));
        b.edges.clear();
        assert_eq!(shadow_graph(b).unwrap().graph.edge_count(), 0);
    }
}
