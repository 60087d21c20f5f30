use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::family::{build_q_family, proper_edge_coloring, related_coordinates, BinaryStringFamily, EdgeColoring};
use super::hypergraph::{
    blowup_sparsify, build_base_hypergraph, shadow_graph, BorsukGraph, CoordinatePoints, GeometricHypergraph,
    SparsifyReport, GRAPH_VERTEX_LIMIT,
};
use super::params::MbeParams;
use crate::analysis::{density_report, LabeledGraph};
use crate::error::{invalid, Error, Result};
use crate::GEOM_TOL;

/// `q` copies of one Borsuk graph with cross edges between them. Vertex
/// `i·N + v` is vertex `v` of the Borsuk graph in class `i`.
#[derive(Clone, Debug)]
pub struct MbeGraph {
    pub params: MbeParams,
    pub family: BinaryStringFamily,
    pub coloring: EdgeColoring,
    pub borsuk: BorsukGraph,
    /// Related `(h, h′)` pairs for each class pair `i < i′`.
    pub related: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    pub graph: LabeledGraph,
    pub sparsify: SparsifyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct MbeStats {
    pub n: usize,
    pub class_size: usize,
    pub hyperedges: usize,
    pub inner_edges: usize,
    pub cross_edges: usize,
    /// Cross densities for every class pair `i < i′`.
    pub cross_density: Vec<((usize, usize), f64)>,
    pub min_cross_density: f64,
    pub max_cross_density: f64,
    pub target_cross_density: f64,
    pub clique_bound: usize,
}

/// Per-class view of a clique: sizes and lengthy coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CliqueAudit {
    pub class_sizes: Vec<usize>,
    pub lengthy: Vec<Vec<usize>>,
    pub lengthy_total: usize,
    /// `|A ∩ V_i| ≤ 2^{|L_i|}` for every class.
    pub class_bound_holds: bool,
    /// `Σ |L_i| ≤ ℓ + p`.
    pub budget_holds: bool,
}

pub fn build_mbe(params: &MbeParams) -> Result<MbeGraph> {
    params.validate()?;
    let n = params.vertices_per_class() * params.q as usize;
    if n > GRAPH_VERTEX_LIMIT {
        return Err(Error::SizeLimit(format!("{n} vertices exceeds {GRAPH_VERTEX_LIMIT}")));
    }
    let family = build_q_family(params.ell)?;
    let q = params.q as usize;
    let coloring = proper_edge_coloring(q)?;
    let points = Arc::new(CoordinatePoints::sample(params));
    let base = build_base_hypergraph(params, points)?;
    let (blown, sparsify) = blowup_sparsify(&base, params)?;
    let borsuk = shadow_graph(blown)?;
    let h = &borsuk.hypergraph;
    let class_size = h.vertex_count();

    let pts = h.points();
    let limit = 2f64.sqrt() - params.mu() + GEOM_TOL;
    let close: Vec<Vec<bool>> = (0..pts.len())
        .into_par_iter()
        .map(|x| (0..pts.len()).map(|y| pts.point(x).dist(pts.point(y)) <= limit).collect())
        .collect();

    let mut related = BTreeMap::new();
    for i in 0..q {
        for i2 in i + 1..q {
            related.insert((i, i2), related_coordinates(i, i2, params.ell, params.p, &coloring)?);
        }
    }
    let ell = params.ell as usize;
    let coords: Vec<Vec<usize>> = (0..class_size).map(|v| (0..ell).map(|c| h.coord_index(v, c)).collect()).collect();
    let cross: Vec<Vec<(usize, usize)>> = related
        .par_iter()
        .map(|(&(i, i2), rel)| {
            let mut edges = Vec::new();
            for u in 0..class_size {
                for v in 0..class_size {
                    if rel.iter().all(|&(a, b)| close[coords[u][a]][coords[v][b]]) {
                        edges.push((i * class_size + u, i2 * class_size + v));
                    }
                }
            }
            edges
        })
        .collect();

    let mut graph = LabeledGraph::new(n);
    for i in 0..q {
        for (u, v) in borsuk.graph.edges() {
            graph.add_edge(i * class_size + u, i * class_size + v);
        }
    }
    for (u, v) in cross.into_iter().flatten() {
        graph.add_edge(u, v);
    }
    let graph = graph.with_classes(
        (0..n).map(|v| v / class_size).collect(),
        (1..=q).map(|i| format!("V{i}")).collect(),
    )?;
    Ok(MbeGraph { params: params.clone(), family, coloring, borsuk, related, graph, sparsify })
}

/// Coordinates `h` in which two vertices of `a` are almost antipodal.
pub fn lengthy_coordinates(h: &GeometricHypergraph, a: &[usize]) -> Vec<usize> {
    (0..h.ell as usize)
        .filter(|&c| a.iter().enumerate().any(|(i, &u)| a[i + 1..].iter().any(|&v| h.far_in(u, v, c))))
        .collect()
}

impl MbeGraph {
    pub fn class_size(&self) -> usize {
        self.borsuk.hypergraph.vertex_count()
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// `(class, vertex of the Borsuk graph)`.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        (v / self.class_size(), v % self.class_size())
    }

    /// Lengthy coordinates of a vertex set inside one class.
    pub fn lengthy(&self, a: &[usize]) -> Result<Vec<usize>> {
        let Some(&first) = a.first() else { return Ok(vec![]) };
        let class = self.locate(first).0;
        let mut local = Vec::with_capacity(a.len());
        for &v in a {
            let (c, x) = self.locate(v);
            if c != class {
                return Err(invalid("vertex set spans several classes"));
            }
            local.push(x);
        }
        Ok(lengthy_coordinates(&self.borsuk.hypergraph, &local))
    }

    pub fn audit_clique(&self, clique: &[usize]) -> CliqueAudit {
        let q = self.params.q as usize;
        let mut parts = vec![Vec::new(); q];
        for &v in clique {
            parts[self.locate(v).0].push(v);
        }
        let lengthy: Vec<Vec<usize>> = parts.iter().map(|p| self.lengthy(p).expect("single class")).collect();
        let lengthy_total = lengthy.iter().map(Vec::len).sum();
        CliqueAudit {
            class_bound_holds: parts.iter().zip(&lengthy).all(|(p, l)| p.len() <= 1 << l.len()),
            budget_holds: lengthy_total <= (self.params.ell + self.params.p) as usize,
            class_sizes: parts.iter().map(Vec::len).collect(),
            lengthy,
            lengthy_total,
        }
    }

    pub fn stats(&self) -> MbeStats {
        let rep = density_report(&self.graph);
        let cross_density: Vec<((usize, usize), f64)> =
            rep.pairs.iter().map(|pd| ((pd.a, pd.b), pd.density)).collect();
        let fold = |f: fn(f64, f64) -> f64, init: f64| cross_density.iter().map(|x| x.1).fold(init, f);
        MbeStats {
            n: self.len(),
            class_size: self.class_size(),
            hyperedges: self.borsuk.hypergraph.edges.len(),
            inner_edges: rep.inner_edges.iter().sum(),
            cross_edges: rep.pairs.iter().map(|pd| pd.edges).sum(),
            min_cross_density: fold(f64::min, f64::INFINITY),
            max_cross_density: fold(f64::max, f64::NEG_INFINITY),
            cross_density,
            target_cross_density: self.params.target_cross_density(),
            clique_bound: self.params.clique_bound(),
        }
    }
}
