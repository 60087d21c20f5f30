use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{invalid, Result};

/// Finite simple undirected graph, optionally partitioned into named classes.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    adj: Vec<BitSet>,
    classes: Option<Partition>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Partition {
    label: Vec<usize>,
    names: Vec<String>,
}

impl LabeledGraph {
    pub fn new(n: usize) -> Self {
        LabeledGraph {
            adj: (0..n).map(|_| BitSet::new(n)).collect(),
            classes: None,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    /// Attaches class labels `label[v] ∈ [names.len())`.
    pub fn with_classes(mut self, label: Vec<usize>, names: Vec<String>) -> Result<Self> {
        if label.len() != self.len() {
            return Err(invalid("class label vector length differs from vertex count"));
        }
        if let Some(&bad) = label.iter().find(|&&c| c >= names.len()) {
            return Err(invalid(format!("class label {bad} has no name")));
        }
        self.classes = Some(Partition { label, names });
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(invalid(format!("edge ({u},{v}) out of range for {n} vertices")));
        }
        if u == v {
            return Err(invalid(format!("self-loop at {u}")));
        }
        self.add_edge(u, v);
        Ok(())
    }

    /// Panics on loops or out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loop at {u}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.as_ref().map(|c| c.label[v])
    }

    pub fn class_names(&self) -> &[String] {
        self.classes.as_ref().map_or(&[], |c| &c.names)
    }

    pub fn class_labels(&self) -> Option<&[usize]> {
        self.classes.as_ref().map(|c| c.label.as_slice())
    }

    /// Vertices of class `c`, in increasing order.
    pub fn class_members(&self, c: usize) -> Vec<usize> {
        match &self.classes {
            Some(p) => (0..self.len()).filter(|&v| p.label[v] == c).collect(),
            None => Vec::new(),
        }
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Subgraph induced on `vs`; vertex `i` of the result is `vs[i]`. Class
    /// labels are carried over.
    pub fn induced(&self, vs: &[usize]) -> LabeledGraph {
        let mut g = LabeledGraph::new(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        if let Some(p) = &self.classes {
            g.classes = Some(Partition {
                label: vs.iter().map(|&v| p.label[v]).collect(),
                names: p.names.clone(),
            });
        }
        g
    }
}

/// Disjoint union of the inputs plus every edge between different inputs.
/// Vertices of input `i` form class `G{i}`.
pub fn complete_join(parts: &[LabeledGraph]) -> LabeledGraph {
    let n: usize = parts.iter().map(LabeledGraph::len).sum();
    let mut g = LabeledGraph::new(n);
    let mut label = Vec::with_capacity(n);
    let mut offset = 0;
    for (i, part) in parts.iter().enumerate() {
        for (u, v) in part.edges() {
            g.add_edge(offset + u, offset + v);
        }
        label.extend(std::iter::repeat_n(i, part.len()));
        offset += part.len();
    }
    for u in 0..n {
        for v in u + 1..n {
            if label[u] != label[v] {
                g.add_edge(u, v);
            }
        }
    }
    let names = (0..parts.len()).map(|i| format!("G{i}")).collect();
    g.with_classes(label, names).expect("labels built in range")
}

#[derive(Clone, Debug, Serialize)]
pub struct PairDensity {
    pub a: usize,
    pub b: usize,
    pub edges: usize,
    pub density: f64,
}

/// Exact edge counts and densities, per class and per class pair.
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub vertices: usize,
    pub edges: usize,
    pub global_density: f64,
    pub class_names: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub inner_edges: Vec<usize>,
    pub pairs: Vec<PairDensity>,
}

impl DensityReport {
    pub fn pair(&self, a: usize, b: usize) -> Option<&PairDensity> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.pairs.iter().find(|p| p.a == a && p.b == b)
    }
}

pub fn density_report(g: &LabeledGraph) -> DensityReport {
    let n = g.len();
    let edges = g.edge_count();
    let global_density = if n < 2 { 0.0 } else { edges as f64 / (n * (n - 1) / 2) as f64 };
    let names = g.class_names().to_vec();
    let c = names.len();
    let mut class_sizes = vec![0usize; c];
    let mut inner_edges = vec![0usize; c];
    let mut cross = vec![vec![0usize; c]; c];
    if let Some(labels) = g.class_labels() {
        for &l in labels {
            class_sizes[l] += 1;
        }
        for (u, v) in g.edges() {
            let (a, b) = (labels[u], labels[v]);
            if a == b {
                inner_edges[a] += 1;
            } else {
                cross[a.min(b)][a.max(b)] += 1;
            }
        }
    }
    let mut pairs = Vec::new();
    for a in 0..c {
        for b in a + 1..c {
            let denom = class_sizes[a] * class_sizes[b];
            pairs.push(PairDensity {
                a,
                b,
                edges: cross[a][b],
                density: if denom == 0 { 0.0 } else { cross[a][b] as f64 / denom as f64 },
            });
        }
    }
    DensityReport {
        vertices: n,
        edges,
        global_density,
        class_names: names,
        class_sizes,
        inner_edges,
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_range() {
        let mut g = LabeledGraph::new(3);
        assert!(g.try_add_edge(1, 1).is_err());
        assert!(g.try_add_edge(0, 3).is_err());
        g.try_add_edge(0, 2).unwrap();
        g.try_add_edge(2, 0).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn k33_density() {
        let mut g = LabeledGraph::new(6);
        for u in 0..3 {
            for v in 3..6 {
                g.add_edge(u, v);
            }
        }
        let g = g
            .with_classes(vec![0, 0, 0, 1, 1, 1], vec!["A".into(), "B".into()])
            .unwrap();
        let r = density_report(&g);
        assert_eq!(r.pair(0, 1).unwrap().density, 1.0);
        assert_eq!(r.inner_edges, vec![0, 0]);
        assert_eq!(r.edges, 9);
        assert_eq!(r.inner_edges.iter().sum::<usize>() + r.pairs.iter().map(|p| p.edges).sum::<usize>(), r.edges);
    }

    #[test]
    fn empty_graph_density() {
        let r = density_report(&LabeledGraph::new(5));
        assert_eq!(r.edges, 0);
        assert_eq!(r.global_density, 0.0);
        assert!(r.pairs.is_empty());
        let r = density_report(&LabeledGraph::new(0));
        assert_eq!(r.global_density, 0.0);
    }

    #[test]
    fn join_examples() {
        let one = LabeledGraph::new(1);
        let j = complete_join(&[one.clone(), one]);
        assert_eq!(j.len(), 2);
        assert!(j.has_edge(0, 1));
        let j = complete_join(&[LabeledGraph::complete(2), LabeledGraph::complete(3)]);
        assert!(j.is_clique(&[0, 1, 2, 3, 4]));
        assert_eq!(j.class_names(), &["G0".to_string(), "G1".to_string()]);
    }

    #[test]
    fn induced_keeps_labels() {
        let g = LabeledGraph::cycle(5)
            .with_classes(vec![0, 1, 0, 1, 0], vec!["x".into(), "y".into()])
            .unwrap();
        let h = g.induced(&[0, 1, 2]);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.class_labels().unwrap(), &[0, 1, 0]);
    }
}
