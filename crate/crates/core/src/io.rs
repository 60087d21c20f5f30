//! Text formats: edge lists with a JSON header, weighted graphs, hypergraph
//! exports, stats CSV rows and extension certificates.
//!
//! Edge list:
//!
//! ```text
//! # {"n":4,"class_names":["W","Z"],"class_sizes":[2,2],"config":{...}}
//! 0 2
//! 1 3
//! ```
//!
//! Weighted graph: `p m`, then row `i < m − 1` lists `w(i, j)` for `j > i`.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::LabeledGraph;
use crate::error::{Error, Result};
use crate::mbe::GeometricHypergraph;
use crate::weighted::{DominatingExtension, PWeightedGraph};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Header describing the vertex classes. Classes are stored as contiguous
/// blocks when possible, otherwise as one label per vertex.
fn graph_header(g: &LabeledGraph, config: Value) -> Value {
    let mut h = json!({ "n": g.len(), "edges": g.edge_count() });
    if let Some(labels) = g.class_labels() {
        let names = g.class_names();
        let mut sizes = vec![0usize; names.len()];
        for &l in labels {
            sizes[l] += 1;
        }
        let contiguous = labels.windows(2).all(|w| w[0] <= w[1]);
        h["class_names"] = json!(names);
        if contiguous {
            h["class_sizes"] = json!(sizes);
        } else {
            h["class_labels"] = json!(labels);
        }
    }
    if !config.is_null() {
        h["config"] = config;
    }
    h
}

pub fn write_edge_list<W: Write>(mut w: W, g: &LabeledGraph, config: &impl Serialize) -> Result<()> {
    let header = graph_header(g, serde_json::to_value(config)?);
    writeln!(w, "# {}", serde_json::to_string(&header)?)?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EdgeList {
    /// Parsed header, or `Null` when the file has none.
    pub header: Value,
    pub graph: LabeledGraph,
}

/// Reads an edge list. Without a header, `n` is one more than the largest
/// vertex seen. Lines starting with `#` after the first are comments.
pub fn read_edge_list<R: BufRead>(r: R) -> Result<EdgeList> {
    let mut header = Value::Null;
    let mut edges = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            if i == 0 {
                header = serde_json::from_str(rest.trim()).map_err(|e| parse_err(1, e.to_string()))?;
            }
            continue;
        }
        let mut it = t.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(parse_err(i + 1, format!("expected `u v`, got {t:?}"))),
        }
    }
    let seen = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match header.get("n") {
        Some(v) => {
            let n = v.as_u64().ok_or_else(|| parse_err(1, "header n is not an integer"))? as usize;
            if seen > n {
                return Err(parse_err(1, format!("vertex {} out of range for n = {n}", seen - 1)));
            }
            n
        }
        None => seen,
    };
    let mut graph = LabeledGraph::new(n);
    for (u, v) in edges {
        graph.try_add_edge(u, v)?;
    }
    if let Some(names) = header.get("class_names") {
        let names: Vec<String> = serde_json::from_value(names.clone())?;
        let labels: Vec<usize> = if let Some(sizes) = header.get("class_sizes") {
            let sizes: Vec<usize> = serde_json::from_value(sizes.clone())?;
            sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect()
        } else if let Some(l) = header.get("class_labels") {
            serde_json::from_value(l.clone())?
        } else {
            return Err(parse_err(1, "class_names without class_sizes or class_labels"));
        };
        graph = graph.with_classes(labels, names)?;
    }
    Ok(EdgeList { header, graph })
}

pub fn write_weighted<W: Write>(mut w: W, g: &PWeightedGraph) -> Result<()> {
    writeln!(w, "{} {}", g.p(), g.len())?;
    for i in 0..g.len().saturating_sub(1) {
        let row: Vec<String> = (i + 1..g.len()).map(|j| g.weight(i, j).to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Reads `p m` followed by the upper triangle; line breaks inside the
/// triangle are not significant.
pub fn read_weighted<R: BufRead>(r: R) -> Result<PWeightedGraph> {
    let mut nums = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.split('#').next().unwrap_or("");
        for tok in t.split_whitespace() {
            nums.push(tok.parse::<u64>().map_err(|_| parse_err(i + 1, format!("not a nonnegative integer: {tok:?}")))?);
        }
    }
    if nums.len() < 2 {
        return Err(parse_err(1, "missing `p m` line"));
    }
    let (p, m) = (nums[0], nums[1] as usize);
    let p = u32::try_from(p).map_err(|_| parse_err(1, "p out of range"))?;
    let upper: Vec<u32> = nums[2..]
        .iter()
        .map(|&x| u32::try_from(x).map_err(|_| parse_err(0, "weight out of range")))
        .collect::<Result<_>>()?;
    PWeightedGraph::from_upper_triangle(p, m, &upper)
}

/// One hyperedge per line, vertices in label order.
pub fn write_hypergraph<W: Write>(mut w: W, h: &GeometricHypergraph) -> Result<()> {
    writeln!(
        w,
        "# {}",
        json!({ "ell": h.ell, "r": h.r(), "vertices": h.vertex_count(), "hyperedges": h.edges.len() })
    )?;
    for e in &h.edges {
        let line: Vec<String> = e.iter().map(usize::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub order: Vec<usize>,
    pub weights: Vec<u32>,
    pub size: u32,
    pub checks: BTreeMap<String, bool>,
}

impl Certificate {
    pub fn new(ext: &DominatingExtension, checks: BTreeMap<String, bool>) -> Self {
        Certificate { order: ext.order.clone(), weights: ext.weights.clone(), size: ext.size, checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    #[serde(rename = "graph-id")]
    pub graph_id: String,
    pub n: usize,
    pub density: f64,
    pub omega: usize,
    pub omega_exhaustive: bool,
    pub alpha_p_lb: usize,
    pub alpha_p_ub: usize,
}

pub fn write_stats_csv<W: Write>(w: W, rows: &[StatsRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_stats_csv<R: std::io::Read>(r: R) -> Result<Vec<StatsRow>> {
    csv::Reader::from_reader(r).deserialize().map(|r| r.map_err(Error::from)).collect()
}
