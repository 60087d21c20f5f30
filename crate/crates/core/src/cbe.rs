//! Two-class graph on the complex unit sphere.
//!
//! Vertices are two classes `W`, `Z` of points of `S^{k-1}(C)`. Two points of
//! the same class are adjacent when one is close to a nontrivial rotation
//! `ρ^h` of the other, `ρ = e^{2πi/p}`. A cross pair `(w, z)` is adjacent when
//! `⟨w, z⟩` keeps clear of every rotated real axis and its argument lies in
//! `[0, 2πℓ/p]`.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::LabeledGraph;
use crate::error::{invalid, Result};
use crate::rng::{derive_seed, stream};
use crate::sphere::{partition_sphere, ComplexUnitVector};
use crate::GEOM_TOL;

/// How the points of `W` and `Z` are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Two points per cell of an equal-measure partition of diameter `≤ µ/4`.
    /// Fails unless such a partition is achievable at this `n`.
    Strict,
    /// Independent uniform points.
    #[default]
    Sampled,
    /// Groups of `p` noisy rotations `ρ^h b` of a uniform base point, so the
    /// inner rule fires and inner `K_p`'s appear.
    Orbits,
}

impl std::str::FromStr for SamplingMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Self::Strict),
            "sampled" => Ok(Self::Sampled),
            "orbits" => Ok(Self::Orbits),
            _ => Err(invalid(format!("unknown sampling mode {s:?} (strict, sampled, orbits)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CbeParams {
    pub p: u32,
    pub ell: u32,
    /// Complex dimension.
    pub k: usize,
    /// Size of each class.
    pub n: usize,
    pub epsilon: f64,
    pub big_k: f64,
    pub seed: u64,
    #[serde(default)]
    pub mode: SamplingMode,
}

impl CbeParams {
    pub const DEFAULT_EPSILON: f64 = 0.02;
    pub const DEFAULT_BIG_K: f64 = 4.0;

    /// Validated parameters with the default `ε`, `K` and sampling mode.
    pub fn new(p: u32, ell: u32, k: usize, n: usize, seed: u64) -> Result<Self> {
        let params = CbeParams {
            p,
            ell,
            k,
            n,
            epsilon: Self::DEFAULT_EPSILON,
            big_k: Self::DEFAULT_BIG_K,
            seed,
            mode: SamplingMode::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_big_k(mut self, big_k: f64) -> Result<Self> {
        self.big_k = big_k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(invalid(format!("p must be at least 2, got {}", self.p)));
        }
        if self.ell < 1 || self.ell >= self.p {
            return Err(invalid(format!("need 1 ≤ ell < p, got ell = {}, p = {}", self.ell, self.p)));
        }
        if self.k == 0 || self.n == 0 {
            return Err(invalid("k and n must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(invalid(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.big_k >= 1.0 && self.big_k.is_finite()) {
            return Err(invalid(format!("K must be at least 1, got {}", self.big_k)));
        }
        Ok(())
    }

    /// `µ = ε / √(2k)`.
    pub fn mu(&self) -> f64 {
        self.epsilon / (2.0 * self.k as f64).sqrt()
    }

    /// `ρ = e^{2πi/p}`.
    pub fn rho(&self) -> Complex64 {
        root_of_unity(self.p, 1)
    }

    /// Violated parameter-hierarchy conditions. Non-fatal: the clique bounds
    /// rely on them, the construction itself does not.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let mu = self.mu();
        if 3.0 * mu.sqrt() >= 4.0 / self.p as f64 {
            w.push(format!("3√µ = {:.4} is not below 4/p = {:.4}", 3.0 * mu.sqrt(), 4.0 / self.p as f64));
        }
        if self.big_k * mu >= 1.0 {
            w.push(format!("Kµ = {:.4} is not below 1", self.big_k * mu));
        }
        if 2 * self.ell > self.p {
            w.push(format!("ell = {} > p/2: no clique bound is asserted", self.ell));
        }
        w
    }

    /// `p + ℓ` when `ℓ ≤ p/2`, the largest clique the construction admits.
    pub fn clique_bound(&self) -> Option<usize> {
        (2 * self.ell <= self.p).then_some((self.p + self.ell) as usize)
    }
}

/// `e^{2πih/p}`, computed from the reduced angle to keep `ρ^p = 1` tight.
pub fn root_of_unity(p: u32, h: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (h % p) as f64 / p as f64)
}

/// Smallest `h ∈ [1, p−1]` with `|u − ρ^h v| ≤ √µ`.
pub fn rotation_witness(u: &ComplexUnitVector, v: &ComplexUnitVector, params: &CbeParams) -> Option<u32> {
    let r = params.mu().sqrt() + GEOM_TOL;
    (1..params.p).find(|&h| u.dist_scaled(root_of_unity(params.p, h), v) <= r)
}

/// Cross rule on an inner product `⟨w, z⟩`.
pub fn cross_edge_value(ip: Complex64, params: &CbeParams) -> bool {
    let floor = params.big_k * params.mu() - GEOM_TOL;
    let clear = (0..params.p).all(|h| (root_of_unity(params.p, h) * ip).im.abs() >= floor);
    if !clear {
        return false;
    }
    let mut arg = ip.arg();
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    let hi = 2.0 * PI * params.ell as f64 / params.p as f64;
    arg <= hi + GEOM_TOL || arg >= 2.0 * PI - GEOM_TOL
}

pub fn cross_edge(w: &ComplexUnitVector, z: &ComplexUnitVector, params: &CbeParams) -> bool {
    cross_edge_value(w.inner(z), params)
}

/// The generated graph. Vertices `0..n` are `W`, `n..2n` are `Z`.
#[derive(Clone, Debug)]
pub struct CbeGraph {
    pub params: CbeParams,
    pub w: Vec<ComplexUnitVector>,
    pub z: Vec<ComplexUnitVector>,
    pub graph: LabeledGraph,
    /// Witness `h` for each inner edge `(u, v)`, `u < v`: `u` is close to `ρ^h v`.
    pub rotation_labels: BTreeMap<(usize, usize), u32>,
}

pub fn build_cbe(params: &CbeParams) -> Result<CbeGraph> {
    params.validate()?;
    let (w, z) = sample_points(params)?;
    let n = params.n;
    let inner = |pts: &[ComplexUnitVector], offset: usize| -> Vec<(usize, usize, u32)> {
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..n).filter_map(move |j| {
                    rotation_witness(&pts[i], &pts[j], params).map(|h| (offset + i, offset + j, h))
                })
            })
            .collect()
    };
    let inner_edges: Vec<(usize, usize, u32)> = inner(&w, 0).into_iter().chain(inner(&z, n)).collect();
    let cross: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (w, z) = (&w, &z);
            (0..n).filter(move |&j| cross_edge(&w[i], &z[j], params)).map(move |j| (i, n + j))
        })
        .collect();

    let mut g = LabeledGraph::new(2 * n);
    let mut rotation_labels = BTreeMap::new();
    for &(u, v, h) in &inner_edges {
        g.add_edge(u, v);
        rotation_labels.insert((u, v), h);
    }
    for &(u, v) in &cross {
        g.add_edge(u, v);
    }
    let labels = (0..2 * n).map(|v| usize::from(v >= n)).collect();
    let graph = g.with_classes(labels, vec!["W".into(), "Z".into()])?;
    Ok(CbeGraph { params: params.clone(), w, z, graph, rotation_labels })
}

fn sample_points(params: &CbeParams) -> Result<(Vec<ComplexUnitVector>, Vec<ComplexUnitVector>)> {
    let (k, n) = (params.k, params.n);
    match params.mode {
        SamplingMode::Strict => {
            let part = partition_sphere(k, n, params.mu() / 4.0, params.seed)?;
            let mut rng = stream(derive_seed(params.seed, 0x57), 0);
            let mut w = Vec::with_capacity(n);
            let mut z = Vec::with_capacity(n);
            for i in 0..n {
                w.push(part.sample_in_cell(i, &mut rng).to_complex()?);
                z.push(part.sample_in_cell(i, &mut rng).to_complex()?);
            }
            Ok((dedup(w, params, 1), dedup(z, params, 2)))
        }
        SamplingMode::Sampled => {
            let class = |tag: u64| -> Vec<ComplexUnitVector> {
                let s = derive_seed(params.seed, tag);
                let pts = (0..n)
                    .into_par_iter()
                    .map(|i| ComplexUnitVector::random(&mut stream(s, i as u64), k))
                    .collect();
                dedup(pts, params, tag)
            };
            Ok((class(1), class(2)))
        }
        SamplingMode::Orbits => {
            let class = |tag: u64| -> Vec<ComplexUnitVector> {
                let s = derive_seed(params.seed, tag);
                let p = params.p as usize;
                let noise = 0.2 * params.mu().sqrt();
                let pts = (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let base = ComplexUnitVector::random(&mut stream(s, (i / p) as u64), k);
                        let mut rng = stream(derive_seed(s, 0x0b), i as u64);
                        perturb(&base.scale(root_of_unity(params.p, (i % p) as u32)), noise, &mut rng)
                    })
                    .collect();
                dedup(pts, params, tag)
            };
            Ok((class(1), class(2)))
        }
    }
}

/// Moves `v` by a uniformly oriented step of length `r`, then renormalizes.
fn perturb<R: Rng + ?Sized>(v: &ComplexUnitVector, r: f64, rng: &mut R) -> ComplexUnitVector {
    let dir = ComplexUnitVector::random(rng, v.dim());
    let coords = v.coords().iter().zip(dir.coords()).map(|(a, b)| a + b * r).collect();
    ComplexUnitVector::new(coords).expect("r < 1 keeps the vector nonzero")
}

/// Replaces exact duplicates with fresh uniform points.
fn dedup(mut pts: Vec<ComplexUnitVector>, params: &CbeParams, tag: u64) -> Vec<ComplexUnitVector> {
    let key = |v: &ComplexUnitVector| -> Vec<u64> {
        v.coords().iter().flat_map(|c| [c.re.to_bits(), c.im.to_bits()]).collect()
    };
    let mut seen = HashSet::new();
    let mut rng = stream(derive_seed(params.seed, 0xd0 + tag), 0);
    for v in pts.iter_mut() {
        while !seen.insert(key(v)) {
            *v = ComplexUnitVector::random(&mut rng, params.k);
        }
    }
    pts
}

/// Edge counts, densities and degree extremes of a generated graph.
#[derive(Clone, Debug, Serialize)]
pub struct CbeStats {
    pub n: usize,
    pub inner_edges_w: usize,
    pub inner_edges_z: usize,
    pub cross_edges: usize,
    pub cross_density: f64,
    pub max_inner_degree: usize,
    /// `p · e^{−k(1−µ)²} · n + 3√n`.
    pub inner_degree_bound: f64,
    pub min_cross_degree: usize,
    pub max_cross_degree: usize,
    pub warnings: Vec<String>,
}

impl CbeGraph {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn point(&self, v: usize) -> &ComplexUnitVector {
        let n = self.n();
        if v < n {
            &self.w[v]
        } else {
            &self.z[v - n]
        }
    }

    pub fn is_inner_pair(&self, u: usize, v: usize) -> bool {
        (u < self.n()) == (v < self.n())
    }

    pub fn rotation_label(&self, u: usize, v: usize) -> Option<u32> {
        if u < v {
            self.rotation_labels.get(&(u, v)).copied()
        } else {
            // u ≈ ρ^h v  ⇔  v ≈ ρ^{−h} u
            self.rotation_labels.get(&(v, u)).map(|&h| (self.params.p - h) % self.params.p)
        }
    }

    pub fn stats(&self) -> CbeStats {
        let n = self.n();
        let g = &self.graph;
        let (mut iw, mut iz, mut cross) = (0, 0, 0);
        for (u, v) in g.edges() {
            match (u < n, v < n) {
                (true, true) => iw += 1,
                (false, false) => iz += 1,
                _ => cross += 1,
            }
        }
        let (mut max_inner, mut min_cross, mut max_cross) = (0, usize::MAX, 0);
        for v in 0..2 * n {
            let same = if v < n { 0..n } else { n..2 * n };
            let inner = g.neighbors(v).iter().filter(|u| same.contains(u)).count();
            let c = g.degree(v) - inner;
            max_inner = max_inner.max(inner);
            min_cross = min_cross.min(c);
            max_cross = max_cross.max(c);
        }
        let mu = self.params.mu();
        let k = self.params.k as f64;
        let bound = self.params.p as f64 * (-k * (1.0 - mu).powi(2)).exp() * n as f64 + 3.0 * (n as f64).sqrt();
        let mut warnings = self.params.warnings();
        let target = self.params.ell as f64 / self.params.p as f64;
        if self.params.k >= 32 {
            let lo = ((target - 0.2) * n as f64).max(0.0);
            let hi = (target + 0.2) * n as f64;
            if (min_cross as f64) < lo || (max_cross as f64) > hi {
                warnings.push(format!(
                    "cross degrees span [{min_cross}, {max_cross}], outside ({target:.3} ± 0.2)·n"
                ));
            }
        }
        CbeStats {
            n,
            inner_edges_w: iw,
            inner_edges_z: iz,
            cross_edges: cross,
            cross_density: cross as f64 / (n * n) as f64,
            max_inner_degree: max_inner,
            inner_degree_bound: bound,
            min_cross_degree: min_cross,
            max_cross_degree: max_cross,
            warnings,
        }
    }
}
