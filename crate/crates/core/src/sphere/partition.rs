//! Recursive zonal partition of `S^{d-1}(R)` into cells of equal measure.
//!
//! A sphere of ambient dimension `d ≥ 3` is cut by polar angle `θ` (measured
//! from `e_1`) into two polar caps holding one cell each and a run of collars.
//! Collar boundaries are placed at quantiles of the polar-angle distribution so
//! that a collar holding `c` cells has measure exactly `c/n`; each collar is the
//! product of its `θ`-interval with a partition of `S^{d-2}` into `c` cells,
//! built recursively. The circle is split into equal arcs. Because the uniform
//! measure factors as (polar density) × (uniform on `S^{d-2}`), every cell has
//! measure `1/n` by construction.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::{beta::beta_reg, gamma::ln_gamma};

use super::vector::{ComplexUnitVector, RealUnitVector};
use crate::error::{invalid, Error, Result};
use crate::rng::{self, StreamRng};

#[derive(Debug)]
enum Zone {
    Whole,
    Arcs(usize),
    Zonal { dim: usize, bands: Vec<Band> },
}

#[derive(Debug)]
struct Band {
    theta_lo: f64,
    theta_hi: f64,
    cdf_lo: f64,
    cdf_hi: f64,
    first_cell: usize,
    cells: usize,
    /// `None` for a polar cap (a single cell).
    sub: Option<Arc<Node>>,
}

#[derive(Debug)]
struct Node {
    zone: Zone,
    cells: usize,
    diameter: f64,
}

/// Equal-measure partition of a real sphere with one representative per cell.
#[derive(Debug, Clone)]
pub struct SpherePartition {
    ambient_dim: usize,
    root: Arc<Node>,
    representatives: Vec<RealUnitVector>,
}

/// Serialized form of a partition of a complex sphere.
#[derive(Debug, Serialize)]
pub struct PartitionExport {
    pub k: usize,
    pub n: usize,
    pub max_diameter: f64,
    pub representatives: Vec<Vec<[f64; 2]>>,
}

/// Partitions `S^{k-1}(C)` (through the isometry onto `S^{2k-1}(R)`) into `n`
/// cells of equal measure, each of diameter at most `delta`.
pub fn partition_sphere(k: usize, n: usize, delta: f64, seed: u64) -> Result<SpherePartition> {
    if k == 0 {
        return Err(invalid("complex dimension k must be >= 1"));
    }
    partition_real_sphere(2 * k, n, delta, seed)
}

/// Partitions `S^{d-1}(R) ⊂ R^d` into `n` cells of equal measure and diameter at
/// most `delta`.
pub fn partition_real_sphere(d: usize, n: usize, delta: f64, seed: u64) -> Result<SpherePartition> {
    let part = SpherePartition::build(d, n, seed)?;
    if !(delta > 0.0) {
        return Err(invalid(format!("diameter bound delta={delta} must be positive")));
    }
    if part.max_diameter() > delta + crate::GEOM_TOL {
        return Err(Error::InfeasiblePartition {
            sphere_dim: d - 1,
            cells: n,
            achieved: part.max_diameter(),
            requested: delta,
        });
    }
    Ok(part)
}

impl SpherePartition {
    /// Builds the partition without a diameter requirement.
    pub fn build(d: usize, n: usize, seed: u64) -> Result<Self> {
        if d < 2 {
            return Err(invalid("partitions need ambient dimension d >= 2"));
        }
        if n == 0 {
            return Err(invalid("cell count n must be >= 1"));
        }
        let mut builder = Builder::default();
        let root = builder.node(d, n);
        let mut part = SpherePartition {
            ambient_dim: d,
            root,
            representatives: Vec::new(),
        };
        part.representatives = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = rng::stream(seed, i as u64);
                loop {
                    let x = part.sample_in_cell(i, &mut r);
                    if part.locate(&x) == i {
                        return x;
                    }
                }
            })
            .collect();
        Ok(part)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.root.cells
    }

    pub fn is_empty(&self) -> bool {
        self.root.cells == 0
    }

    /// Upper bound on the diameter of every cell.
    pub fn max_diameter(&self) -> f64 {
        self.root.diameter
    }

    pub fn representatives(&self) -> &[RealUnitVector] {
        &self.representatives
    }

    /// Representatives pulled back to the complex sphere (even `d` only).
    pub fn complex_representatives(&self) -> Result<Vec<ComplexUnitVector>> {
        self.representatives.iter().map(|r| r.to_complex()).collect()
    }

    /// Index of the cell containing `x`.
    pub fn locate(&self, x: &RealUnitVector) -> usize {
        locate(&self.root, x.coords())
    }

    /// A uniform random point of cell `i`.
    pub fn sample_in_cell<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> RealUnitVector {
        assert!(i < self.len(), "cell {i} out of range");
        RealUnitVector::from_unit_unchecked(sample(&self.root, self.ambient_dim, i, rng))
    }

    /// Hit counts per cell for `samples` uniform points.
    pub fn monte_carlo_counts(&self, samples: u64, seed: u64) -> Vec<u64> {
        let n = self.len();
        let chunks = samples.div_ceil(rng::CHUNK as u64);
        (0..chunks)
            .into_par_iter()
            .fold(
                || vec![0u64; n],
                |mut acc, c| {
                    let mut r: StreamRng = rng::stream(seed, c);
                    let lo = c * rng::CHUNK as u64;
                    let hi = (lo + rng::CHUNK as u64).min(samples);
                    for _ in lo..hi {
                        let x = RealUnitVector::random(&mut r, self.ambient_dim);
                        acc[self.locate(&x)] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    }

    /// JSON-ready export; only meaningful for partitions of a complex sphere.
    pub fn export(&self) -> Result<PartitionExport> {
        if self.ambient_dim % 2 != 0 {
            return Err(invalid("export requires a partition of a complex sphere"));
        }
        let representatives = self
            .complex_representatives()?
            .iter()
            .map(|z| z.coords().iter().map(|c: &Complex64| [c.re, c.im]).collect())
            .collect();
        Ok(PartitionExport {
            k: self.ambient_dim / 2,
            n: self.len(),
            max_diameter: self.max_diameter(),
            representatives,
        })
    }
}

#[derive(Default)]
struct Builder {
    cache: HashMap<(usize, usize), Arc<Node>>,
}

impl Builder {
    fn node(&mut self, d: usize, n: usize) -> Arc<Node> {
        if let Some(node) = self.cache.get(&(d, n)) {
            return node.clone();
        }
        let node = Arc::new(self.make(d, n));
        self.cache.insert((d, n), node.clone());
        node
    }

    fn make(&mut self, d: usize, n: usize) -> Node {
        if d == 2 {
            let diameter = if n <= 1 { 2.0 } else { 2.0 * (PI / n as f64).sin() };
            return Node {
                zone: Zone::Arcs(n),
                cells: n,
                diameter,
            };
        }
        if n == 1 {
            return Node {
                zone: Zone::Whole,
                cells: 1,
                diameter: 2.0,
            };
        }
        let polar = PolarLaw::new(d);
        let cap_theta = if n == 2 { PI / 2.0 } else { polar.quantile(1.0 / n as f64) };

        // Cells per collar, rounded with carry so the total stays exact.
        let mut counts = Vec::new();
        if n > 2 {
            let cell_area = unit_sphere_area(d) / n as f64;
            let ideal_angle = cell_area.powf(1.0 / (d as f64 - 1.0));
            let collars = (((PI - 2.0 * cap_theta) / ideal_angle).round() as usize).max(1);
            let step = (PI - 2.0 * cap_theta) / collars as f64;
            let mut carry = 0.0;
            let mut assigned = 0usize;
            for j in 0..collars {
                let lo = polar.cdf(cap_theta + step * j as f64);
                let hi = polar.cdf(cap_theta + step * (j + 1) as f64);
                let ideal = (hi - lo) * n as f64 + carry;
                let mut c = ideal.round().max(0.0) as usize;
                if j + 1 == collars {
                    c = n - 2 - assigned;
                }
                c = c.min(n - 2 - assigned);
                carry = ideal - c as f64;
                assigned += c;
                if c > 0 {
                    counts.push(c);
                }
            }
        }

        let mut bands = Vec::with_capacity(counts.len() + 2);
        let theta_at = |cells: usize| -> f64 {
            if cells == 0 {
                0.0
            } else if cells == n {
                PI
            } else if n == 2 {
                PI / 2.0
            } else {
                polar.quantile(cells as f64 / n as f64)
            }
        };
        // (first cell, cell count) for north cap, collars, south cap
        let mut pieces: Vec<(usize, usize)> = vec![(0, 1)];
        let mut lo_cells = 1usize;
        for &c in &counts {
            pieces.push((lo_cells, c));
            lo_cells += c;
        }
        pieces.push((lo_cells, 1));
        debug_assert_eq!(lo_cells + 1, n);

        let last = pieces.len() - 1;
        for (idx, &(first, c)) in pieces.iter().enumerate() {
            let theta_lo = theta_at(first);
            let theta_hi = theta_at(first + c);
            let is_cap = idx == 0 || idx == last;
            let sub = if is_cap { None } else { Some(self.node(d - 1, c)) };
            bands.push(Band {
                theta_lo,
                theta_hi,
                cdf_lo: first as f64 / n as f64,
                cdf_hi: (first + c) as f64 / n as f64,
                first_cell: first,
                cells: c,
                sub,
            });
        }
        let diameter = bands
            .iter()
            .map(|b| band_diameter(b))
            .fold(0.0f64, f64::max);
        Node {
            zone: Zone::Zonal { dim: d, bands },
            cells: n,
            diameter,
        }
    }
}

fn band_diameter(b: &Band) -> f64 {
    match &b.sub {
        None => {
            // polar cap: the larger of the rim diameter and the pole-to-rim chord
            let theta = if b.theta_lo == 0.0 { b.theta_hi } else { PI - b.theta_lo };
            if theta >= PI / 2.0 {
                2.0
            } else {
                2.0 * theta.sin()
            }
        }
        Some(sub) => {
            let width = b.theta_hi - b.theta_lo;
            let s_max = if b.theta_lo <= PI / 2.0 && PI / 2.0 <= b.theta_hi {
                1.0
            } else {
                b.theta_lo.sin().max(b.theta_hi.sin())
            };
            (2.0 * (width / 2.0).sin() + s_max * sub.diameter).min(2.0)
        }
    }
}

fn unit_sphere_area(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    (2.0f64.ln() + half * PI.ln() - ln_gamma(half)).exp()
}

/// Distribution of the polar angle of a uniform point on `S^{d-1}`, `d ≥ 3`:
/// `P(θ ≤ t) = I_{sin²(t/2)}((d−1)/2, (d−1)/2)`.
struct PolarLaw {
    a: f64,
}

impl PolarLaw {
    fn new(d: usize) -> Self {
        PolarLaw {
            a: (d as f64 - 1.0) / 2.0,
        }
    }

    fn cdf(&self, theta: f64) -> f64 {
        if theta <= 0.0 {
            return 0.0;
        }
        if theta >= PI {
            return 1.0;
        }
        let x = (theta / 2.0).sin().powi(2);
        beta_reg(self.a, self.a, x)
    }

    fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return PI;
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn locate(node: &Node, x: &[f64]) -> usize {
    match &node.zone {
        Zone::Whole => 0,
        Zone::Arcs(c) => {
            let mut phi = x[1].atan2(x[0]);
            if phi < 0.0 {
                phi += 2.0 * PI;
            }
            ((phi * *c as f64 / (2.0 * PI)) as usize).min(c - 1)
        }
        Zone::Zonal { bands, .. } => {
            let tail = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
            let theta = tail.atan2(x[0]);
            let idx = bands
                .partition_point(|b| b.theta_hi < theta)
                .min(bands.len() - 1);
            let band = &bands[idx];
            match &band.sub {
                None => band.first_cell,
                Some(sub) => {
                    let y: Vec<f64> = if tail > 0.0 {
                        x[1..].iter().map(|v| v / tail).collect()
                    } else {
                        let mut e = vec![0.0; x.len() - 1];
                        e[0] = 1.0;
                        e
                    };
                    band.first_cell + locate(sub, &y)
                }
            }
        }
    }
}

fn sample<R: Rng + ?Sized>(node: &Node, d: usize, cell: usize, rng: &mut R) -> Vec<f64> {
    match &node.zone {
        Zone::Whole => RealUnitVector::random(rng, d).coords().to_vec(),
        Zone::Arcs(c) => {
            let width = 2.0 * PI / *c as f64;
            let phi = width * (cell as f64 + rng.random::<f64>());
            vec![phi.cos(), phi.sin()]
        }
        Zone::Zonal { dim, bands } => {
            let idx = bands.partition_point(|b| b.first_cell + b.cells <= cell);
            let band = &bands[idx];
            let law = PolarLaw::new(*dim);
            let u = band.cdf_lo + (band.cdf_hi - band.cdf_lo) * rng.random::<f64>();
            let theta = law.quantile(u).clamp(band.theta_lo, band.theta_hi);
            let y = match &band.sub {
                None => {
                    let g: Vec<f64> = (0..dim - 1).map(|_| rng.sample(StandardNormal)).collect();
                    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                    g.into_iter().map(|v| v / norm).collect::<Vec<_>>()
                }
                Some(sub) => sample(sub, dim - 1, cell - band.first_cell, rng),
            };
            let (s, c) = theta.sin_cos();
            std::iter::once(c).chain(y.into_iter().map(|v| s * v)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_quarters() {
        let p = partition_sphere(1, 4, 1.5, 0).unwrap();
        assert_eq!(p.len(), 4);
        assert!((p.max_diameter() - 2f64.sqrt()).abs() < 1e-12);
        let counts = p.monte_carlo_counts(40_000, 1);
        for c in counts {
            let f = c as f64 / 40_000.0;
            assert!((f - 0.25).abs() < 4.0 * (0.25 * 0.75 / 40_000f64).sqrt());
        }
    }

    #[test]
    fn single_cell_is_whole_sphere() {
        let p = SpherePartition::build(6, 1, 0).unwrap();
        assert_eq!(p.max_diameter(), 2.0);
        assert!(matches!(
            partition_sphere(3, 1, 1.0, 0),
            Err(Error::InfeasiblePartition { .. })
        ));
        assert!(partition_sphere(3, 1, 2.0, 0).is_ok());
    }

    #[test]
    fn representatives_lie_in_their_cells() {
        for (d, n) in [(3, 1), (3, 2), (3, 7), (4, 50), (6, 300), (10, 64)] {
            let p = SpherePartition::build(d, n, 2).unwrap();
            assert_eq!(p.len(), n);
            for (i, r) in p.representatives().iter().enumerate() {
                assert_eq!(p.locate(r), i, "d={d} n={n}");
                assert!((r.dot(r) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn locate_is_total() {
        let p = SpherePartition::build(6, 500, 3).unwrap();
        let mut r = rng::stream(4, 0);
        for _ in 0..100_000 {
            let x = RealUnitVector::random(&mut r, 6);
            assert!(p.locate(&x) < 500);
        }
    }

    #[test]
    fn samples_stay_within_reported_diameter() {
        let p = SpherePartition::build(4, 40, 5).unwrap();
        let mut r = rng::stream(6, 0);
        for cell in 0..40 {
            let pts: Vec<_> = (0..30).map(|_| p.sample_in_cell(cell, &mut r)).collect();
            for a in &pts {
                assert_eq!(p.locate(a), cell);
                for b in &pts {
                    assert!(a.dist(b) <= p.max_diameter() + 1e-9);
                }
            }
        }
    }

    #[test]
    fn more_cells_shrink_the_diameter() {
        let coarse = SpherePartition::build(3, 20, 0).unwrap().max_diameter();
        let fine = SpherePartition::build(3, 2000, 0).unwrap().max_diameter();
        assert!(fine < coarse);
        assert!(fine < 0.2);
    }

    #[test]
    fn export_shape() {
        let p = partition_sphere(2, 6, 2.0, 1).unwrap();
        let e = p.export().unwrap();
        assert_eq!(e.k, 2);
        assert_eq!(e.n, 6);
        assert_eq!(e.representatives.len(), 6);
        assert_eq!(e.representatives[0].len(), 2);
        let json = serde_json::to_value(&e).unwrap();
        assert!(json["max_diameter"].is_number());
    }

    #[test]
    fn polar_law_is_consistent() {
        let law = PolarLaw::new(5);
        assert!((law.cdf(PI / 2.0) - 0.5).abs() < 1e-12);
        for p in [0.01, 0.3, 0.77] {
            assert!((law.cdf(law.quantile(p)) - p).abs() < 1e-10);
        }
        // area of S^2 is 4π
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-9);
    }
}
