use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::vector::RealUnitVector;
use crate::error::{invalid, Result};
use crate::rng;

/// The cap `{x : ⟨x, center⟩ ≥ alpha}` of height `1 − alpha`.
///
/// Complex caps are handled through the isometry onto the real sphere of twice
/// the dimension; the real inner product there equals `Re⟨·,·⟩` upstairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SphericalCap {
    pub center: RealUnitVector,
    pub alpha: f64,
}

impl SphericalCap {
    pub fn new(center: RealUnitVector, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(invalid(format!("cap parameter alpha={alpha} outside [0,1)")));
        }
        Ok(SphericalCap { center, alpha })
    }

    pub fn height(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn diameter(&self) -> f64 {
        2.0 * (1.0 - self.alpha * self.alpha).sqrt()
    }

    pub fn contains(&self, x: &RealUnitVector) -> bool {
        x.dot(&self.center) >= self.alpha
    }
}

/// Upper bound `e^{-k α²}` on the measure of a cap of height `1 − α` in `S^{k-1}(C)`.
pub fn cap_measure_upper_bound(k: usize, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(invalid(format!("alpha={alpha} outside [0,1)")));
    }
    Ok((-(k as f64) * alpha * alpha).exp())
}

/// Lower bound `max(0, 1/2 − √2 δ)` on the measure of the set of points of
/// `S^{k-1}(C)` within distance `√2 − δ/√(2k)` of a fixed point.
pub fn cap_measure_lower_bound(k: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(invalid(format!("delta={delta} must be positive")));
    }
    if k < 3 {
        return Err(invalid(format!("lower cap bound needs k >= 3, got {k}")));
    }
    Ok((0.5 - std::f64::consts::SQRT_2 * delta).max(0.0))
}

/// Inner-product threshold of the cap used by [`cap_measure_lower_bound`]:
/// `|x − c| ≤ √2 − δ/√(2k)` iff `⟨x, c⟩ ≥ 1 − (√2 − δ/√(2k))² / 2`.
pub fn lower_bound_cap_threshold(k: usize, delta: f64) -> f64 {
    let r = std::f64::consts::SQRT_2 - delta / (2.0 * k as f64).sqrt();
    1.0 - r * r / 2.0
}

/// Monte Carlo estimate of a cap's normalized measure.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub hits: u64,
    pub samples: u64,
}

impl MeasureEstimate {
    pub fn fraction(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }

    /// Standard error of a Bernoulli mean with success probability `p`.
    pub fn std_error_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Estimates `λ({x ∈ S^{d-1}(R) : x_1 ≥ threshold})` from `samples` uniform
/// points. By rotation invariance this is the measure of any cap with that
/// inner-product threshold. Chunks draw from independent streams, so the
/// result does not depend on the thread count.
pub fn monte_carlo_cap_fraction(d: usize, threshold: f64, samples: u64, seed: u64) -> MeasureEstimate {
    let chunks = samples.div_ceil(rng::CHUNK as u64);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::stream(seed, c);
            let lo = c * rng::CHUNK as u64;
            let hi = (lo + rng::CHUNK as u64).min(samples);
            let mut h = 0u64;
            for _ in lo..hi {
                let first: f64 = r.sample(StandardNormal);
                let mut norm2 = first * first;
                for _ in 1..d {
                    let g: f64 = r.sample(StandardNormal);
                    norm2 += g * g;
                }
                if first >= threshold * norm2.sqrt() {
                    h += 1;
                }
            }
            h
        })
        .sum();
    MeasureEstimate { hits, samples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_bound_values() {
        assert_eq!(cap_measure_upper_bound(7, 0.0).unwrap(), 1.0);
        let v = cap_measure_upper_bound(10, 0.5).unwrap();
        assert!((v - (-2.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.082085).abs() < 1e-6);
        assert!(cap_measure_upper_bound(10, 1.0).is_err());
        assert!(cap_measure_upper_bound(10, -0.1).is_err());
    }

    #[test]
    fn lower_bound_values() {
        let v = cap_measure_lower_bound(5, 0.1).unwrap();
        assert!((v - 0.358579).abs() < 1e-6);
        assert_eq!(cap_measure_lower_bound(5, 0.4).unwrap(), 0.0);
        assert!(cap_measure_lower_bound(2, 0.1).is_err());
        assert!(cap_measure_lower_bound(5, 0.0).is_err());
    }

    #[test]
    fn cap_geometry() {
        let cap = SphericalCap::new(RealUnitVector::basis(3, 0), 0.6).unwrap();
        assert!((cap.diameter() - 1.6).abs() < 1e-12);
        assert!((cap.height() - 0.4).abs() < 1e-12);
        assert!(cap.contains(&RealUnitVector::basis(3, 0)));
        assert!(!cap.contains(&RealUnitVector::basis(3, 1)));
    }

    #[test]
    fn upper_bound_holds_by_sampling_k40() {
        // S^{39}(C) ≅ S^{79}(R); cap of height 1 − 0.3.
        let est = monte_carlo_cap_fraction(80, 0.3, 200_000, 5);
        let bound = cap_measure_upper_bound(40, 0.3).unwrap();
        assert!(est.fraction() <= bound, "{} > {}", est.fraction(), bound);
    }

    #[test]
    fn lower_bound_holds_by_sampling_k50() {
        let est = monte_carlo_cap_fraction(100, lower_bound_cap_threshold(50, 0.2), 200_000, 6);
        let bound = cap_measure_lower_bound(50, 0.2).unwrap();
        let se = est.std_error_at(bound.max(1e-12));
        assert!(est.fraction() >= bound - 4.0 * se);
    }

    #[test]
    fn estimate_is_thread_count_independent() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = pool.install(|| monte_carlo_cap_fraction(6, 0.2, 50_000, 9));
        let b = monte_carlo_cap_fraction(6, 0.2, 50_000, 9);
        assert_eq!(a.hits, b.hits);
    }
}
