use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const NORM_TOL: f64 = 1e-9;

/// A point of the real unit sphere `S^{d-1}(R) ⊂ R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealUnitVector {
    coords: Vec<f64>,
}

/// A point of the complex unit sphere `S^{k-1}(C) ⊂ C^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexUnitVector {
    coords: Vec<Complex64>,
}

impl RealUnitVector {
    /// Normalizes `coords` onto the sphere. Rejects empty and (numerically) zero
    /// vectors.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("real unit vector needs dimension >= 1"));
        }
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(invalid("cannot normalize a zero vector"));
        }
        Ok(RealUnitVector {
            coords: coords.into_iter().map(|x| x / norm).collect(),
        })
    }

    /// The `i`-th standard basis vector of `R^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut c = vec![0.0; d];
        c[i] = 1.0;
        RealUnitVector { coords: c }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        loop {
            let c: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(v) = Self::new(c) {
                return v;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        euclid(&self.coords, &other.coords)
    }

    pub fn neg(&self) -> Self {
        RealUnitVector {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    /// Inverse of [`complex_to_real`]; requires an even dimension.
    pub fn to_complex(&self) -> Result<ComplexUnitVector> {
        if self.coords.len() % 2 != 0 {
            return Err(invalid("odd real dimension has no complex preimage"));
        }
        let c = self
            .coords
            .chunks(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        ComplexUnitVector::new(c)
    }

    pub(crate) fn from_unit_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!((coords.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < NORM_TOL * 10.0);
        RealUnitVector { coords }
    }
}

impl ComplexUnitVector {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("complex unit vector needs dimension >= 1"));
        }
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(invalid("cannot normalize a zero vector"));
        }
        Ok(ComplexUnitVector {
            coords: coords.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn basis(k: usize, i: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); k];
        c[i] = Complex64::new(1.0, 0.0);
        ComplexUnitVector { coords: c }
    }

    /// Uniform point of `S^{k-1}(C)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Self {
        loop {
            let c: Vec<Complex64> = (0..k)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(v) = Self::new(c) {
                return v;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Hermitian inner product `⟨u, v⟩ = Σ u_i · conj(v_i)`, linear in `u`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|self − c·other|` for a unit scalar `c`, without allocating.
    pub fn dist_scaled(&self, c: Complex64, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - c * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Multiplies every coordinate by the unit scalar `c` (a rotation of the sphere).
    pub fn scale(&self, c: Complex64) -> Self {
        ComplexUnitVector {
            coords: self.coords.iter().map(|z| z * c).collect(),
        }
    }
}

/// The isometry `S^{k-1}(C) → S^{2k-1}(R)`, `(x_1+iy_1, …) ↦ (x_1, y_1, …)`.
pub fn complex_to_real(z: &ComplexUnitVector) -> RealUnitVector {
    let coords = z.coords.iter().flat_map(|c| [c.re, c.im]).collect();
    RealUnitVector { coords }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn isometry_examples() {
        let z = ComplexUnitVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(complex_to_real(&z).coords(), &[1.0, 0.0, 0.0, 0.0]);
        let z = ComplexUnitVector::new(vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(complex_to_real(&z).coords(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn isometry_preserves_distances() {
        let mut r = rng::stream(11, 0);
        for _ in 0..100 {
            let a = ComplexUnitVector::random(&mut r, 5);
            let b = ComplexUnitVector::random(&mut r, 5);
            let d_c = a.dist(&b);
            let d_r = complex_to_real(&a).dist(&complex_to_real(&b));
            assert!((d_c - d_r).abs() <= 1e-12);
            let back = complex_to_real(&a).to_complex().unwrap();
            assert!(back.dist(&a) < 1e-12);
        }
    }

    #[test]
    fn construction_normalizes() {
        let z = ComplexUnitVector::new(vec![c(3.0, 4.0)]).unwrap();
        assert!((z.coords()[0].norm() - 1.0).abs() < 1e-12);
        let x = RealUnitVector::new(vec![3.0, 4.0]).unwrap();
        assert!((x.dot(&x) - 1.0).abs() < 1e-12);
        assert!(RealUnitVector::new(vec![]).is_err());
        assert!(RealUnitVector::new(vec![0.0, 0.0]).is_err());
        assert!(ComplexUnitVector::new(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_argument() {
        let mut r = rng::stream(3, 1);
        let a = ComplexUnitVector::random(&mut r, 4);
        let b = ComplexUnitVector::random(&mut r, 4);
        let rho = Complex64::from_polar(1.0, 0.7);
        let lhs = a.inner(&b.scale(rho));
        let rhs = rho.conj() * a.inner(&b);
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((a.inner(&a).re - 1.0).abs() < 1e-12);
    }
}
