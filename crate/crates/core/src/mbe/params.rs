use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest number of vertices per class, `(m·t^{1/ℓ})^ℓ`.
pub const CLASS_VERTEX_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MbeParams {
    pub ell: u32,
    pub p: u32,
    pub q: u32,
    /// Each coordinate lives on `S^k(R) ⊂ R^{k+1}`.
    pub k: usize,
    /// Points per coordinate sphere; even.
    pub m: usize,
    pub epsilon: f64,
    /// Blow-up multiplicity; a perfect `ℓ`-th power.
    pub t: u64,
    /// Probability that each extra blown-up hyperedge survives.
    pub retention: f64,
    pub seed: u64,
}

impl MbeParams {
    pub const DEFAULT_EPSILON: f64 = 0.05;
    pub const DEFAULT_RETENTION: f64 = 0.5;

    pub fn new(ell: u32, p: u32, q: u32, k: usize, m: usize, seed: u64) -> Result<Self> {
        let params = MbeParams {
            ell,
            p,
            q,
            k,
            m,
            epsilon: Self::DEFAULT_EPSILON,
            t: 1,
            retention: Self::DEFAULT_RETENTION,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_blowup(mut self, t: u64) -> Result<Self> {
        self.t = t;
        self.validate()?;
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_retention(mut self, retention: f64) -> Result<Self> {
        self.retention = retention;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || self.q % 2 != 0 {
            return Err(invalid(format!("q must be even and at least 2, got {}", self.q)));
        }
        if self.p < 1 {
            return Err(invalid("p must be positive"));
        }
        if (self.ell as u64) < self.p as u64 * (self.q as u64 - 1) {
            return Err(invalid(format!(
                "need ell ≥ p(q−1) = {}, got {}",
                self.p as u64 * (self.q as u64 - 1),
                self.ell
            )));
        }
        if self.ell > 6 {
            return Err(Error::SizeLimit(format!("ell ≤ 6 supported, got {}", self.ell)));
        }
        if self.k < 1 {
            return Err(invalid("k must be positive"));
        }
        if self.m < 2 || self.m % 2 != 0 {
            return Err(invalid(format!("m must be even and at least 2, got {}", self.m)));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(invalid(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(0.0..=1.0).contains(&self.retention) {
            return Err(invalid(format!("retention must lie in [0, 1], got {}", self.retention)));
        }
        let Some(_) = self.copies_per_coordinate() else {
            return Err(invalid(format!("t = {} is not a perfect {}-th power", self.t, self.ell)));
        };
        let per_class = (self.points_per_coordinate() as u128).pow(self.ell);
        if per_class > CLASS_VERTEX_LIMIT as u128 {
            return Err(Error::SizeLimit(format!(
                "{per_class} vertices per class exceeds {CLASS_VERTEX_LIMIT}"
            )));
        }
        Ok(())
    }

    /// `µ = ε / √k`.
    pub fn mu(&self) -> f64 {
        self.epsilon / (self.k as f64).sqrt()
    }

    /// `r = 2^ℓ`.
    pub fn r(&self) -> usize {
        1 << self.ell
    }

    /// `ζ = exp(−kµ / (3·2^{2ℓ}))`.
    pub fn zeta(&self) -> f64 {
        (-(self.k as f64) * self.mu() / (3.0 * 4f64.powi(self.ell as i32))).exp()
    }

    /// `t^{1/ℓ}`, if integral.
    pub fn copies_per_coordinate(&self) -> Option<usize> {
        if self.t == 0 {
            return None;
        }
        let guess = (self.t as f64).powf(1.0 / self.ell as f64).round() as u64;
        (guess.saturating_sub(1)..=guess + 1)
            .find(|&s| s > 0 && s.checked_pow(self.ell) == Some(self.t))
            .map(|s| s as usize)
    }

    /// Coordinate points including blow-up copies, `m · t^{1/ℓ}`.
    pub fn points_per_coordinate(&self) -> usize {
        self.m * self.copies_per_coordinate().unwrap_or(1)
    }

    pub fn vertices_per_class(&self) -> usize {
        self.points_per_coordinate().pow(self.ell)
    }

    /// `2^ℓ + 2^p + q − 2`.
    pub fn clique_bound(&self) -> usize {
        (1usize << self.ell) + (1usize << self.p) + self.q as usize - 2
    }

    /// `1 / 2^{ℓ−p}`.
    pub fn target_cross_density(&self) -> f64 {
        0.5f64.powi((self.ell - self.p) as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_and_derived() {
        assert!(MbeParams::new(2, 1, 3, 12, 8, 0).is_err());
        assert!(MbeParams::new(2, 1, 4, 12, 8, 0).is_err());
        assert!(MbeParams::new(2, 1, 2, 12, 7, 0).is_err());
        let prm = MbeParams::new(2, 1, 2, 12, 8, 0).unwrap();
        assert_eq!(prm.r(), 4);
        assert_eq!(prm.mu(), 0.05 / 12f64.sqrt());
        let z = (-12.0 * prm.mu() / 48.0).exp();
        assert_eq!(prm.zeta(), z);
        assert_eq!(prm.clique_bound(), 4 + 2 + 0);
        assert!(prm.clone().with_blowup(8).is_err());
        assert_eq!(prm.clone().with_blowup(9).unwrap().copies_per_coordinate(), Some(3));
        assert_eq!(MbeParams::new(3, 1, 4, 8, 4, 0).unwrap().clique_bound(), 12);
    }
}
