use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};

/// `ϱ*_p(q)` together with the decomposition `q = p·t + r + 2`, `0 ≤ r < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoStar {
    pub value: BigRational,
    pub t: BigInt,
    pub r: BigInt,
}

pub fn rho_star(p: u64, q: u64) -> Result<RhoStar> {
    rho_star_big(&BigInt::from(p), &BigInt::from(q))
}

pub fn rho_star_big(p: &BigInt, q: &BigInt) -> Result<RhoStar> {
    if *p < BigInt::one() {
        return Err(invalid("p must be positive"));
    }
    if *q < p + 2 {
        return Err(invalid(format!("need q ≥ p + 2, got p = {p}, q = {q}")));
    }
    let m = q - 2;
    let t = &m / p;
    let r = &m % p;
    let base = BigInt::from(2) * p - &r - 1;
    let num = (&t - 1) * &base + &r + 1;
    let den = &t * &base + &r + 1;
    Ok(RhoStar { value: BigRational::new(num, den), t, r })
}

/// Density of the multipartite construction against `ϱ*` at
/// `p⋆ = 2^ℓ`, `q⋆ = 2^ℓ + 2^p + q − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipartiteDensity {
    pub p_star: BigInt,
    pub q_star: BigInt,
    /// `(1 / 2^{ℓ−p}) (1 − 1/q)`.
    pub density: BigRational,
    pub rho_star: BigRational,
    /// Construction density strictly above `ϱ*`.
    pub strict: bool,
    /// `q(q−2) ≤ 2^p ≤ q²`, where the density is known to be tight.
    pub equality_window: bool,
}

pub fn theorem13_density(ell: u32, p: u32, q: u32) -> Result<MultipartiteDensity> {
    if q < 2 || q % 2 != 0 {
        return Err(invalid(format!("q must be even and at least 2, got {q}")));
    }
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    if (ell as u64) < p as u64 * (q as u64 - 1) {
        return Err(invalid(format!("need ell ≥ p(q−1) = {}, got {ell}", p as u64 * (q as u64 - 1))));
    }
    let two = BigInt::from(2);
    let p_star = two.pow(ell);
    let two_p = two.pow(p);
    let q_star = &p_star + &two_p + BigInt::from(q) - 1;
    let density = BigRational::new(BigInt::one(), two.pow(ell - p))
        * (BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(q)));
    let rho = rho_star_big(&p_star, &q_star)?.value;
    let qb = BigInt::from(q);
    let equality_window = &qb * (&qb - 2) <= two_p && two_p <= &qb * &qb;
    Ok(MultipartiteDensity {
        strict: density > rho,
        p_star,
        q_star,
        density,
        rho_star: rho,
        equality_window,
    })
}

/// `ℓ / (2p)`, the two-class density lower bound.
pub fn two_class_density(p: u64, ell: u64) -> Result<BigRational> {
    if p == 0 || ell == 0 || ell >= p {
        return Err(invalid(format!("need 1 ≤ ell < p, got p = {p}, ell = {ell}")));
    }
    Ok(BigRational::new(BigInt::from(ell), BigInt::from(2 * p)))
}

/// Plain-text rendering used by reports and the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct RationalRow {
    pub p: String,
    pub q: String,
    pub t: String,
    pub r: String,
    pub value: String,
    pub approx: f64,
}

pub fn rho_star_row(p: u64, q: u64) -> Result<RationalRow> {
    let rs = rho_star(p, q)?;
    Ok(RationalRow {
        p: p.to_string(),
        q: q.to_string(),
        t: rs.t.to_string(),
        r: rs.r.to_string(),
        approx: to_f64(&rs.value),
        value: rs.value.to_string(),
    })
}

pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if x.is_zero() {
        return 0.0;
    }
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rho_star_examples() {
        assert_eq!(rho_star(3, 5).unwrap().value, rat(1, 6));
        assert_eq!(rho_star(3, 8).unwrap().value, rat(6, 11));
        assert_eq!(rho_star(4, 6).unwrap().value, rat(1, 8));
        let rs = rho_star(5, 13).unwrap();
        assert_eq!((rs.t, rs.r), (BigInt::from(2), BigInt::from(1)));
        assert!(rho_star(3, 4).is_err());
        assert!(rho_star(0, 4).is_err());
    }

    #[test]
    fn rho_star_nondecreasing() {
        for p in 1..=10u64 {
            let mut prev = BigRational::zero();
            for q in p + 2..=60 {
                let v = rho_star(p, q).unwrap().value;
                assert!(v >= prev, "p {p} q {q}");
                assert!(v < BigRational::one());
                prev = v;
            }
        }
    }

    #[test]
    fn separation_at_512() {
        let d = theorem13_density(9, 3, 4).unwrap();
        assert_eq!(d.p_star, BigInt::from(512));
        assert_eq!(d.q_star, BigInt::from(523));
        assert_eq!(d.density, rat(6, 512));
        assert_eq!(d.rho_star, rat(5, 512));
        assert!(d.strict && d.equality_window);
    }

    #[test]
    fn q_two_not_strict() {
        for (ell, p) in [(1, 1), (4, 2), (6, 3)] {
            let d = theorem13_density(ell, p, 2).unwrap();
            assert_eq!(d.density, BigRational::new(BigInt::one(), BigInt::from(2).pow(ell - p + 1)));
            assert!(!d.strict);
        }
        assert!(theorem13_density(9, 3, 3).is_err());
        assert!(theorem13_density(8, 3, 4).is_err());
    }

    #[test]
    fn two_class_matches_rho_star() {
        for p in 2..=10u64 {
            for ell in 1..=p / 2 {
                assert_eq!(rho_star(p, p + ell + 1).unwrap().value, two_class_density(p, ell).unwrap());
            }
        }
    }
}
