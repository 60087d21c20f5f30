//! Finite configuration checks on sphere point sets.

use super::vector::{ComplexUnitVector, RealUnitVector};
use crate::GEOM_TOL;

/// Whether `max_{a∈A, b∈B} |a − b| ≥ 2 − ν`.
pub fn two_set_distance_check(a: &[ComplexUnitVector], b: &[ComplexUnitVector], nu: f64) -> bool {
    max_distance(a, b) >= 2.0 - nu - GEOM_TOL
}

/// `d_max(A, B)`; 0 for empty inputs.
pub fn max_distance(a: &[ComplexUnitVector], b: &[ComplexUnitVector]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.dist(y)))
        .fold(0.0, f64::max)
}

/// Four points forming a forbidden rhombus: two almost-antipodal pairs with all
/// cross distances at most `√2 − μ`.
#[derive(Clone, Debug)]
pub struct RhombusWitness {
    pub p: [RealUnitVector; 2],
    pub q: [RealUnitVector; 2],
}

/// Searches for `p₁,p₂ ∈ P`, `q₁,q₂ ∈ Q` with `|p₁−p₂| ≥ 2−μ`, `|q₁−q₂| ≥ 2−μ`
/// and `|p_i − q_j| ≤ √2 − μ` for all `i, j`. For genuine unit vectors and
/// `0 < μ < 1/4` no such quadruple exists (the two diagonals of a Euclidean
/// quadrilateral satisfy `|p₁−p₂|² + |q₁−q₂|² ≤ Σ|p_i − q_j|²`), so a witness
/// signals that the inputs are not what the caller believes they are.
///
/// The search enumerates almost-antipodal pairs of each side and tests every
/// combination, which covers every quadruple that could qualify.
pub fn rhombus_search(p: &[RealUnitVector], q: &[RealUnitVector], mu: f64) -> Option<RhombusWitness> {
    let far = 2.0 - mu - GEOM_TOL;
    let near = std::f64::consts::SQRT_2 - mu + GEOM_TOL;
    let pairs = |s: &[RealUnitVector]| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if s[i].dist(&s[j]) >= far {
                    out.push((i, j));
                }
            }
        }
        out
    };
    let pp = pairs(p);
    if pp.is_empty() {
        return None;
    }
    let qp = pairs(q);
    for &(a, b) in &pp {
        for &(c, d) in &qp {
            let ok = [(a, c), (a, d), (b, c), (b, d)]
                .iter()
                .all(|&(i, j)| p[i].dist(&q[j]) <= near);
            if ok {
                return Some(RhombusWitness {
                    p: [p[a].clone(), p[b].clone()],
                    q: [q[c].clone(), q[d].clone()],
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn two_set_examples() {
        let e1 = ComplexUnitVector::basis(3, 0);
        let m1 = e1.scale(num_complex::Complex64::new(-1.0, 0.0));
        assert!(two_set_distance_check(&[e1.clone()], &[m1], 0.0));
        assert!(!two_set_distance_check(&[e1.clone()], &[e1], 1.0));
    }

    #[test]
    fn rhombus_examples() {
        let e1 = RealUnitVector::basis(4, 0);
        let e2 = RealUnitVector::basis(4, 1);
        let p = vec![e1.clone(), e1.neg()];
        let q = vec![e2.clone(), e2.neg()];
        assert!(rhombus_search(&p, &q, 0.1).is_none());
        assert!(rhombus_search(&[e1.clone()], &[e1], 0.2).is_none());
    }

    /// Brute force over every (p₁,p₂,q₁,q₂) as an independent oracle.
    fn brute(p: &[RealUnitVector], q: &[RealUnitVector], mu: f64) -> bool {
        let far = 2.0 - mu - GEOM_TOL;
        let near = std::f64::consts::SQRT_2 - mu + GEOM_TOL;
        for a in p {
            for b in p {
                if a.dist(b) < far {
                    continue;
                }
                for c in q {
                    for d in q {
                        if c.dist(d) >= far
                            && a.dist(c) <= near
                            && a.dist(d) <= near
                            && b.dist(c) <= near
                            && b.dist(d) <= near
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn pair_search_agrees_with_brute_force() {
        let mut r = rng::stream(21, 0);
        for trial in 0..20 {
            // plant near-antipodal pairs so the far-pair lists are not empty
            let mut pts = Vec::new();
            for _ in 0..15 {
                let x = RealUnitVector::random(&mut r, 4);
                pts.push(x.neg());
                pts.push(x);
            }
            let mu = 0.05 + 0.01 * trial as f64;
            assert_eq!(rhombus_search(&pts, &pts, mu).is_some(), brute(&pts, &pts, mu));
            assert!(rhombus_search(&pts, &pts, mu).is_none());
        }
    }
}
