use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use super::graph::{full_mask, mask_to_vec, PWeightedGraph};
use crate::error::{Error, Result};
use crate::rng::stream;

/// Largest matrix solved exactly.
pub const EXACT_SIMPLEX_LIMIT: usize = 16;
const NUMERIC_STEPS: usize = 10_000;
const NUMERIC_RESTARTS: usize = 50;

/// Maximizer of `uᵀAu` over the probability simplex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexSolution {
    pub value: f64,
    pub u: Vec<f64>,
    pub support: Vec<usize>,
    /// Exact optimum when solved in rationals; `None` in numeric mode.
    #[serde(skip)]
    pub exact: Option<ExactOptimum>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactOptimum {
    pub value: BigRational,
    pub u: Vec<BigRational>,
}

impl SimplexSolution {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// Stationary point supported exactly on `mask`, if one exists.
struct Candidate {
    mask: u64,
    value: BigRational,
    u: Vec<BigRational>,
}

/// `g(A) = max uᵀAu` over the simplex, exactly for `m ≤ 16`.
///
/// Every local optimum with support `S` has equal row sums `(A u)_j = g` on
/// `S`; together with `Σ u = 1` that is a square linear system. A minimal
/// optimal support is positive and makes the system nonsingular, so scanning
/// positive supports and keeping nonnegative solutions finds the optimum.
pub fn g_of_a(a: &PWeightedGraph) -> SimplexSolution {
    if a.len() > EXACT_SIMPLEX_LIMIT {
        return g_of_a_numeric(a, 0);
    }
    match best_candidate(a, full_mask(a.len())) {
        Some(c) => to_solution(a.len(), c),
        None => empty_solution(a.len()),
    }
}

/// Minimal `J` with `g(A[J]) ≥ g(A)`, and the optimum of `A[J]` in the
/// labels of `J`.
pub fn dense_core(a: &PWeightedGraph) -> Result<(Vec<usize>, SimplexSolution)> {
    let m = a.len();
    if m > EXACT_SIMPLEX_LIMIT {
        return Err(Error::SizeLimit(format!("dense core needs m ≤ {EXACT_SIMPLEX_LIMIT}, got {m}")));
    }
    let cands = candidates(a, full_mask(m));
    let Some(g) = cands.iter().map(|c| &c.value).max().cloned() else {
        return Ok((vec![], empty_solution(0)));
    };
    if g.is_zero() {
        // The empty index set already attains g = 0.
        return Ok((vec![], empty_solution(0)));
    }
    let core = cands
        .into_iter()
        .filter(|c| c.value == g)
        .min_by_key(|c| (c.mask.count_ones(), c.mask))
        .unwrap();
    let j = mask_to_vec(core.mask);
    let u = j.iter().map(|&i| core.u[i].clone()).collect();
    let sol = to_solution(j.len(), Candidate { mask: full_mask(j.len()), value: core.value, u });
    Ok((j, sol))
}

fn empty_solution(m: usize) -> SimplexSolution {
    SimplexSolution {
        value: 0.0,
        u: vec![0.0; m],
        support: vec![],
        exact: Some(ExactOptimum { value: BigRational::zero(), u: vec![BigRational::zero(); m] }),
    }
}

fn to_solution(m: usize, c: Candidate) -> SimplexSolution {
    debug_assert_eq!(c.u.len(), m);
    SimplexSolution {
        value: c.value.to_f64().unwrap_or(f64::NAN),
        u: c.u.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        support: mask_to_vec(c.mask),
        exact: Some(ExactOptimum { value: c.value, u: c.u }),
    }
}

fn best_candidate(a: &PWeightedGraph, within: u64) -> Option<Candidate> {
    candidates(a, within)
        .into_iter()
        .reduce(|best, c| if c.value > best.value { c } else { best })
}

/// All nonsingular, strictly feasible stationary points on positive supports.
fn candidates(a: &PWeightedGraph, within: u64) -> Vec<Candidate> {
    let m = a.len();
    let mut out = Vec::new();
    let mut s = within;
    while s != 0 {
        if a.is_positive_on(s) {
            if let Some(c) = solve_support(a, m, s) {
                out.push(c);
            }
        }
        s = (s - 1) & within;
    }
    out
}

fn solve_support(a: &PWeightedGraph, m: usize, mask: u64) -> Option<Candidate> {
    let idx = mask_to_vec(mask);
    let k = idx.len();
    // Unknowns u_{idx[0..k]}, λ.  Rows: Σ_i a_{ij} u_i − λ = 0 for j; Σ u_i = 1.
    let mut mat: Vec<Vec<BigRational>> = Vec::with_capacity(k + 1);
    for &j in &idx {
        let mut row: Vec<BigRational> = idx.iter().map(|&i| int(a.weight(i, j) as i64)).collect();
        row.push(int(-1));
        row.push(BigRational::zero());
        mat.push(row);
    }
    let mut last = vec![BigRational::one(); k];
    last.push(BigRational::zero());
    last.push(BigRational::one());
    mat.push(last);
    let x = gauss(mat)?;
    if x[..k].iter().any(|v| !v.is_positive()) {
        return None;
    }
    let mut u = vec![BigRational::zero(); m];
    for (t, &i) in idx.iter().enumerate() {
        u[i] = x[t].clone();
    }
    Some(Candidate { mask, value: x[k].clone(), u })
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Solves an augmented square system; `None` if singular.
fn gauss(mut a: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col][col..].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for c in col..=n {
                    let d = &f * &pivot_row[c];
                    row[c] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Multiplicative updates `u_i ← u_i (Au)_i / uᵀAu` from random starts.
pub fn g_of_a_numeric(a: &PWeightedGraph, seed: u64) -> SimplexSolution {
    let m = a.len();
    let rows: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a.weight(i, j) as f64).collect()).collect();
    let mut rng = stream(seed, 0x5158);
    let mut best = (f64::NEG_INFINITY, vec![0.0; m]);
    for restart in 0..NUMERIC_RESTARTS {
        let mut u: Vec<f64> = if restart == 0 {
            vec![1.0 / m as f64; m]
        } else {
            let e: Vec<f64> = (0..m).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|x| x / s).collect()
        };
        let mut val = 0.0;
        for _ in 0..NUMERIC_STEPS {
            let au: Vec<f64> = rows.iter().map(|r| r.iter().zip(&u).map(|(x, y)| x * y).sum()).collect();
            val = u.iter().zip(&au).map(|(x, y)| x * y).sum();
            if val <= 0.0 {
                break;
            }
            for (x, y) in u.iter_mut().zip(&au) {
                *x *= y / val;
            }
        }
        if val > best.0 {
            best = (val, u);
        }
    }
    let (value, u) = if m == 0 { (0.0, vec![]) } else { (best.0.max(0.0), best.1) };
    let support = (0..m).filter(|&i| u[i] > 1e-6).collect();
    SimplexSolution { value, u, support, exact: None }
}

/// Column sums `Σ_{i≠j} a_{ij} u_i` for each `j`, exactly.
pub fn row_sums(a: &PWeightedGraph, u: &[BigRational]) -> Vec<BigRational> {
    (0..a.len())
        .map(|j| {
            (0..a.len())
                .filter(|&i| i != j)
                .map(|i| int(a.weight(i, j) as i64) * &u[i])
                .fold(BigRational::zero(), |s, x| s + x)
        })
        .collect()
}

/// `u⊺Au` in exact arithmetic.
pub fn quadratic_form(a: &PWeightedGraph, u: &[BigRational]) -> BigRational {
    row_sums(a, u)
        .into_iter()
        .zip(u)
        .fold(BigRational::zero(), |s, (r, x)| s + r * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn random_matrix(seed: u64, p: u32, m: usize, zero_prob: f64) -> PWeightedGraph {
        let mut rng = stream(seed, 3);
        let upper: Vec<u32> = (0..m * (m - 1) / 2)
            .map(|_| if rng.random_bool(zero_prob) { 0 } else { rng.random_range(1..=p) })
            .collect();
        PWeightedGraph::from_upper_triangle(p, m, &upper).unwrap()
    }

    #[test]
    fn examples() {
        let e = PWeightedGraph::uniform(3, 0, 0).unwrap();
        assert_eq!(g_of_a(&e).exact.unwrap().value, rat(0, 1));
        let z = PWeightedGraph::uniform(3, 4, 0).unwrap();
        assert_eq!(g_of_a(&z).exact.unwrap().value, rat(0, 1));
        for w in 1..=4 {
            let two = PWeightedGraph::uniform(4, 2, w).unwrap();
            let s = g_of_a(&two);
            let ex = s.exact.unwrap();
            assert_eq!(ex.value, rat(w as i64, 2));
            assert_eq!(ex.u, vec![rat(1, 2), rat(1, 2)]);
        }
        for m in 2..=6 {
            let k = PWeightedGraph::uniform(3, m, 2).unwrap();
            assert_eq!(g_of_a(&k).exact.unwrap().value, rat(2 * (m as i64 - 1), m as i64));
        }
    }

    /// Grid search at step 0.001 on the one-dimensional simplex.
    #[test]
    fn two_by_two_grid() {
        for w in 0..=3u32 {
            let a = PWeightedGraph::uniform(3, 2, w).unwrap();
            let grid = (0..=1000)
                .map(|i| {
                    let x = i as f64 / 1000.0;
                    2.0 * w as f64 * x * (1.0 - x)
                })
                .fold(0.0, f64::max);
            assert!((g_of_a(&a).value - grid).abs() < 1e-3);
        }
    }

    /// Independent oracle: projected gradient ascent with restarts.
    fn projected_gradient(a: &PWeightedGraph, seed: u64) -> f64 {
        fn project(v: &mut [f64]) {
            let mut s: Vec<f64> = v.to_vec();
            s.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let mut cum = 0.0;
            let mut theta = 0.0;
            for (i, x) in s.iter().enumerate() {
                cum += x;
                let t = (cum - 1.0) / (i + 1) as f64;
                if x - t > 0.0 {
                    theta = t;
                }
            }
            v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
        }
        let m = a.len();
        let mut rng = stream(seed, 77);
        let mut best = 0.0f64;
        for _ in 0..30 {
            let mut u: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            project(&mut u);
            for it in 0..3000 {
                let step = 0.05 / (1.0 + it as f64 / 500.0);
                let grad: Vec<f64> =
                    (0..m).map(|i| 2.0 * (0..m).map(|j| a.weight(i, j) as f64 * u[j]).sum::<f64>()).collect();
                for i in 0..m {
                    u[i] += step * grad[i];
                }
                project(&mut u);
            }
            let val: f64 = (0..m)
                .map(|i| (0..m).map(|j| a.weight(i, j) as f64 * u[i] * u[j]).sum::<f64>())
                .sum();
            best = best.max(val);
        }
        best
    }

    #[test]
    fn exact_matches_numeric_oracles() {
        for seed in 0..60u64 {
            let m = 2 + seed as usize % 5;
            let a = random_matrix(seed, 4, m, 0.3);
            let ex = g_of_a(&a);
            let ev = ex.exact.clone().unwrap();
            assert!((ex.value - projected_gradient(&a, seed)).abs() < 1e-3, "seed {seed}");
            assert!((ex.value - g_of_a_numeric(&a, seed).value).abs() < 1e-3, "seed {seed}");
            assert_eq!(quadratic_form(&a, &ev.u), ev.value);
            let sums = row_sums(&a, &ev.u);
            for &j in &ex.support {
                assert_eq!(sums[j], ev.value);
            }
            assert_eq!(ev.u.iter().fold(BigRational::zero(), |s, x| s + x), BigRational::one());
        }
    }

    #[test]
    fn dense_core_properties() {
        for seed in 0..100u64 {
            let m = 1 + seed as usize % 6;
            let a = random_matrix(seed, 3, m, 0.4);
            let g = g_of_a(&a).exact.unwrap().value;
            let (j, sol) = dense_core(&a).unwrap();
            if g.is_zero() {
                assert!(j.is_empty());
                continue;
            }
            let sub = a.induced(&j);
            assert!(sub.is_positive(), "seed {seed}");
            let ex = sol.exact.unwrap();
            assert!(ex.u.iter().all(|x| x.is_positive()));
            assert!(ex.value >= g);
            for drop in 0..j.len() {
                let rest: Vec<usize> = (0..j.len()).filter(|&i| i != drop).collect();
                assert!(g_of_a(&sub.induced(&rest)).exact.unwrap().value < ex.value);
            }
        }
    }

    #[test]
    fn dense_core_picks_better_block() {
        let mut rows = vec![vec![0u32; 5]; 5];
        for (i, j, w) in [(0, 1, 1), (2, 3, 3), (2, 4, 3), (3, 4, 3)] {
            rows[i][j] = w;
            rows[j][i] = w;
        }
        let a = PWeightedGraph::new(3, &rows).unwrap();
        let (j, sol) = dense_core(&a).unwrap();
        assert_eq!(j, vec![2, 3, 4]);
        assert_eq!(sol.exact.unwrap().value, rat(2, 1));
        let k = PWeightedGraph::uniform(3, 4, 2).unwrap();
        assert_eq!(dense_core(&k).unwrap().0, vec![0, 1, 2, 3]);
    }
}
