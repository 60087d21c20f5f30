use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// The `r = 2^ℓ` binary strings of length `ℓ` and the bipartite graphs `Q_h`
/// splitting them by bit `h`. String `i` is the binary expansion of `i`, bit
/// `h` (0-based) being coordinate `h`.
#[derive(Clone, Debug, Serialize)]
pub struct BinaryStringFamily {
    pub ell: u32,
}

impl BinaryStringFamily {
    pub fn r(&self) -> usize {
        1 << self.ell
    }

    pub fn bit(&self, i: usize, h: usize) -> bool {
        i >> h & 1 == 1
    }

    /// Whether strings `i`, `j` are adjacent in `Q_h`.
    pub fn in_q(&self, h: usize, i: usize, j: usize) -> bool {
        self.bit(i, h) != self.bit(j, h)
    }

    /// Edges `(i, j)`, `i < j`, of `Q_h`.
    pub fn q_edges(&self, h: usize) -> Vec<(usize, usize)> {
        let r = self.r();
        (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .filter(|&(i, j)| self.in_q(h, i, j))
            .collect()
    }

    /// Largest set of strings independent in `∪_{h ∈ I} Q_h`: the strings
    /// agreeing with string 0 on every bit in `I`.
    pub fn independent_set(&self, coords: &[usize]) -> Vec<usize> {
        (0..self.r()).filter(|&i| coords.iter().all(|&h| !self.bit(i, h))).collect()
    }
}

pub fn build_q_family(ell: u32) -> Result<BinaryStringFamily> {
    if !(1..=6).contains(&ell) {
        return Err(Error::SizeLimit(format!("ell must lie in [1, 6], got {ell}")));
    }
    Ok(BinaryStringFamily { ell })
}

/// A proper `(q−1)`-edge colouring of `K_q`, colours `1..q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeColoring {
    pub q: usize,
    colors: Vec<Vec<u32>>,
}

impl EdgeColoring {
    /// Colour of `ij`; 0 on the diagonal.
    pub fn color(&self, i: usize, j: usize) -> u32 {
        self.colors[i][j]
    }

    /// Edges of colour `c`.
    pub fn class(&self, c: u32) -> Vec<(usize, usize)> {
        (0..self.q)
            .flat_map(|i| (i + 1..self.q).map(move |j| (i, j)))
            .filter(|&(i, j)| self.colors[i][j] == c)
            .collect()
    }
}

/// Round-robin 1-factorization: vertex `q−1` is fixed and colour `c` pairs
/// `(c, q−1)` with `(c+j, c−j) mod (q−1)`.
pub fn proper_edge_coloring(q: usize) -> Result<EdgeColoring> {
    if q < 2 || q % 2 != 0 {
        return Err(invalid(format!("q must be even and at least 2, got {q}")));
    }
    let n = q - 1;
    let mut colors = vec![vec![0u32; q]; q];
    let mut set = |a: usize, b: usize, c: usize| {
        colors[a][b] = c as u32 + 1;
        colors[b][a] = c as u32 + 1;
    };
    for c in 0..n {
        set(c, n, c);
        for j in 1..q / 2 {
            set((c + j) % n, (c + n - j) % n, c);
        }
    }
    Ok(EdgeColoring { q, colors })
}

/// `(h, h′)` pairs (0-based) along which classes `i` and `i′` are compared:
/// coordinate `s` of colour block `c_{ij}` against coordinate `s` of colour
/// block `c_{i′j}` for every third class `j`, and each coordinate past
/// `p(q−1)` against itself. There are `ℓ − p` of them.
pub fn related_coordinates(i: usize, i2: usize, ell: u32, p: u32, coloring: &EdgeColoring) -> Result<Vec<(usize, usize)>> {
    let q = coloring.q;
    if i == i2 || i >= q || i2 >= q {
        return Err(invalid(format!("need distinct classes below {q}, got {i}, {i2}")));
    }
    let p = p as usize;
    let ell = ell as usize;
    if ell < p * (q - 1) {
        return Err(invalid("ell < p(q−1)"));
    }
    let mut out = Vec::with_capacity(ell - p);
    for j in (0..q).filter(|&j| j != i && j != i2) {
        let (c, c2) = (coloring.color(i, j) as usize, coloring.color(i2, j) as usize);
        for s in 0..p {
            out.push(((c - 1) * p + s, (c2 - 1) * p + s));
        }
    }
    out.extend((p * (q - 1)..ell).map(|h| (h, h)));
    out.sort_unstable();
    Ok(out)
}
