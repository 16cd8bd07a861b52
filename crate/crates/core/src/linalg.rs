//! Exact linear algebra over ℚ and column-style Hermite reduction over ℤ.

use num_traits::{One, Signed, Zero};

use crate::rational::{q, Q};

pub type QMat = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> QMat {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> QMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn from_i64(rows: &[Vec<i64>]) -> QMat {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

pub fn transpose(a: &QMat) -> QMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .filter(|(x, _)| !x.is_zero())
                        .fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &QMat, x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (r, v)| acc + r * v))
        .collect()
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(a: &QMat) -> (QMat, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x = &*x - &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(a: &QMat) -> usize {
    rref(a).1.len()
}

/// Basis of the right null space `{x : a x = 0}`.
pub fn nullspace(a: &QMat, cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); cols];
            x[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Solves `a x = b`; any solution, or `None` if inconsistent.
pub fn solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let cols = a.first().map_or(0, |r| r.len());
    let aug: QMat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let aug: QMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(a: &QMat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * p;
                }
            }
        }
    }
    d
}

pub fn det_i64(rows: &[Vec<i64>]) -> i64 {
    let d = det(&from_i64(rows));
    crate::rational::to_i64(&d).expect("integer determinant")
}

/// Column Hermite reduction of an integer matrix `b` (`n × k`, full row rank
/// not required): returns `(h, u)` with `b · u = [h | 0]`, `u` unimodular
/// and `h` lower triangular with `rank` nonzero columns.
pub struct ColumnHermite {
    pub h: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub rank: usize,
}

pub fn column_hermite(b: &[Vec<i64>]) -> ColumnHermite {
    let n = b.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = b.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in m.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap_cols = |m: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut c = 0;
    for r in 0..n {
        if c == k {
            break;
        }
        // Euclid on row r over columns c..k.
        loop {
            let nz: Vec<usize> = (c..k).filter(|&j| a[r][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| a[r][j].abs()).unwrap();
            swap_cols(&mut a, c, p);
            swap_cols(&mut u, c, p);
            let mut done = true;
            for j in c + 1..k {
                if a[r][j] != 0 {
                    let f = a[r][j].div_euclid(a[r][c]);
                    col_op(&mut a, j, c, f);
                    col_op(&mut u, j, c, f);
                    if a[r][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][c] != 0 {
            if a[r][c] < 0 {
                for row in a.iter_mut() {
                    row[c] = -row[c];
                }
                for row in u.iter_mut() {
                    row[c] = -row[c];
                }
            }
            c += 1;
        }
    }
    let h = a.iter().map(|row| row[..c].to_vec()).collect();
    ColumnHermite { h, u, rank: c }
}

impl ColumnHermite {
    /// Integer basis of `{x ∈ ℤ^k : b x = 0}` (columns of `u` past the rank).
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        let k = self.u.len();
        (self.rank..k)
            .map(|j| self.u.iter().map(|row| row[j] as i64).collect())
            .collect()
    }

    /// Some integer solution of `b x = w`, if one exists.
    pub fn solve_integer(&self, w: &[i64]) -> Option<Vec<i64>> {
        // b u = [h|0]; find y with h y = w by forward substitution on pivot rows.
        let n = self.h.len();
        let mut y = vec![0i128; self.rank];
        let mut col = 0;
        let mut residual: Vec<i128> = w.iter().map(|&x| x as i128).collect();
        for r in 0..n {
            if col < self.rank && self.h[r][col] != 0 {
                if residual[r] % self.h[r][col] != 0 {
                    return None;
                }
                y[col] = residual[r] / self.h[r][col];
                for (rr, res) in residual.iter_mut().enumerate() {
                    *res -= self.h[rr][col] * y[col];
                }
                col += 1;
            } else if residual[r] != 0 {
                return None;
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        let k = self.u.len();
        Some(
            (0..k)
                .map(|i| (0..self.rank).map(|j| self.u[i][j] * y[j]).sum::<i128>() as i64)
                .collect(),
        )
    }

    /// Product of the pivots; equals 1 iff the columns generate ℤ^n (full rank case).
    pub fn lattice_index(&self) -> i128 {
        (0..self.rank)
            .map(|j| {
                let r = (0..self.h.len()).find(|&r| self.h[r][j] != 0).unwrap();
                self.h[r][j].abs()
            })
            .product()
    }
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}
