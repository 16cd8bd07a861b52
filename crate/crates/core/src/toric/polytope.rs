//! Lattice polytopes: facets, reflexivity, normalized volume.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, Q};

/// Supporting hyperplane `⟨normal, x⟩ ≤ offset` with primitive integral normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Indices of input points lying on the facet.
    pub points: Vec<usize>,
}

fn affine_rank(points: &[&Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| q(a - b)).collect())
        .collect();
    linalg::rank(&rows)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Facets of the convex hull of `points` (must be full-dimensional).
pub fn facets(points: &[Vec<i64>]) -> Result<Vec<Facet>> {
    let n = points.first().map_or(0, |p| p.len());
    if n == 0 || affine_rank(&points.iter().collect::<Vec<_>>()) < n {
        return Err(Error::InvalidInput("degenerate polytope".into()));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for combo in combinations(points.len(), n) {
        let base = &points[combo[0]];
        let rows: Vec<Vec<Q>> = combo[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| q(a - b)).collect())
            .collect();
        let ns = linalg::nullspace(&rows, n);
        if ns.len() != 1 {
            continue;
        }
        // clear denominators, make primitive
        let denom_lcm = ns[0].iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let mut normal: Vec<i64> = ns[0]
            .iter()
            .map(|x| crate::rational::to_i64(&(x * Q::from_integer(denom_lcm.clone()))).unwrap())
            .collect();
        let g = normal.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        normal.iter_mut().for_each(|x| *x /= g);
        let dot = |p: &Vec<i64>| p.iter().zip(&normal).map(|(a, b)| a * b).sum::<i64>();
        let h = dot(base);
        let vals: Vec<i64> = points.iter().map(dot).collect();
        let (normal, h) = if vals.iter().all(|&v| v <= h) {
            (normal, h)
        } else if vals.iter().all(|&v| v >= h) {
            (normal.iter().map(|x| -x).collect(), -h)
        } else {
            continue;
        };
        if seen.insert((normal.clone(), h)) {
            let on: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(_, p)| p.iter().zip(&normal).map(|(a, b)| a * b).sum::<i64>() == h)
                .map(|(i, _)| i)
                .collect();
            out.push(Facet { normal, offset: h, points: on });
        }
    }
    Ok(out)
}

pub fn contains(facets: &[Facet], x: &[Q]) -> bool {
    facets.iter().all(|f| {
        let v = f.normal.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + q(*a) * b);
        v <= q(f.offset)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reflexivity {
    pub is_reflexive: bool,
    /// Vertices of `Δ* = {y : ⟨x, y⟩ ≥ -1 ∀x∈Δ}`.
    pub dual_vertices: Vec<Vec<Q>>,
}

pub fn reflexivity(points: &[Vec<i64>]) -> Result<Reflexivity> {
    let fs = facets(points)?;
    if fs.iter().any(|f| f.offset <= 0) {
        return Err(Error::InvalidInput("0 is not interior to the polytope".into()));
    }
    let is_reflexive = fs.iter().all(|f| f.offset == 1);
    let mut dual_vertices: Vec<Vec<Q>> = fs
        .iter()
        .map(|f| f.normal.iter().map(|&a| Q::new((-a).into(), f.offset.into())).collect())
        .collect();
    dual_vertices.sort();
    Ok(Reflexivity { is_reflexive, dual_vertices })
}

/// Lattice-normalized volume (`n!` times Euclidean volume).
pub fn normalized_volume(points: &[Vec<i64>]) -> Result<u64> {
    let fs = facets(points)?;
    let n = points[0].len();
    let all_facets: Vec<BTreeSet<usize>> = fs.iter().map(|f| f.points.iter().copied().collect()).collect();
    // Pull from an interior-or-boundary apex: use the first point and cone over
    // facets that miss it.
    let apex = 0usize;
    let mut total = Q::zero();
    for face in &all_facets {
        if face.contains(&apex) {
            continue;
        }
        for simplex in triangulate(points, face, n - 1, &all_facets) {
            let mut rows: Vec<Vec<Q>> = simplex
                .iter()
                .map(|&i| points[i].iter().zip(&points[apex]).map(|(a, b)| q(a - b)).collect())
                .collect();
            rows.truncate(n);
            total += linalg::det(&rows).abs();
        }
    }
    crate::rational::to_i64(&total)
        .map(|v| v as u64)
        .ok_or_else(|| Error::InvalidInput("non-integral normalized volume".into()))
}

/// Triangulates the face `face` (point-index set of affine dimension `dim`)
/// by pulling from its first point; faces of `face` are maximal
/// intersections with facets of the polytope.
fn triangulate(
    points: &[Vec<i64>],
    face: &BTreeSet<usize>,
    dim: usize,
    all_facets: &[BTreeSet<usize>],
) -> Vec<Vec<usize>> {
    let members: Vec<usize> = face.iter().copied().collect();
    if dim == 0 {
        return vec![vec![members[0]]];
    }
    let apex = members[0];
    let mut subfaces: Vec<BTreeSet<usize>> = Vec::new();
    for f in all_facets {
        let inter: BTreeSet<usize> = face.intersection(f).copied().collect();
        if inter.is_empty() || inter == *face {
            continue;
        }
        let pts: Vec<&Vec<i64>> = inter.iter().map(|&i| &points[i]).collect();
        if affine_rank(&pts) == dim - 1 && !subfaces.contains(&inter) {
            subfaces.push(inter);
        }
    }
    let mut out = Vec::new();
    for sf in subfaces {
        if sf.contains(&apex) {
            continue;
        }
        for mut s in triangulate(points, &sf, dim - 1, all_facets) {
            s.push(apex);
            out.push(s);
        }
    }
    out
}
