use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::linalg;
use crate::rational::{factorial, q, Q};
use crate::toric::{facets, normalized_volume, Facet, ToricData};

/// Exact Laurent series in `α_0..α_N`, truncated at total degree `order` in `α_1..α_N`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlphaSeries {
    pub terms: BTreeMap<Vec<i64>, Q>,
    /// Terms of `α'`-degree `≤ order` are complete.
    pub order: i64,
}

fn degree(e: &[i64]) -> i64 {
    e[1..].iter().sum()
}

impl AlphaSeries {
    pub fn derivative(&self, j: usize) -> AlphaSeries {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[j] != 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                terms.insert(e2, c * q(e[j]));
            }
        }
        AlphaSeries { terms, order: if j == 0 { self.order } else { self.order - 1 } }
    }

    pub fn derivatives(&self, nu: &[i64]) -> AlphaSeries {
        let mut s = self.clone();
        for (j, &k) in nu.iter().enumerate() {
            for _ in 0..k {
                s = s.derivative(j);
            }
        }
        s
    }

    /// `Σ_j w_j α_j ∂_j + c`.
    pub fn euler(&self, w: &[i64], c: i64) -> AlphaSeries {
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let f = e.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() + c;
            if f != 0 {
                terms.insert(e.clone(), x * q(f));
            }
        }
        AlphaSeries { terms, order: self.order }
    }

    /// Terms of `self - other` up to the common completeness order.
    pub fn difference(&self, other: &AlphaSeries) -> AlphaSeries {
        let order = self.order.min(other.order);
        let mut terms: BTreeMap<Vec<i64>, Q> = BTreeMap::new();
        for (e, x) in &self.terms {
            if degree(e) <= order {
                *terms.entry(e.clone()).or_insert_with(Q::zero) += x;
            }
        }
        for (e, x) in &other.terms {
            if degree(e) <= order {
                *terms.entry(e.clone()).or_insert_with(Q::zero) -= x;
            }
        }
        terms.retain(|_, x| !x.is_zero());
        AlphaSeries { terms, order }
    }
}

/// The points `b̂_0 = (0,1)`, `b̂_i = (b_i, 1)` and the generator set of the multi-GKZ system.
#[derive(Debug, Clone)]
pub struct GkzSystem {
    pub points: Vec<Vec<i64>>,
    /// `c = (b, k)` with `b ∈ kΔ`, `1 ≤ k ≤ max_height`.
    pub generators: Vec<Vec<i64>>,
    pub max_height: i64,
    /// Relations `l` with `Σ l_j b̂_j = 0`.
    pub kernel: Vec<Vec<i64>>,
    pub volume: u64,
}

pub fn build_gkz(td: &ToricData, max_height: Option<i64>) -> Result<GkzSystem> {
    let n = td.fan.rank();
    let mut points = vec![{
        let mut p = vec![0; n];
        p.push(1);
        p
    }];
    for b in td.fan.all_rays() {
        let mut p = b.0.clone();
        p.push(1);
        points.push(p);
    }
    let rays = td.fan.rays_i64();
    let fs = facets(&rays)?;
    let max_height = max_height.unwrap_or(n as i64 + 1);
    let mut generators = Vec::new();
    for k in 1..=max_height {
        for b in lattice_points(&fs, &rays, k) {
            let mut c = b;
            c.push(k);
            generators.push(c);
        }
    }
    let cols: Vec<Vec<i64>> = (0..=n).map(|r| points.iter().map(|p| p[r]).collect()).collect();
    let kernel = linalg::column_hermite(&cols).kernel_basis();
    Ok(GkzSystem { points, generators, max_height, kernel, volume: normalized_volume(&rays)? })
}

fn lattice_points(fs: &[Facet], rays: &[Vec<i64>], k: i64) -> Vec<Vec<i64>> {
    let n = rays[0].len();
    let lo: Vec<i64> = (0..n).map(|i| rays.iter().map(|r| r[i]).min().unwrap() * k).collect();
    let hi: Vec<i64> = (0..n).map(|i| rays.iter().map(|r| r[i]).max().unwrap() * k).collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if fs.iter().all(|f| f.normal.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() <= k * f.offset) {
            out.push(x.clone());
        }
        let mut i = 0;
        while i < n {
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// `Π_{(b,k)} = (-1)^{k-1} (k-1)! [t^0] t^b / W_α^k` expanded in `α_i/α_0`:
/// `(-1)^{k-1} Σ_{Σ d_i b_i = -b} (-1)^{|d|} (|d|+k-1)!/Π d_i! · α^d α_0^{-k-|d|}`.
pub fn period_family(sys: &GkzSystem, order: i64) -> BTreeMap<Vec<i64>, AlphaSeries> {
    let big_n = sys.points.len() - 1;
    let n = sys.points[0].len() - 1;
    let mut by_target: BTreeMap<Vec<i64>, Vec<(Vec<i64>, i64)>> = BTreeMap::new();
    compositions(big_n, order, &mut |d| {
        let s: Vec<i64> = (0..n).map(|r| (0..big_n).map(|i| d[i] * sys.points[i + 1][r]).sum()).collect();
        by_target.entry(s).or_default().push((d.to_vec(), d.iter().sum()));
    });
    let mut fam = BTreeMap::new();
    for c in &sys.generators {
        let k = c[n];
        let minus_b: Vec<i64> = c[..n].iter().map(|x| -x).collect();
        let mut terms = BTreeMap::new();
        for (d, total) in by_target.get(&minus_b).into_iter().flatten() {
            let num = Q::from_integer(factorial((total + k - 1) as u64));
            let coeff = d.iter().fold(num, |acc, di| acc / Q::from_integer(factorial(*di as u64)));
            let sign = if (k - 1 + total) % 2 == 0 { coeff } else { -coeff };
            let mut e = vec![-k - total];
            e.extend(d);
            terms.insert(e, sign);
        }
        fam.insert(c.clone(), AlphaSeries { terms, order });
    }
    fam
}

fn compositions(parts: usize, max_total: i64, f: &mut impl FnMut(&[i64])) {
    fn rec(d: &mut Vec<i64>, parts: usize, left: i64, f: &mut impl FnMut(&[i64])) {
        if d.len() == parts {
            f(d);
            return;
        }
        for x in 0..=left {
            d.push(x);
            rec(d, parts, left - x, f);
            d.pop();
        }
    }
    rec(&mut Vec::new(), parts, max_total, f);
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GkzOperator {
    Euler { i: usize, c: Vec<i64> },
    Binomial { nu: Vec<i64>, c: Vec<i64>, c2: Vec<i64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct GkzCheck {
    pub operator: GkzOperator,
    /// Residual terms are compared up to this `α'`-degree.
    pub checked_order: i64,
    pub nonzero_terms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GkzReport {
    pub generators: usize,
    pub operators: usize,
    pub failures: usize,
    pub volume: u64,
    pub checks: Vec<GkzCheck>,
}

impl GkzSystem {
    /// `Z_{i,c} = Σ_j ⟨m_i, b̂_j⟩ α_j ∂_j + ⟨m_i, c⟩` at exponent `β = 0`.
    pub fn euler_apply(&self, i: usize, c: &[i64], s: &AlphaSeries) -> AlphaSeries {
        let w: Vec<i64> = self.points.iter().map(|p| p[m_index(i, p.len())]).collect();
        s.euler(&w, c[m_index(i, c.len())])
    }

    /// `∂^{ν_+} ϖ_c - ∂^{ν_-} ϖ_{c'}` with `c' = c + Σ ν_j b̂_j`.
    pub fn binomial_apply(&self, nu: &[i64], s: &AlphaSeries, s2: &AlphaSeries) -> AlphaSeries {
        let plus: Vec<i64> = nu.iter().map(|x| (*x).max(0)).collect();
        let minus: Vec<i64> = nu.iter().map(|x| (-*x).max(0)).collect();
        s.derivatives(&plus).difference(&s2.derivatives(&minus))
    }

    pub fn shift(&self, c: &[i64], nu: &[i64]) -> Vec<i64> {
        (0..c.len()).map(|r| c[r] + nu.iter().zip(&self.points).map(|(a, p)| a * p[r]).sum::<i64>()).collect()
    }

    /// `±e_j`, `e_j - e_k` and `±l` for the kernel basis.
    pub fn default_nus(&self) -> Vec<Vec<i64>> {
        let k = self.points.len();
        let unit = |j: usize, s: i64| {
            let mut v = vec![0; k];
            v[j] = s;
            v
        };
        let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
        for j in 0..k {
            out.insert(unit(j, 1));
            out.insert(unit(j, -1));
            for l in 0..k {
                if l != j {
                    let mut v = unit(j, 1);
                    v[l] = -1;
                    out.insert(v);
                }
            }
        }
        for l in &self.kernel {
            out.insert(l.clone());
            out.insert(l.iter().map(|x| -x).collect());
        }
        out.into_iter().collect()
    }

    pub fn check(&self, fam: &BTreeMap<Vec<i64>, AlphaSeries>, nus: &[Vec<i64>]) -> GkzReport {
        let n = self.points[0].len() - 1;
        let mut checks = Vec::new();
        for (c, s) in fam {
            for i in 0..=n {
                let r = self.euler_apply(i, c, s);
                checks.push(GkzCheck {
                    operator: GkzOperator::Euler { i, c: c.clone() },
                    checked_order: s.order,
                    nonzero_terms: r.terms.len(),
                });
            }
            for nu in nus {
                let c2 = self.shift(c, nu);
                let Some(s2) = fam.get(&c2) else { continue };
                let r = self.binomial_apply(nu, s, s2);
                if r.order < 0 {
                    continue;
                }
                checks.push(GkzCheck {
                    operator: GkzOperator::Binomial { nu: nu.clone(), c: c.clone(), c2 },
                    checked_order: r.order,
                    nonzero_terms: r.terms.len(),
                });
            }
        }
        GkzReport {
            generators: fam.len(),
            operators: checks.len(),
            failures: checks.iter().filter(|c| c.nonzero_terms > 0).count(),
            volume: self.volume,
            checks,
        }
    }
}

/// `m_0` reads the last coordinate, `m_i` the `(i-1)`-th.
fn m_index(i: usize, len: usize) -> usize {
    if i == 0 {
        len - 1
    } else {
        i - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{p1, p2};

    #[test]
    fn p1_family_and_operators() {
        let sys = build_gkz(&p1(), None).unwrap();
        assert_eq!(sys.points, vec![vec![0, 1], vec![1, 1], vec![-1, 1]]);
        assert_eq!(sys.generators.len(), 3 + 5);
        let fam = period_family(&sys, 6);
        let p = &fam[&vec![0, 1]];
        // α_0^{-1} Σ C(2d, d) (α_1 α_2/α_0^2)^d
        for d in 0..=3i64 {
            let binom = (1..=d).fold(1i64, |acc, i| acc * (d + i) / i);
            assert_eq!(p.terms[&vec![-1 - 2 * d, d, d]], q(binom));
        }
        assert_eq!(p.terms.len(), 4);
        // α_1∂_1 - α_2∂_2
        assert!(p.euler(&[0, 1, -1], 0).terms.is_empty());
        // ∂_1∂_2 ϖ = ∂_0^2 ϖ at the first order: both 2α_0^{-3}
        let lhs = p.derivatives(&[0, 1, 1]);
        let rhs = p.derivatives(&[2, 0, 0]);
        assert_eq!(lhs.terms[&vec![-3, 0, 0]], q(2));
        assert_eq!(rhs.terms[&vec![-3, 0, 0]], q(2));
        assert!(lhs.difference(&rhs).terms.is_empty());
    }

    #[test]
    fn p2_annihilation() {
        let sys = build_gkz(&p2(), Some(2)).unwrap();
        assert_eq!(sys.volume, 3);
        let fam = period_family(&sys, 4);
        let rep = sys.check(&fam, &sys.default_nus());
        assert!(rep.operators > 50);
        assert_eq!(rep.failures, 0);
    }

    #[test]
    fn zero_operator() {
        let s = AlphaSeries::default();
        assert!(s.euler(&[1, 2], 3).terms.is_empty());
        assert!(s.derivatives(&[2, 1]).difference(&s).terms.is_empty());
    }

    #[test]
    fn broken_family_is_detected() {
        let sys = build_gkz(&p1(), Some(2)).unwrap();
        let mut fam = period_family(&sys, 4);
        let s = fam.get_mut(&vec![1, 1]).unwrap();
        let (e, c) = s.terms.iter().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        s.terms.insert(e, c + q(1));
        let rep = sys.check(&fam, &sys.default_nus());
        assert!(rep.failures > 0);
    }
}
