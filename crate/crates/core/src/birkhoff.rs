//! Birkhoff factorization of loop matrices built from I-function columns,
//! and the resulting connection matrices.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::rational::{to_f64, Q};
use crate::ring::OrbRing;
use crate::series::{build_i_twisted, grading, pbar, Exponent, LogVectorField, NefPartition, QSeries};
use crate::toric::ToricData;

/// Laurent polynomial in `z` with matrix coefficients.
pub type ZMat = BTreeMap<i32, QMat>;

/// `Σ_e q^e M_e(z)`, complete up to total degree `bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopMatrix {
    pub dim: usize,
    pub bound: Q,
    pub terms: BTreeMap<Exponent, ZMat>,
}

fn is_zero_mat(m: &QMat) -> bool {
    m.iter().all(|r| r.iter().all(Zero::is_zero))
}

fn add_into(dst: &mut ZMat, p: i32, m: &QMat) {
    if is_zero_mat(m) {
        return;
    }
    let e = dst.entry(p).or_insert_with(|| linalg::zeros(m.len(), m.len()));
    for (r, s) in e.iter_mut().zip(m) {
        for (a, b) in r.iter_mut().zip(s) {
            *a += b;
        }
    }
    if is_zero_mat(e) {
        dst.remove(&p);
    }
}

fn zmat_mul(a: &ZMat, b: &ZMat) -> ZMat {
    let mut out = ZMat::new();
    for (p, x) in a {
        for (r, y) in b {
            add_into(&mut out, p + r, &linalg::mat_mul(x, y));
        }
    }
    out
}

fn add_exp(a: &[Q], b: &[Q]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl LoopMatrix {
    pub fn identity(dim: usize, rank: usize, bound: Q) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![Q::zero(); rank], ZMat::from([(0, linalg::identity(dim))]));
        LoopMatrix { dim, bound, terms }
    }

    fn add_term(&mut self, e: Exponent, p: i32, m: &QMat) {
        if grading(&e) > self.bound {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_default();
        add_into(entry, p, m);
        if entry.is_empty() {
            self.terms.remove(&e);
        }
    }

    pub fn mul(&self, other: &LoopMatrix) -> LoopMatrix {
        let bound = self.bound.clone().min(other.bound.clone());
        let mut out = LoopMatrix { dim: self.dim, bound, terms: BTreeMap::new() };
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e = add_exp(e1, e2);
                if grading(&e) > out.bound {
                    continue;
                }
                for (p, m) in zmat_mul(a, b) {
                    out.add_term(e.clone(), p, &m);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &LoopMatrix) -> LoopMatrix {
        let mut out = self.clone();
        out.bound = self.bound.clone().min(other.bound.clone());
        for (e, zm) in &other.terms {
            for (p, m) in zm {
                out.add_term(e.clone(), *p, m);
            }
        }
        out.terms.retain(|e, _| grading(e) <= out.bound);
        out
    }

    pub fn sub(&self, other: &LoopMatrix) -> LoopMatrix {
        let mut out = self.clone();
        out.bound = self.bound.clone().min(other.bound.clone());
        for (e, zm) in &other.terms {
            for (p, m) in zm {
                let neg: QMat = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
                out.add_term(e.clone(), *p, &neg);
            }
        }
        out.terms.retain(|e, _| grading(e) <= out.bound);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn rank(&self) -> usize {
        self.terms.keys().next().map_or(0, Vec::len)
    }

    /// Constant right factor: `M · c`.
    pub fn mul_const(&self, c: &QMat) -> LoopMatrix {
        let mut out = LoopMatrix { dim: self.dim, bound: self.bound.clone(), terms: BTreeMap::new() };
        for (e, zm) in &self.terms {
            for (p, m) in zm {
                out.add_term(e.clone(), *p, &linalg::mat_mul(m, c));
            }
        }
        out
    }

    pub fn const_mul(&self, c: &QMat) -> LoopMatrix {
        let mut out = LoopMatrix { dim: self.dim, bound: self.bound.clone(), terms: BTreeMap::new() };
        for (e, zm) in &self.terms {
            for (p, m) in zm {
                out.add_term(e.clone(), *p, &linalg::mat_mul(c, m));
            }
        }
        out
    }

    /// Inverse of `I + (positive q-degree terms)`.
    pub fn inverse(&self) -> Result<LoopMatrix> {
        let rank = self.rank();
        let zero = vec![Q::zero(); rank];
        let id = LoopMatrix::identity(self.dim, rank, self.bound.clone());
        if self.terms.get(&zero) != id.terms.get(&zero) {
            return Err(Error::MalformedSeries("loop matrix is not the identity at q = 0".into()));
        }
        let neg_tail = id.sub(self);
        let mut inv = id.clone();
        let mut power = id;
        loop {
            power = power.mul(&neg_tail);
            if power.is_zero() {
                break;
            }
            inv = inv.add(&power);
        }
        Ok(inv)
    }

    /// `z ↦ -z`, then transpose.
    pub fn adjoint_neg_z(&self) -> LoopMatrix {
        let mut out = LoopMatrix { dim: self.dim, bound: self.bound.clone(), terms: BTreeMap::new() };
        for (e, zm) in &self.terms {
            for (p, m) in zm {
                let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
                let t: QMat = linalg::transpose(m).iter().map(|r| r.iter().map(|x| x * &sign).collect()).collect();
                out.add_term(e.clone(), *p, &t);
            }
        }
        out
    }

    /// `z q_a ∂_a`.
    pub fn z_log_derivative(&self, a: usize) -> LoopMatrix {
        let mut out = LoopMatrix { dim: self.dim, bound: self.bound.clone(), terms: BTreeMap::new() };
        for (e, zm) in &self.terms {
            for (p, m) in zm {
                let s: QMat = m.iter().map(|r| r.iter().map(|x| x * &e[a]).collect()).collect();
                out.add_term(e.clone(), p + 1, &s);
            }
        }
        out
    }

    /// Largest absolute entry, for reporting residuals.
    pub fn max_entry(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|zm| zm.values())
            .flat_map(|m| m.iter().flatten())
            .map(|x| to_f64(x).abs())
            .fold(0.0, f64::max)
    }
}

/// Differential monomial `Π_a (p̄_a + z q_a∂_a)^{k_a}` applied to `I^v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnOp {
    pub sector: usize,
    pub exponents: Vec<usize>,
}

fn monomials(r: usize, deg: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for k in (0..=deg).rev() {
        for mut rest in monomials(r - 1, deg - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// Chooses `P_{v,i}` so that `{P_{v,i}(p̄) 1_v}` is a basis of `H*_orb`.
pub fn basis_ops(td: &ToricData, ring: &OrbRing) -> Result<Vec<ColumnOp>> {
    let r = td.lattice.r();
    let pb = pbar(td, ring);
    let mut ops = Vec::new();
    for (v, sector) in ring.sectors.iter().enumerate() {
        let mut chosen: Vec<Vec<Q>> = Vec::new();
        'deg: for deg in 0..=sector.ring.top_degree() {
            for mono in monomials(r, deg) {
                let mut x: Vec<Q> = ring.unit_of(v);
                for (a, &k) in mono.iter().enumerate() {
                    for _ in 0..k {
                        x = ring.act(&pb[a], &x);
                    }
                }
                chosen.push(x);
                if linalg::rank(&chosen) == chosen.len() {
                    ops.push(ColumnOp { sector: v, exponents: mono });
                    if chosen.len() == sector.ring.dim() {
                        break 'deg;
                    }
                } else {
                    chosen.pop();
                }
            }
        }
        if chosen.len() != sector.ring.dim() {
            return Err(Error::Config(format!("monomials in p̄ do not span sector {v}")));
        }
    }
    Ok(ops)
}

/// Loop matrix whose columns are `P(p̄ + z∂) I^v` (prefactor stripped).
pub fn loop_matrix(
    td: &ToricData,
    ring: &OrbRing,
    partition: &NefPartition,
    ops: &[ColumnOp],
    bound: &Q,
) -> Result<LoopMatrix> {
    let n = ring.dim();
    if ops.len() != n {
        return Err(Error::Config(format!("{} column operators for a ring of dimension {n}", ops.len())));
    }
    let mut m = LoopMatrix { dim: n, bound: bound.clone(), terms: BTreeMap::new() };
    let mut cache: BTreeMap<usize, QSeries> = BTreeMap::new();
    for (col, op) in ops.iter().enumerate() {
        if !cache.contains_key(&op.sector) {
            cache.insert(op.sector, build_i_twisted(td, ring, partition, op.sector, bound, (-64, 64))?);
        }
        let mut s = cache[&op.sector].clone();
        for (a, &k) in op.exponents.iter().enumerate() {
            for _ in 0..k {
                s = LogVectorField::direction(td, a).apply(td, ring, &s);
            }
        }
        for (e, poly) in &s.terms {
            for (p, c) in &poly.coeffs {
                let mut mat = linalg::zeros(n, n);
                for (row, x) in c.iter().enumerate() {
                    mat[row][col] = x.clone();
                }
                m.add_term(e.clone(), *p, &mat);
            }
        }
    }
    Ok(m)
}

/// `M = A · U` with `A = I + O(z^{-1})`, `U` regular in `z`.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// `M|_{q=0}`, constant in `z`.
    pub m0: QMat,
    pub a: LoopMatrix,
    pub u: LoopMatrix,
}

pub fn factorize(m: &LoopMatrix) -> Result<Factorization> {
    let rank = m.rank();
    let zero = vec![Q::zero(); rank];
    let m0_z = m.terms.get(&zero).ok_or_else(|| Error::MalformedSeries("loop matrix has no q^0 term".into()))?;
    if m0_z.keys().any(|&p| p != 0) {
        return Err(Error::MalformedSeries("q^0 term of the loop matrix depends on z".into()));
    }
    let m0 = m0_z.get(&0).cloned().unwrap_or_else(|| linalg::zeros(m.dim, m.dim));
    let m0inv = linalg::inverse(&m0).ok_or_else(|| Error::Config("column operators are not a basis at q = 0".into()))?;
    let mg = m.mul_const(&m0inv);

    let mut keys: BTreeSet<Exponent> = mg.terms.keys().filter(|e| **e != zero).cloned().collect();
    loop {
        let mut added = false;
        let current: Vec<Exponent> = keys.iter().cloned().collect();
        for a in &current {
            for b in &current {
                let e = add_exp(a, b);
                if grading(&e) <= m.bound && keys.insert(e) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    let mut keys: Vec<Exponent> = keys.into_iter().collect();
    keys.sort_by(|a, b| grading(a).cmp(&grading(b)).then_with(|| a.cmp(b)));

    let id = LoopMatrix::identity(m.dim, rank, m.bound.clone());
    let mut a = id.clone();
    let mut u = id;
    for e in &keys {
        let mut r: ZMat = mg.terms.get(e).cloned().unwrap_or_default();
        for (e1, a1) in &a.terms {
            if *e1 == zero {
                continue;
            }
            let e2: Exponent = e.iter().zip(e1).map(|(x, y)| x - y).collect();
            if e2 == zero {
                continue;
            }
            if let Some(u2) = u.terms.get(&e2) {
                for (p, mat) in zmat_mul(a1, u2) {
                    let neg: QMat = mat.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
                    add_into(&mut r, p, &neg);
                }
            }
        }
        for (p, mat) in r {
            if p < 0 {
                a.add_term(e.clone(), p, &mat);
            } else {
                u.add_term(e.clone(), p, &mat);
            }
        }
    }
    Ok(Factorization { u: u.mul_const(&m0), m0, a })
}

/// Fundamental solution data computed from (twisted) I-functions.
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    pub ops: Vec<ColumnOp>,
    pub m: LoopMatrix,
    pub factorization: Factorization,
    /// `L = A^{-1} = I + O(z^{-1})`.
    pub l: LoopMatrix,
    /// Cup product by `p̄_a`.
    pub p_mats: Vec<QMat>,
}

pub fn fundamental_solution(
    td: &ToricData,
    ring: &OrbRing,
    partition: &NefPartition,
    bound: &Q,
) -> Result<FundamentalSolution> {
    let ops = basis_ops(td, ring)?;
    let m = loop_matrix(td, ring, partition, &ops, bound)?;
    let factorization = factorize(&m)?;
    let l = factorization.a.inverse()?;
    let n = ring.dim();
    let p_mats = pbar(td, ring)
        .iter()
        .map(|p| {
            let cols: Vec<Vec<Q>> = (0..n).map(|j| ring.act(p, &ring.basis_vec::<Q>(j))).collect();
            (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
        })
        .collect();
    Ok(FundamentalSolution { ops, m, factorization, l, p_mats })
}

impl FundamentalSolution {
    /// `A·U - M`; zero for an exact factorization.
    pub fn remultiply_residual(&self) -> LoopMatrix {
        self.factorization.a.mul(&self.factorization.u).sub(&self.m)
    }

    /// `Υ = U`; column `i` is `Υ_{v,i}`.
    pub fn upsilon(&self) -> &LoopMatrix {
        &self.factorization.u
    }

    /// `C_a = L (z q_a∂_a + p̄_a) L^{-1}`, required to be `z`-free.
    pub fn connection(&self, a: usize) -> Result<LoopMatrix> {
        let am = &self.factorization.a;
        let c = self.l.mul(&am.z_log_derivative(a)).add(&self.l.mul(&am.const_mul(&self.p_mats[a])));
        let stray = c
            .terms
            .values()
            .flat_map(|zm| zm.iter().filter(|(p, _)| **p != 0))
            .flat_map(|(_, m)| m.iter().flatten())
            .map(|x| to_f64(x).abs())
            .fold(0.0, f64::max);
        if stray > 0.0 {
            return Err(Error::Gauge(stray));
        }
        Ok(c)
    }

    /// `L(-z)^T G L(z) - G`.
    pub fn unitarity_residual(&self, gram: &QMat) -> LoopMatrix {
        let rank = self.m.rank();
        let g = LoopMatrix::identity(self.m.dim, rank, self.m.bound.clone()).mul_const(gram);
        self.l.adjoint_neg_z().mul(&g).mul(&self.l).sub(&g)
    }
}

/// `z∂_a C_b - z∂_b C_a + [C_a, C_b]` for all pairs, as one residual.
pub fn flatness_residual(conns: &[LoopMatrix]) -> LoopMatrix {
    let dim = conns[0].dim;
    let mut total = LoopMatrix { dim, bound: conns[0].bound.clone(), terms: BTreeMap::new() };
    for a in 0..conns.len() {
        for b in a + 1..conns.len() {
            let r = conns[b]
                .z_log_derivative(a)
                .sub(&conns[a].z_log_derivative(b))
                .add(&conns[a].mul(&conns[b]))
                .sub(&conns[b].mul(&conns[a]));
            total = total.add(&r);
        }
    }
    total
}

/// `q^e · I` as a loop matrix.
pub fn monomial_identity(dim: usize, e: Exponent, bound: Q) -> LoopMatrix {
    let mut out = LoopMatrix { dim, bound, terms: BTreeMap::new() };
    out.add_term(e, 0, &linalg::identity(dim));
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{factorial, q};
    use crate::testutil::*;

    fn solve(td: &ToricData, part: &NefPartition, bound: i64) -> (OrbRing, FundamentalSolution) {
        let r = ring(td);
        let fs = fundamental_solution(td, &r, part, &q(bound)).unwrap();
        (r, fs)
    }

    #[test]
    fn identity_factorizes_trivially() {
        let id = LoopMatrix::identity(2, 1, q(3));
        let f = factorize(&id).unwrap();
        assert_eq!(f.a, id);
        assert_eq!(f.u, id);
    }

    #[test]
    fn pure_negative_part() {
        let mut m = LoopMatrix::identity(2, 1, q(2));
        let nil = vec![vec![q(0), q(1)], vec![q(0), q(0)]];
        m.add_term(vec![q(1)], -1, &nil);
        let f = factorize(&m).unwrap();
        assert_eq!(f.a, m);
        assert_eq!(f.u, LoopMatrix::identity(2, 1, q(2)));
    }

    /// Oracle: small quantum cohomology `H^{n+1} = q` of projective space.
    #[test]
    fn projective_space_quantum_product() {
        for (td, n) in [(p1(), 2), (p2(), 3)] {
            let (_, fs) = solve(&td, &NefPartition::empty(), 6);
            assert!(fs.remultiply_residual().is_zero());
            let c = fs.connection(0).unwrap();
            let mut pow = c.clone();
            for _ in 1..n {
                pow = pow.mul(&c);
            }
            assert_eq!(pow, monomial_identity(fs.m.dim, vec![q(1)], q(6)));
            // classical limit
            assert_eq!(c.terms[&vec![q(0)]][&0], fs.p_mats[0]);
        }
    }

    #[test]
    fn p2_upsilon_and_unitarity() {
        let td = p2();
        let (r, fs) = solve(&td, &NefPartition::empty(), 5);
        let u = fs.upsilon();
        assert_eq!(*u, LoopMatrix::identity(3, 1, q(5)).mul_const(&fs.factorization.m0));
        assert!(fs.unitarity_residual(&r.gram()).is_zero());
    }

    #[test]
    fn p1xp1_flatness() {
        let td = p1xp1();
        let (_, fs) = solve(&td, &NefPartition::empty(), 4);
        let conns: Vec<LoopMatrix> = (0..2).map(|a| fs.connection(a).unwrap()).collect();
        assert!(flatness_residual(&conns).is_zero());
    }

    #[test]
    fn orbifold_factorization() {
        let td = wp112();
        let (r, fs) = solve(&td, &NefPartition::empty(), 3);
        assert_eq!(fs.ops.len(), 4);
        assert!(fs.remultiply_residual().is_zero());
        let conns: Vec<LoopMatrix> = (0..2).map(|a| fs.connection(a).unwrap()).collect();
        assert!(flatness_residual(&conns).is_zero());
        assert!(fs.unitarity_residual(&r.gram()).is_zero());
    }

    #[test]
    fn quintic_upsilon_is_f() {
        let td = p4();
        let part = NefPartition { parts: vec![vec![0, 1, 2, 3, 4]] };
        let (_, fs) = solve(&td, &part, 3);
        assert!(fs.remultiply_residual().is_zero());
        let u = fs.upsilon();
        for d in 0..=3u64 {
            let zm = &u.terms[&vec![q(d as i64)]];
            for (p, m) in zm {
                assert!(*p == 0 || m.iter().all(|row| row[0].is_zero()));
            }
            let col0: Vec<Q> = zm[&0].iter().map(|row| row[0].clone()).collect();
            let f = Q::from_integer(factorial(5 * d)) / Q::from_integer(factorial(d).pow(5));
            let mut expected = vec![q(0); 5];
            expected[0] = f;
            assert_eq!(col0, expected);
        }
    }
}
