use num_traits::{One, Signed, Zero};

use super::fan::StackyFan;
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::rational::{q, Q};

/// The lattice `L = ker(β̂: ℤ^{m+s} → N)`, a nef basis of `L^*`, and the
/// extended Mori cone.
///
/// Elements of `L^*` are written as coefficient vectors on `D_1..D_{m+s}`;
/// elements of `L_ℚ` as vectors in `ℚ^{m+s}`.
#[derive(Debug, Clone)]
pub struct ExtendedLattice {
    pub m: usize,
    pub s: usize,
    pub l_basis: Vec<Vec<i64>>,
    /// `p_1..p_{r+s}`; the last `s` are nonnegative combinations of the
    /// extended divisors.
    pub nef_basis: Vec<Vec<i64>>,
    /// `ℓ^a ∈ L` with `⟨p_b, ℓ^a⟩ = δ_ab`.
    pub dual_basis: Vec<Vec<Q>>,
    /// `δ_j = e_j - Σ_i c_ji e_i` for extended `j`.
    pub deltas: Vec<Vec<Q>>,
    pub mori_generators: Vec<Vec<Q>>,
    /// `m_ia` with `D_i = Σ_a m_ia p_a` in `L^*`.
    pub divisor_coords: Vec<Vec<Q>>,
}

fn pair(p: &[i64], y: &[Q]) -> Q {
    p.iter().zip(y).fold(Q::zero(), |acc, (a, b)| acc + q(*a) * b)
}

impl ExtendedLattice {
    pub fn new(fan: &StackyFan, nef_basis: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let (n, m, s) = (fan.rank(), fan.m(), fan.s());
        let beta: Vec<Vec<i64>> = (0..n).map(|k| (0..m + s).map(|i| fan.ray(i)[k]).collect()).collect();
        let l_basis: Vec<Vec<i64>> = linalg::column_hermite(&beta)
            .kernel_basis()
            .into_iter()
            .map(|mut l| {
                if l.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                    l.iter_mut().for_each(|x| *x = -*x);
                }
                l
            })
            .collect();
        let rr = m + s - n;
        if l_basis.len() != rr {
            return Err(Error::InvalidFan("kernel of the fan map has wrong rank".into()));
        }

        let mut deltas = Vec::new();
        for j in m..m + s {
            let bj = fan.ray_q(j);
            let (_, c) = fan
                .cone_coordinates(&bj)
                .ok_or_else(|| Error::InvalidFan(format!("extended vector {} in no cone", j + 1)))?;
            let mut d = vec![Q::zero(); m + s];
            for i in 0..m {
                d[i] = -c[i].clone();
            }
            d[j] = Q::one();
            deltas.push(d);
        }

        let mut gens: Vec<Vec<Q>> = Vec::new();
        for cone in fan.maximal_cones() {
            let binv = linalg::inverse(&fan.cone_matrix(cone)).expect("simplicial cone");
            for j in (0..m).filter(|j| !cone.contains(j)) {
                let c = linalg::mat_vec(&binv, &fan.ray_q(j));
                let mut g = vec![Q::zero(); m + s];
                g[j] = Q::one();
                for (&i, ci) in cone.iter().zip(c) {
                    g[i] = -ci;
                }
                gens.push(normalize_ray(g));
            }
        }
        gens.extend(deltas.iter().cloned());
        gens.sort();
        gens.dedup();

        let mut lat = ExtendedLattice {
            m,
            s,
            l_basis,
            nef_basis: Vec::new(),
            dual_basis: Vec::new(),
            deltas,
            mori_generators: gens,
            divisor_coords: Vec::new(),
        };
        let nef = match nef_basis {
            Some(b) => {
                lat.check_nef_basis(&b)?;
                b
            }
            None => lat.search_nef_basis()?,
        };
        lat.install_nef_basis(nef);
        Ok(lat)
    }

    pub fn rank(&self) -> usize {
        self.l_basis.len()
    }

    /// Number of non-extended nef basis elements.
    pub fn r(&self) -> usize {
        self.rank() - self.s
    }

    fn class_of(&self, p: &[i64]) -> Vec<i64> {
        self.l_basis.iter().map(|l| p.iter().zip(l).map(|(a, b)| a * b).sum()).collect()
    }

    fn is_extended_nef(&self, p: &[i64]) -> bool {
        self.mori_generators.iter().all(|g| !pair(p, g).is_negative())
    }

    fn pairing_det(&self, basis: &[Vec<i64>]) -> Q {
        let mat: QMat = basis.iter().map(|p| self.class_of(p).into_iter().map(q).collect()).collect();
        linalg::det(&mat)
    }

    fn is_extended_part(&self, p: &[i64]) -> bool {
        p[..self.m].iter().all(|&x| x == 0) && p[self.m..].iter().all(|&x| x >= 0)
    }

    fn check_nef_basis(&self, b: &[Vec<i64>]) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidInput(s));
        if b.len() != self.rank() || b.iter().any(|p| p.len() != self.m + self.s) {
            return bad(format!("nef basis must have {} vectors of length {}", self.rank(), self.m + self.s));
        }
        for (a, p) in b.iter().enumerate() {
            if !self.is_extended_nef(p) {
                return bad(format!("p_{} is not extended nef", a + 1));
            }
            if a >= self.r() && !self.is_extended_part(p) {
                return bad(format!("p_{} must be a nonnegative combination of extended divisors", a + 1));
            }
        }
        if self.pairing_det(b).abs() != Q::one() {
            return bad("nef basis is not a ℤ-basis of L^*".into());
        }
        Ok(())
    }

    fn search_nef_basis(&self) -> Result<Vec<Vec<i64>>> {
        let k = self.m + self.s;
        let mut cands: Vec<Vec<i64>> = Vec::new();
        let mut classes: Vec<Vec<i64>> = Vec::new();
        let mut all: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..k {
            all = all
                .into_iter()
                .flat_map(|p| (-1..=2).map(move |c| {
                    let mut p = p.clone();
                    p.push(c);
                    p
                }))
                .collect();
        }
        all.sort_by(|a, b| {
            let wa: i64 = a.iter().map(|x| x.abs()).sum();
            let wb: i64 = b.iter().map(|x| x.abs()).sum();
            wa.cmp(&wb).then_with(|| b.cmp(a))
        });
        for p in all {
            let c = self.class_of(&p);
            if c.iter().all(|&x| x == 0) || classes.contains(&c) || !self.is_extended_nef(&p) {
                continue;
            }
            classes.push(c);
            cands.push(p);
        }
        let ext: Vec<Vec<i64>> = cands.iter().filter(|p| self.is_extended_part(p)).cloned().collect();
        let mut chosen = Vec::new();
        if self.pick(&cands, &ext, &mut chosen, 0) {
            Ok(chosen)
        } else {
            Err(Error::SearchFailure("no extended-nef ℤ-basis of L^* found".into()))
        }
    }

    /// Depth-first choice of `r` general then `s` extended candidates.
    fn pick(&self, cands: &[Vec<i64>], ext: &[Vec<i64>], chosen: &mut Vec<Vec<i64>>, start: usize) -> bool {
        if chosen.len() == self.rank() {
            return self.pairing_det(chosen).abs() == Q::one();
        }
        let pool = if chosen.len() < self.r() { cands } else { ext };
        for i in start..pool.len() {
            chosen.push(pool[i].clone());
            let indep = {
                let mat: QMat = chosen.iter().map(|p| self.class_of(p).into_iter().map(q).collect()).collect();
                linalg::rank(&mat) == chosen.len()
            };
            let next = if chosen.len() == self.r() { 0 } else { i + 1 };
            if indep && self.pick(cands, ext, chosen, next) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    fn install_nef_basis(&mut self, nef: Vec<Vec<i64>>) {
        let rr = self.rank();
        let pmat: QMat = nef.iter().map(|p| self.class_of(p).into_iter().map(q).collect()).collect();
        let pinv = linalg::inverse(&pmat).expect("unimodular pairing");
        let k = self.m + self.s;
        self.dual_basis = (0..rr)
            .map(|a| {
                (0..k)
                    .map(|i| (0..rr).fold(Q::zero(), |acc, kk| acc + &pinv[kk][a] * q(self.l_basis[kk][i])))
                    .collect()
            })
            .collect();
        self.divisor_coords = (0..k)
            .map(|i| self.dual_basis.iter().map(|l| l[i].clone()).collect())
            .collect();
        self.nef_basis = nef;
    }

    /// `e_a = ⟨p_a, y⟩`.
    pub fn q_exponents(&self, y: &[Q]) -> Vec<Q> {
        self.nef_basis.iter().map(|p| pair(p, y)).collect()
    }

    /// Inverse of [`q_exponents`](Self::q_exponents) on `L_ℚ`.
    pub fn ambient_from_q(&self, e: &[Q]) -> Vec<Q> {
        let k = self.m + self.s;
        (0..k)
            .map(|i| e.iter().zip(&self.dual_basis).fold(Q::zero(), |acc, (ea, l)| acc + ea * &l[i]))
            .collect()
    }

    /// Total q-degree `Σ_a ⟨p_a, y⟩`.
    pub fn grading(&self, y: &[Q]) -> Q {
        self.q_exponents(y).iter().fold(Q::zero(), |a, x| a + x)
    }

    /// `⟨ρ̂, y⟩` with `ρ̂ = Σ D_i`.
    pub fn rho_hat(&self, y: &[Q]) -> Q {
        y.iter().fold(Q::zero(), |a, x| a + x)
    }

    /// Membership of `y ∈ L_ℚ` in the extended Mori cone.
    pub fn in_extended_mori(&self, y: &[Q]) -> bool {
        if linalg::is_zero_vec(y) {
            return true;
        }
        let e = self.q_exponents(y);
        if e.iter().any(|x| x.is_negative()) {
            return false;
        }
        let gens: Vec<Vec<Q>> = self.mori_generators.iter().map(|g| self.q_exponents(g)).collect();
        let rr = self.rank();
        subsets(gens.len(), rr).into_iter().any(|sub| {
            let a: QMat = (0..rr).map(|row| sub.iter().map(|&g| gens[g][row].clone()).collect()).collect();
            if linalg::rank(&a) != sub.len() {
                return false;
            }
            linalg::solve(&a, &e).is_some_and(|lam| lam.iter().all(|x| !x.is_negative()))
        })
    }
}

fn normalize_ray(g: Vec<Q>) -> Vec<Q> {
    let lead = g.iter().map(|x| x.abs()).filter(|x| !x.is_zero()).max().unwrap();
    g.into_iter().map(|x| x / &lead).collect()
}

/// Nonempty subsets of `0..n` of size at most `k`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let lo = s.last().map_or(0, |&x| x + 1);
            for i in lo..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.remove(0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::toric::LatticeVector;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn wp112_ext() -> StackyFan {
        StackyFan::new(
            2,
            vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -2])],
            vec![lv(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    #[test]
    fn p2_lattice() {
        let f = StackyFan::new(2, vec![lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])], vec![], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let l = ExtendedLattice::new(&f, None).unwrap();
        assert_eq!(l.l_basis, vec![vec![1, 1, 1]]);
        assert_eq!(l.nef_basis, vec![vec![1, 0, 0]]);
        assert_eq!(l.mori_generators, vec![vec![q(1), q(1), q(1)]]);
        assert_eq!(l.ambient_from_q(&[q(2)]), vec![q(2), q(2), q(2)]);
    }

    #[test]
    fn wp112_extended_nef_basis() {
        let l = ExtendedLattice::new(&wp112_ext(), None).unwrap();
        assert_eq!(l.nef_basis, vec![vec![1, 0, 0, 1], vec![0, 0, 0, 1]]);
        assert_eq!(l.deltas, vec![vec![qf(-1, 2), q(0), qf(-1, 2), q(1)]]);
        // δ_4 pairs to (1/2, 1) and lies in the extended Mori cone
        let d = &l.deltas[0];
        assert_eq!(l.q_exponents(d), vec![qf(1, 2), q(1)]);
        assert!(l.in_extended_mori(d));
        assert!(!l.in_extended_mori(&d.iter().map(|x| -x).collect::<Vec<_>>()));
    }

    #[test]
    fn supplied_basis_checked() {
        assert!(ExtendedLattice::new(&wp112_ext(), Some(vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]])).is_err());
        assert!(ExtendedLattice::new(&wp112_ext(), Some(vec![vec![0, 0, 1, 1], vec![0, 0, 0, 1]])).is_ok());
    }

    #[test]
    fn dual_basis_is_dual() {
        let l = ExtendedLattice::new(&wp112_ext(), None).unwrap();
        for (a, la) in l.dual_basis.iter().enumerate() {
            let e = l.q_exponents(la);
            for (b, eb) in e.iter().enumerate() {
                assert_eq!(*eb, if a == b { q(1) } else { q(0) });
            }
        }
    }
}
