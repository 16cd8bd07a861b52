use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::local::LocalRing;
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::rational::{q, Q};
use crate::toric::StackyFan;

type Mono = Vec<u32>;

/// Degree-by-degree presentation of `H*(X;ℚ)` for a simplicial complete fan.
struct Presentation {
    /// Face monomials per degree.
    monos: Vec<Vec<Mono>>,
    /// Per degree: normal form of each face monomial in terms of the basis.
    normal: Vec<Vec<Vec<(usize, Q)>>>,
    basis: Vec<(usize, usize)>,
}

fn face_monomials(fan: &StackyFan, k: usize) -> Vec<Mono> {
    let m = fan.m();
    let mut out: Vec<Mono> = vec![vec![0; m]];
    for _ in 0..k {
        let mut next = Vec::new();
        for mono in &out {
            let lo = mono.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in lo..m {
                let mut t = mono.clone();
                t[i] += 1;
                let support: Vec<usize> = (0..m).filter(|&j| t[j] > 0).collect();
                if fan.is_face(&support) {
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn label(mono: &Mono) -> String {
    let parts: Vec<String> = mono
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("D{}", i + 1) } else { format!("D{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl Presentation {
    fn new(fan: &StackyFan) -> Result<Self> {
        let n = fan.rank();
        let m = fan.m();
        let mut monos = Vec::new();
        let mut normal = Vec::new();
        let mut basis = Vec::new();
        for k in 0..=n {
            let mk = face_monomials(fan, k);
            let index: BTreeMap<&Mono, usize> = mk.iter().enumerate().map(|(i, x)| (x, i)).collect();
            let mut rel: QMat = Vec::new();
            if k > 0 {
                for prev in &monos[k - 1] {
                    let prev: &Mono = prev;
                    for u in 0..n {
                        let mut row = vec![Q::zero(); mk.len()];
                        for i in 0..m {
                            let c = fan.ray(i)[u];
                            if c == 0 {
                                continue;
                            }
                            let mut t = prev.clone();
                            t[i] += 1;
                            if let Some(&j) = index.get(&t) {
                                row[j] += q(c);
                            }
                        }
                        rel.push(row);
                    }
                }
            }
            let (r, pivots) = if rel.is_empty() { (Vec::new(), Vec::new()) } else { linalg::rref(&rel) };
            let free: Vec<usize> = (0..mk.len()).filter(|c| !pivots.contains(c)).collect();
            let offset = basis.len();
            let pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(a, &f)| (f, offset + a)).collect();
            let mut nf = vec![Vec::new(); mk.len()];
            for &f in &free {
                nf[f] = vec![(pos[&f], Q::one())];
            }
            for (row, &p) in r.iter().zip(&pivots) {
                nf[p] = free
                    .iter()
                    .filter(|&&f| !row[f].is_zero())
                    .map(|&f| (pos[&f], -row[f].clone()))
                    .collect();
            }
            basis.extend(free.iter().map(|&f| (k, f)));
            monos.push(mk);
            normal.push(nf);
        }
        let euler = fan.maximal_cones().len();
        if basis.len() != euler {
            return Err(Error::Presentation(format!(
                "ring has dimension {} but the fan has {euler} maximal cones",
                basis.len()
            )));
        }
        if basis.iter().filter(|(k, _)| *k == n).count() != 1 {
            return Err(Error::Presentation("top degree is not one-dimensional".into()));
        }
        Ok(Presentation { monos, normal, basis })
    }

    fn reduce(&self, mono: &Mono) -> Vec<(usize, Q)> {
        let k: u32 = mono.iter().sum();
        let k = k as usize;
        if k >= self.monos.len() {
            return Vec::new();
        }
        match self.monos[k].iter().position(|x| x == mono) {
            Some(i) => self.normal[k][i].clone(),
            None => Vec::new(),
        }
    }
}

/// The untwisted ring and the classes `D̄_1..D̄_m` in its basis.
pub fn stanley_reisner_ring(fan: &StackyFan) -> Result<(LocalRing, Vec<Vec<Q>>)> {
    let pres = Presentation::new(fan)?;
    let n = fan.rank();
    let m = fan.m();
    let dim = pres.basis.len();
    let mono_of = |b: usize| -> &Mono {
        let (k, i) = pres.basis[b];
        &pres.monos[k][i]
    };
    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let prod: Mono = mono_of(a).iter().zip(mono_of(b)).map(|(x, y)| x + y).collect();
            mult[a][b] = pres.reduce(&prod);
        }
    }
    let sigma = &fan.maximal_cones()[0];
    let mut top = vec![0u32; m];
    for &i in sigma {
        top[i] = 1;
    }
    let nf = pres.reduce(&top);
    let [(t, c)] = nf.as_slice() else {
        return Err(Error::Presentation("top cone class is not a multiple of the top basis element".into()));
    };
    let mut integral = vec![Q::zero(); dim];
    integral[*t] = Q::one() / (c * q(fan.cone_multiplicity(sigma)));
    let ring = LocalRing {
        labels: (0..dim).map(|b| label(mono_of(b))).collect(),
        degrees: pres.basis.iter().map(|(k, _)| *k).collect(),
        mult,
        integral,
    };
    let divisors = (0..m)
        .map(|i| {
            let mut mono = vec![0u32; m];
            mono[i] = 1;
            let mut v = vec![Q::zero(); dim];
            for (j, c) in pres.reduce(&mono) {
                v[j] = c;
            }
            v
        })
        .collect();
    debug_assert_eq!(ring.top_degree(), n);
    Ok((ring, divisors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::toric::LatticeVector;

    fn fan(rays: &[&[i64]], cones: Vec<Vec<usize>>) -> StackyFan {
        let n = rays[0].len();
        StackyFan::new(n, rays.iter().map(|r| LatticeVector(r.to_vec())).collect(), vec![], cones).unwrap()
    }

    fn p2() -> StackyFan {
        fan(&[&[1, 0], &[0, 1], &[-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    #[test]
    fn p2_ring() {
        let (r, d) = stanley_reisner_ring(&p2()).unwrap();
        assert_eq!(r.degrees, vec![0, 1, 2]);
        // all D_i equal H
        assert_eq!(d[0], d[1]);
        assert_eq!(d[1], d[2]);
        let h2 = r.mul(&d[0], &d[0]);
        assert_eq!(r.integrate(&h2), q(1));
        assert!(r.mul(&h2, &d[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn p1xp1_ring() {
        let f = fan(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        let (r, d) = stanley_reisner_ring(&f).unwrap();
        assert_eq!(r.dim(), 4);
        assert!(r.mul(&d[0], &d[0]).iter().all(|x| x.is_zero()));
        assert_eq!(r.integrate(&r.mul(&d[0], &d[1])), q(1));
    }

    #[test]
    fn weighted_integration() {
        // weights (1,2,1): D1 = D3, D2 = 2 D1, ∫D1^2 = 1/2
        let f = fan(&[&[1, 0], &[0, 1], &[-1, -2]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let (r, d) = stanley_reisner_ring(&f).unwrap();
        assert_eq!(r.integrate(&r.mul(&d[0], &d[2])), qf(1, 2));
        assert_eq!(r.integrate(&r.mul(&d[0], &d[1])), q(1));
        assert_eq!(r.integrate(&r.mul(&d[1], &d[1])), q(2));
    }
}
