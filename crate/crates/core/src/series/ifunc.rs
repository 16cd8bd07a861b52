use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::qseries::QSeries;
use super::zpoly::ZPoly;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, Q};
use crate::ring::{LocalRing, OrbRing};
use crate::toric::ToricData;

/// `ξ_j = Σ_{i∈I_j} D̄_i` for disjoint index sets `I_1..I_c` of rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NefPartition {
    pub parts: Vec<Vec<usize>>,
}

impl NefPartition {
    pub fn empty() -> Self {
        NefPartition { parts: Vec::new() }
    }

    pub fn c(&self) -> usize {
        self.parts.len()
    }

    /// `φ_j(b_i)` for all `i < m+s`.
    pub fn phi_values(&self, td: &ToricData, j: usize) -> Vec<Q> {
        let m = td.fan.m();
        let mut vals: Vec<Q> = (0..m).map(|i| if self.parts[j].contains(&i) { Q::one() } else { Q::zero() }).collect();
        for k in m..m + td.fan.s() {
            let (_, c) = td.fan.cone_coordinates(&td.fan.ray_q(k)).expect("extended ray lies in the fan");
            let val = (0..m).fold(Q::zero(), |acc, i| acc + &c[i] * &vals[i]);
            vals.push(val);
        }
        vals
    }

    /// Checks disjointness, nefness, Cartier-ness and `φ_j(b_i) ∈ {0,1}`.
    pub fn validate(&self, td: &ToricData) -> Result<()> {
        let m = td.fan.m();
        let bad = |s: String| Err(Error::NefPartition(s));
        let mut seen = vec![false; m];
        for part in &self.parts {
            for &i in part {
                if i >= m {
                    return bad(format!("index {} out of range", i + 1));
                }
                if seen[i] {
                    return bad(format!("ray {} appears in two parts", i + 1));
                }
                seen[i] = true;
            }
        }
        for j in 0..self.c() {
            let phi = self.phi_values(td, j);
            if phi.iter().any(|x| !x.is_zero() && !x.is_one()) {
                return bad(format!("φ_{} takes a value outside {{0,1}} on an extended ray", j + 1));
            }
            for cone in td.fan.maximal_cones() {
                // m_σ: ⟨m_σ, b_i⟩ = φ(b_i) on σ
                let bt = linalg::transpose(&td.fan.cone_matrix(cone));
                let rhs: Vec<Q> = cone.iter().map(|&i| phi[i].clone()).collect();
                let msig = linalg::solve(&bt, &rhs).expect("simplicial cone");
                for i in 0..m {
                    let val = td.fan.ray_q(i).iter().zip(&msig).fold(Q::zero(), |a, (x, y)| a + x * y);
                    if val > phi[i] {
                        return bad(format!("ξ_{} is not nef (cone {:?}, ray {})", j + 1, cone, i + 1));
                    }
                }
            }
            for b in &td.boxes {
                let val = (0..m).fold(Q::zero(), |acc, i| acc + &b.coeffs[i] * &phi[i]);
                if !val.is_integer() {
                    return bad(format!("ξ_{} is not Cartier at Box element {:?}", j + 1, b.v.0));
                }
            }
        }
        Ok(())
    }

    /// `ξ_j` as an untwisted class.
    pub fn class(&self, ring: &OrbRing, j: usize) -> Vec<Q> {
        let mut x = ring.zero();
        for &i in &self.parts[j] {
            x = crate::field::add_vec(&x, &ring.divisors[i]);
        }
        x
    }

    /// `ρ̂_Y = Σ_i D_i - Σ_j ξ̃_j` as coefficients on `D_1..D_{m+s}`.
    pub fn rho_hat_y(&self, td: &ToricData) -> Vec<Q> {
        let k = td.fan.m() + td.fan.s();
        let mut r = vec![Q::one(); k];
        for j in 0..self.c() {
            for (ri, p) in r.iter_mut().zip(self.phi_values(td, j)) {
                *ri -= p;
            }
        }
        r
    }
}

fn untwisted_part(ring: &OrbRing, x: &[Q]) -> Vec<Q> {
    x[..ring.untwisted().dim()].to_vec()
}

/// `p ↦ p · (a + kz)` with `a` untwisted.
fn mul_linear(r: &LocalRing, p: &ZPoly, a: &[Q], k: &Q) -> ZPoly {
    let mut out = ZPoly::zero();
    for (e, c) in &p.coeffs {
        out.add_term(*e, &r.mul(c, a));
        out.add_term(e + 1, &c.iter().map(|x| x * k).collect::<Vec<_>>());
    }
    out
}

/// `p ↦ p / (a + kz) = p Σ_j (-a)^j (kz)^{-j-1}`, `a` nilpotent, `k ≠ 0`.
fn div_linear(r: &LocalRing, p: &ZPoly, a: &[Q], k: &Q) -> ZPoly {
    let mut out = ZPoly::zero();
    let mut term = p.clone();
    let mut j = 0;
    let kinv = Q::one() / k;
    let neg_a: Vec<Q> = a.iter().map(|x| -x).collect();
    while !term.is_zero() {
        out = out.add(&term.scale(&kinv).shift(-1));
        term = term.map(|c| r.mul(c, &neg_a)).scale(&kinv).shift(-1);
        j += 1;
        if j > r.top_degree() + 1 {
            break;
        }
    }
    out
}

/// `Box_d` applied to the unit, as an untwisted Laurent polynomial.
fn box_factor(ring: &OrbRing, d: &[Q]) -> ZPoly {
    let r = ring.untwisted();
    let mut p = ZPoly::constant(untwisted_part(ring, &ring.unit::<Q>()));
    for (i, di) in d.iter().enumerate() {
        let a = untwisted_part(ring, &ring.divisors[i]);
        if di.is_positive() {
            let mut k = di.clone();
            while k.is_positive() {
                p = div_linear(r, &p, &a, &k);
                k -= Q::one();
            }
        } else {
            let mut k = di + Q::one();
            while k <= Q::zero() {
                p = mul_linear(r, &p, &a, &k);
                k += Q::one();
            }
        }
        if p.is_zero() {
            break;
        }
    }
    p
}

/// `I^v` (empty partition) or the twisted `I_V^v`, with prefactor stripped.
pub fn build_i_twisted(
    td: &ToricData,
    ring: &OrbRing,
    partition: &NefPartition,
    v: usize,
    bound: &Q,
    z_window: (i32, i32),
) -> Result<QSeries> {
    let r = ring.untwisted();
    let mut series = QSeries::new(v, true, bound.clone(), z_window);
    let phis: Vec<Vec<Q>> = (0..partition.c()).map(|j| partition.phi_values(td, j)).collect();
    let xis: Vec<Vec<Q>> = (0..partition.c()).map(|j| untwisted_part(ring, &partition.class(ring, j))).collect();
    for fd in td.enumerate_kv(v, bound) {
        let mut p = box_factor(ring, &fd.d);
        for (phi, xi) in phis.iter().zip(&xis) {
            let l = phi.iter().zip(&fd.class).fold(Q::zero(), |a, (x, y)| a + x * y);
            if !l.is_integer() {
                return Err(Error::NefPartition(format!("⟨ξ̃, d+v⟩ = {l} is not integral")));
            }
            if l.is_negative() {
                return Err(Error::NefPartition(format!("⟨ξ̃, d+v⟩ = {l} is negative")));
            }
            let mut k = Q::one();
            while k <= l {
                p = mul_linear(r, &p, xi, &k);
                k += Q::one();
            }
        }
        let target: Vec<Q> = ring.unit_of(fd.target);
        let full = p.map(|c| {
            let mut a = c.to_vec();
            a.resize(ring.dim(), Q::zero());
            ring.act(&a, &target)
        });
        series.add_term(fd.q_exp.clone(), full);
    }
    Ok(series)
}

pub fn build_i(td: &ToricData, ring: &OrbRing, v: usize, bound: &Q, z_window: (i32, i32)) -> Result<QSeries> {
    build_i_twisted(td, ring, &NefPartition::empty(), v, bound, z_window)
}

/// Checks `p + deg/2 + ⟨ρ̂_Y, d+v⟩ = age(v)` for every stored term `q^{d+v} z^p φ`.
pub fn check_homogeneity(td: &ToricData, ring: &OrbRing, partition: &NefPartition, series: &QSeries) -> Result<()> {
    let rho = partition.rho_hat_y(td);
    let age = &td.boxes[series.sector].age;
    for (e, poly) in &series.terms {
        let y = td.lattice.ambient_from_q(e);
        let shift = rho.iter().zip(&y).fold(Q::zero(), |a, (x, w)| a + x * w);
        for (p, c) in &poly.coeffs {
            for (idx, x) in c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let total = q(i64::from(*p)) + ring.half_degree(idx) + &shift;
                if total != *age {
                    return Err(Error::MalformedSeries(format!(
                        "term q^{e:?} z^{p} {} has degree {total}, expected {age}",
                        ring.label(idx)
                    )));
                }
            }
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::factorial;
    use crate::testutil::*;

    /// Oracle: coefficient of `z^{-3d}` on the unit in `1/Π_{k≤d}(H+kz)^3`
    /// is `1/(d!)^3`.
    #[test]
    fn p2_leading_coefficients() {
        let td = p2();
        let r = ring(&td);
        let s = build_i(&td, &r, 0, &q(3), (-7, 7)).unwrap();
        for d in 0..=3i64 {
            let c = s.coeff(&[q(d)]).unwrap();
            let f = Q::from_integer(factorial(d as u64));
            assert_eq!(c.coeff(-3 * d as i32).unwrap()[0], Q::one() / (&f * &f * &f));
            // next order: -3 H_d z^{-3d-1} H / (d!)^3
            if d > 0 {
                let h: Q = (1..=d).map(|k| Q::new(1.into(), k.into())).sum();
                assert_eq!(c.coeff(-3 * d as i32 - 1).unwrap()[1], -q(3) * h / (&f * &f * &f));
            }
        }
        check_homogeneity(&td, &r, &NefPartition::empty(), &s).unwrap();
    }

    #[test]
    fn bound_zero_is_unit() {
        let td = wp112();
        let r = ring(&td);
        let s = build_i(&td, &r, 0, &q(0), (-6, 6)).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.coeff(&[q(0), q(0)]).unwrap(), &ZPoly::constant(r.unit()));
    }

    #[test]
    fn twisted_sector_leading_term() {
        let td = wp112();
        let r = ring(&td);
        let s = build_i(&td, &r, 1, &q(2), (-6, 6)).unwrap();
        assert_eq!(s.coeff(&[q(0), q(0)]).unwrap(), &ZPoly::constant(r.unit_of(1)));
        check_homogeneity(&td, &r, &NefPartition::empty(), &s).unwrap();
        let s0 = build_i(&td, &r, 0, &q(3), (-6, 6)).unwrap();
        check_homogeneity(&td, &r, &NefPartition::empty(), &s0).unwrap();
    }

    fn multinomial(k: u64, d: u64) -> Q {
        let f = factorial(d);
        Q::from_integer(factorial(k * d)) / Q::from_integer((0..k).fold(num_bigint::BigInt::one(), |a, _| a * &f))
    }

    #[test]
    fn quintic_f_coefficients() {
        let td = p4();
        let r = ring(&td);
        let part = NefPartition { parts: vec![vec![0, 1, 2, 3, 4]] };
        part.validate(&td).unwrap();
        let s = build_i_twisted(&td, &r, &part, 0, &q(3), (-8, 8)).unwrap();
        for d in 0..=3 {
            assert_eq!(s.coeff(&[q(d as i64)]).unwrap().coeff(0).unwrap()[0], multinomial(5, d));
        }
        check_homogeneity(&td, &r, &part, &s).unwrap();
    }

    #[test]
    fn cubic_f_coefficients() {
        let td = p2();
        let r = ring(&td);
        let part = NefPartition { parts: vec![vec![0, 1, 2]] };
        let s = build_i_twisted(&td, &r, &part, 0, &q(3), (-8, 8)).unwrap();
        let got: Vec<Q> = (0..=3).map(|d| s.coeff(&[q(d)]).unwrap().coeff(0).unwrap()[0].clone()).collect();
        assert_eq!(got, vec![q(1), q(6), q(90), q(1680)]);
    }

    #[test]
    fn empty_partition_matches_untwisted() {
        let td = p1xp1();
        let r = ring(&td);
        assert_eq!(
            build_i_twisted(&td, &r, &NefPartition::empty(), 0, &q(3), (-6, 6)).unwrap(),
            build_i(&td, &r, 0, &q(3), (-6, 6)).unwrap()
        );
    }

    #[test]
    fn non_nef_partition_rejected() {
        let td = wp112();
        // φ(b4) = 1/2 for the part {D1}
        assert!(NefPartition { parts: vec![vec![0]] }.validate(&td).is_err());
        assert!(NefPartition { parts: vec![vec![0, 1], vec![1]] }.validate(&td).is_err());
    }
}
