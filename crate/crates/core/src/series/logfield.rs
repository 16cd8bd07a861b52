use num_traits::{One, Zero};

use super::qseries::{grading, QSeries};
#[cfg(test)]
use super::zpoly::ZPoly;
use crate::error::{Error, Result};
use crate::rational::{ceil_i64, q, Q};
use crate::ring::OrbRing;
use crate::toric::ToricData;

/// `z Σ_a ⟨ξ, ℓ^a⟩ q_a ∂_a` for `ξ ∈ L^*_ℚ` given on `D_1..D_{m+s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogVectorField {
    pub coeffs: Vec<Q>,
}

impl LogVectorField {
    /// `bD_i`.
    pub fn divisor(td: &ToricData, i: usize) -> Self {
        let mut coeffs = vec![Q::zero(); td.fan.m() + td.fan.s()];
        coeffs[i] = Q::one();
        LogVectorField { coeffs }
    }

    /// `z q_a ∂_a`.
    pub fn direction(td: &ToricData, a: usize) -> Self {
        LogVectorField { coeffs: td.lattice.nef_basis[a].iter().map(|&x| q(x)).collect() }
    }

    fn bar(&self, td: &ToricData, ring: &OrbRing) -> Vec<Q> {
        let mut x = ring.zero();
        for (i, c) in self.coeffs.iter().enumerate().take(td.fan.m()) {
            for (xk, dk) in x.iter_mut().zip(&ring.divisors[i]) {
                *xk += c * dk;
            }
        }
        x
    }

    /// Applies `(field - shift·z)` to a series; the prefactor contributes `ξ̄ ∪`.
    pub fn apply_shifted(&self, td: &ToricData, ring: &OrbRing, s: &QSeries, shift: &Q) -> QSeries {
        let bar = self.bar(td, ring);
        let mut out = QSeries::new(s.sector, s.prefactor, s.bound.clone(), s.z_window);
        for (e, poly) in &s.terms {
            let y = td.lattice.ambient_from_q(e);
            let pairing = self.coeffs.iter().zip(&y).fold(Q::zero(), |a, (c, yi)| a + c * yi) - shift;
            let mut t = poly.scale(&pairing).shift(1);
            if s.prefactor {
                t = t.add(&poly.map(|c| ring.act(&bar, c)));
            }
            out.add_term(e.clone(), t);
        }
        out
    }

    pub fn apply(&self, td: &ToricData, ring: &OrbRing, s: &QSeries) -> QSeries {
        self.apply_shifted(td, ring, s, &Q::zero())
    }
}

/// `δ ∈ K_0` with `{-δ} = v`, `⌈δ_i⌉ ≥ 0`, of least degree.
pub fn find_delta(td: &ToricData, v: usize, bound: &Q) -> Result<Vec<Q>> {
    td.enumerate_kv(0, bound)
        .into_iter()
        .find(|fd| fd.target == v && fd.d.iter().all(|x| ceil_i64(x) >= 0))
        .map(|fd| fd.d)
        .ok_or_else(|| {
            Error::SearchFailure(format!("no δ ∈ K_0 reducing to Box element {:?} within degree {bound}", td.boxes[v].v.0))
        })
}

/// `q^{-δ} Π_i Π_{ν<⌈δ_i⌉} (bD_i - νz) I^0`.
pub fn derive_iv(td: &ToricData, ring: &OrbRing, v: usize, i0: &QSeries) -> Result<QSeries> {
    if i0.sector != 0 {
        return Err(Error::MalformedSeries("derive_iv needs I^0".into()));
    }
    let delta = find_delta(td, v, &i0.bound)?;
    let mut s = i0.clone();
    for (i, di) in delta.iter().enumerate() {
        let field = LogVectorField::divisor(td, i);
        for nu in 0..ceil_i64(di) {
            s = field.apply_shifted(td, ring, &s, &q(nu));
        }
    }
    let shift = td.lattice.q_exponents(&delta);
    let new_bound = &i0.bound - grading(&shift);
    let mut out = QSeries::new(v, true, new_bound, i0.z_window);
    for (e, poly) in s.terms {
        let e2: Vec<Q> = e.iter().zip(&shift).map(|(a, b)| a - b).collect();
        if grading(&e2) <= out.bound {
            out.add_term(e2, poly);
        }
    }
    Ok(out)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::build_i;
    use crate::testutil::*;

    #[test]
    fn delta_zero_is_identity() {
        let td = p2();
        let r = ring(&td);
        let s = build_i(&td, &r, 0, &q(3), (-6, 6)).unwrap();
        assert_eq!(derive_iv(&td, &r, 0, &s).unwrap(), s);
    }

    #[test]
    fn field_on_prefactor() {
        let td = p2();
        let r = ring(&td);
        let s = build_i(&td, &r, 0, &q(0), (-6, 6)).unwrap();
        let out = LogVectorField::divisor(&td, 0).apply(&td, &r, &s);
        assert_eq!(out.coeff(&[q(0)]).unwrap(), &ZPoly::constant(r.divisors[0].clone()));
    }

    #[test]
    fn derived_twisted_i_function() {
        let td = wp112();
        let r = ring(&td);
        let i0 = build_i(&td, &r, 0, &q(4), (-6, 6)).unwrap();
        let derived = derive_iv(&td, &r, 1, &i0).unwrap();
        let direct = build_i(&td, &r, 1, &derived.bound, (-6, 6)).unwrap();
        assert!(derived.bound >= q(2));
        assert_eq!(derived.terms, direct.terms);
    }
}
