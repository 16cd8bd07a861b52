use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Scalar, C};
use crate::rational::{fmt_q, to_f64, Q};
use crate::series::{Exponent, NefPartition};
use crate::toric::ToricData;

/// `c · q^e · t^u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentTerm {
    pub t: Vec<i64>,
    pub coeff: Q,
    pub q: Exponent,
}

/// A Laurent polynomial in `t_1..t_n` whose coefficients are rational
/// multiples of monomials in `q`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    pub n: usize,
    pub terms: Vec<LaurentTerm>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { n, terms: Vec::new() }
    }

    pub fn monomial(t: Vec<i64>, coeff: Q, q: Exponent) -> Self {
        LaurentPoly { n: t.len(), terms: vec![LaurentTerm { t, coeff, q }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for term in &other.terms {
            match out.terms.iter_mut().find(|x| x.t == term.t && x.q == term.q) {
                Some(x) => x.coeff += &term.coeff,
                None => out.terms.push(term.clone()),
            }
        }
        out.terms.retain(|x| !x.coeff.is_zero());
        out
    }

    /// Value at `t` with `q_a = e^{ℓ_a}`.
    pub fn eval(&self, t: &[C], ell: &[C]) -> C {
        self.terms.iter().fold(C::zero(), |acc, term| {
            let w = term.q.iter().zip(ell).fold(C::zero(), |a, (e, l)| a + l * to_f64(e));
            let tp = term.t.iter().zip(t).fold(C::one(), |a, (k, x)| a * x.powi(*k as i32));
            acc + C::from_q(&term.coeff) * w.exp() * tp
        })
    }

    /// Value at `t = e^u` for real `u` and real positive `q`.
    pub fn eval_log_real(&self, u: &[f64], ell: &[f64]) -> f64 {
        self.terms.iter().fold(0.0, |acc, term| {
            let w: f64 = term.q.iter().zip(ell).map(|(e, l)| l * to_f64(e)).sum::<f64>()
                + term.t.iter().zip(u).map(|(k, x)| *k as f64 * x).sum::<f64>();
            acc + to_f64(&term.coeff) * w.exp()
        })
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            let mut parts = Vec::new();
            if !term.coeff.is_one() {
                parts.push(fmt_q(&term.coeff));
            }
            for (a, e) in term.q.iter().enumerate() {
                if !e.is_zero() {
                    let name = if term.q.len() == 1 { "q".to_string() } else { format!("q{}", a + 1) };
                    parts.push(if e.is_one() { name } else { format!("{name}^{}", fmt_q(e)) });
                }
            }
            for (i, p) in term.t.iter().enumerate() {
                match p {
                    0 => {}
                    1 => parts.push(format!("t{}", i + 1)),
                    _ => parts.push(format!("t{}^{p}", i + 1)),
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A section `i ↦ α_i = q^{g_i}` of the torus quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaAssignment {
    pub exponents: Vec<Exponent>,
}

impl AlphaAssignment {
    /// `α_i = Π_a q_a^{(p_a)_i}` from the nef basis.
    pub fn canonical(td: &ToricData) -> Self {
        let k = td.fan.m() + td.fan.s();
        AlphaAssignment {
            exponents: (0..k)
                .map(|i| td.lattice.nef_basis.iter().map(|p| Q::from_integer(p[i].into())).collect())
                .collect(),
        }
    }

    /// Checks `Π α_i^{l_i} = q^{q_exp(l)}` on the lattice `L`.
    pub fn validate(&self, td: &ToricData) -> Result<()> {
        let k = td.fan.m() + td.fan.s();
        let r = td.lattice.rank();
        if self.exponents.len() != k || self.exponents.iter().any(|e| e.len() != r) {
            return Err(Error::Config(format!("α-assignment needs {k} exponent vectors of length {r}")));
        }
        for l in &td.lattice.l_basis {
            let lq: Vec<Q> = l.iter().map(|x| Q::from_integer((*x).into())).collect();
            let want = td.lattice.q_exponents(&lq);
            let got: Vec<Q> = (0..r)
                .map(|a| (0..k).fold(Q::zero(), |acc, i| acc + &lq[i] * &self.exponents[i][a]))
                .collect();
            if got != want {
                return Err(Error::Config("α-assignment is not a section of the torus quotient".into()));
            }
        }
        Ok(())
    }
}

/// `W^{(j)} = Σ_{i∈Î_j} α_i t^{b_i}`; entry 0 collects the rays outside every part.
pub fn build_w(td: &ToricData, partition: &NefPartition, alpha: &AlphaAssignment) -> Result<Vec<LaurentPoly>> {
    partition.validate(td)?;
    alpha.validate(td)?;
    let n = td.fan.rank();
    let k = td.fan.m() + td.fan.s();
    let phis: Vec<Vec<Q>> = (0..partition.c()).map(|j| partition.phi_values(td, j)).collect();
    let mut out = vec![LaurentPoly::zero(n); partition.c() + 1];
    for i in 0..k {
        let j = phis.iter().position(|p| p[i].is_one()).map_or(0, |j| j + 1);
        let term = LaurentPoly::monomial(td.fan.ray(i).0.clone(), Q::one(), alpha.exponents[i].clone());
        out[j] = out[j].add(&term);
    }
    Ok(out)
}

/// `W_α = Σ_j W^{(j)}`.
pub fn total_w(ws: &[LaurentPoly]) -> LaurentPoly {
    ws.iter().skip(1).fold(ws[0].clone(), |acc, w| acc.add(w))
}

/// Exponent-indexed coefficients, for comparisons.
pub fn term_map(w: &LaurentPoly) -> BTreeMap<(Vec<i64>, Exponent), Q> {
    w.terms.iter().map(|t| ((t.t.clone(), t.q.clone()), t.coeff.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::testutil::{p2, toric};

    #[test]
    fn cubic_mirror() {
        let td = toric(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[], &[&[0, 1], &[1, 2], &[0, 2]]);
        let td = ToricData::new(td.fan, Some(vec![vec![0, 0, 1]])).unwrap();
        let part = NefPartition { parts: vec![vec![0, 1, 2]] };
        let ws = build_w(&td, &part, &AlphaAssignment::canonical(&td)).unwrap();
        assert!(ws[0].is_zero());
        assert_eq!(ws[1].to_string(), "t1 + t2 + q*t1^-1*t2^-1");
    }

    #[test]
    fn empty_partition_collects_everything() {
        let td = p2();
        let ws = build_w(&td, &NefPartition::empty(), &AlphaAssignment::canonical(&td)).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].terms.len(), 3);
        let v = ws[0].eval(&[C::new(1.0, 0.0), C::new(2.0, 0.0)], &[C::new(0.5f64.ln(), 0.0)]);
        assert!((v - C::new(0.5 + 2.0 + 0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn bad_section_rejected() {
        let td = p2();
        let a = AlphaAssignment { exponents: vec![vec![q(1)], vec![q(1)], vec![q(0)]] };
        assert!(a.validate(&td).is_err());
        let a = AlphaAssignment { exponents: vec![vec![q(0)], vec![q(1)], vec![q(0)]] };
        assert!(a.validate(&td).is_ok());
    }
}
