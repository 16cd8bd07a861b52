use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};
use crate::field::C;
use crate::linalg;
use crate::rational::{fmt_q, q, to_f64, Q};
use crate::series::Exponent;

/// Critical values `N ζ^j (K q^e)^{1/N}`, `ζ = e^{2πi/N}`, `j = 0..N-1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValues {
    pub n: i64,
    #[serde(serialize_with = "ser_q")]
    pub k: Q,
    #[serde(serialize_with = "ser_qvec")]
    pub q_exponent: Exponent,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn ser_qvec<S: serde::Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(fmt_q))
}

impl CriticalValues {
    pub fn eval(&self, ell: &[C]) -> Vec<C> {
        let w = self.q_exponent.iter().zip(ell).fold(C::zero(), |a, (e, l)| a + l * to_f64(e));
        let base = (w + C::new(to_f64(&self.k), 0.0).ln()) / self.n as f64;
        (0..self.n)
            .map(|j| C::new(0.0, 2.0 * PI * j as f64 / self.n as f64).exp() * base.exp() * self.n as f64)
            .collect()
    }

    pub fn describe(&self) -> String {
        let qs: Vec<String> = self
            .q_exponent
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(a, e)| {
                let name = if self.q_exponent.len() == 1 { "q".to_string() } else { format!("q{}", a + 1) };
                if e.is_one() { name } else { format!("{name}^{}", fmt_q(e)) }
            })
            .collect();
        let inner = if self.k.is_one() { qs.join("*") } else { format!("{}*{}", fmt_q(&self.k), qs.join("*")) };
        format!("{} ζ^j ({})^(1/{}), ζ = e^(2πi/{}), j = 0..{}", self.n, inner, self.n, self.n, self.n - 1)
    }
}

/// Exact critical values of `W = Σ_{i=0}^{n} a_i q^{g_i} t^{b_i}` with `n+1` terms.
///
/// At a critical point `w_i = a_i q^{g_i} t^{b_i}` satisfies `Σ w_i b_i = 0`, so
/// `w = c λ` for the primitive positive relation `λ`, and `Π w_i^{λ_i}` is
/// independent of `t`; the critical value is `|λ| c`.
pub fn critical_values(w: &LaurentPoly) -> Result<CriticalValues> {
    let n = w.n;
    if w.terms.len() != n + 1 {
        return Err(Error::Unsupported("critical values need a simplex Newton polytope".into()));
    }
    let rows: Vec<Vec<i64>> = (0..n).map(|r| w.terms.iter().map(|t| t.t[r]).collect()).collect();
    let h = linalg::column_hermite(&rows);
    let ker = h.kernel_basis();
    if ker.len() != 1 {
        return Err(Error::Unsupported("exponents are not in general position".into()));
    }
    let mut lambda = ker[0].clone();
    if lambda[0] < 0 {
        lambda.iter_mut().for_each(|x| *x = -*x);
    }
    if lambda.iter().any(|x| *x <= 0) {
        return Err(Error::Domain("0 is not interior to the Newton polytope".into()));
    }
    let total: i64 = lambda.iter().sum();
    let mut k = Q::one();
    let r = w.terms[0].q.len();
    let mut e = vec![Q::zero(); r];
    for (term, &l) in w.terms.iter().zip(&lambda) {
        if !term.coeff.is_positive() {
            return Err(Error::Unsupported("non-positive coefficients".into()));
        }
        // (a_i/λ_i)^{λ_i}
        let base = &term.coeff / q(l);
        for _ in 0..l {
            k *= &base;
        }
        for (ea, ga) in e.iter_mut().zip(&term.q) {
            *ea += q(l) * ga;
        }
    }
    Ok(CriticalValues { n: total, k, q_exponent: e })
}

/// Gradient `t_k ∂_k W` at a point, for numeric confirmation.
pub fn log_gradient(w: &LaurentPoly, t: &[C], ell: &[C]) -> Vec<C> {
    (0..w.n)
        .map(|k| {
            let part = LaurentPoly {
                n: w.n,
                terms: w
                    .terms
                    .iter()
                    .filter(|x| x.t[k] != 0)
                    .map(|x| {
                        let mut x = x.clone();
                        x.coeff *= q(x.t[k]);
                        x
                    })
                    .collect(),
            };
            part.eval(t, ell)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> LaurentPoly {
        LaurentPoly::monomial(vec![1, 0], q(1), vec![q(0)])
            .add(&LaurentPoly::monomial(vec![0, 1], q(1), vec![q(0)]))
            .add(&LaurentPoly::monomial(vec![-1, -1], q(1), vec![q(1)]))
    }

    #[test]
    fn cubic_mirror_has_three_values() {
        let cv = critical_values(&cubic()).unwrap();
        assert_eq!((cv.n, cv.k.clone(), cv.q_exponent.clone()), (3, q(1), vec![q(1)]));
        let qv: f64 = 0.2;
        let ell = [C::new(qv.ln(), 0.0)];
        let vals = cv.eval(&ell);
        let s = qv.cbrt();
        let omega = C::new(-0.5, 3f64.sqrt() / 2.0);
        for (j, v) in vals.iter().enumerate() {
            let want = omega.powi(j as i32) * 3.0 * s;
            assert!((v - want).norm() < 1e-12);
            // t_1 = t_2 = ω^j q^{1/3} is the critical point
            let t = [omega.powi(j as i32) * s, omega.powi(j as i32) * s];
            assert!(log_gradient(&cubic(), &t, &ell).iter().all(|g| g.norm() < 1e-12));
            assert!((cubic().eval(&t, &ell) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn weighted_relation() {
        // t1 + t2 + q/(t1 t2^2): λ = (1, 2, 1), values 4 (q/4)^{1/4} ζ^j
        let w = LaurentPoly::monomial(vec![1, 0], q(1), vec![q(0)])
            .add(&LaurentPoly::monomial(vec![0, 1], q(1), vec![q(0)]))
            .add(&LaurentPoly::monomial(vec![-1, -2], q(1), vec![q(1)]));
        let cv = critical_values(&w).unwrap();
        assert_eq!(cv.n, 4);
        assert_eq!(cv.k, crate::rational::qf(1, 4));
    }

    #[test]
    fn non_simplex_rejected() {
        let w = cubic().add(&LaurentPoly::monomial(vec![0, -1], q(1), vec![q(0)]));
        assert!(critical_values(&w).is_err());
    }
}
