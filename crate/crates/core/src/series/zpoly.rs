use std::collections::BTreeMap;

use num_traits::Zero;

use crate::field::{Scalar, C};
use crate::rational::Q;

/// Laurent polynomial in `z` with ring-vector coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZPoly {
    pub coeffs: BTreeMap<i32, Vec<Q>>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly::default()
    }

    pub fn constant(v: Vec<Q>) -> Self {
        let mut p = ZPoly::zero();
        p.add_term(0, &v);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn z_range(&self) -> Option<(i32, i32)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    pub fn coeff(&self, p: i32) -> Option<&Vec<Q>> {
        self.coeffs.get(&p)
    }

    pub fn add_term(&mut self, p: i32, v: &[Q]) {
        if v.iter().all(Zero::is_zero) {
            return;
        }
        match self.coeffs.get_mut(&p) {
            Some(c) => {
                for (a, b) in c.iter_mut().zip(v) {
                    *a += b;
                }
                if c.iter().all(Zero::is_zero) {
                    self.coeffs.remove(&p);
                }
            }
            None => {
                self.coeffs.insert(p, v.to_vec());
            }
        }
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (p, v) in &other.coeffs {
            out.add_term(*p, v);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> ZPoly {
        let mut out = ZPoly::zero();
        for (p, v) in &self.coeffs {
            out.add_term(*p, &v.iter().map(|x| x * c).collect::<Vec<_>>());
        }
        out
    }

    pub fn shift(&self, k: i32) -> ZPoly {
        ZPoly { coeffs: self.coeffs.iter().map(|(p, v)| (p + k, v.clone())).collect() }
    }

    /// Applies a linear map to every coefficient.
    pub fn map(&self, f: impl Fn(&[Q]) -> Vec<Q>) -> ZPoly {
        let mut out = ZPoly::zero();
        for (p, v) in &self.coeffs {
            out.add_term(*p, &f(v));
        }
        out
    }

    /// `z ↦ -z`.
    pub fn negate_z(&self) -> ZPoly {
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(p, v)| (*p, if p % 2 == 0 { v.clone() } else { v.iter().map(|x| -x).collect() }))
                .collect(),
        }
    }

    pub fn eval(&self, z: C) -> Vec<C> {
        let dim = self.coeffs.values().next().map_or(0, Vec::len);
        let mut out = vec![C::zero(); dim];
        for (p, v) in &self.coeffs {
            let zp = z.powi(*p);
            for (o, x) in out.iter_mut().zip(v) {
                *o += zp * C::from_q(x);
            }
        }
        out
    }
}
