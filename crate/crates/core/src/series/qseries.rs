use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::zpoly::ZPoly;
use crate::error::{Error, Result};
use crate::rational::Q;

pub type Exponent = Vec<Q>;

pub fn grading(e: &[Q]) -> Q {
    e.iter().fold(Q::zero(), |a, b| a + b)
}

/// Truncated series `Σ_e q^e c_e(z)` with ring-valued Laurent coefficients.
///
/// With `prefactor` set the series stands for `e^{p̄ log q / z}` times the
/// stored terms.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    pub sector: usize,
    pub prefactor: bool,
    /// Terms with total q-degree `≤ bound` are complete.
    pub bound: Q,
    /// Display window for `z` powers.
    pub z_window: (i32, i32),
    pub terms: BTreeMap<Exponent, ZPoly>,
}

impl QSeries {
    pub fn new(sector: usize, prefactor: bool, bound: Q, z_window: (i32, i32)) -> Self {
        QSeries { sector, prefactor, bound, z_window, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, e: Exponent, c: ZPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_default();
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        if self.prefactor != other.prefactor || self.sector != other.sector {
            return Err(Error::MalformedSeries("adding series of different shape".into()));
        }
        let mut out = self.clone();
        out.bound = self.bound.clone().min(other.bound.clone());
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out.truncate();
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> QSeries {
        let mut out = self.clone();
        out.terms = self.terms.iter().map(|(e, p)| (e.clone(), p.scale(c))).filter(|(_, p)| !p.is_zero()).collect();
        out
    }

    pub fn truncate(&mut self) {
        let b = self.bound.clone();
        self.terms.retain(|e, _| grading(e) <= b);
    }

    /// Terms ordered by total degree, then exponent.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &ZPoly)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grading(a.0).cmp(&grading(b.0)).then_with(|| a.0.cmp(b.0)));
        t
    }

    pub fn coeff(&self, e: &[Q]) -> Option<&ZPoly> {
        self.terms.get(e)
    }

    /// Largest `|z|`-power range used by the terms.
    pub fn z_range(&self) -> Option<(i32, i32)> {
        self.terms.values().filter_map(ZPoly::z_range).fold(None, |acc, (lo, hi)| match acc {
            None => Some((lo, hi)),
            Some((a, b)) => Some((a.min(lo), b.max(hi))),
        })
    }
}

/// Scalar truncated series `Σ_e a_e q^e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    pub bound: Q,
    pub terms: BTreeMap<Exponent, Q>,
}

impl ScalarSeries {
    pub fn new(bound: Q) -> Self {
        ScalarSeries { bound, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize, bound: Q) -> Self {
        let mut s = ScalarSeries::new(bound);
        s.terms.insert(vec![Q::zero(); rank], Q::one());
        s
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        if grading(&e) > self.bound || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[Q]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn mul(&self, other: &ScalarSeries) -> ScalarSeries {
        let mut out = ScalarSeries::new(self.bound.clone().min(other.bound.clone()));
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    /// `1/f` for `f = 1 + (positive-degree terms)`.
    pub fn inverse(&self, rank: usize) -> Result<ScalarSeries> {
        let zero = vec![Q::zero(); rank];
        if self.coeff(&zero) != Q::one() {
            return Err(Error::MalformedSeries("constant term is not 1".into()));
        }
        let mut tail = self.clone();
        tail.terms.remove(&zero);
        if tail.terms.keys().any(|e| grading(e) <= Q::zero()) {
            return Err(Error::MalformedSeries("series has non-positive exponents".into()));
        }
        for c in tail.terms.values_mut() {
            *c = -c.clone();
        }
        let mut inv = ScalarSeries::one(rank, self.bound.clone());
        let mut power = inv.clone();
        loop {
            power = power.mul(&tail);
            if power.terms.is_empty() {
                break;
            }
            for (e, c) in &power.terms {
                inv.add_term(e.clone(), c.clone());
            }
        }
        Ok(inv)
    }
}
