use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::qseries::{grading, Exponent, QSeries, ScalarSeries};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Q;
use crate::ring::OrbRing;
use crate::toric::ToricData;

/// `I = e^{p̄ log q/z}(F + G/z + O(z^{-2}))`, `ς = p̄ log q + G/F`.
#[derive(Debug, Clone)]
pub struct MirrorMap {
    pub f: ScalarSeries,
    pub g: BTreeMap<Exponent, Vec<Q>>,
    /// Power-series part `G/F` of `ς`.
    pub correction: BTreeMap<Exponent, Vec<Q>>,
    /// `p̄_a` for the log part `Σ_a p̄_a log q_a`.
    pub log_part: Vec<Vec<Q>>,
}

/// `p̄_a = Σ_{i<m} (p_a)_i D̄_i` for every nef basis element.
pub fn pbar(td: &ToricData, ring: &OrbRing) -> Vec<Vec<Q>> {
    td.lattice
        .nef_basis
        .iter()
        .map(|p| {
            let mut x = ring.zero();
            for (i, c) in p.iter().enumerate().take(td.fan.m()) {
                if *c != 0 {
                    let d: Vec<Q> = ring.divisors[i].iter().map(|y| y * Q::from_integer((*c).into())).collect();
                    x = crate::field::add_vec(&x, &d);
                }
            }
            x
        })
        .collect()
}

pub fn extract_mirror_map(td: &ToricData, ring: &OrbRing, series: &QSeries) -> Result<MirrorMap> {
    if series.sector != 0 || !series.prefactor {
        return Err(Error::MalformedSeries("mirror map needs the untwisted I-function".into()));
    }
    let rank = td.lattice.rank();
    let mut f = ScalarSeries::new(series.bound.clone());
    let mut g = BTreeMap::new();
    for (e, poly) in &series.terms {
        if let Some((_, hi)) = poly.z_range() {
            if hi > 0 {
                return Err(Error::MalformedSeries(format!("positive z-power in the q^{e:?} term")));
            }
        }
        if let Some(c0) = poly.coeff(0) {
            if c0[1..].iter().any(|x| !x.is_zero()) {
                return Err(Error::MalformedSeries(format!("z^0 part of the q^{e:?} term is not scalar")));
            }
            f.add_term(e.clone(), c0[0].clone());
        }
        if let Some(c1) = poly.coeff(-1) {
            g.insert(e.clone(), c1.clone());
        }
    }
    let zero = vec![Q::zero(); rank];
    if f.coeff(&zero) != Q::one() {
        return Err(Error::MalformedSeries("F(0) ≠ 1".into()));
    }
    let finv = f.inverse(rank)?;
    let mut correction: BTreeMap<Exponent, Vec<Q>> = BTreeMap::new();
    for (e1, a) in &finv.terms {
        for (e2, v) in &g {
            let e: Exponent = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            if grading(&e) > series.bound {
                continue;
            }
            let entry = correction.entry(e).or_insert_with(|| ring.zero());
            for (x, y) in entry.iter_mut().zip(v) {
                *x += a * y;
            }
        }
    }
    correction.retain(|_, v| !linalg::is_zero_vec(v));
    Ok(MirrorMap { f, g, correction, log_part: pbar(td, ring) })
}

/// Coordinates of a class in the span of the given vectors, if any.
pub fn coordinates(basis: &[Vec<Q>], x: &[Q]) -> Option<Vec<Q>> {
    let a: Vec<Vec<Q>> = (0..x.len()).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    linalg::solve(&a, x)
}
