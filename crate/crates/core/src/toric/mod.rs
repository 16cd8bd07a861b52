//! Lattice and fan combinatorics of toric orbifolds.

mod boxes;
mod fan;
mod kv;
mod lattice;
mod polytope;

pub use boxes::{compute_box, BoxElement};
pub use fan::{LatticeVector, StackyFan};
pub use kv::FractionalDegree;
pub use lattice::ExtendedLattice;
pub use polytope::{facets, normalized_volume, reflexivity, Facet, Reflexivity};

use crate::error::{Error, Result};
use crate::rational::{frac, Q};
use num_traits::Zero;

/// Everything derived from a stacky fan that the series machinery needs.
#[derive(Debug, Clone)]
pub struct ToricData {
    pub fan: StackyFan,
    pub boxes: Vec<BoxElement>,
    pub lattice: ExtendedLattice,
}

impl ToricData {
    pub fn new(fan: StackyFan, nef_basis: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let boxes = compute_box(&fan)?;
        let lattice = ExtendedLattice::new(&fan, nef_basis)?;
        Ok(ToricData { fan, boxes, lattice })
    }

    pub fn box_index(&self, v: &[i64]) -> Option<usize> {
        self.boxes.iter().position(|b| b.v.0 == v)
    }

    /// `{-d} = Σ_{i≤m} {-d_i} b_i` as an index into `boxes`.
    pub fn reduce(&self, d: &[Q]) -> Result<usize> {
        let m = self.fan.m();
        let support: Vec<usize> = (0..m).filter(|&i| !d[i].is_integer()).collect();
        if !self.fan.is_face(&support) {
            return Err(Error::Domain(format!(
                "fractional support {support:?} is not a cone"
            )));
        }
        let n = self.fan.rank();
        let mut w = vec![Q::zero(); n];
        for &i in &support {
            let f = frac(&-d[i].clone());
            for (k, wk) in w.iter_mut().enumerate() {
                *wk += &f * Q::from_integer(self.fan.ray(i)[k].into());
            }
        }
        let w: Vec<i64> = w
            .iter()
            .map(|x| crate::rational::to_i64(x).ok_or_else(|| Error::Domain("reduction is not a lattice point".into())))
            .collect::<Result<_>>()?;
        self.box_index(&w)
            .ok_or_else(|| Error::Domain(format!("{w:?} is not a Box element")))
    }

    /// Index of the inverse sector `inv(v) = Σ {-c_i} b_i`.
    pub fn inverse_box(&self, v: usize) -> usize {
        let mut d = self.boxes[v].coeffs.clone();
        d.resize(self.fan.m() + self.fan.s(), Q::zero());
        // d = c gives {-d} = Σ{-c_i} b_i
        self.reduce(&d).expect("inverse of a Box element is in Box")
    }

    /// Ambient coefficient vector of `v` (length `m+s`, zero outside its cone).
    pub fn box_coeffs_padded(&self, v: usize) -> Vec<Q> {
        let mut c = self.boxes[v].coeffs.clone();
        c.resize(self.fan.m() + self.fan.s(), Q::zero());
        c
    }

    pub fn enumerate_kv(&self, v: usize, bound: &Q) -> Vec<FractionalDegree> {
        kv::enumerate_kv(self, v, bound)
    }
}
