use num_traits::{One, Zero};
use serde::Serialize;

use super::fan::{LatticeVector, StackyFan};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, to_i64, Q};

/// `v = Σ_{i∈σ} c_i b_i` with `0 ≤ c_i < 1`, `σ` the minimal cone containing `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxElement {
    pub v: LatticeVector,
    /// Minimal supporting cone (0-based ray indices).
    pub cone: Vec<usize>,
    /// Coefficients `c_i(v)`, length `m`.
    #[serde(skip)]
    pub coeffs: Vec<Q>,
    #[serde(skip)]
    pub age: Q,
}

/// All Box elements of the fan, `0` first, then by age and lattice vector.
pub fn compute_box(fan: &StackyFan) -> Result<Vec<BoxElement>> {
    let n = fan.rank();
    let mut out: Vec<BoxElement> = Vec::new();
    for cone in fan.maximal_cones() {
        let d = fan.cone_multiplicity(cone);
        let b = fan.cone_matrix(cone);
        // c ∈ (1/d)ℤ^n ∩ [0,1)^n; v = B c integral
        for idx in grid(n, d) {
            let c: Vec<Q> = idx.iter().map(|&k| Q::new(k.into(), d.into())).collect();
            let v = linalg::mat_vec(&b, &c);
            if !v.iter().all(|x| x.is_integer()) {
                continue;
            }
            let v: Vec<i64> = v.iter().map(|x| to_i64(x).unwrap()).collect();
            if out.iter().any(|e| e.v.0 == v) {
                continue;
            }
            let mut coeffs = vec![Q::zero(); fan.m()];
            let mut support = Vec::new();
            for (&i, ci) in cone.iter().zip(&c) {
                if !ci.is_zero() {
                    support.push(i);
                }
                coeffs[i] = ci.clone();
            }
            let age = c.iter().fold(Q::zero(), |a, x| a + x);
            out.push(BoxElement { v: LatticeVector(v), cone: support, coeffs, age });
        }
    }
    finish(out)
}

fn finish(mut out: Vec<BoxElement>) -> Result<Vec<BoxElement>> {
    out.sort_by(|a, b| a.age.cmp(&b.age).then_with(|| a.v.cmp(&b.v)));
    if out.first().map_or(true, |e| !e.age.is_zero()) {
        return Err(Error::InvalidFan("Box does not contain 0".into()));
    }
    debug_assert!(out.iter().all(|e| e.coeffs.iter().all(|c| *c < Q::one() && *c >= q(0))));
    Ok(out)
}

fn grid(n: usize, d: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| (0..d).map(move |k| {
                let mut p = p.clone();
                p.push(k);
                p
            }))
            .collect();
    }
    out
}
