use std::collections::BTreeMap;
use std::ops::Deref;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::polytope;
use crate::error::{Error, Result};
use crate::linalg::{self, QMat};
use crate::rational::{q, Q};

/// A vector in the lattice `N ≅ ℤ^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i64>);

impl Deref for LatticeVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

/// A complete simplicial stacky fan with extended ray vectors.
///
/// Rays are indexed `0..m`, extended rays `m..m+s`. Cones are stored as
/// their maximal members (sorted index sets); faces are implied.
#[derive(Debug, Clone)]
pub struct StackyFan {
    rank: usize,
    rays: Vec<LatticeVector>,
    extended: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
}

impl StackyFan {
    pub fn new(
        rank: usize,
        rays: Vec<LatticeVector>,
        extended: Vec<LatticeVector>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        let fan = StackyFan { rank, rays, extended, cones };
        fan.validate()?;
        Ok(fan)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank;
        let m = self.rays.len();
        let bad = |s: String| Err(Error::InvalidFan(s));
        if n == 0 || m == 0 {
            return bad("empty fan".into());
        }
        for (i, b) in self.rays.iter().chain(&self.extended).enumerate() {
            if b.len() != n {
                return bad(format!("vector {} has length {} != rank {n}", i + 1, b.len()));
            }
            if b.iter().all(|&x| x == 0) {
                return bad(format!("vector {} is zero", i + 1));
            }
        }
        for c in &self.cones {
            if c.iter().any(|&i| i >= m) {
                return bad(format!("cone {c:?} references a missing ray"));
            }
            if c.len() != n {
                return bad(format!("maximal cone {c:?} is not full-dimensional"));
            }
            if linalg::det(&self.cone_matrix(c)).is_zero() {
                return bad(format!("cone {c:?} is not simplicial"));
            }
        }
        for i in 0..m {
            if !self.cones.iter().any(|c| c.contains(&i)) {
                return bad(format!("ray {} lies in no cone", i + 1));
            }
        }
        self.check_complete()?;
        let facets = polytope::facets(&self.rays_i64())?;
        if facets.iter().any(|f| f.offset <= 0) {
            return bad("0 is not in the interior of the fan polytope".into());
        }
        let all: Vec<Vec<i64>> = self.all_rays().map(|b| b.0.clone()).collect();
        let transposed: Vec<Vec<i64>> = (0..n).map(|k| all.iter().map(|b| b[k]).collect()).collect();
        let h = linalg::column_hermite(&transposed);
        if h.rank != n || h.lattice_index() != 1 {
            return bad("ray vectors do not generate the lattice".into());
        }
        for (j, b) in self.extended.iter().enumerate() {
            if self.rays.contains(b) {
                return bad(format!("extended vector {} duplicates a ray", m + j + 1));
            }
            let x: Vec<Q> = b.iter().map(|&v| q(v)).collect();
            if !polytope::contains(&facets, &x) {
                return bad(format!("extended vector {} lies outside the fan polytope", m + j + 1));
            }
        }
        Ok(())
    }

    /// Every (n-1)-face of a maximal cone lies in exactly two maximal cones,
    /// on opposite sides of the wall.
    fn check_complete(&self) -> Result<()> {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.cones.iter().enumerate() {
            for skip in 0..c.len() {
                let w: Vec<usize> = c.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &i)| i).collect();
                walls.entry(w).or_default().push(ci);
            }
        }
        for (w, cs) in &walls {
            if cs.len() != 2 {
                return Err(Error::InvalidFan(format!(
                    "wall {:?} lies in {} maximal cones (fan not complete)",
                    w.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    cs.len()
                )));
            }
            // normal to the wall: opposite rays must be separated
            let sign_of = |ci: usize| {
                let c = &self.cones[ci];
                let other = *c.iter().find(|i| !w.contains(i)).unwrap();
                let mut rows: QMat = w.iter().map(|&i| self.ray_q(i)).collect();
                rows.push(self.ray_q(other));
                linalg::det(&rows).signum()
            };
            if sign_of(cs[0]) == sign_of(cs[1]) {
                return Err(Error::InvalidFan(format!("cones overlap across wall {w:?}")));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn m(&self) -> usize {
        self.rays.len()
    }
    pub fn s(&self) -> usize {
        self.extended.len()
    }
    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }
    pub fn extended(&self) -> &[LatticeVector] {
        &self.extended
    }
    pub fn all_rays(&self) -> impl Iterator<Item = &LatticeVector> {
        self.rays.iter().chain(&self.extended)
    }
    /// `b_i` for `i < m+s`.
    pub fn ray(&self, i: usize) -> &LatticeVector {
        if i < self.m() {
            &self.rays[i]
        } else {
            &self.extended[i - self.m()]
        }
    }
    pub fn ray_q(&self, i: usize) -> Vec<Q> {
        self.ray(i).iter().map(|&x| q(x)).collect()
    }
    pub fn rays_i64(&self) -> Vec<Vec<i64>> {
        self.rays.iter().map(|b| b.0.clone()).collect()
    }

    pub fn is_face(&self, set: &[usize]) -> bool {
        set.is_empty() || self.cones.iter().any(|c| set.iter().all(|i| c.contains(i)))
    }

    /// `n × |σ|` matrix with the cone's rays as columns.
    pub fn cone_matrix(&self, cone: &[usize]) -> QMat {
        (0..self.rank)
            .map(|k| cone.iter().map(|&i| q(self.ray(i)[k])).collect())
            .collect()
    }

    pub fn cone_multiplicity(&self, cone: &[usize]) -> i64 {
        linalg::det_i64(
            &(0..self.rank)
                .map(|k| cone.iter().map(|&i| self.ray(i)[k]).collect())
                .collect::<Vec<_>>(),
        )
        .abs()
    }

    /// Writes `x = Σ_{i∈σ} c_i b_i` with `c ≥ 0` for some maximal cone `σ`;
    /// returns the minimal supporting cone and the full coefficient vector
    /// (length `m`).
    pub fn cone_coordinates(&self, x: &[Q]) -> Option<(Vec<usize>, Vec<Q>)> {
        for c in &self.cones {
            let a = self.cone_matrix(c);
            let Some(coef) = linalg::solve(&a, x) else { continue };
            if coef.iter().all(|v| !v.is_negative()) {
                let mut full = vec![Q::zero(); self.m()];
                let mut support = Vec::new();
                for (&i, v) in c.iter().zip(coef) {
                    if !v.is_zero() {
                        support.push(i);
                    }
                    full[i] = v;
                }
                return Some((support, full));
            }
        }
        None
    }
}
