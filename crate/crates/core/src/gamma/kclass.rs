use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, q, Q};
use crate::ring::OrbRing;
use crate::toric::ToricData;

/// `Σ_k c_k L_{ξ_k}` with `ξ_k = Σ_i n_{ki} D_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KClass {
    pub terms: Vec<(i64, Vec<i64>)>,
}

impl KClass {
    pub fn line(n: Vec<i64>) -> Self {
        KClass { terms: vec![(1, n)] }
    }

    pub fn structure_sheaf(m: usize) -> Self {
        KClass::line(vec![0; m])
    }

    /// `O(k D_i)`.
    pub fn divisor_multiple(m: usize, i: usize, k: i64) -> Self {
        let mut n = vec![0; m];
        n[i] = k;
        KClass::line(n)
    }

    pub fn rank(&self) -> i64 {
        self.terms.iter().map(|(c, _)| c).sum()
    }

    pub fn dual(&self) -> Self {
        KClass { terms: self.terms.iter().map(|(c, n)| (*c, n.iter().map(|x| -x).collect())).collect() }
    }

    pub fn tensor(&self, other: &KClass) -> Self {
        let mut terms = Vec::new();
        for (c1, n1) in &self.terms {
            for (c2, n2) in &other.terms {
                terms.push((c1 * c2, n1.iter().zip(n2).map(|(a, b)| a + b).collect()));
            }
        }
        KClass { terms }.simplify()
    }

    pub fn add(&self, other: &KClass) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        KClass { terms }.simplify()
    }

    pub fn neg(&self) -> Self {
        KClass { terms: self.terms.iter().map(|(c, n)| (-c, n.clone())).collect() }
    }

    fn simplify(self) -> Self {
        let mut out: Vec<(i64, Vec<i64>)> = Vec::new();
        for (c, n) in self.terms {
            match out.iter_mut().find(|(_, m)| *m == n) {
                Some(e) => e.0 += c,
                None => out.push((c, n)),
            }
        }
        out.retain(|(c, _)| *c != 0);
        KClass { terms: out }
    }

    pub fn check(&self, td: &ToricData) -> Result<()> {
        if self.terms.iter().any(|(_, n)| n.len() != td.fan.m()) {
            return Err(Error::InvalidInput(format!("line bundle vectors must have length {}", td.fan.m())));
        }
        Ok(())
    }
}

/// `f_v(ξ) = {φ_ξ(v)} = {Σ_i n_i c_i(v)}`.
pub fn sector_age(td: &ToricData, n: &[i64], v: usize) -> Q {
    let c = &td.boxes[v].coeffs;
    frac(&n.iter().zip(c).fold(Q::from_integer(0.into()), |a, (ni, ci)| a + q(*ni) * ci))
}

/// `ξ = Σ n_i D̄_i` as an untwisted class.
pub fn line_class(ring: &OrbRing, n: &[i64]) -> Vec<Q> {
    let mut x = ring.zero();
    for (i, ni) in n.iter().enumerate() {
        if *ni != 0 {
            for (xk, dk) in x.iter_mut().zip(&ring.divisors[i]) {
                *xk += q(*ni) * dk;
            }
        }
    }
    x
}

/// `O(k)` on a space whose divisors are all multiples of one class, as `O(k D_1)`.
pub fn o(td: &ToricData, k: i64) -> KClass {
    KClass::divisor_multiple(td.fan.m(), 0, k)
}

/// `ι_* O_Y = Π_j (1 - O(-ξ_j))` for `ξ_j = Σ_{i∈I_j} D_i`.
pub fn koszul(m: usize, parts: &[Vec<usize>]) -> KClass {
    let mut out = KClass::structure_sheaf(m);
    for part in parts {
        let mut n = vec![0; m];
        for &i in part {
            n[i] = -1;
        }
        out = out.tensor(&KClass::structure_sheaf(m).add(&KClass::line(n).neg()));
    }
    out
}
