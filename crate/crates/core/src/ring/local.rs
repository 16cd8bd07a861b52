use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::rational::Q;

/// A finite-dimensional graded commutative ℚ-algebra with basis element 0
/// the unit and an integration functional.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalRing {
    pub labels: Vec<String>,
    /// Complex degree of each basis element.
    pub degrees: Vec<usize>,
    /// `e_i e_j = Σ c e_k` as sparse lists.
    pub mult: Vec<Vec<Vec<(usize, Q)>>>,
    pub integral: Vec<Q>,
}

impl LocalRing {
    pub fn point() -> Self {
        LocalRing {
            labels: vec!["1".into()],
            degrees: vec![0],
            mult: vec![vec![vec![(0, Q::from_integer(1.into()))]]],
            integral: vec![Q::from_integer(1.into())],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if self.degrees.len() != d || self.integral.len() != d || self.mult.len() != d {
            return Err(Error::Config("sector ring tables have inconsistent sizes".into()));
        }
        if self.mult.iter().any(|row| row.len() != d) {
            return Err(Error::Config("multiplication table is not square".into()));
        }
        if d == 0 || self.degrees[0] != 0 {
            return Err(Error::Config("basis element 0 must be the unit".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let terms = &self.mult[i][j];
                if terms.iter().any(|(k, _)| *k >= d || self.degrees[*k] != self.degrees[i] + self.degrees[j]) {
                    return Err(Error::Config(format!("product e{i}*e{j} breaks the grading")));
                }
                if self.mult[j][i] != *terms {
                    return Err(Error::Config(format!("product e{i}*e{j} is not commutative")));
                }
            }
        }
        Ok(())
    }

    pub fn mul<S: Scalar>(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai.clone() * bj.clone();
                for (k, c) in &self.mult[i][j] {
                    out[*k] = out[*k].clone() + ab.clone() * S::from_q(c);
                }
            }
        }
        out
    }

    pub fn integrate<S: Scalar>(&self, a: &[S]) -> S {
        a.iter()
            .zip(&self.integral)
            .fold(S::zero(), |acc, (x, w)| acc + x.clone() * S::from_q(w))
    }
}
