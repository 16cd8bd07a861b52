//! Scalars shared by exact and numerical ring arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::{to_f64, Q};

pub type C = Complex64;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_q(x: &Q) -> Self;
    fn from_i64(x: i64) -> Self {
        Self::from_q(&Q::from_integer(x.into()))
    }
    /// Magnitude used for residual reporting.
    fn magnitude(&self) -> f64;
    fn to_c(&self) -> C;
}

impl Scalar for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn magnitude(&self) -> f64 {
        to_f64(self).abs()
    }
    fn to_c(&self) -> C {
        C::new(to_f64(self), 0.0)
    }
}

impl Scalar for C {
    fn from_q(x: &Q) -> Self {
        C::new(to_f64(x), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c(&self) -> C {
        *self
    }
}

pub fn to_c_vec<S: Scalar>(v: &[S]) -> Vec<C> {
    v.iter().map(Scalar::to_c).collect()
}

pub fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<S: Scalar>(c: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn max_norm<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}
