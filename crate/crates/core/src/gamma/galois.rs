use std::f64::consts::PI;

use super::kclass::{line_class, sector_age};
use crate::field::{Scalar, C};
use crate::rational::{frac, to_f64, Q};
use crate::ring::OrbRing;
use crate::toric::ToricData;

/// `G(ξ)`: shift of the untwisted degree-2 coordinates by `-2πi ξ` and
/// scaling of sector `v` by `e^{2πi f_v(ξ)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisAction {
    pub shift: Vec<Q>,
    pub ages: Vec<Q>,
}

impl GaloisAction {
    pub fn new(td: &ToricData, ring: &OrbRing, n: &[i64]) -> Self {
        GaloisAction {
            shift: line_class(ring, n),
            ages: (0..ring.sectors.len()).map(|v| sector_age(td, n, v)).collect(),
        }
    }

    pub fn compose(&self, other: &GaloisAction) -> GaloisAction {
        GaloisAction {
            shift: crate::field::add_vec(&self.shift, &other.shift),
            ages: self.ages.iter().zip(&other.ages).map(|(a, b)| frac(&(a + b))).collect(),
        }
    }

    pub fn apply(&self, ring: &OrbRing, tau: &[C]) -> Vec<C> {
        let mut out = tau.to_vec();
        for (x, s) in out.iter_mut().zip(&self.shift) {
            *x -= C::new(0.0, 2.0 * PI) * C::from_q(s);
        }
        for v in 1..ring.sectors.len() {
            let phase = C::new(0.0, 2.0 * PI * to_f64(&self.ages[v])).exp();
            for x in &mut out[ring.range(v)] {
                *x *= phase;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ring, wp112};

    #[test]
    fn composition_is_additive() {
        let td = wp112();
        let r = ring(&td);
        let g = |n: &[i64]| GaloisAction::new(&td, &r, n);
        for a in [[1, 0, 0], [0, 1, 0], [1, 0, 1], [-1, 2, 0]] {
            for b in [[1, 0, 0], [0, 0, -1], [3, 1, 0]] {
                let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                assert_eq!(g(&a).compose(&g(&b)), g(&sum));
            }
        }
        assert_eq!(g(&[0, 0, 0]).apply(&r, &r.unit::<C>()), r.unit::<C>());
    }

    #[test]
    fn half_age_sector_flips_sign() {
        let td = wp112();
        let r = ring(&td);
        let g = GaloisAction::new(&td, &r, &[1, 0, 0]);
        let x = r.unit_of::<C>(1);
        let y = g.apply(&r, &x);
        assert!((y[r.sectors[1].offset] + C::new(1.0, 0.0)).norm() < 1e-15);
    }
}
