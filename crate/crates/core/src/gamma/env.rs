use std::f64::consts::PI;

use super::kclass::sector_age;
use super::special::{gamma_real, hurwitz_zeta, polygamma, EULER_GAMMA};
use crate::rational::{to_f64, Q};
use crate::toric::ToricData;

/// Numeric constants used by Gamma-class expansions.
#[derive(Debug, Clone)]
pub struct GammaEnv {
    pub euler_gamma: f64,
    /// `ζ(2)..ζ(K)`.
    pub zeta: Vec<f64>,
    /// `(f, Γ(1 - f), ψ^{(k)}(1 - f))` for every fractional age.
    pub points: Vec<(Q, f64, Vec<f64>)>,
}

impl GammaEnv {
    pub fn new(td: &ToricData) -> Self {
        let k = td.fan.rank() + 2;
        let zeta = (2..=k).map(|s| hurwitz_zeta(s as u32, 1.0)).collect();
        let mut ages: Vec<Q> = Vec::new();
        for v in 0..td.boxes.len() {
            for i in 0..td.fan.m() {
                let mut n = vec![0; td.fan.m()];
                n[i] = 1;
                ages.push(sector_age(td, &n, v));
            }
        }
        ages.sort();
        ages.dedup();
        let points = ages
            .into_iter()
            .map(|f| {
                let a = 1.0 - to_f64(&f);
                let pg = (0..k as u32).map(|j| polygamma(j, a)).collect();
                (f, gamma_real(a), pg)
            })
            .collect();
        GammaEnv { euler_gamma: EULER_GAMMA, zeta, points }
    }

    /// `max |Γ(1-f)Γ(f) - π/sin(πf)|` over the stored nonzero ages.
    pub fn reflection_residual(&self) -> f64 {
        self.points
            .iter()
            .filter(|(f, _, _)| *f != Q::from_integer(0.into()))
            .map(|(f, g, _)| {
                let x = to_f64(f);
                (g * gamma_real(x) - PI / (PI * x).sin()).abs()
            })
            .fold(0.0, f64::max)
    }
}
