use std::f64::consts::PI;

use num_traits::Zero;

use super::classes::psi_twisted;
use super::kclass::KClass;
use crate::error::{Error, Result};
use crate::field::{Scalar, C};
use crate::rational::{to_f64, Q};
use crate::ring::OrbRing;
use crate::series::{extract_mirror_map, grading, pbar, Exponent, NefPartition, QSeries, ZPoly};
use crate::toric::ToricData;

/// `J = I / F`, exact up to the series bound.
pub fn j_function(td: &ToricData, ring: &OrbRing, i0: &QSeries) -> Result<QSeries> {
    let mm = extract_mirror_map(td, ring, i0)?;
    let finv = mm.f.inverse(td.lattice.rank())?;
    let mut j = QSeries::new(i0.sector, i0.prefactor, i0.bound.clone(), i0.z_window);
    for (e1, a) in &finv.terms {
        for (e2, poly) in &i0.terms {
            let e: Exponent = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            if grading(&e) <= i0.bound {
                j.add_term(e, poly.scale(a));
            }
        }
    }
    Ok(j)
}

/// `ρ = c_1(X) = Σ_{i≤m} D̄_i`.
pub fn first_chern(td: &ToricData, ring: &OrbRing) -> Vec<Q> {
    (0..td.fan.m()).fold(ring.zero(), |acc, i| crate::field::add_vec(&acc, &ring.divisors[i]))
}

/// Data distinguishing the periods of `X` from the Laplace-transformed periods
/// of a complete intersection `Y ⊂ X` cut out by a section of `V = ⊕ L_{ξ_j}`.
#[derive(Debug, Clone)]
pub struct Twist {
    pub bundle: KClass,
    /// `ρ_Y = c_1(X) - Σ_j ξ_j`.
    pub rho: Vec<Q>,
    /// `log q' - log q = πi Σ_j ⟨ξ̃_j, ℓ^a⟩`.
    pub ell_offset: Vec<C>,
}

impl Twist {
    pub fn none(td: &ToricData, ring: &OrbRing) -> Self {
        Twist { bundle: KClass { terms: vec![] }, rho: first_chern(td, ring), ell_offset: vec![C::zero(); td.lattice.rank()] }
    }

    pub fn for_partition(td: &ToricData, ring: &OrbRing, partition: &NefPartition) -> Self {
        let m = td.fan.m();
        let mut rho = first_chern(td, ring);
        let mut bundle = KClass { terms: vec![] };
        let mut offset = vec![C::zero(); td.lattice.rank()];
        for j in 0..partition.c() {
            rho = crate::field::sub_vec(&rho, &partition.class(ring, j));
            let n: Vec<i64> = (0..m).map(|i| i64::from(partition.parts[j].contains(&i))).collect();
            bundle = bundle.add(&KClass::line(n));
            let phi = partition.phi_values(td, j);
            for (o, l) in offset.iter_mut().zip(&td.lattice.dual_basis) {
                let v = phi.iter().zip(l).fold(Q::zero(), |a, (x, y)| a + x * y);
                *o += C::new(0.0, PI * to_f64(&v));
            }
        }
        Twist { bundle, rho, ell_offset: offset }
    }

    fn shift(&self, ell: &[C]) -> Vec<C> {
        ell.iter().zip(&self.ell_offset).map(|(a, b)| a + b).collect()
    }
}

/// `z^{n - deg/2} z^ρ Ψ_V(E)`.
pub fn gamma_vector(td: &ToricData, ring: &OrbRing, e: &KClass, z: C, twist: &Twist) -> Vec<C> {
    let p = psi_twisted(td, ring, e, &twist.bundle);
    let g = ring.z_grading_action(&p, z, &twist.rho);
    let zn = z.powi(ring.n() as i32);
    g.iter().map(|c| c * zn).collect()
}

fn eval_poly(ring: &OrbRing, poly: &ZPoly, z: C) -> Vec<C> {
    if poly.is_zero() {
        ring.zero()
    } else {
        poly.eval(z)
    }
}

/// Coefficients `c_e(ℓ)` of `Π(1, E) = Σ_e e^{⟨e, ℓ⟩} c_e(ℓ)` where
/// `Π(1, E) = (J(q, -z), target)_orb` and `ℓ_a = log q_a`.
pub fn period_coefficients(
    td: &ToricData,
    ring: &OrbRing,
    j: &QSeries,
    target: &[C],
    ell: &[C],
    z: C,
) -> Result<Vec<(Exponent, C)>> {
    if ell.len() != td.lattice.rank() {
        return Err(Error::InvalidInput(format!("expected {} log coordinates", td.lattice.rank())));
    }
    let mut pre: Vec<C> = ring.zero();
    if j.prefactor {
        for (p, l) in pbar(td, ring).iter().zip(ell) {
            let scale = *l / -z;
            for (x, y) in pre.iter_mut().zip(p) {
                *x += C::from_q(y) * scale;
            }
        }
    }
    let pre = ring.exp_nilpotent(&pre);
    Ok(j
        .sorted_terms()
        .into_iter()
        .map(|(e, poly)| {
            let v = ring.act(&pre, &eval_poly(ring, poly, -z));
            (e.clone(), ring.pairing(&v, target))
        })
        .collect())
}

pub fn sum_period(coeffs: &[(Exponent, C)], ell: &[C]) -> C {
    coeffs.iter().fold(C::zero(), |acc, (e, c)| {
        let w = e.iter().zip(ell).fold(C::zero(), |a, (x, l)| a + l * to_f64(x));
        acc + w.exp() * c
    })
}

/// `(S(q', -z), z^{n - deg/2} z^ρ Ψ_V(E))_orb` at `log q = ℓ`, with `S = J` for
/// `X` itself and `S = I_V` for a complete intersection.
pub fn a_period(td: &ToricData, ring: &OrbRing, series: &QSeries, e: &KClass, ell: &[C], z: C, twist: &Twist) -> Result<C> {
    let target = gamma_vector(td, ring, e, z, twist);
    let ell = twist.shift(ell);
    Ok(sum_period(&period_coefficients(td, ring, series, &target, &ell, z)?, &ell))
}

/// `Z(E) = (2πi)^{-n} Π(1, E)`.
pub fn central_charge(td: &ToricData, ring: &OrbRing, j: &QSeries, e: &KClass, ell: &[C], z: C) -> Result<C> {
    let t = Twist::none(td, ring);
    Ok(a_period(td, ring, j, e, ell, z, &t)? / C::new(0.0, 2.0 * PI).powi(ring.n() as i32))
}

/// `⟨ξ̃, ℓ^a⟩` for `ξ = Σ n_i D_i`.
pub fn lift_pairing(td: &ToricData, n: &[i64]) -> Vec<Q> {
    td.lattice
        .dual_basis
        .iter()
        .map(|d| n.iter().zip(d).fold(Q::zero(), |acc, (ni, di)| acc + Q::from_integer((*ni).into()) * di))
        .collect()
}

/// Coefficientwise `e^{2πi⟨ξ̃, e⟩} c_e(ℓ + 2πi ξ̃) - c'_e(ℓ)` with `c'` the
/// coefficients for `L_ξ^∨ ⊗ E`.
#[derive(Debug, Clone)]
pub struct MonodromyTerm {
    pub exponent: Exponent,
    pub residual: C,
    pub scale: f64,
}

impl MonodromyTerm {
    pub fn relative(&self) -> f64 {
        self.residual.norm() / self.scale.max(1.0)
    }
}

pub fn max_relative(terms: &[MonodromyTerm]) -> f64 {
    terms.iter().map(MonodromyTerm::relative).fold(0.0, f64::max)
}

pub fn monodromy_residual(
    td: &ToricData,
    ring: &OrbRing,
    j: &QSeries,
    e: &KClass,
    n: &[i64],
    ell: &[C],
    z: C,
    twist: &Twist,
) -> Result<Vec<MonodromyTerm>> {
    e.check(td)?;
    if n.len() != td.fan.m() {
        return Err(Error::Domain(format!("ξ needs {} divisor coefficients", td.fan.m())));
    }
    let shift = lift_pairing(td, n);
    let ell = twist.shift(ell);
    let ell2: Vec<C> = ell.iter().zip(&shift).map(|(l, s)| l + C::new(0.0, 2.0 * PI * to_f64(s))).collect();
    let lhs = period_coefficients(td, ring, j, &gamma_vector(td, ring, e, z, twist), &ell2, z)?;
    let e2 = KClass::line(n.to_vec()).dual().tensor(e);
    let rhs = period_coefficients(td, ring, j, &gamma_vector(td, ring, &e2, z, twist), &ell, z)?;
    Ok(lhs
        .into_iter()
        .zip(rhs)
        .map(|((ex, a), (_, b))| {
            let w: Q = ex.iter().zip(&shift).fold(Q::zero(), |acc, (x, s)| acc + x * s);
            let phase = C::new(0.0, 2.0 * PI * to_f64(&w)).exp();
            let scale = a.norm().max(b.norm());
            MonodromyTerm { exponent: ex, residual: phase * a - b, scale }
        })
        .collect())
}
