use std::f64::consts::PI;

use num_traits::{One, Zero};

use super::kclass::{line_class, sector_age, KClass};
use super::special::log_gamma_taylor;
use crate::error::{Error, Result};
use crate::field::{Scalar, C};
use crate::rational::{q, to_f64, Q};
use crate::ring::OrbRing;
use crate::toric::ToricData;

fn two_pi_i() -> C {
    C::new(0.0, 2.0 * PI)
}

/// Restriction of an untwisted class to every sector, as an inertia element.
fn restrict_all<S: Scalar>(ring: &OrbRing, x: &[S]) -> Vec<S> {
    ring.act(x, &ring.sector_units())
}

/// `Σ_v f_v ξ|_v`-type assembly: per-sector scalars times the restricted class.
fn per_sector_scalar(ring: &OrbRing, vals: &[C]) -> Vec<C> {
    let mut out = ring.zero();
    for (v, s) in ring.sectors.iter().enumerate() {
        out[s.offset] = vals[v];
    }
    out
}

/// `Π_k Γ(1 - f_v(ξ_k) + ξ_k|_v)^{c_k}` on every sector.
pub fn gamma_of_bundle(td: &ToricData, ring: &OrbRing, e: &KClass) -> Vec<C> {
    let depth = ring.sectors.iter().map(|s| s.ring.top_degree()).max().unwrap_or(0);
    let mut log_part: Vec<C> = ring.zero();
    let mut scalars = vec![C::one(); ring.sectors.len()];
    for (c, n) in &e.terms {
        let xi: Vec<C> = restrict_all(ring, &ring.lift::<C>(&line_class(ring, n)));
        for (v, s) in ring.sectors.iter().enumerate() {
            let a = 1.0 - to_f64(&sector_age(td, n, v));
            let coeffs = log_gamma_taylor(a, depth);
            scalars[v] *= C::new(coeffs[0].exp().powi(*c as i32), 0.0);
            let r = ring.range(v);
            let local = &xi[r.clone()];
            let mut pow: Vec<C> = local.to_vec();
            for coef in coeffs.iter().skip(1) {
                if pow.iter().all(|x| x.is_zero()) {
                    break;
                }
                for (dst, p) in log_part[r.clone()].iter_mut().zip(&pow) {
                    *dst += p * (*coef * *c as f64);
                }
                pow = s.ring.mul(&pow, local);
            }
        }
    }
    let e = ring.exp_nilpotent(&log_part);
    ring.cup_inertia(&per_sector_scalar(ring, &scalars), &e)
}

/// `Γ̂_X = Γ̂(TX)` with `TX ~ Σ_{i≤m} O(D_i)` minus a trivial bundle.
pub fn gamma_class(td: &ToricData, ring: &OrbRing) -> Vec<C> {
    let m = td.fan.m();
    let tx = KClass { terms: (0..m).map(|i| (1, (0..m).map(|j| i64::from(i == j)).collect())).collect() };
    gamma_of_bundle(td, ring, &tx)
}

/// `t̃ch(E) = ⊕_v Σ_k c_k e^{2πi f_v(ξ_k)} e^{ξ_k|_v}`.
pub fn tch(td: &ToricData, ring: &OrbRing, e: &KClass) -> Vec<C> {
    let mut out: Vec<C> = ring.zero();
    for (c, n) in &e.terms {
        let xi = ring.lift::<C>(&line_class(ring, n));
        let ex = ring.act(&ring.exp_nilpotent(&xi), &ring.sector_units::<C>());
        let phases: Vec<C> = (0..ring.sectors.len())
            .map(|v| (two_pi_i() * to_f64(&sector_age(td, n, v))).exp() * (*c as f64))
            .collect();
        let t = ring.cup_inertia(&per_sector_scalar(ring, &phases), &ex);
        out = crate::field::add_vec(&out, &t);
    }
    out
}

/// `(2πi)^{deg_0/2}` on the local (non-age) degree.
pub fn two_pi_i_grading(ring: &OrbRing, x: &[C]) -> Vec<C> {
    x.iter()
        .enumerate()
        .map(|(i, c)| {
            let v = ring.sector_of(i);
            let s = &ring.sectors[v];
            c * two_pi_i().powi(s.ring.degrees[i - s.offset] as i32)
        })
        .collect()
}

/// `(-1)^{deg_0/2}`.
pub fn sign_grading(ring: &OrbRing, x: &[C]) -> Vec<C> {
    x.iter()
        .enumerate()
        .map(|(i, c)| {
            let v = ring.sector_of(i);
            let s = &ring.sectors[v];
            if s.ring.degrees[i - s.offset] % 2 == 0 {
                *c
            } else {
                -c
            }
        })
        .collect()
}

/// `Ψ(E) = Γ̂_X ∪ (2πi)^{deg_0/2} inv* t̃ch(E)`.
pub fn psi(td: &ToricData, ring: &OrbRing, e: &KClass) -> Vec<C> {
    let t = two_pi_i_grading(ring, &ring.inv_star(&tch(td, ring, e)));
    ring.cup_inertia(&gamma_class(td, ring), &t)
}

/// `Ψ_V(E) = e^{πi c_1(V)} Γ̂(V^∨) ∪ Ψ(E)`.
pub fn psi_twisted(td: &ToricData, ring: &OrbRing, e: &KClass, v: &KClass) -> Vec<C> {
    let mut c1: Vec<C> = ring.zero();
    for (c, n) in &v.terms {
        let x = ring.lift::<C>(&line_class(ring, n));
        c1 = crate::field::add_vec(&c1, &crate::field::scale_vec(&C::new(*c as f64, 0.0), &x));
    }
    let phase = ring.act(&ring.exp_nilpotent(&crate::field::scale_vec(&C::new(0.0, PI), &c1)), &ring.sector_units::<C>());
    let g = gamma_of_bundle(td, ring, &v.dual());
    ring.cup_inertia(&ring.cup_inertia(&phase, &g), &psi(td, ring, e))
}

/// Taylor coefficients of `x/(1 - e^{-x})` up to `x^n`.
pub fn todd_series(n: usize) -> Vec<Q> {
    // (1 - e^{-x})/x = Σ (-1)^k x^k/(k+1)!
    let mut f = Vec::new();
    let mut fact = Q::one();
    for k in 0..=n {
        fact *= q(k as i64 + 1);
        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
        f.push(sign / &fact);
    }
    let mut inv = vec![Q::zero(); n + 1];
    inv[0] = Q::one();
    for k in 1..=n {
        let s = (1..=k).fold(Q::zero(), |acc, j| acc + &f[j] * &inv[k - j]);
        inv[k] = -s;
    }
    inv
}

/// `Td(TX) = Π_{i≤m} D̄_i/(1 - e^{-D̄_i})` in the untwisted ring.
pub fn todd_class(td: &ToricData, ring: &OrbRing) -> Vec<Q> {
    let n = ring.n();
    let coeffs = todd_series(n);
    let mut out: Vec<Q> = ring.unit();
    for i in 0..td.fan.m() {
        let d = &ring.divisors[i];
        let mut factor: Vec<Q> = ring.zero();
        let mut pow: Vec<Q> = ring.unit();
        for c in &coeffs {
            factor = crate::field::add_vec(&factor, &crate::field::scale_vec(c, &pow));
            pow = ring.act(d, &pow);
        }
        out = ring.act(&factor, &out);
    }
    out
}

/// Untwisted `ch(E)` with exact coefficients.
pub fn ch(ring: &OrbRing, e: &KClass) -> Vec<Q> {
    let mut out: Vec<Q> = ring.zero();
    for (c, n) in &e.terms {
        let x = line_class(ring, n);
        let ex = ring.exp_nilpotent(&x);
        let mut ex0: Vec<Q> = ring.zero();
        let d0 = ring.untwisted().dim();
        ex0[..d0].clone_from_slice(&ex[..d0]);
        out = crate::field::add_vec(&out, &crate::field::scale_vec(&q(*c), &ex0));
    }
    out
}

/// `χ(E_1, E_2) = ∫ Td · ch(E_1^∨ ⊗ E_2)` on a manifold.
pub fn euler_chi(td: &ToricData, ring: &OrbRing, e1: &KClass, e2: &KClass) -> Result<Q> {
    if td.boxes.len() > 1 {
        return Err(Error::Unsupported("Euler pairing on an orbifold needs Kawasaki corrections".into()));
    }
    let c = ch(ring, &e1.dual().tensor(e2));
    Ok(ring.integrate(&ring.act(&todd_class(td, ring), &c)))
}

/// `χ_Y(ι^*E_1, ι^*E_2) = χ_X(E_1, E_2 ⊗ ι_*O_Y)`.
pub fn euler_chi_complete_intersection(
    td: &ToricData,
    ring: &OrbRing,
    parts: &[Vec<usize>],
    e1: &KClass,
    e2: &KClass,
) -> Result<Q> {
    euler_chi(td, ring, e1, &e2.tensor(&super::kclass::koszul(td.fan.m(), parts)))
}

/// `((-1)^{deg_0/2} Γ̂) Γ̂ e^{πi c_1} - (2πi)^{deg_0/2} Td`, untwisted part.
pub fn gamma_todd_residual(td: &ToricData, ring: &OrbRing) -> Vec<C> {
    let g = gamma_class(td, ring);
    let c1: Vec<Q> = (0..td.fan.m()).fold(ring.zero(), |acc, i| crate::field::add_vec(&acc, &ring.divisors[i]));
    let e = ring.exp_nilpotent(&crate::field::scale_vec(&C::new(0.0, PI), &ring.lift::<C>(&c1)));
    let lhs = ring.act(&e, &ring.cup_inertia(&sign_grading(ring, &g), &g));
    let rhs = two_pi_i_grading(ring, &ring.lift::<C>(&todd_class(td, ring)));
    let d0 = ring.untwisted().dim();
    crate::field::sub_vec(&lhs[..d0], &rhs[..d0])
}

/// `(2πi)^{-n} ∫ e^{πiρ} (e^{-πi deg/2} Ψ(E_1)) ∪ Ψ(E_2)`.
pub fn psi_pairing(td: &ToricData, ring: &OrbRing, e1: &KClass, e2: &KClass) -> C {
    let p1 = psi(td, ring, e1);
    let p2 = psi(td, ring, e2);
    let rot: Vec<C> = p1
        .iter()
        .enumerate()
        .map(|(i, c)| c * (C::new(0.0, -PI) * to_f64(&ring.half_degree(i))).exp())
        .collect();
    let c1: Vec<Q> = (0..td.fan.m()).fold(ring.zero(), |acc, i| crate::field::add_vec(&acc, &ring.divisors[i]));
    let e = ring.exp_nilpotent(&crate::field::scale_vec(&C::new(0.0, PI), &ring.lift::<C>(&c1)));
    let prod = ring.act(&e, &ring.cup_inertia(&rot, &ring.inv_star(&p2)));
    ring.integrate(&prod) / two_pi_i().powi(ring.n() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{o, EULER_GAMMA};
    use crate::rational::qf;
    use crate::testutil::{p1, p1xp1, p2, p4, ring, wp112};

    #[test]
    fn todd_coefficients() {
        assert_eq!(todd_series(4), vec![q(1), qf(1, 2), qf(1, 12), q(0), qf(-1, 720)]);
    }

    #[test]
    fn gamma_class_of_p1() {
        let td = p1();
        let r = ring(&td);
        let g = gamma_class(&td, &r);
        assert!((g[0] - C::one()).norm() < 1e-12);
        // two copies of Γ(1 + H)
        assert!((g[1] - C::new(-2.0 * EULER_GAMMA, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn riemann_roch_on_p2() {
        let td = p2();
        let r = ring(&td);
        for k in -4..=4 {
            let chi = euler_chi(&td, &r, &KClass::structure_sheaf(3), &o(&td, k)).unwrap();
            assert_eq!(chi, q((k + 1) * (k + 2) / 2), "k = {k}");
        }
    }

    #[test]
    fn riemann_roch_on_p1xp1() {
        let td = p1xp1();
        let r = ring(&td);
        for a in -2..=2 {
            for b in -2..=2 {
                let e = KClass::line(vec![a, b, 0, 0]);
                let chi = euler_chi(&td, &r, &KClass::structure_sheaf(4), &e).unwrap();
                assert_eq!(chi, q((a + 1) * (b + 1)));
            }
        }
    }

    #[test]
    fn psi_pairing_matches_chi() {
        for td in [p2(), p1xp1(), p4()] {
            let r = ring(&td);
            let m = td.fan.m();
            for i in -1..=1 {
                for j in -1..=2 {
                    let e1 = KClass::divisor_multiple(m, 0, i);
                    let e2 = KClass::divisor_multiple(m, 1, j);
                    let chi = euler_chi(&td, &r, &e1, &e2).unwrap();
                    let p = psi_pairing(&td, &r, &e1, &e2);
                    assert!((p - C::new(to_f64(&chi), 0.0)).norm() < 1e-9, "{p} vs {chi}");
                }
            }
        }
    }

    #[test]
    fn psi_pairing_on_weighted_plane_counts_sections() {
        let td = wp112();
        let r = ring(&td);
        // weights (1, 2, 1) on D_1, D_2, D_3
        for k in -3i64..=5 {
            let expected: i64 = (0..=k.max(-1) / 2).map(|b| k - 2 * b + 1).filter(|_| k >= 0).sum();
            let p = psi_pairing(&td, &r, &KClass::structure_sheaf(3), &KClass::divisor_multiple(3, 0, k));
            assert!((p - C::new(expected as f64, 0.0)).norm() < 1e-9, "k = {k}: {p} vs {expected}");
        }
        assert!(euler_chi(&td, &r, &KClass::structure_sheaf(3), &KClass::structure_sheaf(3)).is_err());
    }

    #[test]
    fn gamma_todd_identity() {
        for td in [p1(), p2(), p1xp1(), wp112(), p4()] {
            let r = ring(&td);
            let res = gamma_todd_residual(&td, &r);
            assert!(crate::field::max_norm(&res) < 1e-10, "{res:?}");
        }
    }

    #[test]
    fn tch_of_structure_sheaf_is_sector_unit() {
        let td = wp112();
        let r = ring(&td);
        let t = tch(&td, &r, &KClass::structure_sheaf(3));
        assert!(crate::field::max_norm(&crate::field::sub_vec(&t, &r.sector_units())) < 1e-14);
        // O(D_1) picks up e^{2πi/2} on the twisted sector
        let t = tch(&td, &r, &KClass::divisor_multiple(3, 0, 1));
        let off = r.sectors[1].offset;
        assert!((t[off] + C::one()).norm() < 1e-12);
    }

    #[test]
    fn elliptic_curve_pairing() {
        let td = p2();
        let r = ring(&td);
        for i in -1..=1 {
            for j in -1..=1 {
                let chi = euler_chi_complete_intersection(&td, &r, &[vec![0, 1, 2]], &o(&td, i), &o(&td, j)).unwrap();
                assert_eq!(chi, q(3 * (j - i)));
            }
        }
    }

    #[test]
    fn k_class_algebra() {
        let a = KClass::line(vec![1, 0]);
        let b = KClass::line(vec![0, 2]).neg();
        let t = a.tensor(&b);
        assert_eq!(t.terms, vec![(-1, vec![1, 2])]);
        assert_eq!(a.add(&a.neg()).terms, vec![]);
        assert_eq!(a.dual().dual(), a);
        assert_eq!(a.add(&b).rank(), 0);
    }
}
