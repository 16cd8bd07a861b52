use std::collections::BTreeMap;

use num_complex::Complex64 as C;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toricmirror::app::{run, Command, Overrides};
use toricmirror::birkhoff::{factorize, LoopMatrix};
use toricmirror::bside::{build_w, critical_values, log_gradient, multinomial_series, torus_residue_series, total_w, AlphaAssignment};
use toricmirror::gamma::{ch, euler_chi, o, psi_pairing, GaloisAction, GammaEnv, KClass};
use toricmirror::linalg;
use toricmirror::ring::OrbRing;
use toricmirror::scenario::Scenario;
use toricmirror::series::{build_i, build_i_twisted, check_homogeneity, NefPartition, ScalarSeries};
use toricmirror::toric::{LatticeVector, StackyFan, ToricData};
use toricmirror::Error;

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Fan of `P(a, b, 1)`: rays `(1,0)`, `(0,1)`, `(-a,-b)`.
fn weighted(a: i64, b: i64) -> ToricData {
    let rays = vec![LatticeVector(vec![1, 0]), LatticeVector(vec![0, 1]), LatticeVector(vec![-a, -b])];
    let fan = StackyFan::new(2, rays, vec![], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    ToricData::new(fan, None).unwrap()
}

fn weights() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=5, 1i64..=5).prop_filter("coprime", |(a, b)| gcd(*a, *b) == 1)
}

fn p2() -> (ToricData, OrbRing) {
    let td = weighted(1, 1);
    let ring = OrbRing::new(&td, &[]).unwrap();
    (td, ring)
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn series(bound: i64) -> impl Strategy<Value = ScalarSeries> {
    prop::collection::vec((0i64..=4, -5i64..=5), 0..5).prop_map(move |ts| {
        let mut s = ScalarSeries::new(q(bound));
        for (e, c) in ts {
            s.add_term(vec![q(e)], q(c));
        }
        s
    })
}

fn mat2() -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(-3i64..=3, 4).prop_map(|x| vec![vec![q(x[0]), q(x[1])], vec![q(x[2]), q(x[3])]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn box_elements_decompose((a, b) in weights()) {
        let td = weighted(a, b);
        let mut seen = 0;
        for (k, el) in td.boxes.iter().enumerate() {
            let mut sum = [Q::zero(), Q::zero()];
            for (i, c) in el.coeffs.iter().enumerate() {
                prop_assert!(!c.is_negative() && *c < Q::one());
                for (s, x) in sum.iter_mut().zip(td.fan.ray(i).iter()) {
                    *s += c * q(*x);
                }
            }
            prop_assert_eq!(sum.to_vec(), vec![q(el.v[0]), q(el.v[1])]);
            prop_assert_eq!(el.coeffs.iter().fold(Q::zero(), |x, y| x + y), el.age.clone());
            let inv = &td.boxes[td.inverse_box(k)];
            let total = &el.age + &inv.age;
            prop_assert!(total.is_integer());
            if k > 0 {
                prop_assert_eq!(total, q(el.cone.len() as i64));
            }
            seen += 1;
        }
        // lattice points of the half-open parallelograms: 1 + (a - 1) + (b - 1)
        prop_assert_eq!(seen as i64, a + b - 1);
    }

    #[test]
    fn kv_reduction_hits_every_sector((a, b) in weights()) {
        let td = weighted(a, b);
        let bound = q(a + b + 1);
        let mut hit = vec![false; td.boxes.len()];
        for v in 0..td.boxes.len() {
            for fd in td.enumerate_kv(v, &bound) {
                prop_assert_eq!(td.reduce(&fd.d).unwrap(), fd.target);
                prop_assert!(fd.grading <= bound);
                hit[fd.target] = true;
            }
        }
        prop_assert!(hit.iter().all(|h| *h));
    }

    #[test]
    fn ring_pairing_is_symmetric_and_nondegenerate((a, b) in weights(), xs in prop::collection::vec(small_q(), 12), ys in prop::collection::vec(small_q(), 12)) {
        let td = weighted(a, b);
        let ring = OrbRing::new(&td, &[]).unwrap();
        let n = ring.dim();
        let x: Vec<Q> = xs.iter().cycle().take(n).cloned().collect();
        let y: Vec<Q> = ys.iter().cycle().take(n).cloned().collect();
        prop_assert_eq!(ring.inv_star(&ring.inv_star(&x)), x.clone());
        prop_assert_eq!(ring.pairing(&x, &y), ring.pairing(&y, &x));
        prop_assert_eq!(linalg::rank(&ring.gram()), n);
    }

    #[test]
    fn i_function_is_homogeneous((a, b) in weights()) {
        let td = weighted(a, b);
        let ring = OrbRing::new(&td, &[]).unwrap();
        let bound = q(3);
        for v in 0..td.boxes.len() {
            let s = build_i(&td, &ring, v, &bound, (-8, 8)).unwrap();
            prop_assert!(check_homogeneity(&td, &ring, &NefPartition::empty(), &s).is_ok());
            let t = build_i_twisted(&td, &ring, &NefPartition::empty(), v, &bound, (-8, 8)).unwrap();
            prop_assert_eq!(s, t);
        }
    }

    #[test]
    fn scalar_series_ring_laws(x in series(4), y in series(4), z in series(4)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        let mut f = ScalarSeries::one(1, q(4));
        for (e, c) in &y.terms {
            if e[0].is_positive() {
                f.add_term(e.clone(), c.clone());
            }
        }
        let inv = f.inverse(1).unwrap();
        prop_assert_eq!(f.mul(&inv), ScalarSeries::one(1, q(4)));
    }

    #[test]
    fn galois_actions_compose((a, b) in weights(), n1 in prop::collection::vec(-3i64..=3, 3), n2 in prop::collection::vec(-3i64..=3, 3)) {
        let td = weighted(a, b);
        let ring = OrbRing::new(&td, &[]).unwrap();
        let sum: Vec<i64> = n1.iter().zip(&n2).map(|(x, y)| x + y).collect();
        let g = GaloisAction::new(&td, &ring, &n1).compose(&GaloisAction::new(&td, &ring, &n2));
        prop_assert_eq!(g, GaloisAction::new(&td, &ring, &sum));
    }

    #[test]
    fn gamma_reflection((a, b) in weights()) {
        let env = GammaEnv::new(&weighted(a, b));
        prop_assert!(env.reflection_residual() < 1e-10);
    }

    #[test]
    fn residue_matches_multinomial((a, b) in weights()) {
        let td = weighted(a, b);
        let alpha = AlphaAssignment::canonical(&td);
        let w = total_w(&build_w(&td, &NefPartition::empty(), &alpha).unwrap());
        let bound = q(a + b + 2);
        for v in 0..td.boxes.len() {
            match (torus_residue_series(&td, &w, &alpha, v, &bound), multinomial_series(&td, v, &bound)) {
                (Ok(r), Ok(m)) => prop_assert_eq!(r.terms, m.terms),
                (Err(Error::Domain(_)), Err(Error::Domain(_))) => {}
                (r, m) => prop_assert!(false, "v = {}: {:?} / {:?}", v, r.err(), m.err()),
            }
        }
    }

    #[test]
    fn critical_values_are_critical((a, b) in weights(), lq in -6.0f64..-1.0) {
        let td = weighted(a, b);
        let alpha = AlphaAssignment::canonical(&td);
        let w = total_w(&build_w(&td, &NefPartition::empty(), &alpha).unwrap());
        let cv = critical_values(&w).unwrap();
        prop_assert_eq!(cv.n, a + b + 1);
        let mut k = Q::one();
        for _ in 0..a { k /= q(a); }
        for _ in 0..b { k /= q(b); }
        prop_assert_eq!(cv.k.clone(), k);
        let ell = vec![C::new(lq, 0.0); cv.q_exponent.len()];
        for val in cv.eval(&ell) {
            // w_i = (val / N) λ_i with λ = (a, b, 1) along the terms t_1, t_2, q t^{-(a,b)}
            let c = val / cv.n as f64;
            let mut t = [C::zero(), C::zero()];
            for term in &w.terms {
                let weight = to_f(&term.coeff) * term.q.iter().zip(&ell).map(|(g, l)| (l * to_f(g)).exp()).product::<C>();
                match term.t.as_slice() {
                    [1, 0] => t[0] = c * a as f64 / weight,
                    [0, 1] => t[1] = c * b as f64 / weight,
                    _ => {}
                }
            }
            let scale = val.norm().max(1.0);
            prop_assert!((w.eval(&t, &ell) - val).norm() < 1e-9 * scale);
            prop_assert!(log_gradient(&w, &t, &ell).iter().all(|g| g.norm() < 1e-9 * scale));
        }
    }

    #[test]
    fn psi_pairing_is_euler_characteristic(c1 in -2i64..=2, k1 in -3i64..=3, c2 in -2i64..=2, k2 in -3i64..=3) {
        let (td, ring) = p2();
        let e1 = o(&td, k1).add(&KClass { terms: vec![(c1, vec![0, 0, k2])] });
        let e2 = o(&td, k2).add(&KClass { terms: vec![(c2, vec![k1, 0, 0])] });
        let chi = euler_chi(&td, &ring, &e1, &e2).unwrap();
        let z = psi_pairing(&td, &ring, &e1, &e2);
        let scale = to_f(&chi).abs().max(1.0);
        prop_assert!((z - C::new(to_f(&chi), 0.0)).norm() < 1e-8 * scale, "{} vs {}", z, chi);
    }

    #[test]
    fn chern_character_is_multiplicative(n1 in prop::collection::vec(-3i64..=3, 3), n2 in prop::collection::vec(-3i64..=3, 3)) {
        let (_, ring) = p2();
        let (l1, l2) = (KClass::line(n1), KClass::line(n2));
        let lhs = ch(&ring, &l1.tensor(&l2));
        let rhs = ring.cup(&ch(&ring, &l1), &ch(&ring, &l2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn birkhoff_factorization_remultiplies(m0 in mat2(), raw in prop::collection::vec((1i64..=3, -2i32..=2, mat2()), 1..6)) {
        prop_assume!(!linalg::det(&m0).is_zero());
        let mut terms: BTreeMap<Vec<Q>, BTreeMap<i32, Vec<Vec<Q>>>> = BTreeMap::new();
        terms.insert(vec![q(0)], BTreeMap::from([(0, m0)]));
        for (e, p, mat) in raw {
            if mat.iter().flatten().all(Zero::is_zero) {
                continue;
            }
            let entry = terms.entry(vec![q(e)]).or_default();
            let cur = entry.entry(p).or_insert_with(|| linalg::zeros(2, 2));
            for (r, s) in cur.iter_mut().zip(&mat) {
                for (x, y) in r.iter_mut().zip(s) {
                    *x += y;
                }
            }
        }
        for zm in terms.values_mut() {
            zm.retain(|_, m| !m.iter().flatten().all(Zero::is_zero));
        }
        terms.retain(|_, zm| !zm.is_empty());
        prop_assume!(terms.contains_key(&vec![q(0)]));
        let m = LoopMatrix { dim: 2, bound: q(3), terms };
        let f = factorize(&m).unwrap();
        prop_assert!(f.a.mul(&f.u).sub(&m).is_zero());
        for (e, zm) in &f.a.terms {
            let constant = e.iter().all(Zero::is_zero);
            prop_assert!(zm.keys().all(|p| *p < 0 || (constant && *p == 0)));
        }
        prop_assert!(f.u.terms.values().all(|zm| zm.keys().all(|p| *p >= 0)));
    }

    #[test]
    fn scenarios_round_trip_and_report_deterministically((a, b) in weights(), bound in 1i64..=3) {
        let text = format!(
            "name = \"w{a}{b}\"\nrank = 2\nrays = [[1, 0], [0, 1], [-{a}, -{b}]]\ncones = [[1, 2], [2, 3], [1, 3]]\n\
             [truncation]\nq_bound = \"{bound}\"\nresidue_order = \"{bound}\"\ngkz_order = 2\n"
        );
        let s = Scenario::from_toml(&text).unwrap();
        prop_assert_eq!(Scenario::from_toml(&s.to_toml().unwrap()).unwrap(), s.clone());
        let r1 = run(Command::Box, &s, &Overrides::default()).unwrap();
        let r2 = run(Command::Box, &s, &Overrides::default()).unwrap();
        prop_assert!(r1.passed());
        prop_assert_eq!(r1.to_json(false), r2.to_json(false));
    }
}

fn to_f(x: &Q) -> f64 {
    toricmirror::rational::to_f64(x)
}
