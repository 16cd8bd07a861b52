use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use super::laurent::{AlphaAssignment, LaurentPoly};
use crate::error::{Error, Result};
use crate::rational::{factorial, floor_i64, frac, q, to_i64, Q};
use crate::series::{grading, Exponent, ScalarSeries};
use crate::toric::{facets, ToricData};

/// Upper bound for `Σ d_j` over terms of total q-degree `≤ bound`.
fn max_steps(td: &ToricData, v: usize, bound: &Q) -> i64 {
    let rho = td
        .lattice
        .dual_basis
        .iter()
        .map(|l| l.iter().fold(Q::zero(), |a, x| a + x))
        .max()
        .unwrap_or_else(Q::zero);
    if !rho.is_positive() {
        return 0;
    }
    floor_i64(&(bound * rho - &td.boxes[v].age)).max(0)
}

fn integer_age(td: &ToricData, v: usize) -> Result<u64> {
    to_i64(&td.boxes[v].age)
        .and_then(|a| u64::try_from(a).ok())
        .ok_or_else(|| Error::Domain(format!("Box element {:?} has non-integral age", td.boxes[v].v.0)))
}

/// `Σ_{d ≥ 0, Σ d_j b_j + v = 0} (Σ d_j + age(v))! / Π d_j! · q^{d+v}`.
pub fn multinomial_series(td: &ToricData, v: usize, bound: &Q) -> Result<ScalarSeries> {
    let age = integer_age(td, v)?;
    let c = td.box_coeffs_padded(v);
    let lat = &td.lattice;
    let base: Vec<Q> = lat.nef_basis.iter().map(|p| frac(&p.iter().zip(&c).fold(Q::zero(), |a, (x, y)| a + q(*x) * y))).collect();
    let mut out = ScalarSeries::new(bound.clone());
    let mut stack = vec![base.clone()];
    while let Some(e) = stack.pop() {
        let y = lat.ambient_from_q(&e);
        let d: Vec<Q> = y.iter().zip(&c).map(|(a, b)| a - b).collect();
        if d.iter().all(|x| x.is_integer() && !x.is_negative()) {
            let di: Vec<u64> = d.iter().map(|x| to_i64(x).unwrap() as u64).collect();
            let total: u64 = di.iter().sum::<u64>() + age;
            let coeff = di.iter().fold(Q::from_integer(factorial(total)), |acc, k| acc / Q::from_integer(factorial(*k)));
            out.add_term(e.clone(), coeff);
        }
        for a in 0..e.len() {
            let mut next = e.clone();
            next[a] += Q::one();
            // visit each grid point once: only bump coordinates at or after the last bumped one
            if e[a + 1..].iter().zip(&base[a + 1..]).any(|(x, b)| x != b) {
                continue;
            }
            if grading(&next) <= *bound {
                stack.push(next);
            }
        }
    }
    Ok(out)
}

/// Normalized compact-cycle residue
/// `-(2πi)^{-n} ∮ (-1)^k k! α^v t^v / (W - 1)^{k+1} Π dt_i/t_i` with `k = age(v)`,
/// computed as the constant term of `t^v Σ_M C(M+k, k) W^M`.
pub fn torus_residue_series(
    td: &ToricData,
    w: &LaurentPoly,
    alpha: &AlphaAssignment,
    v: usize,
    bound: &Q,
) -> Result<ScalarSeries> {
    let k = integer_age(td, v)?;
    let n = td.fan.rank();
    let target: Vec<i64> = td.boxes[v].v.iter().map(|x| -x).collect();
    let c = td.box_coeffs_padded(v);
    let r = td.lattice.rank();
    let shift: Exponent = (0..r)
        .map(|a| c.iter().zip(&alpha.exponents).fold(Q::zero(), |acc, (ci, g)| acc + ci * &g[a]))
        .collect();
    let points: Vec<Vec<i64>> = w.terms.iter().map(|t| t.t.clone()).collect();
    let fs = facets(&points)?;
    let steps = max_steps(td, v, bound);
    // with nonnegative term gradings the running grading only grows
    let monotone = w.terms.iter().all(|t| !grading(&t.q).is_negative());
    let cap = bound - grading(&shift);
    let reachable = |u: &[i64], remaining: i64| {
        fs.iter().all(|f| {
            let x: i64 = f.normal.iter().zip(target.iter().zip(u)).map(|(a, (t, x))| a * (t - x)).sum();
            x <= remaining * f.offset
        })
    };
    let mut out = ScalarSeries::new(bound.clone());
    let mut layer: HashMap<Vec<i64>, BTreeMap<Exponent, Q>> = HashMap::new();
    layer.insert(vec![0; n], BTreeMap::from([(vec![Q::zero(); r], Q::one())]));
    for m in 0..=steps {
        if let Some(coeffs) = layer.get(&target) {
            let scale = Q::from_integer(factorial(m as u64 + k)) / Q::from_integer(factorial(m as u64));
            for (e, x) in coeffs {
                let e: Exponent = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                if grading(&e) <= *bound {
                    out.add_term(e, x * &scale);
                }
            }
        }
        if m == steps {
            break;
        }
        let mut next: HashMap<Vec<i64>, BTreeMap<Exponent, Q>> = HashMap::new();
        for (u, coeffs) in &layer {
            for term in &w.terms {
                let u2: Vec<i64> = u.iter().zip(&term.t).map(|(a, b)| a + b).collect();
                if !reachable(&u2, steps - m - 1) {
                    continue;
                }
                let slot = next.entry(u2).or_default();
                for (e, x) in coeffs {
                    let e2: Exponent = e.iter().zip(&term.q).map(|(a, b)| a + b).collect();
                    if monotone && grading(&e2) > cap {
                        continue;
                    }
                    *slot.entry(e2).or_insert_with(Q::zero) += x * &term.coeff;
                }
            }
        }
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bside::laurent::{build_w, total_w};
    use crate::series::NefPartition;
    use crate::testutil::{p2, p4, wp112};

    fn residue(td: &ToricData, v: usize, bound: i64) -> ScalarSeries {
        let alpha = AlphaAssignment::canonical(td);
        let w = total_w(&build_w(td, &NefPartition::empty(), &alpha).unwrap());
        torus_residue_series(td, &w, &alpha, v, &q(bound)).unwrap()
    }

    #[test]
    fn cubic_coefficients() {
        let s = residue(&p2(), 0, 4);
        let want = [1, 6, 90, 1680, 34650];
        for (d, w) in want.iter().enumerate() {
            assert_eq!(s.coeff(&[q(d as i64)]), q(*w));
        }
        assert_eq!(s.terms.len(), 5);
        assert_eq!(residue(&p2(), 0, 0).terms.len(), 1);
    }

    #[test]
    fn quintic_coefficients() {
        let s = residue(&p4(), 0, 2);
        assert_eq!(s.coeff(&[q(1)]), q(120));
        assert_eq!(s.coeff(&[q(2)]), q(113400));
    }

    #[test]
    fn matches_multinomial_on_orbifold() {
        let td = wp112();
        for v in 0..td.boxes.len() {
            let a = residue(&td, v, 4);
            let b = multinomial_series(&td, v, &q(4)).unwrap();
            assert_eq!(a, b, "v = {v}");
            assert!(!a.terms.is_empty());
        }
    }

    #[test]
    fn twisted_leading_term() {
        // v = (0,-1) = (b_1 + b_3)/2; the smallest d is e_2, giving (1 + 1)!/1! = 2
        let td = wp112();
        let v = td.box_index(&[0, -1]).unwrap();
        let s = multinomial_series(&td, v, &q(1)).unwrap();
        let mut y = td.box_coeffs_padded(v);
        y[1] += q(1);
        let lead = td.lattice.q_exponents(&y);
        assert_eq!(s.coeff(&lead), q(2));
        assert!(s.terms.keys().all(|e| grading(e) >= grading(&lead)));
    }
}
