use num_traits::{Signed, Zero};

use super::ToricData;
use crate::linalg;
use crate::rational::{floor_i64, frac, q, Q};

/// An element `d ∈ K_v` together with its reduction and Mori class.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalDegree {
    /// `d ∈ ℚ^m × ℤ^s`.
    pub d: Vec<Q>,
    /// Index of `{-d}` in the Box list.
    pub target: usize,
    /// `d + v ∈ L_ℚ`.
    pub class: Vec<Q>,
    /// `⟨p_a, d + v⟩`.
    pub q_exp: Vec<Q>,
    pub grading: Q,
}

pub(super) fn enumerate_kv(td: &ToricData, v: usize, bound: &Q) -> Vec<FractionalDegree> {
    let fan = &td.fan;
    let lat = &td.lattice;
    let (n, k) = (fan.rank(), fan.m() + fan.s());
    let beta: Vec<Vec<i64>> = (0..n).map(|r| (0..k).map(|i| fan.ray(i)[r]).collect()).collect();
    let herm = linalg::column_hermite(&beta);
    let cv = td.box_coeffs_padded(v);
    let mut out = Vec::new();
    for (t, target) in td.boxes.iter().enumerate() {
        let rhs: Vec<i64> = (0..n).map(|r| target.v[r] - td.boxes[v].v[r]).collect();
        let x = herm.solve_integer(&rhs).expect("fan vectors generate N");
        let ct = td.box_coeffs_padded(t);
        let y0: Vec<Q> = (0..k).map(|i| q(x[i]) - &ct[i] + &cv[i]).collect();
        let e0 = lat.q_exponents(&y0);
        let base: Vec<Q> = e0.iter().map(frac).collect();
        let total_base = base.iter().fold(Q::zero(), |a, b| a + b);
        if total_base > *bound {
            continue;
        }
        let budget = floor_i64(&(bound - &total_base));
        for steps in compositions(base.len(), budget) {
            let e: Vec<Q> = base.iter().zip(&steps).map(|(b, s)| b + q(*s)).collect();
            let y = lat.ambient_from_q(&e);
            if !lat.in_extended_mori(&y) {
                continue;
            }
            let d: Vec<Q> = y.iter().zip(&cv).map(|(a, b)| a - b).collect();
            let grading = e.iter().fold(Q::zero(), |a, b| a + b);
            out.push(FractionalDegree { d, target: t, class: y, q_exp: e, grading });
        }
    }
    out.sort_by(|a, b| a.grading.cmp(&b.grading).then_with(|| a.q_exp.cmp(&b.q_exp)));
    debug_assert!(out.iter().all(|f| f.q_exp.iter().all(|x| !x.is_negative())));
    out
}

/// Nonnegative integer vectors of length `len` with sum at most `budget`.
fn compositions(len: usize, budget: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                let used: i64 = p.iter().sum();
                (0..=budget - used).map(move |c| {
                    let mut p = p.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}
