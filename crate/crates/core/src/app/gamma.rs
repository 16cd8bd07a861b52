use std::f64::consts::PI;

use serde_json::json;

use super::{bside::quadrature_period, Output};
use crate::error::Result;
use crate::field::C;
use crate::rational::{fmt_q, parse_q, to_f64, Q};
use crate::report::{fmt_c, Report};
use crate::scenario::Model;
use crate::gamma::{
    a_period, euler_chi, euler_chi_complete_intersection, gamma_todd_residual, j_function, max_relative,
    monodromy_residual, psi_pairing, GaloisAction, GammaEnv, Twist,
};
use crate::series::{build_i_twisted, NefPartition, QSeries};

/// `J` for `X`, or `I_V` with the complete-intersection twist.
fn period_series(model: &Model) -> Result<(QSeries, Twist)> {
    let (td, ring) = (&model.td, &model.ring);
    if model.partition.c() == 0 {
        let i0 = build_i_twisted(td, ring, &NefPartition::empty(), 0, &model.q_bound, model.z_window)?;
        Ok((j_function(td, ring, &i0)?, Twist::none(td, ring)))
    } else {
        let iv = build_i_twisted(td, ring, &model.partition, 0, &model.q_bound, model.z_window)?;
        Ok((iv, Twist::for_partition(td, ring, &model.partition)))
    }
}

fn log_point(model: &Model, qv: f64) -> Vec<C> {
    vec![C::new(qv.ln(), 0.0); model.td.lattice.rank()]
}

pub(super) fn central_charge(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let (series, twist) = period_series(model)?;
    let z = C::new(model.scenario.numeric.z, 0.0);
    let c = model.partition.c();
    let dim = ring.n() - c;
    let norm = C::new(0.0, 2.0 * PI).powi(dim as i32);
    if c == 0 {
        out.line(format!("Z(E) = (2πi)^-{dim} Π(1, E), z = {}", z.re));
    } else {
        out.line(format!("Z(E) = (2πi)^-{dim} Π̂(1, E) at s = 1, z = {}", z.re));
    }
    let mut rows = Vec::new();
    for &qv in &model.scenario.numeric.q_values {
        let ell = log_point(model, qv);
        for (name, e) in &model.bundles {
            let pi = a_period(td, ring, &series, e, &ell, z, &twist)?;
            let zc = pi / norm;
            out.line(format!("  q = {qv:<8} {name:<8} {}", fmt_c(zc)));
            rows.push(json!({ "q": qv, "bundle": name, "period": fmt_c(pi), "Z": fmt_c(zc) }));
        }
        if c == 0 && td.fan.rank() <= 2 {
            let num = quadrature_period(model, qv)?;
            let o = crate::gamma::KClass::structure_sheaf(td.fan.m());
            let pi = a_period(td, ring, &series, &o, &ell, z, &twist)?;
            report.relative(format!("quadrature/q={qv}"), pi, C::new(num, 0.0), model.scenario.numeric.osc_tol);
        }
    }
    out.put("values", json!(rows));
    Ok(())
}

fn expected_matrix(model: &Model) -> Result<Option<Vec<Vec<Q>>>> {
    match &model.scenario.expect.euler {
        None => Ok(None),
        Some(rows) => Ok(Some(rows.iter().map(|r| r.iter().map(|x| parse_q(x)).collect::<Result<_>>()).collect::<Result<_>>()?)),
    }
}

pub(super) fn euler_pairing(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let tol = model.scenario.numeric.tol;
    let expected = expected_matrix(model)?;
    let b = &model.bundles;
    let manifold = td.boxes.len() == 1;
    let c = model.partition.c();
    let mut table = Vec::new();
    for (i, (n1, e1)) in b.iter().enumerate() {
        let mut row = Vec::new();
        for (j, (n2, e2)) in b.iter().enumerate() {
            let id = format!("{n1},{n2}");
            let want = expected.as_ref().and_then(|m| m.get(i)).and_then(|r| r.get(j));
            if c > 0 {
                let chi = euler_chi_complete_intersection(td, ring, &model.partition.parts, e1, e2)?;
                if let Some(w) = want {
                    report.exact(format!("chi_Y/{id}"), fmt_q(&chi), fmt_q(w));
                }
                let chi_t = euler_chi_complete_intersection(td, ring, &model.partition.parts, e2, e1)?;
                if model.partition.rho_hat_y(td).iter().all(|x| *x == Q::from_integer(0.into())) {
                    let sign = if (ring.n() - c) % 2 == 0 { chi.clone() } else { -chi.clone() };
                    report.exact(format!("serre/{id}"), fmt_q(&chi_t), fmt_q(&sign));
                }
                row.push(fmt_q(&chi));
                continue;
            }
            let psi = psi_pairing(td, ring, e1, e2);
            if manifold {
                let chi = euler_chi(td, ring, e1, e2)?;
                report.residual(format!("psi-vs-chi/{id}"), (psi - C::new(to_f64(&chi), 0.0)).norm(), tol);
                if let Some(w) = want {
                    report.oracle(format!("chi/{id}"), fmt_q(&chi), fmt_q(w));
                }
                row.push(fmt_q(&chi));
            } else {
                if let Some(w) = want {
                    report.residual(format!("psi/{id}"), (psi - C::new(to_f64(w), 0.0)).norm(), tol);
                }
                row.push(fmt_c(psi));
            }
        }
        out.line(format!("  {:<8} {}", n1, row.join("  ")));
        table.push(row);
    }
    out.put("bundles", json!(b.iter().map(|(n, _)| n).collect::<Vec<_>>()));
    out.put("pairing", json!(table));
    Ok(())
}

pub(super) fn gamma_identity(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let tol = model.scenario.numeric.tol;
    let res = gamma_todd_residual(td, ring);
    let worst = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
    out.line(format!("max |Γ̂* Γ̂ e^(πi c1) - (2πi)^(deg/2) Td| = {worst:.3e}"));
    report.residual("gamma-todd", worst, tol);
    let env = GammaEnv::new(td);
    let refl = env.reflection_residual();
    out.line(format!("reflection Γ(x)Γ(1-x) residual over sector ages = {refl:.3e}"));
    report.residual("reflection", refl, tol);
    out.put("gamma_todd", json!(worst));
    out.put("reflection", json!(refl));
    Ok(())
}

pub(super) fn monodromy_check(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let tol = model.scenario.numeric.tol;
    let (series, twist) = period_series(model)?;
    let z = C::new(model.scenario.numeric.z, 0.0);
    let qv = model.scenario.numeric.q_values.first().copied().unwrap_or(0.01);
    // off the real axis so that no branch is on a cut
    let ell: Vec<C> = log_point(model, qv).iter().map(|l| l + C::new(0.0, 0.3)).collect();
    let mut rows = Vec::new();
    for xi in &model.scenario.monodromy {
        for (name, e) in &model.bundles {
            let res = monodromy_residual(td, ring, &series, e, xi, &ell, z, &twist)?;
            let worst = max_relative(&res);
            out.line(format!("  ξ = {xi:?} {name:<8} {} terms, max relative residual {worst:.3e}", res.len()));
            report.residual(format!("monodromy/{xi:?}/{name}"), worst, tol);
            rows.push(json!({ "xi": xi, "bundle": name, "terms": res.len(), "residual": worst }));
        }
        let g = GaloisAction::new(td, ring, xi);
        let doubled: Vec<i64> = xi.iter().map(|x| 2 * x).collect();
        let lhs = g.compose(&g);
        let rhs = GaloisAction::new(td, ring, &doubled);
        report.exact(format!("galois-compose/{xi:?}"), fmt_galois(&lhs), fmt_galois(&rhs));
    }
    out.put("monodromy", json!(rows));
    Ok(())
}

fn fmt_galois(g: &GaloisAction) -> String {
    let s: Vec<String> = g.shift.iter().map(fmt_q).collect();
    let a: Vec<String> = g.ages.iter().map(fmt_q).collect();
    format!("shift ({}) ages ({})", s.join(","), a.join(","))
}

