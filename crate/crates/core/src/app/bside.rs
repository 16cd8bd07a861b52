use serde_json::json;

use super::Output;
use crate::bside::{
    build_gkz, build_w, critical_values, multinomial_series, oscillatory_integral, period_family, total_w,
    torus_residue_series, LaurentPoly, Quadrature,
};
use crate::error::{Error, Result};
use crate::field::C;
use crate::gamma::{a_period, j_function, KClass, Twist};
use crate::rational::fmt_q;
use crate::report::{fmt_c, fmt_scalar_series, Report};
use crate::scenario::Model;
use crate::series::{build_i, grading};

fn superpotential(model: &Model) -> Result<LaurentPoly> {
    Ok(total_w(&build_w(&model.td, &model.partition, &model.alpha)?))
}

/// `∫ e^{-W/z} Π dt/t` over the positive real torus at `q_a = qv` for every `a`.
pub(super) fn quadrature_period(model: &Model, qv: f64) -> Result<f64> {
    let w = superpotential(model)?;
    let quad = Quadrature { max_levels: model.scenario.numeric.quadrature_levels, ..Quadrature::default() };
    let ell = vec![qv.ln(); model.td.lattice.rank()];
    oscillatory_integral(&w, None, &ell, model.scenario.numeric.z, &quad)
}

pub(super) fn opt_identity(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let td = &model.td;
    let w = superpotential(model)?;
    out.line(format!("W = {w}"));
    out.put("W", json!(w.to_string()));
    let order = &model.residue_order;
    let mut series = serde_json::Map::new();
    for v in 0..td.boxes.len() {
        let res = match torus_residue_series(td, &w, &model.alpha, v, order) {
            Ok(r) => r,
            Err(Error::Domain(msg)) => {
                out.line(format!("v = {:?}: skipped ({msg})", td.boxes[v].v.0));
                continue;
            }
            Err(e) => return Err(e),
        };
        let oracle = multinomial_series(td, v, order)?;
        let text = fmt_scalar_series(&res);
        out.line(format!("v = {:?}: {text}", td.boxes[v].v.0));
        report.oracle(format!("residue/{v}"), &text, fmt_scalar_series(&oracle));
        series.insert(format!("{:?}", td.boxes[v].v.0), json!(text));
        if v == 0 {
            if let Some(want) = &model.scenario.expect.residue {
                let mut t: Vec<_> = res.terms.iter().collect();
                t.sort_by(|a, b| grading(a.0).cmp(&grading(b.0)).then_with(|| a.0.cmp(b.0)));
                let got: Vec<String> = t.iter().take(want.len()).map(|(_, c)| fmt_q(c)).collect();
                report.oracle("coefficients", got.join(", "), want.join(", "));
            }
        }
    }
    out.put("residues", serde_json::Value::Object(series));
    match critical_values(&w) {
        Ok(cv) => {
            out.line(format!("critical values: {}", cv.describe()));
            out.put("critical", json!(cv));
            if let Some(want) = &model.scenario.expect.critical {
                let mut got = vec![cv.n.to_string(), fmt_q(&cv.k)];
                got.extend(cv.q_exponent.iter().map(fmt_q));
                report.exact("critical-values", got.join(", "), want.join(", "));
            }
        }
        Err(Error::Unsupported(msg)) => out.line(format!("critical values: {msg}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

pub(super) fn gkz_check(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let sc = &model.scenario.truncation;
    let sys = build_gkz(&model.td, sc.gkz_height)?;
    let fam = period_family(&sys, sc.gkz_order);
    let rep = sys.check(&fam, &sys.default_nus());
    out.line(format!(
        "{} generators (height ≤ {}), {} operators, volume {}, {} failures",
        rep.generators, sys.max_height, rep.operators, rep.volume, rep.failures
    ));
    for c in rep.checks.iter().filter(|c| c.nonzero_terms > 0).take(10) {
        out.line(format!("  fails: {:?}", c.operator));
    }
    report.exact("failures", rep.failures, 0);
    report.exact("nonempty", rep.operators > 0, true);
    out.put("generators", json!(rep.generators));
    out.put("operators", json!(rep.operators));
    out.put("volume", json!(rep.volume));
    out.put("failures", json!(rep.failures));
    Ok(())
}

pub(super) fn osc_check(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    if model.partition.c() > 0 || td.fan.rank() > 2 {
        out.line("quadrature needs c = 0 and a torus of dimension ≤ 2; nothing to check");
        return Ok(());
    }
    let j = j_function(td, ring, &build_i(td, ring, 0, &model.q_bound, model.z_window)?)?;
    let o = KClass::structure_sheaf(td.fan.m());
    let z = C::new(model.scenario.numeric.z, 0.0);
    let twist = Twist::none(td, ring);
    let mut rows = Vec::new();
    for &qv in &model.scenario.numeric.q_values {
        let num = quadrature_period(model, qv)?;
        let ell = vec![C::new(qv.ln(), 0.0); td.lattice.rank()];
        let ser = a_period(td, ring, &j, &o, &ell, z, &twist)?;
        out.line(format!("  q = {qv:<8} quadrature {num:.12e}  series {}", fmt_c(ser)));
        report.relative(format!("q={qv}"), ser, C::new(num, 0.0), model.scenario.numeric.osc_tol);
        rows.push(json!({ "q": qv, "quadrature": num, "series": fmt_c(ser) }));
    }
    out.put("values", json!(rows));
    Ok(())
}
