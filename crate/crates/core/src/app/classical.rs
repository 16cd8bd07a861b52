use num_traits::{One, Zero};
use serde_json::json;

use super::{rows, Output};
use crate::birkhoff::{flatness_residual, fundamental_solution, monomial_identity, LoopMatrix};
use crate::bside::multinomial_series;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, Q};
use crate::report::{fmt_class, fmt_exponent, fmt_scalar_series, Report};
use crate::ring::OrbRing;
use crate::scenario::Model;
use crate::series::{build_i_twisted, check_homogeneity, coordinates, extract_mirror_map, NefPartition, QSeries, ZPoly};

fn fmt_zpoly(ring: &OrbRing, p: &ZPoly) -> String {
    p.coeffs
        .iter()
        .rev()
        .map(|(k, c)| match k {
            0 => format!("({})", fmt_class(ring, c)),
            _ => format!("({})z^{k}", fmt_class(ring, c)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn residual_text(m: &LoopMatrix) -> String {
    if m.is_zero() {
        "0".into()
    } else {
        format!("{:e}", m.max_entry())
    }
}

pub(super) fn boxes(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let td = &model.td;
    let mut entries = Vec::new();
    out.line("  v          cone      age");
    for (k, b) in td.boxes.iter().enumerate() {
        let cone: Vec<usize> = b.cone.iter().map(|i| i + 1).collect();
        out.line(format!("  {:<10} {:<9} {}", format!("{:?}", b.v.0), format!("{cone:?}"), fmt_q(&b.age)));
        let mut sum = vec![Q::zero(); td.fan.rank()];
        for (i, c) in b.coeffs.iter().enumerate() {
            for (s, x) in sum.iter_mut().zip(td.fan.ray(i).iter()) {
                *s += c * q(*x);
            }
        }
        let v: Vec<Q> = b.v.iter().map(|x| q(*x)).collect();
        report.exact(format!("decomposition/{k}"), fmt_vec(&sum), fmt_vec(&v));
        if k > 0 {
            let inv = &td.boxes[td.inverse_box(k)];
            report.oracle(format!("age-sum/{k}"), fmt_q(&(&b.age + &inv.age)), b.cone.len());
        }
        entries.push(json!({ "v": b.v.0, "cone": cone, "age": fmt_q(&b.age) }));
    }
    report.exact("sectors", model.ring.sectors.len(), td.boxes.len());
    out.put("entries", json!(entries));
    Ok(())
}

fn fmt_vec(v: &[Q]) -> String {
    format!("({})", v.iter().map(fmt_q).collect::<Vec<_>>().join(","))
}

fn dump(ring: &OrbRing, s: &QSeries, title: &str, out: &mut Output) -> serde_json::Value {
    out.line(format!("{title}: {} terms, q-degree ≤ {}", s.terms.len(), fmt_q(&s.bound)));
    let mut terms = Vec::new();
    for (e, p) in s.sorted_terms() {
        let text = fmt_zpoly(ring, p);
        out.line(format!("  {}: {text}", fmt_exponent(e)));
        terms.push(json!({ "q": rows(&e.iter().map(fmt_q).collect::<Vec<_>>()), "coefficient": text }));
    }
    json!(terms)
}

pub(super) fn ifun(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let mut all = serde_json::Map::new();
    let mut partitions = vec![("I", NefPartition::empty())];
    if model.partition.c() > 0 {
        partitions.push(("I_V", model.partition.clone()));
    }
    for (name, part) in &partitions {
        for v in 0..td.boxes.len() {
            let s = match build_i_twisted(td, ring, part, v, &model.q_bound, model.z_window) {
                Ok(s) => s,
                Err(Error::NefPartition(msg)) => {
                    out.line(format!("{name}^{v}: not defined ({msg})"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let key = format!("{name}^{v}");
            let ok = check_homogeneity(td, ring, part, &s);
            report.exact(format!("homogeneity/{key}"), ok.as_ref().map_or_else(|e| e.to_string(), |_| "ok".into()), "ok");
            if v == 0 {
                let lead = s.coeff(&vec![Q::zero(); td.lattice.rank()]).and_then(|p| p.coeff(0).cloned());
                let lead = lead.map_or("0".into(), |c| fmt_class(ring, &c));
                report.exact(format!("leading-term/{key}"), lead, "1");
            }
            all.insert(key.clone(), dump(ring, &s, &key, out));
        }
    }
    out.put("series", serde_json::Value::Object(all));
    Ok(())
}

pub(super) fn mirror_map(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let s = build_i_twisted(td, ring, &model.partition, 0, &model.q_bound, model.z_window)?;
    let mm = match extract_mirror_map(td, ring, &s) {
        Ok(mm) => mm,
        Err(Error::MalformedSeries(msg)) => {
            out.line(format!("no mirror map: {msg}"));
            out.put("mirror_map", json!(null));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let f_terms: Vec<(String, String)> = mm.f.terms.iter().map(|(e, c)| (fmt_exponent(e), fmt_q(c))).collect();
    out.line(format!("F = {}", f_terms.iter().map(|(e, c)| format!("{c}·{e}")).collect::<Vec<_>>().join(" + ")));
    let mut corr = Vec::new();
    for (e, x) in &mm.correction {
        let text = match coordinates(&mm.log_part, x) {
            Some(c) => format!("({})", c.iter().map(fmt_q).collect::<Vec<_>>().join(", ")),
            None => fmt_class(ring, x),
        };
        out.line(format!("  ς correction at {}: {text}", fmt_exponent(e)));
        corr.push(json!({ "q": fmt_exponent(e), "coordinates": text }));
    }
    let g: Vec<_> = mm.g.iter().map(|(e, x)| json!({ "q": fmt_exponent(e), "G": fmt_class(ring, x) })).collect();
    out.put("F", json!(f_terms));
    out.put("G", json!(g));
    out.put("correction", json!(corr));
    let expect = &model.scenario.expect;
    if let Some(want) = &expect.mirror_map_q1 {
        let mut e1 = vec![Q::zero(); td.lattice.rank()];
        e1[0] = Q::one();
        let got = mm
            .correction
            .get(&e1)
            .and_then(|x| coordinates(&mm.log_part, x))
            .map_or_else(|| "0".to_string(), |c| fmt_q(&c[0]));
        report.oracle("q1-coefficient", got, want);
    }
    if expect.mirror_map_trivial == Some(true) {
        let one = mm.f.terms.len() == 1 && mm.f.terms.values().all(One::is_one);
        report.exact("trivial-correction", mm.correction.len(), 0);
        report.exact("F-is-one", one, true);
    }
    // a single part containing every ray: F is the constant-term period
    let m = td.fan.m();
    if model.partition.c() == 1 && model.partition.parts[0].len() == m && td.fan.s() == 0 {
        let oracle = multinomial_series(td, 0, &model.q_bound)?;
        report.oracle("F-multinomial", fmt_scalar_series(&mm.f), fmt_scalar_series(&oracle));
    }
    Ok(())
}

pub(super) fn birkhoff(model: &Model, report: &mut Report, out: &mut Output) -> Result<()> {
    let (td, ring) = (&model.td, &model.ring);
    let fs = fundamental_solution(td, ring, &model.partition, &model.q_bound)?;
    let dim = fs.m.dim;
    report.exact("remultiply", residual_text(&fs.remultiply_residual()), "0");
    if model.partition.c() == 0 {
        report.exact("unitarity", residual_text(&fs.unitarity_residual(&ring.gram())), "0");
    }
    let mut conns = Vec::new();
    for a in 0..td.lattice.rank() {
        match fs.connection(a) {
            Ok(c) => {
                report.exact(format!("z-free/{a}"), "0", "0");
                conns.push(c);
            }
            Err(Error::Gauge(stray)) => {
                report.exact(format!("z-free/{a}"), format!("{stray:e}"), "0");
            }
            Err(e) => return Err(e),
        }
    }
    if conns.len() == td.lattice.rank() && conns.len() > 1 {
        report.exact("flatness", residual_text(&flatness_residual(&conns)), "0");
    }
    let mut products = serde_json::Map::new();
    for (a, c) in conns.iter().enumerate() {
        out.line(format!("quantum product by p̄_{a}:"));
        let mut terms = Vec::new();
        for (e, zm) in &c.terms {
            if let Some(mat) = zm.get(&0) {
                let text = mat.iter().map(|r| format!("[{}]", r.iter().map(fmt_q).collect::<Vec<_>>().join(" "))).collect::<Vec<_>>().join(" ");
                out.line(format!("  {}: {text}", fmt_exponent(e)));
                terms.push(json!({ "q": fmt_exponent(e), "matrix": text }));
            }
        }
        products.insert(a.to_string(), json!(terms));
    }
    out.put("quantum_products", serde_json::Value::Object(products));
    let mut ups = Vec::new();
    for (e, zm) in &fs.upsilon().terms {
        for (p, mat) in zm {
            let col: Vec<Q> = mat.iter().map(|r| r[0].clone()).collect();
            if col.iter().all(Zero::is_zero) {
                continue;
            }
            ups.push(json!({ "q": fmt_exponent(e), "z": p, "value": fmt_class(ring, &col) }));
        }
    }
    out.line(format!("Υ first column: {} nonzero terms", ups.len()));
    out.put("upsilon_first_column", json!(ups));
    if let Some(n) = model.scenario.expect.quantum_power {
        if let Some(c) = conns.first() {
            let mut pow = c.clone();
            for _ in 1..n {
                pow = pow.mul(c);
            }
            let mut e1 = vec![Q::zero(); td.lattice.rank()];
            e1[0] = Q::one();
            let target = monomial_identity(dim, e1, model.q_bound.clone());
            report.oracle(format!("power-{n}"), residual_text(&pow.sub(&target)), "0");
        }
    }
    Ok(())
}
