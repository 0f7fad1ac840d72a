use std::io::Write;
use std::path::Path;

use flatvol::kappa::{load_chamber_cache, store_chamber_cache};
use flatvol::moduli::{
    glue_volume, mixed_characteristic_number, moduli_dimension, pants_volume_kappa, toric_decomposition, toric_radius, witten_volume,
    ConventionStamp, Decomposition, Marking, Surface, VolumeReport, WittenOptions, CONVERGENCE_WARNING,
};
use flatvol::oracle::{pants_density, product_class_histogram, shape_compare};
use flatvol::rational::fmt_q;
use flatvol::symmetric::ElementarySymmetricPoly;
use flatvol::{CartanVec, Error, Result, RootSystem};
use serde_json::{json, Value};

use crate::input::{echo, group, markings, segment};
use crate::{Command, Method, SeriesArgs};

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Roots { group: g } => roots(&group(&g)?),
        Command::Volume { group: g, markings: m, method, series } => {
            let rs = group(&g)?;
            let pts = markings(&rs, &m, 3)?;
            with_cache(&rs, || volume(&rs, &pts, method, &series))
        }
        Command::Scan { group: g, markings: m, along, steps, method, out, series } => {
            let rs = group(&g)?;
            let pts = markings(&rs, &m, 2)?;
            let line = segment(&rs, &along, steps)?;
            with_cache(&rs, || scan(&rs, &pts, &line, method, &series, out.as_deref()))
        }
        Command::Chern { group: g, markings: m, poly } => {
            let rs = group(&g)?;
            let pts = markings(&rs, &m, 3)?;
            with_cache(&rs, || chern(&rs, &pts, &poly))
        }
        Command::Oracle { group: g, markings: m, samples, seed, bins, out } => {
            let rs = group(&g)?;
            let pts = markings(&rs, &m, 2)?;
            with_cache(&rs, || oracle(&rs, &pts, samples, seed, bins, out.as_deref()))
        }
        Command::Glue { group: g, decomposition, markings: m, nodes } => {
            let rs = group(&g)?;
            let d: Decomposition = decomposition.parse()?;
            let pts = markings(&rs, &m, d.surface().boundary as usize)?;
            with_cache(&rs, || glue(&rs, d, pts, nodes))
        }
    }
}

/// Runs `f` with the κ chamber polynomials loaded from and saved to the
/// cache directory, when one is configured.
fn with_cache(rs: &RootSystem, f: impl FnOnce() -> Result<u8>) -> Result<u8> {
    for m in 1..=2 {
        load_chamber_cache(rs, m)?;
    }
    let out = f();
    for m in 1..=2 {
        store_chamber_cache(rs, m)?;
    }
    out
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn print(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("json")));
}

fn qvec(v: &CartanVec) -> Vec<String> {
    v.0.iter().map(fmt_q).collect()
}

fn roots(rs: &RootSystem) -> Result<u8> {
    print(&json!({
        "group": rs.spec.to_string(),
        "rank": rs.rank(),
        "cartan_matrix": rs.cartan_matrix,
        "simple_roots": rs.simple_roots.iter().map(qvec).collect::<Vec<_>>(),
        "positive_roots": rs.positive_roots.iter().map(qvec).collect::<Vec<_>>(),
        "highest_root": qvec(&rs.highest_root),
        "fundamental_weights": rs.fundamental_weights.iter().map(qvec).collect::<Vec<_>>(),
        "alcove_vertices": rs.alcove().vertices.iter().map(|v| echo(rs, v)).collect::<Vec<_>>(),
        "center_order": rs.center_order,
        "weyl_order": rs.weyl_group().len(),
        "dim_g": rs.dim_g(),
        "vol_t": rs.covolume_t(),
        "vol_t_exact": rs.covolume_t_exact().to_string(),
        "vol_g": rs.volume_g(),
        "vol_g_over_t": rs.volume_g_over_t(),
        "convention": ConventionStamp::default(),
        "coordinates": { "roots": "simple-root basis", "alcove_vertices": "fundamental-weight basis" },
    }));
    Ok(0)
}

fn witten_options(s: &SeriesArgs) -> WittenOptions {
    let mut o = WittenOptions { casimir_cutoff: s.cutoff, ..Default::default() };
    if let Some(e) = &s.eps {
        o.eps_schedule = e.clone();
    }
    if let Some(t) = s.tolerance {
        o.tolerance = t;
    }
    o
}

fn methods(m: Method) -> Vec<Method> {
    match m {
        Method::All => vec![Method::Kappa, Method::Witten, Method::Toric],
        m => vec![m],
    }
}

fn pants_report(rs: &RootSystem, pts: &[CartanVec], m: Method, s: &SeriesArgs) -> Result<VolumeReport> {
    match m {
        Method::Kappa => pants_volume_kappa(rs, &pts[0], &pts[1], &pts[2]),
        Method::Witten => witten_volume(rs, Surface::pants(), &Marking::new(rs, pts.to_vec())?, &witten_options(s)),
        Method::Toric => {
            let r = toric_radius(rs, &pts[0], &pts[1], &pts[2]);
            Ok(toric_decomposition(rs, &pts[0], &pts[1], &pts[2], &r)?.report)
        }
        Method::All => unreachable!("expanded by methods()"),
    }
}

fn method_id(m: Method) -> &'static str {
    match m {
        Method::Kappa => "kappa-sum",
        Method::Witten => "witten-series",
        Method::Toric => "toric-decomposition",
        Method::All => "all",
    }
}

fn converged(reports: &[VolumeReport]) -> bool {
    !reports.iter().any(|r| r.warnings.iter().any(|w| w.starts_with(CONVERGENCE_WARNING)))
}

fn volume(rs: &RootSystem, pts: &[CartanVec], method: Method, s: &SeriesArgs) -> Result<u8> {
    let reports: Vec<VolumeReport> = methods(method).into_iter().map(|m| pants_report(rs, pts, m, s)).collect::<Result<_>>()?;
    let mut deviations = Vec::new();
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            let scale = a.value.abs().max(b.value.abs());
            let rel = if scale == 0.0 { 0.0 } else { (a.value - b.value).abs() / scale };
            deviations.push(json!({ "methods": [a.method, b.method], "relative": rel }));
        }
    }
    let mut out = json!({
        "input": { "group": rs.spec.to_string(), "markings": pts.iter().map(|p| echo(rs, p)).collect::<Vec<_>>() },
        "reports": reports,
    });
    if method == Method::All {
        out["deviations"] = Value::Array(deviations);
    }
    print(&out);
    Ok(if converged(&reports) { 0 } else { 4 })
}

fn scan(rs: &RootSystem, pts: &[CartanVec], line: &[CartanVec], method: Method, s: &SeriesArgs, out: Option<&Path>) -> Result<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["step".to_string()];
    header.extend((1..=rs.rank()).map(|i| format!("mu3_{i}")));
    header.extend(["method", "value", "exact", "status", "parameters", "convention"].map(String::from));
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    let mut reports = Vec::new();
    let convention = serde_json::to_string(&ConventionStamp::default())?;
    for (k, mu3) in line.iter().enumerate() {
        for m in methods(method) {
            let mut row = vec![k.to_string()];
            row.extend(echo(rs, mu3));
            let all = [pts[0].clone(), pts[1].clone(), mu3.clone()];
            match pants_report(rs, &all, m, s) {
                Ok(r) => {
                    row.push(serde_json::to_value(r.method)?.as_str().unwrap_or_default().to_string());
                    row.push(r.value.to_string());
                    row.push(r.exact.clone().unwrap_or_default());
                    row.push(if r.warnings.is_empty() { "ok".into() } else { format!("warning: {}", r.warnings.join("; ")) });
                    row.push(serde_json::to_string(&r.parameters)?);
                    reports.push(r);
                }
                Err(e @ (Error::OnWall(_) | Error::NotRegular(_))) => {
                    row.push(method_id(m).into());
                    row.extend([String::new(), String::new(), format!("error: {e}"), "{}".into()]);
                }
                Err(e) => return Err(e),
            }
            row.push(convention.clone());
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => emit(&String::from_utf8(bytes).expect("utf-8")),
    }
    Ok(if converged(&reports) { 0 } else { 4 })
}

fn chern(rs: &RootSystem, pts: &[CartanVec], poly: &str) -> Result<u8> {
    let k = moduli_dimension(rs, Surface::pants())?;
    let p = ElementarySymmetricPoly::parse(poly, rs.num_positive())?;
    let v = mixed_characteristic_number(rs, &pts[0], &pts[1], &pts[2], &p)?;
    print(&json!({
        "input": { "group": rs.spec.to_string(), "markings": pts.iter().map(|p| echo(rs, p)).collect::<Vec<_>>(), "poly": poly },
        "complex_dimension": k,
        "value": v.to_f64(),
        "exact": v.to_string(),
        "convention": ConventionStamp::default(),
    }));
    Ok(0)
}

fn oracle(rs: &RootSystem, pts: &[CartanVec], samples: u64, seed: u64, bins: usize, out: Option<&Path>) -> Result<u8> {
    let h = product_class_histogram(rs, &pts[0], &pts[1], bins, samples, seed)?;
    let (ks, ks_error) = match pants_density(rs, &pts[0], &pts[1]).and_then(|d| shape_compare(&h, d)) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut sidecar: Value = serde_json::from_str(&h.sidecar_json())?;
    sidecar["ks_vs_kappa"] = json!(ks);
    if let Some(e) = &ks_error {
        sidecar["ks_error"] = json!(e);
    }
    sidecar["convention"] = serde_json::to_value(ConventionStamp::default())?;
    let text = serde_json::to_string_pretty(&sidecar)?;
    match out {
        Some(p) => {
            std::fs::write(p, h.to_csv())?;
            std::fs::write(p.with_extension("json"), format!("{text}\n"))?;
            emit(&format!("{text}\n"));
        }
        None => {
            emit(&h.to_csv());
            eprintln!("{text}");
        }
    }
    Ok(0)
}

fn glue(rs: &RootSystem, d: Decomposition, pts: Vec<CartanVec>, nodes: usize) -> Result<u8> {
    let r = glue_volume(rs, d, &Marking::new(rs, pts)?, nodes)?;
    emit(&format!("{}\n", r.to_json()));
    Ok(0)
}
