//! CSV and JSON table rendering.
//!
//! Numeric CSV cells use 17 significant digits so that values round-trip
//! double precision exactly; the JSON mirrors the same columns with named
//! fields. All output is assembled from pre-sorted data, so repeated runs
//! with the same configuration are byte-identical.

use serde::Serialize;

use diskdil::bounds::{SuiteReport};

/// 17 significant digits: enough to reconstruct the exact f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_escape(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn csv_line(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| csv_escape(c))
        .collect::<Vec<_>>()
        .join(",")
}

/// One `(map, p, r)` row of the profile table.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub map: String,
    pub p: f64,
    pub r: f64,
    pub length: f64,
    pub s_green: f64,
    pub s_jacobian: f64,
    pub s_prime: f64,
    pub delta_p: f64,
    pub delta_error: f64,
    /// Circle nodes imputed under the masking policy (0 when strict).
    pub masked_nodes: usize,
}

pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from(
        "map,p,r,length,s_green,s_jacobian,s_prime,delta_p,delta_error,masked_nodes\n",
    );
    for row in rows {
        out.push_str(&csv_line(&[
            row.map.clone(),
            fmt17(row.p),
            fmt17(row.r),
            fmt17(row.length),
            fmt17(row.s_green),
            fmt17(row.s_jacobian),
            fmt17(row.s_prime),
            fmt17(row.delta_p),
            fmt17(row.delta_error),
            row.masked_nodes.to_string(),
        ]));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ProfileDocument<'a> {
    rows: &'a [ProfileRow],
}

pub fn profile_json(rows: &[ProfileRow]) -> String {
    let mut text = serde_json::to_string_pretty(&ProfileDocument { rows }).expect("serialize");
    text.push('\n');
    text
}

pub fn checks_csv(report: &SuiteReport) -> String {
    let mut out =
        String::from("map,inequality,p,r1,r2,lhs,rhs,margin,tolerance,pass,gating,note\n");
    for result in &report.results {
        out.push_str(&csv_line(&[
            result.map.clone(),
            result.id.as_str().to_string(),
            fmt17(result.p),
            fmt17(result.r1),
            result.r2.map(fmt17).unwrap_or_default(),
            fmt17(result.lhs),
            fmt17(result.rhs),
            fmt17(result.margin),
            fmt17(result.tolerance),
            result.pass.to_string(),
            result.gating.to_string(),
            result.note.clone(),
        ]));
        out.push('\n');
    }
    // a regularity defect is reported as the failed claim `0 <= J`
    for failure in &report.regularity_failures {
        out.push_str(&csv_line(&[
            failure.map.clone(),
            "regularity".to_string(),
            String::new(),
            fmt17(failure.r),
            String::new(),
            fmt17(0.0),
            fmt17(failure.value),
            fmt17(failure.value),
            fmt17(0.0),
            "false".to_string(),
            "true".to_string(),
            format!("{} at theta = {:.6}", failure.detail, failure.theta),
        ]));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct ChecksDocument<'a> {
    all_gating_passed: bool,
    #[serde(flatten)]
    report: &'a SuiteReport,
}

pub fn checks_json(report: &SuiteReport) -> String {
    let mut text = serde_json::to_string_pretty(&ChecksDocument {
        all_gating_passed: report.all_gating_passed(),
        report,
    })
    .expect("serialize");
    text.push('\n');
    text
}

/// One `(map, p, r)` row of the origin-functional table.
#[derive(Debug, Clone, Serialize)]
pub struct SchwarzRow {
    pub map: String,
    pub p: f64,
    pub r: f64,
    pub functional: f64,
    pub proxy_liminf: f64,
}

pub fn schwarz_csv(rows: &[SchwarzRow]) -> String {
    let mut out = String::from("map,p,r,functional,proxy_liminf\n");
    for row in rows {
        out.push_str(&csv_line(&[
            row.map.clone(),
            fmt17(row.p),
            fmt17(row.r),
            fmt17(row.functional),
            fmt17(row.proxy_liminf),
        ]));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct SchwarzEntry {
    pub map: String,
    pub p: f64,
    pub radii: Vec<f64>,
    pub functional_values: Vec<f64>,
    pub proxy_liminf: f64,
}

#[derive(Serialize)]
struct SchwarzDocument<'a> {
    profiles: &'a [SchwarzEntry],
}

pub fn schwarz_json(profiles: &[SchwarzEntry]) -> String {
    let mut text =
        serde_json::to_string_pretty(&SchwarzDocument { profiles }).expect("serialize");
    text.push('\n');
    text
}
