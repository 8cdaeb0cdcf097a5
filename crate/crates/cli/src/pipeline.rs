//! Subcommand pipelines: compute, write tables, optionally draw charts.
//!
//! Every pipeline validates before it writes, emits files in a fixed order,
//! and prints a one-line summary per artifact. Exit codes: 0 on success (for
//! `check`, additionally: every selected gating check passed), 1 otherwise.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};

use diskdil::bounds::{
    branch_continuity, geometric_radii, run_suite, schwarz_profile, CheckKind, InequalityId,
    SuiteConfig, SuiteReport,
};
use diskdil::dilatation::{delta_p_with_policy, RegularityPolicy};
use diskdil::geometry::GeometryProfile;
use diskdil::ingest::parse_sampled_map;
use diskdil::mapping::Mapping;
use diskdil::quadrature::CircleRule;

use crate::config::{slug, RunConfig};
use crate::report::{self, ProfileRow, SchwarzEntry, SchwarzRow};
use crate::svg::{line_chart, Axes, Series};

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// Tabulates length, area (both methods), area derivative, and delta_p.
pub fn run_profile(config: &RunConfig) -> Result<i32> {
    let policy = if config.mask_defects {
        RegularityPolicy::Mask
    } else {
        RegularityPolicy::Strict
    };
    let mut rows: Vec<ProfileRow> = Vec::new();
    let mut charts: Vec<(String, String)> = Vec::new();

    for map in &config.maps {
        let label = map.describe();
        let geometry =
            GeometryProfile::compute(map, &config.radii, config.circle, config.radial)
                .with_context(|| format!("geometry profile of {label}"))?;
        for &p in &config.p_list {
            for (k, &r) in config.radii.iter().enumerate() {
                let delta = delta_p_with_policy(map, p, r, config.circle, policy)
                    .with_context(|| format!("delta_p of {label} at p = {p}, r = {r}"))?;
                rows.push(ProfileRow {
                    map: label.clone(),
                    p,
                    r,
                    length: geometry.length_values[k],
                    s_green: geometry.area_green[k],
                    s_jacobian: geometry.area_jacobian[k],
                    s_prime: geometry.area_derivative[k],
                    delta_p: delta.value,
                    delta_error: delta.error_estimate,
                    masked_nodes: delta.masked_nodes,
                });
            }
        }

        if config.plots {
            let pair = |values: &[f64]| -> Vec<(f64, f64)> {
                config.radii.iter().copied().zip(values.iter().copied()).collect()
            };
            let mut series = vec![
                Series {
                    label: "L(r)".to_string(),
                    points: pair(&geometry.length_values),
                },
                Series {
                    label: "S(r)".to_string(),
                    points: pair(&geometry.area_green),
                },
                Series {
                    label: "S'(r)".to_string(),
                    points: pair(&geometry.area_derivative),
                },
            ];
            for &p in &config.p_list {
                let points: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|row| row.map == label && row.p == p)
                    .map(|row| (row.r, row.delta_p))
                    .collect();
                series.push(Series {
                    label: format!("delta p={p}"),
                    points,
                });
            }
            if let Some(svg) = line_chart(
                &format!("profile: {label}"),
                "r",
                "value",
                &series,
                Axes {
                    log_x: false,
                    log_y: true,
                },
            ) {
                charts.push((format!("profile_{}.svg", slug(&label)), svg));
            }
        }
    }

    if config.csv {
        write_artifact(&config.out_dir, "profile.csv", &report::profile_csv(&rows))?;
    }
    if config.json {
        write_artifact(&config.out_dir, "profile.json", &report::profile_json(&rows))?;
    }
    for (name, svg) in &charts {
        write_artifact(&config.out_dir, name, svg)?;
    }
    Ok(0)
}

/// The descending grid used for origin functionals inside `check`.
fn origin_grid() -> Vec<f64> {
    let mut grid = geometric_radii(1e-4, 0.5, 48);
    grid.reverse();
    grid
}

fn margins_chart(report: &SuiteReport) -> Option<String> {
    let mut series = Vec::new();
    let mut ids: Vec<InequalityId> = Vec::new();
    for result in &report.results {
        if !ids.contains(&result.id) {
            ids.push(result.id);
        }
    }
    for id in ids {
        // envelope: the smallest margin observed at each radius
        let mut points: Vec<(f64, f64)> = Vec::new();
        for result in report.results.iter().filter(|r| r.id == id) {
            match points.iter_mut().find(|(r, _)| *r == result.r1) {
                Some(entry) => entry.1 = entry.1.min(result.margin),
                None => points.push((result.r1, result.margin)),
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        series.push(Series {
            label: id.as_str().to_string(),
            points,
        });
    }
    if series.is_empty() {
        return None;
    }
    line_chart(
        "check margins (smallest over maps and exponents)",
        "r",
        "margin",
        &series,
        Axes {
            log_x: false,
            log_y: false,
        },
    )
}

fn area_bound_chart(report: &SuiteReport, label: &str) -> Option<String> {
    let rows: Vec<_> = report
        .results
        .iter()
        .filter(|r| {
            r.map == label
                && matches!(r.id, InequalityId::Theorem1P2 | InequalityId::Theorem1Pgt2)
        })
        .collect();
    if rows.is_empty() {
        return None;
    }
    let mut p_values: Vec<f64> = Vec::new();
    for row in &rows {
        if !p_values.contains(&row.p) {
            p_values.push(row.p);
        }
    }
    p_values.sort_by(f64::total_cmp);
    let mut series = vec![Series {
        label: "S(r) measured".to_string(),
        points: rows
            .iter()
            .filter(|r| r.p == p_values[0])
            .map(|r| (r.r1, r.lhs))
            .collect(),
    }];
    for &p in &p_values {
        series.push(Series {
            label: format!("bound p={p}"),
            points: rows
                .iter()
                .filter(|r| r.p == p)
                .map(|r| (r.r1, r.rhs))
                .collect(),
        });
    }
    line_chart(
        &format!("area vs bound: {label}"),
        "r",
        "area",
        &series,
        Axes {
            log_x: true,
            log_y: true,
        },
    )
}

/// Runs the selected inequality checks; exit 0 iff all gating rows pass.
pub fn run_check(config: &RunConfig) -> Result<i32> {
    let suite = SuiteConfig {
        maps: config.maps.clone(),
        p_list: config.p_list.clone(),
        radii: config.radii.clone(),
        schwarz_radii: origin_grid(),
        circle_rule: config.circle,
        radial_rule: config.radial,
        tolerances: config.tolerances,
        checks: config.checks.clone(),
        lemma3_max_pairs: 50,
    };
    let report = run_suite(&suite).context("check suite")?;

    if config.csv {
        write_artifact(&config.out_dir, "checks.csv", &report::checks_csv(&report))?;
    }
    if config.json {
        write_artifact(&config.out_dir, "checks.json", &report::checks_json(&report))?;
    }
    if config.plots {
        if let Some(svg) = margins_chart(&report) {
            write_artifact(&config.out_dir, "margins.svg", &svg)?;
        }
        for map in &config.maps {
            let label = map.describe();
            if let Some(svg) = area_bound_chart(&report, &label) {
                write_artifact(
                    &config.out_dir,
                    &format!("area_bound_{}.svg", slug(&label)),
                    &svg,
                )?;
            }
        }
    }

    let gating_failures = report
        .results
        .iter()
        .filter(|r| r.gating && !r.pass)
        .count();
    match report.min_margin() {
        Some(min) => println!(
            "checks: {} rows, {} gating failures, {} regularity failures; min margin {:.3e} \
             ({}, {}, p = {}, r1 = {:.6})",
            report.results.len(),
            gating_failures,
            report.regularity_failures.len(),
            min.margin,
            min.map,
            min.id,
            min.p,
            min.r1
        ),
        None => println!(
            "checks: {} rows, {} regularity failures",
            report.results.len(),
            report.regularity_failures.len()
        ),
    }
    for failure in report.regularity_failures.iter().take(8) {
        println!(
            "regularity: {} -> {} = {:.6e} at (r = {:.6}, theta = {:.6})",
            failure.map, failure.detail, failure.value, failure.r, failure.theta
        );
    }

    let ok = report.all_gating_passed();
    println!("result: {}", if ok { "pass" } else { "fail" });
    Ok(if ok { 0 } else { 1 })
}

/// Tabulates the origin functional on a descending copy of the grid.
pub fn run_schwarz(config: &RunConfig) -> Result<i32> {
    let mut radii = config.radii.clone();
    radii.reverse();

    let mut rows: Vec<SchwarzRow> = Vec::new();
    let mut entries: Vec<SchwarzEntry> = Vec::new();
    for map in &config.maps {
        let label = map.describe();
        for &p in &config.p_list {
            let profile = schwarz_profile(map, p, &radii, config.circle, config.radial)
                .with_context(|| format!("origin functional of {label} at p = {p}"))?;
            for (k, &r) in profile.radii.iter().enumerate() {
                rows.push(SchwarzRow {
                    map: label.clone(),
                    p,
                    r,
                    functional: profile.functional_values[k],
                    proxy_liminf: profile.proxy_liminf,
                });
            }
            println!("{label} p = {p}: proxy liminf = {:.12}", profile.proxy_liminf);
            entries.push(SchwarzEntry {
                map: label.clone(),
                p,
                radii: profile.radii,
                functional_values: profile.functional_values,
                proxy_liminf: profile.proxy_liminf,
            });
        }
    }

    if config.csv {
        write_artifact(&config.out_dir, "schwarz.csv", &report::schwarz_csv(&rows))?;
    }
    if config.json {
        write_artifact(
            &config.out_dir,
            "schwarz.json",
            &report::schwarz_json(&entries),
        )?;
    }
    if config.plots {
        for map in &config.maps {
            let label = map.describe();
            let series: Vec<Series> = config
                .p_list
                .iter()
                .map(|&p| Series {
                    label: format!("p={p}"),
                    points: rows
                        .iter()
                        .filter(|row| row.map == label && row.p == p)
                        .map(|row| (row.r, row.functional))
                        .collect(),
                })
                .collect();
            if let Some(svg) = line_chart(
                &format!("origin functional: {label}"),
                "r",
                "l_f(r) / R_p(r)",
                &series,
                Axes {
                    log_x: true,
                    log_y: false,
                },
            ) {
                write_artifact(
                    &config.out_dir,
                    &format!("schwarz_{}.svg", slug(&label)),
                    &svg,
                )?;
            }
        }
    }
    Ok(0)
}

/// Parses a sampled-map file and reports grid regularity; writes nothing.
pub fn run_ingest_verify(path: &Path) -> Result<i32> {
    let sampled = parse_sampled_map(path)
        .with_context(|| format!("cannot ingest {}", path.display()))?;
    let n_r = sampled.r_values().len();
    let n_t = sampled.theta_count();
    let hull = sampled.radial_hull();
    let flags = sampled.flags();
    println!(
        "parsed {}: {} radii x {} angles, hull [{:.6}, {:.6}]",
        path.display(),
        n_r,
        n_t,
        hull.0,
        hull.1
    );
    println!(
        "asserted flags: regular = {}, n_property = {}",
        flags.regular, flags.n_property
    );

    let map = Mapping::sampled(sampled);
    let grid_r = (2 * n_r).clamp(2, 256);
    let grid_t = (2 * n_t).clamp(4, 1024);
    let report = map.validate_regular(grid_r, grid_t, hull.0)?;
    println!(
        "regularity: {} ({} samples; min J = {:.6e} at (r = {:.6}, theta = {:.6}); \
         max |f| = {:.9} at (r = {:.6}, theta = {:.6}))",
        if report.pass { "pass" } else { "fail" },
        report.samples_checked,
        report.min_jacobian,
        report.min_jacobian_at.0,
        report.min_jacobian_at.1,
        report.max_modulus,
        report.max_modulus_at.0,
        report.max_modulus_at.1
    );
    for violation in &report.violations {
        println!(
            "  violation: J = {:.6e} at (r = {:.6}, theta = {:.6})",
            violation.jacobian, violation.r, violation.theta
        );
    }
    Ok(if report.pass { 0 } else { 1 })
}

/// Runs the built-in verification sweep plus the branch-seam probes.
pub fn run_selftest() -> Result<i32> {
    let start = Instant::now();
    let report = run_suite(&SuiteConfig::builtin()).context("built-in suite")?;
    let suite_ok = report.all_gating_passed();
    match report.min_margin() {
        Some(min) => println!(
            "selftest suite: {} rows, min margin {:.3e} ({}, {}, p = {}, r1 = {:.6}) [{}]",
            report.results.len(),
            min.margin,
            min.map,
            min.id,
            min.p,
            min.r1,
            if suite_ok { "pass" } else { "fail" }
        ),
        None => println!("selftest suite: no results [fail]"),
    }

    let mut branch_ok = true;
    for map in [Mapping::identity(), Mapping::radial_power(2.0).unwrap()] {
        let probe = branch_continuity(&map, 0.5, &[1e-2, 1e-3, 1e-4], CircleRule::default())?;
        let last_gap = probe.gaps.last().map(|g| g.relative_gap).unwrap_or(f64::NAN);
        let ok = probe.strictly_decreasing && last_gap <= 1e-3;
        branch_ok &= ok;
        println!(
            "selftest branch seam {}: gap(1e-4) = {:.3e}, strictly decreasing = {} [{}]",
            map.describe(),
            last_gap,
            probe.strictly_decreasing,
            if ok { "pass" } else { "fail" }
        );
    }

    let checks = CheckKind::all().len();
    let ok = suite_ok && branch_ok;
    println!(
        "selftest: {} check families over {} mappings in {:.2?} [{}]",
        checks,
        SuiteConfig::builtin().maps.len(),
        start.elapsed(),
        if ok { "pass" } else { "fail" }
    );
    Ok(if ok { 0 } else { 1 })
}
