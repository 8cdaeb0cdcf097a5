//! Ingestion of externally sampled mappings.
//!
//! Two on-disk formats are accepted:
//!
//! * **CSV** with the exact header `r,theta,re,im`, one sample per row, in
//!   any row order. The rows must form a full tensor grid: every listed
//!   radius carries the same set of angles, and the angles must be the
//!   equispaced grid `theta_j = 2*pi*j/n` (within `1e-12`).
//! * **JSON** (chosen when the path ends in `.json`) with fields
//!   `r_values`, `theta_count`, row-major `samples` as `[re, im]` pairs, and
//!   optional `asserted_flags`.
//!
//! The radial grid may be non-uniform; at least 3 radii and 16 angles are
//! required, radii must be strictly increasing inside `(0, 1]`, and every
//! sample must stay inside the closed unit disk (tolerance `1e-9`).
//!
//! Jets are computed once at grid nodes (periodic central differences in the
//! angle, second-order central or one-sided differences in the radius) and
//! bilinearly interpolated afterwards, matching how values are interpolated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mapping::{Mapping, PolarJet, PolarPoint};

/// Modulus slack allowed for ingested samples.
pub const SAMPLE_MODULUS_TOLERANCE: f64 = 1e-9;
/// Allowed deviation of angle nodes from the equispaced grid.
pub const THETA_GRID_TOLERANCE: f64 = 1e-12;

const MIN_RADII: usize = 3;
const MIN_ANGLES: usize = 16;

/// User assertions about hypotheses that cannot be decided from samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AssertedFlags {
    /// The underlying mapping is a regular homeomorphism.
    pub regular: bool,
    /// The underlying mapping maps null sets to null sets.
    pub n_property: bool,
}

impl Default for AssertedFlags {
    fn default() -> Self {
        Self {
            regular: true,
            n_property: true,
        }
    }
}

/// A mapping reconstructed from grid samples.
#[derive(Debug, Clone)]
pub struct SampledMapping {
    r_values: Vec<f64>,
    theta_count: usize,
    values: Vec<Complex64>,
    d_r: Vec<Complex64>,
    d_theta: Vec<Complex64>,
    flags: AssertedFlags,
}

impl SampledMapping {
    /// Builds a sampled mapping from a row-major (radius-major) sample grid.
    ///
    /// # Errors
    ///
    /// [`Error::GridStructure`] when the grid shape or radii are invalid;
    /// moduli are expected to have been checked by the parser that produced
    /// the samples and are re-checked here without location information.
    pub fn new(
        r_values: Vec<f64>,
        theta_count: usize,
        values: Vec<Complex64>,
        flags: AssertedFlags,
    ) -> Result<Self> {
        if r_values.len() < MIN_RADII {
            return Err(Error::GridStructure(format!(
                "need at least {MIN_RADII} radii, got {}",
                r_values.len()
            )));
        }
        if theta_count < MIN_ANGLES {
            return Err(Error::GridStructure(format!(
                "need at least {MIN_ANGLES} angle nodes, got {theta_count}"
            )));
        }
        if values.len() != r_values.len() * theta_count {
            return Err(Error::GridStructure(format!(
                "expected {} samples for a {} x {} grid, got {}",
                r_values.len() * theta_count,
                r_values.len(),
                theta_count,
                values.len()
            )));
        }
        for pair in r_values.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::GridStructure(format!(
                    "radii must be strictly increasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        let first = r_values[0];
        let last = *r_values.last().unwrap();
        if !(first > 0.0) || last > 1.0 || !first.is_finite() {
            return Err(Error::GridStructure(format!(
                "radii must lie in (0, 1], got range [{first}, {last}]"
            )));
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::GridStructure(format!(
                    "sample {idx} is not finite"
                )));
            }
            if v.norm() > 1.0 + SAMPLE_MODULUS_TOLERANCE {
                return Err(Error::SampleOutsideDisk {
                    line: idx,
                    modulus: v.norm(),
                });
            }
        }

        let mut mapping = Self {
            r_values,
            theta_count,
            values,
            d_r: Vec::new(),
            d_theta: Vec::new(),
            flags,
        };
        mapping.compute_node_jets();
        Ok(mapping)
    }

    pub fn r_values(&self) -> &[f64] {
        &self.r_values
    }

    pub fn theta_count(&self) -> usize {
        self.theta_count
    }

    pub fn flags(&self) -> AssertedFlags {
        self.flags
    }

    pub fn radial_hull(&self) -> (f64, f64) {
        (self.r_values[0], *self.r_values.last().unwrap())
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.theta_count + j]
    }

    /// Second-order finite differences at every grid node.
    fn compute_node_jets(&mut self) {
        let nr = self.r_values.len();
        let nt = self.theta_count;
        let h_theta = TAU / nt as f64;
        let mut d_r = vec![Complex64::new(0.0, 0.0); nr * nt];
        let mut d_theta = vec![Complex64::new(0.0, 0.0); nr * nt];

        for i in 0..nr {
            for j in 0..nt {
                let prev = self.at(i, (j + nt - 1) % nt);
                let next = self.at(i, (j + 1) % nt);
                d_theta[i * nt + j] = (next - prev) / (2.0 * h_theta);
            }
        }

        for i in 0..nr {
            // Three-point second-order stencils that tolerate non-uniform
            // radial spacing; one-sided at the ends.
            let (ia, ib, ic, kind) = if i == 0 {
                (0, 1, 2, StencilKind::Leading)
            } else if i == nr - 1 {
                (nr - 3, nr - 2, nr - 1, StencilKind::Trailing)
            } else {
                (i - 1, i, i + 1, StencilKind::Central)
            };
            let u = self.r_values[ib] - self.r_values[ia];
            let v = self.r_values[ic] - self.r_values[ib];
            let (ca, cb, cc) = match kind {
                StencilKind::Central => (
                    -v / (u * (u + v)),
                    (v - u) / (u * v),
                    u / (v * (u + v)),
                ),
                StencilKind::Leading => (
                    -(2.0 * u + v) / (u * (u + v)),
                    (u + v) / (u * v),
                    -u / (v * (u + v)),
                ),
                StencilKind::Trailing => (
                    v / (u * (u + v)),
                    -(u + v) / (u * v),
                    (u + 2.0 * v) / (v * (u + v)),
                ),
            };
            for j in 0..nt {
                d_r[i * nt + j] =
                    ca * self.at(ia, j) + cb * self.at(ib, j) + cc * self.at(ic, j);
            }
        }

        self.d_r = d_r;
        self.d_theta = d_theta;
    }

    /// Bilinear interpolation weights for a query point.
    fn locate(&self, point: PolarPoint) -> Result<BilinearCell> {
        let (lo, hi) = self.radial_hull();
        let r = point.r();
        if r < lo || r > hi {
            return Err(Error::OutOfDomain {
                r,
                theta: point.theta(),
                reason: format!("sampled grid covers radii [{lo}, {hi}]"),
            });
        }
        // partition_point returns the first index with r_values[idx] > r
        let upper = self.r_values.partition_point(|&rv| rv <= r);
        let i = upper.clamp(1, self.r_values.len() - 1) - 1;
        let span = self.r_values[i + 1] - self.r_values[i];
        let t = ((r - self.r_values[i]) / span).clamp(0.0, 1.0);

        let nt = self.theta_count;
        let h_theta = TAU / nt as f64;
        let x = point.theta() / h_theta;
        let j = (x.floor() as usize).min(nt - 1);
        let u = (x - j as f64).clamp(0.0, 1.0);
        Ok(BilinearCell { i, j, t, u })
    }

    fn interpolate(&self, grid: &[Complex64], cell: &BilinearCell) -> Complex64 {
        let nt = self.theta_count;
        let j2 = (cell.j + 1) % nt;
        let a = grid[cell.i * nt + cell.j];
        let b = grid[cell.i * nt + j2];
        let c = grid[(cell.i + 1) * nt + cell.j];
        let d = grid[(cell.i + 1) * nt + j2];
        let (t, u) = (cell.t, cell.u);
        a * ((1.0 - t) * (1.0 - u)) + b * ((1.0 - t) * u) + c * (t * (1.0 - u)) + d * (t * u)
    }

    pub fn value_at(&self, point: PolarPoint) -> Result<Complex64> {
        let cell = self.locate(point)?;
        Ok(self.interpolate(&self.values, &cell))
    }

    pub fn jet_at(&self, point: PolarPoint) -> Result<PolarJet> {
        let cell = self.locate(point)?;
        Ok(PolarJet {
            value: self.interpolate(&self.values, &cell),
            d_r: self.interpolate(&self.d_r, &cell),
            d_theta: self.interpolate(&self.d_theta, &cell),
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum StencilKind {
    Central,
    Leading,
    Trailing,
}

struct BilinearCell {
    i: usize,
    j: usize,
    t: f64,
    u: f64,
}

const CSV_HEADER: &str = "r,theta,re,im";

/// Parses a sampled mapping from a file, dispatching on the extension.
pub fn parse_sampled_map(path: &Path) -> Result<SampledMapping> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        parse_sampled_json(&text)
    } else {
        parse_sampled_csv(&text)
    }
}

/// Parses the CSV sample format from an in-memory string.
pub fn parse_sampled_csv(text: &str) -> Result<SampledMapping> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((idx, line)) => {
                let trimmed = line.trim_end_matches('\r');
                if trimmed.is_empty() {
                    continue;
                }
                break (idx + 1, trimmed);
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "empty input".to_string(),
                })
            }
        }
    };
    if header.1 != CSV_HEADER {
        return Err(Error::Parse {
            line: header.0,
            message: format!("header must be exactly `{CSV_HEADER}`, got `{}`", header.1),
        });
    }

    struct Row {
        r: f64,
        theta: f64,
        value: Complex64,
        line: usize,
    }
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 comma-separated fields, got {}", fields.len()),
            });
        }
        let mut parsed = [0.0f64; 4];
        for (k, field) in fields.iter().enumerate() {
            parsed[k] = field.trim().parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("field {} (`{}`): {e}", k + 1, field.trim()),
            })?;
            if !parsed[k].is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("field {} must be finite", k + 1),
                });
            }
        }
        let value = Complex64::new(parsed[2], parsed[3]);
        if value.norm() > 1.0 + SAMPLE_MODULUS_TOLERANCE {
            return Err(Error::SampleOutsideDisk {
                line: line_no,
                modulus: value.norm(),
            });
        }
        rows.push(Row {
            r: parsed[0],
            theta: parsed[1],
            value,
            line: line_no,
        });
    }

    if rows.is_empty() {
        return Err(Error::Parse {
            line: header.0,
            message: "no data rows".to_string(),
        });
    }

    let mut r_values: Vec<f64> = rows.iter().map(|row| row.r).collect();
    r_values.sort_by(f64::total_cmp);
    r_values.dedup();
    let mut theta_values: Vec<f64> = rows.iter().map(|row| row.theta).collect();
    theta_values.sort_by(f64::total_cmp);
    theta_values.dedup();

    let nt = theta_values.len();
    if nt < MIN_ANGLES {
        return Err(Error::GridStructure(format!(
            "need at least {MIN_ANGLES} distinct angles, got {nt}"
        )));
    }
    for (j, &theta) in theta_values.iter().enumerate() {
        let expected = TAU * j as f64 / nt as f64;
        if (theta - expected).abs() > THETA_GRID_TOLERANCE {
            return Err(Error::GridStructure(format!(
                "angle node {j} is {theta}, expected the equispaced value {expected}"
            )));
        }
    }

    if rows.len() != r_values.len() * nt {
        return Err(Error::GridStructure(format!(
            "{} rows cannot tile a {} x {} tensor grid",
            rows.len(),
            r_values.len(),
            nt
        )));
    }

    let r_index: HashMap<u64, usize> = r_values
        .iter()
        .enumerate()
        .map(|(i, &r)| (r.to_bits(), i))
        .collect();
    let theta_index: HashMap<u64, usize> = theta_values
        .iter()
        .enumerate()
        .map(|(j, &t)| (t.to_bits(), j))
        .collect();

    let mut samples = vec![None; r_values.len() * nt];
    for row in &rows {
        let i = r_index[&row.r.to_bits()];
        let j = theta_index[&row.theta.to_bits()];
        let slot = &mut samples[i * nt + j];
        if slot.is_some() {
            return Err(Error::Parse {
                line: row.line,
                message: format!("duplicate sample for (r = {}, theta = {})", row.r, row.theta),
            });
        }
        *slot = Some(row.value);
    }
    // Full occupancy follows from the row count matching the grid size and
    // duplicates having been rejected.
    let values: Vec<Complex64> = samples.into_iter().map(|s| s.unwrap()).collect();
    SampledMapping::new(r_values, nt, values, AssertedFlags::default())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledJson {
    r_values: Vec<f64>,
    theta_count: usize,
    samples: Vec<[f64; 2]>,
    #[serde(default)]
    asserted_flags: AssertedFlags,
}

/// Parses the JSON sample format from an in-memory string.
///
/// Sample-level errors report the sample index in place of a line number.
pub fn parse_sampled_json(text: &str) -> Result<SampledMapping> {
    let raw: SampledJson = serde_json::from_str(text)?;
    let values: Vec<Complex64> = raw
        .samples
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    for (idx, v) in values.iter().enumerate() {
        if v.norm() > 1.0 + SAMPLE_MODULUS_TOLERANCE {
            return Err(Error::SampleOutsideDisk {
                line: idx,
                modulus: v.norm(),
            });
        }
    }
    SampledMapping::new(raw.r_values, raw.theta_count, values, raw.asserted_flags)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a mapping to the CSV sample format over the given grid.
///
/// Rows are emitted radius-major in increasing order, with 17 significant
/// digits so that values round-trip exactly.
pub fn render_sample_csv(map: &Mapping, radii: &[f64], theta_count: usize) -> Result<String> {
    if theta_count < MIN_ANGLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_ANGLES} angles, got {theta_count}"
        )));
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for &r in radii {
        for j in 0..theta_count {
            let theta = TAU * j as f64 / theta_count as f64;
            let value = map.evaluate(PolarPoint::new(r, theta)?)?;
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt17(r),
                fmt17(theta),
                fmt17(value.re),
                fmt17(value.im)
            ));
        }
    }
    Ok(out)
}

/// Renders a mapping to the JSON sample format over the given grid.
pub fn render_sample_json(
    map: &Mapping,
    radii: &[f64],
    theta_count: usize,
    flags: AssertedFlags,
) -> Result<String> {
    #[derive(Serialize)]
    struct Out<'a> {
        r_values: &'a [f64],
        theta_count: usize,
        samples: Vec<[f64; 2]>,
        asserted_flags: AssertedFlags,
    }
    let mut samples = Vec::with_capacity(radii.len() * theta_count);
    for &r in radii {
        for j in 0..theta_count {
            let theta = TAU * j as f64 / theta_count as f64;
            let value = map.evaluate(PolarPoint::new(r, theta)?)?;
            samples.push([value.re, value.im]);
        }
    }
    Ok(serde_json::to_string_pretty(&Out {
        r_values: radii,
        theta_count,
        samples,
        asserted_flags: flags,
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect()
    }

    fn sampled_from(map: &Mapping, nr: usize, nt: usize) -> SampledMapping {
        let radii = linear_radii(0.05, 1.0, nr);
        let csv = render_sample_csv(map, &radii, nt).unwrap();
        parse_sampled_csv(&csv).unwrap()
    }

    #[test]
    fn csv_round_trip_preserves_samples() {
        let map = Mapping::radial_power(2.0).unwrap();
        let radii = linear_radii(0.1, 1.0, 4);
        let csv = render_sample_csv(&map, &radii, 16).unwrap();
        let parsed = parse_sampled_csv(&csv).unwrap();
        assert_eq!(parsed.r_values(), radii.as_slice());
        assert_eq!(parsed.theta_count(), 16);
        let p = PolarPoint::new(0.4, 0.0).unwrap();
        let exact = map.evaluate(p).unwrap();
        // 0.4 is a grid radius and theta = 0 a grid angle, so interpolation
        // reproduces the sample exactly.
        assert!((parsed.value_at(p).unwrap() - exact).norm() < 1e-15);
        assert!(parsed.flags().regular);
    }

    #[test]
    fn node_jets_match_closed_forms_to_second_order() {
        let map = Mapping::radial_power(2.0).unwrap();
        let sampled = sampled_from(&map, 32, 64);
        let h_theta = TAU / 64.0;
        // Angular step dominates: the relative error of a central difference
        // of e^{i theta} is about h^2/6.
        let tol = h_theta * h_theta;
        for &r in &[0.05, 0.5, 1.0] {
            for &theta in &[0.0, TAU * 10.0 / 64.0] {
                let p = PolarPoint::new(r, theta).unwrap();
                let exact = map.polar_jet(p).unwrap();
                let approx = sampled.jet_at(p).unwrap();
                assert!(
                    (exact.d_theta - approx.d_theta).norm() <= tol * exact.d_theta.norm().max(0.1),
                    "d_theta at r = {r}"
                );
                // f is quadratic in r, so the radial stencils are exact there.
                assert!(
                    (exact.d_r - approx.d_r).norm() <= 1e-10,
                    "d_r at r = {r}: {:?} vs {:?}",
                    exact.d_r,
                    approx.d_r
                );
            }
        }
    }

    #[test]
    fn jacobian_of_sampled_rotation_is_close_to_one() {
        let map = Mapping::rotation(0.9).unwrap();
        let sampled = sampled_from(&map, 48, 128);
        for &r in &[0.1, 0.5, 0.9] {
            let p = PolarPoint::new(r, 1.0).unwrap();
            let jet = sampled.jet_at(p).unwrap();
            let j = jet.jacobian(r);
            assert!((j - 1.0).abs() < 1e-3, "J = {j} at r = {r}");
        }
    }

    #[test]
    fn degenerate_constant_samples_have_vanishing_jacobian() {
        let radii = linear_radii(0.2, 1.0, 3);
        let values = vec![Complex64::new(0.5, 0.0); 3 * 16];
        let sampled =
            SampledMapping::new(radii, 16, values, AssertedFlags::default()).unwrap();
        let p = PolarPoint::new(0.5, 0.3).unwrap();
        let j = sampled.jet_at(p).unwrap().jacobian(0.5);
        assert!(j.abs() < 1e-12);
    }

    #[test]
    fn queries_outside_the_hull_are_rejected() {
        let sampled = sampled_from(&Mapping::identity(), 8, 16);
        let below = PolarPoint::new(0.01, 0.0).unwrap();
        assert!(matches!(
            sampled.value_at(below),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn header_must_match_exactly() {
        let err = parse_sampled_csv("radius,angle,re,im\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let map = Mapping::identity();
        let radii = linear_radii(0.1, 1.0, 3);
        let mut csv = render_sample_csv(&map, &radii, 16).unwrap();
        csv.push_str("0.5,oops,0.1,0.2\n");
        match parse_sampled_csv(&csv).unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 2 + 3 * 16);
                assert!(message.contains("oops"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_rows_are_a_structure_error() {
        let map = Mapping::identity();
        let radii = linear_radii(0.1, 1.0, 3);
        let csv = render_sample_csv(&map, &radii, 16).unwrap();
        let truncated: Vec<&str> = csv.lines().take(1 + 3 * 16 - 1).collect();
        let err = parse_sampled_csv(&truncated.join("\n")).unwrap_err();
        assert!(matches!(err, Error::GridStructure(_)));
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        let map = Mapping::identity();
        let radii = linear_radii(0.1, 1.0, 3);
        let csv = render_sample_csv(&map, &radii, 16).unwrap();
        let mut lines: Vec<&str> = csv.lines().collect();
        let second = lines[1];
        let last = lines.len() - 1;
        lines[last] = second;
        let err = parse_sampled_csv(&lines.join("\n")).unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("duplicate")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn off_grid_angles_are_rejected() {
        let mut csv = String::from("r,theta,re,im\n");
        for &r in &[0.25f64, 0.5, 1.0] {
            for j in 0..16 {
                // a slightly skewed angle grid
                let theta = TAU * j as f64 / 16.0 + 1e-6;
                let (re, im) = (r * theta.cos() * 0.1, r * theta.sin() * 0.1);
                csv.push_str(&format!("{r},{theta},{re},{im}\n"));
            }
        }
        let err = parse_sampled_csv(&csv).unwrap_err();
        assert!(matches!(err, Error::GridStructure(_)));
    }

    #[test]
    fn samples_outside_the_disk_are_rejected_with_location() {
        let mut csv = String::from("r,theta,re,im\n");
        for &r in &[0.25f64, 0.5, 1.0] {
            for j in 0..16 {
                let theta = TAU * j as f64 / 16.0;
                let (re, im) = if r == 0.5 && j == 3 {
                    (1.2, 0.3)
                } else {
                    (0.5 * r, 0.0)
                };
                csv.push_str(&format!("{r},{theta},{re},{im}\n"));
            }
        }
        match parse_sampled_csv(&csv).unwrap_err() {
            Error::SampleOutsideDisk { line, modulus } => {
                assert_eq!(line, 1 + 16 + 3 + 1);
                assert!(modulus > 1.2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn too_small_grids_are_rejected() {
        let map = Mapping::identity();
        let radii = linear_radii(0.1, 1.0, 2);
        let csv = render_sample_csv(&map, &radii, 16).unwrap();
        assert!(matches!(
            parse_sampled_csv(&csv).unwrap_err(),
            Error::GridStructure(_)
        ));
    }

    #[test]
    fn json_round_trip_preserves_flags() {
        let map = Mapping::radial_power(0.5).unwrap();
        let radii = linear_radii(0.1, 1.0, 5);
        let flags = AssertedFlags {
            regular: true,
            n_property: false,
        };
        let json = render_sample_json(&map, &radii, 32, flags).unwrap();
        let parsed = parse_sampled_json(&json).unwrap();
        assert_eq!(parsed.flags(), flags);
        assert_eq!(parsed.r_values().len(), 5);
        let p = PolarPoint::new(0.55, 1.0).unwrap();
        let exact = map.evaluate(p).unwrap();
        assert!((parsed.value_at(p).unwrap() - exact).norm() < 1e-2);
    }

    #[test]
    fn json_shape_mismatch_is_rejected() {
        let json = r#"{"r_values": [0.1, 0.5, 1.0], "theta_count": 16, "samples": [[0.0, 0.0]]}"#;
        assert!(matches!(
            parse_sampled_json(json).unwrap_err(),
            Error::GridStructure(_)
        ));
    }

    #[test]
    fn non_uniform_radial_grids_keep_second_order_stencils() {
        // geometric radii stress the non-uniform stencil; f = r^2 stays exact
        let map = Mapping::radial_power(2.0).unwrap();
        let radii: Vec<f64> = (0..12)
            .map(|k| 0.05 * (1.0f64 / 0.05).powf(k as f64 / 11.0))
            .collect();
        let csv = render_sample_csv(&map, &radii, 32).unwrap();
        let parsed = parse_sampled_csv(&csv).unwrap();
        for &r in &[radii[0], radii[5], radii[11]] {
            let p = PolarPoint::new(r, 0.0).unwrap();
            let exact = map.polar_jet(p).unwrap();
            let approx = parsed.jet_at(p).unwrap();
            assert!(
                (exact.d_r - approx.d_r).norm() < 1e-10,
                "radial stencil should be exact on quadratics at r = {r}"
            );
        }
    }
}
