//! Curve length, image area (by two independent methods), and the radial
//! area derivative.
//!
//! For the circle `gamma_r = {|z| = r}` and its image under `f`:
//!
//! * `L(r) = integral |f_theta| dtheta` — length of `f(gamma_r)`;
//! * `S'(r) = integral J_f r dtheta` — derivative of the image area;
//! * `S(r)` — the image area itself, computed both as the contour integral
//!   `1/2 integral Im(conj(f) f_theta) dtheta` (divergence theorem; valid
//!   because `f(gamma_r)` is a Jordan curve for a homeomorphism) and as the
//!   radial integral of `S'` (change of variables).
//!
//! The radial form cannot start at `r = 0` where the polar frame is
//! singular. Instead it starts at a small core radius and brackets the core
//! contribution: a homeomorphism with `f(0) = 0` maps the core disk onto a
//! set squeezed between the disks of radius `min |f|` and `max |f|` over the
//! core circle, so the area lies in `[pi l^2, pi M^2]`. The midpoint is used
//! as the value and the half-width is reported as `truncation_bound`.

use std::cell::Cell;

use crate::dilatation::{max_modulus, min_modulus, DEFAULT_MIN_MODULUS_SAMPLES};
use crate::error::{Error, Result};
use crate::mapping::{Mapping, PolarPoint};
use crate::quadrature::{integrate_circle, integrate_radial, CircleRule, RadialRule};

/// Radius below which the polar frame is abandoned for the core bracket.
pub const DEFAULT_CORE_RADIUS: f64 = 1e-3;

fn validate_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must lie in (0, 1], got {r}"
        )));
    }
    Ok(())
}

/// Length of the image of the circle of radius `r`, with error estimate.
pub fn curve_length_with_estimate(
    map: &Mapping,
    r: f64,
    rule: CircleRule,
) -> Result<(f64, f64)> {
    validate_radius(r)?;
    integrate_circle(rule, |theta| {
        Ok(map.polar_jet(PolarPoint::new(r, theta)?)?.d_theta.norm())
    })
}

/// Length of the image of the circle of radius `r`.
pub fn curve_length(map: &Mapping, r: f64, rule: CircleRule) -> Result<f64> {
    Ok(curve_length_with_estimate(map, r, rule)?.0)
}

/// Radial derivative of the image area at `r`, with error estimate.
///
/// The integrand is the signed Jacobian; no positivity check is applied
/// here, so a folded mapping yields whatever the signed integral gives.
/// Regularity enforcement lives in the dilatation layer and in
/// [`crate::mapping::Mapping::validate_regular`].
pub fn area_derivative_with_estimate(
    map: &Mapping,
    r: f64,
    rule: CircleRule,
) -> Result<(f64, f64)> {
    validate_radius(r)?;
    integrate_circle(rule, |theta| {
        let point = PolarPoint::new(r, theta)?;
        Ok(map.jacobian(point)? * r)
    })
}

/// Radial derivative of the image area at `r`.
pub fn area_derivative(map: &Mapping, r: f64, rule: CircleRule) -> Result<f64> {
    Ok(area_derivative_with_estimate(map, r, rule)?.0)
}

/// Image area of the disk of radius `r` by the contour-integral method,
/// with error estimate.
pub fn disk_area_green_with_estimate(
    map: &Mapping,
    r: f64,
    rule: CircleRule,
) -> Result<(f64, f64)> {
    validate_radius(r)?;
    let (twice, est) = integrate_circle(rule, |theta| {
        let jet = map.polar_jet(PolarPoint::new(r, theta)?)?;
        Ok((jet.value.conj() * jet.d_theta).im)
    })?;
    Ok((0.5 * twice, 0.5 * est))
}

/// Image area of the disk of radius `r` by the contour-integral method.
pub fn disk_area_green(map: &Mapping, r: f64, rule: CircleRule) -> Result<f64> {
    Ok(disk_area_green_with_estimate(map, r, rule)?.0)
}

/// Image area computed through the Jacobian, with accuracy diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct AreaEstimate {
    pub value: f64,
    /// Accumulated quadrature error estimate (circle and radial rules).
    pub error_estimate: f64,
    /// Half-width of the bracket used for the core disk below the polar
    /// truncation radius; zero whenever `|f|` is constant on the core circle.
    pub truncation_bound: f64,
    /// True when the adaptive radial rule hit its depth limit somewhere.
    pub degraded: bool,
}

/// Bracket of the area of the image of the core disk `|z| <= core`.
fn core_bracket(map: &Mapping, core: f64) -> Result<(f64, f64)> {
    let l = min_modulus(map, core, DEFAULT_MIN_MODULUS_SAMPLES)?;
    let m = max_modulus(map, core, DEFAULT_MIN_MODULUS_SAMPLES)?;
    let mid = 0.5 * std::f64::consts::PI * (l * l + m * m);
    let half_width = 0.5 * std::f64::consts::PI * (m * m - l * l).max(0.0);
    Ok((mid, half_width))
}

fn core_radius_for(map: &Mapping, r: f64) -> f64 {
    let (hull_lo, _) = map.radial_hull();
    DEFAULT_CORE_RADIUS.max(hull_lo).min(r)
}

/// Image area of the disk of radius `r` via the radial integral of `S'`.
pub fn disk_area_jacobian(
    map: &Mapping,
    r: f64,
    circle_rule: CircleRule,
    radial_rule: RadialRule,
) -> Result<AreaEstimate> {
    validate_radius(r)?;
    let core = core_radius_for(map, r);
    let (core_mid, core_half_width) = core_bracket(map, core)?;
    if r <= core {
        return Ok(AreaEstimate {
            value: core_mid,
            error_estimate: 0.0,
            truncation_bound: core_half_width,
            degraded: false,
        });
    }
    let inner_est = Cell::new(0.0f64);
    let radial = integrate_radial(radial_rule, core, r, |t| {
        let (v, e) = area_derivative_with_estimate(map, t, circle_rule)?;
        inner_est.set(inner_est.get().max(e));
        Ok(v)
    })?;
    Ok(AreaEstimate {
        value: core_mid + radial.value,
        error_estimate: radial.error_estimate + inner_est.get() * (r - core),
        truncation_bound: core_half_width,
        degraded: radial.depth_exhausted,
    })
}

/// Per-radius table of all geometric functionals.
#[derive(Debug, Clone)]
pub struct GeometryProfile {
    pub radii: Vec<f64>,
    pub length_values: Vec<f64>,
    /// `S(r)` through the Jacobian (radial) method.
    pub area_jacobian: Vec<f64>,
    /// `S(r)` through the contour (Green) method.
    pub area_green: Vec<f64>,
    pub area_derivative: Vec<f64>,
    /// Diagnostics for the Jacobian-method values.
    pub area_estimates: Vec<AreaEstimate>,
}

impl GeometryProfile {
    /// Computes the profile over a strictly increasing radius grid.
    ///
    /// The Jacobian-method areas are accumulated incrementally between
    /// consecutive radii so the whole profile costs one radial sweep.
    ///
    /// # Errors
    ///
    /// Beyond propagated evaluation errors, [`Error::HypothesisViolation`]
    /// when the computed areas are negative, decreasing beyond tolerance, or
    /// (for closed-form mappings) when the two area methods disagree beyond
    /// their combined error budget — any of which signals a mapping that is
    /// not a regular homeomorphism.
    pub fn compute(
        map: &Mapping,
        radii: &[f64],
        circle_rule: CircleRule,
        radial_rule: RadialRule,
    ) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidArgument("empty radius grid".to_string()));
        }
        for pair in radii.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidArgument(format!(
                    "radius grid must be strictly increasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        validate_radius(radii[0])?;
        validate_radius(*radii.last().unwrap())?;

        let mut length_values = Vec::with_capacity(radii.len());
        let mut area_green = Vec::with_capacity(radii.len());
        let mut area_derivative_values = Vec::with_capacity(radii.len());
        let mut green_estimates = Vec::with_capacity(radii.len());
        for &r in radii {
            length_values.push(curve_length(map, r, circle_rule)?);
            let (green, green_est) = disk_area_green_with_estimate(map, r, circle_rule)?;
            area_green.push(green);
            green_estimates.push(green_est);
            area_derivative_values.push(area_derivative(map, r, circle_rule)?);
        }

        // One incremental radial sweep for the Jacobian-method areas.
        let core = core_radius_for(map, radii[0]);
        let (core_mid, core_half_width) = core_bracket(map, core)?;
        let mut area_jacobian = Vec::with_capacity(radii.len());
        let mut area_estimates = Vec::with_capacity(radii.len());
        let mut running = core_mid;
        let mut running_err = 0.0;
        let mut degraded = false;
        let inner_est = Cell::new(0.0f64);
        let mut prev = core;
        for &r in radii {
            if r > prev {
                let segment = integrate_radial(radial_rule, prev, r, |t| {
                    let (v, e) = area_derivative_with_estimate(map, t, circle_rule)?;
                    inner_est.set(inner_est.get().max(e));
                    Ok(v)
                })?;
                running += segment.value;
                running_err += segment.error_estimate;
                degraded |= segment.depth_exhausted;
                prev = r;
            }
            let estimate = AreaEstimate {
                value: running,
                error_estimate: running_err + inner_est.get() * (prev - core),
                truncation_bound: core_half_width,
                degraded,
            };
            area_jacobian.push(estimate.value);
            area_estimates.push(estimate);
        }

        for (k, &r) in radii.iter().enumerate() {
            let green = area_green[k];
            let jac = area_jacobian[k];
            if !green.is_finite() || !jac.is_finite() || green < -1e-12 || jac < -1e-12 {
                return Err(Error::HypothesisViolation(format!(
                    "computed area at r = {r} is not a finite nonnegative number \
                     (green {green}, jacobian {jac})"
                )));
            }
            if k > 0 && green + 1e-10 < area_green[k - 1] {
                return Err(Error::HypothesisViolation(format!(
                    "image area decreases between r = {} and r = {r}",
                    radii[k - 1]
                )));
            }
            // For sampled mappings the finite-difference bias dominates both
            // methods differently; their agreement is validated statistically
            // by round-trip tests instead of being enforced per radius.
            if !map.contains_sampled() {
                let budget = area_estimates[k].error_estimate
                    + area_estimates[k].truncation_bound
                    + green_estimates[k]
                    + 1e-7 * green.abs().max(1.0);
                if (green - jac).abs() > budget {
                    return Err(Error::HypothesisViolation(format!(
                        "area methods disagree at r = {r}: green {green} vs jacobian {jac} \
                         exceeds budget {budget:e}"
                    )));
                }
            }
        }

        Ok(Self {
            radii: radii.to_vec(),
            length_values,
            area_jacobian,
            area_green,
            area_derivative: area_derivative_values,
            area_estimates,
        })
    }
}
