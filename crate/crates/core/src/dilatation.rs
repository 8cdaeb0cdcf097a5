//! Pointwise p-angular dilatation, its circle functional, and the minimum
//! modulus over a circle.
//!
//! For an orientation-preserving mapping `f` with polar jet `(f_r, f_theta)`
//! and Jacobian `J`, the p-angular dilatation at `z = r e^{i theta}` is
//!
//! ```text
//! D_p(z) = |f_theta|^p / (r^p * J(z)),      p >= 2,
//! ```
//!
//! and the circle functional aggregates it over `|z| = r` with the arc
//! element `r dtheta`:
//!
//! ```text
//! delta_p(r) = ( integral_0^{2pi} D_p^{1/(p-1)} r dtheta )^{p-1}.
//! ```
//!
//! Conformal rotations have `D_p = 1` and `delta_p(r) = (2 pi r)^{p-1}`;
//! those values act as normalization oracles in the tests.

use crate::error::{Error, Result};
use crate::mapping::{Mapping, PolarPoint};
use crate::quadrature::{circle_sum, CircleRule};

/// Default circle sample count for [`min_modulus`].
pub const DEFAULT_MIN_MODULUS_SAMPLES: usize = 512;

/// How to treat quadrature nodes where the Jacobian fails to be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularityPolicy {
    /// Fail with [`Error::RegularityViolation`] at the first bad node.
    #[default]
    Strict,
    /// Replace isolated bad nodes by the circle mean of the good ones.
    ///
    /// Intended for ingested data whose finite-difference Jacobian dips
    /// nonpositive on a measure-zero set; more than 1/8 of the nodes going
    /// bad is still an error.
    Mask,
}

/// `delta_p` evaluated at one radius, with diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DeltaSample {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of circle nodes imputed under [`RegularityPolicy::Mask`].
    pub masked_nodes: usize,
}

fn validate_exponent(p: f64) -> Result<()> {
    if !p.is_finite() || p < 2.0 {
        return Err(Error::InvalidArgument(format!(
            "exponent p must be finite and >= 2, got {p}"
        )));
    }
    Ok(())
}

/// The p-angular dilatation `D_p` at a single point.
///
/// # Errors
///
/// [`Error::SingularOrigin`] at `r = 0`, [`Error::RegularityViolation`] when
/// the Jacobian is not strictly positive at the point.
pub fn angular_dilatation(map: &Mapping, p: f64, point: PolarPoint) -> Result<f64> {
    validate_exponent(p)?;
    if point.r() == 0.0 {
        return Err(Error::SingularOrigin);
    }
    let r = point.r();
    let jet = map.polar_jet(point)?;
    let jac = jet.jacobian(r);
    if !jac.is_finite() {
        return Err(Error::NonFinite {
            context: "jacobian",
            r,
            theta: point.theta(),
        });
    }
    if jac <= 0.0 {
        return Err(Error::RegularityViolation {
            r,
            theta: point.theta(),
            jacobian: jac,
        });
    }
    let value = (jet.d_theta.norm() / r).powf(p) / jac;
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "angular dilatation",
            r,
            theta: point.theta(),
        });
    }
    Ok(value)
}

/// The circle functional `delta_p(r)` together with a quadrature error
/// estimate, under an explicit regularity policy.
pub fn delta_p_with_policy(
    map: &Mapping,
    p: f64,
    r: f64,
    rule: CircleRule,
    policy: RegularityPolicy,
) -> Result<DeltaSample> {
    validate_exponent(p)?;
    let inner_exp = 1.0 / (p - 1.0);
    let mut values: Vec<Option<f64>> = Vec::with_capacity(rule.n_nodes());
    let mut masked = 0usize;
    let mut first_violation: Option<Error> = None;
    for theta in rule.nodes() {
        let point = PolarPoint::new(r, theta)?;
        match angular_dilatation(map, p, point) {
            // integrand D_p^{1/(p-1)} * r (arc element r dtheta)
            Ok(d) => values.push(Some(d.powf(inner_exp) * r)),
            Err(err @ Error::RegularityViolation { .. }) => match policy {
                RegularityPolicy::Strict => return Err(err),
                RegularityPolicy::Mask => {
                    if first_violation.is_none() {
                        first_violation = Some(err);
                    }
                    masked += 1;
                    values.push(None);
                }
            },
            Err(other) => return Err(other),
        }
    }
    if masked * 8 > rule.n_nodes() {
        // Masking is a patch for isolated defects, not a licence to ignore a
        // degenerate mapping.
        return Err(first_violation.unwrap());
    }
    let flat: Vec<f64> = if masked == 0 {
        values.into_iter().map(|v| v.unwrap()).collect()
    } else {
        let good: Vec<f64> = values.iter().filter_map(|v| *v).collect();
        let mean = good.iter().sum::<f64>() / good.len() as f64;
        values.into_iter().map(|v| v.unwrap_or(mean)).collect()
    };
    let (integral, est) = circle_sum(&flat);
    if !(integral > 0.0) || !integral.is_finite() {
        return Err(Error::HypothesisViolation(format!(
            "circle integral of the dilatation at r = {r} is {integral}, expected > 0"
        )));
    }
    let value = integral.powf(p - 1.0);
    // first-order propagation through x -> x^{p-1}
    let error_estimate = (p - 1.0) * integral.powf(p - 2.0) * est;
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "delta_p",
            r,
            theta: f64::NAN,
        });
    }
    Ok(DeltaSample {
        value,
        error_estimate,
        masked_nodes: masked,
    })
}

/// The circle functional `delta_p(r)` with the strict regularity policy.
pub fn delta_p(map: &Mapping, p: f64, r: f64, rule: CircleRule) -> Result<(f64, f64)> {
    let sample = delta_p_with_policy(map, p, r, rule, RegularityPolicy::Strict)?;
    Ok((sample.value, sample.error_estimate))
}

/// Minimum of `|f|` over the circle of radius `r`.
///
/// Samples `n_samples` equispaced angles, then refines the best bracket by
/// golden-section search down to an angular tolerance of `1e-12`. The
/// modulus is smooth in the angle for every supported mapping, so bracket
/// capture only needs moderately dense sampling.
pub fn min_modulus(map: &Mapping, r: f64, n_samples: usize) -> Result<f64> {
    modulus_extremum(map, r, n_samples, false)
}

/// Maximum of `|f|` over the circle of radius `r` (same strategy).
pub fn max_modulus(map: &Mapping, r: f64, n_samples: usize) -> Result<f64> {
    modulus_extremum(map, r, n_samples, true)
}

fn modulus_extremum(map: &Mapping, r: f64, n_samples: usize, maximize: bool) -> Result<f64> {
    if n_samples < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 samples for the modulus search, got {n_samples}"
        )));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "modulus search radius must lie in (0, 1], got {r}"
        )));
    }
    let sign = if maximize { -1.0 } else { 1.0 };
    let objective = |theta: f64| -> Result<f64> {
        let point = PolarPoint::new(r, theta.rem_euclid(std::f64::consts::TAU))?;
        Ok(sign * map.evaluate(point)?.norm())
    };

    let step = std::f64::consts::TAU / n_samples as f64;
    let mut best_k = 0usize;
    let mut best = f64::INFINITY;
    for k in 0..n_samples {
        let v = objective(k as f64 * step)?;
        if v < best {
            best = v;
            best_k = k;
        }
    }

    // Golden-section refinement inside the bracket around the best sample.
    let mut a = (best_k as f64 - 1.0) * step;
    let mut b = (best_k as f64 + 1.0) * step;
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = objective(d)?;
        }
    }
    Ok(sign * best.min(fc).min(fd))
}

/// `delta_p` tabulated over a radius grid.
#[derive(Debug, Clone)]
pub struct DilatationProfile {
    pub p: f64,
    pub radii: Vec<f64>,
    pub delta_values: Vec<f64>,
    pub error_estimates: Vec<f64>,
}

impl DilatationProfile {
    /// Evaluates `delta_p` at each radius of a strictly increasing grid.
    pub fn compute(map: &Mapping, p: f64, radii: &[f64], rule: CircleRule) -> Result<Self> {
        validate_exponent(p)?;
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
        if !(radii[0] > 0.0) || *radii.last().unwrap() > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "radius grid must lie in (0, 1], got range [{}, {}]",
                radii[0],
                radii.last().unwrap()
            )));
        }
        let mut delta_values = Vec::with_capacity(radii.len());
        let mut error_estimates = Vec::with_capacity(radii.len());
        for &r in radii {
            let (value, est) = delta_p(map, p, r, rule)?;
            delta_values.push(value);
            error_estimates.push(est);
        }
        Ok(Self {
            p,
            radii: radii.to_vec(),
            delta_values,
            error_estimates,
        })
    }
}
