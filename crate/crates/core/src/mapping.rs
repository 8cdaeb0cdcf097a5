//! Homeomorphisms of the closed unit disk with closed-form polar jets.
//!
//! A [`Mapping`] is an orientation-preserving homeomorphism of the closed
//! unit disk into itself, addressed in polar coordinates `z = r e^{i theta}`.
//! Every built-in family carries hand-derived first derivatives, so jets are
//! exact up to rounding; [`Mapping::Composition`] chains stages through the
//! Cartesian (Wirtinger) frame, and [`Mapping::Sampled`] interpolates
//! externally supplied grid data with finite-difference jets.
//!
//! Polar jets are provided only for `r > 0`: the polar frame is singular at
//! the origin and every caller that integrates over circles stays away from
//! `r = 0` by construction.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::ingest::SampledMapping;

/// Tolerance used when checking that images stay inside the closed unit disk.
pub const MODULUS_TOLERANCE: f64 = 1e-9;

/// A point of the closed unit disk in polar coordinates.
///
/// The angle is normalized into `[0, 2*pi)` on construction and the radius is
/// validated against `[0, 1]`, so downstream code can rely on both without
/// re-checking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    r: f64,
    theta: f64,
}

impl PolarPoint {
    /// Builds a point, normalizing `theta` modulo `2*pi`.
    ///
    /// # Errors
    ///
    /// Returns [`Error::OutOfDomain`] when `r` is outside `[0, 1]` and
    /// [`Error::InvalidArgument`] when either coordinate is not finite.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !r.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "polar coordinates must be finite, got (r = {r}, theta = {theta})"
            )));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfDomain {
                r,
                theta,
                reason: "radius must lie in [0, 1]".to_string(),
            });
        }
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            // rem_euclid can round up to the modulus itself for tiny negative inputs
            t = 0.0;
        }
        Ok(Self { r, theta: t })
    }

    /// Converts a Cartesian image point back to polar form, tolerating the
    /// tiny modulus overshoot that rounding can introduce.
    pub(crate) fn from_complex(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if r > 1.0 + MODULUS_TOLERANCE {
            return Err(Error::OutOfDomain {
                r,
                theta: z.arg(),
                reason: "intermediate image left the closed unit disk".to_string(),
            });
        }
        Self::new(r.min(1.0), z.arg())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Value and first polar derivatives of a mapping at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarJet {
    /// `f(r e^{i theta})`.
    pub value: Complex64,
    /// Partial derivative in the radial direction.
    pub d_r: Complex64,
    /// Partial derivative in the angular direction.
    pub d_theta: Complex64,
}

impl PolarJet {
    /// Jacobian determinant from the polar frame, `Im(conj(f_r) f_theta) / r`.
    pub fn jacobian(&self, r: f64) -> f64 {
        (self.d_r.conj() * self.d_theta).im / r
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d_r.is_finite() && self.d_theta.is_finite()
    }
}

/// Wirtinger derivatives `(f_z, f_zbar)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerDerivs {
    pub f_z: Complex64,
    pub f_zbar: Complex64,
}

impl WirtingerDerivs {
    /// Jacobian determinant `|f_z|^2 - |f_zbar|^2`.
    pub fn jacobian(&self) -> f64 {
        self.f_z.norm_sqr() - self.f_zbar.norm_sqr()
    }
}

/// Converts a polar jet to Wirtinger derivatives.
///
/// Uses `f_z = e^{-i theta} (f_r - i f_theta / r) / 2` and
/// `f_zbar = e^{i theta} (f_r + i f_theta / r) / 2`, which follow from the
/// chain rule applied to `z = r e^{i theta}`.
///
/// # Errors
///
/// Returns [`Error::SingularOrigin`] at `r = 0` where the conversion is
/// undefined.
pub fn wirtinger_from_polar(jet: &PolarJet, point: PolarPoint) -> Result<WirtingerDerivs> {
    let r = point.r();
    if r == 0.0 {
        return Err(Error::SingularOrigin);
    }
    let i = Complex64::new(0.0, 1.0);
    let phase = Complex64::from_polar(1.0, point.theta());
    let angular = i * jet.d_theta / r;
    Ok(WirtingerDerivs {
        f_z: 0.5 * (jet.d_r - angular) / phase,
        f_zbar: 0.5 * (jet.d_r + angular) * phase,
    })
}

/// Reassembles a polar jet from Wirtinger derivatives at the same point.
fn polar_from_wirtinger(value: Complex64, w: &WirtingerDerivs, point: PolarPoint) -> PolarJet {
    let i = Complex64::new(0.0, 1.0);
    let phase = Complex64::from_polar(1.0, point.theta());
    let d_r = w.f_z * phase + w.f_zbar / phase;
    let d_theta = i * point.r() * (w.f_z * phase - w.f_zbar / phase);
    PolarJet { value, d_r, d_theta }
}

/// Radial twist profile `g(r) = sum_k c_k r^k` with `k` starting at 1, so
/// `g(0) = 0` holds structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistProfile {
    coeffs: Vec<f64>,
}

impl TwistProfile {
    /// `coeffs[k]` multiplies `r^{k+1}`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "twist coefficients must be finite".to_string(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `g(r)`, evaluated by Horner's scheme on `r * (c_1 + c_2 r + ...)`.
    pub fn eval(&self, r: f64) -> f64 {
        let inner = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * r + c);
        r * inner
    }

    /// `g'(r) = sum_k (k+1) c_k r^k`.
    pub fn deriv(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * r + (k as f64 + 1.0) * c)
    }
}

/// Angular reparametrization `h(theta) = theta + sum_k a_k sin(k theta) + b_k cos(k theta)`.
///
/// The identity part plus purely periodic terms guarantee
/// `h(theta + 2*pi) = h(theta) + 2*pi`; monotonicity (`h' > 0`) is a property
/// of particular coefficient choices and is checked operationally by
/// [`Mapping::validate_regular`] rather than at construction, so that
/// deliberately folded profiles remain constructible for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularProfile {
    sin_coeffs: Vec<f64>,
    cos_coeffs: Vec<f64>,
}

impl AngularProfile {
    /// `sin_coeffs[k]` multiplies `sin((k+1) theta)`, `cos_coeffs[k]` multiplies
    /// `cos((k+1) theta)`.
    pub fn new(sin_coeffs: Vec<f64>, cos_coeffs: Vec<f64>) -> Result<Self> {
        if sin_coeffs
            .iter()
            .chain(cos_coeffs.iter())
            .any(|c| !c.is_finite())
        {
            return Err(Error::InvalidArgument(
                "angular profile coefficients must be finite".to_string(),
            ));
        }
        Ok(Self {
            sin_coeffs,
            cos_coeffs,
        })
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    /// `h(theta)`.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut h = theta;
        for (k, &a) in self.sin_coeffs.iter().enumerate() {
            h += a * ((k as f64 + 1.0) * theta).sin();
        }
        for (k, &b) in self.cos_coeffs.iter().enumerate() {
            h += b * ((k as f64 + 1.0) * theta).cos();
        }
        h
    }

    /// `h'(theta)`.
    pub fn deriv(&self, theta: f64) -> f64 {
        let mut d = 1.0;
        for (k, &a) in self.sin_coeffs.iter().enumerate() {
            let k1 = k as f64 + 1.0;
            d += a * k1 * (k1 * theta).cos();
        }
        for (k, &b) in self.cos_coeffs.iter().enumerate() {
            let k1 = k as f64 + 1.0;
            d -= b * k1 * (k1 * theta).sin();
        }
        d
    }
}

/// One Jacobian sample flagged by [`Mapping::validate_regular`].
#[derive(Debug, Clone, Copy)]
pub struct JacobianSample {
    pub r: f64,
    pub theta: f64,
    pub jacobian: f64,
}

/// Outcome of sampling the Jacobian and the image modulus over a grid.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub pass: bool,
    pub min_jacobian: f64,
    pub min_jacobian_at: (f64, f64),
    pub max_modulus: f64,
    pub max_modulus_at: (f64, f64),
    /// Grid points with a non-positive Jacobian, capped at
    /// [`RegularityReport::MAX_RECORDED_VIOLATIONS`] entries.
    pub violations: Vec<JacobianSample>,
    pub samples_checked: usize,
    pub modulus_tolerance: f64,
}

impl RegularityReport {
    pub const MAX_RECORDED_VIOLATIONS: usize = 16;
}

/// An orientation-preserving homeomorphism of the closed unit disk.
#[derive(Debug, Clone)]
pub enum Mapping {
    /// `f(z) = z`.
    Identity,
    /// `f(z) = e^{i phi} z`.
    Rotation { phi: f64 },
    /// `f(z) = z |z|^{alpha - 1}`, `alpha > 0`.
    RadialPower { alpha: f64 },
    /// `f(r e^{i theta}) = r e^{i (theta + g(r))}`.
    Twist(TwistProfile),
    /// `f(r e^{i theta}) = r e^{i h(theta)}`.
    AngularReparam(AngularProfile),
    /// Stages applied left to right: `Composition([a, b]) = b(a(z))`.
    Composition(Vec<Mapping>),
    /// Grid samples with interpolated values and finite-difference jets.
    Sampled(SampledMapping),
}

impl Mapping {
    pub fn identity() -> Self {
        Mapping::Identity
    }

    pub fn rotation(phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidArgument(
                "rotation angle must be finite".to_string(),
            ));
        }
        Ok(Mapping::Rotation { phi })
    }

    pub fn radial_power(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "radial power exponent must be finite and positive, got {alpha}"
            )));
        }
        Ok(Mapping::RadialPower { alpha })
    }

    pub fn twist(coeffs: Vec<f64>) -> Result<Self> {
        Ok(Mapping::Twist(TwistProfile::new(coeffs)?))
    }

    pub fn angular_reparam(sin_coeffs: Vec<f64>, cos_coeffs: Vec<f64>) -> Result<Self> {
        Ok(Mapping::AngularReparam(AngularProfile::new(
            sin_coeffs, cos_coeffs,
        )?))
    }

    pub fn composition(stages: Vec<Mapping>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidArgument(
                "composition requires at least one stage".to_string(),
            ));
        }
        Ok(Mapping::Composition(stages))
    }

    pub fn sampled(samples: SampledMapping) -> Self {
        Mapping::Sampled(samples)
    }

    /// Short family name used in reports.
    pub fn family_name(&self) -> &'static str {
        match self {
            Mapping::Identity => "identity",
            Mapping::Rotation { .. } => "rotation",
            Mapping::RadialPower { .. } => "radial-power",
            Mapping::Twist(_) => "twist",
            Mapping::AngularReparam(_) => "angular-reparam",
            Mapping::Composition(_) => "composition",
            Mapping::Sampled(_) => "sampled",
        }
    }

    /// A label carrying the family parameters, for report rows.
    pub fn describe(&self) -> String {
        match self {
            Mapping::Identity => "identity".to_string(),
            Mapping::Rotation { phi } => format!("rotation(phi={phi})"),
            Mapping::RadialPower { alpha } => format!("radial-power(alpha={alpha})"),
            Mapping::Twist(profile) => format!("twist(coeffs={:?})", profile.coeffs()),
            Mapping::AngularReparam(profile) => format!(
                "angular-reparam(sin={:?}, cos={:?})",
                profile.sin_coeffs(),
                profile.cos_coeffs()
            ),
            Mapping::Composition(stages) => {
                let parts: Vec<String> = stages.iter().map(|s| s.describe()).collect();
                format!("composition[{}]", parts.join(" then "))
            }
            Mapping::Sampled(s) => format!(
                "sampled({}x{})",
                s.r_values().len(),
                s.theta_count()
            ),
        }
    }

    /// True when any stage is backed by grid samples rather than a closed
    /// form (finite-difference bias then dominates the error budget).
    pub fn contains_sampled(&self) -> bool {
        match self {
            Mapping::Sampled(_) => true,
            Mapping::Composition(stages) => stages.iter().any(|s| s.contains_sampled()),
            _ => false,
        }
    }

    /// The closed radial interval on which the mapping can be evaluated.
    ///
    /// Closed-form families cover the whole disk; sampled maps cover the
    /// convex hull of their radial grid.
    pub fn radial_hull(&self) -> (f64, f64) {
        match self {
            Mapping::Sampled(s) => s.radial_hull(),
            Mapping::Composition(stages) => {
                // The first stage constrains the query point; later stages
                // preserve radii on closed-form families and are validated
                // during evaluation for sampled ones.
                stages[0].radial_hull()
            }
            _ => (0.0, 1.0),
        }
    }

    /// `f(0)` when it is known exactly, `None` for sampled data whose grid
    /// does not reach the origin.
    pub fn origin_value(&self) -> Option<Complex64> {
        match self {
            Mapping::Sampled(_) => None,
            Mapping::Composition(stages) => {
                let mut z = Complex64::new(0.0, 0.0);
                for stage in stages {
                    match stage {
                        Mapping::Sampled(_) => return None,
                        _ => {
                            let p = PolarPoint::from_complex(z).ok()?;
                            z = stage.evaluate(p).ok()?;
                        }
                    }
                }
                Some(z)
            }
            // Every closed-form family sends the origin to the origin.
            _ => Some(Complex64::new(0.0, 0.0)),
        }
    }

    /// Evaluates `f` at a polar point.
    pub fn evaluate(&self, point: PolarPoint) -> Result<Complex64> {
        let (r, theta) = (point.r(), point.theta());
        match self {
            Mapping::Identity => Ok(Complex64::from_polar(r, theta)),
            Mapping::Rotation { phi } => Ok(Complex64::from_polar(r, theta + phi)),
            Mapping::RadialPower { alpha } => Ok(Complex64::from_polar(r.powf(*alpha), theta)),
            Mapping::Twist(g) => Ok(Complex64::from_polar(r, theta + g.eval(r))),
            Mapping::AngularReparam(h) => Ok(Complex64::from_polar(r, h.eval(theta))),
            Mapping::Composition(stages) => {
                let mut z = stages[0].evaluate(point)?;
                for stage in &stages[1..] {
                    z = stage.evaluate(PolarPoint::from_complex(z)?)?;
                }
                Ok(z)
            }
            Mapping::Sampled(s) => s.value_at(point),
        }
    }

    /// Value and first polar derivatives at `point`.
    ///
    /// # Errors
    ///
    /// [`Error::SingularOrigin`] at `r = 0`; sampled maps also reject points
    /// outside their grid hull.
    pub fn polar_jet(&self, point: PolarPoint) -> Result<PolarJet> {
        let (r, theta) = (point.r(), point.theta());
        if r == 0.0 {
            return Err(Error::SingularOrigin);
        }
        let i = Complex64::new(0.0, 1.0);
        match self {
            Mapping::Identity => {
                let phase = Complex64::from_polar(1.0, theta);
                Ok(PolarJet {
                    value: r * phase,
                    d_r: phase,
                    d_theta: i * r * phase,
                })
            }
            Mapping::Rotation { phi } => {
                let phase = Complex64::from_polar(1.0, theta + phi);
                Ok(PolarJet {
                    value: r * phase,
                    d_r: phase,
                    d_theta: i * r * phase,
                })
            }
            Mapping::RadialPower { alpha } => {
                let phase = Complex64::from_polar(1.0, theta);
                let ra = r.powf(*alpha);
                Ok(PolarJet {
                    value: ra * phase,
                    d_r: alpha * r.powf(alpha - 1.0) * phase,
                    d_theta: i * ra * phase,
                })
            }
            Mapping::Twist(g) => {
                let phase = Complex64::from_polar(1.0, theta + g.eval(r));
                Ok(PolarJet {
                    value: r * phase,
                    d_r: phase * Complex64::new(1.0, r * g.deriv(r)),
                    d_theta: i * r * phase,
                })
            }
            Mapping::AngularReparam(h) => {
                let phase = Complex64::from_polar(1.0, h.eval(theta));
                Ok(PolarJet {
                    value: r * phase,
                    d_r: phase,
                    d_theta: i * r * h.deriv(theta) * phase,
                })
            }
            Mapping::Composition(stages) => {
                if stages.len() == 1 {
                    return stages[0].polar_jet(point);
                }
                // Chain through the Cartesian frame: polar-to-polar chaining
                // would compound frame conversions at every stage.
                let first_jet = stages[0].polar_jet(point)?;
                let mut value = first_jet.value;
                let mut w = wirtinger_from_polar(&first_jet, point)?;
                for stage in &stages[1..] {
                    let inner = PolarPoint::from_complex(value)?;
                    if inner.r() == 0.0 {
                        return Err(Error::SingularOrigin);
                    }
                    let jet = stage.polar_jet(inner)?;
                    let sw = wirtinger_from_polar(&jet, inner)?;
                    w = WirtingerDerivs {
                        f_z: sw.f_z * w.f_z + sw.f_zbar * w.f_zbar.conj(),
                        f_zbar: sw.f_z * w.f_zbar + sw.f_zbar * w.f_z.conj(),
                    };
                    value = jet.value;
                }
                Ok(polar_from_wirtinger(value, &w, point))
            }
            Mapping::Sampled(s) => s.jet_at(point),
        }
    }

    /// Wirtinger derivatives at `point`.
    pub fn wirtinger(&self, point: PolarPoint) -> Result<WirtingerDerivs> {
        let jet = self.polar_jet(point)?;
        wirtinger_from_polar(&jet, point)
    }

    /// Jacobian determinant at `point`.
    ///
    /// # Errors
    ///
    /// [`Error::NonFinite`] if the jet degenerates, in addition to the jet
    /// errors themselves.
    pub fn jacobian(&self, point: PolarPoint) -> Result<f64> {
        let jet = self.polar_jet(point)?;
        let j = jet.jacobian(point.r());
        if !j.is_finite() {
            return Err(Error::NonFinite {
                context: "jacobian",
                r: point.r(),
                theta: point.theta(),
            });
        }
        Ok(j)
    }

    /// Samples the Jacobian and image modulus over an `n_r` x `n_theta` grid
    /// and reports whether the mapping looks like a regular homeomorphism
    /// into the closed disk.
    ///
    /// The radial grid is linear on the intersection of `[r_lo, 1]` with the
    /// mapping's hull; `r = 0` is never sampled.
    pub fn validate_regular(&self, n_r: usize, n_theta: usize, r_lo: f64) -> Result<RegularityReport> {
        if n_r < 2 || n_theta < 4 {
            return Err(Error::InvalidArgument(format!(
                "regularity grid must be at least 2 x 4, got {n_r} x {n_theta}"
            )));
        }
        if !r_lo.is_finite() || r_lo <= 0.0 || r_lo >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "regularity grid inner radius must lie in (0, 1), got {r_lo}"
            )));
        }
        let (hull_lo, hull_hi) = self.radial_hull();
        let lo = r_lo.max(hull_lo);
        let hi = hull_hi.min(1.0);
        if lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "regularity grid [{lo}, {hi}] is empty for this mapping"
            )));
        }

        let mut report = RegularityReport {
            pass: true,
            min_jacobian: f64::INFINITY,
            min_jacobian_at: (lo, 0.0),
            max_modulus: f64::NEG_INFINITY,
            max_modulus_at: (lo, 0.0),
            violations: Vec::new(),
            samples_checked: 0,
            modulus_tolerance: MODULUS_TOLERANCE,
        };
        for ir in 0..n_r {
            // the affine form can overshoot `hi` by an ulp at the last node
            let r = (lo + (hi - lo) * ir as f64 / (n_r - 1) as f64).min(hi);
            for it in 0..n_theta {
                let theta = TAU * it as f64 / n_theta as f64;
                let point = PolarPoint::new(r, theta)?;
                let jet = self.polar_jet(point)?;
                if !jet.is_finite() {
                    return Err(Error::NonFinite {
                        context: "polar jet",
                        r,
                        theta,
                    });
                }
                let j = jet.jacobian(r);
                let modulus = jet.value.norm();
                report.samples_checked += 1;
                if j < report.min_jacobian {
                    report.min_jacobian = j;
                    report.min_jacobian_at = (r, theta);
                }
                if modulus > report.max_modulus {
                    report.max_modulus = modulus;
                    report.max_modulus_at = (r, theta);
                }
                if j <= 0.0 && report.violations.len() < RegularityReport::MAX_RECORDED_VIOLATIONS {
                    report.violations.push(JacobianSample {
                        r,
                        theta,
                        jacobian: j,
                    });
                }
            }
        }
        report.pass = report.min_jacobian > 0.0
            && report.max_modulus <= 1.0 + report.modulus_tolerance;
        Ok(report)
    }
}
