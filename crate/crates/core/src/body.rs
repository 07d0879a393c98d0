//! Segment, body, and joint-state types for the sagittal two-link leg.
//!
//! Angles follow the model convention: the hip angle is measured from the
//! downward vertical with flexion positive, the knee angle is flexion of the
//! shank relative to the thigh axis, and the shank's absolute angle is their
//! sum. The all-zero pose is the leg hanging straight down.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::Pair;
use crate::scalar::Scalar;

/// Average density of the human body, kg/m³.
pub const HUMAN_BODY_DENSITY: f64 = 1041.0;

/// Inertial and geometric parameters of one segment.
///
/// `first_moment_axial` and `first_moment_transverse` are the mass times the
/// center-of-mass offset along and across the segment axis (kg·m), and
/// `moment` is the moment of inertia about the proximal joint axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentParams<T> {
    pub length: T,
    pub radius: T,
    pub mass: T,
    pub moment: T,
    pub first_moment_axial: T,
    pub first_moment_transverse: T,
}

impl<T: Scalar> SegmentParams<T> {
    /// Builds a segment from anthropometric fractions: center of mass at
    /// `com_fraction · length` on the axis and radius of gyration about the
    /// proximal joint of `gyration_fraction · length`.
    pub fn from_fractions(
        length: T,
        radius: T,
        mass: T,
        com_fraction: T,
        gyration_fraction: T,
    ) -> Self {
        let k = gyration_fraction * length;
        Self {
            length,
            radius,
            mass,
            moment: mass * k * k,
            first_moment_axial: mass * com_fraction * length,
            first_moment_transverse: T::zero(),
        }
    }

    /// A segment of the given length and radius that carries no mass.
    /// Useful as an ideal (weightless) robot link; it does not pass
    /// [`SegmentParams::validate`].
    pub fn massless(length: T, radius: T) -> Self {
        Self {
            length,
            radius,
            mass: T::zero(),
            moment: T::zero(),
            first_moment_axial: T::zero(),
            first_moment_transverse: T::zero(),
        }
    }

    /// Uniform slender rod with the center of mass at mid-length.
    pub fn uniform_rod(length: T, radius: T, mass: T) -> Self {
        Self {
            length,
            radius,
            mass,
            moment: mass * length * length / T::lit(3.0),
            first_moment_axial: mass * length / T::lit(2.0),
            first_moment_transverse: T::zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.length,
            self.radius,
            self.mass,
            self.moment,
            self.first_moment_axial,
            self.first_moment_transverse,
        ]
        .iter()
        .all(|v| v.is_finite())
    }

    /// Strict check: positive geometry and mass, and a joint moment no smaller
    /// than the point-mass moment of the center of mass.
    pub fn validate(&self, which: &'static str) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite(which));
        }
        for (name, v) in [
            ("length", self.length),
            ("radius", self.radius),
            ("mass", self.mass),
            ("moment", self.moment),
        ] {
            if v <= T::zero() {
                return Err(Error::invalid(which, format!("{name} must be > 0, got {v}")));
            }
        }
        let x = self.first_moment_axial;
        let y = self.first_moment_transverse;
        // Small relative slack so that J = m·c² (point mass) is accepted.
        let lhs = self.moment * self.mass;
        let rhs = x * x + y * y;
        if lhs < rhs * (T::one() - T::lit(1e-12)) {
            return Err(Error::invalid(
                which,
                format!("J·m = {lhs} is smaller than X² + Y² = {rhs}"),
            ));
        }
        Ok(())
    }

    /// Non-strict check used for robot links: finite, non-negative mass terms.
    pub fn validate_relaxed(&self, which: &'static str) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite(which));
        }
        if self.length <= T::zero() {
            return Err(Error::invalid(which, "length must be > 0"));
        }
        if self.mass < T::zero() || self.moment < T::zero() || self.radius < T::zero() {
            return Err(Error::invalid(which, "mass, moment and radius must be >= 0"));
        }
        Ok(())
    }

    /// Scales every inertial quantity by `factor`, leaving geometry untouched.
    pub fn scale_inertia(&self, factor: T) -> Self {
        Self {
            mass: self.mass * factor,
            moment: self.moment * factor,
            first_moment_axial: self.first_moment_axial * factor,
            first_moment_transverse: self.first_moment_transverse * factor,
            ..*self
        }
    }
}

/// Thigh and shank plus the body density used for buoyancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct BodyModel<T> {
    pub thigh: SegmentParams<T>,
    pub shank: SegmentParams<T>,
    #[serde(default = "default_rho_body")]
    pub rho_body: T,
}

fn default_rho_body<T: Scalar>() -> T {
    T::lit(HUMAN_BODY_DENSITY)
}

impl<T: Scalar> BodyModel<T> {
    /// Anthropometric leg of a 70 kg, 1.75 m adult.
    ///
    /// Thigh 0.40 m × 0.10 m radius, 7.0 kg; shank 0.43 m × 0.06 m, 3.25 kg.
    /// Centers of mass at 43% of segment length from the proximal joint and
    /// radii of gyration about the proximal joint of 0.540 L (thigh) and
    /// 0.528 L (shank).
    pub fn anthropometric() -> Self {
        let l = T::lit;
        Self {
            thigh: SegmentParams::from_fractions(l(0.40), l(0.10), l(7.0), l(0.43), l(0.540)),
            shank: SegmentParams::from_fractions(l(0.43), l(0.06), l(3.25), l(0.43), l(0.528)),
            rho_body: l(HUMAN_BODY_DENSITY),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.thigh.validate("thigh")?;
        self.shank.validate("shank")?;
        self.validate_density()
    }

    pub(crate) fn validate_density(&self) -> Result<()> {
        if !self.rho_body.is_finite() {
            return Err(Error::NonFinite("rho_body"));
        }
        if self.rho_body <= T::zero() {
            return Err(Error::invalid("rho_body", format!("must be > 0, got {}", self.rho_body)));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.thigh.is_finite() && self.shank.is_finite() && self.rho_body.is_finite()
    }

    pub fn scale_inertia(&self, factor: T) -> Self {
        Self {
            thigh: self.thigh.scale_inertia(factor),
            shank: self.shank.scale_inertia(factor),
            rho_body: self.rho_body,
        }
    }
}

impl<T: Scalar> Default for BodyModel<T> {
    fn default() -> Self {
        Self::anthropometric()
    }
}

/// Closed angle intervals per joint, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointLimits {
    pub hip: (f64, f64),
    pub knee: (f64, f64),
}

impl Default for JointLimits {
    fn default() -> Self {
        Self {
            hip: (-0.52, 2.09),
            knee: (0.0, 2.44),
        }
    }
}

impl JointLimits {
    pub fn check<T: Scalar>(&self, theta: Pair<T>) -> Result<()> {
        for (joint, value, (lo, hi)) in [
            ("hip", theta.hip.to_f64_lossy(), self.hip),
            ("knee", theta.knee.to_f64_lossy(), self.knee),
        ] {
            if !(lo..=hi).contains(&value) {
                return Err(Error::JointLimit { joint, value, lo, hi });
            }
        }
        Ok(())
    }

    pub fn contains_deg(&self, joint: &'static str, deg: f64) -> bool {
        let (lo, hi) = if joint == "hip" { self.hip } else { self.knee };
        (lo..=hi).contains(&deg.to_radians())
    }
}

/// Joint angles, rates and accelerations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointState<T> {
    pub theta: Pair<T>,
    pub theta_dot: Pair<T>,
    pub theta_ddot: Pair<T>,
}

impl<T: Scalar> JointState<T> {
    pub fn new(theta: Pair<T>, theta_dot: Pair<T>, theta_ddot: Pair<T>) -> Self {
        Self {
            theta,
            theta_dot,
            theta_ddot,
        }
    }

    /// Static pose: zero rates and accelerations.
    pub fn at_rest(theta: Pair<T>) -> Self {
        Self::new(theta, Pair::zero(), Pair::zero())
    }

    /// Validated constructor.
    pub fn checked(
        theta: Pair<T>,
        theta_dot: Pair<T>,
        theta_ddot: Pair<T>,
        limits: &JointLimits,
    ) -> Result<Self> {
        let s = Self::new(theta, theta_dot, theta_ddot);
        s.validate(limits)?;
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.theta_dot.is_finite() && self.theta_ddot.is_finite()
    }

    pub fn validate(&self, limits: &JointLimits) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite("joint state"));
        }
        limits.check(self.theta)
    }

    /// Absolute shank angle θ₁ + θ₂.
    pub fn theta12(&self) -> T {
        self.theta.hip + self.theta.knee
    }

    pub fn theta12_dot(&self) -> T {
        self.theta_dot.hip + self.theta_dot.knee
    }
}
