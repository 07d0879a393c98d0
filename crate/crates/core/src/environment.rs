//! Environment descriptions, Reynolds number and the smooth-cylinder drag
//! coefficient model, and the built-in catalog.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default flow velocity for the Reynolds number, m/s.
pub const DEFAULT_REF_VELOCITY: f64 = 0.55;
/// Default characteristic length (thigh diameter), m.
pub const DEFAULT_CHAR_LENGTH: f64 = 0.2;
/// Reynolds number below which the drag coefficient model is evaluated at the floor.
pub const DEFAULT_RE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSpec<T> {
    pub name: String,
    /// Gravitational acceleration, m/s².
    pub g: T,
    /// Fluid density, kg/m³. Zero is vacuum.
    pub rho_fluid: T,
    /// Dynamic viscosity, Pa·s.
    pub mu_fluid: T,
    pub ref_velocity: T,
    pub char_length: T,
}

/// Reynolds number and drag coefficient of an environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidConstants<T> {
    pub reynolds: T,
    pub drag_coeff: T,
}

impl<T: Scalar> EnvironmentSpec<T> {
    pub fn new(name: impl Into<String>, g: f64, rho_fluid: f64, mu_fluid: f64) -> Self {
        Self {
            name: name.into(),
            g: T::lit(g),
            rho_fluid: T::lit(rho_fluid),
            mu_fluid: T::lit(mu_fluid),
            ref_velocity: T::lit(DEFAULT_REF_VELOCITY),
            char_length: T::lit(DEFAULT_CHAR_LENGTH),
        }
    }

    /// No gravity and no fluid.
    pub fn vacuum() -> Self {
        Self::new("vacuum", 0.0, 0.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g", self.g),
            ("rho_fluid", self.rho_fluid),
            ("mu_fluid", self.mu_fluid),
            ("ref_velocity", self.ref_velocity),
            ("char_length", self.char_length),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::invalid("environment", format!("{name} must be finite")));
            }
        }
        let bad = |reason: String| Err(Error::invalid("environment", format!("{}: {reason}", self.name)));
        if self.name.trim().is_empty() {
            return bad("name must be non-empty".into());
        }
        if self.g < T::zero() {
            return bad(format!("g must be >= 0, got {}", self.g));
        }
        if self.rho_fluid < T::zero() {
            return bad(format!("rho_fluid must be >= 0, got {}", self.rho_fluid));
        }
        if self.rho_fluid > T::zero() && self.mu_fluid <= T::zero() {
            return bad(format!("mu_fluid must be > 0 in a fluid, got {}", self.mu_fluid));
        }
        if self.ref_velocity < T::zero() {
            return bad(format!("ref_velocity must be >= 0, got {}", self.ref_velocity));
        }
        if self.char_length <= T::zero() {
            return bad(format!("char_length must be > 0, got {}", self.char_length));
        }
        Ok(())
    }

    /// Derives the Reynolds number and drag coefficient once from the
    /// reference velocity and length. Vacuum has `Re = 0`.
    pub fn fluid_constants(&self) -> Result<FluidConstants<T>> {
        self.fluid_constants_with_floor(T::lit(DEFAULT_RE_FLOOR))
    }

    pub fn fluid_constants_with_floor(&self, re_floor: T) -> Result<FluidConstants<T>> {
        self.validate()?;
        let reynolds = if self.rho_fluid == T::zero() {
            T::zero()
        } else {
            reynolds_number(self)?
        };
        Ok(FluidConstants {
            reynolds,
            drag_coeff: drag_coefficient_with_floor(reynolds, re_floor)?,
        })
    }

    /// Buoyancy scale ρ_F / ρ_H.
    pub fn density_ratio(&self, rho_body: T) -> T {
        self.rho_fluid / rho_body
    }
}

/// `Re = ρ_F · l · v / μ_F`.
pub fn reynolds_number<T: Scalar>(env: &EnvironmentSpec<T>) -> Result<T> {
    if !(env.mu_fluid > T::zero()) {
        return Err(Error::invalid(
            "mu_fluid",
            format!("must be > 0 to form a Reynolds number, got {}", env.mu_fluid),
        ));
    }
    if !(env.rho_fluid.is_finite() && env.char_length.is_finite() && env.ref_velocity.is_finite()) {
        return Err(Error::NonFinite("environment"));
    }
    Ok(env.rho_fluid * env.char_length * env.ref_velocity / env.mu_fluid)
}

/// Smooth-cylinder drag coefficient as a function of Reynolds number,
///
/// `C_D = 1.18 + 6.8/Re^0.89 + 1.96/Re^0.5 − 0.0004·Re/(1 + 3.64e-7·Re²)`,
///
/// evaluated at `max(Re, 1e-3)` so that still fluid stays finite.
pub fn drag_coefficient<T: Scalar>(reynolds: T) -> Result<T> {
    drag_coefficient_with_floor(reynolds, T::lit(DEFAULT_RE_FLOOR))
}

pub fn drag_coefficient_with_floor<T: Scalar>(reynolds: T, re_floor: T) -> Result<T> {
    if !reynolds.is_finite() {
        return Err(Error::NonFinite("Reynolds number"));
    }
    if reynolds < T::zero() {
        return Err(Error::invalid("Reynolds number", format!("must be >= 0, got {reynolds}")));
    }
    if !(re_floor > T::zero()) {
        return Err(Error::invalid("Reynolds floor", "must be > 0"));
    }
    let l = T::lit;
    let re = reynolds.max(re_floor);
    Ok(l(1.18) + l(6.8) / re.powf(l(0.89)) + l(1.96) / re.sqrt()
        - l(0.0004) * re / (T::one() + l(3.64e-7) * re * re))
}

/// The eight built-in environments: four fluids at Earth gravity, Earth air,
/// and air at the gravities of the Moon, Mars and Jupiter.
pub fn builtin_environments<T: Scalar>() -> Vec<EnvironmentSpec<T>> {
    const AIR_RHO: f64 = 1.20;
    // Table value; physical air at 20 °C is closer to 1.8e-5.
    const AIR_MU: f64 = 1.8e-4;
    vec![
        EnvironmentSpec::new("water", 9.81, 998.2, 1.0e-3),
        EnvironmentSpec::new("olive_oil", 9.81, 800.0, 1.0e-1),
        EnvironmentSpec::new("honey", 9.81, 1420.0, 5.0),
        EnvironmentSpec::new("peanut_butter", 9.81, 1283.0, 250.0),
        EnvironmentSpec::new("earth", 9.81, AIR_RHO, AIR_MU),
        EnvironmentSpec::new("moon", 1.63, AIR_RHO, AIR_MU),
        EnvironmentSpec::new("mars", 3.71, AIR_RHO, AIR_MU),
        EnvironmentSpec::new("jupiter", 24.5, AIR_RHO, AIR_MU),
    ]
}

/// Looks up a built-in environment by name, case-insensitively; spaces and
/// hyphens are treated as underscores.
pub fn builtin_by_name<T: Scalar>(name: &str) -> Option<EnvironmentSpec<T>> {
    let key = name.trim().to_ascii_lowercase().replace([' ', '-'], "_");
    builtin_environments().into_iter().find(|e| e.name == key)
}

pub fn builtin_names() -> Vec<String> {
    builtin_environments::<f64>().into_iter().map(|e| e.name).collect()
}

/// Human-readable label, e.g. `peanut_butter` → `Peanut butter`.
pub fn display_label(name: &str) -> String {
    let spaced = name.replace('_', " ");
    let mut chars = spaced.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Whether the environment is one of the fluids (as opposed to air).
pub fn is_fluid<T: Scalar>(env: &EnvironmentSpec<T>) -> bool {
    env.rho_fluid > T::lit(100.0)
}

/// One row of the exported catalog document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentRecord {
    pub name: String,
    pub g: f64,
    pub rho_fluid: f64,
    pub mu_fluid: f64,
    #[serde(default = "default_ref_velocity")]
    pub ref_velocity: f64,
    #[serde(default = "default_char_length")]
    pub char_length: f64,
    /// Derived; ignored on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reynolds: Option<f64>,
    /// Derived; ignored on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drag_coeff: Option<f64>,
}

fn default_ref_velocity() -> f64 {
    DEFAULT_REF_VELOCITY
}

fn default_char_length() -> f64 {
    DEFAULT_CHAR_LENGTH
}

impl EnvironmentRecord {
    pub fn from_spec(env: &EnvironmentSpec<f64>) -> Result<Self> {
        let fc = env.fluid_constants()?;
        Ok(Self {
            name: env.name.clone(),
            g: env.g,
            rho_fluid: env.rho_fluid,
            mu_fluid: env.mu_fluid,
            ref_velocity: env.ref_velocity,
            char_length: env.char_length,
            reynolds: Some(fc.reynolds),
            drag_coeff: Some(fc.drag_coeff),
        })
    }

    pub fn into_spec(self) -> Result<EnvironmentSpec<f64>> {
        let spec = EnvironmentSpec {
            name: self.name,
            g: self.g,
            rho_fluid: self.rho_fluid,
            mu_fluid: self.mu_fluid,
            ref_velocity: self.ref_velocity,
            char_length: self.char_length,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Serializes environments as the catalog JSON array, derived fields included.
pub fn catalog_to_json(envs: &[EnvironmentSpec<f64>]) -> Result<String> {
    let records = envs
        .iter()
        .map(EnvironmentRecord::from_spec)
        .collect::<Result<Vec<_>>>()?;
    Ok(serde_json::to_string_pretty(&records)?)
}

/// Parses a catalog JSON array (or a single object) and validates each entry.
pub fn catalog_from_json(text: &str) -> Result<Vec<EnvironmentSpec<f64>>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let records: Vec<EnvironmentRecord> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    records.into_iter().map(EnvironmentRecord::into_spec).collect()
}
