//! Physical parameters and validated run configuration.
//!
//! A configuration is a flat JSON object:
//!
//! ```json
//! { "m": 1, "q": 1, "E": 1, "B": 1, "L": 10, "units": "natural",
//!   "geometry": "parallel_eb", "dx": 6.283185307179586, "dt": 1 }
//! ```
//!
//! Required keys are `m`, `q`, `E` and `L`. `q` may also be the string `"e"` or
//! `"-e"`, meaning the elementary charge of the selected unit system.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constants;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    #[default]
    Natural,
    Cgs,
    Si,
}

impl std::str::FromStr for UnitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(UnitKind::Natural),
            "cgs" => Ok(UnitKind::Cgs),
            "si" => Ok(UnitKind::Si),
            other => Err(Error::config(format!("unknown unit system `{other}`"))),
        }
    }
}

/// Unit system with its action and speed scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub kind: UnitKind,
    pub hbar: f64,
    pub c: f64,
    pub h: f64,
}

impl UnitSystem {
    pub fn new(kind: UnitKind) -> Self {
        let (hbar, c) = match kind {
            UnitKind::Natural => (1.0, 1.0),
            UnitKind::Cgs => (constants::CGS_REDUCED_PLANCK, constants::CGS_SPEED_OF_LIGHT),
            UnitKind::Si => (constants::si_reduced_planck(), constants::SI_SPEED_OF_LIGHT),
        };
        UnitSystem {
            kind,
            hbar,
            c,
            h: TAU * hbar,
        }
    }

    pub fn elementary_charge(&self) -> f64 {
        match self.kind {
            UnitKind::Natural => 1.0,
            UnitKind::Cgs => constants::CGS_ELEMENTARY_CHARGE,
            UnitKind::Si => constants::SI_ELEMENTARY_CHARGE,
        }
    }

    /// The factor dividing `qB/m` in the cyclotron frequency: `c` in Gaussian
    /// units, 1 in SI and natural units.
    pub fn magnetic_c(&self) -> f64 {
        match self.kind {
            UnitKind::Cgs => self.c,
            UnitKind::Natural | UnitKind::Si => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    pub mass: f64,
    pub charge: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    /// Constant electric field along `x`; any magnetic field is ignored.
    #[default]
    #[serde(rename = "electric_1d")]
    Electric1d,
    /// Electric and magnetic fields both along `x`, vector potential `B(0,0,y)`.
    ParallelEb,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub electric: f64,
    pub magnetic: f64,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EigenSign {
    Plus,
    #[default]
    Minus,
}

impl EigenSign {
    pub fn factor(self) -> f64 {
        match self {
            EigenSign::Plus => 1.0,
            EigenSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            EigenSign::Plus => EigenSign::Minus,
            EigenSign::Minus => EigenSign::Plus,
        }
    }
}

/// Displacements generated by the conserved operators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DisplacementParams {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub dt: f64,
    pub eigen_sign: EigenSign,
}

pub const DEFAULT_LADDER_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub units: UnitSystem,
    pub particle: ParticleSpec,
    pub fields: FieldConfig,
    pub box_length: f64,
    pub displacements: DisplacementParams,
    pub ladder_depth: usize,
    /// Use the `1/L` prefactor for the 1D solution instead of the unit-norm
    /// `1/sqrt(L)`. Comparison output only.
    pub inverse_length_normalization: bool,
    /// Operator-text overrides for the Hamiltonians used by the symbolic
    /// conservation checks.
    pub hamiltonian_1d: Option<String>,
    pub hamiltonian_parallel: Option<String>,
}

impl SystemConfig {
    /// Natural units with `m = q = E = 1`, `B = 1`, `L = 10`.
    pub fn natural() -> Self {
        SystemConfig {
            units: UnitSystem::new(UnitKind::Natural),
            particle: ParticleSpec { mass: 1.0, charge: 1.0 },
            fields: FieldConfig {
                electric: 1.0,
                magnetic: 1.0,
                geometry: Geometry::Electric1d,
            },
            box_length: 10.0,
            displacements: DisplacementParams::default(),
            ladder_depth: DEFAULT_LADDER_DEPTH,
            inverse_length_normalization: false,
            hamiltonian_1d: None,
            hamiltonian_parallel: None,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }

    pub fn mass(&self) -> f64 {
        self.particle.mass
    }

    pub fn charge(&self) -> f64 {
        self.particle.charge
    }

    pub fn electric(&self) -> f64 {
        self.fields.electric
    }

    /// Force `qE` on the particle.
    pub fn force(&self) -> f64 {
        self.particle.charge * self.fields.electric
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Self {
        self.fields.geometry = geometry;
        self
    }

    pub fn with_electric(mut self, e: f64) -> Self {
        self.fields.electric = e;
        self
    }

    pub fn with_magnetic(mut self, b: f64) -> Self {
        self.fields.magnetic = b;
        self
    }

    pub fn with_box_length(mut self, l: f64) -> Self {
        self.box_length = l;
        self
    }

    pub fn with_displacements(mut self, d: DisplacementParams) -> Self {
        self.displacements = d;
        self
    }

    pub fn with_units(mut self, kind: UnitKind) -> Self {
        self.units = UnitSystem::new(kind);
        self
    }

    pub fn require_geometry(&self, geometry: Geometry) -> Result<()> {
        if self.fields.geometry == geometry {
            Ok(())
        } else {
            Err(Error::geometry(format!(
                "operation requires geometry {geometry:?}, configuration has {:?}",
                self.fields.geometry
            )))
        }
    }

    /// Cyclotron frequency `qB/(mc)`; always recomputed from the fields.
    pub fn cyclotron_frequency(&self) -> Result<f64> {
        if self.fields.geometry != Geometry::ParallelEb {
            return Err(Error::geometry("no magnetic field in this geometry"));
        }
        Ok(self.particle.charge * self.fields.magnetic / (self.particle.mass * self.units.magnetic_c()))
    }

    /// Oscillator length `sqrt(hbar / (m wc))`.
    pub fn magnetic_length(&self) -> Result<f64> {
        let wc = self.cyclotron_frequency()?;
        if wc <= 0.0 {
            return Err(Error::domain("oscillator length needs a positive cyclotron frequency"));
        }
        Ok((self.hbar() / (self.mass() * wc)).sqrt())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        build_config(&value)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// Serializes back to the flat document accepted by [`build_config`].
    pub fn to_document(&self) -> Value {
        let raw = RawConfig {
            m: Some(self.particle.mass),
            q: Some(ChargeSpec::Value(self.particle.charge)),
            e: Some(self.fields.electric),
            b: Some(self.fields.magnetic),
            l: Some(self.box_length),
            units: Some(self.units.kind),
            geometry: Some(self.fields.geometry),
            dx: Some(self.displacements.dx),
            dy: Some(self.displacements.dy),
            dz: Some(self.displacements.dz),
            dt: Some(self.displacements.dt),
            eigen_sign: Some(self.displacements.eigen_sign),
            ladder_depth: Some(self.ladder_depth),
            inverse_length_normalization: Some(self.inverse_length_normalization),
            hamiltonian_1d: self.hamiltonian_1d.clone(),
            hamiltonian_parallel: self.hamiltonian_parallel.clone(),
        };
        serde_json::to_value(raw).expect("config serializes")
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self::natural()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ChargeSpec {
    Value(f64),
    Symbol(String),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<ChargeSpec>,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    e: Option<f64>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    units: Option<UnitKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<Geometry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigen_sign: Option<EigenSign>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ladder_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse_length_normalization: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hamiltonian_1d: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hamiltonian_parallel: Option<String>,
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(format!("missing key `{key}`")))
}

fn finite(value: f64, key: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::config(format!("`{key}` must be finite")))
    }
}

/// Validates a raw key-value document into a [`SystemConfig`].
pub fn build_config(raw: &Value) -> Result<SystemConfig> {
    let raw: RawConfig = serde_json::from_value(raw.clone()).map_err(|e| Error::config(e.to_string()))?;

    let units = UnitSystem::new(raw.units.unwrap_or_default());

    let mass = finite(required(raw.m, "m")?, "m")?;
    if mass <= 0.0 {
        return Err(Error::config("mass must be positive"));
    }

    let charge = match required(raw.q, "q")? {
        ChargeSpec::Value(v) => finite(v, "q")?,
        ChargeSpec::Symbol(s) => match s.trim() {
            "e" | "+e" => units.elementary_charge(),
            "-e" => -units.elementary_charge(),
            other => return Err(Error::config(format!("unknown charge symbol `{other}`"))),
        },
    };
    if charge == 0.0 {
        return Err(Error::config("charge must be nonzero"));
    }

    let electric = finite(required(raw.e, "E")?, "E")?;
    let magnetic = finite(raw.b.unwrap_or(0.0), "B")?;
    if magnetic < 0.0 {
        return Err(Error::config("magnetic intensity must be non-negative"));
    }

    let box_length = finite(required(raw.l, "L")?, "L")?;
    if box_length <= 0.0 {
        return Err(Error::config("box length must be positive"));
    }

    let displacements = DisplacementParams {
        dx: finite(raw.dx.unwrap_or(0.0), "dx")?,
        dy: finite(raw.dy.unwrap_or(0.0), "dy")?,
        dz: finite(raw.dz.unwrap_or(0.0), "dz")?,
        dt: finite(raw.dt.unwrap_or(0.0), "dt")?,
        eigen_sign: raw.eigen_sign.unwrap_or_default(),
    };

    let ladder_depth = raw.ladder_depth.unwrap_or(DEFAULT_LADDER_DEPTH);
    if ladder_depth > 64 {
        return Err(Error::config("ladder depth must not exceed 64"));
    }

    Ok(SystemConfig {
        units,
        particle: ParticleSpec { mass, charge },
        fields: FieldConfig {
            electric,
            magnetic,
            geometry: raw.geometry.unwrap_or_default(),
        },
        box_length,
        displacements,
        ladder_depth,
        inverse_length_normalization: raw.inverse_length_normalization.unwrap_or(false),
        hamiltonian_1d: raw.hamiltonian_1d,
        hamiltonian_parallel: raw.hamiltonian_parallel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn natural_defaults() {
        let cfg = build_config(&json!({"m": 1, "q": 1, "E": 1, "L": 10, "units": "natural"})).unwrap();
        assert_eq!(cfg.hbar(), 1.0);
        assert_eq!(cfg.units.c, 1.0);
        assert_eq!(cfg.units.kind, UnitKind::Natural);
        assert_eq!(cfg.displacements.eigen_sign, EigenSign::Minus);
        assert_eq!(cfg.ladder_depth, DEFAULT_LADDER_DEPTH);
    }

    #[test]
    fn negative_mass_is_rejected() {
        let err = build_config(&json!({"m": -1, "q": 1, "E": 1, "L": 10})).unwrap_err();
        assert!(err.to_string().contains("mass must be positive"), "{err}");
    }

    #[test]
    fn missing_and_invalid_keys_name_the_field() {
        let err = build_config(&json!({"q": 1, "E": 1, "L": 10})).unwrap_err();
        assert!(err.to_string().contains("`m`"), "{err}");
        let err = build_config(&json!({"m": 1, "q": 0, "E": 1, "L": 10})).unwrap_err();
        assert!(err.to_string().contains("charge"), "{err}");
        let err = build_config(&json!({"m": 1, "q": 1, "E": 1, "L": 0})).unwrap_err();
        assert!(err.to_string().contains("box length"), "{err}");
        let err = build_config(&json!({"m": 1, "q": 1, "E": 1, "L": 1, "zz": 3})).unwrap_err();
        assert!(err.to_string().contains("zz"), "{err}");
    }

    #[test]
    fn si_charge_symbol_reads_constants_table() {
        let cfg = build_config(&json!({
            "m": constants::SI_ELECTRON_MASS, "q": "e", "E": 1, "L": 1e-6, "units": "si"
        }))
        .unwrap();
        assert_eq!(cfg.charge(), constants::SI_ELEMENTARY_CHARGE);
        assert_eq!(cfg.hbar(), constants::SI_PLANCK / TAU);
        assert_eq!(cfg.units.h, TAU * cfg.hbar());
    }

    #[test]
    fn cyclotron_frequency_cases() {
        let base = SystemConfig::natural().with_geometry(Geometry::ParallelEb);
        assert_eq!(base.clone().cyclotron_frequency().unwrap(), 1.0);
        assert_eq!(base.clone().with_magnetic(0.0).cyclotron_frequency().unwrap(), 0.0);
        let mut cfg = base.with_magnetic(3.0);
        cfg.particle = ParticleSpec { mass: 1.5, charge: 2.0 };
        assert_eq!(cfg.cyclotron_frequency().unwrap(), 4.0);

        let err = SystemConfig::natural().cyclotron_frequency().unwrap_err();
        assert!(err.to_string().contains("no magnetic field"));
    }

    #[test]
    fn cgs_cyclotron_divides_by_c() {
        let cfg = SystemConfig::natural()
            .with_units(UnitKind::Cgs)
            .with_geometry(Geometry::ParallelEb)
            .with_magnetic(2.0);
        let wc = cfg.cyclotron_frequency().unwrap();
        assert_eq!(wc, 2.0 / constants::CGS_SPEED_OF_LIGHT);
    }

    fn ulps(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn planck_ratio_for_every_unit_system() {
        for kind in [UnitKind::Natural, UnitKind::Cgs, UnitKind::Si] {
            let u = UnitSystem::new(kind);
            assert!(ulps(u.h, TAU * u.hbar) <= 4);
            assert!(ulps(u.h / u.hbar, TAU) <= 4, "{kind:?}");
        }
    }

    proptest! {
        #[test]
        fn document_round_trip(
            m in 1e-3f64..1e3,
            q in prop_oneof![-10.0f64..-1e-3, 1e-3f64..10.0],
            e in -5.0f64..5.0,
            b in 0.0f64..5.0,
            l in 1e-2f64..1e2,
            dx in -10.0f64..10.0,
            dt in -10.0f64..10.0,
            plus in any::<bool>(),
            parallel in any::<bool>(),
        ) {
            let doc = json!({
                "m": m, "q": q, "E": e, "B": b, "L": l, "dx": dx, "dt": dt,
                "eigen_sign": if plus { "plus" } else { "minus" },
                "geometry": if parallel { "parallel_eb" } else { "electric_1d" },
            });
            let cfg = build_config(&doc).unwrap();
            let again = build_config(&cfg.to_document()).unwrap();
            prop_assert_eq!(cfg, again);
        }
    }
}
