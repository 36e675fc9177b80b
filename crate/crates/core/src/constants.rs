//! Bundled physical constants.
//!
//! SI values are the exact defining constants of the 2019 SI redefinition
//! (CODATA 2018). CGS values are derived from them. Call sites must read
//! constants from here and never hardcode them.

use std::f64::consts::TAU;

/// Planck constant, J s. Exact by definition (SI 2019).
pub const SI_PLANCK: f64 = 6.626_070_15e-34;

/// Elementary charge, C. Exact by definition (SI 2019).
pub const SI_ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Speed of light in vacuum, m/s. Exact by definition.
pub const SI_SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Electron mass, kg. CODATA 2018.
pub const SI_ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Speed of light, cm/s.
pub const CGS_SPEED_OF_LIGHT: f64 = 2.997_924_58e10;

/// Reduced Planck constant, erg s (1 J = 1e7 erg).
pub const CGS_REDUCED_PLANCK: f64 = SI_PLANCK * 1.0e7 / TAU;

/// Elementary charge, statC (e[C] * c[cm/s] / 10).
pub const CGS_ELEMENTARY_CHARGE: f64 = SI_ELEMENTARY_CHARGE * CGS_SPEED_OF_LIGHT / 10.0;

/// Tabulated von Klitzing constant h/e^2 in ohm, CODATA 2018 (exact, truncated
/// to the digits printed in the table).
pub const VON_KLITZING_TABULATED: f64 = 25_812.807_45;

/// Absolute precision of [`VON_KLITZING_TABULATED`]. The table truncates rather
/// than rounds, so this is one unit in the last printed digit.
pub const VON_KLITZING_TABULATED_PRECISION: f64 = 1e-5;

/// Reduced Planck constant in SI, derived from the exact Planck constant.
pub fn si_reduced_planck() -> f64 {
    SI_PLANCK / TAU
}
