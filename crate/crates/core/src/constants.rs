//! CODATA 2018 physical constants in SI units.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Identifier echoed in result records.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";

/// `2 ε₀ c`, the factor relating intensity to squared field amplitude (I = 2ε₀c|E|²).
pub fn intensity_per_field_sqr() -> f64 {
    2.0 * EPSILON_0 * SPEED_OF_LIGHT
}

pub fn angular_frequency_from_wavelength(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda
}

pub fn wavelength_from_angular_frequency(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega
}
