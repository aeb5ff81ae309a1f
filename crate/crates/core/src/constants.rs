//! Physical constants (SI) used by the physical-unit entry points.

/// Planck constant, J·s (exact by SI definition).
pub const PLANCK_H: f64 = 6.626_070_15e-34;

/// Electron mass, kg (CODATA 2018).
pub const ELECTRON_MASS_KG: f64 = 9.109_383_7015e-31;

/// Proton mass, kg (CODATA 2018).
pub const PROTON_MASS_KG: f64 = 1.672_621_923_69e-27;

/// Neutron mass, kg (CODATA 2018).
pub const NEUTRON_MASS_KG: f64 = 1.674_927_498_04e-27;

/// Named particle presets understood by the command line.
pub fn particle_mass_kg(name: &str) -> Option<f64> {
    match name {
        "electron" => Some(ELECTRON_MASS_KG),
        "proton" => Some(PROTON_MASS_KG),
        "neutron" => Some(NEUTRON_MASS_KG),
        _ => None,
    }
}
