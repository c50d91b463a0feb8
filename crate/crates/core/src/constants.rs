//! Physical constants (SI). Unit conversion happens at the edges of the
//! library; the evolution code itself works in dimensionless units.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// One nanokelvin in kelvin.
pub const NANOKELVIN: f64 = 1e-9;

/// Inverse temperature 1/(k_B T) in 1/J.
pub fn beta_from_temperature(t_kelvin: f64) -> f64 {
    1.0 / (K_BOLTZMANN * t_kelvin)
}
