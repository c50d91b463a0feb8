//! Hamiltonian spectra, order-parameter time evolution, Husimi Q-function
//! fields, and collapse/revival extraction.
//!
//! Everything internal runs in dimensionless units: energies in units of the
//! interaction scale u-tilde, time in units of hbar/u-tilde. SI conversion
//! lives in [`derive_params`] and in the CLI layer.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::kahan::{kahan_sum, KahanC64};
use crate::states::{FockVector, NumberEnsemble};

/// Normalized magnitude at which a collapse time is read off. The Gaussian
/// short-time envelope then gives exactly t_c = hbar/(sqrt(N) u).
pub fn collapse_threshold() -> f64 {
    (-0.5f64).exp()
}

const REVIVAL_LEVEL: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("non-physical parameter: {field} must be positive and finite")]
    NonPhysical { field: &'static str },
    #[error("spectrum covers {available} levels but the state needs {needed}")]
    TruncationMismatch { needed: usize, available: usize },
    #[error("Q-function grid misses {mass_error:.3e} of the state's mass")]
    GridTooSmall { mass_error: f64 },
    #[error("magnitude never crosses the collapse threshold on the grid")]
    NoCollapse,
}

/// SI inputs plus the derived couplings; the unit-conversion anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// s-wave scattering length, m.
    pub a_s: f64,
    /// Atomic mass, kg.
    pub mass: f64,
    /// Trap length sqrt(hbar/(M omega_tr)), m.
    pub a_ho: f64,
    /// Trap angular frequency, 1/s.
    pub omega_tr: f64,
    /// Condensate density, 1/m^3.
    pub rho: f64,
    /// Atom number.
    pub n_atoms: f64,
    /// Quantization volume N/rho, m^3.
    pub volume: f64,
    /// Interaction constant 4 pi a_s hbar^2 / M, J m^3.
    pub u0: f64,
    /// u0 / V, J.
    pub u_tilde: f64,
    /// rho a_ho^2 a_s, dimensionless.
    pub n_eff: f64,
    /// Chemical potential, J. Defaults to N u_tilde, the mean-field value
    /// that pins the coherent-state amplitude at sqrt(N).
    pub mu: f64,
}

impl PhysicalParams {
    /// hbar / u_tilde: one dimensionless time unit, in seconds.
    pub fn time_unit_seconds(&self) -> f64 {
        HBAR / self.u_tilde
    }

    /// u_tilde / (k_B T): inverse temperature in units of 1/u_tilde.
    pub fn beta_utilde(&self, t_kelvin: f64) -> f64 {
        self.u_tilde / (crate::constants::K_BOLTZMANN * t_kelvin)
    }

    pub fn mu_over_utilde(&self) -> f64 {
        self.mu / self.u_tilde
    }
}

/// Derive the coupling constants from SI inputs.
pub fn derive_params(
    a_s: f64,
    mass: f64,
    omega_tr: f64,
    rho: f64,
    n_atoms: f64,
) -> Result<PhysicalParams, DynamicsError> {
    let check = |v: f64, field: &'static str| {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(DynamicsError::NonPhysical { field })
        }
    };
    let a_s = check(a_s, "a_s")?;
    let mass = check(mass, "mass")?;
    let omega_tr = check(omega_tr, "omega_tr")?;
    let rho = check(rho, "rho")?;
    let n_atoms = check(n_atoms, "n_atoms")?;

    let a_ho = (HBAR / (mass * omega_tr)).sqrt();
    let volume = n_atoms / rho;
    let u0 = 4.0 * PI * a_s * HBAR * HBAR / mass;
    let u_tilde = u0 / volume;
    let n_eff = rho * a_ho * a_ho * a_s;
    let mu = n_atoms * u_tilde;
    Ok(PhysicalParams {
        a_s,
        mass,
        a_ho,
        omega_tr,
        rho,
        n_atoms,
        volume,
        u0,
        u_tilde,
        n_eff,
        mu,
    })
}

/// Collapse-time estimate sqrt(N)/(4 pi N_eff omega_tr), in seconds.
pub fn collapse_time_estimate(p: &PhysicalParams) -> f64 {
    p.n_atoms.sqrt() / (4.0 * PI * p.n_eff * p.omega_tr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// E_n = (n^2 - n)/2 - (mu/u) n.
    U1,
    /// E_n = (n^2 - n)/2; the ground level is doubly degenerate (E_0 = E_1).
    InteractionOnly,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::U1 => write!(f, "u1"),
            Convention::InteractionOnly => write!(f, "interaction-only"),
        }
    }
}

/// Eigenenergies of the zero-mode Hamiltonian, dimensionless (units of
/// u_tilde).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub mu_in_utilde: f64,
    pub convention: Convention,
}

impl Spectrum {
    pub fn u1(levels: usize, mu_in_utilde: f64) -> Self {
        let energies = (0..levels)
            .map(|n| {
                let nf = n as f64;
                0.5 * (nf * nf - nf) - mu_in_utilde * nf
            })
            .collect();
        Self {
            energies,
            mu_in_utilde,
            convention: Convention::U1,
        }
    }

    pub fn interaction_only(levels: usize) -> Self {
        let energies = (0..levels)
            .map(|n| {
                let nf = n as f64;
                0.5 * (nf * nf - nf)
            })
            .collect();
        Self {
            energies,
            mu_in_utilde: 0.0,
            convention: Convention::InteractionOnly,
        }
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.energies[n]
    }
}

/// Time grid plus complex order-parameter values, with the e^{-1/2} collapse
/// crossing and (when present) the first return above 90% of the initial
/// magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub collapse_time: Option<f64>,
    pub revival_time: Option<f64>,
}

impl DecaySeries {
    /// Assemble a series and extract its collapse/revival times.
    pub fn build(times: Vec<f64>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(times.len(), values.len());
        debug_assert!(times.windows(2).all(|w| w[1] > w[0]));
        let (collapse_time, revival_time) = scan_crossings(&times, &values);
        Self {
            times,
            values,
            collapse_time,
            revival_time,
        }
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

fn scan_crossings(times: &[f64], values: &[Complex64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let v0 = values[0].norm();
    if v0 <= 0.0 {
        return (None, None);
    }
    let down = collapse_threshold() * v0;
    let mut collapse = None;
    let mut collapse_idx = 0;
    for k in 1..values.len() {
        let prev = values[k - 1].norm();
        let cur = values[k].norm();
        if prev >= down && cur < down {
            collapse = Some(interpolate(times[k - 1], prev, times[k], cur, down));
            collapse_idx = k;
            break;
        }
    }
    let mut revival = None;
    if collapse.is_some() {
        let up = REVIVAL_LEVEL * v0;
        for k in collapse_idx + 1..values.len() {
            let prev = values[k - 1].norm();
            let cur = values[k].norm();
            if prev < up && cur >= up {
                revival = Some(interpolate(times[k - 1], prev, times[k], cur, up));
                break;
            }
        }
    }
    (collapse, revival)
}

fn interpolate(t0: f64, m0: f64, t1: f64, m1: f64, level: f64) -> f64 {
    if m1 == m0 {
        return t1;
    }
    t0 + (t1 - t0) * (level - m0) / (m1 - m0)
}

/// First time at which |value(t)| / |value(0)| drops below e^{-1/2}, located
/// by linear interpolation between grid points.
pub fn extract_collapse_time(series: &DecaySeries) -> Result<f64, DynamicsError> {
    if series.values.first().map(|v| v.norm()).unwrap_or(0.0) <= 0.0 {
        return Err(DynamicsError::NoCollapse);
    }
    series.collapse_time.ok_or(DynamicsError::NoCollapse)
}

/// Exact coherent-state order parameter
/// sqrt(N) exp(N (e^{-i tau} - 1)) e^{i (mu/u) tau} on a dimensionless time
/// grid (tau = u t / hbar).
pub fn order_parameter_coherent_exact(n_atoms: f64, mu_over_u: f64, times: &[f64]) -> DecaySeries {
    let root_n = n_atoms.sqrt();
    let values = times
        .iter()
        .map(|&tau| {
            let phase = Complex64::new(
                n_atoms * (tau.cos() - 1.0),
                -n_atoms * tau.sin() + mu_over_u * tau,
            );
            root_n * phase.exp()
        })
        .collect();
    DecaySeries::build(times.to_vec(), values)
}

/// Gaussian short-time form
/// sqrt(N) e^{i(mu/u) tau} e^{-i N tau} e^{-N tau^2 / 2}.
pub fn order_parameter_short_time(n_atoms: f64, mu_over_u: f64, times: &[f64]) -> DecaySeries {
    let root_n = n_atoms.sqrt();
    let values = times
        .iter()
        .map(|&tau| {
            let envelope = (-0.5 * n_atoms * tau * tau).exp();
            root_n * envelope * Complex64::cis((mu_over_u - n_atoms) * tau)
        })
        .collect();
    DecaySeries::build(times.to_vec(), values)
}

/// Pair weights g_m = sqrt(m+1) conj(A_m) A_{m+1}; the order-parameter series
/// is their phase-weighted sum.
fn pair_weights(state: &FockVector) -> Vec<Complex64> {
    let len = state.amplitudes.len();
    (0..len.saturating_sub(1))
        .map(|m| {
            ((m + 1) as f64).sqrt() * state.amplitudes[m].conj() * state.amplitudes[m + 1]
        })
        .collect()
}

fn series_from_pair_weights(
    weights: &[Complex64],
    spectrum: &Spectrum,
    times: &[f64],
    mean_number: f64,
) -> Result<DecaySeries, DynamicsError> {
    if spectrum.len() < weights.len() + 1 {
        return Err(DynamicsError::TruncationMismatch {
            needed: weights.len() + 1,
            available: spectrum.len(),
        });
    }
    // Frequency of the m-th pair: E_m - E_{m+1}.
    let freqs: Vec<f64> = (0..weights.len())
        .map(|m| spectrum.energy(m) - spectrum.energy(m + 1))
        .collect();
    let bound = mean_number.sqrt() + 1e-6;
    let values: Vec<Complex64> = times
        .iter()
        .map(|&tau| {
            let mut acc = KahanC64::default();
            for (g, &w) in weights.iter().zip(freqs.iter()) {
                acc.add(g * Complex64::cis(w * tau));
            }
            let v = acc.value();
            debug_assert!(
                v.norm() <= bound,
                "order parameter exceeded sqrt(<n>): {} > {bound}",
                v.norm()
            );
            v
        })
        .collect();
    Ok(DecaySeries::build(times.to_vec(), values))
}

/// Generic order-parameter engine
/// <a(t)> = sum_n sqrt(n+1) A_n* A_{n+1} e^{i(E_n - E_{n+1}) tau}.
///
/// This is the evaluation route for squeezed states and for each
/// displaced-number member state; for a coherent input it must reproduce
/// [`order_parameter_coherent_exact`], which is the module's central
/// correctness gate.
pub fn order_parameter_series(
    state: &FockVector,
    spectrum: &Spectrum,
    times: &[f64],
) -> Result<DecaySeries, DynamicsError> {
    let weights = pair_weights(state);
    series_from_pair_weights(&weights, spectrum, times, state.mean_number())
}

/// Order parameter of a Boltzmann-weighted mixture: the member pair weights
/// are accumulated first (weighted by the ensemble weights, which already
/// carry the partition-function normalization), then summed once per time.
pub fn order_parameter_thermal_coherent(
    ens: &NumberEnsemble,
    spectrum: &Spectrum,
    times: &[f64],
) -> Result<DecaySeries, DynamicsError> {
    let max_len = ens.max_len();
    let mut weights = vec![Complex64::new(0.0, 0.0); max_len.saturating_sub(1)];
    for (w, state) in &ens.members {
        for (m, g) in pair_weights(state).into_iter().enumerate() {
            weights[m] += *w * g;
        }
    }
    series_from_pair_weights(&weights, spectrum, times, ens.mean_number())
}

/// Evolve Fock amplitudes by the diagonal phases e^{-i E_n tau}.
pub fn evolve(
    state: &FockVector,
    spectrum: &Spectrum,
    tau: f64,
) -> Result<FockVector, DynamicsError> {
    if spectrum.len() < state.amplitudes.len() {
        return Err(DynamicsError::TruncationMismatch {
            needed: state.amplitudes.len(),
            available: spectrum.len(),
        });
    }
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, a)| a * Complex64::cis(-spectrum.energy(n) * tau))
        .collect();
    Ok(FockVector {
        amplitudes,
        tail_mass: state.tail_mass,
    })
}

/// Rectangular phase-space grid; `re` and `im` are the axis samples.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl QGrid {
    /// Uniform square grid over [-half_extent, half_extent]^2.
    pub fn centered(half_extent: f64, points: usize) -> Self {
        assert!(points >= 2, "a Q grid needs at least two points per axis");
        assert!(half_extent > 0.0, "grid extent must be positive");
        let axis: Vec<f64> = (0..points)
            .map(|k| -half_extent + 2.0 * half_extent * k as f64 / (points - 1) as f64)
            .collect();
        Self {
            re: axis.clone(),
            im: axis,
        }
    }
}

/// Husimi Q values on a grid, stored row-major over the imaginary axis:
/// `values[iy * nx + ix]` is `Q(re[ix] + i im[iy])`.
#[derive(Debug, Clone, PartialEq)]
pub struct QField {
    pub grid_re: Vec<f64>,
    pub grid_im: Vec<f64>,
    pub values: Vec<f64>,
}

impl QField {
    pub fn nx(&self) -> usize {
        self.grid_re.len()
    }

    pub fn ny(&self) -> usize {
        self.grid_im.len()
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx() + ix]
    }

    pub fn cell_area(&self) -> f64 {
        let dx = self.grid_re[1] - self.grid_re[0];
        let dy = self.grid_im[1] - self.grid_im[0];
        dx * dy
    }

    /// Riemann sum of Q over the grid; 1 when the grid covers the support.
    pub fn total_mass(&self) -> f64 {
        kahan_sum(self.values.iter().copied()) * self.cell_area()
    }
}

fn husimi_values(state: &FockVector, grid: &QGrid) -> Vec<f64> {
    let nx = grid.re.len();
    let ny = grid.im.len();
    let mut values = vec![0.0; nx * ny];
    for (iy, &gim) in grid.im.iter().enumerate() {
        for (ix, &gre) in grid.re.iter().enumerate() {
            let gamma = Complex64::new(gre, gim);
            // <gamma|psi> with exp(-|gamma|^2/2) folded into the running
            // term so nothing overflows at large |gamma|.
            let mut term = Complex64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
            let mut acc = KahanC64::default();
            for (n, a) in state.amplitudes.iter().enumerate() {
                if n > 0 {
                    term *= gamma.conj() / (n as f64).sqrt();
                }
                acc.add(term * a);
            }
            values[iy * nx + ix] = acc.value().norm_sqr() / PI;
        }
    }
    values
}

fn check_mass(field: QField) -> Result<QField, DynamicsError> {
    let mass_error = (field.total_mass() - 1.0).abs();
    if mass_error > 1e-2 {
        return Err(DynamicsError::GridTooSmall { mass_error });
    }
    Ok(field)
}

/// Q(gamma, tau) = |<gamma|psi(tau)>|^2 / pi for a pure state evolved by
/// diagonal phases. Fails with [`DynamicsError::GridTooSmall`] when the grid
/// misses more than 1e-2 of the state's mass.
pub fn husimi_q(
    state: &FockVector,
    spectrum: &Spectrum,
    tau: f64,
    grid: &QGrid,
) -> Result<QField, DynamicsError> {
    let evolved = evolve(state, spectrum, tau)?;
    let values = husimi_values(&evolved, grid);
    check_mass(QField {
        grid_re: grid.re.clone(),
        grid_im: grid.im.clone(),
        values,
    })
}

/// Weighted sum of the member Q-functions of a mixture.
pub fn husimi_q_ensemble(
    ens: &NumberEnsemble,
    spectrum: &Spectrum,
    tau: f64,
    grid: &QGrid,
) -> Result<QField, DynamicsError> {
    let nx = grid.re.len();
    let ny = grid.im.len();
    let mut values = vec![0.0; nx * ny];
    for (w, state) in &ens.members {
        let evolved = evolve(state, spectrum, tau)?;
        for (dst, src) in values.iter_mut().zip(husimi_values(&evolved, grid)) {
            *dst += w * src;
        }
    }
    check_mass(QField {
        grid_re: grid.re.clone(),
        grid_im: grid.im.clone(),
        values,
    })
}
