//! Thin-spectrum decoherence laws: reduced-density-matrix off-diagonal decay
//! for a two-state system riding on a gapless-mode spectrum, Bogoliubov
//! quasi-particles over thermal and thermal-coherent zero-mode occupations,
//! and the combination rule for several broken symmetries.
//!
//! Each closed form is paired with a brute-force discrete-sum oracle; the
//! oracles are the implementations of record and the closed forms are the
//! fast paths, certified against each other in the test suites.
//!
//! Times are in seconds, energies in joules, inverse temperatures in 1/J.
//! All series are normalized to magnitude 1 at t = 0, so overall
//! proportionality constants cancel; only the shape and the collapse scale
//! are meaningful. Collapse times are read at the e^{-1/2} crossing, the
//! same operational definition used in [`crate::dynamics`].

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::kahan::{kahan_sum, KahanC64};
use crate::states::{displaced_number_state, StateError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThinSpecError {
    #[error("p grid too coarse: spans {half_width_sigmas} thermal widths with {points} points, need >= 8 widths and >= {min_points} points")]
    GridTooCoarse {
        half_width_sigmas: f64,
        points: usize,
        min_points: usize,
    },
    #[error("summation window of {half_width_sigmas} thermal widths misses weights above 1e-14 of the maximum; need >= 8")]
    WindowTooNarrow { half_width_sigmas: f64 },
    #[error("m = {m} quasi-particles is outside the linear regime (need m < N0/10 = {limit})")]
    MTooLarge { m: u32, limit: f64 },
    #[error("invalid model: {what}")]
    InvalidModel { what: &'static str },
    #[error("magnitude never crossed the collapse threshold")]
    NoCollapse,
    #[error(transparent)]
    State(#[from] StateError),
}

/// Gapless-mode inertia, fractional inertia shift of the excited state, the
/// excitation energy, and the inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinSpectrumModel {
    /// Inertia I in the p^2/(2I) kinetic term.
    pub inertia: f64,
    /// Fractional inertia shift delta caused by the excitation.
    pub delta: f64,
    /// Excitation energy epsilon (contributes only a global phase).
    pub epsilon: f64,
    /// Inverse temperature 1/(k_B T), 1/J.
    pub beta: f64,
}

impl ThinSpectrumModel {
    pub fn new(inertia: f64, delta: f64, epsilon: f64, beta: f64) -> Result<Self, ThinSpecError> {
        if !(inertia > 0.0 && inertia.is_finite()) {
            return Err(ThinSpecError::InvalidModel {
                what: "inertia must be positive and finite",
            });
        }
        if !(beta > 0.0) {
            return Err(ThinSpecError::InvalidModel {
                what: "beta must be positive",
            });
        }
        if !(delta.abs() < 1.0) {
            return Err(ThinSpecError::InvalidModel {
                what: "|delta| must be below 1",
            });
        }
        Ok(Self {
            inertia,
            delta,
            epsilon,
            beta,
        })
    }
}

/// Condensate level structure for the quasi-particle laws:
/// E_m^{(n)} = u0 rho0 n^2 / (2 (N0 - m)) - u0 rho0 n + m omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateLevels {
    /// Mean condensate atom number N0.
    pub n0: f64,
    /// Interaction energy scale u0 rho0, J.
    pub u0rho0: f64,
    /// Single quasi-particle energy omega, J.
    pub omega: f64,
    /// Inverse temperature, 1/J (may be infinite).
    pub beta: f64,
}

impl CondensateLevels {
    pub fn new(n0: f64, u0rho0: f64, omega: f64, beta: f64) -> Result<Self, ThinSpecError> {
        if !(n0 >= 1.0 && n0.is_finite()) {
            return Err(ThinSpecError::InvalidModel {
                what: "N0 must be at least 1",
            });
        }
        if !(u0rho0 > 0.0 && u0rho0.is_finite()) {
            return Err(ThinSpecError::InvalidModel {
                what: "u0 rho0 must be positive and finite",
            });
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(ThinSpecError::InvalidModel {
                what: "omega must be nonnegative and finite",
            });
        }
        if !(beta > 0.0) {
            return Err(ThinSpecError::InvalidModel {
                what: "beta must be positive",
            });
        }
        Ok(Self {
            n0,
            u0rho0,
            omega,
            beta,
        })
    }

    /// E_m^{(n)}, finite for m < N0.
    pub fn energy(&self, m: u32, n: f64) -> f64 {
        self.u0rho0 * n * n / (2.0 * (self.n0 - m as f64)) - self.u0rho0 * n
            + m as f64 * self.omega
    }

    /// Thermal width of the condensate-number distribution,
    /// sigma_n = sqrt(N0 / (beta u0 rho0)). Zero at beta = infinity.
    pub fn thermal_width(&self) -> f64 {
        if self.beta.is_infinite() {
            0.0
        } else {
            (self.n0 / (self.beta * self.u0rho0)).sqrt()
        }
    }
}

/// Normalized off-diagonal magnitudes |rho_od(t)| / |rho_od(0)| on a time
/// grid. `collapse_time` is the e^{-1/2} crossing in seconds, infinite when
/// the threshold is never reached.
#[derive(Debug, Clone, PartialEq)]
pub struct OffDiagSeries {
    pub times: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub collapse_time: f64,
}

/// Uniform momentum grid specification for the two-state oracle: the grid
/// spans `half_width_sigmas` thermal widths sqrt(I/beta) on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PGrid {
    pub half_width_sigmas: f64,
    pub points: usize,
}

impl Default for PGrid {
    fn default() -> Self {
        // Gaussian weight at the edge is exp(-32) ~ 1e-14 and the Riemann
        // error sits well below the 1e-6 agreement target.
        Self {
            half_width_sigmas: 8.0,
            points: 4001,
        }
    }
}

fn collapse_from_grid(times: &[f64], magnitudes: &[f64]) -> f64 {
    let threshold = crate::dynamics::collapse_threshold();
    for k in 1..magnitudes.len() {
        let (m0, m1) = (magnitudes[k - 1], magnitudes[k]);
        if m0 >= threshold && m1 < threshold {
            if m1 == m0 {
                return times[k];
            }
            return times[k - 1] + (times[k] - times[k - 1]) * (threshold - m0) / (m1 - m0);
        }
    }
    f64::INFINITY
}

/// Two-state thin-spectrum law
/// |rho_od(t)| = (1 + 16 t^2 delta^2 / (beta^2 hbar^2))^{-1/4}.
///
/// The collapse time is analytic: hbar beta sqrt(e^2 - 1)/(4 |delta|), of
/// the same order as the scale hbar/(k_B T delta) from
/// [`two_state_collapse_scale`]. delta = 0 never decays.
pub fn reduced_offdiag_two_state(model: &ThinSpectrumModel, times: &[f64]) -> OffDiagSeries {
    let rate = 4.0 * model.delta / (model.beta * HBAR);
    let magnitudes = times
        .iter()
        .map(|&t| {
            let x = rate * t;
            (1.0 + x * x).powf(-0.25)
        })
        .collect();
    let collapse_time = if model.delta == 0.0 {
        f64::INFINITY
    } else {
        model.beta * HBAR * (std::f64::consts::E.powi(2) - 1.0).sqrt() / (4.0 * model.delta.abs())
    };
    OffDiagSeries {
        times: times.to_vec(),
        magnitudes,
        collapse_time,
    }
}

/// The decay scale hbar beta / delta = hbar / (k_B T delta).
pub fn two_state_collapse_scale(model: &ThinSpectrumModel) -> f64 {
    if model.delta == 0.0 {
        f64::INFINITY
    } else {
        HBAR * model.beta / model.delta.abs()
    }
}

fn validate_pgrid(grid: &PGrid, min_points: usize) -> Result<(), ThinSpecError> {
    if grid.half_width_sigmas < 8.0 || grid.points < min_points {
        return Err(ThinSpecError::GridTooCoarse {
            half_width_sigmas: grid.half_width_sigmas,
            points: grid.points,
            min_points,
        });
    }
    Ok(())
}

/// Momentum samples, Boltzmann weights and phase rates for one gapless mode.
/// The inertia shift enters linearized, E_1 - E_0 = epsilon - 2 delta p^2/I,
/// the same convention the closed form integrates; epsilon contributes only
/// a global phase and is dropped from the magnitude.
fn two_state_mode(model: &ThinSpectrumModel, grid: &PGrid) -> (Vec<f64>, Vec<f64>) {
    let sigma = (model.inertia / model.beta).sqrt();
    let half = grid.half_width_sigmas * sigma;
    let n = grid.points;
    let mut weights = Vec::with_capacity(n);
    let mut rates = Vec::with_capacity(n);
    for j in 0..n {
        let p = -half + 2.0 * half * j as f64 / (n - 1) as f64;
        weights.push((-model.beta * p * p / (2.0 * model.inertia)).exp());
        rates.push(2.0 * model.delta * p * p / (model.inertia * HBAR));
    }
    (weights, rates)
}

/// Direct sum over the discretized gapless-mode momentum:
/// |sum_p e^{-beta p^2/(2I)} e^{-i (E_1(p)-E_0(p)) t/hbar}|, normalized.
/// Converges to [`reduced_offdiag_two_state`] as the grid refines.
pub fn reduced_offdiag_two_state_oracle(
    model: &ThinSpectrumModel,
    grid: &PGrid,
    times: &[f64],
) -> Result<OffDiagSeries, ThinSpecError> {
    validate_pgrid(grid, 2000)?;
    let (weights, rates) = two_state_mode(model, grid);
    let total = kahan_sum(weights.iter().copied());
    let magnitudes: Vec<f64> = times
        .iter()
        .map(|&t| {
            let mut acc = KahanC64::default();
            for (w, r) in weights.iter().zip(rates.iter()) {
                acc.add(w * Complex64::cis(r * t));
            }
            acc.value().norm() / total
        })
        .collect();
    let collapse_time = collapse_from_grid(times, &magnitudes);
    Ok(OffDiagSeries {
        times: times.to_vec(),
        magnitudes,
        collapse_time,
    })
}

/// Joint decay of two independent thin spectra, evaluated as the genuine
/// double sum over both momentum grids. Analytically it factorizes into the
/// product of the marginal decays; the factorization test in the suite
/// certifies exactly that.
pub fn two_state_joint_oracle(
    first: &ThinSpectrumModel,
    second: &ThinSpectrumModel,
    grid: &PGrid,
    times: &[f64],
) -> Result<OffDiagSeries, ThinSpecError> {
    validate_pgrid(grid, 201)?;
    let (w1, r1) = two_state_mode(first, grid);
    let (w2, r2) = two_state_mode(second, grid);
    let mut total = crate::kahan::KahanF64::default();
    for &a in &w1 {
        for &b in &w2 {
            total.add(a * b);
        }
    }
    let total = total.value();
    let magnitudes: Vec<f64> = times
        .iter()
        .map(|&t| {
            let z1: Vec<Complex64> = r1.iter().map(|&r| Complex64::cis(r * t)).collect();
            let z2: Vec<Complex64> = r2.iter().map(|&r| Complex64::cis(r * t)).collect();
            let mut acc = KahanC64::default();
            for (a, za) in w1.iter().zip(z1.iter()) {
                for (b, zb) in w2.iter().zip(z2.iter()) {
                    acc.add((a * b) * (za * zb));
                }
            }
            acc.value().norm() / total
        })
        .collect();
    let collapse_time = collapse_from_grid(times, &magnitudes);
    Ok(OffDiagSeries {
        times: times.to_vec(),
        magnitudes,
        collapse_time,
    })
}

/// Thomas-Fermi estimate of the fractional inertia shift caused by a number
/// fluctuation dN on top of N atoms: the inertia scales as N^{2/5}, so
/// delta = ((N+dN)^{2/5} - N^{2/5})/N^{2/5}, linearized 2 dN / (5 N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaThomasFermi {
    pub exact: f64,
    pub linearized: f64,
}

pub fn delta_thomas_fermi(n: f64, dn: f64) -> DeltaThomasFermi {
    DeltaThomasFermi {
        exact: (1.0 + dn / n).powf(0.4) - 1.0,
        linearized: 2.0 * dn / (5.0 * n),
    }
}

/// Bogoliubov dispersion omega_k = sqrt(eps_k^2 - (u0 rho0)^2) with
/// eps_k = E_k + u0 rho0, computed as sqrt(E_k (E_k + 2 u0 rho0)) so the
/// k -> 0 limit is exactly gapless.
pub fn bogoliubov_omega(e_k: f64, u0rho0: f64) -> f64 {
    (e_k * (e_k + 2.0 * u0rho0)).sqrt()
}

fn qp_magnitude(y: f64, b: f64) -> f64 {
    let y2 = y * y;
    (1.0 + y2).powf(-0.25) * (-0.5 * b * y2 / (1.0 + y2)).exp()
}

/// Quasi-particle off-diagonal decay over a thermal zero-mode occupation:
/// the continuum limit of the discrete sum over condensate numbers,
/// |rho_od(t)|^2 proportional to
/// exp(beta^3 N0^3 u0 rho0 / (beta^2 N0^2 + t^2/hbar^2)) /
/// sqrt(beta^2 + t^2/(hbar^2 N0^2)),
/// normalized at t = 0. In reduced variables y = t/(hbar beta (N0-1)) and
/// B = beta u0 rho0 N0 the magnitude is
/// (1+y^2)^{-1/4} exp(-(B/2) y^2/(1+y^2)); the (N0-1) in the time scale is
/// the exact continuum limit of the level energies (the large-N0 form has
/// N0 there, an O(1/N0) difference).
pub fn quasiparticle_offdiag_thermal(levels: &CondensateLevels, times: &[f64]) -> OffDiagSeries {
    let y_scale = HBAR * levels.beta * (levels.n0 - 1.0);
    let b = levels.beta * levels.u0rho0 * levels.n0;
    let magnitudes: Vec<f64> = times.iter().map(|&t| qp_magnitude(t / y_scale, b)).collect();
    let threshold = crate::dynamics::collapse_threshold();
    let collapse_time = if !y_scale.is_finite() || y_scale <= 0.0 {
        f64::INFINITY
    } else {
        // Monotone in y: bracket then bisect.
        let mut hi = 1.0f64;
        let mut doublings = 0;
        while qp_magnitude(hi, b) >= threshold {
            hi *= 2.0;
            doublings += 1;
            if doublings > 200 {
                return OffDiagSeries {
                    times: times.to_vec(),
                    magnitudes,
                    collapse_time: f64::INFINITY,
                };
            }
        }
        let mut lo = 0.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if qp_magnitude(mid, b) >= threshold {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) <= 1e-14 * hi {
                break;
            }
        }
        0.5 * (lo + hi) * y_scale
    };
    OffDiagSeries {
        times: times.to_vec(),
        magnitudes,
        collapse_time,
    }
}

/// The decay scale hbar N0 beta = hbar N0 / (k_B T).
pub fn quasiparticle_collapse_scale(levels: &CondensateLevels) -> f64 {
    HBAR * levels.n0 * levels.beta
}

/// Discrete Gaussian-weighted phase sum: weights exp(-a (n - center)^2) over
/// integer n in a window of `half_width` around the center, phases
/// exp(-i kappa n^2 t). Negative n are included; the weights there are
/// negligible by construction.
fn discrete_offdiag(
    a: f64,
    kappa: f64,
    center: f64,
    half_width: f64,
    times: &[f64],
) -> OffDiagSeries {
    let c = center.round() as i64;
    let delta = half_width.ceil() as i64;
    let mut weights = Vec::with_capacity((2 * delta + 1) as usize);
    let mut rates = Vec::with_capacity((2 * delta + 1) as usize);
    for n in (c - delta)..=(c + delta) {
        let nf = n as f64;
        let d = nf - center;
        let w = if d == 0.0 { 1.0 } else { (-a * d * d).exp() };
        weights.push(w);
        rates.push(kappa * nf * nf);
    }
    let total = kahan_sum(weights.iter().copied());
    let magnitudes: Vec<f64> = times
        .iter()
        .map(|&t| {
            let mut acc = KahanC64::default();
            for (w, r) in weights.iter().zip(rates.iter()) {
                acc.add(w * Complex64::cis(-r * t));
            }
            acc.value().norm() / total
        })
        .collect();
    let collapse_time = collapse_from_grid(times, &magnitudes);
    OffDiagSeries {
        times: times.to_vec(),
        magnitudes,
        collapse_time,
    }
}

fn qp_boltzmann_coeff(levels: &CondensateLevels) -> f64 {
    // -beta (E_0(n) - E_0(N0)) = -beta u0rho0 (n - N0)^2 / (2 N0), exactly.
    levels.beta * levels.u0rho0 / (2.0 * levels.n0)
}

fn qp_phase_rate(levels: &CondensateLevels, m: u32) -> f64 {
    // (E_m(n) - E_0(n) - m omega)/hbar = u0rho0 m n^2 / (2 N0 (N0-m) hbar);
    // the m omega piece is a global phase and drops from the magnitude.
    levels.u0rho0 * m as f64 / (2.0 * levels.n0 * (levels.n0 - m as f64) * HBAR)
}

/// Brute-force discrete sum over condensate numbers
/// |sum_n e^{-beta E_0^{(n)}} e^{-i (E_1^{(n)} - E_0^{(n)}) t / hbar}|,
/// normalized. The window covers `half_width_sigmas` thermal widths (at
/// least 8, so weights are tracked down to 1e-14 of the maximum).
pub fn quasiparticle_offdiag_thermal_oracle_windowed(
    levels: &CondensateLevels,
    half_width_sigmas: f64,
    times: &[f64],
) -> Result<OffDiagSeries, ThinSpecError> {
    if half_width_sigmas < 8.0 {
        return Err(ThinSpecError::WindowTooNarrow { half_width_sigmas });
    }
    if levels.n0 <= 1.0 {
        return Err(ThinSpecError::InvalidModel {
            what: "N0 must exceed 1 for a single-excitation level",
        });
    }
    Ok(discrete_offdiag(
        qp_boltzmann_coeff(levels),
        qp_phase_rate(levels, 1),
        levels.n0,
        half_width_sigmas * levels.thermal_width(),
        times,
    ))
}

/// [`quasiparticle_offdiag_thermal_oracle_windowed`] with the default
/// ten-thermal-width window.
pub fn quasiparticle_offdiag_thermal_oracle(
    levels: &CondensateLevels,
    times: &[f64],
) -> Result<OffDiagSeries, ThinSpecError> {
    quasiparticle_offdiag_thermal_oracle_windowed(levels, 10.0, times)
}

/// Collapse time of the superposition |n,0> <-> |n,m>, computed by the
/// discrete-sum oracle with the exact m-quasi-particle level energies.
/// Inversely proportional to m while m stays well below N0.
pub fn quasiparticle_collapse_scaling(
    levels: &CondensateLevels,
    m: u32,
) -> Result<f64, ThinSpecError> {
    if m == 0 {
        return Err(ThinSpecError::InvalidModel {
            what: "m must be at least 1",
        });
    }
    if (m as f64) >= levels.n0 / 10.0 {
        return Err(ThinSpecError::MTooLarge {
            m,
            limit: levels.n0 / 10.0,
        });
    }
    let a = qp_boltzmann_coeff(levels);
    let kappa = qp_phase_rate(levels, m);
    let half_width = 10.0 * levels.thermal_width();
    let mut window = 4.0 * quasiparticle_collapse_scale(levels) / m as f64;
    for _ in 0..12 {
        let times: Vec<f64> = (0..2001).map(|k| window * k as f64 / 2000.0).collect();
        let series = discrete_offdiag(a, kappa, levels.n0, half_width, &times);
        if series.collapse_time.is_finite() {
            return Ok(series.collapse_time);
        }
        window *= 2.0;
    }
    Err(ThinSpecError::NoCollapse)
}

/// Quasi-particle off-diagonal decay for a thermal-coherent zero-mode
/// occupation: double sum over the thermal condensate number n and the
/// displaced-number index l,
/// |sum_{n,l} e^{-beta E_0^{(n)}} |C_l(n,alpha)|^2
///  e^{-i (E_1^{(l)} - E_0^{(l)}) t / hbar}|, normalized.
/// alpha = 0 reduces exactly to the thermal oracle.
pub fn quasiparticle_offdiag_thermal_coherent(
    levels: &CondensateLevels,
    alpha: Complex64,
    times: &[f64],
) -> Result<OffDiagSeries, ThinSpecError> {
    if levels.n0 <= 1.0 {
        return Err(ThinSpecError::InvalidModel {
            what: "N0 must exceed 1 for a single-excitation level",
        });
    }
    let a = qp_boltzmann_coeff(levels);
    let half_width = (10.0 * levels.thermal_width()).ceil() as i64;
    let center = levels.n0.round() as i64;
    let lo = (center - half_width).max(0);
    let hi = center + half_width;
    // Accumulate G_l = sum_n w_n |C_l(n, alpha)|^2.
    let mut g: Vec<f64> = Vec::new();
    for n in lo..=hi {
        let d = n as f64 - levels.n0;
        let w = if d == 0.0 { 1.0 } else { (-a * d * d).exp() };
        if w < 1e-14 {
            continue;
        }
        let state = displaced_number_state(n as usize, alpha, 1e-10)?;
        if state.amplitudes.len() > g.len() {
            g.resize(state.amplitudes.len(), 0.0);
        }
        for (l, amp) in state.amplitudes.iter().enumerate() {
            g[l] += w * amp.norm_sqr();
        }
    }
    let kappa = qp_phase_rate(levels, 1);
    let total = kahan_sum(g.iter().copied());
    let magnitudes: Vec<f64> = times
        .iter()
        .map(|&t| {
            let mut acc = KahanC64::default();
            for (l, &gl) in g.iter().enumerate() {
                let lf = l as f64;
                acc.add(gl * Complex64::cis(-kappa * lf * lf * t));
            }
            acc.value().norm() / total
        })
        .collect();
    let collapse_time = collapse_from_grid(times, &magnitudes);
    Ok(OffDiagSeries {
        times: times.to_vec(),
        magnitudes,
        collapse_time,
    })
}

/// Harmonic combination of per-symmetry collapse times:
/// t_c = (sum_i 1/t_c^{(i)})^{-1}. Infinite entries (no decay) drop out.
pub fn combine_collapse_times(times: &[f64]) -> f64 {
    debug_assert!(times.iter().all(|&t| t > 0.0));
    let inv = kahan_sum(times.iter().map(|&t| 1.0 / t));
    1.0 / inv
}
