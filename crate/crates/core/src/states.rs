//! Truncated Fock-basis representations of the initial states: coherent,
//! squeezed-coherent, displaced number states, and Boltzmann-weighted
//! mixtures of displaced number states.
//!
//! Every constructor certifies its truncation: the probability mass beyond
//! the kept amplitudes is estimated, stored in [`FockVector::tail_mass`], and
//! required to stay below the tolerance requested at construction.

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::kahan::{kahan_sum, KahanC64};
use crate::specfun::{log_factorial, LogWeight};

/// Relative weight below which ensemble members are dropped. Bounds the
/// ensemble size while leaving figure-level results unchanged at 1e-9.
pub const ENSEMBLE_WEIGHT_CUTOFF: f64 = 1e-12;

const MAX_TRUNCATION: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("requested tail tolerance {tol} cannot be certified in double precision")]
    TolUnreachable { tol: f64 },
    #[error("tolerance {tol} outside the accepted range (0, 1e-3]")]
    InvalidTolerance { tol: f64 },
    #[error("squeeze parameter |zeta| = {zeta_norm} is not below 1")]
    InvalidSqueeze { zeta_norm: f64 },
    #[error("Boltzmann weights do not decay within the provided energy range")]
    DivergentPartition,
    #[error("invalid input: {what}")]
    InvalidInput { what: &'static str },
}

/// Complex amplitudes over a truncated number basis.
///
/// `tail_mass` is the estimated probability beyond the last kept amplitude;
/// the stored amplitudes satisfy `norm_sq() + tail_mass = 1` to within
/// rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<Complex64>,
    pub tail_mass: f64,
}

impl FockVector {
    /// Index of the last kept amplitude.
    pub fn n_max(&self) -> usize {
        self.amplitudes.len().saturating_sub(1)
    }

    /// Amplitude of |n>, zero beyond the truncation.
    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sq(&self) -> f64 {
        kahan_sum(self.amplitudes.iter().map(|a| a.norm_sqr()))
    }

    /// `<n>` over the kept amplitudes.
    pub fn mean_number(&self) -> f64 {
        kahan_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(n, a)| n as f64 * a.norm_sqr()),
        )
    }

    /// `<n^2> - <n>^2` over the kept amplitudes.
    pub fn number_variance(&self) -> f64 {
        let mean = self.mean_number();
        let sq = kahan_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .map(|(n, a)| (n as f64) * (n as f64) * a.norm_sqr()),
        );
        sq - mean * mean
    }

    /// Inner product <self|other>; the shorter truncation wins.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        let len = self.amplitudes.len().min(other.amplitudes.len());
        let mut acc = KahanC64::default();
        for i in 0..len {
            acc.add(self.amplitudes[i].conj() * other.amplitudes[i]);
        }
        acc.value()
    }
}

/// Displacement plus squeeze arguments, with the reparametrized
/// `zeta = gamma * tanh|gamma| / |gamma|` kept alongside (so |zeta| < 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSpec {
    pub alpha: Complex64,
    pub gamma: Complex64,
    pub zeta: Complex64,
}

impl SqueezeSpec {
    pub fn new(alpha: Complex64, gamma: Complex64) -> Self {
        let g = gamma.norm();
        let zeta = if g == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            gamma * (g.tanh() / g)
        };
        Self { alpha, gamma, zeta }
    }

    /// Build from `zeta` directly, inverting |zeta| = tanh|gamma|.
    pub fn from_zeta(alpha: Complex64, zeta: Complex64) -> Result<Self, StateError> {
        let z = zeta.norm();
        if !(z < 1.0) {
            return Err(StateError::InvalidSqueeze { zeta_norm: z });
        }
        let gamma = if z == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            zeta * (z.atanh() / z)
        };
        Ok(Self { alpha, gamma, zeta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleLabel {
    Thermal,
    ThermalCoherent,
}

impl std::fmt::Display for EnsembleLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnsembleLabel::Thermal => write!(f, "thermal"),
            EnsembleLabel::ThermalCoherent => write!(f, "thermal-coherent"),
        }
    }
}

/// Boltzmann-weighted mixture of basis-labeled pure states. Weights are
/// nonnegative and sum to one after the relative cutoff
/// [`ENSEMBLE_WEIGHT_CUTOFF`] has been applied.
#[derive(Debug, Clone)]
pub struct NumberEnsemble {
    pub members: Vec<(f64, FockVector)>,
    pub beta: f64,
    pub label: EnsembleLabel,
}

impl NumberEnsemble {
    pub fn total_weight(&self) -> f64 {
        kahan_sum(self.members.iter().map(|(w, _)| *w))
    }

    pub fn mean_number(&self) -> f64 {
        kahan_sum(self.members.iter().map(|(w, s)| w * s.mean_number()))
    }

    /// Length of the longest member vector.
    pub fn max_len(&self) -> usize {
        self.members
            .iter()
            .map(|(_, s)| s.amplitudes.len())
            .max()
            .unwrap_or(0)
    }
}

fn validate_tol(tol: f64) -> Result<(), StateError> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(StateError::InvalidTolerance { tol });
    }
    if tol < 1e-15 {
        return Err(StateError::TolUnreachable { tol });
    }
    Ok(())
}

/// Upper bound on the Poisson tail P(X > n) for mean `mean`, valid for
/// n + 2 > mean: the term ratio beyond n is below mean/(n+2), so the tail is
/// dominated by a geometric series.
fn poisson_tail_bound(mean: f64, n: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let np1 = (n + 1) as f64;
    let log_pmf = -mean + np1 * mean.ln() - log_factorial(n as u64 + 1);
    let ratio = mean / (n as f64 + 2.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    log_pmf.exp() / (1.0 - ratio)
}

/// Pick a truncation n_max whose analytically bounded tail mass is below
/// `tol` for the squeezed-coherent number distribution with displacement
/// `alpha` and squeeze `zeta`.
///
/// For zeta = 0 this is the Poisson tail with a hard floor of
/// |alpha|^2 + 10 sqrt(|alpha|^2 + 1); a nonzero zeta inflates the result by
/// (1 + |zeta|)/(1 - |zeta|). Constructors verify the choice a posteriori
/// against the computed tail mass.
pub fn choose_truncation(
    alpha: Complex64,
    zeta: Complex64,
    tol: f64,
) -> Result<usize, StateError> {
    validate_tol(tol)?;
    let z = zeta.norm();
    if !(z < 1.0) {
        return Err(StateError::InvalidSqueeze { zeta_norm: z });
    }
    let mean = alpha.norm_sqr();
    let mut n = (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize;
    while poisson_tail_bound(mean, n) >= 0.5 * tol {
        n += (n / 8).max(4);
        if n > MAX_TRUNCATION {
            return Err(StateError::TolUnreachable { tol });
        }
    }
    if z > 0.0 {
        let inflated = (n as f64 * (1.0 + z) / (1.0 - z)).ceil();
        if inflated > MAX_TRUNCATION as f64 {
            return Err(StateError::TolUnreachable { tol });
        }
        n = inflated as usize;
    }
    Ok(n)
}

/// Coherent state |z>: amplitude_n = exp(-|z|^2/2) z^n / sqrt(n!), computed
/// in the log domain.
pub fn coherent_state(z: Complex64, tol: f64) -> Result<FockVector, StateError> {
    validate_tol(tol)?;
    let mut n_max = choose_truncation(z, Complex64::new(0.0, 0.0), tol)?;
    if z.norm() == 0.0 {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return Ok(FockVector {
            amplitudes,
            tail_mass: 0.0,
        });
    }
    let log_r = z.norm().ln();
    let theta = z.arg();
    let half_r2 = 0.5 * z.norm_sqr();
    for _attempt in 0..4 {
        let amplitudes: Vec<Complex64> = (0..=n_max)
            .map(|n| {
                LogWeight::new(
                    -half_r2 + n as f64 * log_r - 0.5 * log_factorial(n as u64),
                    n as f64 * theta,
                )
                .to_complex()
            })
            .collect();
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        let tail = (1.0 - norm_sq).max(0.0);
        if tail < tol {
            return Ok(FockVector {
                amplitudes,
                tail_mass: tail,
            });
        }
        n_max *= 2;
        if n_max > MAX_TRUNCATION {
            break;
        }
    }
    Err(StateError::TolUnreachable { tol })
}

/// Log-domain Hermite values H_n(z) for every n up to n_max, produced by the
/// rescaled three-term recurrence. This is the scaled path callers switch to
/// when the linear-space recurrence in `specfun` would overflow.
fn hermite_log_sequence(n_max: usize, z: Complex64) -> Vec<LogWeight> {
    fn to_log(v: Complex64, scale: f64) -> LogWeight {
        if v == Complex64::new(0.0, 0.0) {
            LogWeight::zero()
        } else {
            LogWeight::new(scale + v.norm().ln(), v.arg())
        }
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut scale = 0.0f64;
    let mut hm1 = Complex64::new(1.0, 0.0);
    out.push(to_log(hm1, scale));
    if n_max == 0 {
        return out;
    }
    let mut h = 2.0 * z;
    out.push(to_log(h, scale));
    for j in 1..n_max {
        let next = 2.0 * z * h - 2.0 * (j as f64) * hm1;
        hm1 = h;
        h = next;
        let m = h.norm().max(hm1.norm());
        if m > 1e200 {
            h /= m;
            hm1 /= m;
            scale += m.ln();
        }
        out.push(to_log(h, scale));
    }
    out
}

/// Log-domain generalized Laguerre value: returns (ln|L_n^{(k)}(x)|, sign).
fn laguerre_signed_log(n: usize, k: f64, x: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let mut scale = 0.0f64;
    let mut lm1 = 1.0f64;
    let mut l = 1.0 + k - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * l - (jf + k) * lm1) / (jf + 1.0);
        lm1 = l;
        l = next;
        let m = l.abs().max(lm1.abs());
        if m > 1e250 {
            l /= m;
            lm1 /= m;
            scale += m.ln();
        }
    }
    if l == 0.0 {
        (f64::NEG_INFINITY, 1.0)
    } else {
        (scale + l.abs().ln(), l.signum())
    }
}

/// Squeezed-coherent state amplitudes
/// A_n = (1-|zeta|^2)^{1/4} exp(-(alpha+zeta alpha*)alpha*/2)
///       sqrt(zeta^n/(2^n n!)) H_n((alpha+zeta alpha*)/sqrt(2 zeta)),
/// with the growing Hermite values paired against the decaying prefactor in
/// the log domain. The principal branch fixes sqrt(zeta); the branch choice
/// cancels between the two factors, leaving at most a global phase.
///
/// |zeta| below 1e-14 is treated as degenerate and delegated to
/// [`coherent_state`]. After construction the amplitudes are scaled so that
/// `norm_sq() + tail_mass = 1`, with the pre-normalization deficit recorded
/// as the tail.
pub fn squeezed_state(spec: &SqueezeSpec, tol: f64) -> Result<FockVector, StateError> {
    validate_tol(tol)?;
    let znorm = spec.zeta.norm();
    if !(znorm < 1.0) {
        return Err(StateError::InvalidSqueeze { zeta_norm: znorm });
    }
    if znorm < 1e-14 {
        return coherent_state(spec.alpha, tol);
    }
    let alpha = spec.alpha;
    let zeta = spec.zeta;
    let mut n_max = choose_truncation(alpha, zeta, tol)?;
    let w = alpha + zeta * alpha.conj();
    let s = zeta.sqrt();
    let x = w / (SQRT_2 * s);
    let pref = -w * alpha.conj() * 0.5;
    let pref_lm = 0.25 * (1.0 - zeta.norm_sqr()).ln() + pref.re;
    let pref_ph = pref.im;
    let per_n_lm = s.norm().ln() - 0.5 * LN_2;
    let per_n_ph = s.arg();

    for _attempt in 0..4 {
        let hlog = hermite_log_sequence(n_max, x);
        let amplitudes: Vec<Complex64> = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                LogWeight::new(
                    pref_lm + nf * per_n_lm - 0.5 * log_factorial(n as u64)
                        + hlog[n].log_magnitude,
                    pref_ph + nf * per_n_ph + hlog[n].phase,
                )
                .to_complex()
            })
            .collect();
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        if !norm_sq.is_finite() {
            return Err(StateError::TolUnreachable { tol });
        }
        let deficit = 1.0 - norm_sq;
        if deficit < tol {
            let tail_mass = deficit.max(0.0);
            let mut amplitudes = amplitudes;
            if norm_sq > 1.0 {
                let scale = norm_sq.sqrt().recip();
                for a in &mut amplitudes {
                    *a *= scale;
                }
            }
            return Ok(FockVector {
                amplitudes,
                tail_mass,
            });
        }
        n_max *= 2;
        if n_max > MAX_TRUNCATION {
            break;
        }
    }
    Err(StateError::TolUnreachable { tol })
}

/// Displaced number state D(alpha)|n>, i.e. amplitude_m = <m|D(alpha)|n>.
///
/// The m >= n branch is
/// exp(-|alpha|^2/2) sqrt(n!/m!) alpha^{m-n} L_n^{(m-n)}(|alpha|^2); the
/// m < n branch follows from D(alpha)^dagger = D(-alpha):
/// exp(-|alpha|^2/2) sqrt(m!/n!) (-alpha*)^{n-m} L_m^{(n-m)}(|alpha|^2).
pub fn displaced_number_state(
    n: usize,
    alpha: Complex64,
    tol: f64,
) -> Result<FockVector, StateError> {
    validate_tol(tol)?;
    if alpha.norm() == 0.0 {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n + 1];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        return Ok(FockVector {
            amplitudes,
            tail_mass: 0.0,
        });
    }
    let r2 = alpha.norm_sqr();
    let log_r = alpha.norm().ln();
    let arg_a = alpha.arg();
    let arg_ma = (-alpha.conj()).arg();
    let log_fact_n = log_factorial(n as u64);
    // The number distribution lives below (sqrt(n) + |alpha|)^2; pad it with
    // a Poisson-like tail allowance and verify a posteriori.
    let m_edge = ((n as f64).sqrt() + alpha.norm()).powi(2);
    let mut margin = 10.0 * (m_edge + 1.0).sqrt() + 10.0;
    for _attempt in 0..5 {
        let m_max = (m_edge + margin).ceil() as usize;
        if m_max > MAX_TRUNCATION {
            break;
        }
        let amplitudes: Vec<Complex64> = (0..=m_max)
            .map(|m| {
                let (lm, ph) = if m >= n {
                    let (llog, sign) = laguerre_signed_log(n, (m - n) as f64, r2);
                    (
                        -0.5 * r2 + 0.5 * (log_fact_n - log_factorial(m as u64))
                            + (m - n) as f64 * log_r
                            + llog,
                        (m - n) as f64 * arg_a + if sign < 0.0 { PI } else { 0.0 },
                    )
                } else {
                    let (llog, sign) = laguerre_signed_log(m, (n - m) as f64, r2);
                    (
                        -0.5 * r2 + 0.5 * (log_factorial(m as u64) - log_fact_n)
                            + (n - m) as f64 * log_r
                            + llog,
                        (n - m) as f64 * arg_ma + if sign < 0.0 { PI } else { 0.0 },
                    )
                };
                LogWeight::new(lm, ph).to_complex()
            })
            .collect();
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a.norm_sqr()));
        let tail = (1.0 - norm_sq).max(0.0);
        if tail < tol {
            return Ok(FockVector {
                amplitudes,
                tail_mass: tail,
            });
        }
        margin *= 2.0;
    }
    Err(StateError::TolUnreachable { tol })
}

/// Boltzmann-weighted ensemble of displaced number states over the provided
/// energies (index-aligned with n). `alpha = 0` yields the pure thermal
/// state. `beta` may be infinite, in which case only the ground-degenerate
/// members survive.
pub fn thermal_ensemble(
    beta: f64,
    energies: &[f64],
    alpha: Complex64,
    tol: f64,
) -> Result<NumberEnsemble, StateError> {
    validate_tol(tol)?;
    if !(beta > 0.0) {
        return Err(StateError::InvalidInput {
            what: "beta must be positive",
        });
    }
    if energies.is_empty() {
        return Err(StateError::InvalidInput {
            what: "energies must be non-empty",
        });
    }
    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let weight = |e: f64| -> f64 {
        let d = e - e_min;
        // Written so that beta = +inf gives 1 at the minimum and 0 elsewhere
        // (a bare -beta * 0 would be NaN).
        if d == 0.0 {
            1.0
        } else {
            (-beta * d).exp()
        }
    };
    let raw: Vec<f64> = energies.iter().map(|&e| weight(e)).collect();
    let w_last = *raw.last().expect("non-empty");
    if w_last >= ENSEMBLE_WEIGHT_CUTOFF {
        return Err(StateError::DivergentPartition);
    }
    let kept: Vec<(usize, f64)> = raw
        .iter()
        .enumerate()
        .filter(|(_, &w)| w >= ENSEMBLE_WEIGHT_CUTOFF)
        .map(|(n, &w)| (n, w))
        .collect();
    let total = kahan_sum(kept.iter().map(|(_, w)| *w));
    let mut members = Vec::with_capacity(kept.len());
    for (n, w) in kept {
        let state = displaced_number_state(n, alpha, tol)?;
        members.push((w / total, state));
    }
    let label = if alpha.norm() == 0.0 {
        EnsembleLabel::Thermal
    } else {
        EnsembleLabel::ThermalCoherent
    };
    Ok(NumberEnsemble {
        members,
        beta,
        label,
    })
}
