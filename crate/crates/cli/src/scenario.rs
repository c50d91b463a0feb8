//! Scenario definitions, the ten built-in figure reproductions, and the
//! runner that turns a scenario into CSV data plus a gnuplot script.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use std::path::Path;

use thinspec_core::constants::{beta_from_temperature, HBAR, NANOKELVIN};
use thinspec_core::dynamics::{
    derive_params, husimi_q, husimi_q_ensemble, order_parameter_series,
    order_parameter_thermal_coherent, DecaySeries, PhysicalParams, QGrid, Spectrum,
};
use thinspec_core::states::{
    coherent_state, squeezed_state, thermal_ensemble, FockVector, NumberEnsemble, SqueezeSpec,
};
use thinspec_core::thinspec::{
    bogoliubov_omega, combine_collapse_times, quasiparticle_collapse_scale,
    quasiparticle_collapse_scaling, quasiparticle_offdiag_thermal,
    quasiparticle_offdiag_thermal_coherent, quasiparticle_offdiag_thermal_oracle,
    reduced_offdiag_two_state, reduced_offdiag_two_state_oracle, two_state_collapse_scale,
    CondensateLevels, PGrid, ThinSpectrumModel,
};

use crate::output::{fmt_num, line_plot_script, q_panel_script, write_csv, write_text};

const TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Trap and gas inputs, defaulting to the reference set: a_s = 10 nm,
/// a_ho = 1 um, rho = 1e21 m^-3, omega_tr = 100 1/s, N = 100 atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub a_s: f64,
    pub a_ho: f64,
    pub rho: f64,
    pub omega_tr: f64,
    pub n_atoms: f64,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self {
            a_s: 1e-8,
            a_ho: 1e-6,
            rho: 1e21,
            omega_tr: 100.0,
            n_atoms: 100.0,
        }
    }
}

impl ParamSet {
    pub fn derive(&self) -> Result<PhysicalParams> {
        let mass = HBAR / (self.a_ho * self.a_ho * self.omega_tr);
        derive_params(self.a_s, mass, self.omega_tr, self.rho, self.n_atoms)
            .map_err(|e| anyhow!("invalid physical parameters: {e}"))
    }

    fn meta(&self) -> Vec<(String, String)> {
        vec![
            ("a_s".into(), fmt_num(self.a_s)),
            ("a_ho".into(), fmt_num(self.a_ho)),
            ("rho".into(), fmt_num(self.rho)),
            ("omega_tr".into(), fmt_num(self.omega_tr)),
            ("N".into(), fmt_num(self.n_atoms)),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Coherent { alpha: f64 },
    Squeezed { alpha: f64, zeta: Complex64 },
    Thermal { temp_nk: f64 },
    ThermalCoherent { alpha: f64, temp_nk: f64 },
}

impl StateSpec {
    fn describe(&self) -> String {
        match self {
            StateSpec::Coherent { alpha } => format!("coherent alpha={alpha}"),
            StateSpec::Squeezed { alpha, zeta } => {
                format!("squeezed alpha={alpha} zeta={}+{}i", zeta.re, zeta.im)
            }
            StateSpec::Thermal { temp_nk } => format!("thermal T={temp_nk} nK"),
            StateSpec::ThermalCoherent { alpha, temp_nk } => {
                format!("thermal-coherent alpha={alpha} T={temp_nk} nK")
            }
        }
    }

    fn alpha(&self) -> f64 {
        match self {
            StateSpec::Coherent { alpha } => *alpha,
            StateSpec::Squeezed { alpha, .. } => *alpha,
            StateSpec::Thermal { .. } => 0.0,
            StateSpec::ThermalCoherent { alpha, .. } => *alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    U1,
    InteractionOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub t_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    /// |<a(t)>| for one or more initial states on a shared dimensionless
    /// time grid (units hbar/u).
    OrderParameter {
        states: Vec<(String, StateSpec)>,
        spectrum: SpectrumKind,
        window: TimeWindow,
    },
    /// Q-function snapshots; each entry is (label, state, tau).
    QFunction {
        snapshots: Vec<(String, StateSpec, f64)>,
        spectrum: SpectrumKind,
        grid_points: usize,
        grid_extent: Option<f64>,
    },
    /// Two-state thin-spectrum decay; window in units of the decay scale
    /// hbar beta / delta.
    ThinTwoState {
        delta: f64,
        temp_nk: f64,
        window: TimeWindow,
        with_oracle: bool,
    },
    /// Quasi-particle off-diagonal decay; window in trap units t*omega_tr.
    /// `b_param` overrides the interaction scale via
    /// u0 rho0 = b_param/(beta N0); otherwise u0 rho0 = u_tilde * N0.
    Quasiparticle {
        n0: f64,
        temp_nk: f64,
        m: u32,
        alpha: Option<f64>,
        b_param: Option<f64>,
        with_oracle: bool,
        window: TimeWindow,
    },
    /// Independent thin spectra with several inertia shifts; window in units
    /// of the combined collapse time.
    MultiSymmetry {
        deltas: Vec<f64>,
        temp_nk: f64,
        window: TimeWindow,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ParamSet,
    pub model: ModelSpec,
    /// Base name for output files; defaults to the scenario name.
    pub output_stem: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: Vec<String>,
}

fn validate_window(name: &str, w: &TimeWindow) -> Result<()> {
    if !(w.t_max > 0.0 && w.t_max.is_finite()) {
        bail!("scenario '{name}': t_max must be positive and finite, got {}", w.t_max);
    }
    if w.points < 2 {
        bail!("scenario '{name}': points must be at least 2, got {}", w.points);
    }
    Ok(())
}

enum BuiltState {
    Pure(FockVector),
    Mixed(NumberEnsemble),
}

impl BuiltState {
    fn len(&self) -> usize {
        match self {
            BuiltState::Pure(v) => v.amplitudes.len(),
            BuiltState::Mixed(e) => e.max_len(),
        }
    }

    fn mean_number(&self) -> f64 {
        match self {
            BuiltState::Pure(v) => v.mean_number(),
            BuiltState::Mixed(e) => e.mean_number(),
        }
    }

    fn series(&self, spectrum: &Spectrum, times: &[f64]) -> Result<DecaySeries> {
        let r = match self {
            BuiltState::Pure(v) => order_parameter_series(v, spectrum, times),
            BuiltState::Mixed(e) => order_parameter_thermal_coherent(e, spectrum, times),
        };
        r.map_err(|e| anyhow!("order-parameter series: {e}"))
    }

    fn husimi(
        &self,
        spectrum: &Spectrum,
        tau: f64,
        grid: &QGrid,
    ) -> Result<thinspec_core::dynamics::QField> {
        let r = match self {
            BuiltState::Pure(v) => husimi_q(v, spectrum, tau, grid),
            BuiltState::Mixed(e) => husimi_q_ensemble(e, spectrum, tau, grid),
        };
        r.map_err(|e| anyhow!("Q-function: {e}"))
    }
}

/// Dimensionless interaction-only energies (n^2 - n)/2 up to the point where
/// the Boltzmann weight has decayed below the ensemble cutoff.
fn interaction_energies(beta_utilde: f64) -> Vec<f64> {
    let mut energies = vec![0.0, 0.0];
    let mut n = 2u64;
    loop {
        let e = 0.5 * ((n * n - n) as f64);
        energies.push(e);
        if beta_utilde * e > 30.0 || n > 100_000 {
            break;
        }
        n += 1;
    }
    energies
}

fn build_state(spec: &StateSpec, p: &PhysicalParams) -> Result<BuiltState> {
    match spec {
        StateSpec::Coherent { alpha } => Ok(BuiltState::Pure(
            coherent_state(c(*alpha, 0.0), TOL).map_err(|e| anyhow!("coherent state: {e}"))?,
        )),
        StateSpec::Squeezed { alpha, zeta } => {
            let spec = SqueezeSpec::from_zeta(c(*alpha, 0.0), *zeta)
                .map_err(|e| anyhow!("squeeze spec: {e}"))?;
            Ok(BuiltState::Pure(
                squeezed_state(&spec, TOL).map_err(|e| anyhow!("squeezed state: {e}"))?,
            ))
        }
        StateSpec::Thermal { temp_nk } => build_ensemble(p, *temp_nk, 0.0),
        StateSpec::ThermalCoherent { alpha, temp_nk } => build_ensemble(p, *temp_nk, *alpha),
    }
}

fn build_ensemble(p: &PhysicalParams, temp_nk: f64, alpha: f64) -> Result<BuiltState> {
    if !(temp_nk > 0.0) {
        bail!("temperature must be positive, got {temp_nk} nK");
    }
    let beta = p.beta_utilde(temp_nk * NANOKELVIN);
    let energies = interaction_energies(beta);
    let ens = thermal_ensemble(beta, &energies, c(alpha, 0.0), TOL)
        .map_err(|e| anyhow!("thermal ensemble at {temp_nk} nK: {e}"))?;
    Ok(BuiltState::Mixed(ens))
}

fn make_spectrum(kind: SpectrumKind, levels: usize, p: &PhysicalParams) -> Spectrum {
    match kind {
        SpectrumKind::U1 => Spectrum::u1(levels, p.n_atoms),
        SpectrumKind::InteractionOnly => Spectrum::interaction_only(levels),
    }
}

fn spectrum_name(kind: SpectrumKind) -> &'static str {
    match kind {
        SpectrumKind::U1 => "u1",
        SpectrumKind::InteractionOnly => "interaction-only",
    }
}

fn collapse_summary(label: &str, series: &DecaySeries, seconds_per_tau: f64) -> String {
    let mut s = format!("  {label}:");
    match series.collapse_time {
        Some(tc) => {
            s.push_str(&format!(
                " collapse tau={tc:.4e} (t={:.4e} s)",
                tc * seconds_per_tau
            ));
        }
        None => s.push_str(" no collapse in window"),
    }
    if let Some(tr) = series.revival_time {
        s.push_str(&format!(
            "; revival tau={tr:.4e} (t={:.4e} s)",
            tr * seconds_per_tau
        ));
    }
    s
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            bail!("scenario name must not be empty");
        }
        match &self.model {
            ModelSpec::OrderParameter { states, window, .. } => {
                validate_window(&self.name, window)?;
                if states.is_empty() {
                    bail!("scenario '{}': needs at least one state", self.name);
                }
            }
            ModelSpec::QFunction {
                snapshots,
                grid_points,
                ..
            } => {
                if snapshots.is_empty() {
                    bail!("scenario '{}': needs at least one snapshot", self.name);
                }
                if *grid_points < 11 {
                    bail!(
                        "scenario '{}': grid_points must be at least 11, got {grid_points}",
                        self.name
                    );
                }
            }
            ModelSpec::ThinTwoState { delta, temp_nk, window, .. } => {
                validate_window(&self.name, window)?;
                if !(delta.abs() < 1.0) {
                    bail!("scenario '{}': |delta| must be below 1, got {delta}", self.name);
                }
                if !(*temp_nk > 0.0) {
                    bail!("scenario '{}': T_nK must be positive, got {temp_nk}", self.name);
                }
            }
            ModelSpec::Quasiparticle { n0, temp_nk, m, window, .. } => {
                validate_window(&self.name, window)?;
                if !(*n0 > 1.0) {
                    bail!("scenario '{}': N0 must exceed 1, got {n0}", self.name);
                }
                if !(*temp_nk > 0.0) {
                    bail!("scenario '{}': T_nK must be positive, got {temp_nk}", self.name);
                }
                if *m == 0 {
                    bail!("scenario '{}': m must be at least 1", self.name);
                }
            }
            ModelSpec::MultiSymmetry { deltas, temp_nk, window } => {
                validate_window(&self.name, window)?;
                if deltas.is_empty() {
                    bail!("scenario '{}': deltas must not be empty", self.name);
                }
                if !(*temp_nk > 0.0) {
                    bail!("scenario '{}': T_nK must be positive, got {temp_nk}", self.name);
                }
            }
        }
        Ok(())
    }

    fn stem(&self) -> &str {
        self.output_stem.as_deref().unwrap_or(&self.name)
    }

    pub fn run(&self, out_dir: &Path) -> Result<RunOutput> {
        self.validate()?;
        std::fs::create_dir_all(out_dir)
            .with_context(|| format!("creating {}", out_dir.display()))?;
        match &self.model {
            ModelSpec::OrderParameter { states, spectrum, window } => {
                self.run_order_parameter(out_dir, states, *spectrum, window)
            }
            ModelSpec::QFunction {
                snapshots,
                spectrum,
                grid_points,
                grid_extent,
            } => self.run_q_function(out_dir, snapshots, *spectrum, *grid_points, *grid_extent),
            ModelSpec::ThinTwoState { delta, temp_nk, window, with_oracle } => {
                self.run_thin_two_state(out_dir, *delta, *temp_nk, window, *with_oracle)
            }
            ModelSpec::Quasiparticle {
                n0,
                temp_nk,
                m,
                alpha,
                b_param,
                with_oracle,
                window,
            } => self.run_quasiparticle(
                out_dir,
                *n0,
                *temp_nk,
                *m,
                *alpha,
                *b_param,
                *with_oracle,
                window,
            ),
            ModelSpec::MultiSymmetry { deltas, temp_nk, window } => {
                self.run_multi_symmetry(out_dir, deltas, *temp_nk, window)
            }
        }
    }

    fn base_meta(&self) -> Vec<(String, String)> {
        let mut meta = vec![
            ("scenario".into(), self.name.clone()),
            (
                "generated-by".into(),
                format!("thinspec {}", env!("CARGO_PKG_VERSION")),
            ),
        ];
        meta.extend(self.params.meta());
        meta
    }

    fn run_order_parameter(
        &self,
        out_dir: &Path,
        states: &[(String, StateSpec)],
        spectrum_kind: SpectrumKind,
        window: &TimeWindow,
    ) -> Result<RunOutput> {
        let p = self.params.derive()?;
        let built: Vec<(String, BuiltState)> = states
            .iter()
            .map(|(label, spec)| Ok((label.clone(), build_state(spec, &p)?)))
            .collect::<Result<_>>()?;
        let levels = built.iter().map(|(_, s)| s.len()).max().unwrap() + 1;
        let spectrum = make_spectrum(spectrum_kind, levels, &p);
        let times = linspace(0.0, window.t_max, window.points);
        let unit = p.time_unit_seconds();

        let mut series = Vec::new();
        for (label, state) in &built {
            series.push((label.clone(), state.series(&spectrum, &times)?));
        }

        let mut meta = self.base_meta();
        for (label, spec) in states {
            meta.push((format!("state_{label}"), spec.describe()));
        }
        meta.push(("spectrum".into(), spectrum_name(spectrum_kind).into()));
        meta.push(("t_max".into(), fmt_num(window.t_max)));
        meta.push(("points".into(), format!("{}", window.points)));
        meta.push(("time_unit_seconds".into(), fmt_num(unit)));
        let mut header = vec!["tau".to_string(), "t_seconds".to_string()];
        header.extend(series.iter().map(|(label, _)| format!("abs_a_{label}")));
        let rows: Vec<Vec<String>> = (0..times.len())
            .map(|k| {
                let mut row = vec![fmt_num(times[k]), fmt_num(times[k] * unit)];
                row.extend(series.iter().map(|(_, s)| fmt_num(s.values[k].norm())));
                row
            })
            .collect();

        let csv = out_dir.join(format!("{}.csv", self.stem()));
        write_csv(&csv, &meta, &header, &rows)?;
        let gp = out_dir.join(format!("{}.gp", self.stem()));
        let y_cols: Vec<usize> = (3..3 + series.len()).collect();
        write_text(
            &gp,
            &line_plot_script(
                &format!("{}.csv", self.stem()),
                "tau (hbar/u)",
                "|<a>|",
                &y_cols,
            ),
        )?;

        let mut summary = vec![format!(
            "{}: wrote {} and {}",
            self.name,
            csv.display(),
            gp.display()
        )];
        for (label, s) in &series {
            summary.push(collapse_summary(label, s, unit));
        }
        Ok(RunOutput { summary })
    }

    fn run_q_function(
        &self,
        out_dir: &Path,
        snapshots: &[(String, StateSpec, f64)],
        spectrum_kind: SpectrumKind,
        grid_points: usize,
        grid_extent: Option<f64>,
    ) -> Result<RunOutput> {
        let p = self.params.derive()?;
        let built: Vec<(String, BuiltState, f64)> = snapshots
            .iter()
            .map(|(label, spec, tau)| Ok((label.clone(), build_state(spec, &p)?, *tau)))
            .collect::<Result<_>>()?;
        let levels = built.iter().map(|(_, s, _)| s.len()).max().unwrap() + 1;
        let spectrum = make_spectrum(spectrum_kind, levels, &p);
        let extent = grid_extent.unwrap_or_else(|| {
            let support = built
                .iter()
                .map(|(_, s, _)| s.mean_number().sqrt())
                .fold(0.0f64, f64::max);
            let alpha = snapshots
                .iter()
                .map(|(_, spec, _)| spec.alpha().abs())
                .fold(0.0f64, f64::max);
            support.max(alpha) + 5.0
        });
        let grid = QGrid::centered(extent, grid_points);

        let mut meta = self.base_meta();
        meta.push(("spectrum".into(), spectrum_name(spectrum_kind).into()));
        meta.push(("grid_extent".into(), fmt_num(extent)));
        meta.push(("grid_points".into(), format!("{grid_points}")));
        let header = vec![
            "snapshot".to_string(),
            "re".to_string(),
            "im".to_string(),
            "q".to_string(),
        ];
        let mut rows = Vec::new();
        let mut summary = Vec::new();
        let mut labels = Vec::new();
        for (label, state, tau) in &built {
            let q = state.husimi(&spectrum, *tau, &grid)?;
            summary.push(format!(
                "  {label}: tau={tau}, grid mass {:.6}",
                q.total_mass()
            ));
            for (iy, &gim) in q.grid_im.iter().enumerate() {
                for (ix, &gre) in q.grid_re.iter().enumerate() {
                    rows.push(vec![
                        label.clone(),
                        fmt_num(gre),
                        fmt_num(gim),
                        fmt_num(q.value(ix, iy)),
                    ]);
                }
            }
            labels.push(label.clone());
            meta.push((format!("snapshot_{label}"), format!("tau={tau}")));
        }

        let csv = out_dir.join(format!("{}.csv", self.stem()));
        write_csv(&csv, &meta, &header, &rows)?;
        let gp = out_dir.join(format!("{}.gp", self.stem()));
        write_text(&gp, &q_panel_script(&format!("{}.csv", self.stem()), &labels))?;

        let mut lines = vec![format!(
            "{}: wrote {} and {}",
            self.name,
            csv.display(),
            gp.display()
        )];
        lines.extend(summary);
        Ok(RunOutput { summary: lines })
    }

    fn run_thin_two_state(
        &self,
        out_dir: &Path,
        delta: f64,
        temp_nk: f64,
        window: &TimeWindow,
        with_oracle: bool,
    ) -> Result<RunOutput> {
        let beta = beta_from_temperature(temp_nk * NANOKELVIN);
        let model = ThinSpectrumModel::new(1.0, delta, 0.0, beta)
            .map_err(|e| anyhow!("thin-spectrum model: {e}"))?;
        let scale = two_state_collapse_scale(&model);
        let times = linspace(0.0, window.t_max * scale, window.points);
        let closed = reduced_offdiag_two_state(&model, &times);
        let oracle = if with_oracle {
            Some(
                reduced_offdiag_two_state_oracle(&model, &PGrid::default(), &times)
                    .map_err(|e| anyhow!("two-state oracle: {e}"))?,
            )
        } else {
            None
        };

        let mut meta = self.base_meta();
        meta.push(("delta".into(), fmt_num(delta)));
        meta.push(("T_nK".into(), fmt_num(temp_nk)));
        meta.push(("t_max".into(), fmt_num(window.t_max)));
        meta.push(("points".into(), format!("{}", window.points)));
        meta.push(("collapse_scale_seconds".into(), fmt_num(scale)));
        let mut header = vec![
            "t_over_tc".to_string(),
            "t_seconds".to_string(),
            "rho_od_closed".to_string(),
        ];
        if oracle.is_some() {
            header.push("rho_od_oracle".to_string());
        }
        let rows: Vec<Vec<String>> = (0..times.len())
            .map(|k| {
                let mut row = vec![
                    fmt_num(times[k] / scale),
                    fmt_num(times[k]),
                    fmt_num(closed.magnitudes[k]),
                ];
                if let Some(o) = &oracle {
                    row.push(fmt_num(o.magnitudes[k]));
                }
                row
            })
            .collect();

        let csv = out_dir.join(format!("{}.csv", self.stem()));
        write_csv(&csv, &meta, &header, &rows)?;
        let gp = out_dir.join(format!("{}.gp", self.stem()));
        let y_cols: Vec<usize> = if oracle.is_some() { vec![3, 4] } else { vec![3] };
        write_text(
            &gp,
            &line_plot_script(
                &format!("{}.csv", self.stem()),
                "t / t_c",
                "|rho_od|",
                &y_cols,
            ),
        )?;

        let mut summary = vec![format!(
            "{}: wrote {} and {}",
            self.name,
            csv.display(),
            gp.display()
        )];
        summary.push(format!(
            "  closed form: collapse t={:.4e} s (scale hbar*beta/delta = {:.4e} s)",
            closed.collapse_time, scale
        ));
        if let Some(o) = &oracle {
            summary.push(format!("  oracle: collapse t={:.4e} s", o.collapse_time));
        }
        Ok(RunOutput { summary })
    }

    #[allow(clippy::too_many_arguments)]
    fn run_quasiparticle(
        &self,
        out_dir: &Path,
        n0: f64,
        temp_nk: f64,
        m: u32,
        alpha: Option<f64>,
        b_param: Option<f64>,
        with_oracle: bool,
        window: &TimeWindow,
    ) -> Result<RunOutput> {
        let p = self.params.derive()?;
        let beta = beta_from_temperature(temp_nk * NANOKELVIN);
        let u0rho0 = match b_param {
            Some(b) => b / (beta * n0),
            None => p.u_tilde * n0,
        };
        let omega = bogoliubov_omega(100.0 * u0rho0, u0rho0);
        let levels = CondensateLevels::new(n0, u0rho0, omega, beta)
            .map_err(|e| anyhow!("condensate levels: {e}"))?;
        let scale = quasiparticle_collapse_scale(&levels);
        let times = linspace(0.0, window.t_max / p.omega_tr, window.points);

        let thermal = quasiparticle_offdiag_thermal(&levels, &times);
        let oracle = if with_oracle {
            Some(
                quasiparticle_offdiag_thermal_oracle(&levels, &times)
                    .map_err(|e| anyhow!("quasi-particle oracle: {e}"))?,
            )
        } else {
            None
        };
        let coherent = match alpha {
            Some(a) => Some(
                quasiparticle_offdiag_thermal_coherent(&levels, c(a, 0.0), &times)
                    .map_err(|e| anyhow!("thermal-coherent decay: {e}"))?,
            ),
            None => None,
        };

        let mut meta = self.base_meta();
        meta.push(("N0".into(), fmt_num(n0)));
        meta.push(("T_nK".into(), fmt_num(temp_nk)));
        meta.push(("m".into(), format!("{m}")));
        meta.push(("t_max".into(), fmt_num(window.t_max)));
        meta.push(("points".into(), format!("{}", window.points)));
        meta.push(("u0rho0_joule".into(), fmt_num(u0rho0)));
        meta.push(("collapse_scale_seconds".into(), fmt_num(scale)));
        if let Some(a) = alpha {
            meta.push(("alpha".into(), fmt_num(a)));
        }
        if let Some(b) = b_param {
            meta.push(("b_param".into(), fmt_num(b)));
        }
        let mut header = vec![
            "tau".to_string(),
            "t_seconds".to_string(),
            "t_over_tc".to_string(),
            "rho_od_thermal".to_string(),
        ];
        if oracle.is_some() {
            header.push("rho_od_oracle".to_string());
        }
        if coherent.is_some() {
            header.push("rho_od_thermal_coherent".to_string());
        }
        let rows: Vec<Vec<String>> = (0..times.len())
            .map(|k| {
                let mut row = vec![
                    fmt_num(times[k] * p.omega_tr),
                    fmt_num(times[k]),
                    fmt_num(times[k] / scale),
                    fmt_num(thermal.magnitudes[k]),
                ];
                if let Some(o) = &oracle {
                    row.push(fmt_num(o.magnitudes[k]));
                }
                if let Some(tc) = &coherent {
                    row.push(fmt_num(tc.magnitudes[k]));
                }
                row
            })
            .collect();

        let csv = out_dir.join(format!("{}.csv", self.stem()));
        write_csv(&csv, &meta, &header, &rows)?;
        let gp = out_dir.join(format!("{}.gp", self.stem()));
        let n_cols = 4 + oracle.is_some() as usize + coherent.is_some() as usize;
        let y_cols: Vec<usize> = (4..=n_cols).collect();
        write_text(
            &gp,
            &line_plot_script(
                &format!("{}.csv", self.stem()),
                "t omega_tr",
                "|rho_od|",
                &y_cols,
            ),
        )?;

        let mut summary = vec![format!(
            "{}: wrote {} and {}",
            self.name,
            csv.display(),
            gp.display()
        )];
        summary.push(format!(
            "  thermal: collapse t={:.4e} s (scale hbar*N0*beta = {:.4e} s)",
            thermal.collapse_time, scale
        ));
        if let Some(o) = &oracle {
            summary.push(format!("  oracle: collapse t={:.4e} s", o.collapse_time));
        }
        if let Some(tc) = &coherent {
            summary.push(format!(
                "  thermal-coherent: collapse t={:.4e} s",
                tc.collapse_time
            ));
        }
        if m > 1 {
            let tcm = quasiparticle_collapse_scaling(&levels, m)
                .map_err(|e| anyhow!("m-scaling: {e}"))?;
            summary.push(format!("  m={m} excitation: collapse t={tcm:.4e} s"));
        }
        Ok(RunOutput { summary })
    }

    fn run_multi_symmetry(
        &self,
        out_dir: &Path,
        deltas: &[f64],
        temp_nk: f64,
        window: &TimeWindow,
    ) -> Result<RunOutput> {
        let beta = beta_from_temperature(temp_nk * NANOKELVIN);
        let models: Vec<ThinSpectrumModel> = deltas
            .iter()
            .map(|&d| {
                ThinSpectrumModel::new(1.0, d, 0.0, beta)
                    .map_err(|e| anyhow!("thin-spectrum model (delta={d}): {e}"))
            })
            .collect::<Result<_>>()?;
        let individual: Vec<f64> = models
            .iter()
            .map(|m| reduced_offdiag_two_state(m, &[0.0]).collapse_time)
            .collect();
        let combined = combine_collapse_times(&individual);
        let times = linspace(0.0, window.t_max * combined, window.points);
        let series: Vec<_> = models
            .iter()
            .map(|m| reduced_offdiag_two_state(m, &times))
            .collect();

        let mut meta = self.base_meta();
        meta.push((
            "deltas".into(),
            deltas
                .iter()
                .map(|d| fmt_num(*d))
                .collect::<Vec<_>>()
                .join(" "),
        ));
        meta.push(("T_nK".into(), fmt_num(temp_nk)));
        meta.push(("t_max".into(), fmt_num(window.t_max)));
        meta.push(("points".into(), format!("{}", window.points)));
        meta.push(("combined_collapse_seconds".into(), fmt_num(combined)));
        let mut header = vec!["t_over_tc".to_string(), "t_seconds".to_string()];
        for (i, _) in deltas.iter().enumerate() {
            header.push(format!("rho_od_delta{}", i + 1));
        }
        header.push("rho_od_combined".to_string());
        let rows: Vec<Vec<String>> = (0..times.len())
            .map(|k| {
                let mut row = vec![fmt_num(times[k] / combined), fmt_num(times[k])];
                let mut product = 1.0;
                for s in &series {
                    row.push(fmt_num(s.magnitudes[k]));
                    product *= s.magnitudes[k];
                }
                row.push(fmt_num(product));
                row
            })
            .collect();

        let csv = out_dir.join(format!("{}.csv", self.stem()));
        write_csv(&csv, &meta, &header, &rows)?;
        let gp = out_dir.join(format!("{}.gp", self.stem()));
        let y_cols: Vec<usize> = (3..3 + deltas.len() + 1).collect();
        write_text(
            &gp,
            &line_plot_script(
                &format!("{}.csv", self.stem()),
                "t / t_c(combined)",
                "|rho_od|",
                &y_cols,
            ),
        )?;

        let mut summary = vec![format!(
            "{}: wrote {} and {}",
            self.name,
            csv.display(),
            gp.display()
        )];
        for (d, tc) in deltas.iter().zip(individual.iter()) {
            summary.push(format!("  delta={d}: collapse t={tc:.4e} s"));
        }
        summary.push(format!("  combined: collapse t={combined:.4e} s"));
        Ok(RunOutput { summary })
    }
}

/// The ten built-in figure scenarios; every reference parameter set lives
/// here.
pub fn builtins() -> Vec<Scenario> {
    let alpha = 10.0;
    let params = ParamSet::default();
    let mut out = Vec::new();

    out.push(Scenario {
        name: "figure1".into(),
        params,
        model: ModelSpec::OrderParameter {
            states: vec![
                ("coherent".into(), StateSpec::Coherent { alpha }),
                (
                    "zeta05".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.5, 0.0) },
                ),
                (
                    "zeta09".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.9, 0.0) },
                ),
            ],
            spectrum: SpectrumKind::U1,
            window: TimeWindow { t_max: 1.0, points: 2000 },
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure2".into(),
        params,
        model: ModelSpec::QFunction {
            snapshots: vec![
                (
                    "zeta09".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.9, 0.0) },
                    0.0,
                ),
                (
                    "zeta05".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.5, 0.0) },
                    0.0,
                ),
                ("zeta00".into(), StateSpec::Coherent { alpha }, 0.0),
            ],
            spectrum: SpectrumKind::U1,
            grid_points: 201,
            grid_extent: None,
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure3".into(),
        params,
        model: ModelSpec::QFunction {
            snapshots: [0.0, 0.02, 0.10, 0.40]
                .iter()
                .map(|&tau| {
                    (
                        format!("tau{tau:.2}"),
                        StateSpec::Squeezed { alpha, zeta: c(0.5, 0.0) },
                        tau,
                    )
                })
                .collect(),
            spectrum: SpectrumKind::U1,
            grid_points: 201,
            grid_extent: None,
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure4".into(),
        params,
        model: ModelSpec::OrderParameter {
            states: vec![
                ("coherent".into(), StateSpec::Coherent { alpha }),
                (
                    "zeta05".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.5, 0.0) },
                ),
                (
                    "zeta05i".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.0, 0.5) },
                ),
                (
                    "zeta_m05".into(),
                    StateSpec::Squeezed { alpha, zeta: c(-0.5, 0.0) },
                ),
            ],
            spectrum: SpectrumKind::U1,
            window: TimeWindow { t_max: 0.5, points: 2000 },
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure5".into(),
        params,
        model: ModelSpec::QFunction {
            snapshots: vec![
                (
                    "zeta05".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.5, 0.0) },
                    0.0,
                ),
                ("zeta00".into(), StateSpec::Coherent { alpha }, 0.0),
                (
                    "zeta_m05".into(),
                    StateSpec::Squeezed { alpha, zeta: c(-0.5, 0.0) },
                    0.0,
                ),
                (
                    "zeta05i".into(),
                    StateSpec::Squeezed { alpha, zeta: c(0.0, 0.5) },
                    0.0,
                ),
            ],
            spectrum: SpectrumKind::U1,
            grid_points: 201,
            grid_extent: None,
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure6".into(),
        params,
        model: ModelSpec::OrderParameter {
            states: vec![
                ("T1000nK".into(), StateSpec::ThermalCoherent { alpha, temp_nk: 1000.0 }),
                ("T100nK".into(), StateSpec::ThermalCoherent { alpha, temp_nk: 100.0 }),
                ("T10nK".into(), StateSpec::ThermalCoherent { alpha, temp_nk: 10.0 }),
                ("T1nK".into(), StateSpec::ThermalCoherent { alpha, temp_nk: 1.0 }),
                ("T0p001nK".into(), StateSpec::ThermalCoherent { alpha, temp_nk: 0.001 }),
            ],
            spectrum: SpectrumKind::InteractionOnly,
            window: TimeWindow { t_max: 1.0, points: 2000 },
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure7".into(),
        params,
        model: ModelSpec::ThinTwoState {
            delta: 0.1,
            temp_nk: 100.0,
            window: TimeWindow { t_max: 5.0, points: 2000 },
            with_oracle: true,
        },
        output_stem: None,
    });

    // Unit interaction factor beta*u0rho0*N0 = 1; the window covers five
    // units of the reduced time t/(hbar beta (N0-1)).
    let fig8_n0 = 1e3;
    let fig8_beta = beta_from_temperature(10.0 * NANOKELVIN);
    let fig8_tau_max = 5.0 * HBAR * fig8_beta * (fig8_n0 - 1.0) * params.omega_tr;
    out.push(Scenario {
        name: "figure8".into(),
        params,
        model: ModelSpec::Quasiparticle {
            n0: fig8_n0,
            temp_nk: 10.0,
            m: 1,
            alpha: None,
            b_param: Some(1.0),
            with_oracle: true,
            window: TimeWindow { t_max: fig8_tau_max, points: 2000 },
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure9".into(),
        params,
        model: ModelSpec::Quasiparticle {
            n0: 100.0,
            temp_nk: 10.0,
            m: 1,
            alpha: Some(alpha),
            b_param: None,
            with_oracle: false,
            window: TimeWindow { t_max: 1.5, points: 2000 },
        },
        output_stem: None,
    });

    out.push(Scenario {
        name: "figure10".into(),
        params,
        model: ModelSpec::Quasiparticle {
            n0: 100.0,
            temp_nk: 100.0,
            m: 1,
            alpha: Some(alpha),
            b_param: None,
            with_oracle: false,
            window: TimeWindow { t_max: 0.5, points: 2000 },
        },
        output_stem: None,
    });

    out
}

pub fn builtin(name: &str) -> Option<Scenario> {
    builtins().into_iter().find(|s| s.name == name)
}

pub fn describe_builtins() -> Vec<(String, String)> {
    builtins()
        .iter()
        .map(|s| {
            let desc = match &s.model {
                ModelSpec::OrderParameter { states, .. } => format!(
                    "order-parameter decay: {}",
                    states
                        .iter()
                        .map(|(_, spec)| spec.describe())
                        .collect::<Vec<_>>()
                        .join("; ")
                ),
                ModelSpec::QFunction { snapshots, .. } => format!(
                    "Q-function snapshots: {}",
                    snapshots
                        .iter()
                        .map(|(label, _, tau)| format!("{label} (tau={tau})"))
                        .collect::<Vec<_>>()
                        .join("; ")
                ),
                ModelSpec::ThinTwoState { delta, temp_nk, .. } => {
                    format!("two-state thin-spectrum decay, delta={delta}, T={temp_nk} nK")
                }
                ModelSpec::Quasiparticle { n0, temp_nk, alpha, .. } => match alpha {
                    Some(a) => format!(
                        "quasi-particle decay, N0={n0}, T={temp_nk} nK, thermal vs thermal-coherent (alpha={a})"
                    ),
                    None => format!("quasi-particle decay, N0={n0}, T={temp_nk} nK, thermal"),
                },
                ModelSpec::MultiSymmetry { deltas, temp_nk, .. } => {
                    format!("multi-symmetry decay, deltas={deltas:?}, T={temp_nk} nK")
                }
            };
            (s.name.clone(), desc)
        })
        .collect()
}
