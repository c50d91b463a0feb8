//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them). The CLI
//! determinism criterion lives in the CLI crate's acceptance suite.

use num_complex::Complex64;
use std::f64::consts::PI;

use thinspec_core::constants::{beta_from_temperature, HBAR, NANOKELVIN};
use thinspec_core::dynamics::{
    collapse_time_estimate, derive_params, extract_collapse_time, husimi_q,
    order_parameter_coherent_exact, order_parameter_series, order_parameter_short_time,
    order_parameter_thermal_coherent, PhysicalParams, QField, QGrid, Spectrum,
};
use thinspec_core::states::{
    coherent_state, squeezed_state, thermal_ensemble, FockVector, SqueezeSpec,
};
use thinspec_core::thinspec::{
    combine_collapse_times, delta_thomas_fermi, quasiparticle_collapse_scale,
    quasiparticle_collapse_scaling, quasiparticle_offdiag_thermal,
    quasiparticle_offdiag_thermal_coherent, quasiparticle_offdiag_thermal_oracle,
    reduced_offdiag_two_state, reduced_offdiag_two_state_oracle, two_state_joint_oracle,
    CondensateLevels, PGrid, ThinSpectrumModel,
};

const TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Reference trap: a_s = 10 nm, a_ho = 1 um at omega_tr = 100 1/s,
/// rho = 1e21 m^-3.
fn reference_params(n_atoms: f64) -> PhysicalParams {
    let omega = 100.0;
    let a_ho: f64 = 1e-6;
    let mass = HBAR / (a_ho * a_ho * omega);
    derive_params(1e-8, mass, omega, 1e21, n_atoms).unwrap()
}

fn squeezed(alpha: f64, zeta: Complex64) -> FockVector {
    if zeta.norm() == 0.0 {
        coherent_state(c(alpha, 0.0), TOL).unwrap()
    } else {
        squeezed_state(&SqueezeSpec::from_zeta(c(alpha, 0.0), zeta).unwrap(), TOL).unwrap()
    }
}

fn efold_time(state: &FockVector, window: f64, points: usize) -> f64 {
    let spectrum = Spectrum::u1(state.amplitudes.len(), 0.0);
    let times = linspace(0.0, window, points);
    let series = order_parameter_series(state, &spectrum, &times).unwrap();
    extract_collapse_time(&series).unwrap()
}

#[test]
fn criterion_01_collapse_time_estimate() {
    let p = reference_params(1e6);
    let tc = collapse_time_estimate(&p);
    assert!(
        (0.05..=0.15).contains(&tc),
        "t_c = {tc} s outside [0.05, 0.15]"
    );
    println!("PASS criterion 1: collapse-time estimate t_c = {tc:.4} s in [0.05, 0.15]");
}

#[test]
fn criterion_02_series_vs_exact_oracle() {
    let state = coherent_state(c(10.0, 0.0), TOL).unwrap();
    let spectrum = Spectrum::u1(state.amplitudes.len(), 0.0);
    let times = linspace(0.0, 7.0, 2000);
    let series = order_parameter_series(&state, &spectrum, &times).unwrap();
    let exact = order_parameter_coherent_exact(100.0, 0.0, &times);
    let mut worst = 0.0f64;
    for k in 0..times.len() {
        worst = worst.max((series.values[k] - exact.values[k]).norm());
    }
    assert!(worst < 1e-8 * 10.0, "max |series - exact| = {worst:.3e}");

    let revival = order_parameter_series(&state, &spectrum, &[2.0 * PI]).unwrap();
    let dev = (revival.values[0].norm() - 10.0).abs();
    assert!(dev < 1e-9, "revival magnitude off by {dev:.3e}");
    println!(
        "PASS criterion 2: series vs closed form max diff {worst:.3e} (< 1e-7); \
         revival |<a>(2pi)| within {dev:.3e} of 10"
    );
}

#[test]
fn criterion_03_short_time_envelope() {
    let times = linspace(0.0, 0.03, 500);
    let exact = order_parameter_coherent_exact(100.0, 0.0, &times);
    let gauss = order_parameter_short_time(100.0, 0.0, &times);
    let mut worst = 0.0f64;
    for k in 0..times.len() {
        worst = worst.max((exact.values[k] - gauss.values[k]).norm());
    }
    assert!(worst < 5e-3 * 10.0, "max diff {worst:.3e}");
    println!("PASS criterion 3: short-time Gaussian within {worst:.3e} of exact (< 0.05)");
}

#[test]
fn criterion_04_squeezing_ordering() {
    let t_coh = efold_time(&squeezed(10.0, c(0.0, 0.0)), 1.5, 8000);
    let t_05 = efold_time(&squeezed(10.0, c(0.5, 0.0)), 1.5, 8000);
    let t_09 = efold_time(&squeezed(10.0, c(0.9, 0.0)), 1.5, 8000);
    let t_05i = efold_time(&squeezed(10.0, c(0.0, 0.5)), 1.5, 8000);
    let t_m05 = efold_time(&squeezed(10.0, c(-0.5, 0.0)), 1.5, 8000);
    assert!(t_09 > 1.01 * t_05, "t(0.9)={t_09} vs t(0.5)={t_05}");
    assert!(t_05 > 1.01 * t_coh, "t(0.5)={t_05} vs t(0)={t_coh}");
    assert!(t_05i < 0.99 * t_coh, "t(0.5i)={t_05i} vs t(0)={t_coh}");
    assert!(t_m05 < 0.99 * t_coh, "t(-0.5)={t_m05} vs t(0)={t_coh}");
    println!(
        "PASS criterion 4: e-fold times tau_c: zeta=0.9 {t_09:.4} > zeta=0.5 {t_05:.4} > \
         coherent {t_coh:.4}; zeta=0.5i {t_05i:.4} < coherent; zeta=-0.5 {t_m05:.4} < coherent"
    );
}

#[test]
fn criterion_05_thermal_coherent_temperature_trend() {
    let p = reference_params(100.0);
    let energies: Vec<f64> = (0..400)
        .map(|n| 0.5 * ((n * n) as f64 - n as f64))
        .collect();
    let temps_nk = [0.001, 1.0, 10.0, 100.0, 1000.0];
    let mut efolds = Vec::new();
    for &t_nk in &temps_nk {
        let beta = p.beta_utilde(t_nk * NANOKELVIN);
        let ens = thermal_ensemble(beta, &energies, c(10.0, 0.0), TOL).unwrap();
        let spectrum = Spectrum::interaction_only(ens.max_len() + 1);
        let times = linspace(0.0, 0.5, 8000);
        let series = order_parameter_thermal_coherent(&ens, &spectrum, &times).unwrap();
        efolds.push(extract_collapse_time(&series).unwrap());
    }
    for k in 1..efolds.len() {
        assert!(
            efolds[k] < efolds[k - 1],
            "e-fold not strictly decreasing: {efolds:?} at T = {temps_nk:?} nK"
        );
    }
    // T -> 0 limit: the ground degeneracy leaves exactly two members at 1/2.
    let beta = p.beta_utilde(0.001 * NANOKELVIN);
    let ens = thermal_ensemble(beta, &energies, c(10.0, 0.0), TOL).unwrap();
    assert_eq!(ens.members.len(), 2);
    assert!((ens.members[0].0 - 0.5).abs() < 1e-12);
    assert!((ens.members[1].0 - 0.5).abs() < 1e-12);
    println!(
        "PASS criterion 5: thermal-coherent e-fold times strictly decreasing over T \
         {temps_nk:?} nK: {efolds:?}; T->0 weights = (1/2, 1/2)"
    );
}

#[test]
fn criterion_06_two_state_law() {
    // closed form vs momentum-grid oracle, unit parameters
    let model = ThinSpectrumModel::new(1.0, 0.1, 1.0, 1.0).unwrap();
    let scale = HBAR * model.beta / model.delta;
    let times = linspace(0.0, 5.0 * scale, 2000);
    let closed = reduced_offdiag_two_state(&model, &times);
    let oracle = reduced_offdiag_two_state_oracle(&model, &PGrid::default(), &times).unwrap();
    let mut worst = 0.0f64;
    for k in 0..times.len() {
        worst = worst.max((closed.magnitudes[k] - oracle.magnitudes[k]).abs());
        let x = times[k] / scale;
        let law = (1.0 + 16.0 * x * x).powf(-0.25);
        assert!((closed.magnitudes[k] - law).abs() < 1e-12);
    }
    assert!(worst < 1e-6, "closed vs oracle max diff {worst:.3e}");

    // collapse scale at T = 100 nK, delta = 0.1
    let beta = beta_from_temperature(100.0 * NANOKELVIN);
    let model = ThinSpectrumModel::new(1.0, 0.1, 0.0, beta).unwrap();
    let tc_excited = reduced_offdiag_two_state(&model, &[0.0]).collapse_time;
    assert!(
        (2e-4..=5e-3).contains(&tc_excited),
        "t_c = {tc_excited} s outside [2e-4, 5e-3]"
    );

    // ground-state estimate with the Thomas-Fermi delta
    let delta = delta_thomas_fermi(1e6, 1e3);
    let model = ThinSpectrumModel::new(1.0, delta.exact, 0.0, beta).unwrap();
    let tc_ground = reduced_offdiag_two_state(&model, &[0.0]).collapse_time;
    let lg = tc_ground.log10();
    assert!(
        lg > -1.5 && lg < -0.5,
        "ground t_c = {tc_ground} s not of order 0.1 s"
    );
    println!(
        "PASS criterion 6: closed vs oracle max diff {worst:.3e} (< 1e-6); \
         t_c(delta=0.1, 100 nK) = {tc_excited:.3e} s; t_c(delta_TF) = {tc_ground:.3e} s"
    );
}

#[test]
fn criterion_07_quasiparticle_law() {
    // closed form vs discrete-n oracle at N0 = 1e4
    let n0 = 1e4;
    let beta = beta_from_temperature(50.0 * NANOKELVIN);
    let levels = CondensateLevels::new(n0, 100.0 / (beta * n0), 0.0, beta).unwrap();
    let tc = quasiparticle_offdiag_thermal(&levels, &[0.0]).collapse_time;
    let times = linspace(0.0, 4.0 * tc, 800);
    let closed = quasiparticle_offdiag_thermal(&levels, &times);
    let oracle = quasiparticle_offdiag_thermal_oracle(&levels, &times).unwrap();
    let mut worst = 0.0f64;
    for k in 0..times.len() {
        worst = worst.max((closed.magnitudes[k] - oracle.magnitudes[k]).abs());
    }
    assert!(worst < 1e-5, "closed vs oracle max diff {worst:.3e}");

    // scale hbar N0 / k_B T across the reference condensates: 1e2..1e5 s
    for &n0 in &[1e6, 1e8] {
        for &t_nk in &[10.0, 100.0] {
            let beta = beta_from_temperature(t_nk * NANOKELVIN);
            let l = CondensateLevels::new(n0, 1.0 / (beta * n0), 0.0, beta).unwrap();
            let lg = quasiparticle_collapse_scale(&l).log10();
            assert!(
                lg > 1.5 && lg < 5.5,
                "scale 1e{lg:.2} s outside 1e2..1e5 at N0={n0}, T={t_nk} nK"
            );
        }
    }

    // m-scaling: t_c(2)/t_c(1) = 1/2 within 5%
    let t1 = quasiparticle_collapse_scaling(&levels, 1).unwrap();
    let t2 = quasiparticle_collapse_scaling(&levels, 2).unwrap();
    let ratio = t2 / t1;
    assert!((ratio - 0.5).abs() <= 0.025, "t_c(2)/t_c(1) = {ratio}");

    // log-log slopes: +1 in N0, -1 in T, within 2% over one decade
    let u0rho0 = 1e-3 / (beta * 1e4);
    let tc_of = |n0: f64, beta: f64| {
        let l = CondensateLevels::new(n0, u0rho0, 0.0, beta).unwrap();
        quasiparticle_offdiag_thermal(&l, &[0.0]).collapse_time
    };
    let slope_n = (tc_of(1e5, beta) / tc_of(1e4, beta)).log10();
    assert!((slope_n - 1.0).abs() < 0.02, "N0 slope {slope_n}");
    let slope_t = (tc_of(1e4, beta_from_temperature(100.0 * NANOKELVIN))
        / tc_of(1e4, beta_from_temperature(10.0 * NANOKELVIN)))
    .log10();
    assert!((slope_t + 1.0).abs() < 0.02, "T slope {slope_t}");
    println!(
        "PASS criterion 7: closed vs oracle max diff {worst:.3e} (< 1e-5); scales in 1e2..1e5 s; \
         t_c(2)/t_c(1) = {ratio:.4}; slopes N0 {slope_n:.4}, T {slope_t:.4}"
    );
}

#[test]
fn criterion_08_thermal_vs_thermal_coherent_sensitivity() {
    let p = reference_params(100.0);
    let n0 = 100.0;
    let u0rho0 = p.u_tilde * n0;
    let collapse_at = |t_nk: f64, alpha: f64| -> (f64, f64) {
        let beta = beta_from_temperature(t_nk * NANOKELVIN);
        let levels = CondensateLevels::new(n0, u0rho0, 0.0, beta).unwrap();
        let thermal = quasiparticle_offdiag_thermal(&levels, &[0.0]).collapse_time;
        let times = linspace(0.0, 2e-4, 6000);
        let coherent =
            quasiparticle_offdiag_thermal_coherent(&levels, c(alpha, 0.0), &times).unwrap();
        (thermal, coherent.collapse_time)
    };
    let (th_10, tc_10) = collapse_at(10.0, 10.0);
    let (th_100, tc_100) = collapse_at(100.0, 10.0);
    assert!(th_10.is_finite() && th_100.is_finite());
    assert!(tc_10.is_finite() && tc_100.is_finite());
    let ratio_thermal = th_10 / th_100;
    let ratio_coherent = tc_10 / tc_100;
    assert!(
        ratio_thermal > 1.2 * ratio_coherent,
        "thermal ratio {ratio_thermal} not larger than thermal-coherent ratio {ratio_coherent}"
    );
    println!(
        "PASS criterion 8: e-fold ratio t(10nK)/t(100nK): thermal {ratio_thermal:.3} > \
         thermal-coherent {ratio_coherent:.3}"
    );
}

#[test]
fn criterion_09_multi_symmetry_factorization() {
    let m1 = ThinSpectrumModel::new(1.0, 0.2, 0.0, 1.0).unwrap();
    let m2 = ThinSpectrumModel::new(0.5, 0.05, 0.0, 1.0).unwrap();
    let grid = PGrid {
        half_width_sigmas: 8.0,
        points: 2001,
    };
    let scale = HBAR * m1.beta / m1.delta;
    let times = linspace(0.0, 3.0 * scale, 60);
    let joint = two_state_joint_oracle(&m1, &m2, &grid, &times).unwrap();
    let a = reduced_offdiag_two_state_oracle(&m1, &grid, &times).unwrap();
    let b = reduced_offdiag_two_state_oracle(&m2, &grid, &times).unwrap();
    let mut worst = 0.0f64;
    for k in 0..times.len() {
        worst = worst.max((joint.magnitudes[k] - a.magnitudes[k] * b.magnitudes[k]).abs());
    }
    assert!(worst < 1e-8, "joint vs product max diff {worst:.3e}");

    let combined = combine_collapse_times(&[0.5, 0.5]);
    assert_eq!(combined, 0.25);
    println!(
        "PASS criterion 9: joint oracle equals product of marginals within {worst:.3e} (< 1e-8); \
         combine([t,t]) = t/2 exactly"
    );
}

/// Coefficient of variation of Q sampled on the circle of maximal radial
/// mass, by bilinear interpolation at 720 angles.
fn ring_cv(q: &QField) -> f64 {
    let dx = q.grid_re[1] - q.grid_re[0];
    let dy = q.grid_im[1] - q.grid_im[0];
    let rmax = q.grid_re.last().unwrap().abs();
    let nbins = (rmax / dx).ceil() as usize;
    let mut mass = vec![0.0f64; nbins + 1];
    for (iy, &y) in q.grid_im.iter().enumerate() {
        for (ix, &x) in q.grid_re.iter().enumerate() {
            let r = x.hypot(y);
            let bin = (r / dx) as usize;
            if bin <= nbins {
                mass[bin] += q.value(ix, iy);
            }
        }
    }
    let best = mass
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap();
    let r_star = (best as f64 + 0.5) * dx;

    let x0 = q.grid_re[0];
    let y0 = q.grid_im[0];
    let nx = q.nx();
    let ny = q.ny();
    let sample = |x: f64, y: f64| -> f64 {
        let fx = ((x - x0) / dx).clamp(0.0, (nx - 2) as f64);
        let fy = ((y - y0) / dy).clamp(0.0, (ny - 2) as f64);
        let ix = fx.floor() as usize;
        let iy = fy.floor() as usize;
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        (1.0 - tx) * (1.0 - ty) * q.value(ix, iy)
            + tx * (1.0 - ty) * q.value(ix + 1, iy)
            + (1.0 - tx) * ty * q.value(ix, iy + 1)
            + tx * ty * q.value(ix + 1, iy + 1)
    };
    let n_angles = 720;
    let ring: Vec<f64> = (0..n_angles)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n_angles as f64;
            sample(r_star * theta.cos(), r_star * theta.sin())
        })
        .collect();
    let mean = ring.iter().sum::<f64>() / n_angles as f64;
    let var = ring.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n_angles as f64;
    var.sqrt() / mean
}

#[test]
fn criterion_10_q_function_restoration() {
    let spec = SqueezeSpec::from_zeta(c(10.0, 0.0), c(0.5, 0.0)).unwrap();
    let state = squeezed_state(&spec, TOL).unwrap();
    let spectrum = Spectrum::u1(state.amplitudes.len(), 100.0);
    let grid = QGrid::centered(15.0, 201);
    let taus = [0.0, 0.02, 0.10, 0.40];
    let mut cvs = Vec::new();
    for &tau in &taus {
        let q = husimi_q(&state, &spectrum, tau, &grid).unwrap();
        let mass_err = (q.total_mass() - 1.0).abs();
        assert!(mass_err < 1e-3, "tau={tau}: normalization off by {mass_err:.2e}");
        cvs.push(ring_cv(&q));
    }
    println!(
        "criterion 10 measured: ring CV {cvs:?} over tau {taus:?}; \
         normalization within 1e-3 at every snapshot"
    );
    for k in 1..cvs.len() {
        assert!(
            cvs[k] < cvs[k - 1],
            "ring CV not monotone: {cvs:?} at tau {taus:?}"
        );
    }
    // Known-red clause: the exactly computed pure-state field keeps a ~12%
    // first angular harmonic at tau = 0.40 (the order parameter has not fully
    // collapsed yet) plus persistent fractional-revival structure near
    // k = 2 pi / tau (a 16-lobe cat at this snapshot), so the finely sampled
    // ring CV floors near 0.4 at all later times and never reaches 0.1.
    // Uniformity holds only for the coarse shape of the distribution, not for
    // the exact field.
    assert!(
        cvs[3] < 0.1,
        "CV at tau=0.40 is {:.3}: first-harmonic residual 0.124 plus k~16 \
         revival harmonics keep the exact field above the 0.1 uniformity \
         threshold at every sampling resolution",
        cvs[3]
    );
    println!(
        "PASS criterion 10: ring CV drops monotonically {cvs:?} over tau {taus:?}, \
         final < 0.1; normalization within 1e-3 at every snapshot"
    );
}

#[test]
fn coherent_collapse_time_matches_analytic_scale() {
    // Cross-module consistency: the series e-fold time of the coherent state
    // equals hbar/(sqrt(N) u) in dimensionless units (tau_c = 1/sqrt(N)).
    let state = coherent_state(c(10.0, 0.0), TOL).unwrap();
    let tau_c = efold_time(&state, 0.5, 8000);
    assert!((tau_c - 0.1).abs() < 0.01, "tau_c = {tau_c}");
    let p = reference_params(100.0);
    let seconds = tau_c * p.time_unit_seconds();
    println!("INFO coherent N=100 collapse: tau_c = {tau_c:.4} ({seconds:.3e} s)");
}
