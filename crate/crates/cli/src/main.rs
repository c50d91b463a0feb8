//! `thinspec`: condensate coherence-lifetime scenario runner.

// Guards use `!(x > 0.0)` so NaN inputs are rejected alongside nonpositive
// ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod manifest;
mod output;
mod scenario;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use std::path::PathBuf;

use thinspec_core::constants::HBAR;
use thinspec_core::dynamics::{collapse_time_estimate, derive_params};

#[derive(Debug, Parser)]
#[command(
    name = "thinspec",
    version,
    about = "Coherence lifetimes of a finite atomic condensate: order-parameter \
             collapse and thin-spectrum decay datasets as CSV + gnuplot scripts"
)]
enum Cli {
    /// Run one built-in scenario.
    Run {
        /// Built-in scenario name (see `thinspec list`).
        scenario: String,
        /// Output directory (overrides THINSPEC_OUT; default "out").
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every scenario in a manifest file.
    Manifest {
        path: PathBuf,
        /// Run up to K scenarios concurrently; outputs are identical for any K.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in scenarios.
    List,
    /// Derive the interaction couplings from trap parameters (SI units).
    Params {
        /// s-wave scattering length, m.
        #[arg(long = "as")]
        a_s: f64,
        /// Trap length, m.
        #[arg(long)]
        aho: f64,
        /// Condensate density, 1/m^3.
        #[arg(long)]
        rho: f64,
        /// Atom number.
        #[arg(long = "N")]
        n_atoms: f64,
        /// Trap angular frequency, 1/s.
        #[arg(long)]
        omega: f64,
    },
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("THINSPEC_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse() {
        Cli::Run { scenario, out } => {
            let s = scenario::builtin(&scenario)
                .ok_or_else(|| anyhow!("unknown scenario '{scenario}'; see `thinspec list`"))?;
            let result = s.run(&out_dir(out))?;
            for line in result.summary {
                println!("{line}");
            }
            Ok(())
        }
        Cli::Manifest { path, jobs, out } => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading manifest {}", path.display()))?;
            let scenarios = manifest::parse_manifest(&text)?;
            let dir = out_dir(out);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .context("building worker pool")?;
            let results: Vec<Result<scenario::RunOutput>> = pool.install(|| {
                use rayon::prelude::*;
                scenarios.par_iter().map(|s| s.run(&dir)).collect()
            });
            let mut failures = 0;
            for (s, result) in scenarios.iter().zip(results) {
                match result {
                    Ok(output) => {
                        for line in output.summary {
                            println!("{line}");
                        }
                    }
                    Err(err) => {
                        failures += 1;
                        eprintln!("error: scenario '{}': {err:#}", s.name);
                    }
                }
            }
            if failures > 0 {
                bail!("{failures} scenario(s) failed");
            }
            Ok(())
        }
        Cli::List => {
            for (name, desc) in scenario::describe_builtins() {
                println!("{name:<10} {desc}");
            }
            Ok(())
        }
        Cli::Params {
            a_s,
            aho,
            rho,
            n_atoms,
            omega,
        } => {
            let mass = HBAR / (aho * aho * omega);
            let p = derive_params(a_s, mass, omega, rho, n_atoms)
                .map_err(|e| anyhow!("invalid parameters: {e}"))?;
            println!("mass          = {:.6e} kg", p.mass);
            println!("a_ho          = {:.6e} m", p.a_ho);
            println!("volume        = {:.6e} m^3", p.volume);
            println!("u0            = {:.6e} J m^3", p.u0);
            println!("u_tilde       = {:.6e} J ({:.6} hbar*omega_tr)", p.u_tilde, p.u_tilde / (HBAR * omega));
            println!("N_eff         = {:.6}", p.n_eff);
            println!("hbar/u_tilde  = {:.6e} s (dimensionless time unit)", p.time_unit_seconds());
            println!("t_c estimate  = {:.6e} s (sqrt(N)/(4 pi N_eff omega_tr))", collapse_time_estimate(&p));
            Ok(())
        }
    }
}
