//! Line-based manifest parser: `[scenario]` section headers followed by
//! `key = value` pairs. Errors carry the offending line number and key.

use anyhow::{bail, Result};
use num_complex::Complex64;

use crate::scenario::{
    builtin, ModelSpec, ParamSet, Scenario, SpectrumKind, StateSpec, TimeWindow,
};

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

pub fn parse_manifest(text: &str) -> Result<Vec<Scenario>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                bail!("line {line_no}: unterminated section header '{raw}'");
            };
            let name = name.trim();
            if name.is_empty() {
                bail!("line {line_no}: empty scenario name");
            }
            if sections.iter().any(|s| s.name == name) {
                bail!("line {line_no}: duplicate scenario name '{name}'");
            }
            sections.push(Section {
                name: name.to_string(),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {line_no}: expected 'key = value', got '{raw}'");
        };
        let Some(section) = sections.last_mut() else {
            bail!("line {line_no}: key outside any [scenario] section");
        };
        section.entries.push(Entry {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            line: line_no,
        });
    }
    if sections.is_empty() {
        bail!("manifest contains no scenarios");
    }
    let scenarios: Vec<Scenario> = sections
        .into_iter()
        .map(build_scenario)
        .collect::<Result<_>>()?;
    // Scenarios run concurrently, so output stems must not collide.
    let mut stems: Vec<&str> = Vec::new();
    for s in &scenarios {
        let stem = s.output_stem.as_deref().unwrap_or(&s.name);
        if stems.contains(&stem) {
            bail!("output stem '{stem}' is used by more than one scenario");
        }
        stems.push(stem);
    }
    Ok(scenarios)
}

fn parse_f64(e: &Entry) -> Result<f64> {
    e.value
        .parse()
        .map_err(|_| anyhow::anyhow!("line {}: key '{}': invalid number '{}'", e.line, e.key, e.value))
}

fn parse_usize(e: &Entry) -> Result<usize> {
    e.value
        .parse()
        .map_err(|_| anyhow::anyhow!("line {}: key '{}': invalid integer '{}'", e.line, e.key, e.value))
}

fn parse_bool(e: &Entry) -> Result<bool> {
    match e.value.as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        v => bail!("line {}: key '{}': invalid boolean '{v}'", e.line, e.key),
    }
}

/// Complex literals: "0.5", "-0.5", "0.5i", "0.3+0.4i", "0.3-0.4i", "i".
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    if let Some(rest) = t.strip_suffix('i') {
        let bytes = rest.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let ch = bytes[i] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = rest[..i]
                    .parse()
                    .map_err(|_| anyhow::anyhow!("invalid complex literal '{s}'"))?;
                let imag = &rest[i..];
                let im: f64 = match imag {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => imag
                        .parse()
                        .map_err(|_| anyhow::anyhow!("invalid complex literal '{s}'"))?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = match rest {
                    "" => 1.0,
                    "-" => -1.0,
                    _ => rest
                        .parse()
                        .map_err(|_| anyhow::anyhow!("invalid complex literal '{s}'"))?,
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Ok(Complex64::new(
            t.parse()
                .map_err(|_| anyhow::anyhow!("invalid complex literal '{s}'"))?,
            0.0,
        ))
    }
}

fn parse_list(e: &Entry) -> Result<Vec<f64>> {
    e.value
        .split(',')
        .map(|v| {
            v.trim().parse().map_err(|_| {
                anyhow::anyhow!("line {}: key '{}': invalid number '{}'", e.line, e.key, v.trim())
            })
        })
        .collect()
}

fn build_scenario(section: Section) -> Result<Scenario> {
    let name = section.name.clone();
    // A builtin reference may only be combined with an output override.
    if let Some(b) = section.entries.iter().find(|e| e.key == "builtin") {
        for e in &section.entries {
            if e.key != "builtin" && e.key != "out" {
                bail!(
                    "line {}: unknown key '{}' in builtin scenario '{name}'",
                    e.line,
                    e.key
                );
            }
        }
        let Some(mut scenario) = builtin(&b.value) else {
            bail!("line {}: unknown builtin '{}' in scenario '{name}'", b.line, b.value);
        };
        scenario.name = name;
        scenario.output_stem = section
            .entries
            .iter()
            .find(|e| e.key == "out")
            .map(|e| e.value.clone())
            .or(Some(scenario.name.clone()));
        return Ok(scenario);
    }

    let mut params = ParamSet::default();
    let mut model: Option<String> = None;
    let mut state = "coherent".to_string();
    let mut alpha = 10.0;
    let mut zeta = Complex64::new(0.0, 0.0);
    let mut temp_nk: Option<f64> = None;
    let mut spectrum = SpectrumKind::U1;
    let mut t_max: Option<f64> = None;
    let mut points = 2000usize;
    let mut taus: Option<Vec<f64>> = None;
    let mut grid_points = 201usize;
    let mut grid_extent: Option<f64> = None;
    let mut delta: Option<f64> = None;
    let mut deltas: Option<Vec<f64>> = None;
    let mut n0 = 100.0f64;
    let mut m = 1u32;
    let mut b_param: Option<f64> = None;
    let mut oracle: Option<bool> = None;
    let mut occupation = "thermal".to_string();
    let mut out_stem: Option<String> = None;

    for e in &section.entries {
        match e.key.as_str() {
            "model" => model = Some(e.value.clone()),
            "state" => state = e.value.clone(),
            "alpha" => alpha = parse_f64(e)?,
            "zeta" => {
                zeta = parse_complex(&e.value)
                    .map_err(|err| anyhow::anyhow!("line {}: key 'zeta': {err}", e.line))?
            }
            "T_nK" => temp_nk = Some(parse_f64(e)?),
            "spectrum" => {
                spectrum = match e.value.as_str() {
                    "u1" => SpectrumKind::U1,
                    "interaction-only" => SpectrumKind::InteractionOnly,
                    v => bail!("line {}: key 'spectrum': unknown convention '{v}'", e.line),
                }
            }
            "t_max" => t_max = Some(parse_f64(e)?),
            "points" => points = parse_usize(e)?,
            "taus" => taus = Some(parse_list(e)?),
            "grid_points" => grid_points = parse_usize(e)?,
            "grid_extent" => grid_extent = Some(parse_f64(e)?),
            "delta" => delta = Some(parse_f64(e)?),
            "deltas" => deltas = Some(parse_list(e)?),
            "N0" => n0 = parse_f64(e)?,
            "m" => m = parse_usize(e)? as u32,
            "b_param" => b_param = Some(parse_f64(e)?),
            "oracle" => oracle = Some(parse_bool(e)?),
            "occupation" => occupation = e.value.clone(),
            "a_s" => params.a_s = parse_f64(e)?,
            "a_ho" => params.a_ho = parse_f64(e)?,
            "rho" => params.rho = parse_f64(e)?,
            "omega" => params.omega_tr = parse_f64(e)?,
            "N" => params.n_atoms = parse_f64(e)?,
            "out" => out_stem = Some(e.value.clone()),
            _ => bail!("line {}: unknown key '{}' in scenario '{name}'", e.line, e.key),
        }
    }

    let Some(model) = model else {
        bail!(
            "line {}: scenario '{name}' needs either 'builtin = <name>' or 'model = <kind>'",
            section.line
        );
    };

    let state_spec = |state: &str| -> Result<StateSpec> {
        match state {
            "coherent" => Ok(StateSpec::Coherent { alpha }),
            "squeezed" => Ok(StateSpec::Squeezed { alpha, zeta }),
            "thermal" => Ok(StateSpec::Thermal {
                temp_nk: temp_nk.ok_or_else(|| {
                    anyhow::anyhow!("scenario '{name}': thermal state needs 'T_nK'")
                })?,
            }),
            "thermal-coherent" => Ok(StateSpec::ThermalCoherent {
                alpha,
                temp_nk: temp_nk.ok_or_else(|| {
                    anyhow::anyhow!("scenario '{name}': thermal-coherent state needs 'T_nK'")
                })?,
            }),
            v => bail!("scenario '{name}': unknown state '{v}'"),
        }
    };

    let model = match model.as_str() {
        "order-parameter" => ModelSpec::OrderParameter {
            states: vec![(state.clone(), state_spec(&state)?)],
            spectrum,
            window: TimeWindow {
                t_max: t_max.unwrap_or(1.0),
                points,
            },
        },
        "q-function" => {
            let taus = taus.unwrap_or_else(|| vec![0.0]);
            ModelSpec::QFunction {
                snapshots: taus
                    .iter()
                    .map(|&tau| Ok((format!("tau{tau}"), state_spec(&state)?, tau)))
                    .collect::<Result<_>>()?,
                spectrum,
                grid_points,
                grid_extent,
            }
        }
        "thin-two-state" => ModelSpec::ThinTwoState {
            delta: delta
                .ok_or_else(|| anyhow::anyhow!("scenario '{name}': thin-two-state needs 'delta'"))?,
            temp_nk: temp_nk
                .ok_or_else(|| anyhow::anyhow!("scenario '{name}': thin-two-state needs 'T_nK'"))?,
            window: TimeWindow {
                t_max: t_max.unwrap_or(5.0),
                points,
            },
            with_oracle: oracle.unwrap_or(true),
        },
        "quasiparticle" => {
            let alpha_opt = match occupation.as_str() {
                "thermal" => None,
                "thermal-coherent" => Some(alpha),
                v => bail!("scenario '{name}': unknown occupation '{v}'"),
            };
            ModelSpec::Quasiparticle {
                n0,
                temp_nk: temp_nk.ok_or_else(|| {
                    anyhow::anyhow!("scenario '{name}': quasiparticle needs 'T_nK'")
                })?,
                m,
                alpha: alpha_opt,
                b_param,
                with_oracle: oracle.unwrap_or(false),
                window: TimeWindow {
                    t_max: t_max.unwrap_or(1.0),
                    points,
                },
            }
        }
        "multi-symmetry" => ModelSpec::MultiSymmetry {
            deltas: deltas
                .ok_or_else(|| anyhow::anyhow!("scenario '{name}': multi-symmetry needs 'deltas'"))?,
            temp_nk: temp_nk
                .ok_or_else(|| anyhow::anyhow!("scenario '{name}': multi-symmetry needs 'T_nK'"))?,
            window: TimeWindow {
                t_max: t_max.unwrap_or(5.0),
                points,
            },
        },
        v => bail!("line {}: scenario '{name}': unknown model '{v}'", section.line),
    };

    Ok(Scenario {
        name,
        params,
        model,
        output_stem: out_stem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("0.5", (0.5, 0.0)),
            ("-0.5", (-0.5, 0.0)),
            ("0.5i", (0.0, 0.5)),
            ("-0.5i", (0.0, -0.5)),
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("0.3+0.4i", (0.3, 0.4)),
            ("0.3-0.4i", (0.3, -0.4)),
            ("1e-3i", (0.0, 1e-3)),
            ("2e-2+1e-3i", (2e-2, 1e-3)),
        ];
        for (text, (re, im)) in cases {
            let z = parse_complex(text).unwrap();
            assert_eq!((z.re, z.im), (re, im), "parsing '{text}'");
        }
        assert!(parse_complex("banana").is_err());
        assert!(parse_complex("1+2").is_err());
    }

    #[test]
    fn builtin_sections_reject_extra_keys() {
        let err = parse_manifest("[fig]\nbuiltin = figure1\nalpha = 3\n").unwrap_err();
        assert!(err.to_string().contains("unknown key 'alpha'"));
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn keys_outside_sections_are_rejected() {
        let err = parse_manifest("alpha = 3\n").unwrap_err();
        assert!(err.to_string().contains("outside any [scenario] section"));
    }

    #[test]
    fn duplicate_sections_are_rejected() {
        let err = parse_manifest("[a]\nbuiltin = figure1\n[a]\nbuiltin = figure2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate scenario name 'a'"));
    }

    #[test]
    fn colliding_output_stems_are_rejected() {
        let text = "[a]\nbuiltin = figure1\nout = shared\n\
                    [b]\nbuiltin = figure7\nout = shared\n";
        let err = parse_manifest(text).unwrap_err();
        assert!(err.to_string().contains("output stem 'shared'"));
    }
}
