//! Command implementations behind the `fockherald` binary: every subcommand
//! writes diff-friendly CSV (or JSON) plus a run manifest that records the
//! exact parameters needed to re-derive each row.
//!
//! Circuits serialize as JSON with type-tagged elements, e.g.
//!
//! ```json
//! {
//!   "mode_count": 2,
//!   "elements": [
//!     { "type": "beam_splitter", "mode_a": 0, "mode_b": 1, "reflectivity": 0.1 },
//!     { "type": "loss", "mode": 0, "transmission": 0.95 }
//!   ],
//!   "detectors": [
//!     { "mode": 0, "efficiency": 0.9, "condition": "click" },
//!     { "mode": 1, "efficiency": 0.9, "condition": "no_click" }
//!   ]
//! }
//! ```
//!
//! Number-resolving conditions are written `{ "exact_count": 1 }`. Gate
//! configurations for `cnot-sweep --gate-config` follow
//! `assets/cnot_gate.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::analytic::{cascade_prob_correct, chain_prob_mk};
use crate::cnot::{
    worst_case_search, CnotConfig, DetectorModel, GateMetrics, SearchSettings, SweepCell,
};
use crate::error::{Error, Result};
use crate::schemes::{
    simulate_cascade, simulate_chain, simulate_tdm, suppression_grid, CascadeConfig, ChainConfig,
    TdmConfig,
};
use crate::validate;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes shared by the binary: 0 success, 1 validation failure, 2 usage.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::InvalidParameter(_)
        | Error::InfeasibleUniformity { .. }
        | Error::PhotonsExceedOutputs { .. }
        | Error::NotPowerOfTwo(_)
        | Error::EnumerationBound { .. }
        | Error::ModeOutOfRange { .. }
        | Error::ModeCountMismatch { .. } => 2,
        _ => 1,
    }
}

/// Fixed 15-significant-digit formatting, so reruns produce byte-identical
/// files.
pub fn fmt_sig(value: f64) -> String {
    format!("{value:.14e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct CommonOpts {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub format: OutputFormat,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
}

fn write_manifest(
    opts: &CommonOpts,
    command: &str,
    parameters: serde_json::Value,
    outputs: Vec<String>,
    started: Instant,
) -> Result<()> {
    let manifest = RunManifest {
        command: command.to_string(),
        version: VERSION.to_string(),
        seed: opts.seed,
        parameters,
        outputs,
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    let path = opts.out_dir.join(format!("{command}_manifest.json"));
    fs::write(path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn ensure_out_dir(opts: &CommonOpts) -> Result<()> {
    fs::create_dir_all(&opts.out_dir)?;
    Ok(())
}

fn write_table(
    opts: &CommonOpts,
    stem: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<String> {
    match opts.format {
        OutputFormat::Csv => {
            let name = format!("{stem}.csv");
            let mut text = String::new();
            text.push_str(&header.join(","));
            text.push('\n');
            for row in rows {
                text.push_str(&row.join(","));
                text.push('\n');
            }
            fs::write(opts.out_dir.join(&name), text)?;
            Ok(name)
        }
        OutputFormat::Json => {
            let name = format!("{stem}.json");
            let objects: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut map = serde_json::Map::new();
                    for (key, value) in header.iter().zip(row.iter()) {
                        let parsed = value
                            .parse::<f64>()
                            .map(|v| json!(v))
                            .unwrap_or_else(|_| json!(value));
                        map.insert((*key).to_string(), parsed);
                    }
                    serde_json::Value::Object(map)
                })
                .collect();
            fs::write(
                opts.out_dir.join(&name),
                serde_json::to_string_pretty(&objects)?,
            )?;
            Ok(name)
        }
    }
}

/// Parses either a comma list (`0.8,0.9`) or a linear range (`0.8:0.99:5`).
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::InvalidParameter("empty value list".into()));
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "range must be start:stop:count, got {text}"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number {}", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number {}", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad count {}", parts[2])))?;
        if count == 0 {
            return Err(Error::InvalidParameter(
                "range count must be positive".into(),
            ));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad number {part}")))
        })
        .collect()
}

pub fn load_gate_config(path: Option<&Path>) -> Result<CnotConfig> {
    match path {
        Some(path) => CnotConfig::from_json(&fs::read_to_string(path)?),
        None => Ok(CnotConfig::standard()),
    }
}

pub fn cmd_suppression(
    opts: &CommonOpts,
    eta_effs: &[f64],
    eta_refs: &[f64],
    max_photons: u32,
) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(opts)?;
    let cells = suppression_grid(eta_effs, eta_refs, max_photons)?;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            vec![
                fmt_sig(c.eta_eff),
                fmt_sig(c.eta_ref),
                c.photons.to_string(),
                fmt_sig(c.p_m1),
            ]
        })
        .collect();
    let name = write_table(
        opts,
        "suppression",
        &["eta_eff", "eta_ref", "n", "p_m1"],
        &rows,
    )?;
    write_manifest(
        opts,
        "suppression",
        json!({ "eta_eff": eta_effs, "eta_ref": eta_refs, "n_max": max_photons }),
        vec![name],
        started,
    )
}

pub fn cmd_cascade(
    opts: &CommonOpts,
    outputs_list: &[u32],
    eta_effs: &[f64],
    max_photons: u32,
) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(opts)?;
    if outputs_list.is_empty() || eta_effs.is_empty() {
        return Err(Error::InvalidParameter(
            "parameter lists must be non-empty".into(),
        ));
    }
    let mut distribution_rows = Vec::new();
    let mut correct_rows = Vec::new();
    for &outputs in outputs_list {
        for &eta_eff in eta_effs {
            for photons in 0..=max_photons {
                let dist = simulate_cascade(photons, &CascadeConfig { outputs, eta_eff })?;
                for (m, p) in &dist {
                    distribution_rows.push(vec![
                        outputs.to_string(),
                        fmt_sig(eta_eff),
                        photons.to_string(),
                        m.to_string(),
                        fmt_sig(*p),
                    ]);
                }
                if photons <= outputs {
                    let analytic = cascade_prob_correct(photons, outputs, eta_eff)?;
                    let simulated = dist.get(&photons).copied().unwrap_or(0.0);
                    correct_rows.push(vec![
                        outputs.to_string(),
                        fmt_sig(eta_eff),
                        photons.to_string(),
                        fmt_sig(analytic),
                        fmt_sig(simulated),
                    ]);
                }
            }
        }
    }
    let dist_name = write_table(
        opts,
        "cascade_distribution",
        &["outputs", "eta_eff", "n", "m", "probability"],
        &distribution_rows,
    )?;
    let correct_name = write_table(
        opts,
        "cascade_correct",
        &[
            "outputs",
            "eta_eff",
            "n",
            "p_correct_analytic",
            "p_correct_simulated",
        ],
        &correct_rows,
    )?;
    write_manifest(
        opts,
        "cascade",
        json!({ "outputs": outputs_list, "eta_eff": eta_effs, "n_max": max_photons }),
        vec![dist_name, correct_name],
        started,
    )
}

pub fn cmd_tdm(opts: &CommonOpts, cfg: &TdmConfig, max_photons: u32) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(opts)?;
    let mut rows = Vec::new();
    for photons in 0..=max_photons {
        let out = simulate_tdm(photons, cfg)?;
        for (m, p) in &out.clicks {
            rows.push(vec![
                fmt_sig(cfg.coupling),
                fmt_sig(cfg.loop_transmission),
                cfg.round_trips.to_string(),
                fmt_sig(cfg.eta_eff),
                photons.to_string(),
                m.to_string(),
                fmt_sig(*p),
                fmt_sig(out.unmeasured_remainder),
            ]);
        }
    }
    let name = write_table(
        opts,
        "tdm",
        &[
            "coupling",
            "loop_transmission",
            "round_trips",
            "eta_eff",
            "n",
            "m",
            "probability",
            "unmeasured_remainder",
        ],
        &rows,
    )?;
    write_manifest(
        opts,
        "tdm",
        json!({
            "coupling": cfg.coupling,
            "loop_transmission": cfg.loop_transmission,
            "round_trips": cfg.round_trips,
            "eta_eff": cfg.eta_eff,
            "n_max": max_photons,
        }),
        vec![name],
        started,
    )
}

pub fn cmd_chain(opts: &CommonOpts, cfg: &ChainConfig, max_photons: u32) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(opts)?;
    let mut rows = Vec::new();
    for photons in 0..=max_photons {
        let simulated = simulate_chain(photons, cfg)?;
        let analytic = chain_prob_mk(photons, cfg.k, cfg.eta_ref, cfg.eta_eff)?;
        rows.push(vec![
            cfg.k.to_string(),
            fmt_sig(cfg.eta_ref),
            fmt_sig(cfg.eta_eff),
            photons.to_string(),
            fmt_sig(simulated),
            fmt_sig(analytic),
        ]);
    }
    let name = write_table(
        opts,
        "chain",
        &[
            "k",
            "eta_ref",
            "eta_eff",
            "n",
            "p_accept_simulated",
            "p_accept_analytic",
        ],
        &rows,
    )?;
    write_manifest(
        opts,
        "chain",
        json!({
            "k": cfg.k,
            "eta_ref": cfg.eta_ref,
            "eta_eff": cfg.eta_eff,
            "n_max": max_photons,
        }),
        vec![name],
        started,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepModel {
    Chain,
    NonDiscriminating,
}

fn metrics_row(eta_eff: f64, eta_ref: f64, metrics: &GateMetrics) -> Vec<String> {
    let params = metrics
        .argmin_params
        .iter()
        .map(|p| fmt_sig(*p))
        .collect::<Vec<_>>()
        .join(";");
    vec![
        fmt_sig(eta_eff),
        fmt_sig(eta_ref),
        fmt_sig(metrics.fidelity_min),
        fmt_sig(metrics.probability_at_fidelity_min),
        fmt_sig(metrics.probability_min),
        params,
    ]
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_cnot_sweep(
    opts: &CommonOpts,
    gate_config: Option<&Path>,
    model: SweepModel,
    eta_effs: &[f64],
    eta_refs: &[f64],
    probes_only: bool,
) -> Result<()> {
    let started = Instant::now();
    ensure_out_dir(opts)?;
    let base = load_gate_config(gate_config)?;
    let settings = SearchSettings {
        seed: opts.seed,
        probes_only,
        ..Default::default()
    };
    let cells: Vec<SweepCell> = match model {
        SweepModel::Chain => crate::cnot::sweep_metrics(&base, eta_effs, eta_refs, &settings)?,
        SweepModel::NonDiscriminating => {
            let mut out = Vec::new();
            for &eta_eff in eta_effs {
                let cfg = CnotConfig {
                    detector_model: DetectorModel::NonDiscriminating { eta_eff },
                    ..base.clone()
                };
                let metrics = worst_case_search(&cfg, &settings)?;
                out.push(SweepCell {
                    eta_eff,
                    eta_ref: 1.0,
                    metrics,
                });
            }
            out
        }
    };
    for cell in &cells {
        println!(
            "eta_eff={:.6} eta_ref={:.6}  F_min={:.6}  P@Fmin={:.6e}  P_min={:.6e}",
            cell.eta_eff,
            cell.eta_ref,
            cell.metrics.fidelity_min,
            cell.metrics.probability_at_fidelity_min,
            cell.metrics.probability_min
        );
    }
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|cell| metrics_row(cell.eta_eff, cell.eta_ref, &cell.metrics))
        .collect();
    let name = write_table(
        opts,
        "cnot_sweep",
        &[
            "eta_eff",
            "eta_ref",
            "f_min",
            "p_at_fmin",
            "p_min",
            "argmin_params",
        ],
        &rows,
    )?;
    write_manifest(
        opts,
        "cnot_sweep",
        json!({
            "eta_eff": eta_effs,
            "eta_ref": eta_refs,
            "detector_model": match model {
                SweepModel::Chain => "chain",
                SweepModel::NonDiscriminating => "nondiscriminating",
            },
            "probes_only": probes_only,
            "gate_config": gate_config.map(|p| p.display().to_string()),
        }),
        vec![name],
        started,
    )
}

/// Runs the agreement suites; returns false when any suite fails.
pub fn cmd_validate(opts: &CommonOpts, gate_config: Option<&Path>) -> Result<bool> {
    let started = Instant::now();
    let cfg = load_gate_config(gate_config)?;
    let results = validate::run_all(&cfg)?;
    let mut all_passed = true;
    println!("{:<24} {:>8} {:>14}  detail", "suite", "status", "max diff");
    for result in &results {
        all_passed &= result.passed;
        println!(
            "{:<24} {:>8} {:>14.3e}  {}",
            result.name,
            if result.passed { "PASS" } else { "FAIL" },
            result.max_discrepancy,
            result.detail
        );
    }
    if opts.format == OutputFormat::Json {
        ensure_out_dir(opts)?;
        let name = "validate_report.json".to_string();
        fs::write(
            opts.out_dir.join(&name),
            serde_json::to_string_pretty(&results)?,
        )?;
        write_manifest(
            opts,
            "validate",
            json!({ "gate_config": gate_config.map(|p| p.display().to_string()) }),
            vec![name],
            started,
        )?;
    }
    Ok(all_passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_fifteen_significant_digits() {
        assert_eq!(fmt_sig(0.5), "5.00000000000000e-1");
        assert_eq!(fmt_sig(0.0261), "2.61000000000000e-2");
        assert_eq!(fmt_sig(0.0), "0.00000000000000e0");
    }

    #[test]
    fn value_parsing() {
        assert_eq!(parse_values("0.8,0.9").unwrap(), vec![0.8, 0.9]);
        assert_eq!(parse_values("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_values("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_values("").is_err());
        assert!(parse_values("a,b").is_err());
        assert!(parse_values("1:2").is_err());
    }
}
