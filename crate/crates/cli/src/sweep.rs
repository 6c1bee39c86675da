//! Gain-surface sweeps and their CSV form.

use std::path::Path;

use logiq::qec::{run_gain_experiment_with, GainPoint};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::spec::{fmt_float, SweepSpec};

pub const CSV_COLUMNS: &str =
    "code,state,layout,gate_error,memory_time,qec_time,swaps,fidelity_physical,fidelity_logical,raw_gain,gain";

#[derive(Debug, Clone)]
pub struct GainSurface {
    pub spec: SweepSpec,
    pub profile: String,
    /// Row-major: gate error outer, memory time inner.
    pub points: Vec<GainPoint>,
}

impl GainSurface {
    pub fn rows(&self) -> impl Iterator<Item = &[GainPoint]> {
        self.points.chunks(self.spec.memory_times.len())
    }

    /// Points for the `i`-th gate error.
    pub fn row(&self, i: usize) -> &[GainPoint] {
        let m = self.spec.memory_times.len();
        &self.points[i * m..(i + 1) * m]
    }

    pub fn max_gain(&self) -> f64 {
        self.points.iter().map(|p| p.gain).fold(f64::NEG_INFINITY, f64::max)
    }

    /// SHA-256 over the canonical config lines.
    pub fn config_hash(&self) -> String {
        config_hash(&self.spec, &self.profile)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# profile = {}\n", self.profile));
        for (k, v) in self.spec.canonical() {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&format!("# config_sha256 = {}\n", self.config_hash()));
        out.push_str(CSV_COLUMNS);
        out.push('\n');
        let (code, state, layout) = (self.spec.code.name(), self.spec.state.to_string(), self.spec.layout.name());
        for (row, &pe) in self.rows().zip(&self.spec.gate_errors) {
            for p in row {
                out.push_str(&format!(
                    "{code},{state},{layout},{},{},{},{},{},{},{},{}\n",
                    fmt_float(pe),
                    fmt_float(p.memory_time),
                    fmt_float(p.qec_time),
                    p.swaps,
                    fmt_float(p.fidelity_physical),
                    fmt_float(p.fidelity_logical),
                    fmt_float(p.raw_gain),
                    fmt_float(p.gain),
                ));
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_csv())
    }
}

pub fn config_hash(spec: &SweepSpec, profile: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("profile={profile}\n"));
    for (k, v) in spec.canonical() {
        h.update(format!("{k}={v}\n"));
    }
    hex::encode(h.finalize())
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Fills the grid in parallel. Results keep grid order regardless of
/// scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<GainSurface> {
    run_sweep_labeled(spec, "custom")
}

pub fn run_sweep_labeled(spec: &SweepSpec, profile: &str) -> Result<GainSurface> {
    spec.validate()?;
    let code = spec.qec_code();
    let graph = spec.graph()?;
    let input = spec.state.state();
    let cfg = spec.experiment_config();
    let params = spec
        .gate_errors
        .iter()
        .map(|&p| spec.noise_params(p))
        .collect::<Result<Vec<_>>>()?;
    let m = spec.memory_times.len();
    let points = (0..params.len() * m)
        .into_par_iter()
        .map(|i| run_gain_experiment_with(&code, &input, spec.memory_times[i % m], &params[i / m], &graph, &cfg))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    log::info!("sweep {} points, max gain {:.4}", points.len(), points.iter().map(|p| p.gain).fold(0.0, f64::max));
    Ok(GainSurface {
        spec: spec.clone(),
        profile: profile.to_string(),
        points,
    })
}
