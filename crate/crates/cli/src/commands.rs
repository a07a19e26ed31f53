//! The `evolve`, `steady` and `sweep` subcommands. Each computes everything
//! first and returns an [`Artifact`]; files are written afterwards in one pass.

use std::fs;
use std::path::{Path, PathBuf};

use atomcav::dynamics::{evolve, steady_state, Recording};
use atomcav::entanglement::concurrence;
use atomcav::model::{build_cavity_model, build_model, ground_state};
use atomcav::qops::{partial_trace, SpaceLayout};
use atomcav::sweep::{
    argmax_product_spread, line_peak, resonance_summary, run_sweep, Parameter, SweepResult, SweptAxis,
};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::config::{ConfigError, Format, RunConfig};
use crate::output::{json_number, pretty, Field, Table};

pub const EVOLVE_HEADER: &[&str] = &[
    "t",
    "concurrence",
    "p_ee_a",
    "p_ee_b",
    "mean_photon",
    "mode_b_pop",
    "trace_residual",
];

pub const SWEEP_HEADER: &[&str] = &[
    "axis1_name",
    "axis1_value",
    "axis2_name",
    "axis2_value",
    "concurrence",
    "mean_photon",
    "trace_residual",
];

pub const SUMMARY_HEADER: &[&str] = &[
    "fixed_name",
    "fixed_value",
    "swept_name",
    "argmax_value",
    "max_concurrence",
    "interior",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] atomcav::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration problems, 3 for integrator failures, 4 for a
    /// degenerate steady state, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => core_exit_code(e),
            CliError::Io { .. } => 1,
        }
    }
}

fn core_exit_code(err: &atomcav::Error) -> i32 {
    use atomcav::Error::*;
    match err {
        RankDeficient { .. } => 4,
        InvalidConfig { .. } | InvalidArgument(_) => 2,
        Cell { source, .. } => core_exit_code(source),
        _ => 3,
    }
}

/// Serialized output of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub body: String,
    /// Secondary file written next to the main one.
    pub sidecar: Option<String>,
    /// Diagnostics for the error stream.
    pub notes: Vec<String>,
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn tail_note(cfg: &RunConfig, n_thermal: f64) -> Option<String> {
    (n_thermal > 0.0).then(|| {
        let mut system = cfg.system.clone();
        system.n_thermal = n_thermal;
        format!(
            "thermal mass above cutoff {} at n_thermal = {n_thermal}: {:.3e}",
            system.cutoff,
            system.thermal_tail_mass()
        )
    })
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Artifact, CliError> {
    if cfg.cavity_only {
        return Err(ConfigError::Usage("`cavity_only` applies to `steady` only".into()).into());
    }
    let model = build_model(&cfg.system, cfg.frame)?;
    let mut settings = cfg.integrator.clone();
    settings.recording = Recording::Atoms;
    let trajectory = evolve(&model, &ground_state(&cfg.system)?, &settings)?;

    let mut table = Table::new(EVOLVE_HEADER);
    for i in 0..trajectory.len() {
        let obs = &trajectory.observables[i];
        table.push(vec![
            trajectory.times[i].into(),
            concurrence(&trajectory.states[i])?.value.into(),
            obs.excited_a.into(),
            obs.excited_b.into(),
            obs.mean_photon.into(),
            obs.mode_b.into(),
            trajectory.health[i].trace_residual.into(),
        ]);
    }
    Ok(Artifact {
        body: render(&table, cfg.format),
        sidecar: None,
        notes: tail_note(cfg, cfg.system.n_thermal).into_iter().collect(),
    })
}

pub fn cmd_steady(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let (atoms, photons, residual) = if cfg.cavity_only {
        let steady = steady_state(&build_cavity_model(&cfg.system)?)?;
        (None, steady.state.populations(), steady.residual)
    } else {
        let model = build_model(&cfg.system, cfg.frame)?;
        let steady = steady_state(&model)?;
        let atoms = partial_trace(
            &steady.state,
            model.layout(),
            &[SpaceLayout::ATOM_A, SpaceLayout::ATOM_B],
        )?;
        let cavity = partial_trace(&steady.state, model.layout(), &[SpaceLayout::CAVITY])?;
        let c = concurrence(&atoms)?.value;
        (Some((atoms, c)), cavity.populations(), steady.residual)
    };

    let body = match cfg.format {
        Format::Csv => {
            let mut table = Table::new(&["quantity", "index", "value"]);
            let mut push = |name: &str, index: usize, value: f64| {
                table.push(vec![name.into(), Field::Text(index.to_string()), value.into()]);
            };
            if let Some((rho, c)) = &atoms {
                let m = rho.as_operator();
                for k in 0..16 {
                    push("rho_atoms_re", k, m.get(k / 4, k % 4).re);
                }
                for k in 0..16 {
                    push("rho_atoms_im", k, m.get(k / 4, k % 4).im);
                }
                push("concurrence", 0, *c);
            }
            for (n, p) in photons.iter().enumerate() {
                push("photon_probability", n, *p);
            }
            push("residual", 0, residual);
            table.to_csv()
        }
        Format::Json => {
            let mut obj = Map::new();
            if let Some((rho, c)) = &atoms {
                let m = rho.as_operator();
                let part = |f: fn(atomcav::qops::C64) -> f64| {
                    Value::Array((0..16).map(|k| json_number(f(m.get(k / 4, k % 4)))).collect())
                };
                obj.insert("rho_atoms_re".into(), part(|z| z.re));
                obj.insert("rho_atoms_im".into(), part(|z| z.im));
                obj.insert("concurrence".into(), json_number(*c));
            }
            obj.insert(
                "photon_probability".into(),
                Value::Array(photons.iter().map(|&p| json_number(p)).collect()),
            );
            obj.insert("residual".into(), json_number(residual));
            pretty(&Value::Object(obj))
        }
    };
    Ok(Artifact {
        body,
        sidecar: None,
        notes: tail_note(cfg, cfg.system.n_thermal).into_iter().collect(),
    })
}

/// Runs the configured sweep, on `workers` threads if given.
pub fn cmd_sweep(cfg: &RunConfig, workers: Option<usize>) -> Result<Artifact, CliError> {
    if cfg.cavity_only {
        return Err(ConfigError::Usage("`cavity_only` applies to `steady` only".into()).into());
    }
    let spec = cfg.sweep_spec()?;
    let run = || run_sweep(&spec, &cfg.integrator);
    let result = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ConfigError::Usage(format!("cannot start {n} workers: {e}")))?
            .install(run),
        None => run(),
    }?;

    let mut notes = vec![];
    let max_noise = [Some(&spec.axis1), spec.axis2.as_ref()]
        .into_iter()
        .flatten()
        .find(|a| a.parameter == Parameter::NThermal)
        .and_then(|a| a.values.last().copied())
        .unwrap_or(spec.base.n_thermal);
    notes.extend(tail_note(cfg, max_noise));

    let summary = summary_table(&result)?;
    let axes: Vec<Parameter> = [Some(&spec.axis1), spec.axis2.as_ref()]
        .into_iter()
        .flatten()
        .map(|a| a.parameter)
        .collect();
    if axes == [Parameter::NThermal, Parameter::Kappa] {
        let records = resonance_summary(&result, SweptAxis::First)?;
        notes.push(match argmax_product_spread(&records) {
            Some(s) => format!(
                "n_thermal*kappa at the maxima: mean {:.4}, relative spread {:.3}",
                s.mean, s.relative_spread
            ),
            None => "n_thermal*kappa spread: no line has a nonzero maximum".into(),
        });
    }

    Ok(Artifact {
        body: render(&sweep_table(&result), cfg.format),
        sidecar: Some(render(&summary, cfg.format)),
        notes,
    })
}

pub fn sweep_table(result: &SweepResult) -> Table {
    let spec = &result.spec;
    let axis2_name = spec.axis2.as_ref().map_or("", |a| a.parameter.name());
    let mut table = Table::new(SWEEP_HEADER);
    for cell in &result.cells {
        table.push(vec![
            spec.axis1.parameter.name().into(),
            cell.axis1_value.into(),
            axis2_name.into(),
            cell.axis2_value.into(),
            cell.concurrence.into(),
            cell.mean_photon.into(),
            cell.trace_residual.into(),
        ]);
    }
    table
}

/// Maximum over axis 1 for each value of axis 2 (or the single line).
pub fn summary_table(result: &SweepResult) -> Result<Table, CliError> {
    let spec = &result.spec;
    let swept = spec.axis1.parameter.name();
    let mut table = Table::new(SUMMARY_HEADER);
    match &spec.axis2 {
        Some(axis2) => {
            for r in resonance_summary(result, SweptAxis::First)? {
                table.push(vec![
                    axis2.parameter.name().into(),
                    r.fixed_value.into(),
                    swept.into(),
                    r.argmax_value.into(),
                    r.max_concurrence.into(),
                    Field::Bool(r.interior),
                ]);
            }
        }
        None => {
            let line: Vec<f64> = result.cells.iter().map(|c| c.concurrence).collect();
            let (argmax, max) = line_peak(&line);
            let n = line.len();
            table.push(vec![
                Field::Missing,
                Field::Missing,
                swept.into(),
                argmax.map(|i| spec.axis1.values[i]).into(),
                max.into(),
                Field::Bool(argmax.is_some_and(|i| i > 0 && i + 1 < n)),
            ]);
        }
    }
    Ok(table)
}

/// `run.csv` → `run.summary.csv`.
pub fn sidecar_path(out: &Path, format: Format) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.{format}"))
}

/// Writes the artifact to `out` (and its sidecar next to it), or to stdout
/// with the sidecar on stderr.
pub fn write_artifact(artifact: &Artifact, out: Option<&Path>, format: Format) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io(parent))?;
            }
            fs::write(path, &artifact.body).map_err(io(path))?;
            if let Some(sidecar) = &artifact.sidecar {
                let side = sidecar_path(path, format);
                fs::write(&side, sidecar).map_err(io(&side))?;
            }
        }
        None => {
            print!("{}", artifact.body);
            if let Some(sidecar) = &artifact.sidecar {
                eprint!("{sidecar}");
            }
        }
    }
    Ok(())
}
