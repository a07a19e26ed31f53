//! Parameter grids over noise intensity, cavity leakage, atomic decay and time.
//!
//! Cells are independent and evaluated on the current rayon pool. Results
//! are stored by grid coordinate, so scheduling never changes the output.
//! When time is one of the axes, every row of the other axis shares one
//! trajectory sampled at all requested times.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{evolve_sampled, IntegratorSettings, Recording, Trajectory};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::model::{build_model, ground_state, Frame, SystemConfig};
use crate::qops::DensityMatrix;

/// Concurrence at or below this level counts as no entanglement.
pub const NEGLIGIBLE_CONCURRENCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parameter {
    NThermal,
    Kappa,
    Gamma,
    Time,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::NThermal => "n_thermal",
            Parameter::Kappa => "kappa",
            Parameter::Gamma => "gamma",
            Parameter::Time => "time",
        }
    }

    fn apply(self, cfg: &mut SystemConfig, value: f64) {
        match self {
            Parameter::NThermal => cfg.n_thermal = value,
            Parameter::Kappa => cfg.kappa = value,
            Parameter::Gamma => cfg.gamma = value,
            Parameter::Time => {}
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n_thermal" => Ok(Parameter::NThermal),
            "kappa" => Ok(Parameter::Kappa),
            "gamma" => Ok(Parameter::Gamma),
            "time" => Ok(Parameter::Time),
            other => Err(Error::InvalidArgument(format!(
                "unknown sweep parameter `{other}` (expected n_thermal, kappa, gamma or time)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub parameter: Parameter,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(parameter: Parameter, values: Vec<f64>) -> Self {
        Self { parameter, values }
    }

    /// `count` evenly spaced points from `start` to `stop` inclusive.
    pub fn linspace(parameter: Parameter, start: f64, stop: f64, count: usize) -> Self {
        Self::new(parameter, linspace(start, stop, count))
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "axis `{}` has no values",
                self.parameter
            )));
        }
        if self.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "axis `{}` values must be finite and nonnegative",
                self.parameter
            )));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!(
                "axis `{}` values must be strictly ascending",
                self.parameter
            )));
        }
        Ok(())
    }
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum InitialState {
    /// `|g⟩_a|g⟩_b|0⟩`.
    #[default]
    Ground,
    Custom(DensityMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub frame: Frame,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// Time at which cells are evaluated when time is not an axis.
    pub evaluation_time: f64,
    pub initial_state: InitialState,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.axis1.validate()?;
        if let Some(axis2) = &self.axis2 {
            axis2.validate()?;
            if axis2.parameter == self.axis1.parameter {
                return Err(Error::InvalidArgument(format!("both axes sweep `{}`", axis2.parameter)));
            }
        }
        if !self.has_time_axis() && !(self.evaluation_time > 0.0 && self.evaluation_time.is_finite()) {
            return Err(Error::InvalidConfig {
                key: "evaluation_time",
                reason: format!("must be positive, got {}", self.evaluation_time),
            });
        }
        if let InitialState::Custom(rho) = &self.initial_state {
            let dim = self.base.layout().composite_dim();
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "custom initial state",
                    expected: dim,
                    found: rho.dim(),
                });
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        (
            self.axis1.values.len(),
            self.axis2.as_ref().map_or(1, |a| a.values.len()),
        )
    }

    fn has_time_axis(&self) -> bool {
        self.axis1.parameter == Parameter::Time || self.axis2.as_ref().is_some_and(|a| a.parameter == Parameter::Time)
    }

    fn axis2_value(&self, col: usize) -> Option<f64> {
        self.axis2.as_ref().map(|a| a.values[col])
    }

    fn config_at(&self, row: usize, col: usize) -> SystemConfig {
        let mut cfg = self.base.clone();
        self.axis1.parameter.apply(&mut cfg, self.axis1.values[row]);
        if let Some(axis2) = &self.axis2 {
            axis2.parameter.apply(&mut cfg, axis2.values[col]);
        }
        cfg
    }

    fn initial(&self, cfg: &SystemConfig) -> Result<DensityMatrix> {
        match &self.initial_state {
            InitialState::Ground => ground_state(cfg),
            InitialState::Custom(rho) => Ok(rho.clone()),
        }
    }
}

/// Paper parameters `ω = ω_f`, `g_a = g_b = 1`, `κ = 2`, `Γ = 0.2`, cutoff 5.
pub fn figure_base() -> SystemConfig {
    SystemConfig::default()
}

/// `t = 1/(2g)` with `g = √(g_a² + g_b²)`.
pub fn half_inverse_coupling_time(cfg: &SystemConfig) -> f64 {
    1.0 / (2.0 * cfg.collective_coupling())
}

/// Concurrence over `n_T ∈ [0, 3]` (31 points) and `t = 5k/26`, `k = 1..=26`.
pub fn fig2_spec() -> SweepSpec {
    let base = figure_base();
    let times = (1..=26).map(|k| 5.0 * k as f64 / 26.0).collect();
    SweepSpec {
        evaluation_time: half_inverse_coupling_time(&base),
        base,
        frame: Frame::Interaction,
        axis1: Axis::linspace(Parameter::NThermal, 0.0, 3.0, 31),
        axis2: Some(Axis::new(Parameter::Time, times)),
        initial_state: InitialState::Ground,
    }
}

/// Concurrence over `n_T ∈ (0, 2]` and `κ ∈ (0, 5]` at `t = 1/(2g)`.
pub fn fig3_spec() -> SweepSpec {
    let base = figure_base();
    let n_thermal = (1..=20).map(|k| k as f64 / 10.0).collect();
    let kappas = (1..=25).map(|k| k as f64 / 5.0).collect();
    SweepSpec {
        evaluation_time: half_inverse_coupling_time(&base),
        base,
        frame: Frame::Interaction,
        axis1: Axis::new(Parameter::NThermal, n_thermal),
        axis2: Some(Axis::new(Parameter::Kappa, kappas)),
        initial_state: InitialState::Ground,
    }
}

/// Concurrence over `n_T ∈ [0, 3]` and `Γ ∈ [0, 1]` at `t = 1/(2g)`, `κ = 2`.
pub fn fig4_spec() -> SweepSpec {
    let base = figure_base();
    SweepSpec {
        evaluation_time: half_inverse_coupling_time(&base),
        base,
        frame: Frame::Interaction,
        axis1: Axis::linspace(Parameter::NThermal, 0.0, 3.0, 31),
        axis2: Some(Axis::linspace(Parameter::Gamma, 0.0, 1.0, 31)),
        initial_state: InitialState::Ground,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellRecord {
    pub axis1_value: f64,
    pub axis2_value: Option<f64>,
    pub concurrence: f64,
    pub mean_photon: f64,
    pub excited_a: f64,
    pub excited_b: f64,
    pub mode_b: Option<f64>,
    pub trace_residual: f64,
    pub hermiticity_drift: f64,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Row-major in `(axis1 index, axis2 index)`.
    pub cells: Vec<CellRecord>,
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        self.spec.shape()
    }

    pub fn cell(&self, row: usize, col: usize) -> &CellRecord {
        let (_, cols) = self.shape();
        &self.cells[row * cols + col]
    }

    /// Concurrence as a `rows × cols` grid.
    pub fn concurrence_grid(&self) -> Vec<Vec<f64>> {
        let (rows, cols) = self.shape();
        (0..rows)
            .map(|r| (0..cols).map(|c| self.cell(r, c).concurrence).collect())
            .collect()
    }
}

/// One trajectory's worth of cells.
struct Job {
    /// Cells `(row, col)` produced by this job, in sample order.
    cells: Vec<(usize, usize)>,
    config: SystemConfig,
    times: Vec<f64>,
}

fn plan(spec: &SweepSpec) -> Vec<Job> {
    let (rows, cols) = spec.shape();
    let axis2_is_time = spec.axis2.as_ref().is_some_and(|a| a.parameter == Parameter::Time);
    if spec.axis1.parameter == Parameter::Time {
        (0..cols)
            .map(|col| Job {
                cells: (0..rows).map(|row| (row, col)).collect(),
                config: spec.config_at(0, col),
                times: spec.axis1.values.clone(),
            })
            .collect()
    } else if axis2_is_time {
        let times = spec.axis2.as_ref().map(|a| a.values.clone()).unwrap_or_default();
        (0..rows)
            .map(|row| Job {
                cells: (0..cols).map(|col| (row, col)).collect(),
                config: spec.config_at(row, 0),
                times: times.clone(),
            })
            .collect()
    } else {
        (0..rows)
            .flat_map(|row| (0..cols).map(move |col| (row, col)))
            .map(|(row, col)| Job {
                cells: vec![(row, col)],
                config: spec.config_at(row, col),
                times: vec![spec.evaluation_time],
            })
            .collect()
    }
}

fn run_job(spec: &SweepSpec, job: &Job, settings: &IntegratorSettings) -> Result<Vec<((usize, usize), CellRecord)>> {
    let model = build_model(&job.config, spec.frame)?;
    let rho0 = spec.initial(&job.config)?;
    let traj: Trajectory = evolve_sampled(&model, &rho0, &job.times, settings)?;
    job.cells
        .iter()
        .zip(traj.states.iter().zip(traj.observables.iter().zip(&traj.health)))
        .map(|(&(row, col), (atoms, (obs, health)))| {
            let c = concurrence(atoms)?;
            let record = CellRecord {
                axis1_value: spec.axis1.values[row],
                axis2_value: spec.axis2_value(col),
                concurrence: c.value,
                mean_photon: obs.mean_photon,
                excited_a: obs.excited_a.unwrap_or(f64::NAN),
                excited_b: obs.excited_b.unwrap_or(f64::NAN),
                mode_b: obs.mode_b,
                trace_residual: health.trace_residual,
                hermiticity_drift: health.hermiticity_drift,
                min_eigenvalue: health.min_eigenvalue,
            };
            Ok(((row, col), record))
        })
        .collect()
}

/// Evaluates every grid cell on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec, settings: &IntegratorSettings) -> Result<SweepResult> {
    spec.validate()?;
    let settings = IntegratorSettings {
        recording: Recording::Atoms,
        ..settings.clone()
    };
    settings.validate()?;
    let jobs = plan(spec);
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|job| {
            run_job(spec, job, &settings).map_err(|e| {
                let (row, col) = job.cells[0];
                Error::Cell {
                    row,
                    col,
                    source: Box::new(e),
                }
            })
        })
        .collect();

    let (rows, cols) = spec.shape();
    let mut slots: Vec<Option<CellRecord>> = vec![None; rows * cols];
    for outcome in outcomes {
        for ((row, col), record) in outcome? {
            slots[row * cols + col] = Some(record);
        }
    }
    let cells = slots
        .into_iter()
        .map(|c| c.expect("every cell belongs to exactly one job"))
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        cells,
    })
}

/// Which axis is scanned for the maximum; the other axis is held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweptAxis {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceRecord {
    pub fixed_value: f64,
    /// Index of the maximum along the swept axis; `None` when the line is
    /// identically zero.
    pub argmax: Option<usize>,
    pub argmax_value: Option<f64>,
    pub max_concurrence: f64,
    /// Maximum lies strictly inside the swept range.
    pub interior: bool,
}

/// Location and height of the concurrence maximum along one axis, for each
/// value of the other axis.
pub fn resonance_summary(result: &SweepResult, swept: SweptAxis) -> Result<Vec<ResonanceRecord>> {
    let axis2 = result
        .spec
        .axis2
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("resonance summary needs a two-axis sweep".into()))?;
    let (rows, cols) = result.shape();
    let (fixed_axis, swept_axis) = match swept {
        SweptAxis::First => (axis2, &result.spec.axis1),
        SweptAxis::Second => (&result.spec.axis1, axis2),
    };
    let (n_fixed, n_swept) = match swept {
        SweptAxis::First => (cols, rows),
        SweptAxis::Second => (rows, cols),
    };
    Ok((0..n_fixed)
        .map(|f| {
            let line: Vec<f64> = (0..n_swept)
                .map(|s| match swept {
                    SweptAxis::First => result.cell(s, f).concurrence,
                    SweptAxis::Second => result.cell(f, s).concurrence,
                })
                .collect();
            let (argmax, max_concurrence) = line_peak(&line);
            ResonanceRecord {
                fixed_value: fixed_axis.values[f],
                argmax,
                argmax_value: argmax.map(|i| swept_axis.values[i]),
                max_concurrence,
                interior: argmax.is_some_and(|i| i > 0 && i + 1 < n_swept),
            }
        })
        .collect())
}

/// First index of the maximum, or `None` if nothing exceeds the negligible level.
pub fn line_peak(line: &[f64]) -> (Option<usize>, f64) {
    let mut best: Option<usize> = None;
    let mut best_value = 0.0;
    for (i, &v) in line.iter().enumerate() {
        if v > best_value {
            best = Some(i);
            best_value = v;
        }
    }
    if best_value <= NEGLIGIBLE_CONCURRENCE {
        (None, best_value.max(0.0))
    } else {
        (best, best_value)
    }
}

/// Spread of `fixed × argmax` across the lines that have a maximum.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpread {
    pub products: Vec<f64>,
    pub mean: f64,
    /// `(max − min) / mean`.
    pub relative_spread: f64,
}

pub fn argmax_product_spread(records: &[ResonanceRecord]) -> Option<ProductSpread> {
    let products: Vec<f64> = records
        .iter()
        .filter_map(|r| r.argmax_value.map(|v| v * r.fixed_value))
        .collect();
    if products.is_empty() {
        return None;
    }
    let mean = products.iter().sum::<f64>() / products.len() as f64;
    let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let relative_spread = if mean > 0.0 { (hi - lo) / mean } else { f64::NAN };
    Some(ProductSpread {
        products,
        mean,
        relative_spread,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Flat,
    NonDecreasing,
    NonIncreasing,
}

/// Direction of a sequence when differences within `band` are ignored, or
/// `None` if it both rises and falls by more than `band`.
pub fn monotone_trend(values: &[f64], band: f64) -> Option<Trend> {
    let rises = values.windows(2).any(|w| w[1] - w[0] > band);
    let falls = values.windows(2).any(|w| w[0] - w[1] > band);
    match (rises, falls) {
        (false, false) => Some(Trend::Flat),
        (true, false) => Some(Trend::NonDecreasing),
        (false, true) => Some(Trend::NonIncreasing),
        (true, true) => None,
    }
}

/// Whether some interior point is a strict local maximum or minimum by
/// more than `band` relative to both neighbours, after merging runs of
/// values that agree within `band`.
pub fn has_interior_strict_extremum(values: &[f64], band: f64) -> bool {
    let mut plateaus: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        match plateaus.last() {
            Some(&last) if (v - last).abs() <= band => {}
            _ => plateaus.push(v),
        }
    }
    plateaus.windows(3).any(|w| {
        let (l, m, r) = (w[0], w[1], w[2]);
        (m > l + band && m > r + band) || (m < l - band && m < r - band)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(grid: Vec<Vec<f64>>) -> SweepResult {
        let rows = grid.len();
        let cols = grid[0].len();
        let spec = SweepSpec {
            base: figure_base(),
            frame: Frame::Interaction,
            axis1: Axis::linspace(Parameter::NThermal, 0.0, 1.0, rows),
            axis2: Some(Axis::linspace(Parameter::Kappa, 1.0, 2.0, cols)),
            evaluation_time: 1.0,
            initial_state: InitialState::Ground,
        };
        let mut cells = vec![];
        for (r, row) in grid.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                cells.push(CellRecord {
                    axis1_value: spec.axis1.values[r],
                    axis2_value: spec.axis2_value(c),
                    concurrence: v,
                    mean_photon: 0.0,
                    excited_a: 0.0,
                    excited_b: 0.0,
                    mode_b: None,
                    trace_residual: 0.0,
                    hermiticity_drift: 0.0,
                    min_eigenvalue: 0.0,
                });
            }
        }
        SweepResult { spec, cells }
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 3.0, 31);
        assert_eq!(v.len(), 31);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[30], 3.0);
        assert!((v[10] - 1.0).abs() < 1e-15);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn parameter_names_round_trip() {
        for p in [Parameter::NThermal, Parameter::Kappa, Parameter::Gamma, Parameter::Time] {
            assert_eq!(p.name().parse::<Parameter>().unwrap(), p);
        }
        assert!("gama".parse::<Parameter>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(fig2_spec().validate().is_ok());
        assert!(fig3_spec().validate().is_ok());
        assert!(fig4_spec().validate().is_ok());

        let mut dup = fig3_spec();
        dup.axis2 = Some(Axis::linspace(Parameter::NThermal, 0.0, 1.0, 3));
        assert!(dup.validate().is_err());

        let mut descending = fig4_spec();
        descending.axis1.values = vec![1.0, 0.5];
        assert!(descending.validate().is_err());

        let mut negative = fig4_spec();
        negative.axis1.values = vec![-1.0, 0.5];
        assert!(negative.validate().is_err());

        let mut no_time = fig4_spec();
        no_time.evaluation_time = 0.0;
        assert!(no_time.validate().is_err());

        let mut wrong_dim = fig4_spec();
        wrong_dim.initial_state = InitialState::Custom(DensityMatrix::maximally_mixed(4));
        assert!(wrong_dim.validate().is_err());
    }

    #[test]
    fn presets_follow_captions() {
        let t = half_inverse_coupling_time(&figure_base());
        assert!((t - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        let f3 = fig3_spec();
        assert_eq!(f3.evaluation_time, t);
        let kappas = &f3.axis2.as_ref().unwrap().values;
        assert!(kappas[0] > 0.0 && *kappas.last().unwrap() == 5.0);
        let n_t = &f3.axis1.values;
        assert!(n_t[0] > 0.0 && *n_t.last().unwrap() == 2.0);
        let times = &fig2_spec().axis2.unwrap().values;
        assert_eq!(times.len(), 26);
        assert!(times[0] > 0.0 && times[25] == 5.0);
        assert_eq!(fig4_spec().base.kappa, 2.0);
        assert_eq!(fig2_spec().base.gamma, 0.2);
    }

    #[test]
    fn plan_shares_trajectories_along_time() {
        let spec = fig2_spec();
        let jobs = plan(&spec);
        assert_eq!(jobs.len(), 31);
        assert!(jobs.iter().all(|j| j.times.len() == 26 && j.cells.len() == 26));

        let mut transposed = spec.clone();
        std::mem::swap(&mut transposed.axis1, transposed.axis2.as_mut().unwrap());
        let jobs = plan(&transposed);
        assert_eq!(jobs.len(), 31);
        assert_eq!(jobs[3].times.len(), 26);
        assert_eq!(jobs[3].cells[5], (5, 3));

        assert_eq!(plan(&fig4_spec()).len(), 31 * 31);
    }

    #[test]
    fn zero_line_has_no_argmax() {
        let result = synthetic(vec![vec![0.0, 0.0], vec![0.0, 0.3], vec![0.0, 0.1]]);
        let summary = resonance_summary(&result, SweptAxis::First).unwrap();
        assert_eq!(summary[0].argmax, None);
        assert_eq!(summary[0].max_concurrence, 0.0);
        assert!(!summary[0].interior);
        assert_eq!(summary[1].argmax, Some(1));
        assert!(summary[1].interior);
        assert_eq!(summary[1].argmax_value, Some(0.5));
        assert_eq!(summary[1].fixed_value, 2.0);
    }

    #[test]
    fn single_peak_is_found() {
        let mut grid = vec![vec![0.01; 4]; 5];
        grid[3][1] = 0.7;
        let result = synthetic(grid);
        let by_row = resonance_summary(&result, SweptAxis::Second).unwrap();
        assert_eq!(by_row[3].argmax, Some(1));
        assert_eq!(by_row[3].max_concurrence, 0.7);
        let by_col = resonance_summary(&result, SweptAxis::First).unwrap();
        assert_eq!(by_col[1].argmax, Some(3));
        assert!(by_col[1].interior);
    }

    #[test]
    fn summary_needs_two_axes() {
        let mut result = synthetic(vec![vec![0.1], vec![0.2]]);
        result.spec.axis2 = None;
        assert!(resonance_summary(&result, SweptAxis::First).is_err());
    }

    #[test]
    fn product_spread() {
        let records = vec![
            ResonanceRecord {
                fixed_value: 1.0,
                argmax: Some(2),
                argmax_value: Some(2.0),
                max_concurrence: 0.1,
                interior: true,
            },
            ResonanceRecord {
                fixed_value: 2.0,
                argmax: Some(1),
                argmax_value: Some(1.0),
                max_concurrence: 0.1,
                interior: true,
            },
            ResonanceRecord {
                fixed_value: 4.0,
                argmax: None,
                argmax_value: None,
                max_concurrence: 0.0,
                interior: false,
            },
        ];
        let spread = argmax_product_spread(&records).unwrap();
        assert_eq!(spread.products, vec![2.0, 2.0]);
        assert_eq!(spread.relative_spread, 0.0);
        assert!(argmax_product_spread(&records[2..]).is_none());
    }

    #[test]
    fn trends_and_extrema() {
        assert_eq!(monotone_trend(&[0.0, 0.1, 0.1, 0.3], 1e-6), Some(Trend::NonDecreasing));
        assert_eq!(
            monotone_trend(&[0.3, 0.2, 0.2 + 1e-7, 0.0], 1e-6),
            Some(Trend::NonIncreasing)
        );
        assert_eq!(monotone_trend(&[0.0; 4], 1e-6), Some(Trend::Flat));
        assert_eq!(monotone_trend(&[0.0, 0.2, 0.1], 1e-6), None);

        assert!(!has_interior_strict_extremum(&[0.0, 0.1, 0.2], 1e-6));
        assert!(has_interior_strict_extremum(&[0.0, 0.2, 0.1], 1e-6));
        assert!(has_interior_strict_extremum(&[0.3, 0.1, 0.2], 1e-6));
        assert!(!has_interior_strict_extremum(&[0.0, 0.2, 0.2, 0.3], 1e-6));
        assert!(!has_interior_strict_extremum(&[0.0, 1e-7, 0.0], 1e-6));
        assert!(has_interior_strict_extremum(&[0.0, 0.2, 0.2, 0.1], 1e-6));
    }
}
