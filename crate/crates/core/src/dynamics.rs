//! Time evolution under the Lindblad equation.
//!
//! [`lindblad_rhs`] evaluates the generator with dense products exactly as
//! written. The integrator uses a compiled sparse form of the same generator,
//! and [`vectorize_superoperator`] builds the `d² × d²` matrix used for
//! steady states. Tests check all three against each other.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{mode_b_number, LindbladModel};
use crate::qops::{min_eigenvalue, partial_trace_operator, DensityMatrix, Operator, SpaceLayout, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// `−i[H, ρ] + Σ_k r_k (2 L_k ρ L_k† − L_k†L_k ρ − ρ L_k†L_k)`.
pub fn lindblad_rhs(model: &LindbladModel, rho: &Operator) -> Result<Operator> {
    if rho.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            context: "Lindblad right-hand side",
            expected: model.dim(),
            found: rho.dim(),
        });
    }
    let h = model.hamiltonian();
    let mut out = (&(h * rho) - &(rho * h)).scale(-I);
    for term in model.collapse_terms() {
        let l = &term.op;
        let l_dag = l.dagger();
        let ldl = &l_dag * l;
        let jump = &(&(l * rho) * &l_dag).scale_re(2.0);
        let anti = &(&ldl * rho) + &(rho * &ldl);
        out = &out + &(jump - &anti).scale_re(term.rate);
    }
    Ok(out)
}

/// Column-stacked superoperator: `𝓛 vec(ρ) = vec(lindblad_rhs(ρ))`, built from
/// `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
pub fn vectorize_superoperator(model: &LindbladModel) -> Operator {
    let d = model.dim();
    let id = DMatrix::<C64>::identity(d, d);
    let h = model.hamiltonian().matrix();
    let mut sup = (id.kronecker(h) - h.transpose().kronecker(&id)) * (-I);
    for term in model.collapse_terms() {
        let l = term.op.matrix();
        let ldl = l.adjoint() * l;
        let jump = l.map(|z| z.conj()).kronecker(l) * C64::new(2.0, 0.0);
        let anti = id.kronecker(&ldl) + ldl.transpose().kronecker(&id);
        sup += (jump - anti) * C64::new(term.rate, 0.0);
    }
    Operator::new(sup).expect("superoperator is square")
}

/// Sparse entries `(row, col, value)` of a dense operator.
fn nonzeros(m: &DMatrix<C64>) -> Entries {
    let mut out = Vec::new();
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let v = m[(row, col)];
            if v != ZERO {
                out.push((row, col, v));
            }
        }
    }
    out
}

/// Nonzero entries `(row, col, value)` of a sparse matrix.
type Entries = Vec<(usize, usize, C64)>;

/// Generator in the form `−i(H_eff ρ − ρ H_eff†) + Σ 2 r L ρ L†` with
/// `H_eff = H − i Σ r L†L`, using only the nonzero entries.
#[derive(Clone, Debug)]
struct CompiledGenerator {
    dim: usize,
    h_eff: Entries,
    jumps: Vec<(f64, Entries)>,
}

impl CompiledGenerator {
    fn new(model: &LindbladModel) -> Self {
        let mut h_eff = model.hamiltonian().matrix().clone();
        let mut jumps = Vec::new();
        for term in model.collapse_terms() {
            if term.rate == 0.0 {
                continue;
            }
            let l = term.op.matrix();
            h_eff -= (l.adjoint() * l) * C64::new(0.0, term.rate);
            jumps.push((2.0 * term.rate, nonzeros(l)));
        }
        Self {
            dim: model.dim(),
            h_eff: nonzeros(&h_eff),
            jumps,
        }
    }

    /// Writes the generator applied to `rho` into `out`.
    fn apply(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let d = self.dim;
        out.fill(ZERO);
        // −i H_eff ρ + i ρ H_eff†
        for &(r, k, v) in &self.h_eff {
            let mv = -I * v;
            let pv = I * v.conj();
            for j in 0..d {
                out[(r, j)] += mv * rho[(k, j)];
                // (ρ H_eff†)[j, r] = Σ_k ρ[j, k] conj(H_eff[r, k])
                out[(j, r)] += pv * rho[(j, k)];
            }
        }
        for (weight, entries) in &self.jumps {
            for &(i, k, v) in entries {
                let vw = v * *weight;
                for &(j, l, w) in entries {
                    out[(i, j)] += vw * rho[(k, l)] * w.conj();
                }
            }
        }
    }
}

/// Which states a trajectory keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Recording {
    /// Full composite states.
    Composite,
    /// Reduced two-atom states (requires an `[atom, atom, cavity]` layout).
    #[default]
    Atoms,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorSettings {
    /// Largest RK4 step. Intervals are split into equal steps no longer than this.
    pub dt: f64,
    /// End time of [`evolve`].
    pub t_max: f64,
    /// Bound on `|tr ρ − 1|` and on the pre-symmetrization Hermiticity drift.
    pub tolerance: f64,
    /// Record every `record_stride`-th step (the final step is always kept).
    pub record_stride: usize,
    pub recording: Recording,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            dt: 0.002,
            t_max: 5.0,
            tolerance: 1e-10,
            record_stride: 10,
            recording: Recording::Atoms,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig {
                key: "dt",
                reason: format!("must be positive, got {}", self.dt),
            });
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidConfig {
                key: "t_max",
                reason: format!("must be nonnegative, got {}", self.t_max),
            });
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-4) {
            return Err(Error::InvalidConfig {
                key: "tolerance",
                reason: format!("must lie in (0, 1e-4], got {}", self.tolerance),
            });
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig {
                key: "record_stride",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Threshold below which the smallest eigenvalue counts as positivity loss.
    pub fn positivity_floor(&self) -> f64 {
        -100.0 * self.tolerance
    }
}

/// Observables evaluated on a recorded state.
#[derive(Clone, Debug, PartialEq)]
pub struct Observables {
    pub mean_photon: f64,
    /// Excited-state populations of atoms a and b.
    pub excited_a: Option<f64>,
    pub excited_b: Option<f64>,
    /// `⟨σ_B⁺ σ_B⁻⟩`, when the model defines collective modes.
    pub mode_b: Option<f64>,
}

/// Numerical health of a recorded state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Health {
    pub trace_residual: f64,
    /// Largest `max |ρ − ρ†|` seen before re-symmetrization since the previous record.
    pub hermiticity_drift: f64,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub observables: Vec<Observables>,
    pub health: Vec<Health>,
    pub recording: Recording,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states
            .last()
            .expect("trajectories hold at least the initial state")
    }
}

fn observe(model: &LindbladModel, rho: &Operator) -> Result<(Observables, Option<Operator>)> {
    let layout = model.layout();
    let cavity = partial_trace_operator(rho, layout, &[model.cavity_slot()])?;
    let mean_photon = (0..cavity.dim()).map(|n| n as f64 * cavity.get(n, n).re).sum();
    if !model.has_atoms() {
        let obs = Observables {
            mean_photon,
            excited_a: None,
            excited_b: None,
            mode_b: None,
        };
        return Ok((obs, None));
    }
    let atoms = partial_trace_operator(rho, layout, &[SpaceLayout::ATOM_A, SpaceLayout::ATOM_B])?;
    // |gg⟩, |ge⟩, |eg⟩, |ee⟩
    let p = |i: usize| atoms.get(i, i).re;
    let obs = Observables {
        mean_photon,
        excited_a: Some(p(2) + p(3)),
        excited_b: Some(p(1) + p(3)),
        mode_b: model.mode_weights().map(|w| mode_b_number(w).expectation(&atoms).re),
    };
    Ok((obs, Some(atoms)))
}

/// `dst += factor * src`.
fn add_scaled(dst: &mut DMatrix<C64>, src: &DMatrix<C64>, factor: C64) {
    for (d, s) in dst.as_mut_slice().iter_mut().zip(src.as_slice()) {
        *d += factor * s;
    }
}

struct Integrator<'a> {
    model: &'a LindbladModel,
    generator: CompiledGenerator,
    settings: &'a IntegratorSettings,
    k: [DMatrix<C64>; 4],
    scratch: DMatrix<C64>,
    drift_since_record: f64,
}

impl<'a> Integrator<'a> {
    fn new(model: &'a LindbladModel, settings: &'a IntegratorSettings) -> Self {
        let d = model.dim();
        let zeros = || DMatrix::from_element(d, d, ZERO);
        Self {
            model,
            generator: CompiledGenerator::new(model),
            settings,
            k: [zeros(), zeros(), zeros(), zeros()],
            scratch: zeros(),
            drift_since_record: 0.0,
        }
    }

    /// One classical RK4 step followed by re-Hermitization and the trace check.
    fn step(&mut self, rho: &mut DMatrix<C64>, h: f64, t_after: f64) -> Result<()> {
        let half = C64::new(h / 2.0, 0.0);
        let full = C64::new(h, 0.0);
        let [k1, k2, k3, k4] = &mut self.k;
        self.generator.apply(rho, k1);
        self.scratch.copy_from(rho);
        add_scaled(&mut self.scratch, k1, half);
        self.generator.apply(&self.scratch, k2);
        self.scratch.copy_from(rho);
        add_scaled(&mut self.scratch, k2, half);
        self.generator.apply(&self.scratch, k3);
        self.scratch.copy_from(rho);
        add_scaled(&mut self.scratch, k3, full);
        self.generator.apply(&self.scratch, k4);

        let sixth = C64::new(h / 6.0, 0.0);
        let third = C64::new(h / 3.0, 0.0);
        add_scaled(rho, k1, sixth);
        add_scaled(rho, k2, third);
        add_scaled(rho, k3, third);
        add_scaled(rho, k4, sixth);

        let d = rho.nrows();
        let mut drift: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let a = rho[(i, j)];
                let b = rho[(j, i)].conj();
                drift = drift.max((a - b).norm());
                let avg = (a + b) * 0.5;
                rho[(i, j)] = avg;
                rho[(j, i)] = avg.conj();
            }
        }
        self.drift_since_record = self.drift_since_record.max(drift);
        let tolerance = self.settings.tolerance;
        if drift > tolerance {
            return Err(Error::HermiticityDrift {
                time: t_after,
                residual: drift,
                tolerance,
            });
        }
        let residual = (rho.trace() - C64::new(1.0, 0.0)).norm();
        if residual > tolerance {
            return Err(Error::TraceDrift {
                time: t_after,
                residual,
                tolerance,
            });
        }
        Ok(())
    }

    fn record(&mut self, rho: &DMatrix<C64>, t: f64, out: &mut Trajectory) -> Result<()> {
        let op = Operator::new(rho.clone())?;
        let min_eig = min_eigenvalue(&op);
        if min_eig < self.settings.positivity_floor() {
            return Err(Error::PositivityLoss {
                time: t,
                min_eigenvalue: min_eig,
            });
        }
        let (obs, atoms) = observe(self.model, &op)?;
        let health = Health {
            trace_residual: (op.trace() - C64::new(1.0, 0.0)).norm(),
            hermiticity_drift: self.drift_since_record,
            min_eigenvalue: min_eig,
        };
        self.drift_since_record = 0.0;
        let state = match (out.recording, atoms) {
            (Recording::Atoms, Some(atoms)) => atoms,
            (Recording::Atoms, None) => {
                return Err(Error::InvalidArgument(
                    "atom recording requested for a model without atoms".into(),
                ))
            }
            (Recording::Composite, _) => op,
        };
        out.times.push(t);
        out.states.push(DensityMatrix::new_unchecked(state));
        out.observables.push(obs);
        out.health.push(health);
        Ok(())
    }
}

fn check_initial(model: &LindbladModel, rho0: &DensityMatrix) -> Result<()> {
    if rho0.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            context: "initial state",
            expected: model.dim(),
            found: rho0.dim(),
        });
    }
    Ok(())
}

fn empty_trajectory(settings: &IntegratorSettings) -> Trajectory {
    Trajectory {
        times: vec![],
        states: vec![],
        observables: vec![],
        health: vec![],
        recording: settings.recording,
    }
}

fn steps_for(span: f64, dt: f64) -> usize {
    if span <= 0.0 {
        0
    } else {
        ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }
}

/// Integrates from `t = 0` to `settings.t_max` with RK4 steps of equal size
/// `t_max / ceil(t_max / dt)`, recording every `record_stride` steps and at
/// the final time.
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, settings: &IntegratorSettings) -> Result<Trajectory> {
    settings.validate()?;
    check_initial(model, rho0)?;
    let mut integrator = Integrator::new(model, settings);
    let mut out = empty_trajectory(settings);
    let mut rho = rho0.as_operator().matrix().clone();
    integrator.record(&rho, 0.0, &mut out)?;

    let n = steps_for(settings.t_max, settings.dt);
    if n == 0 {
        return Ok(out);
    }
    let h = settings.t_max / n as f64;
    for step in 1..=n {
        let t = if step == n { settings.t_max } else { step as f64 * h };
        integrator.step(&mut rho, h, t)?;
        if step % settings.record_stride == 0 || step == n {
            integrator.record(&rho, t, &mut out)?;
        }
    }
    Ok(out)
}

/// Integrates through the given ascending sample times and records exactly
/// those. Each interval is split into equal steps no longer than `dt`;
/// `t_max` and `record_stride` are ignored.
pub fn evolve_sampled(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    sample_times: &[f64],
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    settings.validate()?;
    check_initial(model, rho0)?;
    if sample_times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidArgument(
            "sample times must be finite and nonnegative".into(),
        ));
    }
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("sample times must be ascending".into()));
    }
    let mut integrator = Integrator::new(model, settings);
    let mut out = empty_trajectory(settings);
    let mut rho = rho0.as_operator().matrix().clone();
    let mut t = 0.0;
    for &target in sample_times {
        let n = steps_for(target - t, settings.dt);
        if n > 0 {
            let h = (target - t) / n as f64;
            let start = t;
            for step in 1..=n {
                let t_after = if step == n { target } else { start + step as f64 * h };
                integrator.step(&mut rho, h, t_after)?;
            }
        }
        t = target;
        integrator.record(&rho, t, &mut out)?;
    }
    Ok(out)
}

/// Steady state together with the residual `‖𝓛 vec(ρ)‖∞`.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub state: DensityMatrix,
    pub residual: f64,
}

/// Smallest-to-largest pivot ratio below which the system counts as singular.
pub const RANK_TOLERANCE: f64 = 1e-11;

/// Solves `𝓛 vec(ρ) = 0` with `tr ρ = 1` by replacing the `ρ₀₀` equation with
/// the trace functional.
pub fn steady_state(model: &LindbladModel) -> Result<SteadyState> {
    if !model.is_dissipative() {
        return Err(Error::RankDeficient { pivot_ratio: 0.0 });
    }
    let d = model.dim();
    let sup = vectorize_superoperator(model);
    let mut system = sup.matrix().clone();
    for col in 0..d * d {
        system[(0, col)] = ZERO;
    }
    for i in 0..d {
        system[(0, i * d + i)] = C64::new(1.0, 0.0);
    }
    let lu = system.lu();
    let u = lu.u();
    let (lo, hi) = (0..d * d)
        .map(|i| u[(i, i)].norm())
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), p| (lo.min(p), hi.max(p)));
    let pivot_ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if pivot_ratio < RANK_TOLERANCE {
        return Err(Error::RankDeficient { pivot_ratio });
    }
    let mut rhs = DVector::from_element(d * d, ZERO);
    rhs[0] = C64::new(1.0, 0.0);
    let x = lu.solve(&rhs).ok_or(Error::RankDeficient { pivot_ratio })?;
    let rho = Operator::unvec(&x)?.hermitian_part();
    let residual = (sup.matrix() * rho.vec()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let state = DensityMatrix::new(rho)?;
    Ok(SteadyState { state, residual })
}
