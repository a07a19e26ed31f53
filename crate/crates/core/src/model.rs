//! Physical model: two resonant two-level atoms coupled to one cavity mode
//! that leaks into a thermal bath of mean photon number `n_thermal`.
//!
//! Dissipators follow the convention
//! `ρ̇ ⊃ −k (L†L ρ + ρ L†L − 2 L ρ L†)` for every stored `(k, L)` pair, so a
//! cavity with `kappa = κ` loses energy at rate `2κ` and an atom with
//! `gamma = Γ` decays at rate `2Γ`.

use crate::dynamics::{self, IntegratorSettings};
use crate::error::{Error, Result};
use crate::qops::{
    annihilation, embed, excited_projector, number, pauli_z, sigma_minus, sigma_plus, tensor, DensityMatrix, Ket,
    Operator, SpaceLayout, HERMITICITY_TOL,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    /// Atomic transition frequency.
    pub omega: f64,
    /// Cavity frequency.
    pub omega_f: f64,
    /// Coupling of atom a to the cavity.
    pub g_a: f64,
    /// Coupling of atom b to the cavity.
    pub g_b: f64,
    /// Cavity leakage rate; the field decays at `2 * kappa`.
    pub kappa: f64,
    /// Atomic decay rate; spontaneous emission happens at `2 * gamma`.
    pub gamma: f64,
    /// Effective photon number of the white noise driving the cavity.
    pub n_thermal: f64,
    /// Largest photon number kept in the truncated cavity space.
    pub cutoff: usize,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            omega_f: 1.0,
            g_a: 1.0,
            g_b: 1.0,
            kappa: 2.0,
            gamma: 0.2,
            n_thermal: 0.0,
            cutoff: 5,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega", self.omega),
            ("omega_f", self.omega_f),
            ("g_a", self.g_a),
            ("g_b", self.g_b),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("n_thermal", self.n_thermal),
        ];
        for (key, value) in finite {
            if !value.is_finite() {
                return Err(Error::InvalidConfig {
                    key,
                    reason: format!("{value} is not finite"),
                });
            }
        }
        let nonneg = [
            ("omega", self.omega),
            ("omega_f", self.omega_f),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("n_thermal", self.n_thermal),
        ];
        for (key, value) in nonneg {
            if value < 0.0 {
                return Err(Error::InvalidConfig {
                    key,
                    reason: format!("must be nonnegative, got {value}"),
                });
            }
        }
        if self.cutoff == 0 {
            return Err(Error::InvalidConfig {
                key: "cutoff",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Collective coupling `g = √(g_a² + g_b²)`.
    pub fn collective_coupling(&self) -> f64 {
        self.g_a.hypot(self.g_b)
    }

    pub fn layout(&self) -> SpaceLayout {
        SpaceLayout::atoms_and_cavity(self.cutoff)
    }

    /// Normalized `(g_a, g_b) / g`, or `None` when both couplings vanish.
    pub fn mode_weights(&self) -> Option<(f64, f64)> {
        let g = self.collective_coupling();
        (g > 0.0).then(|| (self.g_a / g, self.g_b / g))
    }

    /// Probability mass of the thermal distribution above the cutoff,
    /// `(n/(1+n))^(N+1)`.
    pub fn thermal_tail_mass(&self) -> f64 {
        let ratio = self.n_thermal / (1.0 + self.n_thermal);
        ratio.powi(self.cutoff as i32 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Frame {
    /// Rotating with `H₀ = Σ (ω/2) σᶻ + ω a†a`; only the coupling remains.
    #[default]
    Interaction,
    Lab,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    /// `a`, rate `κ (n_T + 1)`.
    CavityLoss,
    /// `a†`, rate `κ n_T`.
    CavityGain,
    /// `σ⁻` on atom a, rate `Γ`.
    AtomADecay,
    /// `σ⁻` on atom b, rate `Γ`.
    AtomBDecay,
}

#[derive(Clone, Debug)]
pub struct CollapseTerm {
    pub channel: Channel,
    pub rate: f64,
    pub op: Operator,
}

/// Hamiltonian, dissipators and the layout they live on.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: Operator,
    collapse_terms: Vec<CollapseTerm>,
    layout: SpaceLayout,
    mode_weights: Option<(f64, f64)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator, collapse_terms: Vec<CollapseTerm>, layout: SpaceLayout) -> Result<Self> {
        let dim = layout.composite_dim();
        if hamiltonian.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "Hamiltonian",
                expected: dim,
                found: hamiltonian.dim(),
            });
        }
        let residual = hamiltonian.hermiticity_residual();
        if residual > HERMITICITY_TOL {
            return Err(Error::NotHermitian { residual });
        }
        for term in &collapse_terms {
            if term.op.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "collapse operator",
                    expected: dim,
                    found: term.op.dim(),
                });
            }
            if !(term.rate >= 0.0 && term.rate.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "collapse rate {} for {:?} must be finite and nonnegative",
                    term.rate, term.channel
                )));
            }
        }
        Ok(Self {
            hamiltonian,
            collapse_terms,
            layout,
            mode_weights: None,
        })
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn collapse_terms(&self) -> &[CollapseTerm] {
        &self.collapse_terms
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.composite_dim()
    }

    /// Whether the layout is the `[atom a, atom b, cavity]` space.
    pub fn has_atoms(&self) -> bool {
        let dims = self.layout.factor_dims();
        dims.len() == 3 && dims[0] == 2 && dims[1] == 2
    }

    pub fn is_dissipative(&self) -> bool {
        self.collapse_terms.iter().any(|t| t.rate > 0.0)
    }

    /// Collective-mode weights used to report the mode-B population.
    pub fn mode_weights(&self) -> Option<(f64, f64)> {
        self.mode_weights
    }

    /// Slot of the cavity factor in the layout.
    pub fn cavity_slot(&self) -> usize {
        self.layout.num_factors() - 1
    }
}

fn check_atoms_and_cavity(cfg: &SystemConfig) -> Result<(SpaceLayout, Operator)> {
    cfg.validate()?;
    Ok((cfg.layout(), annihilation(cfg.cutoff)?))
}

/// `H_I = Σ_i g_i (|g⟩_i⟨e| a† + h.c.)` on the composite space.
pub fn build_interaction_hamiltonian(cfg: &SystemConfig) -> Result<Operator> {
    let (layout, a) = check_atoms_and_cavity(cfg)?;
    let a_dag = embed(&a.dagger(), SpaceLayout::CAVITY, &layout)?;
    let mut exchange = Operator::zeros(layout.composite_dim());
    for (slot, g) in [(SpaceLayout::ATOM_A, cfg.g_a), (SpaceLayout::ATOM_B, cfg.g_b)] {
        let lower = embed(&sigma_minus(), slot, &layout)?;
        exchange = &exchange + &(&lower * &a_dag).scale_re(g);
    }
    Ok(&exchange + &exchange.dagger())
}

/// `H₀ = Σ_i (ω/2) σᶻ_i + ω_f a†a`.
pub fn build_free_hamiltonian(cfg: &SystemConfig) -> Result<Operator> {
    let (layout, _) = check_atoms_and_cavity(cfg)?;
    let z_a = embed(&pauli_z(), SpaceLayout::ATOM_A, &layout)?;
    let z_b = embed(&pauli_z(), SpaceLayout::ATOM_B, &layout)?;
    let n = embed(&number(cfg.cutoff)?, SpaceLayout::CAVITY, &layout)?;
    Ok(&(&z_a + &z_b).scale_re(cfg.omega / 2.0) + &n.scale_re(cfg.omega_f))
}

/// Lab-frame Hamiltonian `H₀ + H_I`.
pub fn build_lab_hamiltonian(cfg: &SystemConfig) -> Result<Operator> {
    Ok(&build_free_hamiltonian(cfg)? + &build_interaction_hamiltonian(cfg)?)
}

/// Rates of the four dissipative channels, zero rates included.
pub fn collapse_rates(cfg: &SystemConfig) -> [(Channel, f64); 4] {
    [
        (Channel::CavityLoss, cfg.kappa * (cfg.n_thermal + 1.0)),
        (Channel::CavityGain, cfg.kappa * cfg.n_thermal),
        (Channel::AtomADecay, cfg.gamma),
        (Channel::AtomBDecay, cfg.gamma),
    ]
}

/// Collapse terms with nonzero rate, embedded on the composite space.
pub fn build_collapse_terms(cfg: &SystemConfig) -> Result<Vec<CollapseTerm>> {
    let (layout, a) = check_atoms_and_cavity(cfg)?;
    collapse_rates(cfg)
        .into_iter()
        .filter(|&(_, rate)| rate > 0.0)
        .map(|(channel, rate)| {
            let op = match channel {
                Channel::CavityLoss => embed(&a, SpaceLayout::CAVITY, &layout)?,
                Channel::CavityGain => embed(&a.dagger(), SpaceLayout::CAVITY, &layout)?,
                Channel::AtomADecay => embed(&sigma_minus(), SpaceLayout::ATOM_A, &layout)?,
                Channel::AtomBDecay => embed(&sigma_minus(), SpaceLayout::ATOM_B, &layout)?,
            };
            Ok(CollapseTerm { channel, rate, op })
        })
        .collect()
}

pub fn build_model(cfg: &SystemConfig, frame: Frame) -> Result<LindbladModel> {
    let hamiltonian = match frame {
        Frame::Interaction => build_interaction_hamiltonian(cfg)?,
        Frame::Lab => build_lab_hamiltonian(cfg)?,
    };
    let mut model = LindbladModel::new(hamiltonian, build_collapse_terms(cfg)?, cfg.layout())?;
    model.mode_weights = cfg.mode_weights();
    Ok(model)
}

/// The cavity alone (no atoms), with only its thermal dissipators.
pub fn build_cavity_model(cfg: &SystemConfig) -> Result<LindbladModel> {
    cfg.validate()?;
    let a = annihilation(cfg.cutoff)?;
    let layout = SpaceLayout::new(vec![cfg.cutoff + 1])?;
    let terms = collapse_rates(cfg)
        .into_iter()
        .filter(|&(channel, rate)| rate > 0.0 && matches!(channel, Channel::CavityLoss | Channel::CavityGain))
        .map(|(channel, rate)| CollapseTerm {
            channel,
            rate,
            op: if channel == Channel::CavityLoss {
                a.clone()
            } else {
                a.dagger()
            },
        })
        .collect();
    LindbladModel::new(Operator::zeros(cfg.cutoff + 1), terms, layout)
}

/// Collective raising operators `(σ_A⁺, σ_B⁺)` on the two-atom space.
pub fn collective_atom_operators(g_a: f64, g_b: f64) -> Result<(Operator, Operator)> {
    let g = g_a.hypot(g_b);
    if g == 0.0 {
        return Err(Error::InvalidArgument(
            "collective modes need at least one nonzero coupling".into(),
        ));
    }
    let atoms = SpaceLayout::new(vec![2, 2])?;
    let plus_a = embed(&sigma_plus(), 0, &atoms)?;
    let plus_b = embed(&sigma_plus(), 1, &atoms)?;
    let mode_a = (&plus_a.scale_re(g_a) + &plus_b.scale_re(g_b)).scale_re(1.0 / g);
    let mode_b = (&plus_a.scale_re(g_b) - &plus_b.scale_re(g_a)).scale_re(1.0 / g);
    Ok((mode_a, mode_b))
}

/// Collective raising operators `(σ_A⁺, σ_B⁺)` embedded on the composite space.
pub fn collective_mode_operators(cfg: &SystemConfig) -> Result<(Operator, Operator)> {
    cfg.validate()?;
    let (mode_a, mode_b) = collective_atom_operators(cfg.g_a, cfg.g_b)?;
    let cavity = Operator::identity(cfg.cutoff + 1);
    Ok((tensor(&mode_a, &cavity), tensor(&mode_b, &cavity)))
}

/// `σ_B⁺ σ_B⁻` on the two-atom space for normalized weights.
pub fn mode_b_number(weights: (f64, f64)) -> Operator {
    let (_, mode_b) = collective_atom_operators(weights.0, weights.1).expect("normalized weights are never both zero");
    &mode_b * &mode_b.dagger()
}

/// `|e⟩_a⟨e| + |e⟩_b⟨e| + a†a`.
pub fn total_excitation(cfg: &SystemConfig) -> Result<Operator> {
    let (layout, _) = check_atoms_and_cavity(cfg)?;
    let e_a = embed(&excited_projector(), SpaceLayout::ATOM_A, &layout)?;
    let e_b = embed(&excited_projector(), SpaceLayout::ATOM_B, &layout)?;
    let n = embed(&number(cfg.cutoff)?, SpaceLayout::CAVITY, &layout)?;
    Ok(&(&e_a + &e_b) + &n)
}

/// `|atom a, atom b, n⟩` with `true` meaning excited.
pub fn product_state(cfg: &SystemConfig, excited_a: bool, excited_b: bool, photons: usize) -> Result<Ket> {
    if photons > cfg.cutoff {
        return Err(Error::InvalidArgument(format!(
            "photon number {photons} exceeds cutoff {}",
            cfg.cutoff
        )));
    }
    Ok(cfg
        .layout()
        .product_ket(&[excited_a as usize, excited_b as usize, photons]))
}

/// `|g⟩_a|g⟩_b|0⟩` as a density matrix.
pub fn ground_state(cfg: &SystemConfig) -> Result<DensityMatrix> {
    DensityMatrix::pure(&product_state(cfg, false, false, 0)?)
}

/// Outcome of a mode-B population check along a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct DecouplingReport {
    pub max_population: f64,
    pub bound: f64,
    pub decoupled: bool,
}

/// Largest mode-B population along a trajectory from `rho0` up to `t_end`.
pub fn mode_b_population_along(
    cfg: &SystemConfig,
    rho0: &DensityMatrix,
    t_end: f64,
    settings: &IntegratorSettings,
    bound: f64,
) -> Result<DecouplingReport> {
    let model = build_model(cfg, Frame::Interaction)?;
    let mut settings = settings.clone();
    settings.t_max = t_end;
    let trajectory = dynamics::evolve(&model, rho0, &settings)?;
    let max_population = trajectory
        .observables
        .iter()
        .map(|o| o.mode_b.unwrap_or(f64::NAN))
        .fold(0.0, f64::max);
    Ok(DecouplingReport {
        max_population,
        bound,
        decoupled: max_population <= bound,
    })
}

/// Checks that mode B stays empty when starting from `|g, g, 0⟩`, up to `t = 10`.
pub fn verify_mode_b_decoupling(cfg: &SystemConfig) -> Result<DecouplingReport> {
    let rho0 = ground_state(cfg)?;
    mode_b_population_along(cfg, &rho0, 10.0, &IntegratorSettings::default(), 1e-8)
}

/// Reduced two-atom state of a composite `[atom a, atom b, cavity]` state.
pub fn atom_state(rho: &DensityMatrix, layout: &SpaceLayout) -> Result<DensityMatrix> {
    crate::qops::partial_trace(rho, layout, &[SpaceLayout::ATOM_A, SpaceLayout::ATOM_B])
}
