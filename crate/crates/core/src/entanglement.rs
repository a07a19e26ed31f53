//! Wootters concurrence of a two-qubit state.
//!
//! The `λ_i` are the square roots of the eigenvalues of `ρ ρ̃`. They are
//! obtained here from the Hermitian matrix `√ρ ρ̃ √ρ`, which has the same
//! spectrum, so only Hermitian eigendecompositions are needed.

use crate::error::{Error, Result};
use crate::qops::{
    hermitian_eigensystem, pauli_y, tensor, DensityMatrix, Operator, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};

/// Negative eigenvalues of `√ρ ρ̃ √ρ` down to this value are treated as zero.
pub const CLIP_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Descending, nonnegative.
    pub lambdas: [f64; 4],
    /// `max |M − M†|` of `M = √ρ ρ̃ √ρ` before symmetrization.
    pub max_imaginary_residue: f64,
    /// Most negative eigenvalue of `M` that was clipped to zero (0 if none).
    pub max_negative_clipped: f64,
}

/// `σʸ ⊗ σʸ` in the `|gg⟩, |ge⟩, |eg⟩, |ee⟩` basis.
pub fn sigma_y_sigma_y() -> Operator {
    tensor(&pauli_y(), &pauli_y())
}

fn check_two_qubit(op: &Operator) -> Result<()> {
    if op.dim() != 4 {
        return Err(Error::DimensionMismatch {
            context: "two-qubit state",
            expected: 4,
            found: op.dim(),
        });
    }
    Ok(())
}

/// `ρ̃ = (σʸ ⊗ σʸ) ρ* (σʸ ⊗ σʸ)`.
pub fn spin_flip(rho: &DensityMatrix) -> Result<Operator> {
    spin_flip_operator(rho.as_operator())
}

pub fn spin_flip_operator(op: &Operator) -> Result<Operator> {
    check_two_qubit(op)?;
    let yy = sigma_y_sigma_y();
    Ok(&(&yy * &op.conj()) * &yy)
}

pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    let op = rho.as_operator();
    check_two_qubit(op)?;
    let herm = op.hermiticity_residual();
    if herm > HERMITICITY_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "not Hermitian (residual {herm:e})"
        )));
    }
    let trace_residual = rho.trace_residual();
    if trace_residual > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace differs from one by {trace_residual:e}"
        )));
    }

    let eig = hermitian_eigensystem(op)?;
    if eig.values[0] < -POSITIVITY_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {:e}",
            eig.values[0]
        )));
    }
    let sqrt_rho = eig.reconstruct_with(|x| x.max(0.0).sqrt());
    let m = &(&sqrt_rho * &spin_flip_operator(op)?) * &sqrt_rho;
    let max_imaginary_residue = m.hermiticity_residual();
    let spectrum = hermitian_eigensystem(&m.hermitian_part())?.values;

    let mut max_negative_clipped: f64 = 0.0;
    let mut lambdas = [0.0; 4];
    for (slot, &mu) in lambdas.iter_mut().zip(spectrum.iter().rev()) {
        if mu < 0.0 {
            if mu < -CLIP_TOLERANCE {
                return Err(Error::InvalidDensityMatrix(format!(
                    "spin-flip product has eigenvalue {mu:e}"
                )));
            }
            max_negative_clipped = max_negative_clipped.min(mu);
        }
        *slot = mu.max(0.0).sqrt();
    }
    Ok(ConcurrenceResult {
        value: value_from_lambdas(&lambdas),
        lambdas,
        max_imaginary_residue,
        max_negative_clipped,
    })
}

/// `max(0, λ₁ − λ₂ − λ₃ − λ₄)` clamped to `[0, 1]`.
pub fn value_from_lambdas(lambdas: &[f64; 4]) -> f64 {
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::{basis_ket, Ket, C64};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bell_phi_plus() -> Ket {
        (basis_ket(4, 0) + basis_ket(4, 3)) * C64::new(0.5f64.sqrt(), 0.0)
    }

    fn werner(p: f64) -> DensityMatrix {
        let bell = Operator::projector(&bell_phi_plus()).scale_re(p);
        let noise = Operator::identity(4).scale_re((1.0 - p) / 4.0);
        DensityMatrix::new(&bell + &noise).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, rank: usize) -> DensityMatrix {
        let mut acc = Operator::zeros(4);
        for _ in 0..rank {
            let ket = Ket::from_fn(4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            acc = &acc + &Operator::projector(&ket);
        }
        let tr = acc.trace().re;
        DensityMatrix::new(acc.scale_re(1.0 / tr)).unwrap()
    }

    fn random_unitary(rng: &mut ChaCha8Rng) -> Operator {
        let a = Operator::from_fn(2, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let qr = a.matrix().clone().qr();
        Operator::new(qr.q()).unwrap()
    }

    #[test]
    fn spin_flip_examples() {
        let bell = DensityMatrix::pure(&bell_phi_plus()).unwrap();
        assert!(spin_flip(&bell).unwrap().approx_eq(bell.as_operator(), 1e-15));

        let gg = DensityMatrix::basis(4, 0).unwrap();
        let ee = DensityMatrix::basis(4, 3).unwrap();
        assert!(spin_flip(&gg).unwrap().approx_eq(ee.as_operator(), 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let rho = random_state(&mut rng, 3);
            let twice = spin_flip_operator(&spin_flip(&rho).unwrap()).unwrap();
            assert!(twice.approx_eq(rho.as_operator(), 1e-15));
        }
        assert!(spin_flip(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn concurrence_of_basic_states() {
        let bell = DensityMatrix::pure(&bell_phi_plus()).unwrap();
        assert!((concurrence(&bell).unwrap().value - 1.0).abs() < 1e-12);
        let gg = DensityMatrix::basis(4, 0).unwrap();
        let c = concurrence(&gg).unwrap();
        assert_eq!(c.value, 0.0);
        assert_eq!(c.lambdas, [0.0; 4]);
    }

    #[test]
    fn werner_states() {
        // ρρ̃ of a Werner state has eigenvalues ((1+3p)/4)² and ((1−p)/4)² (×3).
        for p in [0.0, 1.0 / 3.0, 0.6, 1.0, 0.85] {
            let c = concurrence(&werner(p)).unwrap();
            let want = f64::max(0.0, (3.0 * p - 1.0) / 2.0);
            assert!((c.value - want).abs() < 1e-10, "p = {p}: {} vs {want}", c.value);
            assert!((c.lambdas[0] - (1.0 + 3.0 * p) / 4.0).abs() < 1e-10);
            for l in &c.lambdas[1..] {
                assert!((l - (1.0 - p) / 4.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn lambdas_are_sorted_and_value_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for rank in 1..=4 {
            for _ in 0..20 {
                let c = concurrence(&random_state(&mut rng, rank)).unwrap();
                assert!(c.lambdas.windows(2).all(|w| w[0] >= w[1]));
                assert!(c.lambdas.iter().all(|&l| l >= 0.0));
                assert_eq!(c.value, value_from_lambdas(&c.lambdas));
                assert!((0.0..=1.0).contains(&c.value));
            }
        }
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let rho = random_state(&mut rng, 2);
            let u = tensor(&random_unitary(&mut rng), &random_unitary(&mut rng));
            let rotated = DensityMatrix::new(&(&u * rho.as_operator()) * &u.dagger()).unwrap();
            let a = concurrence(&rho).unwrap().value;
            let b = concurrence(&rotated).unwrap().value;
            assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn convexity() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let r1 = random_state(&mut rng, 1);
            let r2 = random_state(&mut rng, 2);
            let p: f64 = rng.gen_range(0.0..1.0);
            let mix = DensityMatrix::new(&r1.as_operator().scale_re(p) + &r2.as_operator().scale_re(1.0 - p)).unwrap();
            let lhs = concurrence(&mix).unwrap().value;
            let rhs = p * concurrence(&r1).unwrap().value + (1.0 - p) * concurrence(&r2).unwrap().value;
            assert!(lhs <= rhs + 1e-8);
        }
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(concurrence(&DensityMatrix::maximally_mixed(3)).is_err());
        let unnormalized = DensityMatrix::new_unchecked(Operator::identity(4));
        assert!(concurrence(&unnormalized).is_err());
        let non_hermitian = DensityMatrix::new_unchecked(Operator::from_fn(4, |r, c| {
            if r == c {
                C64::new(0.25, 0.0)
            } else if r == 0 && c == 1 {
                C64::new(0.1, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }));
        assert!(concurrence(&non_hermitian).is_err());
        let negative = DensityMatrix::new_unchecked(Operator::from_fn(4, |r, c| {
            let d = [0.6, 0.5, 0.1, -0.2];
            if r == c {
                C64::new(d[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }));
        assert!(concurrence(&negative).is_err());
    }
}
