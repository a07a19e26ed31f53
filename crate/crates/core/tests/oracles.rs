mod common;

use atomcav::dynamics::{lindblad_rhs, vectorize_superoperator};
use atomcav::entanglement::concurrence;
use atomcav::model::{build_model, Frame, SystemConfig};
use common::{charpoly_concurrence, charpoly_lambdas, random_density, random_hermitian_unit_trace, werner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn concurrence_matches_characteristic_polynomial_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let rho = random_density(&mut rng, 4, 4);
        let fast = concurrence(&rho).unwrap();
        let slow = charpoly_lambdas(&rho);
        for (a, b) in fast.lambdas.iter().zip(&slow) {
            assert!((a - b).abs() <= 1e-8, "{:?} vs {:?}", fast.lambdas, slow);
        }
    }
}

#[test]
fn entangled_states_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut entangled = 0;
    for _ in 0..40 {
        // Full rank keeps the polynomial roots simple; the dominant pure
        // component makes most of these entangled.
        let pure = random_density(&mut rng, 4, 1);
        let noise = random_density(&mut rng, 4, 4);
        let rho =
            atomcav::qops::DensityMatrix::new(&pure.as_operator().scale_re(0.85) + &noise.as_operator().scale_re(0.15))
                .unwrap();
        let c = concurrence(&rho).unwrap().value;
        assert!((c - charpoly_concurrence(&rho)).abs() <= 1e-7);
        if c > 0.05 {
            entangled += 1;
        }
    }
    assert!(entangled > 5);
}

#[test]
fn werner_family() {
    for p in [0.0, 1.0 / 3.0, 0.6, 1.0] {
        let c = concurrence(&werner(p)).unwrap().value;
        let want = f64::max(0.0, (3.0 * p - 1.0) / 2.0);
        assert!((c - want).abs() <= 1e-10);
        assert!((charpoly_concurrence(&werner(p)) - want).abs() <= 1e-7);
    }
}

#[test]
fn rhs_matches_superoperator() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = SystemConfig {
        n_thermal: 0.7,
        ..SystemConfig::default()
    };
    for frame in [Frame::Interaction, Frame::Lab] {
        let model = build_model(&cfg, frame).unwrap();
        let sup = vectorize_superoperator(&model);
        for _ in 0..20 {
            let rho = random_hermitian_unit_trace(&mut rng, model.dim());
            let direct = lindblad_rhs(&model, &rho).unwrap();
            let via_sup = atomcav::qops::Operator::unvec(&(sup.matrix() * rho.vec())).unwrap();
            assert!(direct.max_abs_diff(&via_sup) <= 1e-12);
        }
    }
}

#[test]
fn liouvillian_spectrum_is_dissipative() {
    let cfg = SystemConfig {
        n_thermal: 0.8,
        cutoff: 2,
        ..SystemConfig::default()
    };
    let model = build_model(&cfg, Frame::Interaction).unwrap();
    let sup = vectorize_superoperator(&model);
    let eigenvalues = sup.matrix().clone().schur().eigenvalues().unwrap();
    let max_re = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    assert!(max_re <= 1e-10, "max Re λ = {max_re}");
    // One conserved trace means exactly one zero eigenvalue for a unique steady state.
    let zeros = eigenvalues.iter().filter(|z| z.norm() < 1e-9).count();
    assert_eq!(zeros, 1);
}
