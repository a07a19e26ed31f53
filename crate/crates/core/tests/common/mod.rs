#![allow(dead_code)]

use atomcav::qops::{DensityMatrix, Ket, Operator, C64};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_ket(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    Ket::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Normalized sum of `rank` random projectors.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> DensityMatrix {
    let mut acc = Operator::zeros(dim);
    for _ in 0..rank {
        acc = &acc + &Operator::projector(&random_ket(rng, dim));
    }
    let tr = acc.trace().re;
    DensityMatrix::new(acc.scale_re(1.0 / tr)).unwrap()
}

/// Hermitian, unit trace, not necessarily positive.
pub fn random_hermitian_unit_trace(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let a = Operator::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&a + &a.dagger()).scale_re(0.5);
    let tr = h.trace().re;
    h.scale_re(1.0 / tr)
}

pub fn werner(p: f64) -> DensityMatrix {
    let s = 0.5f64.sqrt();
    let bell = Ket::from_vec(vec![
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
    ]);
    let mixed = &Operator::projector(&bell).scale_re(p) + &Operator::identity(4).scale_re((1.0 - p) / 4.0);
    DensityMatrix::new(mixed).unwrap()
}

/// Spin flip written out entrywise: `ρ̃_{ij} = s_i s_j ρ*_{3−i, 3−j}` with
/// signs `s = (1, −1, −1, 1)`.
fn spin_flip_entrywise(rho: &DMatrix<C64>) -> DMatrix<C64> {
    let s = [1.0, -1.0, -1.0, 1.0];
    DMatrix::from_fn(4, 4, |i, j| rho[(3 - i, 3 - j)].conj() * (s[i] * s[j]))
}

/// Coefficients `c_0..c_n` of `det(xI − M) = Σ c_k x^{n−k}` by Faddeev–LeVerrier.
fn characteristic_polynomial(m: &DMatrix<C64>) -> Vec<C64> {
    let n = m.nrows();
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for k in 1..=n {
        acc = m * &acc + DMatrix::identity(n, n) * coeffs[k - 1];
        let next = -(m * &acc).trace() / k as f64;
        coeffs.push(next);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let eval = |x: C64| coeffs.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * 0.5).collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-16 {
            break;
        }
    }
    // Polish each root with Newton steps on the polynomial.
    let deriv: Vec<C64> = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (n - k) as f64)
        .collect();
    let eval_d = |x: C64| deriv.iter().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c);
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let d = eval_d(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    roots
}

/// `λ_i`: square roots of the eigenvalues of `ρ ρ̃`, descending, found from
/// the characteristic polynomial of the non-Hermitian product.
pub fn charpoly_lambdas(rho: &DensityMatrix) -> [f64; 4] {
    let m = rho.as_operator().matrix();
    let product = m * spin_flip_entrywise(m);
    let roots = polynomial_roots(&characteristic_polynomial(&product));
    let mut lambdas: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [lambdas[0], lambdas[1], lambdas[2], lambdas[3]]
}

pub fn charpoly_concurrence(rho: &DensityMatrix) -> f64 {
    let l = charpoly_lambdas(rho);
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}
