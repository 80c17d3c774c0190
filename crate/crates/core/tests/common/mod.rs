#![allow(dead_code)]

use nalgebra::{Matrix4, SMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ggd_core::gaussian::{local, omega, rotation, squeezer};
use ggd_core::TwoModeCovariance;

/// Smallest eigenvalue of the Hermitian matrix `Σ + iΩ`, via its real
/// 8x8 embedding `[[Σ, -Ω], [Ω, Σ]]`.
pub fn min_eig_sigma_plus_i_omega(sigma: &Matrix4<f64>) -> f64 {
    let w = local(&omega(), &omega());
    let mut h = SMatrix::<f64, 8, 8>::zeros();
    h.fixed_view_mut::<4, 4>(0, 0).copy_from(sigma);
    h.fixed_view_mut::<4, 4>(4, 4).copy_from(sigma);
    h.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-w));
    h.fixed_view_mut::<4, 4>(4, 0).copy_from(&w);
    SymmetricEigen::new(h).eigenvalues.min()
}

/// Brute-force physicality: every eigenvalue of `Σ + iΩ` at least `-tol`
/// relative to the matrix scale.
pub fn oracle_physical(sigma: &Matrix4<f64>, tol: f64) -> bool {
    min_eig_sigma_plus_i_omega(sigma) >= -tol * sigma.abs().max().max(1.0)
}

fn random_local(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut one = || {
        rotation(rng.gen_range(0.0..6.3))
            * squeezer(rng.gen_range(-1.5..1.5))
            * rotation(rng.gen_range(0.0..6.3))
    };
    let s_a = one();
    let s_b = one();
    local(&s_a, &s_b)
}

/// A random symmetric 4x4 matrix. Half the draws are local symplectic
/// images of standard forms straddling the physical boundary, the other
/// half are shifted Wishart-like matrices, often not positive definite.
pub fn random_symmetric(rng: &mut ChaCha8Rng) -> TwoModeCovariance {
    if rng.gen_bool(0.5) {
        let a: f64 = rng.gen_range(0.5..20.0);
        let b: f64 = rng.gen_range(0.5..20.0);
        let c = rng.gen_range(0.0..(a * b).sqrt() + 1.0);
        let d = rng.gen_range(-c..=c);
        TwoModeCovariance::from_standard_entries(a, b, c, d).transformed(&random_local(rng))
    } else {
        let g = Matrix4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let shift = rng.gen_range(-0.5..2.5);
        let m = g * g.transpose() + Matrix4::identity() * shift;
        TwoModeCovariance::new((m + m.transpose()) * 0.5).expect("symmetric by construction")
    }
}
