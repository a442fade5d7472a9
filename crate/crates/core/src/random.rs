//! Seeded generators for Haar-random unitaries, projectors and states.
//!
//! Random projectors are a Haar-random unitary (ChaCha-seeded) applied to
//! diag(1..1, 0..0), with the rank drawn uniformly from 1..dim. External
//! implementations can replicate the suites from this description.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hermitian::{DensityMatrix, HermitianOperator, Projector, Tolerances, validate_projector};
use crate::matrix::ComplexMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal(rng: &mut SeededRng) -> f64 {
    // Box-Muller; avoids log(0).
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn complex_gaussian(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix, with the
/// R-diagonal phase correction.
pub fn haar_unitary(dim: usize, rng: &mut SeededRng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random projector of the given rank in the given dimension.
pub fn random_projector_with_rank(dim: usize, rank: usize, rng: &mut SeededRng) -> Projector {
    assert!(rank <= dim);
    let u = haar_unitary(dim, rng);
    let d = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j && i < rank {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    });
    let m = &u * d * u.adjoint();
    validate_projector(ComplexMatrix::new(m).unwrap(), &Tolerances::default())
        .expect("rotated diagonal projector is a projector")
}

/// Random projector with rank drawn uniformly from 1..dim (both projector
/// and complement nontrivial).
pub fn random_projector(dim: usize, rng: &mut SeededRng) -> Projector {
    let rank = if dim <= 1 { 1 } else { rng.gen_range(1..dim) };
    random_projector_with_rank(dim, rank, rng)
}

/// Random full-rank density matrix: normalized G G^dagger for Ginibre G.
pub fn random_density(dim: usize, rng: &mut SeededRng) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    let rho = m / Complex64::new(trace, 0.0);
    DensityMatrix::new(ComplexMatrix::new(rho).unwrap(), &Tolerances::default())
        .expect("normalized Gram matrix is a state")
}

/// Random pure state vector.
pub fn random_state_vector(dim: usize, rng: &mut SeededRng) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Density matrix diagonal in the eigenbasis of `h`, with Dirichlet-like
/// weights (normalized exponentials) from the supplied generator. Commutes
/// with `h` by construction.
pub fn random_commuting_density(h: &HermitianOperator, rng: &mut SeededRng) -> DensityMatrix {
    let spec = crate::hermitian::eigh(h).expect("eigh of validated operator");
    let n = h.dim();
    let mut w: Vec<f64> = (0..n).map(|_| -f64::ln(rng.gen_range(f64::MIN_POSITIVE..1.0))).collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let v = spec.eigenvectors.column(k);
        m += &v * v.adjoint() * Complex64::new(w[k], 0.0);
    }
    DensityMatrix::new(ComplexMatrix::new(m).unwrap(), &Tolerances::default())
        .expect("convex mix of eigenprojectors is a state")
}
