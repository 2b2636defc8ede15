//! Seeded random matrix generation.
//!
//! All randomness flows through a named, cross-platform generator so tests
//! and command-line runs reproduce bit-for-bit from a `u64` seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{eig_hermitian, rebuild_with, C64, OperatorMatrix};

/// The generator behind every seeded operation in this crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a labelled sub-task of a master seed.
///
/// SplitMix64-style mixing keeps streams for different `(index, repeat)`
/// pairs decorrelated without consuming draws from the parent.
pub fn derive_seed(master: u64, index: u64, repeat: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(repeat.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn std_normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(dim: usize, rng: &mut impl Rng) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = C64::new(std_normal(rng), std_normal(rng));
        }
    }
    m
}

/// Random Hermitian matrix, Gaussian entries symmetrized.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> OperatorMatrix {
    ginibre(dim, rng).hermitize()
}

/// Random density matrix: G G^dag normalized to unit trace.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> OperatorMatrix {
    let g = ginibre(dim, rng);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    p.scale_re(1.0 / tr)
}

/// Haar-distributed unitary via QR of a Ginibre matrix.
///
/// The QR factor alone is not Haar; rescaling each column by the phase of
/// the matching diagonal entry of R removes the bias.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> OperatorMatrix {
    let g = ginibre(dim, rng).to_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = OperatorMatrix::from_nalgebra(&q);
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Random strictly positive matrix, useful as an invertible frame seed.
pub fn random_positive(dim: usize, floor: f64, rng: &mut impl Rng) -> OperatorMatrix {
    let h = random_hermitian(dim, rng);
    let (vals, vecs) = eig_hermitian(&h).expect("hermitized input");
    rebuild_with(&vals, &vecs, |x| x.abs().max(floor))
}
