//! Covariant measurements from unitary representations.
//!
//! A representation acting on a fiducial state generates the measurement
//! family U_g nu U_g^dag. Group structure turns frame computations into
//! closed forms: the frame operator is diagonal on the invariant subspaces
//! of U_g (x) U_g^*, and its inverse yields a covariant dual.

pub mod bell;
pub mod subspace;
pub mod zd;

use crate::error::{Error, Result};
use crate::matrix::{vectorize, OperatorMatrix};
use crate::random::{haar_unitary, rng_from_seed};

/// Density matrix seeding a covariant measurement family.
#[derive(Debug, Clone)]
pub struct FiducialState {
    nu: OperatorMatrix,
}

impl FiducialState {
    /// Validates Hermitian, PSD and unit trace at tolerance 1e-10.
    pub fn new(nu: OperatorMatrix) -> Result<Self> {
        nu.check_density(1e-10)?;
        Ok(Self { nu })
    }

    pub fn dim(&self) -> usize {
        self.nu.dim()
    }

    pub fn nu(&self) -> &OperatorMatrix {
        &self.nu
    }

    pub fn into_inner(self) -> OperatorMatrix {
        self.nu
    }
}

/// Finite description of a representation, either as an explicit list of
/// unitaries with integration weights or through the invariant-subspace
/// projectors of U (x) U^* on the doubled space.
#[derive(Debug, Clone)]
pub enum GroupRepSpec {
    /// Unitaries U_g with weights playing the role of the invariant
    /// measure, normalized so the weights sum to the dimension.
    FiniteList {
        dim: usize,
        unitaries: Vec<OperatorMatrix>,
        weights: Vec<f64>,
    },
    /// Orthogonal projectors P_sigma on the doubled space summing to the
    /// identity, one per irreducible block.
    SubspaceDecomposition {
        dim: usize,
        projectors: Vec<OperatorMatrix>,
    },
}

impl GroupRepSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::FiniteList { dim, .. } | Self::SubspaceDecomposition { dim, .. } => *dim,
        }
    }

    /// Checks the per-kind invariants: unitarity and weight normalization
    /// for lists; projector algebra and a unique identity-bearing block
    /// for decompositions.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::FiniteList {
                dim,
                unitaries,
                weights,
            } => {
                if unitaries.is_empty() {
                    return Err(Error::MalformedDecomposition(
                        "empty unitary list".into(),
                    ));
                }
                if unitaries.len() != weights.len() {
                    return Err(Error::LengthMismatch {
                        expected: unitaries.len(),
                        got: weights.len(),
                    });
                }
                for (i, u) in unitaries.iter().enumerate() {
                    if u.dim() != *dim {
                        return Err(Error::DimensionMismatch {
                            expected: *dim,
                            got: u.dim(),
                        });
                    }
                    let defect = u.unitarity_defect();
                    if defect > 1e-10 {
                        return Err(Error::MalformedDecomposition(format!(
                            "element {i} is not unitary (defect {defect:.3e})"
                        )));
                    }
                }
                let total: f64 = weights.iter().sum();
                if (total - *dim as f64).abs() > 1e-9 {
                    return Err(Error::MalformedDecomposition(format!(
                        "weights sum to {total}, expected the dimension {dim}"
                    )));
                }
                Ok(())
            }
            Self::SubspaceDecomposition { dim, projectors } => {
                let dd = dim * dim;
                if projectors.is_empty() {
                    return Err(Error::MalformedDecomposition(
                        "empty projector list".into(),
                    ));
                }
                let mut sum = OperatorMatrix::zeros(dd);
                for (s, p) in projectors.iter().enumerate() {
                    if p.dim() != dd {
                        return Err(Error::DimensionMismatch {
                            expected: dd,
                            got: p.dim(),
                        });
                    }
                    let idem = (&(p * p) - p).max_abs();
                    if idem > 1e-10 || !p.is_hermitian(1e-10) {
                        return Err(Error::MalformedDecomposition(format!(
                            "block {s} is not an orthogonal projector (defect {idem:.3e})"
                        )));
                    }
                    sum = &sum + p;
                }
                let closure = sum.max_abs_diff(&OperatorMatrix::identity(dd));
                if closure > 1e-10 {
                    return Err(Error::MalformedDecomposition(format!(
                        "projectors resolve the identity only within {closure:.3e}"
                    )));
                }
                for s in 0..projectors.len() {
                    for t in (s + 1)..projectors.len() {
                        let cross = (&projectors[s] * &projectors[t]).max_abs();
                        if cross > 1e-10 {
                            return Err(Error::MalformedDecomposition(format!(
                                "blocks {s} and {t} overlap (|P_s P_t| = {cross:.3e})"
                            )));
                        }
                    }
                }
                self.identity_block()?;
                Ok(())
            }
        }
    }

    /// Index of the block containing |I>>; errors unless exactly one
    /// block holds it entirely.
    pub fn identity_block(&self) -> Result<usize> {
        let Self::SubspaceDecomposition { dim, projectors } = self else {
            return Err(Error::MalformedDecomposition(
                "identity block is defined for subspace decompositions".into(),
            ));
        };
        let id_vec = vectorize(&OperatorMatrix::identity(*dim));
        let norm2 = *dim as f64;
        let mut found = None;
        for (s, p) in projectors.iter().enumerate() {
            let image = crate::matrix::DoubledVector::from_vec(*dim, p.apply(id_vec.entries()))?;
            let weight = image.inner(&image).re / norm2;
            if weight > 1.0 - 1e-9 {
                if found.is_some() {
                    return Err(Error::MalformedDecomposition(
                        "identity vector contained in two blocks".into(),
                    ));
                }
                found = Some(s);
            } else if weight > 1e-9 {
                return Err(Error::MalformedDecomposition(format!(
                    "identity vector split across blocks (weight {weight:.3e} in block {s})"
                )));
            }
        }
        found.ok_or_else(|| {
            Error::MalformedDecomposition("no block contains the identity vector".into())
        })
    }
}

/// Haar-distributed unitaries, reproducible from the seed.
pub fn haar_sample(d: usize, seed: u64, count: usize) -> Result<Vec<OperatorMatrix>> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be at least one".into(),
        ));
    }
    if d == 0 {
        return Err(Error::BadShape { dim: d });
    }
    let mut rng = rng_from_seed(seed);
    Ok((0..count).map(|_| haar_unitary(d, &mut rng)).collect())
}
