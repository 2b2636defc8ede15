//! Covariant measurements as generalized Bell measurements.
//!
//! Conjugation by U is the partial trace of a doubled-space projector:
//! U nu U^dag = Tr_A[(I (x) nu^T) |U>><<U|], with the ancilla prepared in
//! the transposed fiducial state. The projectors |U>><<U| are maximally
//! entangled but generally non-orthogonal.

use crate::error::{Error, Result};
use crate::group::FiducialState;
use crate::matrix::{kron, vectorize, OperatorMatrix};

/// Traces out the second (ancilla) factor of a d^2 x d^2 matrix.
pub fn partial_trace_ancilla(big: &OperatorMatrix, d: usize) -> Result<OperatorMatrix> {
    if big.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: big.dim(),
        });
    }
    let mut out = OperatorMatrix::zeros(d);
    for n in 0..d {
        for np in 0..d {
            let mut acc = crate::matrix::C64::new(0.0, 0.0);
            for m in 0..d {
                acc += big[(n * d + m, np * d + m)];
            }
            out[(n, np)] = acc;
        }
    }
    Ok(out)
}

/// Computes Tr_A[(I (x) nu^T) |U>><<U|] by explicit partial trace and
/// checks it against the direct conjugation U nu U^dag at 1e-10; the two
/// routes share no code. Returns the partial-trace result.
pub fn bell_form(u: &OperatorMatrix, nu: &FiducialState) -> Result<OperatorMatrix> {
    let d = nu.dim();
    if u.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.dim(),
        });
    }
    let u_vec = vectorize(u);
    let projector = u_vec.outer(&u_vec);
    let weighted = &kron(&OperatorMatrix::identity(d), &nu.nu().transpose()) * &projector;
    let traced = partial_trace_ancilla(&weighted, d)?;
    let direct = &(u * nu.nu()) * &u.adjoint();
    let gap = traced.max_abs_diff(&direct);
    if gap > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "partial-trace route deviates from direct conjugation by {gap:.3e}"
        )));
    }
    Ok(traced)
}
