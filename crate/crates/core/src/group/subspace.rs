//! Frame computations on invariant-subspace decompositions.
//!
//! When U_g (x) U_g^* splits the doubled space into inequivalent
//! irreducible blocks P_sigma, the frame operator of the covariant family
//! is diagonal on the blocks: F = d sum_sigma (<<nu|P_sigma|nu>> /
//! Tr[P_sigma]) P_sigma. Inversion is then termwise and the canonical dual
//! stays covariant, generated by a single seed xi.

use crate::error::{Error, Result};
use crate::frame::FrameOperator;
use crate::group::{FiducialState, GroupRepSpec};
use crate::matrix::{
    devectorize, eig_hermitian, vectorize, C64, DoubledVector, OperatorMatrix,
};

/// Threshold on <<nu|P_sigma|nu>> below which the block is unreachable
/// and the frame operator is singular.
pub const CONDITION_TOL: f64 = 1e-8;

fn require_decomposition(rep: &GroupRepSpec) -> Result<(usize, &[OperatorMatrix])> {
    match rep {
        GroupRepSpec::SubspaceDecomposition { dim, projectors } => Ok((*dim, projectors)),
        GroupRepSpec::FiniteList { .. } => Err(Error::MalformedDecomposition(
            "operation requires a subspace decomposition".into(),
        )),
    }
}

/// Per-block weights <<nu|P_sigma|nu>> = ||P_sigma |nu>>||^2 and ranks.
fn block_data(
    dim: usize,
    projectors: &[OperatorMatrix],
    nu: &FiducialState,
) -> Result<Vec<(f64, f64)>> {
    if nu.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: nu.dim(),
        });
    }
    let nu_vec = vectorize(nu.nu());
    let mut out = Vec::with_capacity(projectors.len());
    for p in projectors {
        let image = DoubledVector::from_vec(dim, p.apply(nu_vec.entries()))?;
        let overlap = image.inner(&image).re;
        let rank = p.trace().re;
        if rank < 0.5 {
            return Err(Error::MalformedDecomposition(
                "projector with vanishing rank".into(),
            ));
        }
        out.push((overlap, rank));
    }
    Ok(out)
}

/// F = d sum_sigma (<<nu|P_sigma|nu>> / Tr[P_sigma]) P_sigma.
///
/// Normalization matches the unit-total-measure convention where the
/// weights of a finite list sum to the dimension; the unit-weight
/// covariant measurement with elements (1/d) U nu U^dag has frame
/// operator F / d.
pub fn frame_operator_from_subspaces(
    rep: &GroupRepSpec,
    nu: &FiducialState,
) -> Result<FrameOperator> {
    let (dim, projectors) = require_decomposition(rep)?;
    rep.validate()?;
    let data = block_data(dim, projectors, nu)?;
    let mut acc = OperatorMatrix::zeros(dim * dim);
    for (p, (overlap, rank)) in projectors.iter().zip(&data) {
        acc = &acc + &p.scale_re(dim as f64 * overlap / rank);
    }
    FrameOperator::from_parts(dim, acc)
}

/// Termwise inverse F^-1 = d^-1 sum_sigma (Tr[P_sigma] / <<nu|P_sigma|nu>>)
/// P_sigma together with the covariant dual seed xi = devec(F^-1 |nu>>).
///
/// Every block must satisfy <<nu|P_sigma|nu>> >= tol; the first failing
/// block index is reported otherwise.
pub fn inverse_and_dual_seed(
    rep: &GroupRepSpec,
    nu: &FiducialState,
    tol: f64,
) -> Result<(FrameOperator, OperatorMatrix)> {
    let (dim, projectors) = require_decomposition(rep)?;
    rep.validate()?;
    let data = block_data(dim, projectors, nu)?;
    for (sigma, (overlap, _)) in data.iter().enumerate() {
        if *overlap < tol {
            return Err(Error::CompletenessCondition {
                context: format!("<<nu|P_{sigma}|nu>>"),
                magnitude: *overlap,
                tol,
            });
        }
    }
    let mut acc = OperatorMatrix::zeros(dim * dim);
    for (p, (overlap, rank)) in projectors.iter().zip(&data) {
        acc = &acc + &p.scale_re(rank / (dim as f64 * overlap));
    }
    let f_inv = FrameOperator::from_parts(dim, acc)?;
    let xi_vec = f_inv.apply(&vectorize(nu.nu()))?;
    let xi = devectorize(&xi_vec).hermitize();
    Ok((f_inv, xi))
}

/// The two invariant blocks of SU(d): the span of |I>>/sqrt(d) and its
/// orthogonal complement.
pub fn sud_rep(d: usize) -> Result<GroupRepSpec> {
    if d < 2 {
        return Err(Error::BadShape { dim: d });
    }
    let id_vec = vectorize(&OperatorMatrix::identity(d));
    let p0 = id_vec.outer(&id_vec).scale_re(1.0 / d as f64);
    let p1 = &OperatorMatrix::identity(d * d) - &p0;
    Ok(GroupRepSpec::SubspaceDecomposition {
        dim: d,
        projectors: vec![p0, p1],
    })
}

/// Closed-form covariant dual seed for SU(d):
/// xi = ((d^2-1) nu - (d - Tr[nu^2]) I) / (d Tr[nu^2] - 1).
///
/// Singular exactly at the maximally mixed state, where d Tr[nu^2] - 1
/// vanishes and the covariant family stops being a frame.
pub fn sud_dual_seed(d: usize, nu: &FiducialState, tol: f64) -> Result<OperatorMatrix> {
    if nu.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: nu.dim(),
        });
    }
    let purity = (nu.nu() * nu.nu()).trace().re;
    let denom = d as f64 * purity - 1.0;
    if denom.abs() < tol {
        return Err(Error::Singular {
            min_eig: denom.abs(),
            threshold: tol,
        });
    }
    let df = d as f64;
    let scaled_nu = nu.nu().scale_re((df * df - 1.0) / denom);
    let shift = OperatorMatrix::identity(d).scale_re((df - purity) / denom);
    Ok(&scaled_nu - &shift)
}

/// Relative spectral test of the subspace frame operator: the covariant
/// family is informationally complete iff the smallest block coefficient
/// clears rank_tol times the largest.
pub fn is_info_complete(rep: &GroupRepSpec, nu: &FiducialState, rank_tol: f64) -> Result<bool> {
    let f = frame_operator_from_subspaces(rep, nu)?;
    let (a, b) = f.bounds()?;
    Ok(b > 0.0 && a > rank_tol * b)
}

/// Builds a fiducial density matrix from the block eigenbases:
/// nu = I/d + alpha sum_mu H_mu with Hermitian H_mu drawn from the
/// non-identity blocks.
///
/// Each H_mu is e^{i theta} Psi + h.c. for one eigenvector Psi of the
/// block, theta in {0, pi/2}; a block whose chosen combination vanishes
/// (anti-Hermitian eigenvector) falls back to the other phase, then to
/// the next eigenvector. Adjoints may land in a partner block, which is
/// then already reachable and receives no term of its own. `alpha` seeds
/// a halving search that stops when nu is PSD with margin 1e-8 and every
/// block weight clears 1e-8.
pub fn build_fiducial(rep: &GroupRepSpec, alpha: f64) -> Result<FiducialState> {
    let (dim, projectors) = require_decomposition(rep)?;
    rep.validate()?;
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "search seed alpha must be positive, got {alpha}"
        )));
    }
    let id_block = rep.identity_block()?;
    let dd = dim * dim;

    // orthonormal eigenbasis of each block: eigenvectors of P with
    // eigenvalue 1, read off the decomposition sorted ascending
    let mut bases: Vec<Vec<OperatorMatrix>> = Vec::with_capacity(projectors.len());
    for p in projectors {
        let (vals, vecs) = eig_hermitian(p)?;
        let mut basis = Vec::new();
        for j in 0..dd {
            if vals[j] > 0.5 {
                let col: Vec<C64> = (0..dd).map(|i| vecs[(i, j)]).collect();
                basis.push(devectorize(&DoubledVector::from_vec(dim, col)?));
            }
        }
        if basis.is_empty() {
            return Err(Error::MalformedDecomposition(
                "projector with empty eigenbasis".into(),
            ));
        }
        bases.push(basis);
    }

    let block_weight = |sigma: usize, candidate: &OperatorMatrix| -> Result<f64> {
        let v = vectorize(candidate);
        let image = DoubledVector::from_vec(dim, projectors[sigma].apply(v.entries()))?;
        Ok(image.inner(&image).re)
    };

    // greedy pass: give each non-identity block a Hermitian term unless a
    // previous term (through its adjoint) already reaches it
    let mut terms: Vec<OperatorMatrix> = Vec::new();
    let mut sum_h = OperatorMatrix::zeros(dim);
    for (sigma, basis) in bases.iter().enumerate() {
        if sigma == id_block {
            continue;
        }
        if block_weight(sigma, &sum_h)? > 1e-6 {
            continue;
        }
        let mut chosen = None;
        'outer: for psi in basis {
            for theta in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let h = &psi.scale(theta) + &psi.scale(theta).adjoint();
                if h.fro_norm() < 1e-9 {
                    continue;
                }
                // the candidate must reach this block without cancelling
                // what earlier terms put elsewhere
                let trial = &sum_h + &h;
                if block_weight(sigma, &trial)? > 1e-6 {
                    chosen = Some(h);
                    break 'outer;
                }
            }
        }
        let h = chosen.ok_or_else(|| {
            Error::FiducialSearch(format!(
                "block {sigma} admits no Hermitian combination reaching it"
            ))
        })?;
        sum_h = &sum_h + &h;
        terms.push(h);
    }

    // halving search on alpha: positivity competes with the block weights
    let mut a = alpha;
    let mut best: Option<(f64, f64, f64)> = None;
    for _ in 0..24 {
        let nu_mat = &OperatorMatrix::identity(dim).scale_re(1.0 / dim as f64)
            + &sum_h.scale_re(a);
        let (vals, _) = eig_hermitian(&nu_mat)?;
        let min_eig = vals[0];
        let v = vectorize(&nu_mat);
        let mut min_weight = f64::INFINITY;
        for p in projectors {
            let image = DoubledVector::from_vec(dim, p.apply(v.entries()))?;
            min_weight = min_weight.min(image.inner(&image).re);
        }
        if min_eig >= 1e-8 && min_weight >= 1e-8 {
            return FiducialState::new(nu_mat);
        }
        let track = (a, min_eig, min_weight);
        if best.is_none_or(|(_, e, w)| min_eig.min(min_weight) > e.min(w)) {
            best = Some(track);
        }
        a *= 0.5;
    }
    let (ba, be, bw) = best.unwrap_or((alpha, f64::NAN, f64::NAN));
    Err(Error::FiducialSearch(format!(
        "no alpha in the halving grid works; best alpha {ba:.3e} gave min eigenvalue {be:.3e}, min block weight {bw:.3e}"
    )))
}
