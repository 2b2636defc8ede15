//! The projective representation of Z_d x Z_d by clock-and-shift unitaries.
//!
//! U_{m,n} = sum_k w^{km} |k><k+n| with w = e^{2 pi i/d}, indices mod d.
//! The d^2 unitaries are Hilbert-Schmidt orthogonal, so the covariant
//! measurement they generate is minimal and admits a closed-form dual.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::frame::{OperatorFrame, Povm};
use crate::group::{FiducialState, GroupRepSpec};
use crate::matrix::{hs_inner, vectorize, C64, OperatorMatrix};

/// Guard on |Tr[U_{p,q}^dag nu]| below which the dual's division blows up.
pub const CONDITION_TOL: f64 = 1e-8;

fn phase(d: usize, num: i64) -> C64 {
    let t = 2.0 * std::f64::consts::PI * (num.rem_euclid(d as i64) as f64) / d as f64;
    Complex::from_polar(1.0, t)
}

/// The unitary U_{m,n}; entry w^{km} at row k, column k+n mod d.
pub fn unitary(d: usize, m: usize, n: usize) -> Result<OperatorMatrix> {
    if d < 2 || m >= d || n >= d {
        return Err(Error::IndexOutOfRange {
            m: m as i64,
            n: n as i64,
            dim: d,
        });
    }
    let mut u = OperatorMatrix::zeros(d);
    for k in 0..d {
        u[(k, (k + n) % d)] = phase(d, (k * m) as i64);
    }
    Ok(u)
}

/// Index pairs (m, n) in the fixed row-major order m*d + n.
pub fn index_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            out.push((m, n));
        }
    }
    out
}

/// All d^2 unitaries in index order.
pub fn unitaries(d: usize) -> Result<Vec<OperatorMatrix>> {
    index_pairs(d)
        .into_iter()
        .map(|(m, n)| unitary(d, m, n))
        .collect()
}

/// Group average (1/d) sum_{m,n} U O U^dag; equals Tr[O] I.
pub fn twirl(d: usize, o: &OperatorMatrix) -> Result<OperatorMatrix> {
    if o.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: o.dim(),
        });
    }
    let mut acc = OperatorMatrix::zeros(d);
    for u in unitaries(d)? {
        acc = &acc + &(&(&u * o) * &u.adjoint());
    }
    Ok(acc.scale_re(1.0 / d as f64))
}

/// Covariant measurement with elements (1/d) U_{m,n} nu U_{m,n}^dag and
/// unit weights, in index order.
pub fn covariant_povm(d: usize, nu: &FiducialState) -> Result<Povm> {
    if nu.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: nu.dim(),
        });
    }
    let scale = 1.0 / d as f64;
    let elements: Vec<OperatorMatrix> = unitaries(d)?
        .iter()
        .map(|u| (&(u * nu.nu()) * &u.adjoint()).scale_re(scale).hermitize())
        .collect();
    let frame = OperatorFrame::unit_weights(elements)?;
    Povm::new(frame, crate::matrix::DEFAULT_PSD_TOL)
}

/// One row of the completeness diagnostic: |Tr[U_{m,n}^dag nu]|.
#[derive(Debug, Clone, Copy)]
pub struct ConditionEntry {
    pub m: usize,
    pub n: usize,
    pub magnitude: f64,
}

/// Full table of trace magnitudes against a pass threshold.
#[derive(Debug, Clone)]
pub struct ConditionTable {
    pub tol: f64,
    pub entries: Vec<ConditionEntry>,
}

impl ConditionTable {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.magnitude > self.tol)
    }

    pub fn failing(&self) -> impl Iterator<Item = &ConditionEntry> {
        self.entries.iter().filter(|e| e.magnitude <= self.tol)
    }

    pub fn worst(&self) -> &ConditionEntry {
        self.entries
            .iter()
            .min_by(|a, b| a.magnitude.total_cmp(&b.magnitude))
            .expect("table is never empty")
    }

    /// Errors with the first failing index pair, for gate-keeping callers.
    pub fn require_pass(&self) -> Result<()> {
        if let Some(e) = self.failing().next() {
            return Err(Error::CompletenessCondition {
                context: format!("Tr[U({},{})^dag nu]", e.m, e.n),
                magnitude: e.magnitude,
                tol: self.tol,
            });
        }
        Ok(())
    }
}

/// Evaluates |Tr[U_{m,n}^dag nu]| for every index pair. The measurement
/// generated by nu is informationally complete iff every entry clears the
/// threshold.
pub fn completeness_table(d: usize, nu: &FiducialState, tol: f64) -> Result<ConditionTable> {
    if nu.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: nu.dim(),
        });
    }
    let mut entries = Vec::with_capacity(d * d);
    for (m, n) in index_pairs(d) {
        let u = unitary(d, m, n)?;
        let t = hs_inner(&u, nu.nu())?;
        entries.push(ConditionEntry {
            m,
            n,
            magnitude: t.norm(),
        });
    }
    Ok(ConditionTable { tol, entries })
}

/// Geometric pure fiducial: |psi> proportional to sum_n alpha^n |n>.
///
/// Requires 0 < |alpha| < 1. For odd d every such alpha generates a
/// complete measurement; for even d the trace at (p, q) = (d/2 mod d,
/// d/2) cancels exactly whenever alpha^d is real, so a real alpha never
/// works at even d and callers should put a phase on alpha (any argument
/// that keeps alpha^d off the real axis).
pub fn fiducial(d: usize, alpha: C64) -> Result<FiducialState> {
    if d < 2 {
        return Err(Error::BadShape { dim: d });
    }
    let r = alpha.norm();
    if !(r > 0.0 && r < 1.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fiducial parameter must satisfy 0 < |alpha| < 1, got |alpha| = {r}"
        )));
    }
    let norm = ((1.0 - r * r) / (1.0 - r.powi(2 * d as i32))).sqrt();
    let mut psi = Vec::with_capacity(d);
    let mut pow = C64::new(1.0, 0.0);
    for _ in 0..d {
        psi.push(pow * norm);
        pow *= alpha;
    }
    FiducialState::new(OperatorMatrix::outer_product(&psi))
}

/// Closed-form dual of the covariant measurement:
/// Theta_{m,n} = (1/d) sum_{p,q} e^{2 pi i (np - mq)/d} U_{p,q} / Tr[U_{p,q} nu].
///
/// The division requires every trace magnitude to clear `tol`; the failing
/// index pair is reported otherwise. The result is biorthogonal to the
/// measurement, hence equal to its unique (canonical) dual.
pub fn dual_closed_form(d: usize, nu: &FiducialState, tol: f64) -> Result<OperatorFrame> {
    completeness_table(d, nu, tol)?.require_pass()?;
    let us = unitaries(d)?;
    let pairs = index_pairs(d);
    // Tr[U_{p,q} nu] = <<U_{p,q}^dag | nu>>
    let traces: Vec<C64> = us
        .iter()
        .map(|u| hs_inner(&u.adjoint(), nu.nu()))
        .collect::<Result<_>>()?;
    let scale = C64::new(1.0 / d as f64, 0.0);
    let mut duals = Vec::with_capacity(d * d);
    for &(m, n) in &pairs {
        let mut acc = OperatorMatrix::zeros(d);
        for (idx, &(p, q)) in pairs.iter().enumerate() {
            let num = (n * p) as i64 - (m * q) as i64;
            let coeff = phase(d, num) / traces[idx];
            acc = &acc + &us[idx].scale(coeff);
        }
        duals.push(acc.scale(scale).hermitize());
    }
    OperatorFrame::unit_weights(duals)
}

/// The representation as an explicit list: weights 1/d make the total
/// weight equal the dimension, matching the invariant-measure convention.
pub fn finite_list_rep(d: usize) -> Result<GroupRepSpec> {
    Ok(GroupRepSpec::FiniteList {
        dim: d,
        unitaries: unitaries(d)?,
        weights: vec![1.0 / d as f64; d * d],
    })
}

/// Invariant subspaces of U (x) U^*: the d^2 one-dimensional spans of the
/// vectorized unitaries, projectors |U_{m,n}>><<U_{m,n}| / d.
pub fn subspace_rep(d: usize) -> Result<GroupRepSpec> {
    let mut projectors = Vec::with_capacity(d * d);
    for u in unitaries(d)? {
        let v = vectorize(&u);
        projectors.push(v.outer(&v).scale_re(1.0 / d as f64));
    }
    Ok(GroupRepSpec::SubspaceDecomposition { dim: d, projectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{
        biorthogonality_defect, canonical_dual, frame_operator, is_info_complete, reconstruct,
    };
    use crate::matrix::DEFAULT_RANK_TOL;
    use crate::random::{random_hermitian, rng_from_seed};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn small_cases_match_hand_values() {
        let i2 = unitary(2, 0, 0).unwrap();
        assert!(i2.max_abs_diff(&OperatorMatrix::identity(2)) == 0.0);
        // (m, n) = (1, 0) is the diagonal phase matrix diag(1, -1)
        let z = unitary(2, 1, 0).unwrap();
        assert!((z[(0, 0)] - c(1., 0.)).norm() <= 1e-15);
        assert!((z[(1, 1)] - c(-1., 0.)).norm() <= 1e-15);
        assert!(z[(0, 1)].norm() <= 1e-15 && z[(1, 0)].norm() <= 1e-15);
        // (m, n) = (0, 1) is the cyclic shift |k><k+1|
        let x = unitary(2, 0, 1).unwrap();
        assert!((x[(0, 1)] - c(1., 0.)).norm() <= 1e-15);
        assert!((x[(1, 0)] - c(1., 0.)).norm() <= 1e-15);
        assert!(matches!(unitary(2, 2, 0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn orthogonality_relation() {
        // Tr[U_{p,q}^dag U_{m,n}] = d delta delta
        for d in [2usize, 3, 5] {
            let us = unitaries(d).unwrap();
            for (i, a) in us.iter().enumerate() {
                for (j, b) in us.iter().enumerate() {
                    let g = hs_inner(a, b).unwrap();
                    let expect = if i == j { d as f64 } else { 0.0 };
                    assert!((g - c(expect, 0.)).norm() <= 1e-12, "d={d} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn phase_composition_law() {
        // U_{m,n} U_{p,q} U_{m,n}^dag = e^{2 pi i (np - mq)/d} U_{p,q}
        for d in [2usize, 3, 5] {
            let pairs = index_pairs(d);
            for &(m, n) in &pairs {
                let a = unitary(d, m, n).unwrap();
                for &(p, q) in &pairs {
                    let b = unitary(d, p, q).unwrap();
                    let lhs = &(&a * &b) * &a.adjoint();
                    let num = (n * p) as i64 - (m * q) as i64;
                    let rhs = b.scale(phase(d, num));
                    assert!(lhs.max_abs_diff(&rhs) <= 1e-12, "d={d} ({m},{n})({p},{q})");
                }
            }
        }
    }

    #[test]
    fn adjoint_reflection_identity() {
        // U_{m,n}^dag = e^{2 pi i m n/d} U_{-m,-n}
        for d in [2usize, 3, 4] {
            for (m, n) in index_pairs(d) {
                let lhs = unitary(d, m, n).unwrap().adjoint();
                let mr = (d - m) % d;
                let nr = (d - n) % d;
                let rhs = unitary(d, mr, nr).unwrap().scale(phase(d, (m * n) as i64));
                assert!(lhs.max_abs_diff(&rhs) <= 1e-12, "d={d} ({m},{n})");
            }
        }
    }

    #[test]
    fn twirl_projects_onto_trace() {
        let mut rng = rng_from_seed(61);
        for d in [2usize, 3] {
            for _ in 0..10 {
                let o = random_hermitian(d, &mut rng);
                let t = twirl(d, &o).unwrap();
                let expect = OperatorMatrix::identity(d).scale(o.trace());
                assert!(t.max_abs_diff(&expect) <= 1e-12, "d={d}");
            }
        }
    }

    #[test]
    fn fiducial_norm_and_shape() {
        // d=2, alpha=1/2: |psi> = sqrt(4/5) (|0> + 1/2 |1>)
        let nu = fiducial(2, c(0.5, 0.0)).unwrap();
        let s = 4.0 / 5.0;
        assert!((nu.nu()[(0, 0)] - c(s, 0.)).norm() <= 1e-12);
        assert!((nu.nu()[(1, 1)] - c(s / 4.0, 0.)).norm() <= 1e-12);
        assert!((nu.nu()[(0, 1)] - c(s / 2.0, 0.)).norm() <= 1e-12);
        assert!((nu.nu().trace() - c(1., 0.)).norm() <= 1e-12);
        assert!(fiducial(2, c(0.0, 0.0)).is_err());
        assert!(fiducial(2, c(1.0, 0.0)).is_err());
        assert!(fiducial(2, c(0.8, 0.7)).is_err());
    }

    #[test]
    fn maximally_mixed_fails_everywhere_but_identity() {
        let nu = FiducialState::new(OperatorMatrix::identity(3).scale_re(1.0 / 3.0)).unwrap();
        let table = completeness_table(3, &nu, CONDITION_TOL).unwrap();
        assert!(!table.passes());
        for e in &table.entries {
            if (e.m, e.n) == (0, 0) {
                assert!((e.magnitude - 1.0).abs() <= 1e-12);
            } else {
                assert!(e.magnitude <= 1e-12, "({},{})", e.m, e.n);
            }
        }
    }

    #[test]
    fn basis_state_fails_at_shifts() {
        // nu = |0><0|: Tr[U_{p,q}^dag nu] = <0|U_{p,q}|0>* which vanishes
        // exactly when q != 0
        let mut nu = OperatorMatrix::zeros(2);
        nu[(0, 0)] = c(1., 0.);
        let nu = FiducialState::new(nu).unwrap();
        let table = completeness_table(2, &nu, CONDITION_TOL).unwrap();
        for e in &table.entries {
            if e.n != 0 {
                assert!(e.magnitude <= 1e-12);
            } else {
                assert!((e.magnitude - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn even_dimension_rejects_real_alpha() {
        // alpha^d real makes the (d/2, d/2)-type trace cancel exactly;
        // a phase on alpha restores completeness at the same modulus
        let nu = fiducial(2, c(0.5, 0.0)).unwrap();
        let table = completeness_table(2, &nu, CONDITION_TOL).unwrap();
        assert!(!table.passes());
        let worst = table.worst();
        assert!((worst.m, worst.n) == (1, 1));
        assert!(worst.magnitude <= 1e-15);

        let phased = fiducial(2, C64::from_polar(0.5, std::f64::consts::FRAC_PI_4)).unwrap();
        assert!(completeness_table(2, &phased, CONDITION_TOL)
            .unwrap()
            .passes());

        // odd d: real alpha passes across the working range
        for alpha in [0.2, 0.5, 0.8] {
            let nu = fiducial(3, c(alpha, 0.0)).unwrap();
            assert!(completeness_table(3, &nu, CONDITION_TOL).unwrap().passes());
        }
    }

    #[test]
    fn povm_shape_and_covariance() {
        let nu = fiducial(3, c(0.5, 0.0)).unwrap();
        let povm = covariant_povm(3, &nu).unwrap();
        assert_eq!(povm.len(), 9);
        // element (0,0) is nu/d exactly
        assert!(povm.frame().element(0).max_abs_diff(&nu.nu().scale_re(1.0 / 3.0)) <= 1e-14);
        // covariance by recomputation
        let us = unitaries(3).unwrap();
        for (idx, u) in us.iter().enumerate() {
            let expect = (&(u * nu.nu()) * &u.adjoint()).scale_re(1.0 / 3.0);
            assert!(povm.frame().element(idx).max_abs_diff(&expect) <= 1e-12);
        }
        assert!(povm.is_info_complete(DEFAULT_RANK_TOL).unwrap());
    }

    #[test]
    fn maximally_mixed_gives_trivial_povm() {
        let d = 2;
        let nu = FiducialState::new(OperatorMatrix::identity(d).scale_re(0.5)).unwrap();
        let povm = covariant_povm(d, &nu).unwrap();
        for e in povm.frame().elements() {
            assert!(e.max_abs_diff(&OperatorMatrix::identity(d).scale_re(0.25)) <= 1e-14);
        }
        assert!(!povm.is_info_complete(DEFAULT_RANK_TOL).unwrap());
    }

    #[test]
    fn closed_form_dual_is_biorthogonal_and_reconstructs() {
        let mut rng = rng_from_seed(83);
        let nu = fiducial(3, c(0.5, 0.0)).unwrap();
        let povm = covariant_povm(3, &nu).unwrap();
        let dual = dual_closed_form(3, &nu, CONDITION_TOL).unwrap();
        assert!(biorthogonality_defect(povm.frame(), &dual).unwrap() <= 1e-9);
        for _ in 0..20 {
            let a = random_hermitian(3, &mut rng);
            let back = reconstruct(povm.frame(), &dual, &a).unwrap();
            assert!(back.max_abs_diff(&a) <= 1e-9);
        }
    }

    #[test]
    fn closed_form_dual_matches_canonical() {
        // two independent code paths: the character sum against the
        // eigendecomposition-based inverse
        let alpha2 = C64::from_polar(0.5, std::f64::consts::FRAC_PI_4);
        for (d, alpha) in [(2usize, alpha2), (3, c(0.5, 0.0))] {
            let nu = fiducial(d, alpha).unwrap();
            let povm = covariant_povm(d, &nu).unwrap();
            let closed = dual_closed_form(d, &nu, CONDITION_TOL).unwrap();
            let canon = canonical_dual(povm.frame(), DEFAULT_RANK_TOL).unwrap();
            for (a, b) in closed.elements().iter().zip(canon.elements()) {
                assert!(a.max_abs_diff(b) <= 1e-9, "d={d}");
            }
        }
    }

    #[test]
    fn closed_form_dual_refuses_incomplete_fiducial() {
        let nu = fiducial(2, c(0.5, 0.0)).unwrap();
        let err = dual_closed_form(2, &nu, CONDITION_TOL).unwrap_err();
        match err {
            Error::CompletenessCondition { context, .. } => {
                assert!(context.contains("(1,1)"), "context: {context}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rep_builders_validate() {
        for d in [2usize, 3] {
            finite_list_rep(d).unwrap().validate().unwrap();
            subspace_rep(d).unwrap().validate().unwrap();
        }
        // the identity-bearing block is the (0,0) span, listed first
        assert_eq!(subspace_rep(3).unwrap().identity_block().unwrap(), 0);
    }

    #[test]
    fn covariant_frame_operator_is_diagonal_on_unitary_spans() {
        // F of the unit-weight covariant measurement has eigenvalue
        // |Tr[U_{m,n}^dag nu]|^2 / d on the span of |U_{m,n}>>
        let nu = fiducial(2, C64::from_polar(0.5, std::f64::consts::FRAC_PI_4)).unwrap();
        let povm = covariant_povm(2, &nu).unwrap();
        let f = frame_operator(povm.frame());
        let table = completeness_table(2, &nu, CONDITION_TOL).unwrap();
        for (idx, u) in unitaries(2).unwrap().iter().enumerate() {
            let v = vectorize(u);
            let fv = f.apply(&v).unwrap();
            let lambda = table.entries[idx].magnitude.powi(2) / 2.0;
            assert!(fv.max_abs_diff(&v.scale(c(lambda, 0.0))) <= 1e-12);
        }
        assert!(is_info_complete(povm.frame(), DEFAULT_RANK_TOL).unwrap());
    }
}
