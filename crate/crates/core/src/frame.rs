//! Operator frames, their duals, and POVM validation.
//!
//! A family {Xi_i} with positive weights w_i spans the operator space iff
//! its frame operator F = sum_i w_i |Xi_i>><<Xi_i| is invertible. Duals
//! {Theta_i} satisfy sum_i w_i |Xi_i>><<Theta_i| = I, which turns inner
//! products against the duals into expansion coefficients on the frame.

use crate::error::{Error, Result};
use crate::matrix::{
    eig_hermitian, hs_inner, inv_sqrt_psd, is_psd, rebuild_with, vectorize, C64, DoubledVector,
    OperatorMatrix,
};

/// Weighted finite family of operators on a fixed system dimension.
#[derive(Debug, Clone)]
pub struct OperatorFrame {
    system_dim: usize,
    weights: Vec<f64>,
    elements: Vec<OperatorMatrix>,
}

impl OperatorFrame {
    pub fn new(weights: Vec<f64>, elements: Vec<OperatorMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if weights.len() != elements.len() {
            return Err(Error::LengthMismatch {
                expected: elements.len(),
                got: weights.len(),
            });
        }
        let system_dim = elements[0].dim();
        for e in &elements {
            if e.dim() != system_dim {
                return Err(Error::DimensionMismatch {
                    expected: system_dim,
                    got: e.dim(),
                });
            }
        }
        for &w in &weights {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "frame weights must be positive and finite, got {w}"
                )));
            }
        }
        Ok(Self {
            system_dim,
            weights,
            elements,
        })
    }

    /// Frame with every weight equal to one.
    pub fn unit_weights(elements: Vec<OperatorMatrix>) -> Result<Self> {
        let w = vec![1.0; elements.len()];
        Self::new(w, elements)
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn elements(&self) -> &[OperatorMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &OperatorMatrix {
        &self.elements[i]
    }

    fn all_hermitian(&self, tol: f64) -> bool {
        self.elements.iter().all(|e| e.is_hermitian(tol))
    }

    /// Weighted linear combination sum_i w_i c_i Xi_i.
    pub fn expand(&self, coefficients: &[C64]) -> Result<OperatorMatrix> {
        if coefficients.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: coefficients.len(),
            });
        }
        let mut acc = OperatorMatrix::zeros(self.system_dim);
        for ((c, w), e) in coefficients.iter().zip(&self.weights).zip(&self.elements) {
            acc = &acc + &e.scale(c * C64::new(*w, 0.0));
        }
        Ok(acc)
    }
}

/// The d^2 x d^2 operator sum_i w_i |Xi_i>><<Xi_i| on the doubled space.
#[derive(Debug, Clone)]
pub struct FrameOperator {
    system_dim: usize,
    matrix: OperatorMatrix,
}

impl FrameOperator {
    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// Hermitian PSD matrix of side `system_dim^2`.
    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    pub fn from_parts(system_dim: usize, matrix: OperatorMatrix) -> Result<Self> {
        if matrix.dim() != system_dim * system_dim {
            return Err(Error::DimensionMismatch {
                expected: system_dim * system_dim,
                got: matrix.dim(),
            });
        }
        Ok(Self { system_dim, matrix })
    }

    pub fn apply(&self, v: &DoubledVector) -> Result<DoubledVector> {
        if v.dim() != self.system_dim {
            return Err(Error::DimensionMismatch {
                expected: self.system_dim,
                got: v.dim(),
            });
        }
        DoubledVector::from_vec(self.system_dim, self.matrix.apply(v.entries()))
    }

    /// Smallest and largest eigenvalues (a, b); the family is a frame for
    /// the full operator space iff a > 0.
    pub fn bounds(&self) -> Result<(f64, f64)> {
        let (vals, _) = eig_hermitian(&self.matrix)?;
        Ok((vals[0], vals[vals.len() - 1]))
    }

    /// Inverse through the eigendecomposition; requires the lower frame
    /// bound to clear `rank_tol` relative to the upper one.
    pub fn inverse(&self, rank_tol: f64) -> Result<OperatorMatrix> {
        let (vals, vecs) = eig_hermitian(&self.matrix)?;
        let (a, b) = (vals[0], vals[vals.len() - 1]);
        if a <= rank_tol * b || b <= 0.0 {
            return Err(Error::Singular {
                min_eig: a,
                threshold: rank_tol * b,
            });
        }
        Ok(rebuild_with(&vals, &vecs, |x| 1.0 / x))
    }
}

/// Assembles the frame operator by summing weighted doubled-space
/// projectors onto the elements.
pub fn frame_operator(frame: &OperatorFrame) -> FrameOperator {
    let d = frame.system_dim();
    let mut acc = OperatorMatrix::zeros(d * d);
    for (w, e) in frame.weights().iter().zip(frame.elements()) {
        let v = vectorize(e);
        let p = v.outer(&v);
        acc = &acc + &p.scale_re(*w);
    }
    FrameOperator {
        system_dim: d,
        matrix: acc,
    }
}

/// Frame test with a relative spectral cutoff: a > rank_tol * b.
pub fn is_info_complete(frame: &OperatorFrame, rank_tol: f64) -> Result<bool> {
    let (a, b) = frame_operator(frame).bounds()?;
    Ok(b > 0.0 && a > rank_tol * b)
}

/// Canonical dual Theta_i = devec(F^-1 |Xi_i>>), weights carried over.
///
/// A frame of Hermitian elements has Hermitian duals; rounding noise off
/// that subspace is projected away. Fails when F is singular at `rank_tol`.
pub fn canonical_dual(frame: &OperatorFrame, rank_tol: f64) -> Result<OperatorFrame> {
    let f = frame_operator(frame);
    let f_inv = f.inverse(rank_tol)?;
    let hermitian_source = frame.all_hermitian(1e-10);
    let mut duals = Vec::with_capacity(frame.len());
    for e in frame.elements() {
        let image = DoubledVector::from_vec(frame.system_dim(), f_inv.apply(vectorize(e).entries()))?;
        let mut theta = crate::matrix::devectorize(&image);
        if hermitian_source {
            theta = theta.hermitize();
        }
        duals.push(theta);
    }
    OperatorFrame::new(frame.weights().to_vec(), duals)
}

/// General dual from free operators Y_i:
/// |Theta_i>> = F^-1|Xi_i>> + |Y_i>> - sum_j w_j <<Xi_j|F^-1|Xi_i>> |Y_j>>.
///
/// Every choice satisfies sum_i w_i |Xi_i>><<Theta_i| = I; all-zero Y_i
/// reproduces the canonical dual.
pub fn dual_family(
    frame: &OperatorFrame,
    alternates: &[OperatorMatrix],
    rank_tol: f64,
) -> Result<OperatorFrame> {
    if alternates.len() != frame.len() {
        return Err(Error::LengthMismatch {
            expected: frame.len(),
            got: alternates.len(),
        });
    }
    let d = frame.system_dim();
    for y in alternates {
        if y.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: y.dim(),
            });
        }
    }
    let f_inv = frame_operator(frame).inverse(rank_tol)?;
    let canon: Vec<DoubledVector> = frame
        .elements()
        .iter()
        .map(|e| DoubledVector::from_vec(d, f_inv.apply(vectorize(e).entries())))
        .collect::<Result<_>>()?;
    let ys: Vec<DoubledVector> = alternates.iter().map(vectorize).collect();
    let mut duals = Vec::with_capacity(frame.len());
    for i in 0..frame.len() {
        let mut v = canon[i].add(&ys[i]);
        for ((w, element), y) in frame.weights().iter().zip(frame.elements()).zip(&ys) {
            // w_j <<Xi_j|F^-1|Xi_i>>
            let coeff = vectorize(element).inner(&canon[i]) * *w;
            v = v.sub(&y.scale(coeff));
        }
        duals.push(crate::matrix::devectorize(&v));
    }
    OperatorFrame::new(frame.weights().to_vec(), duals)
}

/// Expansion coefficients f_i(O) = Tr[Theta_i^dag O] against a dual.
pub fn data_processing(dual: &OperatorFrame, observable: &OperatorMatrix) -> Result<Vec<C64>> {
    if observable.dim() != dual.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: dual.system_dim(),
            got: observable.dim(),
        });
    }
    dual.elements()
        .iter()
        .map(|t| hs_inner(t, observable))
        .collect()
}

/// Resynthesizes A = sum_i w_i Tr[Theta_i^dag A] Xi_i.
pub fn reconstruct(
    frame: &OperatorFrame,
    dual: &OperatorFrame,
    target: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    if frame.len() != dual.len() {
        return Err(Error::LengthMismatch {
            expected: frame.len(),
            got: dual.len(),
        });
    }
    let coeffs = data_processing(dual, target)?;
    frame.expand(&coeffs)
}

/// Worst deviation of Tr[Theta_i^dag Xi_j] from the Kronecker delta.
///
/// Vanishes exactly when the dual is unique, which for a finite frame
/// means the elements are linearly independent (a minimal frame). The
/// delta form assumes unit weights; a weighted minimal frame satisfies
/// w_i Tr[Theta_i^dag Xi_j] = delta_ij instead.
pub fn biorthogonality_defect(frame: &OperatorFrame, dual: &OperatorFrame) -> Result<f64> {
    if frame.len() != dual.len() {
        return Err(Error::LengthMismatch {
            expected: frame.len(),
            got: dual.len(),
        });
    }
    let mut worst = 0.0f64;
    for (i, t) in dual.elements().iter().enumerate() {
        for (j, e) in frame.elements().iter().enumerate() {
            let g = hs_inner(t, e)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - C64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Positive-operator-valued measure: PSD elements resolving the identity
/// under the frame weights.
#[derive(Debug, Clone)]
pub struct Povm {
    frame: OperatorFrame,
}

impl Povm {
    /// Validates positivity of each element and closure to the identity.
    pub fn new(frame: OperatorFrame, psd_tol: f64) -> Result<Self> {
        let d = frame.system_dim();
        for (i, e) in frame.elements().iter().enumerate() {
            let defect = e.hermiticity_defect();
            if defect > 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "measurement element {i} is not Hermitian (defect {defect:.3e})"
                )));
            }
            if !is_psd(e, psd_tol) {
                let (vals, _) = eig_hermitian(&e.hermitize())?;
                return Err(Error::NotPsd(vals[0]));
            }
        }
        let mut sum = OperatorMatrix::zeros(d);
        for (w, e) in frame.weights().iter().zip(frame.elements()) {
            sum = &sum + &e.scale_re(*w);
        }
        let closure = sum.max_abs_diff(&OperatorMatrix::identity(d));
        if closure > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "weighted elements sum to the identity only within {closure:.3e}"
            )));
        }
        Ok(Self { frame })
    }

    pub fn frame(&self) -> &OperatorFrame {
        &self.frame
    }

    pub fn system_dim(&self) -> usize {
        self.frame.system_dim()
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    /// Informational completeness of the measurement as an operator frame.
    pub fn is_info_complete(&self, rank_tol: f64) -> Result<bool> {
        is_info_complete(&self.frame, rank_tol)
    }

    /// True when the outcome count meets the d^2 floor for completeness.
    pub fn meets_minimal_count(&self) -> bool {
        self.len() >= self.system_dim() * self.system_dim()
    }
}

/// Normalizes a frame of positive operators into a POVM:
/// K_i -> S^-1/2 K_i S^-1/2 with S the weighted sum of the K_i.
///
/// S must be strictly positive; the output closes to the identity by
/// construction and inherits informational completeness from the input.
pub fn povm_from_positive_frame(
    frame: &OperatorFrame,
    psd_tol: f64,
    rank_tol: f64,
) -> Result<Povm> {
    let d = frame.system_dim();
    for e in frame.elements() {
        if !is_psd(e, psd_tol) {
            let (vals, _) = eig_hermitian(&e.hermitize())?;
            return Err(Error::NotPsd(vals[0]));
        }
    }
    let mut s = OperatorMatrix::zeros(d);
    for (w, e) in frame.weights().iter().zip(frame.elements()) {
        s = &s + &e.hermitize().scale_re(*w);
    }
    let s_inv_sqrt = inv_sqrt_psd(&s, rank_tol)?;
    let elements = frame
        .elements()
        .iter()
        .map(|k| (&(&s_inv_sqrt * &k.hermitize()) * &s_inv_sqrt).hermitize())
        .collect();
    let normalized = OperatorFrame::new(frame.weights().to_vec(), elements)?;
    Povm::new(normalized, psd_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{DEFAULT_PSD_TOL, DEFAULT_RANK_TOL};
    use crate::random::{random_density, random_hermitian, random_positive, rng_from_seed};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn matrix_units(d: usize) -> Vec<OperatorMatrix> {
        let mut out = Vec::new();
        for n in 0..d {
            for m in 0..d {
                let mut e = OperatorMatrix::zeros(d);
                e[(n, m)] = c(1., 0.);
                out.push(e);
            }
        }
        out
    }

    fn paulis() -> Vec<OperatorMatrix> {
        let i2 = OperatorMatrix::identity(2);
        let x = OperatorMatrix::from_vec(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
            .unwrap();
        let y = OperatorMatrix::from_vec(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
            .unwrap();
        let z = OperatorMatrix::from_vec(2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
            .unwrap();
        vec![i2, x, y, z]
    }

    #[test]
    fn matrix_unit_basis_is_tight_and_self_dual() {
        let frame = OperatorFrame::unit_weights(matrix_units(2)).unwrap();
        let f = frame_operator(&frame);
        assert!(f
            .matrix()
            .max_abs_diff(&OperatorMatrix::identity(4))
            <= 1e-14);
        let (a, b) = f.bounds().unwrap();
        assert!((a - 1.0).abs() <= 1e-12 && (b - 1.0).abs() <= 1e-12);
        let dual = canonical_dual(&frame, DEFAULT_RANK_TOL).unwrap();
        for (t, e) in dual.elements().iter().zip(frame.elements()) {
            assert!(t.max_abs_diff(e) <= 1e-12);
        }
        assert!(biorthogonality_defect(&frame, &dual).unwrap() <= 1e-12);
    }

    #[test]
    fn weighted_pauli_frame_is_tight() {
        // unnormalized Paulis have squared norm 2; weight 1/2 restores F = I
        let frame = OperatorFrame::new(vec![0.5; 4], paulis()).unwrap();
        let f = frame_operator(&frame);
        assert!(f
            .matrix()
            .max_abs_diff(&OperatorMatrix::identity(4))
            <= 1e-14);
        assert!(is_info_complete(&frame, DEFAULT_RANK_TOL).unwrap());
    }

    #[test]
    fn single_element_family_is_not_a_frame() {
        let frame = OperatorFrame::unit_weights(vec![OperatorMatrix::identity(2)]).unwrap();
        let (a, b) = frame_operator(&frame).bounds().unwrap();
        assert!(a.abs() <= 1e-12);
        assert!((b - 2.0).abs() <= 1e-12);
        assert!(!is_info_complete(&frame, DEFAULT_RANK_TOL).unwrap());
        assert!(matches!(
            canonical_dual(&frame, DEFAULT_RANK_TOL),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn frame_operator_matches_inner_product_route() {
        // second code path: F|A>> = sum_i w_i <<Xi_i|A>> |Xi_i>>
        let mut rng = rng_from_seed(101);
        let elements: Vec<_> = (0..5).map(|_| random_hermitian(2, &mut rng)).collect();
        let weights = vec![0.7, 1.3, 0.2, 2.0, 0.9];
        let frame = OperatorFrame::new(weights.clone(), elements.clone()).unwrap();
        let f = frame_operator(&frame);
        let a = random_hermitian(2, &mut rng);
        let direct = f.apply(&vectorize(&a)).unwrap();
        let mut oracle = DoubledVector::from_vec(2, vec![c(0., 0.); 4]).unwrap();
        for (w, e) in weights.iter().zip(&elements) {
            let coeff = hs_inner(e, &a).unwrap() * c(*w, 0.);
            oracle = oracle.add(&vectorize(e).scale(coeff));
        }
        assert!(direct.max_abs_diff(&oracle) <= 1e-12);
    }

    #[test]
    fn minimal_random_frame_reconstructs_and_is_biorthogonal() {
        let mut rng = rng_from_seed(7);
        let elements: Vec<_> = (0..4).map(|_| random_hermitian(2, &mut rng)).collect();
        let frame = OperatorFrame::unit_weights(elements).unwrap();
        assert!(is_info_complete(&frame, DEFAULT_RANK_TOL).unwrap());
        let dual = canonical_dual(&frame, DEFAULT_RANK_TOL).unwrap();
        // minimal count forces the unique dual, hence biorthogonality
        assert!(biorthogonality_defect(&frame, &dual).unwrap() <= 1e-9);
        for _ in 0..3 {
            let target = random_hermitian(2, &mut rng);
            let back = reconstruct(&frame, &dual, &target).unwrap();
            assert!(back.max_abs_diff(&target) <= 1e-9);
        }
        // duals of a Hermitian frame stay Hermitian
        for t in dual.elements() {
            assert!(t.is_hermitian(1e-12));
        }
    }

    #[test]
    fn weighted_minimal_frame_satisfies_weighted_delta() {
        // with weights the unique dual obeys w_i Tr[Theta_i^dag Xi_j] = delta_ij
        let mut rng = rng_from_seed(7);
        let elements: Vec<_> = (0..4).map(|_| random_hermitian(2, &mut rng)).collect();
        let weights = vec![1.0, 0.5, 2.0, 1.5];
        let frame = OperatorFrame::new(weights.clone(), elements).unwrap();
        let dual = canonical_dual(&frame, DEFAULT_RANK_TOL).unwrap();
        for (i, t) in dual.elements().iter().enumerate() {
            for (j, e) in frame.elements().iter().enumerate() {
                let g = hs_inner(t, e).unwrap() * c(weights[i], 0.0);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(target, 0.0)).norm() <= 1e-9, "({i},{j})");
            }
        }
        let target = random_hermitian(2, &mut rng);
        let back = reconstruct(&frame, &dual, &target).unwrap();
        assert!(back.max_abs_diff(&target) <= 1e-9);
    }

    #[test]
    fn overcomplete_frame_reconstructs_without_biorthogonality() {
        let mut rng = rng_from_seed(13);
        let elements: Vec<_> = (0..6).map(|_| random_hermitian(2, &mut rng)).collect();
        let frame = OperatorFrame::unit_weights(elements).unwrap();
        let dual = canonical_dual(&frame, DEFAULT_RANK_TOL).unwrap();
        let target = random_hermitian(2, &mut rng);
        let back = reconstruct(&frame, &dual, &target).unwrap();
        assert!(back.max_abs_diff(&target) <= 1e-9);
        // six elements in a four-dimensional space cannot be biorthogonal
        assert!(biorthogonality_defect(&frame, &dual).unwrap() > 1e-3);
    }

    #[test]
    fn dual_family_shifts_reconstruct_and_zero_shift_is_canonical() {
        let mut rng = rng_from_seed(29);
        let elements: Vec<_> = (0..6).map(|_| random_hermitian(2, &mut rng)).collect();
        let frame = OperatorFrame::unit_weights(elements).unwrap();
        let canon = canonical_dual(&frame, DEFAULT_RANK_TOL).unwrap();

        let zeros: Vec<_> = (0..6).map(|_| OperatorMatrix::zeros(2)).collect();
        let same = dual_family(&frame, &zeros, DEFAULT_RANK_TOL).unwrap();
        for (a, b) in same.elements().iter().zip(canon.elements()) {
            assert!(a.max_abs_diff(b) <= 1e-11);
        }

        let ys: Vec<_> = (0..6).map(|_| random_hermitian(2, &mut rng)).collect();
        let alt = dual_family(&frame, &ys, DEFAULT_RANK_TOL).unwrap();
        let mut differs = 0.0f64;
        for (a, b) in alt.elements().iter().zip(canon.elements()) {
            differs = differs.max(a.max_abs_diff(b));
        }
        assert!(differs > 1e-6, "overcomplete frame admits distinct duals");
        for _ in 0..3 {
            let target = random_hermitian(2, &mut rng);
            let back = reconstruct(&frame, &alt, &target).unwrap();
            assert!(back.max_abs_diff(&target) <= 1e-9);
        }
    }

    #[test]
    fn data_processing_is_linear() {
        let mut rng = rng_from_seed(37);
        let elements: Vec<_> = (0..4).map(|_| random_hermitian(2, &mut rng)).collect();
        let frame = OperatorFrame::unit_weights(elements).unwrap();
        let dual = canonical_dual(&frame, DEFAULT_RANK_TOL).unwrap();
        let a = random_hermitian(2, &mut rng);
        let b = random_hermitian(2, &mut rng);
        let combo = &a.scale(c(0.3, 0.0)) + &b.scale(c(0.0, 1.7));
        let fa = data_processing(&dual, &a).unwrap();
        let fb = data_processing(&dual, &b).unwrap();
        let fc = data_processing(&dual, &combo).unwrap();
        for i in 0..4 {
            let expect = fa[i] * c(0.3, 0.0) + fb[i] * c(0.0, 1.7);
            assert!((fc[i] - expect).norm() <= 1e-10);
        }
    }

    #[test]
    fn positive_frame_normalizes_to_povm() {
        let mut rng = rng_from_seed(41);
        let ks: Vec<_> = (0..4).map(|_| random_positive(2, 0.05, &mut rng)).collect();
        let frame = OperatorFrame::unit_weights(ks).unwrap();
        let povm = povm_from_positive_frame(&frame, DEFAULT_PSD_TOL, DEFAULT_RANK_TOL).unwrap();
        assert!(povm.is_info_complete(DEFAULT_RANK_TOL).unwrap());
        assert!(povm.meets_minimal_count());
        // closure and positivity were already enforced; spot-check closure
        let mut sum = OperatorMatrix::zeros(2);
        for (w, e) in povm.frame().weights().iter().zip(povm.frame().elements()) {
            sum = &sum + &e.scale_re(*w);
        }
        assert!(sum.max_abs_diff(&OperatorMatrix::identity(2)) <= 1e-10);
    }

    #[test]
    fn projective_measurement_is_valid_but_not_complete() {
        let mut p0 = OperatorMatrix::zeros(2);
        p0[(0, 0)] = c(1., 0.);
        let mut p1 = OperatorMatrix::zeros(2);
        p1[(1, 1)] = c(1., 0.);
        let frame = OperatorFrame::unit_weights(vec![p0, p1]).unwrap();
        let povm = Povm::new(frame, DEFAULT_PSD_TOL).unwrap();
        assert!(!povm.is_info_complete(DEFAULT_RANK_TOL).unwrap());
        assert!(!povm.meets_minimal_count());
    }

    #[test]
    fn povm_rejects_bad_families() {
        let x = OperatorMatrix::from_vec(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
            .unwrap();
        // X is Hermitian but not PSD
        let neg = OperatorFrame::unit_weights(vec![x, OperatorMatrix::identity(2)]).unwrap();
        assert!(matches!(
            Povm::new(neg, DEFAULT_PSD_TOL),
            Err(Error::NotPsd(_))
        ));
        // PSD but the weighted sum is 2I
        let double = OperatorFrame::unit_weights(vec![
            OperatorMatrix::identity(2),
            OperatorMatrix::identity(2),
        ])
        .unwrap();
        assert!(Povm::new(double, DEFAULT_PSD_TOL).is_err());
    }

    #[test]
    fn povm_probabilities_close_for_any_state() {
        let mut rng = rng_from_seed(53);
        let ks: Vec<_> = (0..5).map(|_| random_positive(2, 0.05, &mut rng)).collect();
        let frame = OperatorFrame::new(vec![1.0, 0.4, 0.8, 1.6, 1.2], ks).unwrap();
        let povm = povm_from_positive_frame(&frame, DEFAULT_PSD_TOL, DEFAULT_RANK_TOL).unwrap();
        let rho = random_density(2, &mut rng);
        let total: f64 = povm
            .frame()
            .weights()
            .iter()
            .zip(povm.frame().elements())
            .map(|(w, e)| w * hs_inner(e, &rho).unwrap().re)
            .sum();
        assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn constructor_rejections() {
        assert!(matches!(
            OperatorFrame::unit_weights(vec![]),
            Err(Error::EmptyFrame)
        ));
        assert!(matches!(
            OperatorFrame::new(vec![1.0], vec![
                OperatorMatrix::identity(2),
                OperatorMatrix::identity(2)
            ]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            OperatorFrame::new(
                vec![1.0, -1.0],
                vec![OperatorMatrix::identity(2), OperatorMatrix::identity(2)]
            ),
            Err(Error::InvalidParameter(_))
        ));
        assert!(OperatorFrame::unit_weights(vec![
            OperatorMatrix::identity(2),
            OperatorMatrix::identity(3)
        ])
        .is_err());
    }
}
