//! Randomized structural properties of the vectorization isomorphism,
//! dual-frame reconstruction, and the JSON codecs.

use icpovm::frame::{canonical_dual, dual_family, reconstruct};
use icpovm::group::zd;
use icpovm::matrix::{
    devectorize, hs_inner, vectorize, C64, DEFAULT_RANK_TOL, OperatorMatrix,
};
use icpovm::random::{random_hermitian, rng_from_seed};
use icpovm::MatrixJson;
use proptest::prelude::*;

fn complex_entry() -> impl Strategy<Value = (f64, f64)> {
    let part = -10.0..10.0f64;
    (part.clone(), part)
}

fn matrix_strategy(dim: usize) -> impl Strategy<Value = OperatorMatrix> {
    proptest::collection::vec(complex_entry(), dim * dim).prop_map(move |cells| {
        OperatorMatrix::from_vec(
            dim,
            cells.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
        )
        .expect("square cell count")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn vectorization_round_trips(dim in 1usize..5, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = random_hermitian(dim, &mut rng);
        let back = devectorize(&vectorize(&a));
        prop_assert!(a.max_abs_diff(&back) == 0.0);
    }

    #[test]
    fn vector_inner_product_equals_trace_form(
        a in matrix_strategy(3),
        b in matrix_strategy(3),
    ) {
        let va = vectorize(&a);
        let vb = vectorize(&b);
        let lhs = va.inner(&vb);
        let rhs = hs_inner(&a, &b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn json_codec_round_trips(a in matrix_strategy(4)) {
        let text = serde_json::to_string(&MatrixJson::from_matrix(&a)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        prop_assert!(a.max_abs_diff(&back.to_matrix().unwrap()) == 0.0);
    }

    #[test]
    fn any_dual_in_the_family_reconstructs(
        dim in 2usize..4,
        seed in any::<u64>(),
        scale in 0.0..3.0f64,
    ) {
        // shifting the canonical dual by frame-orthogonal directions
        // never breaks reconstruction
        let alpha = if dim.is_multiple_of(2) {
            C64::from_polar(0.5, std::f64::consts::FRAC_PI_4)
        } else {
            C64::new(0.5, 0.0)
        };
        let nu = zd::fiducial(dim, alpha).unwrap();
        let povm = zd::covariant_povm(dim, &nu).unwrap();
        let mut rng = rng_from_seed(seed);
        let ys: Vec<OperatorMatrix> = (0..povm.len())
            .map(|_| random_hermitian(dim, &mut rng).scale_re(scale))
            .collect();
        let dual = dual_family(povm.frame(), &ys, DEFAULT_RANK_TOL).unwrap();
        let target = random_hermitian(dim, &mut rng);
        let rebuilt = reconstruct(povm.frame(), &dual, &target).unwrap();
        prop_assert!(rebuilt.max_abs_diff(&target) <= 1e-9);
    }

    #[test]
    fn canonical_dual_is_weight_normalization_invariant(
        seed in any::<u64>(),
        factor in 0.1..10.0f64,
    ) {
        // scaling all weights by c scales F by c and duals by 1/c, so
        // weighted reconstruction is unchanged; check the composite
        let nu = zd::fiducial(3, C64::new(0.5, 0.0)).unwrap();
        let povm = zd::covariant_povm(3, &nu).unwrap();
        let frame = povm.frame();
        let scaled = icpovm::OperatorFrame::new(
            frame.weights().iter().map(|w| w * factor).collect(),
            frame.elements().to_vec(),
        )
        .unwrap();
        let mut rng = rng_from_seed(seed);
        let target = random_hermitian(3, &mut rng);
        let d1 = canonical_dual(frame, DEFAULT_RANK_TOL).unwrap();
        let d2 = canonical_dual(&scaled, DEFAULT_RANK_TOL).unwrap();
        let r1 = reconstruct(frame, &d1, &target).unwrap();
        let r2 = reconstruct(&scaled, &d2, &target).unwrap();
        prop_assert!(r1.max_abs_diff(&target) <= 1e-9);
        prop_assert!(r2.max_abs_diff(&target) <= 1e-9);
    }
}
