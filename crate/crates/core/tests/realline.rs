use opuc_core::realline::{compare_reduction, segment_to_circle, SegmentMeasure};
use opuc_core::UnitGrid;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reduction_matches_segment_oracle(c0 in -1.0..1.0f64, c1 in -1.0..1.0f64, c2 in -1.0..1.0f64, k in 1usize..=10) {
        let rho = move |x: f64| (c0 + c1 * x + c2 * x * x).powi(2) + 0.1;
        let psi = SegmentMeasure::new(UnitGrid::new(4096).unwrap(), rho, Vec::new()).unwrap();
        let r = compare_reduction(&psi, k).unwrap();
        prop_assert!(r.max_rel_diff <= 1e-7, "gap {}", r.max_rel_diff);
    }

    #[test]
    fn segment_round_trip(c0 in -1.0..1.0f64, c1 in -1.0..1.0f64, x in -0.99..0.99f64) {
        let rho = move |x: f64| (c0 + c1 * x).powi(2) + 0.1;
        let psi = SegmentMeasure::new(UnitGrid::new(1024).unwrap(), rho, Vec::new()).unwrap();
        let sigma = segment_to_circle(&psi).unwrap();
        prop_assert!(sigma.defect() <= 1e-12);
        let back = sigma.to_segment().unwrap();
        prop_assert!((back.total_mass() - psi.total_mass()).abs() <= 1e-12);
        // Away from the endpoints ρ is read back from the nearest node.
        prop_assert!((back.rho(x) - rho(x)).abs() <= 0.05 * rho(x));
    }
}
