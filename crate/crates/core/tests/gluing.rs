mod common;

use common::{schur, unit_point};
use opuc_core::gluing::{glued_density, transfer_matrices, validate_glue_input, GlueInput};
use opuc_core::opuc::oracle::verblunsky_from_measure;
use opuc_core::opuc::recursion::{second_kind, szego_recursion, SchurSequence};
use opuc_core::opuc::szego::{bernstein_szego_grid, CaratheodoryFn};
use opuc_core::CircleMeasure;
use proptest::prelude::*;

fn input(head: &SchurSequence, tail: &SchurSequence) -> GlueInput {
    let pair = szego_recursion(head, head.len()).unwrap().pop().unwrap();
    let phi_t = szego_recursion(tail, tail.len()).unwrap().pop().unwrap();
    let psi_t = second_kind(tail, tail.len()).unwrap().pop().unwrap();
    let f = CaratheodoryFn::bernstein_szego(&phi_t, &psi_t);
    let glued = szego_recursion(&head.concat(tail), head.len() + tail.len()).unwrap().pop().unwrap();
    GlueInput::new(pair, f, bernstein_szego_grid(&glued, 1 << 16)).with_tail_len(tail.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transfer_determinant_is_z_to_the_m(tail in schur(0..=32, 0.9), z in unit_point()) {
        let m = tail.len();
        let t = transfer_matrices(&tail, m, z).unwrap();
        let scale = (t[(0, 0)] * t[(1, 1)]).norm().max((t[(0, 1)] * t[(1, 0)]).norm()).max(1.0);
        prop_assert!((t.determinant() - z.powu(m as u32)).norm() <= 1e-12 * scale);
    }

    #[test]
    fn glued_parameters_are_head_then_tail(head in schur(1..=12, 0.5), tail in schur(1..=8, 0.06)) {
        let inp = input(&head, &tail);
        prop_assert!(validate_glue_input(&inp).passes(1e-9));
        let (w, _) = glued_density(&inp).unwrap();
        let sigma = CircleMeasure::from_samples(inp.grid, w, Vec::new()).unwrap();
        prop_assert!((sigma.total_mass() - 1.0).abs() <= 1e-8);
        let got = verblunsky_from_measure(&sigma, head.len() + tail.len() + 2).unwrap();
        let want = head.concat(&tail).padded(head.len() + tail.len() + 2);
        prop_assert!(got.max_diff(&want) <= 1e-6);
    }
}
