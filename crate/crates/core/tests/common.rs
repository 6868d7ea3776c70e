#![allow(dead_code)]

use std::f64::consts::TAU;

use opuc_core::opuc::recursion::SchurSequence;
use opuc_core::Complex64;
use proptest::prelude::*;

/// `len` coefficients with moduli below `radius`.
pub fn schur(len: std::ops::RangeInclusive<usize>, radius: f64) -> impl Strategy<Value = SchurSequence> {
    prop::collection::vec((0.0..radius, 0.0..TAU), len).prop_map(|v| {
        SchurSequence::new(v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect()).unwrap()
    })
}

pub fn unit_point() -> impl Strategy<Value = Complex64> {
    (0.0..TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}
