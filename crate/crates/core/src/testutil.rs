use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use crate::plate::SectorPlate;

/// Plates with 1..8 sectors at least 1e-6 rad wide and arbitrary phases.
pub(crate) fn arb_plate() -> impl Strategy<Value = SectorPlate> {
    prop::collection::vec((0.0..TAU, 0.0..TAU), 1..8).prop_filter_map("degenerate", plate_from)
}

/// Plates whose sectors carry phase 0 or pi.
pub(crate) fn arb_binary_plate() -> impl Strategy<Value = SectorPlate> {
    prop::collection::vec((0.0..TAU, any::<bool>()), 2..10).prop_filter_map("degenerate", |v| {
        plate_from(v.into_iter().map(|(b, flip)| (b, if flip { PI } else { 0.0 })).collect())
    })
}

fn plate_from(mut v: Vec<(f64, f64)>) -> Option<SectorPlate> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
    if v.len() > 1 && v[0].0 + TAU - v[v.len() - 1].0 < 1e-6 {
        v.pop();
    }
    let (b, p): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
    SectorPlate::new(&b, &p).ok()
}
