//! Shared fixtures for the benchmarks.

use mdt_core::corpus::load;
use mdt_core::{Assignment, QuiverModel, ReducedPresentation};

/// A corpus model with its declared cut applied.
pub fn presentation(name: &str) -> (QuiverModel, ReducedPresentation) {
    let model = load(name);
    let cut = model.declared_cut().expect("corpus cut").to_vec();
    let pres = model.reduced_presentation(&cut).expect("valid cut");
    (model, pres)
}

pub fn q(value: u64) -> Assignment {
    [("q".to_string(), value)].into_iter().collect()
}
