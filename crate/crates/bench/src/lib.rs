//! Fixtures shared by the benchmarks.

use cocenter::stendhal::{Deformation, TensorSetup};
use cocenter::symfunc::WeightList;
use cocenter::{CartanDatum, Weight};

pub fn setup(cartan_type: &str, weights: &[&[i64]], deformation: Deformation) -> TensorSetup {
    let c = CartanDatum::new(cartan_type).expect("supported type");
    let l = WeightList::new(weights.iter().map(|w| Weight(w.to_vec())).collect());
    TensorSetup::new(c, l, deformation).expect("weights match the rank")
}

/// Small cases that finish in well under a second each.
pub fn small_cases() -> Vec<(&'static str, Vec<&'static [i64]>)> {
    vec![("A1", vec![&[2]]), ("A1", vec![&[1], &[1]]), ("A2", vec![&[1, 0], &[0, 1]])]
}
