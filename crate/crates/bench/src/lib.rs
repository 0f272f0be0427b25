//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use qtorus_core::fmodule::ModuleSpec;
use qtorus_core::glmod::GlModule;
use qtorus_core::{CycNumber, TorusSpec};

/// The three reference tori: `(d, N)` = `(2, 2)`, `(2, 3)` and `(3, 4)`.
pub fn reference_tori() -> Vec<(&'static str, Arc<TorusSpec>)> {
    vec![
        ("i", Arc::new(TorusSpec::from_upper(2, 2, &[(0, 1, 1)]).expect("valid"))),
        ("ii", Arc::new(TorusSpec::from_upper(2, 3, &[(0, 1, 1)]).expect("valid"))),
        ("iii", Arc::new(TorusSpec::from_upper(3, 4, &[(0, 1, 1), (0, 2, 2)]).expect("valid"))),
    ]
}

pub fn module(spec: &Arc<TorusSpec>, selector: &str) -> ModuleSpec {
    let d = spec.rank();
    let v = Arc::new(GlModule::from_selector(d, selector).expect("known selector"));
    let alpha = (0..d).map(|i| format!("{}/3", i + 1).parse::<CycNumber>().expect("rational")).collect();
    ModuleSpec::untwisted(spec.clone(), v, alpha).expect("valid module")
}
