//! Fixtures shared by the benchmarks.

use subriem_core::{builtin, Instance};

/// Instantiates a builtin example with every parameter set to `value`.
pub fn fixture(name: &str, value: f64) -> Instance {
    let b = builtin(name).unwrap_or_else(|| panic!("unknown builtin {name}"));
    let bind: Vec<(String, f64)> = b.spec().params.iter().map(|p| (p.name.clone(), value)).collect();
    b.instantiate(&bind).expect("builtin instantiates")
}
