//! Shared fixtures for the benchmarks.

use schubgal::SchubertProblem;

/// Problems from easy to the slowest per-sample instances on `Gr(4,9)`.
pub const SAMPLE_PROBLEMS: &[&str] = &[
    "Gr(2,4): (1)^4",
    "Gr(2,5): (1)^6",
    "Gr(4,9): (3,3,2)*(2,2)^2*(2,1,1)",
    "Gr(4,9): (4)*(2,2)^2*(1,1,1)^2*(1)^2",
];

/// Inputs for the Littlewood-Richardson counter.
pub const COUNT_PROBLEMS: &[&str] = &[
    "Gr(2,8): (1)^12",
    "Gr(4,9): (1)^20",
    "Gr(4,9): (1)^6*(1,1,1)^2*(4)^2",
];

pub fn problem(s: &str) -> SchubertProblem {
    s.parse().expect("fixture parses")
}

/// Short label for benchmark ids.
pub fn label(s: &str) -> String {
    s.replace(' ', "")
}
