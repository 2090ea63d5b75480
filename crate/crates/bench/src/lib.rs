//! Shared fixtures for the benchmark suite.

use intervalmce::{Interval, Result};

/// Test boxes spread over the bulk of the simulation-design distribution.
pub fn box_panel() -> Result<Vec<Interval>> {
    [
        (25.0, 35.0),
        (20.0, 40.0),
        (28.0, 30.0),
        (10.0, 22.0),
        (38.0, 52.0),
    ]
    .iter()
    .map(|&(a, b)| Interval::new(a, b))
    .collect()
}
