use serde::{Deserialize, Serialize};

/// Floating tolerances in one place.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Constraint and consistency residuals.
    pub residual: f64,
    /// Drift of conserved quantities along a flow.
    pub drift: f64,
    /// Relative singular-value threshold for numeric ranks.
    pub rank_rel: f64,
    /// Relative eigenvalue threshold for Killing signatures.
    pub killing_rel: f64,
    /// Growth bound for orbit residuals and collinearity along a flow.
    pub growth: f64,
    /// Bracket residual accepted from floating normal-form maps.
    pub float_map: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-10,
            drift: 1e-8,
            rank_rel: 1e-9,
            killing_rel: 1e-9,
            growth: 1e-6,
            float_map: 1e-12,
        }
    }
}
