//! Shared solver knobs. One struct serves both the simplex path (pivot cap)
//! and the operator-splitting path (tolerance, iteration cap, penalty).

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Residual tolerance for the splitting solver.
    pub tol: f64,
    /// Iteration cap for the splitting solver.
    pub max_iters: usize,
    /// Pivot cap for the simplex solver.
    pub max_pivots: usize,
    /// Initial augmented coupling penalty for the splitting solver.
    pub penalty: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-6,
            max_iters: 20_000,
            max_pivots: 100_000,
            penalty: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iters == 0 {
            return Err("max_iters must be positive".into());
        }
        if self.max_pivots == 0 {
            return Err("max_pivots must be positive".into());
        }
        if self.penalty.is_nan() || self.penalty <= 0.0 {
            return Err(format!("penalty must be positive, got {}", self.penalty));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}
