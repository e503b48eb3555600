//! Uniform grids on `[0, pi]`.

use std::f64::consts::PI;

/// A uniform partition of `[0, pi]` with `n_steps` steps
/// (`n_steps + 1` nodes including both endpoints).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n_steps: usize,
}

impl Grid {
    /// Default step count for ODE integration.
    pub const DEFAULT_STEPS: usize = 2048;

    pub fn new(n_steps: usize) -> Self {
        assert!(n_steps >= 2, "grid needs at least 2 steps");
        Grid { n_steps }
    }

    pub fn default_forward() -> Self {
        Grid::new(Self::DEFAULT_STEPS)
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of nodes, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        PI / self.n_steps as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        debug_assert!(i <= self.n_steps);
        PI * i as f64 / self.n_steps as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.x(i))
    }
}
