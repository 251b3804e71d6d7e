use serde::Serialize;

use crate::error::{Error, Result};

/// Per-length values with tail statistics standing in for liminf/limsup.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixProfile {
    pub n_grid: Vec<usize>,
    pub values: Vec<f64>,
    /// Number of trailing grid points the tail statistics cover.
    pub window: usize,
    pub tail_inf: f64,
    pub tail_sup: f64,
    /// Supremum over the whole grid.
    pub sup: f64,
}

impl PrefixProfile {
    /// `window = None` uses the last half of the grid (rounded up).
    pub fn new(n_grid: Vec<usize>, values: Vec<f64>, window: Option<usize>) -> Result<Self> {
        if n_grid.len() != values.len() {
            return Err(Error::InvalidArgument("grid and values differ in length".into()));
        }
        if n_grid.is_empty() {
            return Err(Error::InvalidArgument("empty profile".into()));
        }
        let window = window.unwrap_or(n_grid.len().div_ceil(2)).clamp(1, n_grid.len());
        let tail = &values[values.len() - window..];
        let tail_inf = tail.iter().copied().fold(f64::INFINITY, f64::min);
        let tail_sup = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(PrefixProfile { n_grid, values, window, tail_inf, tail_sup, sup })
    }

    /// CSV with columns `n,value`, six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in self.n_grid.iter().zip(&self.values) {
            out.push_str(&format!("{n},{v:.6}\n"));
        }
        out
    }
}

/// Validates a grid: non-empty, strictly ascending.
pub fn check_grid(grid: &[usize]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty n grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n grid must be strictly ascending".into()));
    }
    Ok(())
}

/// `step, 2*step, ..., n_max`.
pub fn linear_grid(n_max: usize, points: usize) -> Vec<usize> {
    let points = points.max(1);
    let step = (n_max / points).max(1);
    let mut grid: Vec<usize> = (1..=points).map(|i| i * step).filter(|&n| n <= n_max).collect();
    if grid.last() != Some(&n_max) {
        grid.push(n_max);
    }
    grid
}
