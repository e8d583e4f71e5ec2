//! One-dimensional maximization of concave objectives.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
#[allow(unused_imports)]
use crate::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Coarse grid size; points are spaced geometrically from the lower end.
    pub grid_points: usize,
    /// Width of the bracket at which golden-section refinement stops.
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points: 64,
            tolerance: 1e-10,
            max_iters: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub sup: f64,
    pub argmax: f64,
    /// Coarse grid `(s, f(s))`, strictly increasing in `s`.
    pub grid: Vec<(f64, f64)>,
}

fn checked(f: &dyn Fn(f64) -> Result<f64>, s: f64) -> Result<f64> {
    let v = f(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteObjective { at: s })
    }
}

/// Geometric grid of `n ≥ 2` points on `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * ratio.powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// `sup_{s ∈ [lo, hi]} f(s)` for concave `f`: coarse grid then golden-section search around the best cell.
pub fn sup_concave(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64, config: &SearchConfig) -> Result<SearchOutcome> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(invalid!(
            "search interval must satisfy 0 < lo < hi < ∞, got ({lo}, {hi}]"
        ));
    }
    if config.grid_points < 3 {
        return Err(invalid!("search grid needs at least 3 points"));
    }
    let xs = geometric_grid(lo, hi, config.grid_points);
    let mut grid = Vec::with_capacity(xs.len());
    for &s in &xs {
        grid.push((s, checked(f, s)?));
    }
    let k = (0..grid.len())
        .max_by(|&i, &j| grid[i].1.partial_cmp(&grid[j].1).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    let (mut best_s, mut best) = grid[k];

    let mut a = xs[k.saturating_sub(1)];
    let mut b = xs[(k + 1).min(xs.len() - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = checked(f, c)?;
    let mut fd = checked(f, d)?;
    for _ in 0..config.max_iters {
        if (b - a).abs() <= config.tolerance {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = checked(f, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = checked(f, d)?;
        }
    }
    for (s, v) in [(c, fc), (d, fd)] {
        if v > best {
            best = v;
            best_s = s;
        }
    }
    Ok(SearchOutcome {
        sup: best,
        argmax: best_s,
        grid,
    })
}
