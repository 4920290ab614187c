//! One-dimensional minimisation by dense grid plus golden section.

use crate::error::{check, Result};

const GRID_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgMin {
    pub x: f64,
    pub value: f64,
    /// Another local minimum of the grid lies within `2·tol` of the best value.
    pub degenerate: bool,
}

/// Minimise `f` on `[lo, hi]`: scan a 1000-point grid, then refine the best
/// bracket by golden-section search until it is narrower than `tol`.
pub fn grid_argmin<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<ArgMin> {
    check(lo < hi && lo.is_finite() && hi.is_finite(), "interval", "lo < hi", hi - lo)?;
    check(tol > 0.0, "tol", "tol > 0", tol)?;
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..GRID_POINTS).map(|i| lo + i as f64 * step).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let best = (0..GRID_POINTS)
        .min_by(|&i, &j| ys[i].total_cmp(&ys[j]))
        .expect("grid is non-empty");

    let is_local_min = |i: usize| {
        let left = i == 0 || ys[i] <= ys[i - 1];
        let right = i + 1 == GRID_POINTS || ys[i] <= ys[i + 1];
        left && right
    };
    let degenerate = (0..GRID_POINTS)
        .filter(|&i| i.abs_diff(best) > 1 && is_local_min(i))
        .any(|i| (ys[i] - ys[best]).abs() <= 2.0 * tol);

    let (mut a, mut b) = (xs[best.saturating_sub(1)], xs[(best + 1).min(GRID_POINTS - 1)]);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let value = f(x);
    let (x, value) = if value <= ys[best] { (x, value) } else { (xs[best], ys[best]) };
    Ok(ArgMin { x, value, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let m = grid_argmin(|x| (x - 0.3137).powi(2), 0.0, 1.0, 1e-10).unwrap();
        assert!((m.x - 0.3137).abs() < 1e-8);
        assert!(!m.degenerate);
    }

    #[test]
    fn endpoint_minimum() {
        let m = grid_argmin(|x| x, 0.0, 1.0, 1e-10).unwrap();
        assert!(m.x.abs() < 1e-9);
    }

    #[test]
    fn flags_degenerate_minima() {
        let m = grid_argmin(|x| (x - 0.25).powi(2) * (x - 0.75).powi(2), 0.0, 1.0, 1e-9).unwrap();
        assert!(m.degenerate);
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(grid_argmin(|x| x, 1.0, 0.0, 1e-6).is_err());
    }
}
