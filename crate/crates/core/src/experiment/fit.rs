//! Least-squares helpers for scan summaries.

use nalgebra::{DMatrix, DVector};

/// Polynomial coefficients in increasing order of power, fitted by least
/// squares. `None` when there are fewer points than coefficients.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Option<Vec<f64>> {
    let n = x.len();
    if n != y.len() || n < degree + 1 {
        return None;
    }
    let vander = DMatrix::from_fn(n, degree + 1, |i, j| x[i].powi(j as i32));
    let rhs = DVector::from_column_slice(y);
    let coeffs = vander.svd(true, true).solve(&rhs, 1e-14).ok()?;
    Some(coeffs.iter().copied().collect())
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    polyfit(&lx, &ly, 1).map(|c| c[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_quadratic() {
        let x: Vec<f64> = (0..11).map(|i| -0.05 + 0.01 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| 1.5 - 0.25 * t + 3.0 * t * t).collect();
        let c = polyfit(&x, &y, 2).unwrap();
        assert!((c[0] - 1.5).abs() < 1e-12);
        assert!((c[1] + 0.25).abs() < 1e-10);
        assert!((c[2] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn power_law_slope() {
        let x = [1.0, 10.0, 100.0, 1000.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 / v.sqrt()).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 0.5).abs() < 1e-12);
        assert!(loglog_slope(&[1.0, -1.0], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn too_few_points() {
        assert!(polyfit(&[1.0, 2.0], &[1.0, 2.0], 2).is_none());
    }
}
