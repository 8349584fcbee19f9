use std::f64::consts::PI;

use crate::{CMatrix, Error, Result};

use super::fourier::{centered_diff_matrix, fourier_diff_matrix};

/// Ordered sample points with positive quadrature weights.
///
/// Weights may include a density factor (e.g. a Riemannian volume element),
/// in which case the discrete inner product is `Σ w_j conj(u_j) v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    points: Vec<f64>,
    weights: Vec<f64>,
    periodic: bool,
    period: Option<f64>,
}

impl Grid1D {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                what: "grid weights",
                expected: points.len(),
                found: weights.len(),
            });
        }
        if points.len() < 2 {
            return Err(Error::InvalidInput("grid needs at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("grid points must be strictly increasing".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Self { points, weights, periodic: false, period: None })
    }

    /// `n` equispaced points `j·period/n` on one period with the trapezoid
    /// (equal) weights. `n` must be even and at least 4.
    pub fn periodic(n: usize, period: f64) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::GridSize(n, 4));
        }
        if !(period > 0.0) {
            return Err(Error::InvalidInput("period must be positive".into()));
        }
        let points = (0..n).map(|j| period * j as f64 / n as f64).collect();
        Ok(Self { points, weights: vec![period / n as f64; n], periodic: true, period: Some(period) })
    }

    /// Periodic grid on `[0, 2π)`.
    pub fn periodic_2pi(n: usize) -> Result<Self> {
        Self::periodic(n, 2.0 * PI)
    }

    /// Multiply each weight by `density(x_j)`; the density must stay positive.
    pub fn with_density(mut self, density: impl Fn(f64) -> f64) -> Result<Self> {
        for (w, &x) in self.weights.iter_mut().zip(&self.points) {
            *w *= density(x);
        }
        if self.weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Differentiation matrix matching the grid: Fourier spectral for
    /// periodic grids, second-order centred differences otherwise.
    pub fn diff_matrix(&self) -> Result<CMatrix> {
        match self.period {
            Some(period) => {
                let d = fourier_diff_matrix(self.len())?;
                Ok(d * num_complex::Complex64::new(2.0 * PI / period, 0.0))
            }
            None => centered_diff_matrix(&self.points),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_weights_and_order() {
        assert_eq!(Grid1D::new(vec![0.0, 1.0], vec![1.0, 0.0]), Err(Error::NonPositiveWeight));
        assert!(Grid1D::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Grid1D::periodic_2pi(6).unwrap().with_density(|x| x.sin()).is_err());
    }

    #[test]
    fn periodic_grid_shape() {
        assert_eq!(Grid1D::periodic_2pi(7), Err(Error::GridSize(7, 4)));
        let g = Grid1D::periodic_2pi(8).unwrap();
        assert_eq!(g.len(), 8);
        assert!((g.weights().iter().sum::<f64>() - 2.0 * PI).abs() < 1e-14);
        assert!((g.points()[4] - PI).abs() < 1e-15);
    }
}
