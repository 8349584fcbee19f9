use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{CMatrix, Error, Result};

/// Fourier spectral differentiation matrix on the grid `y_j = 2πj/N`.
///
/// Built as `F⁻¹ diag(ik) F` with wavenumbers `k ∈ {−N/2, …, N/2−1}`, so it is
/// exactly anti-Hermitian, differentiates trigonometric polynomials of degree
/// `≤ N/2−1` exactly, and `−i·D` has spectrum `{−N/2, …, N/2−1}`.
pub fn fourier_diff_matrix(n: usize) -> Result<CMatrix> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::GridSize(n, 4));
    }
    let half = (n / 2) as i64;
    // The matrix is circulant: entry (j, l) depends on (j − l) mod N only.
    let column: Vec<Complex64> = (0..n)
        .map(|d| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in -half..half {
                let phase = 2.0 * PI * ((k * d as i64).rem_euclid(n as i64)) as f64 / n as f64;
                acc += Complex64::new(0.0, k as f64) * Complex64::from_polar(1.0, phase);
            }
            acc / n as f64
        })
        .collect();
    Ok(CMatrix::from_fn(n, n, |j, l| column[(j + n - l) % n]))
}

/// Second-order centred differences on an arbitrary increasing grid with
/// zero extension past both ends: row `j` is `(u_{j+1} − u_{j−1})/(x_{j+1} −
/// x_{j−1})`, and the end rows use the single interior neighbour over the
/// doubled spacing. For uniform spacing the matrix is exactly antisymmetric.
pub fn centered_diff_matrix(points: &[f64]) -> Result<CMatrix> {
    let n = points.len();
    if n < 3 {
        return Err(Error::GridSize(n, 3));
    }
    let mut d = CMatrix::zeros(n, n);
    for j in 0..n {
        let left = if j == 0 { points[0] - (points[1] - points[0]) } else { points[j - 1] };
        let right = if j + 1 == n { points[n - 1] + (points[n - 1] - points[n - 2]) } else { points[j + 1] };
        let inv = 1.0 / (right - left);
        if j + 1 < n {
            d[(j, j + 1)] = Complex64::new(inv, 0.0);
        }
        if j > 0 {
            d[(j, j - 1)] = Complex64::new(-inv, 0.0);
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::hermitian_eigensolve;
    use crate::{max_abs, CVector, I};

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
    }

    #[test]
    fn differentiates_cosine() {
        let n = 32;
        let d = fourier_diff_matrix(n).unwrap();
        let y = grid(n);
        let u = CVector::from_iterator(n, y.iter().map(|&t| Complex64::new(t.cos(), 0.0)));
        let du = &d * u;
        for (j, &t) in y.iter().enumerate() {
            assert!((du[j] - Complex64::new(-t.sin(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn kills_constants() {
        let d = fourier_diff_matrix(16).unwrap();
        let u = CVector::from_element(16, Complex64::new(3.5, 0.0));
        assert!((d * u).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn exact_up_to_degree_half_minus_one() {
        let n = 16;
        let d = fourier_diff_matrix(n).unwrap();
        let y = grid(n);
        for k in 1..(n / 2) as i32 {
            let u = CVector::from_iterator(n, y.iter().map(|&t| (k as f64 * t).sin().into()));
            let du = &d * u;
            for (j, &t) in y.iter().enumerate() {
                let exact = k as f64 * (k as f64 * t).cos();
                assert!((du[j] - Complex64::new(exact, 0.0)).norm() < 1e-11, "k={k}");
            }
        }
    }

    #[test]
    fn minus_i_d_has_integer_spectrum() {
        // Oracle: the DFT diagonalises D, so the spectrum of −iD is the
        // wavenumber set {−N/2, …, N/2−1}.
        let n = 24;
        let d = fourier_diff_matrix(n).unwrap();
        assert!(max_abs(&(&d + d.adjoint())) < 1e-13);
        let spec = hermitian_eigensolve(&(d * (-I))).unwrap();
        let expected: Vec<f64> = (-(n as i64) / 2..(n as i64) / 2).map(|k| k as f64).collect();
        for (got, want) in spec.eigenvalues.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn odd_size_rejected() {
        assert_eq!(fourier_diff_matrix(9).unwrap_err(), Error::GridSize(9, 4));
    }

    #[test]
    fn centered_differences_second_order() {
        let coarse: Vec<f64> = (0..41).map(|j| 0.05 * j as f64).collect();
        let fine: Vec<f64> = (0..81).map(|j| 0.025 * j as f64).collect();
        let err = |pts: &[f64]| {
            let d = centered_diff_matrix(pts).unwrap();
            let u = CVector::from_iterator(pts.len(), pts.iter().map(|&x| x.exp().into()));
            let du = d * u;
            (1..pts.len() - 1).map(|j| (du[j].re - pts[j].exp()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(&coarse) / err(&fine);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        let d = centered_diff_matrix(&coarse).unwrap();
        assert!(max_abs(&(&d + d.transpose())) < 1e-12);
    }
}
