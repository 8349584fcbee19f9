use num_complex::Complex64;

use crate::CMatrix;

const MAX_SWEEPS: usize = 60;

/// Singular values in descending order via one-sided (Hestenes) Jacobi.
///
/// Column norms are computed directly from the rotated columns, so tiny
/// singular values keep full relative accuracy; this matters when deciding
/// whether a symbol is singular at the `1e-10` level.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    // Work on the orientation with fewer columns.
    let mut a = if cols > rows { m.adjoint() } else { m.clone() };
    let n = a.ncols();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = a.column(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a.column(q).iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a.column(p).iter().zip(a.column(q).iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..a.nrows() {
                    let xp = a[(i, p)];
                    let xq = a[(i, q)] * phase.conj();
                    a[(i, p)] = xp * c - xq * s;
                    a[(i, q)] = (xp * s + xq * c) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Smallest singular value of a square matrix (its distance to singularity).
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::hermitian_eigensolve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_eigenvalues_of_gram_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(r, c) in &[(5, 5), (7, 3), (3, 6)] {
            let m =
                CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let sv = singular_values(&m);
            let gram = if c <= r { m.adjoint() * &m } else { &m * m.adjoint() };
            let mut ev = hermitian_eigensolve(&gram).unwrap().eigenvalues;
            ev.reverse();
            for (s, e) in sv.iter().zip(&ev) {
                assert!((s * s - e).abs() < 1e-10, "{s} {e}");
            }
        }
    }

    #[test]
    fn tiny_singular_value_resolved() {
        let eps = 6.0e-17;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.0, 0.0), Complex64::new(0.0, eps), Complex64::new(0.0, eps), Complex64::new(0.0, 0.0)],
        );
        let s = smallest_singular_value(&m);
        assert!((s - eps).abs() < 1e-30);
        let rank_one = CMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0].map(|x| Complex64::new(x, 0.0)));
        assert!(smallest_singular_value(&rank_one) < 1e-14);
    }
}
