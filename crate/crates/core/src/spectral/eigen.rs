use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{max_abs, CMatrix, Error, Result};

/// Relative Hermitian defect accepted by [`hermitian_eigensolve`].
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

const MAX_QL_ITERATIONS: usize = 64;

/// Sorted eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// `max |M − M†|` entrywise.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Full spectrum of a dense Hermitian matrix.
///
/// Householder reduction to Hermitian tridiagonal form, a diagonal unitary
/// that makes the off-diagonal real, then implicit QL with Wilkinson-type
/// shifts on the real tridiagonal matrix.
pub fn hermitian_eigensolve(m: &CMatrix) -> Result<HermitianSpectrum> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { what: "square matrix", expected: n, found: m.ncols() });
    }
    if n == 0 {
        return Ok(HermitianSpectrum { eigenvalues: vec![], eigenvectors: CMatrix::zeros(0, 0) });
    }
    let defect = hermitian_defect(m);
    let scale = max_abs(m);
    if defect > HERMITIAN_INPUT_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { defect });
    }

    let mut a = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut q = CMatrix::identity(n, n);
    tridiagonalize(&mut a, &mut q);

    let mut diag: Vec<f64> = (0..n).map(|k| a[(k, k)].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let e = a[(k + 1, k)];
        let r = e.norm();
        off[k] = r;
        phases[k + 1] = if r > 0.0 { phases[k] * (e / r) } else { phases[k] };
    }

    let mut z = DMatrix::<f64>::identity(n, n);
    tridiagonal_ql(&mut diag, &mut off, &mut z)?;

    // Eigenvectors of the input are Q · diag(phases) · Z.
    let mut qd = q;
    for (j, ph) in phases.iter().enumerate() {
        for i in 0..n {
            qd[(i, j)] *= ph;
        }
    }
    let zc = z.map(|x| Complex64::new(x, 0.0));
    let vecs = qd * zc;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    Ok(HermitianSpectrum { eigenvalues, eigenvectors })
}

/// In-place Householder reduction `a ← Q† a Q` to Hermitian tridiagonal form,
/// accumulating `q ← q Q`.
fn tridiagonalize(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<Complex64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vnorm;
        }

        // Trailing block update S ← H S H with H = I − 2 v v†.
        let off = k + 1;
        let p: Vec<Complex64> = (0..len).map(|i| (0..len).map(|j| a[(off + i, off + j)] * v[j]).sum()).collect();
        let kappa: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();
        for i in 0..len {
            for j in 0..len {
                a[(off + i, off + j)] -= (v[i] * w[j].conj() + w[i] * v[j].conj()) * 2.0;
            }
        }
        a[(off, k)] = alpha;
        a[(k, off)] = alpha.conj();
        for i in 1..len {
            a[(off + i, k)] = Complex64::new(0.0, 0.0);
            a[(k, off + i)] = Complex64::new(0.0, 0.0);
        }

        for r in 0..n {
            let qv: Complex64 = (0..len).map(|j| q[(r, off + j)] * v[j]).sum();
            for j in 0..len {
                q[(r, off + j)] -= qv * v[j].conj() * 2.0;
            }
        }
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` couples rows `i` and `i+1` (`e[n-1]` is
/// scratch). On return `d` holds eigenvalues and the columns of `z` have been
/// rotated into eigenvectors.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut DMatrix<f64>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::InvalidInput("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zf = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * zf;
                    z[(k, i)] = c * z[(k, i)] - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
