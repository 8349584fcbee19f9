//! The warped flat torus `e^{2g(y)}dx² + dy²` split as
//! `Q = span(e^{−g}∂_x)`, `L = span(∂_y)`.
//!
//! Both transverse operators separate over `x`-Fourier modes `e^{−ikx}`:
//! `D_L = i(∂_y + ½g′)` is unitarily equivalent to `i∂_y` and `D_Q` acts on
//! mode `n` as multiplication by `n e^{−g}`.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::clifford::CliffordModule;
use crate::parallel::{try_map, Execution};
use crate::spectral::{hermitian_eigensolve, Grid1D};
use crate::transverse_operator::{assemble_aq, assemble_dq, FirstOrderOperator, FrameField};
use crate::{CVector, Error, Result};

/// Smallest grid accepted by the spectrum routines.
pub const MIN_GRID: usize = 16;

/// `g(y) = c₀ + Σ_k (a_k cos ky + b_k sin ky)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TorusGeometry {
    constant: f64,
    /// `(a_k, b_k)` for `k = 1, 2, …`.
    harmonics: Vec<(f64, f64)>,
}

impl TorusGeometry {
    pub fn flat() -> Self {
        Self::default()
    }

    pub fn new(constant: f64, harmonics: Vec<(f64, f64)>) -> Result<Self> {
        if !constant.is_finite() || harmonics.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidInput("warping coefficients must be finite".into()));
        }
        Ok(Self { constant, harmonics })
    }

    /// Flat coefficient list `c₀, a₁, b₁, a₂, b₂, …`.
    pub fn from_coefficients(coeffs: &[f64]) -> Result<Self> {
        let Some((&c0, rest)) = coeffs.split_first() else {
            return Ok(Self::flat());
        };
        let mut harmonics: Vec<(f64, f64)> = rest.chunks(2).map(|p| (p[0], p.get(1).copied().unwrap_or(0.0))).collect();
        while harmonics.last() == Some(&(0.0, 0.0)) {
            harmonics.pop();
        }
        Self::new(c0, harmonics)
    }

    pub fn coefficients(&self) -> Vec<f64> {
        let mut out = vec![self.constant];
        for &(a, b) in &self.harmonics {
            out.push(a);
            out.push(b);
        }
        out
    }

    pub fn shifted(&self, by: f64) -> Result<Self> {
        Self::new(self.constant + by, self.harmonics.clone())
    }

    pub fn g(&self, y: f64) -> f64 {
        let mut s = self.constant;
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let ky = (k + 1) as f64 * y;
            if a != 0.0 {
                s += a * ky.cos();
            }
            if b != 0.0 {
                s += b * ky.sin();
            }
        }
        s
    }

    pub fn g_prime(&self, y: f64) -> f64 {
        let mut s = 0.0;
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let kf = (k + 1) as f64;
            let ky = kf * y;
            s += kf * (b * ky.cos() - a * ky.sin());
        }
        s
    }

    /// Periodic `y`-grid with the volume weights `(2π/N)·e^{g}`.
    pub fn grid(&self, n: usize) -> Result<Grid1D> {
        if n < MIN_GRID || !n.is_multiple_of(2) {
            return Err(Error::GridSize(n, MIN_GRID));
        }
        Grid1D::periodic_2pi(n)?.with_density(|y| self.g(y).exp())
    }

    pub fn q_frame(&self) -> Arc<dyn FrameField> {
        Arc::new(TorusFrame { geom: self.clone(), along_x: true })
    }

    pub fn l_frame(&self) -> Arc<dyn FrameField> {
        Arc::new(TorusFrame { geom: self.clone(), along_x: false })
    }

    /// `D_Q = i e^{−g} ∂_x` (here `H^L = 0`).
    pub fn operator_dq(&self) -> Result<FirstOrderOperator> {
        assemble_dq(self.q_frame(), &CliffordModule::standard(1), Arc::new(|_: &[f64]| Ok(vec![0.0])))
    }

    /// `D_L = i∂_y + (i/2)g′`, using `H^Q = −g′∂_y`.
    pub fn operator_dl(&self) -> Result<FirstOrderOperator> {
        let geom = self.clone();
        let hq = Arc::new(move |x: &[f64]| Ok(vec![-geom.g_prime(x[1])]));
        assemble_dq(self.l_frame(), &CliffordModule::standard(1), hq)
    }

    /// `A_L = i∂_y`, without the mean-curvature correction.
    pub fn operator_al(&self) -> Result<FirstOrderOperator> {
        assemble_aq(self.l_frame(), &CliffordModule::standard(1))
    }

    fn mode_matrix(&self, op: &FirstOrderOperator, mode: i64, n: usize) -> Result<crate::CMatrix> {
        let grid = self.grid(n)?;
        op.with_mode(0, mode as f64)?.discretize_hermitian(1, &[0.0, 0.0], &grid)
    }

    /// Eigenvalues of `D_L` restricted to the `x`-mode `mode`.
    pub fn spectrum_dl(&self, mode: i64, n: usize) -> Result<Vec<f64>> {
        let m = self.mode_matrix(&self.operator_dl()?, mode, n)?;
        Ok(hermitian_eigensolve(&m)?.eigenvalues)
    }

    /// Eigenvalues of `D_Q` on the `x`-mode `mode`: the values `n e^{−g(y_j)}`.
    pub fn spectrum_dq_band(&self, mode: i64, n: usize) -> Result<Vec<f64>> {
        let m = self.mode_matrix(&self.operator_dq()?, mode, n)?;
        Ok(hermitian_eigensolve(&m)?.eigenvalues)
    }

    pub fn spectra_dl(&self, modes: &[i64], n: usize, exec: Execution) -> Result<Vec<Vec<f64>>> {
        try_map(exec, modes, |&k| self.spectrum_dl(k, n))
    }

    pub fn spectra_dq(&self, modes: &[i64], n: usize, exec: Execution) -> Result<Vec<Vec<f64>>> {
        try_map(exec, modes, |&k| self.spectrum_dq_band(k, n))
    }

    /// `n·[min e^{−g}, max e^{−g}]`, from a fine sampling of `g`.
    pub fn band(&self, mode: i64, samples: usize) -> (f64, f64) {
        let vals: Vec<f64> =
            (0..samples).map(|j| mode as f64 * (-self.g(2.0 * PI * j as f64 / samples as f64)).exp()).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// `‖(D_L − λ)v‖/‖v‖` for the sampled section `v = e^{−iλy − g/2}`,
    /// using the collocation matrix on nodal values.
    pub fn dl_eigenfunction_residual(&self, eigenvalue: i64, n: usize) -> Result<f64> {
        let grid = self.grid(n)?;
        let m = self.operator_dl()?.discretize(1, &[0.0, 0.0], &grid)?;
        let lam = eigenvalue as f64;
        let v = CVector::from_iterator(
            n,
            grid.points().iter().map(|&y| Complex64::new(0.0, -lam * y).exp() * (-0.5 * self.g(y)).exp()),
        );
        let r = &m * &v - &v * Complex64::new(lam, 0.0);
        Ok(r.norm() / v.norm())
    }
}

/// Parses the shorthand `0.3sin,0.1cos2,0.5`: `<a>sin<k>` / `<a>cos<k>`
/// terms (`k` defaults to 1) and bare constants.
impl FromStr for TorusGeometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut constant = 0.0;
        let mut harmonics: Vec<(f64, f64)> = Vec::new();
        let bad = |t: &str| Error::InvalidInput(format!("cannot parse warping term '{t}'"));
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (pos, is_sin) = match (term.find("sin"), term.find("cos")) {
                (Some(p), None) => (p, true),
                (None, Some(p)) => (p, false),
                (None, None) => {
                    constant += term.parse::<f64>().map_err(|_| bad(term))?;
                    continue;
                }
                _ => return Err(bad(term)),
            };
            let coef_str = &term[..pos];
            let coef = match coef_str {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad(term))?,
            };
            let k_str = &term[pos + 3..];
            let k: usize = if k_str.is_empty() { 1 } else { k_str.parse().map_err(|_| bad(term))? };
            if k == 0 {
                return Err(bad(term));
            }
            if harmonics.len() < k {
                harmonics.resize(k, (0.0, 0.0));
            }
            if is_sin {
                harmonics[k - 1].1 += coef;
            } else {
                harmonics[k - 1].0 += coef;
            }
        }
        Self::new(constant, harmonics)
    }
}

struct TorusFrame {
    geom: TorusGeometry,
    along_x: bool,
}

impl FrameField for TorusFrame {
    fn chart(&self) -> &str {
        if self.along_x {
            "torus/Q"
        } else {
            "torus/L"
        }
    }

    fn dim(&self) -> usize {
        2
    }

    fn rank(&self) -> usize {
        1
    }

    fn frame(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let row = if self.along_x { [(-self.geom.g(x[1])).exp(), 0.0] } else { [0.0, 1.0] };
        Ok(DMatrix::from_row_slice(1, 2, &row))
    }

    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(DMatrix::from_diagonal(&DVector::from_vec(vec![(2.0 * self.geom.g(x[1])).exp(), 1.0])))
    }
}
