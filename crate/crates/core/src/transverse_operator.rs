//! Chartwise first-order operators `Σ_k A^k(x) ∂_k + B(x)`.
//!
//! [`assemble_aq`] builds `A_Q = Σ_j c(f_j) ∇_{f_j}` from a [`FrameField`];
//! [`assemble_dq`] subtracts `½ c(H)` for a supplied mean-curvature field.
//! Mode reductions replace a coordinate derivative by a constant (or by a
//! combination of the remaining derivatives), and a fully reduced operator
//! can be turned into a dense matrix on a [`Grid1D`].

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::CliffordModule;
use crate::spectral::{hermitian_defect, smallest_singular_value, Grid1D};
use crate::{max_abs, CMatrix, CVector, Error, Result};

/// Frame Gram-matrix deviation tolerated by [`assemble_aq`].
pub const FRAME_TOL: f64 = 1e-8;

/// Coefficients of the operator at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorCoefficients {
    /// `A^k(x)`, one per coordinate.
    pub derivative: Vec<CMatrix>,
    /// `B(x)`.
    pub zeroth: CMatrix,
}

type CoefficientFn = dyn Fn(&[f64]) -> Result<OperatorCoefficients> + Send + Sync;

#[derive(Clone)]
pub struct FirstOrderOperator {
    chart: String,
    dim: usize,
    fiber_dim: usize,
    coefficients: Arc<CoefficientFn>,
}

impl fmt::Debug for FirstOrderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FirstOrderOperator")
            .field("chart", &self.chart)
            .field("dim", &self.dim)
            .field("fiber_dim", &self.fiber_dim)
            .finish_non_exhaustive()
    }
}

impl FirstOrderOperator {
    /// `coefficients` must be pure and return `derivative.len() == dim`,
    /// all matrices `fiber_dim × fiber_dim`; this is checked on every call.
    pub fn new<F>(chart: impl Into<String>, dim: usize, fiber_dim: usize, coefficients: F) -> Self
    where
        F: Fn(&[f64]) -> Result<OperatorCoefficients> + Send + Sync + 'static,
    {
        Self { chart: chart.into(), dim, fiber_dim, coefficients: Arc::new(coefficients) }
    }

    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn coefficients(&self, x: &[f64]) -> Result<OperatorCoefficients> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { what: "chart point", expected: self.dim, found: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("chart point must be finite".into()));
        }
        let c = (self.coefficients)(x)?;
        let square = |m: &CMatrix| m.nrows() == self.fiber_dim && m.ncols() == self.fiber_dim;
        if c.derivative.len() != self.dim || !c.derivative.iter().all(square) || !square(&c.zeroth) {
            return Err(Error::DimensionMismatch {
                what: "operator coefficients",
                expected: self.dim,
                found: c.derivative.len(),
            });
        }
        let finite = |m: &CMatrix| m.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !c.derivative.iter().all(finite) || !finite(&c.zeroth) {
            return Err(Error::SingularPoint(format!("non-finite coefficient at {x:?}")));
        }
        Ok(c)
    }

    /// `σ(x, ξ) = Σ_k A^k(x) ξ_k` (no factor of `i`).
    pub fn principal_symbol(&self, x: &[f64], xi: &[f64]) -> Result<CMatrix> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch { what: "covector", expected: self.dim, found: xi.len() });
        }
        let c = self.coefficients(x)?;
        let mut s = CMatrix::zeros(self.fiber_dim, self.fiber_dim);
        for (a, &k) in c.derivative.iter().zip(xi) {
            s += a * Complex64::new(k, 0.0);
        }
        Ok(s)
    }

    /// Smallest singular value of the principal symbol.
    pub fn symbol_smallest_singular_value(&self, x: &[f64], xi: &[f64]) -> Result<f64> {
        Ok(smallest_singular_value(&self.principal_symbol(x, xi)?))
    }

    /// Replace `∂_k` by `constant + Σ (j, a) a·∂_j`.
    pub fn substitute_derivative(&self, k: usize, constant: Complex64, along: &[(usize, Complex64)]) -> Result<Self> {
        if k >= self.dim || along.iter().any(|&(j, _)| j >= self.dim || j == k) {
            return Err(Error::InvalidInput(format!("substitution for ∂_{k} out of range in dimension {}", self.dim)));
        }
        let inner = self.clone();
        let along = along.to_vec();
        Ok(Self::new(self.chart.clone(), self.dim, self.fiber_dim, move |x| {
            let mut c = inner.coefficients(x)?;
            let ak = std::mem::replace(&mut c.derivative[k], CMatrix::zeros(inner.fiber_dim, inner.fiber_dim));
            c.zeroth += &ak * constant;
            for &(j, a) in &along {
                c.derivative[j] += &ak * a;
            }
            Ok(c)
        }))
    }

    /// Restrict to functions `∝ e^{−i·weight·x_k}`, i.e. `∂_k ↦ −i·weight`.
    pub fn with_mode(&self, k: usize, weight: f64) -> Result<Self> {
        self.substitute_derivative(k, Complex64::new(0.0, -weight), &[])
    }

    /// Add a zeroth-order term.
    pub fn plus_zeroth<F>(&self, term: F) -> Self
    where
        F: Fn(&[f64]) -> Result<CMatrix> + Send + Sync + 'static,
    {
        let inner = self.clone();
        Self::new(self.chart.clone(), self.dim, self.fiber_dim, move |x| {
            let mut c = inner.coefficients(x)?;
            c.zeroth += term(x)?;
            Ok(c)
        })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let inner = self.clone();
        Self::new(self.chart.clone(), self.dim, self.fiber_dim, move |x| {
            let mut c = inner.coefficients(x)?;
            for a in &mut c.derivative {
                *a *= factor;
            }
            c.zeroth *= factor;
            Ok(c)
        })
    }

    /// Apply to a section by fourth-order central differences with step
    /// `steps[k]` along coordinate `k`. Directions with a zero coefficient
    /// are not sampled.
    pub fn apply_numerically<F>(&self, x: &[f64], psi: F, steps: &[f64]) -> Result<CVector>
    where
        F: Fn(&[f64]) -> CVector,
    {
        if steps.len() != self.dim {
            return Err(Error::DimensionMismatch { what: "difference steps", expected: self.dim, found: steps.len() });
        }
        let c = self.coefficients(x)?;
        let mut out = &c.zeroth * psi(x);
        for (k, a) in c.derivative.iter().enumerate() {
            if max_abs(a) == 0.0 {
                continue;
            }
            let h = steps[k];
            let at = |s: f64| {
                let mut y = x.to_vec();
                y[k] += s * h;
                psi(&y)
            };
            let d = (at(-2.0) - at(-1.0) * Complex64::new(8.0, 0.0) + at(1.0) * Complex64::new(8.0, 0.0) - at(2.0))
                / Complex64::new(12.0 * h, 0.0);
            out += a * d;
        }
        Ok(out)
    }

    fn reduced_samples(&self, axis: usize, base: &[f64], grid: &Grid1D) -> Result<Vec<OperatorCoefficients>> {
        if axis >= self.dim {
            return Err(Error::InvalidInput(format!("axis {axis} out of range")));
        }
        grid.points()
            .iter()
            .map(|&t| {
                let mut x = base.to_vec();
                x[axis] = t;
                let c = self.coefficients(&x)?;
                if let Some(k) = (0..self.dim).find(|&k| k != axis && max_abs(&c.derivative[k]) != 0.0) {
                    return Err(Error::InvalidInput(format!("derivative along coordinate {k} has not been reduced")));
                }
                Ok(c)
            })
            .collect()
    }

    /// Collocation matrix `A_i D_ij + δ_ij B_i` acting on nodal values,
    /// ordered node-major (`index = node·fiber_dim + component`).
    pub fn discretize(&self, axis: usize, base: &[f64], grid: &Grid1D) -> Result<CMatrix> {
        let samples = self.reduced_samples(axis, base, grid)?;
        let d = grid.diff_matrix()?;
        let (n, f) = (grid.len(), self.fiber_dim);
        let mut m = CMatrix::zeros(n * f, n * f);
        for i in 0..n {
            for j in 0..n {
                let mut block = &samples[i].derivative[axis] * d[(i, j)];
                if i == j {
                    block += &samples[i].zeroth;
                }
                m.view_mut((i * f, j * f), (f, f)).copy_from(&block);
            }
        }
        Ok(m)
    }

    /// Matrix of the operator in the orthonormal basis of the weighted
    /// inner product `Σ_i w_i ⟨u_i, v_i⟩`, in split form
    /// `½(A_i + A_j) D_ij + δ_ij Z_i`, `Z = B − A·w′/(2w) − ½A′`.
    ///
    /// When `A` is skew-Hermitian the split part is exactly Hermitian, so
    /// the result is Hermitian up to the discretisation error of `Z`; a
    /// formally non-self-adjoint operator shows up as the skew part of `Z`.
    pub fn discretize_hermitian(&self, axis: usize, base: &[f64], grid: &Grid1D) -> Result<CMatrix> {
        let samples = self.reduced_samples(axis, base, grid)?;
        let d = grid.diff_matrix()?;
        let (n, f) = (grid.len(), self.fiber_dim);
        let log_w = CVector::from_iterator(n, grid.weights().iter().map(|w| Complex64::new(w.ln(), 0.0)));
        let dlog_w = &d * log_w;
        let mut da = vec![CMatrix::zeros(f, f); n];
        for r in 0..f {
            for c in 0..f {
                let col = CVector::from_iterator(n, samples.iter().map(|s| s.derivative[axis][(r, c)]));
                let dcol = &d * col;
                for (i, v) in dcol.iter().enumerate() {
                    da[i][(r, c)] = *v;
                }
            }
        }
        let half = Complex64::new(0.5, 0.0);
        let mut m = CMatrix::zeros(n * f, n * f);
        for i in 0..n {
            let ai = &samples[i].derivative[axis];
            for j in 0..n {
                let mut block = (ai + &samples[j].derivative[axis]) * (half * d[(i, j)]);
                if i == j {
                    block += &samples[i].zeroth - ai * (half * dlog_w[i].re) - &da[i] * half;
                }
                m.view_mut((i * f, j * f), (f, f)).copy_from(&block);
            }
        }
        Ok(m)
    }
}

/// `‖(M − M†)/2‖_max`.
pub fn skew_part_norm(m: &CMatrix) -> f64 {
    0.5 * hermitian_defect(m)
}

/// Nodal values ↔ weighted-orthonormal coefficients `v_i = √w_i u_i`.
pub fn to_weighted(grid: &Grid1D, fiber_dim: usize, u: &CVector) -> Result<CVector> {
    if u.len() != grid.len() * fiber_dim {
        return Err(Error::DimensionMismatch {
            what: "nodal vector",
            expected: grid.len() * fiber_dim,
            found: u.len(),
        });
    }
    Ok(CVector::from_iterator(u.len(), u.iter().enumerate().map(|(i, z)| z * grid.weights()[i / fiber_dim].sqrt())))
}

/// Chartwise orthonormal frame `f_1..f_q` of a distribution.
pub trait FrameField: Send + Sync {
    fn chart(&self) -> &str;
    /// Number of coordinates.
    fn dim(&self) -> usize;
    /// Rank `q` of the distribution.
    fn rank(&self) -> usize;
    /// `q × dim` matrix: row `j` holds the coordinate components of `f_j`.
    fn frame(&self, x: &[f64]) -> Result<DMatrix<f64>>;
    /// Coordinate metric `g_kl(x)`.
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>>;
    /// Zeroth-order part of `Σ_j c(f_j) ∇^E_{f_j}` in the chosen
    /// trivialisation; `None` for the trivial connection.
    fn connection_term(&self, _x: &[f64]) -> Result<Option<CMatrix>> {
        Ok(None)
    }
}

fn frame_at(frames: &dyn FrameField, x: &[f64]) -> Result<DMatrix<f64>> {
    let f = frames.frame(x)?;
    let g = frames.metric(x)?;
    if f.shape() != (frames.rank(), frames.dim()) || g.shape() != (frames.dim(), frames.dim()) {
        return Err(Error::DimensionMismatch { what: "frame components", expected: frames.dim(), found: f.ncols() });
    }
    let gram = &f * g * f.transpose();
    let deviation = (gram - DMatrix::identity(frames.rank(), frames.rank())).abs().max();
    if !(deviation <= FRAME_TOL) {
        return Err(Error::NonOrthonormalFrame { deviation });
    }
    Ok(f)
}

/// `A_Q = Σ_j c(f_j) ∇^E_{f_j}`: `A^k(x) = Σ_j f_j^k(x) c_j`.
///
/// The frame is checked for orthonormality at every evaluation point.
pub fn assemble_aq(frames: Arc<dyn FrameField>, module: &CliffordModule) -> Result<FirstOrderOperator> {
    if module.rank() != frames.rank() {
        return Err(Error::DimensionMismatch {
            what: "Clifford module rank",
            expected: frames.rank(),
            found: module.rank(),
        });
    }
    let module = module.clone();
    let (dim, fiber) = (frames.dim(), module.fiber_dim());
    let chart = frames.chart().to_string();
    Ok(FirstOrderOperator::new(chart, dim, fiber, move |x| {
        let f = frame_at(frames.as_ref(), x)?;
        let derivative = (0..dim)
            .map(|k| module.action(&f.column(k).iter().copied().collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let zeroth = frames.connection_term(x)?.unwrap_or_else(|| CMatrix::zeros(fiber, fiber));
        Ok(OperatorCoefficients { derivative, zeroth })
    }))
}

/// Mean curvature of the complementary distribution, in `f`-frame
/// coordinates.
pub type MeanCurvatureFn = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

/// `D_Q = A_Q − ½ c(H)`.
pub fn assemble_dq(
    frames: Arc<dyn FrameField>,
    module: &CliffordModule,
    mean_curvature: Arc<MeanCurvatureFn>,
) -> Result<FirstOrderOperator> {
    let aq = assemble_aq(frames, module)?;
    let module = module.clone();
    Ok(aq.plus_zeroth(move |x| Ok(module.action(&mean_curvature(x)?)? * Complex64::new(-0.5, 0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::I;

    /// `span(e^{−g}∂_x)` or `span(∂_y)` on the warped torus, `g = 0.3 sin y`.
    struct Torus {
        along_x: bool,
    }

    fn g(y: f64) -> f64 {
        0.3 * y.sin()
    }

    impl FrameField for Torus {
        fn chart(&self) -> &str {
            "torus"
        }
        fn dim(&self) -> usize {
            2
        }
        fn rank(&self) -> usize {
            1
        }
        fn frame(&self, x: &[f64]) -> Result<DMatrix<f64>> {
            Ok(if self.along_x {
                DMatrix::from_row_slice(1, 2, &[(-g(x[1])).exp(), 0.0])
            } else {
                DMatrix::from_row_slice(1, 2, &[0.0, 1.0])
            })
        }
        fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
            Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![(2.0 * g(x[1])).exp(), 1.0])))
        }
    }

    struct Skewed;
    impl FrameField for Skewed {
        fn chart(&self) -> &str {
            "bad"
        }
        fn dim(&self) -> usize {
            2
        }
        fn rank(&self) -> usize {
            1
        }
        fn frame(&self, _x: &[f64]) -> Result<DMatrix<f64>> {
            Ok(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]))
        }
        fn metric(&self, _x: &[f64]) -> Result<DMatrix<f64>> {
            Ok(DMatrix::identity(2, 2))
        }
    }

    fn c1() -> CliffordModule {
        CliffordModule::standard(1)
    }

    fn d_l() -> FirstOrderOperator {
        let hq = Arc::new(|x: &[f64]| Ok(vec![-0.3 * x[1].cos()]));
        assemble_dq(Arc::new(Torus { along_x: false }), &c1(), hq).unwrap()
    }

    #[test]
    fn torus_a_q_and_a_l() {
        let aq = assemble_aq(Arc::new(Torus { along_x: true }), &c1()).unwrap();
        let al = assemble_aq(Arc::new(Torus { along_x: false }), &c1()).unwrap();
        for &y in &[0.0, 1.3, 4.4] {
            let c = aq.coefficients(&[0.2, y]).unwrap();
            assert!((c.derivative[0][(0, 0)] - I * (-g(y)).exp()).norm() < 1e-15);
            assert_eq!(c.derivative[1][(0, 0)], Complex64::new(0.0, 0.0));
            let c = al.coefficients(&[0.2, y]).unwrap();
            assert_eq!(c.derivative[1][(0, 0)], I);
        }
    }

    #[test]
    fn torus_d_l_has_half_g_prime() {
        let c = d_l().coefficients(&[0.0, 0.5]).unwrap();
        assert!((c.zeroth[(0, 0)] - I * 0.15 * 0.5f64.cos()).norm() < 1e-15);
    }

    #[test]
    fn zero_mean_curvature_leaves_a_q() {
        let frames: Arc<dyn FrameField> = Arc::new(Torus { along_x: true });
        let aq = assemble_aq(frames.clone(), &c1()).unwrap();
        let dq = assemble_dq(frames, &c1(), Arc::new(|_: &[f64]| Ok(vec![0.0]))).unwrap();
        assert_eq!(aq.coefficients(&[1.0, 2.0]).unwrap(), dq.coefficients(&[1.0, 2.0]).unwrap());
    }

    #[test]
    fn non_orthonormal_frame_rejected() {
        let op = assemble_aq(Arc::new(Skewed), &c1()).unwrap();
        assert!(matches!(op.coefficients(&[0.0, 0.0]), Err(Error::NonOrthonormalFrame { .. })));
        assert!(assemble_aq(Arc::new(Skewed), &CliffordModule::standard(2)).is_err());
    }

    #[test]
    fn symbol_is_linear_and_vanishes_at_zero() {
        let aq = assemble_aq(Arc::new(Torus { along_x: true }), &c1()).unwrap();
        let x = [0.0, 0.8];
        assert_eq!(max_abs(&aq.principal_symbol(&x, &[0.0, 0.0]).unwrap()), 0.0);
        let s = aq.symbol_smallest_singular_value(&x, &[1.0, 0.0]).unwrap();
        assert!((s - (-g(0.8)).exp()).abs() < 1e-14);
        let (xi, eta, a, b) = ([0.3, -1.0], [2.0, 0.5], 1.7, -0.4);
        let comb = [a * xi[0] + b * eta[0], a * xi[1] + b * eta[1]];
        let lhs = aq.principal_symbol(&x, &comb).unwrap();
        let rhs = aq.principal_symbol(&x, &xi).unwrap() * Complex64::new(a, 0.0)
            + aq.principal_symbol(&x, &eta).unwrap() * Complex64::new(b, 0.0);
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn substitution_moves_coefficient() {
        let aq = assemble_aq(Arc::new(Torus { along_x: true }), &c1()).unwrap();
        let reduced = aq.with_mode(0, 2.0).unwrap();
        let c = reduced.coefficients(&[0.0, 0.3]).unwrap();
        assert_eq!(max_abs(&c.derivative[0]), 0.0);
        assert!((c.zeroth[(0, 0)].re - 2.0 * (-g(0.3)).exp()).abs() < 1e-14);
        let moved = aq.substitute_derivative(0, Complex64::new(0.0, 0.0), &[(1, Complex64::new(2.0, 0.0))]).unwrap();
        let c = moved.coefficients(&[0.0, 0.3]).unwrap();
        assert!((c.derivative[1][(0, 0)] - I * 2.0 * (-g(0.3)).exp()).norm() < 1e-14);
        assert!(aq.substitute_derivative(0, Complex64::new(1.0, 0.0), &[(0, Complex64::new(1.0, 0.0))]).is_err());
    }

    #[test]
    fn unreduced_direction_rejected() {
        let aq = assemble_aq(Arc::new(Torus { along_x: true }), &c1()).unwrap();
        let grid = Grid1D::periodic_2pi(16).unwrap();
        assert!(aq.discretize_hermitian(1, &[0.0, 0.0], &grid).is_err());
    }

    #[test]
    fn corrected_operator_is_hermitian() {
        let grid = Grid1D::periodic_2pi(64).unwrap().with_density(|y| g(y).exp()).unwrap();
        let m = d_l().with_mode(0, 3.0).unwrap().discretize_hermitian(1, &[0.0, 0.0], &grid).unwrap();
        assert!(hermitian_defect(&m) < 1e-10);
    }

    #[test]
    fn multiplication_operator_is_real_diagonal() {
        let aq = assemble_aq(Arc::new(Torus { along_x: true }), &c1()).unwrap();
        let grid = Grid1D::periodic_2pi(32).unwrap().with_density(|y| g(y).exp()).unwrap();
        let m = aq.with_mode(0, 2.0).unwrap().discretize_hermitian(1, &[0.0, 0.0], &grid).unwrap();
        assert_eq!(hermitian_defect(&m), 0.0);
        for i in 0..32 {
            for j in 0..32 {
                if i != j {
                    assert_eq!(m[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
            assert_eq!(m[(i, i)].im, 0.0);
        }
    }

    #[test]
    fn missing_correction_shows_as_half_mean_curvature() {
        let al = assemble_aq(Arc::new(Torus { along_x: false }), &c1()).unwrap();
        let grid = Grid1D::periodic_2pi(64).unwrap().with_density(|y| g(y).exp()).unwrap();
        let m = al.discretize_hermitian(1, &[0.0, 0.0], &grid).unwrap();
        // ½ c(H^Q) = −½ i g′ on the diagonal.
        let expected = 0.15;
        assert!((skew_part_norm(&m) - expected).abs() < 1e-3 * expected + 1e-3);
        assert!(skew_part_norm(&m) > 1e-3);
        for (i, &y) in grid.points().iter().enumerate() {
            let skew = (m[(i, i)] - m[(i, i)].conj()) * 0.5;
            assert!((skew - (-I * 0.15 * y.cos())).norm() < 1e-10);
        }
    }

    #[test]
    fn collocation_reproduces_derivative() {
        let al = assemble_aq(Arc::new(Torus { along_x: false }), &c1()).unwrap();
        let grid = Grid1D::periodic_2pi(32).unwrap();
        let m = al.discretize(1, &[0.0, 0.0], &grid).unwrap();
        let u = CVector::from_iterator(32, grid.points().iter().map(|&y| Complex64::new(y.sin(), 0.0)));
        let mu = m * u;
        for (i, &y) in grid.points().iter().enumerate() {
            assert!((mu[i] - I * y.cos()).norm() < 1e-12);
        }
    }

    #[test]
    fn numerical_application_matches_coefficients() {
        let op = d_l();
        let psi = |x: &[f64]| CVector::from_element(1, Complex64::new(0.0, -2.0 * x[1]).exp() * (-0.5 * g(x[1])).exp());
        // e^{−2iy − g/2} is an eigenfunction of D_L with eigenvalue 2.
        let x = [0.0, 0.9];
        let out = op.apply_numerically(&x, psi, &[1e-3, 1e-3]).unwrap();
        assert!((out[0] - psi(&x)[0] * 2.0).norm() < 1e-10);
        assert!(op.apply_numerically(&x, psi, &[1e-3]).is_err());
    }

    #[test]
    fn weighted_coefficients() {
        let grid = Grid1D::new(vec![0.0, 1.0], vec![4.0, 9.0]).unwrap();
        let v = to_weighted(&grid, 1, &CVector::from_element(2, Complex64::new(1.0, 0.0))).unwrap();
        assert_eq!(v[1], Complex64::new(3.0, 0.0));
        assert!(to_weighted(&grid, 2, &v).is_err());
    }
}
