//! Hemisphere charts of the frame bundle `SO(3) → S²` and the invariant
//! vector fields `T, V₁, V₂` expressed in `(∂_α, ∂_θ, ∂_φ)`.
//!
//! Points are `[α, θ, φ]`. With `P = R_z(θ) R_y(φ) R_z(−θ)`, the upper chart
//! stacks the rows `Pe₃, Pe₁, Pe₂` and the lower chart `Pe₃, −Pe₁, Pe₂`
//! followed by the sign flip `diag(1, 1, −1)`; both are left-multiplied by
//! the frame rotation `L_α`. Everything below is computed from these
//! matrices and their exact derivatives.

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::clifford::CliffordModule;
use crate::transverse_operator::{assemble_aq, FirstOrderOperator, FrameField};
use crate::{Error, Result};

pub const ALPHA: usize = 0;
pub const THETA: usize = 1;
pub const PHI: usize = 2;

/// Distance from the poles below which chart evaluations are refused.
pub const POLE_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChartId {
    Upper,
    Lower,
}

impl ChartId {
    pub const BOTH: [ChartId; 2] = [ChartId::Upper, ChartId::Lower];

    pub fn name(self) -> &'static str {
        match self {
            ChartId::Upper => "upper",
            ChartId::Lower => "lower",
        }
    }
}

fn rz(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn drz(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(-s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0)
}

fn ry(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

fn dry(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(-s, 0.0, c, 0.0, 0.0, 0.0, -c, 0.0, -s)
}

fn l_alpha(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, s, 0.0, -s, c)
}

fn dl_alpha(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(0.0, 0.0, 0.0, 0.0, -s, c, 0.0, -c, -s)
}

fn row_selector(chart: ChartId) -> Matrix3<f64> {
    let sign = match chart {
        ChartId::Upper => 1.0,
        ChartId::Lower => -1.0,
    };
    Matrix3::new(0.0, 0.0, 1.0, sign, 0.0, 0.0, 0.0, 1.0, 0.0)
}

fn column_flip(chart: ChartId) -> Matrix3<f64> {
    match chart {
        ChartId::Upper => Matrix3::identity(),
        ChartId::Lower => Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)),
    }
}

/// The chart map and its three coordinate derivatives.
pub fn chart_matrix(chart: ChartId, x: &[f64; 3]) -> (Matrix3<f64>, [Matrix3<f64>; 3]) {
    let (a, t, p) = (x[ALPHA], x[THETA], x[PHI]);
    let pm = rz(t) * ry(p) * rz(-t);
    let dp_t = drz(t) * ry(p) * rz(-t) - rz(t) * ry(p) * drz(-t);
    let dp_p = rz(t) * dry(p) * rz(-t);
    let (s, d) = (row_selector(chart), column_flip(chart));
    let la = l_alpha(a);
    let u = la * s * pm.transpose() * d;
    let du = [dl_alpha(a) * s * pm.transpose() * d, la * s * dp_t.transpose() * d, la * s * dp_p.transpose() * d];
    (u, du)
}

/// Columns `(K₀₁, K₀₂, K₁₂)` of `K_k = Uᵀ ∂_k U`.
fn maurer_cartan(chart: ChartId, x: &[f64; 3]) -> Matrix3<f64> {
    let (u, du) = chart_matrix(chart, x);
    let mut j = Matrix3::zeros();
    for k in 0..3 {
        let kk = u.transpose() * du[k];
        j[(0, k)] = kk[(0, 1)];
        j[(1, k)] = kk[(0, 2)];
        j[(2, k)] = kk[(1, 2)];
    }
    j
}

fn check_point(x: &[f64; 3]) -> Result<()> {
    let phi = x[PHI];
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("chart point must be finite".into()));
    }
    if phi.sin() < POLE_EPS.sin() || !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(Error::SingularPoint(format!("φ = {phi} is at or beyond a pole")));
    }
    Ok(())
}

/// The fields `T, V₁, V₂` as coordinate component vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantFields {
    pub t: Vector3<f64>,
    pub v1: Vector3<f64>,
    pub v2: Vector3<f64>,
}

pub fn invariant_fields(chart: ChartId, x: &[f64; 3]) -> Result<InvariantFields> {
    check_point(x)?;
    let lu = maurer_cartan(chart, x).lu();
    let solve = |e: Vector3<f64>| {
        lu.solve(&e).ok_or_else(|| Error::SingularPoint(format!("chart Jacobian degenerate at {x:?}")))
    };
    Ok(InvariantFields { t: solve(Vector3::x())?, v1: solve(Vector3::y())?, v2: solve(Vector3::z())? })
}

/// `V₁, V₂` at `α = 0` in the given chart.
pub fn lifted_vector_fields(chart: ChartId, theta: f64, phi: f64) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let f = invariant_fields(chart, &[0.0, theta, phi])?;
    Ok((f.v1, f.v2))
}

/// Trace metric `⟨A, B⟩ = tr(AᵀB)` pulled back to the chart coordinates.
pub fn trace_metric(chart: ChartId, x: &[f64; 3]) -> Matrix3<f64> {
    let j = maurer_cartan(chart, x);
    j.transpose() * j * 2.0
}

/// The transverse distribution `span(V₁, V₂)` with the unit frame
/// `V_j/√2` (each `V_j` has trace-metric length `√2`).
pub struct SphereFrame {
    chart: ChartId,
}

impl SphereFrame {
    pub fn new(chart: ChartId) -> Self {
        Self { chart }
    }
}

fn point3(x: &[f64]) -> Result<[f64; 3]> {
    x.try_into().map_err(|_| Error::DimensionMismatch { what: "frame bundle point", expected: 3, found: x.len() })
}

impl FrameField for SphereFrame {
    fn chart(&self) -> &str {
        self.chart.name()
    }

    fn dim(&self) -> usize {
        3
    }

    fn rank(&self) -> usize {
        2
    }

    fn frame(&self, x: &[f64]) -> Result<nalgebra::DMatrix<f64>> {
        let f = invariant_fields(self.chart, &point3(x)?)?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ok(nalgebra::DMatrix::from_fn(2, 3, |j, k| s * if j == 0 { f.v1[k] } else { f.v2[k] }))
    }

    fn metric(&self, x: &[f64]) -> Result<nalgebra::DMatrix<f64>> {
        let g = trace_metric(self.chart, &point3(x)?);
        Ok(nalgebra::DMatrix::from_fn(3, 3, |i, j| g[(i, j)]))
    }
}

/// Transverse Dirac operator on the frame bundle in one chart. The orbits of
/// `T` are geodesic, so no mean-curvature term enters.
pub fn frame_bundle_operator(chart: ChartId) -> Result<FirstOrderOperator> {
    assemble_aq(Arc::new(SphereFrame::new(chart)), &CliffordModule::standard(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// The displayed upper-chart components.
    fn v_upper_reference(theta: f64, phi: f64) -> (Vector3<f64>, Vector3<f64>) {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        (Vector3::new(st * (cp - 1.0) / sp, st * cp / sp, -ct), Vector3::new(ct * (1.0 - cp) / sp, -ct * cp / sp, -st))
    }

    #[test]
    fn chart_maps_are_rotations() {
        for chart in ChartId::BOTH {
            let (u, du) = chart_matrix(chart, &[0.3, 1.1, 0.7]);
            assert!((u.transpose() * u - Matrix3::identity()).abs().max() < 1e-14);
            assert!((u.determinant() - 1.0).abs() < 1e-14);
            let h = 1e-6;
            for k in 0..3 {
                let mut xp = [0.3, 1.1, 0.7];
                let mut xm = xp;
                xp[k] += h;
                xm[k] -= h;
                let fd = (chart_matrix(chart, &xp).0 - chart_matrix(chart, &xm).0) / (2.0 * h);
                assert!((fd - du[k]).abs().max() < 1e-8);
            }
        }
    }

    #[test]
    fn upper_fields_match_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let theta = rng.random_range(0.0..2.0 * PI);
            let phi = rng.random_range(0.05..PI - 0.05);
            let (v1, v2) = lifted_vector_fields(ChartId::Upper, theta, phi).unwrap();
            let (r1, r2) = v_upper_reference(theta, phi);
            assert!((v1 - r1).amax() < 1e-12 && (v2 - r2).amax() < 1e-12);
        }
    }

    #[test]
    fn equator_values() {
        let (v1, v2) = lifted_vector_fields(ChartId::Upper, 0.0, FRAC_PI_2).unwrap();
        assert!((v1 - Vector3::new(0.0, 0.0, -1.0)).amax() < 1e-15);
        assert!((v2 - Vector3::new(1.0, 0.0, 0.0)).amax() < 1e-15);
    }

    #[test]
    fn generator_of_the_circle_action() {
        for &(theta, phi) in &[(0.2, 0.4), (2.0, 1.5), (5.0, 2.9)] {
            let up = invariant_fields(ChartId::Upper, &[0.0, theta, phi]).unwrap();
            assert!((up.t - Vector3::new(1.0, 1.0, 0.0)).amax() < 1e-12);
            let lo = invariant_fields(ChartId::Lower, &[0.0, theta, phi]).unwrap();
            assert!((lo.t - Vector3::new(-1.0, 1.0, 0.0)).amax() < 1e-12);
        }
    }

    #[test]
    fn lower_chart_combination() {
        // V₁ + iV₂ = e^{iθ}[i(csc − cot)∂_α + i cot ∂_θ + ∂_φ] in the lower chart.
        for &(theta, phi) in &[(0.0, 0.6), (1.2, 1.0), (4.0, 0.2)] {
            let (v1, v2) = lifted_vector_fields(ChartId::Lower, theta, phi).unwrap();
            let e = num_complex::Complex64::from_polar(1.0, theta);
            let i = crate::I;
            let (csc, cot) = (1.0 / phi.sin(), 1.0 / phi.tan());
            let expected = [e * i * (csc - cot), e * i * cot, e];
            for k in 0..3 {
                let got = num_complex::Complex64::new(v1[k], v2[k]);
                assert!((got - expected[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonality_under_trace_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for chart in ChartId::BOTH {
            for _ in 0..100 {
                let x = [0.0, rng.random_range(0.0..2.0 * PI), rng.random_range(0.05..PI - 0.05)];
                let f = invariant_fields(chart, &x).unwrap();
                let g = trace_metric(chart, &x);
                let ip = |a: &Vector3<f64>, b: &Vector3<f64>| (a.transpose() * g * b)[(0, 0)];
                assert!(ip(&f.v1, &f.v2).abs() < 1e-10);
                assert!(ip(&f.v1, &f.t).abs() < 1e-10 && ip(&f.v2, &f.t).abs() < 1e-10);
                assert!((ip(&f.v1, &f.v1) - 2.0).abs() < 1e-10);
                assert!((ip(&f.t, &f.t) - 2.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn hemispheres_glue_at_the_equator() {
        for j in 0..12 {
            let theta = 2.0 * PI * j as f64 / 12.0;
            for &alpha in &[0.0, 0.7] {
                let u1 = chart_matrix(ChartId::Upper, &[alpha, theta, FRAC_PI_2]).0;
                let u2 = chart_matrix(ChartId::Lower, &[alpha - 2.0 * theta, theta, FRAC_PI_2]).0;
                assert!((u1 - u2).abs().max() < 1e-14);
            }
        }
    }

    #[test]
    fn poles_rejected() {
        for phi in [0.0, PI, 1e-4, -0.1] {
            assert!(matches!(lifted_vector_fields(ChartId::Upper, 0.0, phi), Err(Error::SingularPoint(_))));
        }
    }

    #[test]
    fn operator_uses_unit_frame() {
        let op = frame_bundle_operator(ChartId::Upper).unwrap();
        let c = op.coefficients(&[0.0, 0.0, FRAC_PI_2]).unwrap();
        // ∂_φ coefficient: c(V₁)·(−1)/√2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c.derivative[PHI][(1, 0)].re + s).abs() < 1e-15);
        assert!((c.derivative[PHI][(0, 1)].re - s).abs() < 1e-15);
    }
}
