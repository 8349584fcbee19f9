//! Closed-form kernel sections, their PDE residuals and the equatorial
//! clutching condition.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::chart::{frame_bundle_operator, ChartId, ALPHA, POLE_EPS};
use super::reduction::{Chirality, SphereBlock};
use crate::{CVector, Error, Result};

/// Phase weight `w` of `e^{iwθ}` for sections of the block in this chart.
pub fn theta_weight(block: SphereBlock, chart: ChartId) -> i64 {
    match chart {
        ChartId::Upper => block.n - block.m,
        ChartId::Lower => -(block.n + block.m),
    }
}

/// Kernel section at `α = 0` with unit scale (may blow up at the pole).
pub fn closed_form_kernel_section(
    block: SphereBlock,
    chart: ChartId,
    chirality: Chirality,
    theta: f64,
    phi: f64,
) -> Complex64 {
    let SphereBlock { n, m } = block;
    let (s, c1) = (phi.sin(), 1.0 + phi.cos());
    let p = |base: f64, k: i64| base.powi(k as i32);
    let radial = match (chart, chirality) {
        (ChartId::Upper, Chirality::Plus) => p(s, n - m) / p(c1, n),
        (ChartId::Upper, Chirality::Minus) => p(c1, n) * p(s, m - n),
        (ChartId::Lower, Chirality::Plus) => p(c1, n) * p(s, -n - m),
        (ChartId::Lower, Chirality::Minus) => p(s, n + m) / p(c1, n),
    };
    Complex64::from_polar(radial, theta_weight(block, chart) as f64 * theta)
}

/// Max over the grid of `|Dψ|/|ψ|` for `ψ = e^{−inα}·section`, with the
/// full frame-bundle operator applied by finite differences.
pub fn pde_residual(
    block: SphereBlock,
    chart: ChartId,
    chirality: Chirality,
    thetas: &[f64],
    phis: &[f64],
) -> Result<f64> {
    if let Some(&bad) = phis.iter().find(|&&p| !(POLE_EPS..=FRAC_PI_2 + 1e-12).contains(&p)) {
        return Err(Error::SingularPoint(format!("residual grid point φ = {bad} outside (0, π/2]")));
    }
    let op = frame_bundle_operator(chart)?;
    let comp = chirality.component();
    let psi = |x: &[f64]| {
        let v = Complex64::from_polar(1.0, -(block.n as f64) * x[ALPHA])
            * closed_form_kernel_section(block, chart, chirality, x[1], x[2]);
        let mut s = CVector::zeros(2);
        s[comp] = v;
        s
    };
    let mut worst: f64 = 0.0;
    for &theta in thetas {
        for &phi in phis {
            let x = [0.0, theta, phi];
            let out = op.apply_numerically(&x, psi, &[1e-3, 1e-3, 1e-3 * phi])?;
            worst = worst.max(out.norm() / psi(&x).norm());
        }
    }
    Ok(worst)
}

/// A chartwise kernel candidate `C¹ψ¹` on the upper and `C²ψ²` on the lower
/// hemisphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalSection {
    pub block: SphereBlock,
    pub chirality: Chirality,
    pub upper_scale: Complex64,
    pub lower_scale: Complex64,
}

impl GlobalSection {
    /// Scales chosen so that the clutching condition holds.
    pub fn matched(block: SphereBlock, chirality: Chirality) -> Self {
        let up = closed_form_kernel_section(block, ChartId::Upper, chirality, 0.0, FRAC_PI_2);
        let lo = closed_form_kernel_section(block, ChartId::Lower, chirality, 0.0, FRAC_PI_2);
        Self { block, chirality, upper_scale: Complex64::new(1.0, 0.0), lower_scale: up / lo }
    }

    /// Value at `(θ, φ, α)` in the given chart.
    pub fn eval(&self, chart: ChartId, theta: f64, phi: f64, alpha: f64) -> Complex64 {
        let scale = match chart {
            ChartId::Upper => self.upper_scale,
            ChartId::Lower => self.lower_scale,
        };
        scale
            * Complex64::from_polar(1.0, -(self.block.n as f64) * alpha)
            * closed_form_kernel_section(self.block, chart, self.chirality, theta, phi)
    }
}

/// `max_θ |ψ¹(θ, π/2, 0) − e^{2inθ}ψ²(θ, π/2, 0)|` over `samples` angles.
pub fn clutching_defect<F, G>(n: i64, upper: F, lower: G, samples: usize) -> f64
where
    F: Fn(f64) -> Complex64,
    G: Fn(f64) -> Complex64,
{
    (0..samples)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            (upper(theta) - Complex64::from_polar(1.0, 2.0 * n as f64 * theta) * lower(theta)).norm()
        })
        .fold(0.0, f64::max)
}

pub const CLUTCHING_TOL: f64 = 1e-10;

pub fn clutching_check(section: &GlobalSection, samples: usize) -> bool {
    clutching_defect(
        section.block.n,
        |t| section.eval(ChartId::Upper, t, FRAC_PI_2, 0.0),
        |t| section.eval(ChartId::Lower, t, FRAC_PI_2, 0.0),
        samples,
    ) < CLUTCHING_TOL
}
