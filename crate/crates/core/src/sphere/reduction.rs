//! Isotypic mode reduction of the frame-bundle operator to radial ODEs
//! `∂_φψ = r(φ)ψ`, and the quotient operator on `SO(3)/S¹`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use num_complex::Complex64;

use super::chart::{frame_bundle_operator, invariant_fields, ChartId, ALPHA, PHI, THETA};
use crate::transverse_operator::{FirstOrderOperator, OperatorCoefficients};
use crate::{CMatrix, Error, Result, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chirality {
    /// The first spinor component, annihilated by `V₁ + iV₂`.
    Plus,
    /// The second component, annihilated by `−(V₁ − iV₂)`.
    Minus,
}

impl Chirality {
    pub const BOTH: [Chirality; 2] = [Chirality::Plus, Chirality::Minus];

    /// `(row, column)` of the operator entry acting on this component.
    fn entry(self) -> (usize, usize) {
        match self {
            Chirality::Plus => (1, 0),
            Chirality::Minus => (0, 1),
        }
    }

    pub fn component(self) -> usize {
        self.entry().1
    }

    pub fn sign(self) -> &'static str {
        match self {
            Chirality::Plus => "+",
            Chirality::Minus => "-",
        }
    }
}

/// Isotypic label: weight `n` of the frame rotation `∂_α ↦ −in` and weight
/// `m` of the lifted circle action `Tψ = −imψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SphereBlock {
    pub n: i64,
    pub m: i64,
}

impl SphereBlock {
    pub fn new(n: i64, m: i64) -> Self {
        Self { n, m }
    }
}

/// `∂_φψ = (a csc φ + b cot φ)ψ`, with indicial exponent `a + b` at `φ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialODE {
    pub block: SphereBlock,
    pub chart: ChartId,
    pub chirality: Chirality,
    pub csc_coeff: i64,
    pub cot_coeff: i64,
}

impl RadialODE {
    pub fn r(&self, phi: f64) -> f64 {
        (self.csc_coeff as f64 + self.cot_coeff as f64 * phi.cos()) / phi.sin()
    }

    pub fn exponent(&self) -> i64 {
        self.csc_coeff + self.cot_coeff
    }

    /// Table form of the reduction.
    pub fn closed_form(block: SphereBlock, chart: ChartId, chirality: Chirality) -> Self {
        let SphereBlock { n, m } = block;
        let (a, b) = match (chart, chirality) {
            (ChartId::Upper, Chirality::Plus) => (n, -m),
            (ChartId::Upper, Chirality::Minus) => (-n, m),
            (ChartId::Lower, Chirality::Plus) => (-n, -m),
            (ChartId::Lower, Chirality::Minus) => (n, m),
        };
        Self { block, chart, chirality, csc_coeff: a, cot_coeff: b }
    }
}

/// Weight of `∂_θ` on sections of type `(σ_n, ρ_m)`: `T = t_α∂_α + t_θ∂_θ`
/// together with `∂_α ↦ −in` gives `∂_θ ↦ i(n t_α − m)/t_θ`.
fn theta_multiplier(chart: ChartId, n: i64, m: i64) -> Result<Complex64> {
    let t = invariant_fields(chart, &[0.0, 0.0, FRAC_PI_2])?.t;
    Ok(I * ((n as f64 * t[ALPHA] - m as f64) / t[THETA]))
}

/// `D^{σ_n}`: the frame-bundle operator on sections with `∂_α ↦ −in`,
/// restricted to the slice `α = 0` and written in `(θ, φ)`.
pub fn sigma_reduced_operator(chart: ChartId, n: i64) -> Result<FirstOrderOperator> {
    let full = frame_bundle_operator(chart)?.with_mode(ALPHA, n as f64)?;
    Ok(slice_alpha(&full))
}

fn slice_alpha(op: &FirstOrderOperator) -> FirstOrderOperator {
    let inner = op.clone();
    FirstOrderOperator::new(op.chart().to_string(), 2, op.fiber_dim(), move |x| {
        let mut c = inner.coefficients(&[0.0, x[0], x[1]])?;
        c.derivative.remove(ALPHA);
        Ok(c)
    })
}

/// Quotient operator on `SO(3)/S¹` for sections of type `ρ_m`: the
/// frame-bundle operator with `∂_α` eliminated through `Tψ = −imψ`, in
/// `(θ, φ)`.
pub fn quotient_reduced_operator(chart: ChartId, m: i64) -> Result<FirstOrderOperator> {
    let full = frame_bundle_operator(chart)?;
    Ok(FirstOrderOperator::new(format!("{}/quotient", chart.name()), 2, 2, move |x| {
        let p = [0.0, x[0], x[1]];
        let c = full.coefficients(&p)?;
        let t = invariant_fields(chart, &p)?.t;
        // ∂_α = (−im − t_θ∂_θ − t_φ∂_φ)/t_α
        let aa = &c.derivative[ALPHA];
        let derivative = vec![
            &c.derivative[THETA] - aa * Complex64::new(t[THETA] / t[ALPHA], 0.0),
            &c.derivative[PHI] - aa * Complex64::new(t[PHI] / t[ALPHA], 0.0),
        ];
        let zeroth = &c.zeroth + aa * (-I * (m as f64 / t[ALPHA]));
        Ok(OperatorCoefficients { derivative, zeroth })
    }))
}

fn radial_from(c: &OperatorCoefficients, phi_index: usize, chirality: Chirality) -> Result<Complex64> {
    let (r, col) = chirality.entry();
    let a = c.derivative[phi_index][(r, col)];
    if a.norm() < 1e-14 {
        return Err(Error::SingularPoint("∂_φ coefficient vanishes".into()));
    }
    Ok(-c.zeroth[(r, col)] / a)
}

/// `r(φ)` from the frame-bundle operator with both `∂_α` and `∂_θ`
/// replaced by their weights, at the slice point `(0, θ, φ)`.
pub fn radial_coefficient_at(
    block: SphereBlock,
    chart: ChartId,
    chirality: Chirality,
    theta: f64,
    phi: f64,
) -> Result<Complex64> {
    let op = frame_bundle_operator(chart)?.with_mode(ALPHA, block.n as f64)?.substitute_derivative(
        THETA,
        theta_multiplier(chart, block.n, block.m)?,
        &[],
    )?;
    radial_from(&op.coefficients(&[0.0, theta, phi])?, PHI, chirality)
}

pub fn radial_coefficient(block: SphereBlock, chart: ChartId, chirality: Chirality, phi: f64) -> Result<Complex64> {
    radial_coefficient_at(block, chart, chirality, 0.0, phi)
}

/// Same coefficient through the quotient operator: first `Tψ = −imψ`,
/// then `∂_θ ↦` its `σ_n` weight.
pub fn radial_coefficient_via_quotient(
    block: SphereBlock,
    chart: ChartId,
    chirality: Chirality,
    phi: f64,
) -> Result<Complex64> {
    let op = quotient_reduced_operator(chart, block.m)?.substitute_derivative(
        0,
        theta_multiplier(chart, block.n, block.m)?,
        &[],
    )?;
    radial_from(&op.coefficients(&[0.0, phi])?, 1, chirality)
}

/// Reads off `(a, b)` from the operator-derived `r` via `r sin φ = a + b cos φ`
/// and checks the fit on a sample grid.
pub fn reduce_block(block: SphereBlock, chart: ChartId, chirality: Chirality) -> Result<RadialODE> {
    let r = |phi: f64| radial_coefficient(block, chart, chirality, phi);
    let a = r(FRAC_PI_2)?.re;
    let b = (r(FRAC_PI_3)?.re * FRAC_PI_3.sin() - a) / FRAC_PI_3.cos();
    let snap = |v: f64| {
        let k = v.round();
        if (v - k).abs() > 1e-9 {
            Err(Error::InvalidInput(format!("radial coefficient {v} is not an integer")))
        } else {
            Ok(k as i64)
        }
    };
    let ode = RadialODE { block, chart, chirality, csc_coeff: snap(a)?, cot_coeff: snap(b)? };
    for j in 1..=20 {
        let phi = 0.1 + (FRAC_PI_2 - 0.1) * j as f64 / 20.0;
        let got = r(phi)?;
        if (got - ode.r(phi)).norm() > 1e-9 * (1.0 + ode.r(phi).abs()) {
            return Err(Error::InvalidInput(format!("reduced operator is not of radial form at φ = {phi}")));
        }
    }
    Ok(ode)
}

/// `sup_φ |r_frame-bundle − r_quotient|` over both charts and chiralities.
pub fn compare_block_reductions(block: SphereBlock, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for chart in ChartId::BOTH {
        for chirality in Chirality::BOTH {
            for j in 0..samples {
                let phi = 0.05 + (FRAC_PI_2 - 0.05) * j as f64 / (samples.max(2) - 1) as f64;
                let a = radial_coefficient(block, chart, chirality, phi)?;
                let b = radial_coefficient_via_quotient(block, chart, chirality, phi)?;
                worst = worst.max((a - b).norm());
            }
        }
    }
    Ok(worst)
}

/// The `(row, column)` entry of the `θ`-direction symbol of `D^{σ_n}`.
pub fn theta_symbol(chart: ChartId, n: i64, theta: f64, phi: f64) -> Result<CMatrix> {
    sigma_reduced_operator(chart, n)?.principal_symbol(&[theta, phi], &[1.0, 0.0])
}
