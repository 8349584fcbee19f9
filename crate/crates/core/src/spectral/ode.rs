use num_complex::Complex64;

use crate::{Error, Result};

/// Renormalisation cadence of [`integrate_linear_ode`], in steps.
pub const RENORMALIZE_EVERY: usize = 100;

/// Independent variable used for the RK4 steps of [`integrate_linear_ode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepVariable {
    /// Equal steps in `φ`.
    Uniform,
    /// Equal steps in `ln φ`; the equation becomes `dψ/dt = φ r(φ) ψ`, whose
    /// coefficient stays bounded near a regular singular point at `φ = 0`.
    Logarithmic,
}

/// One sample of `ln|ψ|` at `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSample {
    pub phi: f64,
    pub log_abs: f64,
}

/// RK4 for `d(ln ψ)/dφ = r(φ)` from `phi_start` to `phi_end` with
/// `ln ψ(phi_start) = 0`. Returns `steps + 1` samples `(φ, ln ψ)`.
pub fn integrate_log_ode(
    r: impl Fn(f64) -> f64,
    phi_start: f64,
    phi_end: f64,
    steps: usize,
) -> Result<Vec<(f64, f64)>> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be positive".into()));
    }
    let h = (phi_end - phi_start) / steps as f64;
    let eval = |phi: f64| {
        let v = r(phi);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::SingularCoefficient { phi })
        }
    };
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = 0.0;
    out.push((phi_start, y));
    for i in 0..steps {
        let phi = phi_start + h * i as f64;
        let k1 = eval(phi)?;
        let k2 = eval(phi + 0.5 * h)?;
        let k4 = eval(phi + h)?;
        y += h / 6.0 * (k1 + 4.0 * k2 + k4);
        out.push((phi_start + h * (i + 1) as f64, y));
    }
    Ok(out)
}

/// RK4 for the linear equation `dψ/dφ = r(φ) ψ`, `ψ(phi_start) = 1`.
///
/// Only `ln|ψ|` is reported. `ψ` is rescaled to unit modulus every
/// [`RENORMALIZE_EVERY`] steps (and whenever it leaves `[1e-100, 1e100]`),
/// with the logarithm of the scale accumulated separately, so large
/// exponents never overflow.
pub fn integrate_linear_ode(
    r: impl Fn(f64) -> Complex64,
    phi_start: f64,
    phi_end: f64,
    steps: usize,
    variable: StepVariable,
) -> Result<Vec<LogSample>> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be positive".into()));
    }
    if variable == StepVariable::Logarithmic && !(phi_start > 0.0 && phi_end > 0.0) {
        return Err(Error::InvalidInput("logarithmic stepping needs a span inside (0, ∞)".into()));
    }
    let (t0, t1) = match variable {
        StepVariable::Uniform => (phi_start, phi_end),
        StepVariable::Logarithmic => (phi_start.ln(), phi_end.ln()),
    };
    let to_phi = |t: f64| match variable {
        StepVariable::Uniform => t,
        StepVariable::Logarithmic => t.exp(),
    };
    // Right-hand side in the stepping variable.
    let rate = |t: f64| -> Result<Complex64> {
        let phi = to_phi(t);
        let v = match variable {
            StepVariable::Uniform => r(phi),
            StepVariable::Logarithmic => r(phi) * phi,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::SingularCoefficient { phi })
        }
    };

    let h = (t1 - t0) / steps as f64;
    let mut psi = Complex64::new(1.0, 0.0);
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(LogSample { phi: phi_start, log_abs: 0.0 });
    for i in 0..steps {
        let t = t0 + h * i as f64;
        let a1 = rate(t)?;
        let a2 = rate(t + 0.5 * h)?;
        let a4 = rate(t + h)?;
        let k1 = a1 * psi;
        let k2 = a2 * (psi + k1 * (0.5 * h));
        let k3 = a2 * (psi + k2 * (0.5 * h));
        let k4 = a4 * (psi + k3 * h);
        psi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let modulus = psi.norm();
        if (i + 1) % RENORMALIZE_EVERY == 0 || !(1e-100..=1e100).contains(&modulus) {
            if !(modulus > 0.0) || !modulus.is_finite() {
                return Err(Error::SingularCoefficient { phi: to_phi(t + h) });
            }
            log_scale += modulus.ln();
            psi /= modulus;
        }
        out.push(LogSample { phi: to_phi(t0 + h * (i + 1) as f64), log_abs: log_scale + psi.norm().ln() });
    }
    Ok(out)
}
