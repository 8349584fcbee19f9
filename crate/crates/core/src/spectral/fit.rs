use crate::{Error, Result};

const MIN_SAMPLES: usize = 10;

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { what: "fit samples", expected: xs.len(), found: ys.len() });
    }
    if xs.len() < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!("need at least {MIN_SAMPLES} samples, got {}", xs.len())));
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let spread = xs.iter().map(|x| (x - xbar).abs()).fold(0.0, f64::max);
    if !(spread > 1e-12 * xbar.abs().max(1.0)) || sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    Ok(sxy / sxx)
}

/// Slope of `ln|ψ|` against `ln sin φ`: the local power-law exponent.
pub fn fit_exponent(phis: &[f64], log_values: &[f64]) -> Result<f64> {
    let xs: Vec<f64> = phis.iter().map(|p| p.sin().ln()).collect();
    least_squares_slope(&xs, log_values)
}
