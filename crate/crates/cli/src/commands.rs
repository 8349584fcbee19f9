//! `torus-spectrum`, `sphere-index`, `sphere-kernel`, `compare-quotient`.

use std::f64::consts::FRAC_PI_2;

use anyhow::Result;
use serde::Serialize;
use transdirac::index::{build_index_table, kernel_total_table, IndexEntry, Method, NumericSettings};
use transdirac::parallel::{try_map, Execution};
use transdirac::sphere::{
    compare_block_reductions, pde_residual, reduce_block, ChartId, Chirality, GlobalSection, RadialODE, SphereBlock,
};
use transdirac::torus::TorusGeometry;

use crate::output::{failures, Check, SCHEMA_VERSION};

pub const INTEGER_TOL: f64 = 1e-6;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const QUOTIENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusOp {
    Dl,
    Dq,
}

#[derive(Serialize)]
pub struct TorusReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub g_coeffs: Vec<f64>,
    pub op: &'static str,
    pub mode: i64,
    #[serde(rename = "N")]
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
}

#[derive(Serialize)]
pub struct EigenRow {
    pub index: usize,
    pub eigenvalue: f64,
}

pub fn torus_spectrum(geom: &TorusGeometry, op: TorusOp, mode: i64, n: usize, tol_scale: f64) -> Result<TorusReport> {
    let (name, eigenvalues) = match op {
        TorusOp::Dl => ("DL", geom.spectrum_dl(mode, n)?),
        TorusOp::Dq => ("DQ", geom.spectrum_dq_band(mode, n)?),
    };
    let mut checks = Vec::new();
    match op {
        TorusOp::Dl => {
            let off = eigenvalues.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max);
            checks.push(Check::at_most("eigenvalues_integral", off, INTEGER_TOL, tol_scale));
        }
        TorusOp::Dq => {
            // Containment in n·e^{−g(y_j)} over the grid values is exact by
            // construction; compare against a fine sampling of the band.
            let (lo, hi) = geom.band(mode, 1 << 16);
            let outside = eigenvalues.iter().map(|&v| (lo - v).max(v - hi).max(0.0)).fold(0.0, f64::max);
            checks.push(Check::at_most("band_containment", outside, 1e-12, tol_scale));
        }
    }
    Ok(TorusReport {
        schema_version: SCHEMA_VERSION,
        command: "torus-spectrum",
        g_coeffs: geom.coefficients(),
        op: name,
        mode,
        n,
        failures: failures(&checks),
        eigenvalues,
        checks,
    })
}

#[derive(Serialize, Clone)]
pub struct Exponents {
    pub upper_plus: f64,
    pub upper_minus: f64,
    pub lower_plus: f64,
    pub lower_minus: f64,
}

#[derive(Serialize)]
pub struct BlockRecord {
    pub n: i64,
    pub m: i64,
    pub dim_ker_plus: u32,
    pub dim_ker_minus: u32,
    pub index: i64,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_index: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimated_exponents: Option<Exponents>,
}

#[derive(Serialize)]
pub struct BlockCsvRow {
    pub n: i64,
    pub m: i64,
    pub dim_ker_plus: u32,
    pub dim_ker_minus: u32,
    pub index: i64,
    pub method: &'static str,
    pub numeric_index: Option<i64>,
    pub exp_upper_plus: Option<f64>,
    pub exp_upper_minus: Option<f64>,
    pub exp_lower_plus: Option<f64>,
    pub exp_lower_minus: Option<f64>,
}

#[derive(Serialize)]
pub struct IndexReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub method: &'static str,
    pub n_range: [i64; 2],
    pub m_range: [i64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    pub blocks: Vec<BlockRecord>,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
}

fn record(n: i64, m: i64, e: &IndexEntry, method: Method) -> BlockRecord {
    let c = e.counts();
    let estimated_exponents = e.numeric.as_ref().map(|num| {
        let get = |chart, ch| num.exponent(chart, ch).map_or(f64::NAN, |x| x.estimate);
        Exponents {
            upper_plus: get(ChartId::Upper, Chirality::Plus),
            upper_minus: get(ChartId::Upper, Chirality::Minus),
            lower_plus: get(ChartId::Lower, Chirality::Plus),
            lower_minus: get(ChartId::Lower, Chirality::Minus),
        }
    });
    BlockRecord {
        n,
        m,
        dim_ker_plus: c.dim_ker_plus,
        dim_ker_minus: c.dim_ker_minus,
        index: c.index(),
        method: method.name(),
        numeric_index: e.numeric.as_ref().map(|x| x.index()),
        estimated_exponents,
    }
}

impl IndexReport {
    pub fn csv_rows(&self) -> Vec<BlockCsvRow> {
        self.blocks
            .iter()
            .map(|b| {
                let e = b.estimated_exponents.clone();
                BlockCsvRow {
                    n: b.n,
                    m: b.m,
                    dim_ker_plus: b.dim_ker_plus,
                    dim_ker_minus: b.dim_ker_minus,
                    index: b.index,
                    method: b.method,
                    numeric_index: b.numeric_index,
                    exp_upper_plus: e.as_ref().map(|x| x.upper_plus),
                    exp_upper_minus: e.as_ref().map(|x| x.upper_minus),
                    exp_lower_plus: e.as_ref().map(|x| x.lower_plus),
                    exp_lower_minus: e.as_ref().map(|x| x.lower_minus),
                }
            })
            .collect()
    }
}

pub fn sphere_index(
    n_range: [i64; 2],
    m_range: [i64; 2],
    method: Method,
    settings: NumericSettings,
    exec: Execution,
) -> Result<IndexReport> {
    let table = build_index_table(n_range[0]..=n_range[1], m_range[0]..=m_range[1], method, settings, exec)?;
    let mut checks = vec![Check::equal("route_mismatches", table.route_mismatches().len() as i64, 0)];
    let violations = table.structural_violations();
    checks.push(Check::equal("structural_violations", violations.len() as i64, 0));
    let mut fails = failures(&checks);
    fails.extend(violations);
    fails.extend(table.route_mismatches().iter().map(|(n, m)| format!("({n},{m}): routes disagree")));
    let numeric = method != Method::Closed;
    Ok(IndexReport {
        schema_version: SCHEMA_VERSION,
        command: "sphere-index",
        method: method.name(),
        n_range,
        m_range,
        epsilon: numeric.then_some(settings.epsilon),
        steps: numeric.then_some(settings.steps),
        blocks: table.entries.iter().map(|(&(n, m), e)| record(n, m, e, method)).collect(),
        checks,
        failures: fails,
    })
}

#[derive(Serialize)]
pub struct ComponentReport {
    pub chart: &'static str,
    pub chirality: &'static str,
    pub closed_form: String,
    pub radial_coefficient: String,
    pub exponent: i64,
    pub regular_at_pole: bool,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct KernelReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n: i64,
    pub m: i64,
    pub components: Vec<ComponentReport>,
    pub dim_ker_plus: u32,
    pub dim_ker_minus: u32,
    pub index: i64,
    pub kernel_total: u32,
    pub clutching_scale_ratio: Option<[f64; 2]>,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
}

fn describe_section(ode: &RadialODE) -> String {
    let SphereBlock { n, m } = ode.block;
    let (sin_pow, cos_pow, w) = match (ode.chart, ode.chirality) {
        (ChartId::Upper, Chirality::Plus) => (n - m, -n, n - m),
        (ChartId::Upper, Chirality::Minus) => (m - n, n, n - m),
        (ChartId::Lower, Chirality::Plus) => (-n - m, n, -n - m),
        (ChartId::Lower, Chirality::Minus) => (n + m, -n, -n - m),
    };
    format!("sin(phi)^({sin_pow}) * (1+cos(phi))^({cos_pow}) * exp(i*({w})*theta)")
}

pub fn residual_grid() -> (Vec<f64>, Vec<f64>) {
    let thetas = (0..6).map(|j| std::f64::consts::PI * j as f64 / 3.0).collect();
    let phis = (0..10).map(|j| 0.05 + (FRAC_PI_2 - 0.05) * j as f64 / 9.0).collect();
    (thetas, phis)
}

pub fn sphere_kernel(n: i64, m: i64, tol_scale: f64) -> Result<KernelReport> {
    let block = SphereBlock::new(n, m);
    let (thetas, phis) = residual_grid();
    let mut components = Vec::new();
    let mut checks = Vec::new();
    for chart in ChartId::BOTH {
        for ch in Chirality::BOTH {
            let ode = reduce_block(block, chart, ch)?;
            let residual = pde_residual(block, chart, ch, &thetas, &phis)?;
            checks.push(Check::at_most(
                format!("pde_residual_{}_{}", chart.name(), if ch == Chirality::Plus { "plus" } else { "minus" }),
                residual,
                RESIDUAL_TOL,
                tol_scale,
            ));
            components.push(ComponentReport {
                chart: chart.name(),
                chirality: ch.sign(),
                closed_form: describe_section(&ode),
                radial_coefficient: format!("({})*csc(phi) + ({})*cot(phi)", ode.csc_coeff, ode.cot_coeff),
                exponent: ode.exponent(),
                regular_at_pole: ode.exponent() >= 0,
                residual,
            });
        }
    }
    let regular = |ch: &str| components.iter().filter(|c| c.chirality == ch).all(|c| c.regular_at_pole);
    let (dp, dm) = (u32::from(regular("+")), u32::from(regular("-")));
    let counts = transdirac::index::kernel_dims_closed_form(n, m);
    checks.push(Check::equal("kernel_dims_match_closed_form", i64::from(dp + dm), i64::from(counts.total())));
    checks.push(Check::equal("kernel_total_matches_table", i64::from(dp + dm), i64::from(kernel_total_table(n, m))));
    let clutching =
        [(Chirality::Plus, dp), (Chirality::Minus, dm)].into_iter().find(|&(_, d)| d == 1).map(|(ch, _)| {
            let s = GlobalSection::matched(block, ch);
            let ratio = s.lower_scale / s.upper_scale;
            checks.push(Check::flag("clutching_matched", transdirac::sphere::clutching_check(&s, 64)));
            [ratio.re, ratio.im]
        });
    Ok(KernelReport {
        schema_version: SCHEMA_VERSION,
        command: "sphere-kernel",
        n,
        m,
        components,
        dim_ker_plus: dp,
        dim_ker_minus: dm,
        index: i64::from(dp) - i64::from(dm),
        kernel_total: dp + dm,
        clutching_scale_ratio: clutching,
        failures: failures(&checks),
        checks,
    })
}

#[derive(Serialize)]
pub struct QuotientRow {
    pub n: i64,
    pub m: i64,
    pub discrepancy: f64,
}

#[derive(Serialize)]
pub struct QuotientReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n_range: [i64; 2],
    pub m_range: [i64; 2],
    pub samples: usize,
    pub blocks: Vec<QuotientRow>,
    pub max_discrepancy: f64,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
}

pub fn compare_quotient(
    n_range: [i64; 2],
    m_range: [i64; 2],
    samples: usize,
    tol_scale: f64,
    exec: Execution,
) -> Result<QuotientReport> {
    let blocks: Vec<(i64, i64)> =
        (n_range[0]..=n_range[1]).flat_map(|n| (m_range[0]..=m_range[1]).map(move |m| (n, m))).collect();
    let rows = try_map(exec, &blocks, |&(n, m)| {
        compare_block_reductions(SphereBlock::new(n, m), samples).map(|d| QuotientRow { n, m, discrepancy: d })
    })?;
    let max_discrepancy = rows.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
    let checks = vec![Check::at_most("max_discrepancy", max_discrepancy, QUOTIENT_TOL, tol_scale)];
    Ok(QuotientReport {
        schema_version: SCHEMA_VERSION,
        command: "compare-quotient",
        n_range,
        m_range,
        samples,
        blocks: rows,
        max_discrepancy,
        failures: failures(&checks),
        checks,
    })
}
