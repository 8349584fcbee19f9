//! Fixed-seed verification suites behind `verify --suite`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use anyhow::Result;
use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use transdirac::clifford::CliffordModule;
use transdirac::frame_geometry::{
    bx_from_l_frame, bx_from_q_frame, compatibility_residual, random_block_rotation, rotate_coordinates, FrameBlock,
    LocalFrameData,
};
use transdirac::index::{build_index_table, index_closed_form, kernel_total_table, Method, NumericSettings};
use transdirac::parallel::Execution;
use transdirac::spectral::{
    fit_exponent, hermitian_defect, integrate_log_ode, least_squares_slope, smallest_singular_value,
};
use transdirac::sphere::{
    clutching_check, clutching_defect, compare_block_reductions, pde_residual, quotient_reduced_operator, theta_symbol,
    ChartId, Chirality, GlobalSection, SphereBlock,
};
use transdirac::torus::TorusGeometry;
use transdirac::transverse_operator::skew_part_norm;
use transdirac::{max_abs, CMatrix, CVector};

use crate::commands::{residual_grid, INTEGER_TOL, QUOTIENT_TOL, RESIDUAL_TOL};
use crate::output::{failures, Check, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Clifford,
    Connection,
    Clutching,
    Residual,
    Quotient,
    Hermitian,
    Spectral,
    Torus,
    Index,
    All,
}

impl Suite {
    const MEMBERS: [Suite; 9] = [
        Suite::Clifford,
        Suite::Connection,
        Suite::Clutching,
        Suite::Residual,
        Suite::Quotient,
        Suite::Hermitian,
        Suite::Spectral,
        Suite::Torus,
        Suite::Index,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Connection => "connection",
            Suite::Clutching => "clutching",
            Suite::Residual => "residual",
            Suite::Quotient => "quotient",
            Suite::Hermitian => "hermitian",
            Suite::Spectral => "spectral",
            Suite::Torus => "torus",
            Suite::Index => "index",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol_scale: f64,
    pub exec: Execution,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
    pub failures: Vec<String>,
}

pub fn run(suite: Suite, cfg: VerifyConfig) -> Result<VerifyReport> {
    let selected: Vec<Suite> = if suite == Suite::All { Suite::MEMBERS.to_vec() } else { vec![suite] };
    let mut suites = Vec::new();
    let mut fails = Vec::new();
    for s in selected {
        let checks = run_one(s, cfg)?;
        fails.extend(failures(&checks).into_iter().map(|f| format!("{}: {f}", s.name())));
        suites.push(SuiteReport { suite: s.name(), checks });
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        suite: suite.name(),
        seed: cfg.seed,
        trials: cfg.trials,
        suites,
        failures: fails,
    })
}

fn run_one(suite: Suite, cfg: VerifyConfig) -> Result<Vec<Check>> {
    // Each suite draws from its own stream so suites are reproducible alone.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match suite {
        Suite::Clifford => clifford(&mut rng, cfg),
        Suite::Connection => connection(&mut rng, cfg),
        Suite::Clutching => clutching(cfg),
        Suite::Residual => residual(cfg),
        Suite::Quotient => quotient(&mut rng, cfg),
        Suite::Hermitian => hermitian(cfg),
        Suite::Spectral => spectral(cfg),
        Suite::Torus => torus(cfg),
        Suite::Index => index(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

fn unit_vector(q: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..q).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    v.into_iter().map(|x| x / norm).collect()
}

fn clifford(rng: &mut ChaCha8Rng, cfg: VerifyConfig) -> Result<Vec<Check>> {
    let (mut anti, mut skew, mut square, mut relation) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for q in 1..=8 {
        let module = CliffordModule::standard(q);
        let (a, s) = module.defects();
        anti = anti.max(a);
        skew = skew.max(s);
        let n = module.fiber_dim();
        for _ in 0..cfg.trials.div_ceil(8) {
            let v = unit_vector(q, rng);
            let w: Vec<f64> = (0..q).map(|_| rng.random_range(-1.0..1.0)).collect();
            let s =
                CVector::from_fn(n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let cv = module.action(&v)?;
            let cw = module.action(&w)?;
            let id = CMatrix::identity(n, n);
            square = square.max(max_abs(&(&cv * &cv + &id)));
            let dot: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            let lhs = (&cv * &cw + &cw * &cv) * &s;
            relation = (lhs + &s * Complex64::new(2.0 * dot, 0.0)).iter().fold(relation, |acc, z| acc.max(z.norm()));
        }
    }
    let sc = cfg.tol_scale;
    Ok(vec![
        Check::at_most("anticommutation_defect", anti, 1e-12, sc),
        Check::at_most("skew_hermitian_defect", skew, 1e-12, sc),
        Check::at_most("unit_square_defect", square, 1e-12, sc),
        Check::at_most("random_anticommutator_defect", relation, 1e-12, sc),
    ])
}

fn connection(rng: &mut ChaCha8Rng, cfg: VerifyConfig) -> Result<Vec<Check>> {
    let (mut agree, mut compat, mut skew, mut frame) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in 0..cfg.trials {
        let q = 1 + t % 3;
        let p = 1 + (t / 3) % 3;
        let data = LocalFrameData::random(q, p, rng);
        let module = CliffordModule::standard(p + q);
        let x: Vec<f64> = (0..p + q).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..q).map(|_| rng.random_range(-1.0..1.0)).collect();
        let bl = bx_from_l_frame(&data, &module, &x)?;
        let bq = bx_from_q_frame(&data, &module, &x)?;
        agree = agree.max(max_abs(&(&bl - &bq)));
        skew = skew.max(max_abs(&(&bl + bl.adjoint())));
        compat = compat.max(compatibility_residual(&data, &module, &x, &y)?);
        let (r, dr) = random_block_rotation(q, p, FrameBlock::L, rng);
        let rotated = data.rotated(&r, &dr)?;
        let x_new = rotate_coordinates(&r, &x);
        let b_new = bx_from_l_frame(&rotated, &module.rotated(&r)?, &x_new)?;
        frame = frame.max(max_abs(&(b_new - bl)));
    }
    let sc = cfg.tol_scale;
    Ok(vec![
        Check::at_most("bx_formulas_agree", agree, 1e-12, sc),
        Check::at_most("compatibility_residual", compat, 1e-10, sc),
        Check::at_most("bx_skew_hermitian", skew, 1e-12, sc),
        Check::at_most("l_frame_independence", frame, 1e-12, sc),
    ])
}

fn clutching(cfg: VerifyConfig) -> Result<Vec<Check>> {
    let flat = |_: f64| Complex64::new(1.0, 0.0);
    let mut checks = vec![Check::at_most("n0_continuity", clutching_defect(0, flat, flat, 64), 1e-10, cfg.tol_scale)];
    let mut matched = true;
    let mut negative = true;
    for n in -4i64..=4 {
        for m in -5i64..=5 {
            for (ch, live) in [(Chirality::Plus, m <= -n.abs()), (Chirality::Minus, m >= n.abs())] {
                if !live {
                    continue;
                }
                let s = GlobalSection::matched(SphereBlock::new(n, m), ch);
                matched &= clutching_check(&s, 64);
                let off = GlobalSection { lower_scale: s.lower_scale * 1.5, ..s };
                negative &= !clutching_check(&off, 64);
            }
        }
    }
    let block = GlobalSection::matched(SphereBlock::new(1, -2), Chirality::Plus);
    checks.push(Check::flag("example_equal_scales", (block.upper_scale - block.lower_scale).norm() < 1e-14));
    checks.push(Check::flag("matched_sections_clutch", matched));
    checks.push(Check::flag("mismatched_sections_rejected", negative));
    Ok(checks)
}

pub const RESIDUAL_BLOCKS: [(i64, i64); 10] =
    [(0, 0), (2, 3), (2, -3), (3, 1), (1, 1), (-1, -1), (2, -2), (-2, 2), (0, 5), (4, -1)];

fn residual(cfg: VerifyConfig) -> Result<Vec<Check>> {
    let (thetas, phis) = residual_grid();
    let mut worst: f64 = 0.0;
    for &(n, m) in &RESIDUAL_BLOCKS {
        for chart in ChartId::BOTH {
            for ch in Chirality::BOTH {
                worst = worst.max(pde_residual(SphereBlock::new(n, m), chart, ch, &thetas, &phis)?);
            }
        }
    }
    let zero = pde_residual(SphereBlock::new(0, 0), ChartId::Upper, Chirality::Plus, &thetas, &phis)?;
    Ok(vec![
        Check::at_most("max_kernel_section_residual", worst, RESIDUAL_TOL, cfg.tol_scale),
        Check::at_most("constant_section_residual", zero, 1e-12, cfg.tol_scale),
    ])
}

fn quotient(rng: &mut ChaCha8Rng, cfg: VerifyConfig) -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for n in -4..=4 {
        for m in -4..=4 {
            worst = worst.max(compare_block_reductions(SphereBlock::new(n, m), 32)?);
        }
    }
    let sc = cfg.tol_scale;
    let mut equator: f64 = 0.0;
    let mut off_equator = f64::INFINITY;
    for chart in ChartId::BOTH {
        for n in -3..=3 {
            equator = equator.max(smallest_singular_value(&theta_symbol(chart, n, 0.7, FRAC_PI_2)?));
            for phi in [FRAC_PI_2 - 0.1, FRAC_PI_2 + 0.1] {
                off_equator = off_equator.min(smallest_singular_value(&theta_symbol(chart, n, 0.7, phi)?));
            }
        }
    }
    let mut interior = f64::INFINITY;
    for _ in 0..100 {
        let chart = if rng.random_bool(0.5) { ChartId::Upper } else { ChartId::Lower };
        let m = rng.random_range(-4..=4);
        let q = quotient_reduced_operator(chart, m)?;
        let x = [rng.random_range(0.0..2.0 * PI), rng.random_range(0.01..FRAC_PI_2)];
        // Unit covectors over a half circle (the symbol is odd in ξ).
        for k in 0..24 {
            let a = PI * k as f64 / 24.0;
            interior = interior.min(q.symbol_smallest_singular_value(&x, &[a.cos(), a.sin()])?);
        }
    }
    Ok(vec![
        Check::at_most("max_reduction_discrepancy", worst, QUOTIENT_TOL, sc),
        Check::at_most("equator_symbol_sigma_min", equator, 1e-10, sc),
        Check::at_least("off_equator_symbol_sigma_min", off_equator, 1e-3, sc),
        Check::at_least("quotient_interior_sigma_min", interior, 1e-3, sc),
    ])
}

fn hermitian(cfg: VerifyConfig) -> Result<Vec<Check>> {
    let g: TorusGeometry = "0.3sin".parse()?;
    let grid = g.grid(64)?;
    let dl = g.operator_dl()?.discretize_hermitian(1, &[0.0, 0.0], &grid)?;
    let al = g.operator_al()?.discretize_hermitian(1, &[0.0, 0.0], &grid)?;
    let dq = g.operator_dq()?.with_mode(0, 2.0)?.discretize_hermitian(1, &[0.0, 0.0], &grid)?;
    let expected = 0.15;
    let sc = cfg.tol_scale;
    Ok(vec![
        Check::at_most("corrected_defect", hermitian_defect(&dl), 1e-10, sc),
        Check::at_least("uncorrected_defect", skew_part_norm(&al), 1e-3, sc),
        Check::at_most("uncorrected_defect_vs_half_mean_curvature", (skew_part_norm(&al) - expected).abs(), 1e-3, sc),
        Check::at_most("multiplication_operator_defect", hermitian_defect(&dq), 0.0, sc),
    ])
}

fn spectral(cfg: VerifyConfig) -> Result<Vec<Check>> {
    let sc = cfg.tol_scale;
    let cot = |p: f64| p.cos() / p.sin();
    let err = |steps: usize| -> Result<f64> {
        let s = integrate_log_ode(cot, 0.1, FRAC_PI_4, steps)?;
        let (phi, y) = *s.last().expect("nonempty");
        Ok((y - (phi.sin() / 0.1f64.sin()).ln()).abs())
    };
    let ratio = err(40)? / err(80)?;
    let long = integrate_log_ode(cot, FRAC_PI_4, 1e-3, 100_000)?;
    let (pe, ye) = *long.last().expect("nonempty");
    let cot_err = (ye - (pe.sin() / FRAC_PI_4.sin()).ln()).abs();
    let csc = integrate_log_ode(|p: f64| 1.0 / p.sin(), FRAC_PI_4, 1e-3, 100_000)?;
    let (pc, yc) = *csc.last().expect("nonempty");
    let csc_err = (yc - ((pc / 2.0).tan() / (FRAC_PI_4 / 2.0).tan()).ln()).abs();
    let xs: Vec<f64> = (0..40).map(|i| -3.0 + 0.1 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| -2.75 * x + 0.5).collect();
    let affine = (least_squares_slope(&xs, &ys)? + 2.75).abs();
    let phis: Vec<f64> = (0..50).map(|i| 1e-3 * 10f64.powf(i as f64 / 49.0)).collect();
    let logs: Vec<f64> = phis.iter().map(|p| 3.0 * p.sin().ln()).collect();
    let power = (fit_exponent(&phis, &logs)? - 3.0).abs();
    Ok(vec![
        Check::within("rk4_order_ratio", ratio, 12.0, 20.0),
        Check::at_most("cot_antiderivative", cot_err, 1e-8, sc),
        Check::at_most("csc_antiderivative", csc_err, 1e-8, sc),
        Check::at_most("fit_affine_exactness", affine, 1e-12, sc),
        Check::at_most("fit_power_law", power, 1e-6, sc),
    ])
}

fn torus(cfg: VerifyConfig) -> Result<Vec<Check>> {
    let sc = cfg.tol_scale;
    let g: TorusGeometry = "0.3sin".parse()?;
    let spectra = g.spectra_dl(&[0, 3, -7], 64, cfg.exec)?;
    let integral = spectra.iter().flatten().map(|v| (v - v.round()).abs()).fold(0.0, f64::max);
    let mut spread: f64 = 0.0;
    for a in &spectra {
        for b in &spectra {
            spread = spread.max(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
        }
    }
    let mut eig_residual: f64 = 0.0;
    for n in -3..=3 {
        eig_residual = eig_residual.max(g.dl_eigenfunction_residual(n, 64)?);
    }
    let band = g.spectrum_dq_band(2, 128)?;
    let (lo, hi) = (2.0 * (-0.3f64).exp(), 2.0 * 0.3f64.exp());
    let contained = band.iter().all(|&v| lo <= v && v <= hi);
    let endpoint = (band[0] - lo).abs().max((band[band.len() - 1] - hi).abs());
    let zero = g.spectrum_dq_band(0, 128)?.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most("dl_integrality", integral, INTEGER_TOL, sc),
        Check::at_most("dl_mode_independence", spread, INTEGER_TOL, sc),
        Check::at_most("dl_eigenfunction_residual", eig_residual, 1e-6, sc),
        Check::flag("dq_band_containment", contained),
        Check::at_most("dq_band_endpoints", endpoint, 1e-3, sc),
        Check::at_most("dq_zero_mode", zero, 0.0, sc),
    ])
}

fn index(cfg: VerifyConfig) -> Result<Vec<Check>> {
    let t = build_index_table(-5..=5, -6..=6, Method::Both, NumericSettings::default(), cfg.exec)?;
    let mut branch = 0i64;
    let mut table = 0i64;
    for (&(n, m), e) in &t.entries {
        let num = e.numeric.as_ref().expect("both routes requested");
        branch += i64::from(num.index() != index_closed_form(n, m) || e.counts().index() != index_closed_form(n, m));
        table += i64::from(num.counts.total() != kernel_total_table(n, m));
    }
    Ok(vec![
        Check::equal("blocks", t.len() as i64, 143),
        Check::equal("index_branch_mismatches", branch, 0),
        Check::equal("kernel_table_mismatches", table, 0),
        Check::equal("route_mismatches", t.route_mismatches().len() as i64, 0),
        Check::equal("structural_violations", t.structural_violations().len() as i64, 0),
    ])
}
