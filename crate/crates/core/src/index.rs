//! Kernel dimensions and the blockwise equivariant index on the sphere.
//!
//! Two routes: integer arithmetic on the indicial exponents, and a numerical
//! oracle that integrates the operator-derived radial ODEs toward each pole
//! and reads the exponent off a log–log fit.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::ops::RangeInclusive;

use crate::parallel::{try_map, Execution};
use crate::spectral::{fit_exponent, integrate_linear_ode, StepVariable};
use crate::sphere::{reduce_block, ChartId, Chirality, RadialODE, SphereBlock};
use crate::{Error, Result};

/// Exponent estimates farther than this from an integer are rejected.
pub const ROUNDING_GUARD: f64 = 0.1;
pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_STEPS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelCounts {
    pub dim_ker_plus: u32,
    pub dim_ker_minus: u32,
}

impl KernelCounts {
    pub fn index(&self) -> i64 {
        self.dim_ker_plus as i64 - self.dim_ker_minus as i64
    }

    pub fn total(&self) -> u32 {
        self.dim_ker_plus + self.dim_ker_minus
    }
}

/// `d⁺ = [m ≤ −|n|]`, `d⁻ = [m ≥ |n|]`.
pub fn kernel_dims_closed_form(n: i64, m: i64) -> KernelCounts {
    KernelCounts { dim_ker_plus: u32::from(m <= -n.abs()), dim_ker_minus: u32::from(m >= n.abs()) }
}

/// The published branch form of the index.
pub fn index_closed_form(n: i64, m: i64) -> i64 {
    let a = n.abs();
    if m > a || (m == a && n != 0) {
        -1
    } else if m < -a || (m == -a && n != 0) {
        1
    } else {
        0
    }
}

/// Kernel-dimension table: 2 at the origin, 1 when `|n| ≤ |m| ≠ 0`, else 0.
pub fn kernel_total_table(n: i64, m: i64) -> u32 {
    if n == 0 && m == 0 {
        2
    } else if n.abs() <= m.abs() {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate {
    pub chart: ChartId,
    pub chirality: Chirality,
    /// Raw least-squares slope.
    pub estimate: f64,
    /// Snapped to the nearest integer.
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericIndex {
    pub counts: KernelCounts,
    /// Upper/+, upper/−, lower/+, lower/−.
    pub exponents: Vec<ExponentEstimate>,
}

impl NumericIndex {
    pub fn index(&self) -> i64 {
        self.counts.index()
    }

    pub fn exponent(&self, chart: ChartId, chirality: Chirality) -> Option<&ExponentEstimate> {
        self.exponents.iter().find(|e| e.chart == chart && e.chirality == chirality)
    }
}

/// Integrate `∂_φψ = rψ` from `π/4` down to `ε` in `ln φ` and fit the slope
/// of `ln|ψ|` against `ln sin φ` on `[ε, 10ε]`.
pub fn estimate_exponent(ode: &RadialODE, epsilon: f64, steps: usize) -> Result<f64> {
    let samples = integrate_linear_ode(
        |phi| num_complex::Complex64::new(ode.r(phi), 0.0),
        FRAC_PI_4,
        epsilon,
        steps,
        StepVariable::Logarithmic,
    )?;
    let (phis, logs): (Vec<f64>, Vec<f64>) =
        samples.iter().filter(|s| s.phi <= 10.0 * epsilon * (1.0 + 1e-12)).map(|s| (s.phi, s.log_abs)).unzip();
    fit_exponent(&phis, &logs)
}

/// Nearest integer, or an error when the estimate is outside the guard.
pub fn snap_exponent(estimate: f64) -> Result<i64> {
    let snapped = estimate.round();
    if !((estimate - snapped).abs() <= ROUNDING_GUARD) {
        return Err(Error::NonIntegerExponent { estimate, guard: ROUNDING_GUARD });
    }
    Ok(snapped as i64)
}

pub fn index_numerical(n: i64, m: i64, epsilon: f64, steps: usize) -> Result<NumericIndex> {
    if !(1e-4..=1e-2).contains(&epsilon) {
        return Err(Error::InvalidInput(format!("ε = {epsilon} outside [1e-4, 1e-2]")));
    }
    if steps < 10_000 {
        return Err(Error::InvalidInput(format!("steps = {steps} below 10000")));
    }
    let block = SphereBlock::new(n, m);
    let mut exponents = Vec::with_capacity(4);
    for chart in ChartId::BOTH {
        for chirality in Chirality::BOTH {
            let ode = reduce_block(block, chart, chirality)?;
            let estimate = estimate_exponent(&ode, epsilon, steps)?;
            let exponent = snap_exponent(estimate)?;
            exponents.push(ExponentEstimate { chart, chirality, estimate, exponent });
        }
    }
    // A component contributes iff it is regular at both poles; the equatorial
    // match is one linear condition on two free scales.
    let regular = |ch: Chirality| exponents.iter().filter(|e| e.chirality == ch).all(|e| e.exponent >= 0);
    let counts = KernelCounts {
        dim_ker_plus: u32::from(regular(Chirality::Plus)),
        dim_ker_minus: u32::from(regular(Chirality::Minus)),
    };
    Ok(NumericIndex { counts, exponents })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Numeric,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Numeric => "numeric",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub closed: Option<KernelCounts>,
    pub numeric: Option<NumericIndex>,
}

impl IndexEntry {
    /// Closed-form counts when available, numeric otherwise.
    pub fn counts(&self) -> KernelCounts {
        self.closed.or_else(|| self.numeric.as_ref().map(|n| n.counts)).expect("entry holds at least one route")
    }

    pub fn routes_agree(&self) -> bool {
        match (&self.closed, &self.numeric) {
            (Some(c), Some(n)) => *c == n.counts,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexTable {
    pub method: Method,
    pub entries: BTreeMap<(i64, i64), IndexEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericSettings {
    pub epsilon: f64,
    pub steps: usize,
}

impl Default for NumericSettings {
    fn default() -> Self {
        Self { epsilon: DEFAULT_EPSILON, steps: DEFAULT_STEPS }
    }
}

pub fn build_index_table(
    n_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
    method: Method,
    settings: NumericSettings,
    exec: Execution,
) -> Result<IndexTable> {
    if n_range.is_empty() || m_range.is_empty() {
        return Err(Error::InvalidInput("index ranges must be nonempty".into()));
    }
    let blocks: Vec<(i64, i64)> = n_range.flat_map(|n| m_range.clone().map(move |m| (n, m))).collect();
    let entries = try_map(exec, &blocks, |&(n, m)| -> Result<((i64, i64), IndexEntry)> {
        let closed = (method != Method::Numeric).then(|| kernel_dims_closed_form(n, m));
        let numeric = if method != Method::Closed {
            Some(index_numerical(n, m, settings.epsilon, settings.steps)?)
        } else {
            None
        };
        Ok(((n, m), IndexEntry { closed, numeric }))
    })?;
    Ok(IndexTable { method, entries: entries.into_iter().collect() })
}

impl IndexTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index(&self, n: i64, m: i64) -> Option<i64> {
        self.entries.get(&(n, m)).map(|e| e.counts().index())
    }

    pub fn route_mismatches(&self) -> Vec<(i64, i64)> {
        self.entries.iter().filter(|(_, e)| !e.routes_agree()).map(|(k, _)| *k).collect()
    }

    /// Every violated structural property, as a human-readable line.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (&(n, m), e) in &self.entries {
            let c = e.counts();
            let idx = c.index();
            if !(-1..=1).contains(&idx) {
                out.push(format!("({n},{m}): index {idx} outside [-1, 1]"));
            }
            if idx != index_closed_form(n, m) {
                out.push(format!("({n},{m}): index {idx} differs from the branch formula"));
            }
            if c.total() != kernel_total_table(n, m) {
                out.push(format!("({n},{m}): kernel total {} differs from the table", c.total()));
            }
            let edge = n.abs().max(1);
            if m >= edge && idx != -1 {
                out.push(format!("({n},{m}): expected index -1 on the stable positive tail"));
            }
            if m <= -edge && idx != 1 {
                out.push(format!("({n},{m}): expected index +1 on the stable negative tail"));
            }
            if let Some(other) = self.index(-n, m) {
                if other != idx {
                    out.push(format!("({n},{m}): index not symmetric under n -> -n"));
                }
            }
            if let Some(other) = self.index(n, -m) {
                if other != -idx {
                    out.push(format!("({n},{m}): index not antisymmetric under m -> -m"));
                }
            }
            if (c.total() > 0) != (n.abs() <= m.abs()) {
                out.push(format!("({n},{m}): kernel support differs from |n| <= |m|"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(kernel_dims_closed_form(0, 0), KernelCounts { dim_ker_plus: 1, dim_ker_minus: 1 });
        assert_eq!(kernel_dims_closed_form(2, 3), KernelCounts { dim_ker_plus: 0, dim_ker_minus: 1 });
        assert_eq!(kernel_dims_closed_form(3, 1).total(), 0);
        assert_eq!(index_closed_form(2, 3), -1);
        assert_eq!(index_closed_form(0, 0), 0);
        assert_eq!(index_closed_form(2, -2), 1);
    }

    #[test]
    fn counts_and_branches_agree() {
        for n in -8..=8 {
            for m in -8..=8 {
                let c = kernel_dims_closed_form(n, m);
                assert_eq!(c.index(), index_closed_form(n, m));
                assert_eq!(c.total(), kernel_total_table(n, m));
            }
        }
    }

    #[test]
    fn numerical_example() {
        let r = index_numerical(2, 3, 1e-3, 20_000).unwrap();
        let get = |c, ch| r.exponent(c, ch).unwrap().exponent;
        assert_eq!(get(ChartId::Upper, Chirality::Plus), -1);
        assert_eq!(get(ChartId::Lower, Chirality::Plus), -5);
        assert_eq!(get(ChartId::Upper, Chirality::Minus), 1);
        assert_eq!(get(ChartId::Lower, Chirality::Minus), 5);
        assert_eq!(r.counts, KernelCounts { dim_ker_plus: 0, dim_ker_minus: 1 });
        assert_eq!(r.index(), -1);
        for e in &r.exponents {
            assert!((e.estimate - e.exponent as f64).abs() < 1e-3);
        }
        let z = index_numerical(0, 0, 1e-3, 10_000).unwrap();
        assert!(z.exponents.iter().all(|e| e.estimate.abs() < 1e-12));
        assert_eq!(z.counts.total(), 2);
    }

    #[test]
    fn numerical_preconditions() {
        assert!(index_numerical(1, 1, 1e-1, 20_000).is_err());
        assert!(index_numerical(1, 1, 1e-3, 100).is_err());
    }

    #[test]
    fn rounding_guard() {
        assert_eq!(snap_exponent(-2.04), Ok(-2));
        assert_eq!(snap_exponent(2.3), Err(Error::NonIntegerExponent { estimate: 2.3, guard: ROUNDING_GUARD }));
        assert!(snap_exponent(f64::NAN).is_err());
        // A starved integration lands far from the true exponent.
        let ode = RadialODE::closed_form(SphereBlock::new(40, -40), ChartId::Upper, Chirality::Plus);
        let est = estimate_exponent(&ode, 1e-2, 20).unwrap();
        assert!(!matches!(snap_exponent(est), Ok(80)));
    }

    #[test]
    fn n_two_row() {
        let t = build_index_table(2..=2, -6..=6, Method::Closed, NumericSettings::default(), Execution::Sequential)
            .unwrap();
        let row: Vec<i64> = (-6..=6).map(|m| t.index(2, m).unwrap()).collect();
        assert_eq!(row, vec![1, 1, 1, 1, 1, 0, 0, 0, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn m_zero_column() {
        let t = build_index_table(-5..=5, 0..=0, Method::Closed, NumericSettings::default(), Execution::Sequential)
            .unwrap();
        for n in -5..=5 {
            assert_eq!(t.entries[&(n, 0)].counts().total() > 0, n == 0);
        }
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn table_structure() {
        let t =
            build_index_table(-5..=5, -6..=6, Method::Closed, NumericSettings::default(), Execution::Parallel).unwrap();
        assert_eq!(t.len(), 143);
        assert!(t.structural_violations().is_empty());
        let mut broken = t.clone();
        broken.entries.get_mut(&(1, 3)).unwrap().closed = Some(KernelCounts { dim_ker_plus: 1, dim_ker_minus: 1 });
        assert!(!broken.structural_violations().is_empty());
        assert!(
            build_index_table(1..=0, 0..=0, Method::Closed, NumericSettings::default(), Execution::Sequential).is_err()
        );
    }

    #[test]
    fn both_routes_on_a_window() {
        let t =
            build_index_table(-2..=2, -3..=3, Method::Both, NumericSettings::default(), Execution::Parallel).unwrap();
        assert!(t.route_mismatches().is_empty());
        let s =
            build_index_table(-2..=2, -3..=3, Method::Both, NumericSettings::default(), Execution::Sequential).unwrap();
        assert_eq!(t, s);
    }
}
