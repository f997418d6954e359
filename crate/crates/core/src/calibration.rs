//! Accuracy as a function of `beta` on a fixed suite, and the grid point
//! whose accuracy best matches a target.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{build_suite, evaluate_items, EvalConfig, EvalReport, ItemOutcome, Suite};
use crate::inference::LikelihoodParams;

/// Mean human accuracy over the six sequence classes. Used as the default
/// calibration target.
pub const HUMAN_REFERENCE_ACCURACY: f64 = 0.86705;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BetaGrid(Vec<f64>);

impl BetaGrid {
    /// Strictly increasing points in `(0, 1]`.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter("beta grid is empty".into()));
        }
        if points.iter().any(|&b| !(b > 0.0 && b <= 1.0)) {
            return Err(Error::Parameter("beta grid points must lie in (0, 1]".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parameter("beta grid must be strictly increasing".into()));
        }
        Ok(BetaGrid(points))
    }

    /// `n` points evenly spaced in `log10` between `lo` and `hi` inclusive.
    pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo) {
            return Err(Error::Parameter(format!("bad log grid bounds {lo}:{hi}")));
        }
        let points = match n {
            0 => vec![],
            1 => vec![lo],
            _ => {
                let (a, b) = (lo.log10(), hi.log10());
                (0..n)
                    .map(|i| match i {
                        0 => lo,
                        i if i == n - 1 => hi,
                        i => 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64),
                    })
                    .collect()
            }
        };
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

impl Default for BetaGrid {
    fn default() -> Self {
        BetaGrid::log_spaced(1e-6, 1.0, 25).expect("valid default grid")
    }
}

impl TryFrom<Vec<f64>> for BetaGrid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        BetaGrid::new(points)
    }
}

impl From<BetaGrid> for Vec<f64> {
    fn from(g: BetaGrid) -> Self {
        g.0
    }
}

/// `lo:hi:n`, log spaced.
impl FromStr for BetaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("grid must look like lo:hi:n, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        BetaGrid::log_spaced(lo, hi, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub beta: f64,
    pub accuracy: f64,
}

/// The accuracy curve with every per-item decision behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveDetail {
    pub curve: Vec<CurvePoint>,
    pub reports: Vec<EvalReport>,
    /// `decisions[k][i]`: outcome of item `i` at grid point `k`.
    pub decisions: Vec<Vec<ItemOutcome>>,
}

/// Evaluates the same suite at every grid point.
pub fn accuracy_curve_detailed(grid: &BetaGrid, suite: &Suite, params: &LikelihoodParams) -> Result<CurveDetail> {
    if suite.items.is_empty() {
        return Err(Error::Parameter(
            "cannot trace an accuracy curve on an empty suite".into(),
        ));
    }
    let mut detail = CurveDetail {
        curve: Vec::with_capacity(grid.points().len()),
        reports: Vec::with_capacity(grid.points().len()),
        decisions: Vec::with_capacity(grid.points().len()),
    };
    for &beta in grid.points() {
        let outcomes = evaluate_items(suite, beta, params)?;
        let report = EvalReport::from_outcomes(suite, &outcomes, beta, params);
        detail.curve.push(CurvePoint {
            beta,
            accuracy: report.accuracy.expect("non-empty suite"),
        });
        detail.reports.push(report);
        detail.decisions.push(outcomes);
    }
    Ok(detail)
}

pub fn accuracy_curve_on(grid: &BetaGrid, suite: &Suite, params: &LikelihoodParams) -> Result<Vec<CurvePoint>> {
    Ok(accuracy_curve_detailed(grid, suite, params)?.curve)
}

/// Builds one suite from `config` and evaluates it at every grid point.
pub fn accuracy_curve(grid: &BetaGrid, config: &EvalConfig, params: &LikelihoodParams) -> Result<Vec<CurvePoint>> {
    accuracy_curve_on(grid, &build_suite(config)?, params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub target: f64,
    pub beta_eff: f64,
    pub achieved: f64,
    pub curve: Vec<CurvePoint>,
}

impl CalibrationResult {
    pub fn curve_csv(&self) -> String {
        let mut out = String::from("beta,accuracy\n");
        for p in &self.curve {
            let _ = writeln!(out, "{},{}", p.beta, p.accuracy);
        }
        out
    }
}

/// Grid point minimizing `|accuracy - target|`; ties go to the smallest beta.
pub fn select_beta(target: f64, curve: &[CurvePoint]) -> Result<CalibrationResult> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::Parameter(format!(
            "target accuracy must lie in [0, 1], got {target}"
        )));
    }
    let best = curve
        .iter()
        .reduce(|best, p| {
            if (p.accuracy - target).abs() < (best.accuracy - target).abs() {
                p
            } else {
                best
            }
        })
        .ok_or_else(|| Error::Parameter("empty accuracy curve".into()))?;
    Ok(CalibrationResult {
        target,
        beta_eff: best.beta,
        achieved: best.accuracy,
        curve: curve.to_vec(),
    })
}

pub fn calibrate_on(
    target: f64,
    grid: &BetaGrid,
    suite: &Suite,
    params: &LikelihoodParams,
) -> Result<CalibrationResult> {
    select_beta(target, &accuracy_curve_on(grid, suite, params)?)
}

pub fn calibrate(
    target: f64,
    grid: &BetaGrid,
    config: &EvalConfig,
    params: &LikelihoodParams,
) -> Result<CalibrationResult> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::Parameter(format!(
            "target accuracy must lie in [0, 1], got {target}"
        )));
    }
    calibrate_on(target, grid, &build_suite(config)?, params)
}
