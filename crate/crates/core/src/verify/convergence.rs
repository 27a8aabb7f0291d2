use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::check_off_axis;
use crate::algebraic::{partial_fraction_numerator, ratio_limit};
use crate::error::{Error, Result};
use crate::evaluator::{EvalOptions, Evaluator, Scaling};
use crate::families::{limit_coefficients, CoefficientProvider, LimitData, Recurrence};
use crate::lattice::RaySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceMode {
    Unscaled,
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `|ratio - (z(x) - b_k)|` per sample point.
    pub errors: Vec<f64>,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub q: Vec<f64>,
    pub gamma: f64,
    /// 0-based direction.
    pub k: usize,
    pub xs: Vec<Complex64>,
    /// Predicted limits `z(x) - b_k`, one per sample point.
    pub predicted: Vec<Complex64>,
    pub limits: LimitData,
    pub rows: Vec<ConvergenceRow>,
    pub mode: ConvergenceMode,
}

/// Eight points on the rectangle `[re_lo, re_hi] x {0.5, 2}`.
pub fn rectangle_sample(re_lo: f64, re_hi: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(8);
    for im in [0.5, 2.0] {
        for i in 0..4 {
            out.push(Complex64::new(re_lo + (re_hi - re_lo) * i as f64 / 3.0, im));
        }
    }
    out
}

/// Unscaled ratios `P_{n+e_k}(x) / P_n(x)` against `z(x) - b_k`.
pub fn thm1_convergence(
    provider: &CoefficientProvider,
    ray: &RaySpec,
    k: usize,
    xs: &[Complex64],
    n_grid: &[usize],
    opts: EvalOptions,
) -> Result<ConvergenceReport> {
    if ray.gamma() != 0.0 {
        return Err(Error::InvalidArgument("unscaled convergence needs gamma = 0".into()));
    }
    run(provider, ray, k, xs, n_grid, opts, ConvergenceMode::Unscaled)
}

/// Ratios `P_{n+e_k}(n^g x) / (n^g P_n(n^g x))` against `z(x) - b_k`, the
/// scaled parameters (if any) re-referenced to `N = n` on every row.
/// Delegates to [`thm1_convergence`] when `gamma = 0`.
pub fn thm2_convergence(
    provider: &CoefficientProvider,
    ray: &RaySpec,
    k: usize,
    xs: &[Complex64],
    n_grid: &[usize],
    opts: EvalOptions,
) -> Result<ConvergenceReport> {
    if ray.gamma() == 0.0 {
        return thm1_convergence(provider, ray, k, xs, n_grid, opts);
    }
    run(provider, ray, k, xs, n_grid, opts, ConvergenceMode::Scaled)
}

fn run(
    provider: &CoefficientProvider,
    ray: &RaySpec,
    k: usize,
    xs: &[Complex64],
    n_grid: &[usize],
    opts: EvalOptions,
    mode: ConvergenceMode,
) -> Result<ConvergenceReport> {
    check_off_axis(xs)?;
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("the n grid is empty".into()));
    }
    if k >= provider.dim() {
        return Err(Error::InvalidArgument(format!("direction {} out of range", k + 1)));
    }
    let limits = limit_coefficients(provider, ray)?;
    let eq = partial_fraction_numerator(&limits)?;
    let predicted = xs.iter().map(|&x| ratio_limit(&eq, x, k)).collect::<Result<Vec<_>>>()?;
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let gamma = ray.gamma();
    let rows = grid
        .par_iter()
        .map(|&n| {
            let idx = ray.index(n);
            let p = provider.at_reference(n as f64);
            let ev = Evaluator::with_options(&p, opts);
            let scaled = (mode == ConvergenceMode::Scaled).then_some(Scaling { gamma, n: n as f64 });
            let errors = xs
                .iter()
                .zip(&predicted)
                .map(|(&x, &want)| Ok((ev.neighbor_ratio(&idx, k, x, scaled)? - want).norm()))
                .collect::<Result<Vec<f64>>>()?;
            let max_error = errors.iter().copied().fold(0.0, f64::max);
            Ok(ConvergenceRow { n, errors, max_error })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        family: provider.family().name().to_string(),
        q: ray.q().to_vec(),
        gamma,
        k,
        xs: xs.to_vec(),
        predicted,
        limits,
        rows,
        mode,
    })
}
