use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::scalar::{ComplexDd, Scalar};
use crate::evaluator::{EvalOptions, RatioState, StepBuffers};
use crate::families::{CoefficientProvider, Recurrence};
use crate::lattice::{LatticePath, MultiIndex, RaySpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    /// 0-based directions.
    pub k: usize,
    pub l: usize,
    pub x: Complex64,
    pub rows: Vec<GapRow>,
}

/// `D = |P_n / P_{n+e_k} - P_{n-e_l} / P_{n-e_l+e_k}|` along the ray, both
/// ratios propagated independently from the origin. For `gamma > 0` the
/// point is `n^gamma x` and `D` is multiplied by `n^gamma`.
pub fn lemma_gap(
    provider: &CoefficientProvider,
    ray: &RaySpec,
    k: usize,
    l: usize,
    x: Complex64,
    n_grid: &[usize],
    opts: EvalOptions,
) -> Result<GapReport> {
    let r = provider.dim();
    if k >= r || l >= r {
        return Err(Error::InvalidArgument(format!("directions must lie in 1..={r}")));
    }
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("the n grid is empty".into()));
    }
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let gamma = ray.gamma();
    let rows = grid
        .par_iter()
        .map(|&n| {
            let idx = ray.index(n);
            let lower = idx
                .minus(l)
                .ok_or_else(|| Error::InvalidArgument(format!("n_{} = 0 at {idx}; the gap needs n_l >= 1", l + 1)))?;
            let p = provider.at_reference(n as f64);
            let s = if gamma > 0.0 { (n as f64).powf(gamma) } else { 1.0 };
            let xs = x * s;
            if !(xs.im.abs() >= opts.delta_min) {
                return Err(Error::NearAxis { im_abs: xs.im.abs(), delta_min: opts.delta_min });
            }
            let d = if opts.extended {
                gap_at::<ComplexDd>(&p, &idx, &lower, k, xs)?
            } else {
                gap_at::<Complex64>(&p, &idx, &lower, k, xs)?
            };
            Ok(GapRow { n, d: d * s })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapReport { k, l, x, rows })
}

fn last_ratio<S: Scalar>(p: &CoefficientProvider, target: &MultiIndex, k: usize, x: Complex64) -> Result<S> {
    let mut path = LatticePath::interleaved(target);
    path.push(k);
    let mut state = RatioState::<S>::new(p.dim(), x);
    let mut buf = StepBuffers::new(p.dim());
    for &step in path.steps() {
        state.advance_with(step, p, &mut buf)?;
    }
    Ok(state.h[k])
}

fn gap_at<S: Scalar>(
    p: &CoefficientProvider,
    n: &MultiIndex,
    lower: &MultiIndex,
    k: usize,
    x: Complex64,
) -> Result<f64> {
    let upper = last_ratio::<S>(p, n, k, x)?;
    let below = last_ratio::<S>(p, lower, k, x)?;
    Ok((upper - below).abs())
}
