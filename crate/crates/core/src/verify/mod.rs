//! Numerical experiments that tie the evaluators to the limit equation.
//!
//! The thresholds used by consumers of these reports are empirical
//! regression anchors; convergence is established, rates are not.

mod convergence;
mod density;
mod gap;
mod interlace;

use num_complex::Complex64;

use crate::algebraic::{partial_fraction_numerator, principal_branch};
use crate::error::{Error, Result};
use crate::families::LimitData;

pub use convergence::{
    rectangle_sample, thm1_convergence, thm2_convergence, ConvergenceMode, ConvergenceReport, ConvergenceRow,
};
pub use density::{density_compare, DensityReport};
pub use gap::{lemma_gap, GapReport, GapRow};
pub use interlace::{interlace_check, strictly_interlace, InterlaceEntry, InterlaceReport, MAX_INTERLACE_WEIGHT};

/// Largest `|z_twofold(x) - z_merged(x)|` over `xs`, where `z_twofold` comes
/// from `b = (beta, ..., beta)` with weights `a` and `z_merged` from the
/// single group `(beta, sum a)`.
pub fn merge_consistency_check(a: &[f64], beta: f64, xs: &[Complex64]) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("need at least one weight".into()));
    }
    let twofold = partial_fraction_numerator(&LimitData::new(a.to_vec(), vec![beta; a.len()], 0.0)?)?;
    let merged = partial_fraction_numerator(&LimitData::new(vec![a.iter().sum()], vec![beta], 0.0)?)?;
    let mut worst = 0.0f64;
    for &x in xs {
        if x.im == 0.0 {
            return Err(Error::InvalidArgument(format!("sample point {x} lies on the real axis")));
        }
        let d = (principal_branch(&twofold, x)?.z - principal_branch(&merged, x)?.z).norm();
        worst = worst.max(d);
    }
    Ok(worst)
}

pub(crate) fn check_off_axis(xs: &[Complex64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("need at least one sample point".into()));
    }
    if let Some(x) = xs.iter().find(|x| x.im == 0.0 || !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("sample point {x} must lie off the real axis")));
    }
    Ok(())
}
