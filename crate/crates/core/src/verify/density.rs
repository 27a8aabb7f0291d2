use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{EvalOptions, Evaluator, MAX_ZERO_DEGREE};
use crate::families::CoefficientProvider;
use crate::lattice::{MultiIndex, RaySpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub index: MultiIndex,
    pub zeros: Vec<f64>,
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    /// Fraction of zeros per bin; sums to 1.
    pub histogram: Vec<f64>,
    pub centers: Vec<f64>,
    /// Zero counting measure smoothed at `t + i eps`, per center.
    pub zero_density: Vec<f64>,
    /// `-Im S(t + i eps) / pi` with `S` the Stieltjes estimate at index
    /// `ray_index(4n)`, per center.
    pub model_density: Vec<f64>,
    pub epsilon: f64,
    /// Largest `|zero_density - model_density|` over the centers.
    pub discrepancy: f64,
}

/// Compares the zeros of `P_{ray(n)}` with the density predicted by the
/// Stieltjes estimate at `ray(4n)`. Both sides are smoothed with the same
/// Poisson kernel of width `eps = 2 * bin width`, so the discrepancy is a
/// difference of two densities at the same resolution.
pub fn density_compare(
    provider: &CoefficientProvider,
    ray: &RaySpec,
    n: usize,
    bins: usize,
    opts: EvalOptions,
) -> Result<DensityReport> {
    if bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin".into()));
    }
    if ray.gamma() != 0.0 {
        return Err(Error::InvalidArgument("density comparison is defined for gamma = 0".into()));
    }
    let index = ray.index(n);
    let deg = index.weight();
    if deg == 0 || deg > MAX_ZERO_DEGREE {
        return Err(Error::InvalidArgument(format!("zero count {deg} must lie in 1..={MAX_ZERO_DEGREE}")));
    }
    let ev = Evaluator::with_options(provider, opts);
    let zeros = ev.real_zeros(&index)?;
    let (zmin, zmax) = (zeros[0], zeros[deg - 1]);
    let pad = if deg > 1 && zmax > zmin { (zmax - zmin) / (deg - 1) as f64 / 2.0 } else { 0.5 };
    let (lo, hi) = (zmin - pad, zmax + pad);
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0usize; bins];
    for &z in &zeros {
        let b = (((z - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let histogram: Vec<f64> = counts.iter().map(|&c| c as f64 / deg as f64).collect();
    let centers: Vec<f64> = (0..bins).map(|i| lo + width * (i as f64 + 0.5)).collect();
    let eps = 2.0 * width;
    let zero_density: Vec<f64> = centers
        .iter()
        .map(|&t| zeros.iter().map(|&z| eps / ((t - z).powi(2) + eps * eps)).sum::<f64>() / (PI * deg as f64))
        .collect();
    let big = ray.index(4 * n);
    let model_density = centers
        .iter()
        .map(|&t| Ok(-ev.stieltjes_estimate(&big, Complex64::new(t, eps))?.im / PI))
        .collect::<Result<Vec<f64>>>()?;
    let discrepancy =
        zero_density.iter().zip(&model_density).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(DensityReport {
        index,
        zeros,
        edges,
        histogram,
        centers,
        zero_density,
        model_density,
        epsilon: eps,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcsine_mass(a: f64, b: f64) -> f64 {
        let clamp = |t: f64| t.clamp(-1.0, 1.0);
        (clamp(b).asin() - clamp(a).asin()) / PI
    }

    #[test]
    fn arcsine_case() {
        let p = CoefficientProvider::constant(vec![0.25], vec![0.0]).unwrap();
        let ray = RaySpec::new(vec![1.0], 0.0).unwrap();
        let r48 = density_compare(&p, &ray, 48, 12, EvalOptions::default()).unwrap();
        assert!(r48.discrepancy < 0.15);
        assert!((r48.histogram.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let hist_err = r48
            .histogram
            .iter()
            .enumerate()
            .map(|(i, m)| (m - arcsine_mass(r48.edges[i], r48.edges[i + 1])).abs())
            .fold(0.0, f64::max);
        assert!(hist_err < 0.03, "{hist_err}");
        let r16 = density_compare(&p, &ray, 16, 12, EvalOptions::default()).unwrap();
        assert!(r48.discrepancy < r16.discrepancy);
    }

    #[test]
    fn point_mass() {
        let p = CoefficientProvider::constant(vec![0.0], vec![0.0]).unwrap();
        let ray = RaySpec::new(vec![1.0], 0.0).unwrap();
        let rep = density_compare(&p, &ray, 10, 5, EvalOptions::default()).unwrap();
        assert_eq!(rep.histogram, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }
}
