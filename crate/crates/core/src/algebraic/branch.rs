//! Principal branch selection by continuation from far above the real axis,
//! and branch points of the limit equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::roots::all_roots;
use super::{build_equation, LimitEquation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchOptions {
    /// Geometric factor for the distance to the target point per step.
    pub descent: f64,
    /// Relative root separation below which a step is retried with half size.
    pub ambiguity: f64,
}

impl Default for BranchOptions {
    fn default() -> Self {
        BranchOptions { descent: 0.7, ambiguity: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathLog {
    pub steps: usize,
    pub halvings: usize,
    /// Smallest distance between the tracked root and any other root.
    pub min_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchResult {
    pub x: Complex64,
    pub z: Complex64,
    pub all_roots: Vec<Complex64>,
    pub path_log: PathLog,
    /// `|F(z; x)|`.
    pub residual: f64,
}

/// A double root `z` of the limit equation for the parameter value `x`;
/// `x` is `None` when `z` is a pole of `A/B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub z: Complex64,
    pub x: Option<Complex64>,
}

/// The roots of `B^2 - A B' + A' B` with the matching `x = z + A(z)/B(z)`.
pub fn branch_points(eq: &LimitEquation) -> Result<Vec<BranchPoint>> {
    if eq.numerator.is_zero() {
        return Err(Error::InvalidArgument("branch points need a nonzero numerator".into()));
    }
    let (a, b) = (&eq.numerator, &eq.denominator);
    let disc = &(&(b * b) - &(a * &b.derivative())) + &(&a.derivative() * b);
    let scale = eq.scale();
    let mut out: Vec<BranchPoint> = all_roots(&disc)?
        .into_iter()
        .map(|z| {
            let bz = b.eval(z);
            let x = if bz.norm() <= 1e-12 * scale.powi(eq.order() as i32) {
                None
            } else {
                Some(z + a.eval(z) / bz)
            };
            BranchPoint { z, x }
        })
        .collect();
    out.sort_by(|p, q| p.z.re.total_cmp(&q.z.re).then(p.z.im.total_cmp(&q.z.im)));
    Ok(out)
}

pub fn principal_branch(eq: &LimitEquation, x: Complex64) -> Result<BranchResult> {
    principal_branch_with(eq, x, &BranchOptions::default())
}

/// `z(x) - b_k` with the unmerged `b_k`.
pub fn ratio_limit(eq: &LimitEquation, x: Complex64, k: usize) -> Result<Complex64> {
    let bk = *eq
        .b_direction
        .get(k)
        .ok_or_else(|| Error::InvalidArgument(format!("direction {} out of range", k + 1)))?;
    Ok(principal_branch(eq, x)?.z - bk)
}

fn nearest_two(roots: &[Complex64], target: Complex64) -> (usize, f64, f64) {
    let mut best = (0usize, f64::INFINITY, f64::INFINITY);
    for (i, r) in roots.iter().enumerate() {
        let d = (r - target).norm();
        if d < best.1 {
            best = (i, d, best.1);
        } else if d < best.2 {
            best.2 = d;
        }
    }
    best
}

fn gap(roots: &[Complex64], i: usize) -> f64 {
    roots
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, r)| (r - roots[i]).norm())
        .fold(f64::INFINITY, f64::min)
}

fn tracking_error(eq: &LimitEquation, at: Complex64) -> Error {
    let near = branch_points(eq)
        .ok()
        .and_then(|bps| {
            bps.into_iter()
                .filter_map(|p| p.x)
                .min_by(|p, q| (p - at).norm().total_cmp(&(q - at).norm()))
        })
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    Error::Tracking { near_re: at.re, near_im: at.im, bp_re: near.re, bp_im: near.im }
}

pub fn principal_branch_with(eq: &LimitEquation, x: Complex64, opts: &BranchOptions) -> Result<BranchResult> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument("x must be finite".into()));
    }
    if eq.is_trivial() {
        let f = build_equation(eq, x);
        return Ok(BranchResult {
            x,
            z: x,
            all_roots: all_roots(&f)?,
            path_log: PathLog { steps: 0, halvings: 0, min_gap: f64::INFINITY },
            residual: 0.0,
        });
    }
    let scale = eq.scale().max(1.0 + x.norm());
    if x.im == 0.0 {
        let real: Vec<f64> = branch_points(eq)?
            .into_iter()
            .filter_map(|p| p.x)
            .filter(|p| p.im.abs() <= 1e-9 * scale)
            .map(|p| p.re)
            .collect();
        if let (Some(lo), Some(hi)) = (
            real.iter().copied().reduce(f64::min),
            real.iter().copied().reduce(f64::max),
        ) {
            if x.re >= lo - 1e-9 * scale && x.re <= hi + 1e-9 * scale {
                return Err(Error::InsideCut(x.re));
            }
        }
    }
    let sign = if x.im < 0.0 { -1.0 } else { 1.0 };
    let up = Complex64::new(0.0, sign);
    let t = 1e3 * scale;
    let floor = 1e-6 * scale;
    let min_step = 1e-12 * t;
    let total_a = eq.total_a();

    let x0 = x + up * t;
    let roots0 = all_roots(&build_equation(eq, x0))?;
    let (i0, _, _) = nearest_two(&roots0, x0 - total_a / x0);
    let mut z = roots0[i0];
    if (z - x0).norm() > 2.0 * total_a.abs() / x0.norm() + 1e-12 * x0.norm() {
        return Err(tracking_error(eq, x0));
    }
    let mut log = PathLog { steps: 0, halvings: 0, min_gap: gap(&roots0, i0) };
    let mut roots = roots0;
    let mut d = t;
    let mut h = d * (1.0 - opts.descent);
    while d > 0.0 {
        let dn = (d - h).max(0.0);
        let xc = x + up * d;
        let xn = x + up * dn;
        let b = eq.denominator.eval(z);
        let fz = b + (z - xc) * eq.denominator.derivative().eval(z) + eq.numerator.derivative().eval(z);
        let predicted = if fz.norm() > 0.0 { z + b / fz * (xn - xc) } else { z };
        let cand = all_roots(&build_equation(eq, xn))?;
        let (i, d1, d2) = nearest_two(&cand, predicted);
        let g = gap(&cand, i);
        if d1 <= 0.25 * d2 && g > opts.ambiguity * scale {
            z = cand[i];
            roots = cand;
            log.steps += 1;
            log.min_gap = log.min_gap.min(g);
            d = dn;
            h = if d > floor { d * (1.0 - opts.descent) } else { d };
        } else {
            h *= 0.5;
            log.halvings += 1;
            if h < min_step {
                return Err(tracking_error(eq, xn));
            }
        }
    }
    let residual = build_equation(eq, x).eval(z).norm();
    Ok(BranchResult { x, z, all_roots: roots, path_log: log, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::partial_fraction_numerator;
    use crate::families::LimitData;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eq(a: &[f64], b: &[f64]) -> LimitEquation {
        partial_fraction_numerator(&LimitData::new(a.to_vec(), b.to_vec(), 0.0).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_branch() {
        let e = eq(&[0.25], &[0.0]);
        let z = principal_branch(&e, c(2.0, 0.0)).unwrap().z;
        assert!((z - c(1.0 + 3f64.sqrt() / 2.0, 0.0)).norm() < 1e-10);
        let zi = principal_branch(&e, c(0.0, 2.0)).unwrap().z;
        assert!((zi - c(0.0, 1.0 + 5f64.sqrt() / 2.0)).norm() < 1e-10);
        assert!((ratio_limit(&e, c(2.0, 0.0), 0).unwrap() - z).norm() == 0.0);
        assert!(matches!(principal_branch(&e, c(0.5, 0.0)), Err(Error::InsideCut(_))));
    }

    #[test]
    fn trivial_equation() {
        let e = eq(&[0.0, 0.0], &[0.0, 1.0]);
        let x = c(0.3, -1.2);
        assert_eq!(principal_branch(&e, x).unwrap().z, x);
        assert_eq!(ratio_limit(&e, x, 1).unwrap(), x - 1.0);
    }

    #[test]
    fn merged_ratio_limit() {
        let e = eq(&[0.2, 0.3], &[1.0, 1.0]);
        let x = c(0.5, 1.5);
        let z = principal_branch(&e, x).unwrap().z;
        assert!(((z - x) * (z - 1.0) + 0.5).norm() < 1e-12);
        assert!(((ratio_limit(&e, x, 1).unwrap()) - (z - 1.0)).norm() == 0.0);
    }

    #[test]
    fn arcsine_branch_points() {
        let e = eq(&[0.25], &[0.0]);
        let bp = branch_points(&e).unwrap();
        assert_eq!(bp.len(), 2);
        assert!((bp[0].z - c(-0.5, 0.0)).norm() < 1e-12 && (bp[1].z - c(0.5, 0.0)).norm() < 1e-12);
        assert!((bp[0].x.unwrap() - c(-1.0, 0.0)).norm() < 1e-10);
        assert!((bp[1].x.unwrap() - c(1.0, 0.0)).norm() < 1e-10);

        let t = 3.0;
        let st = eq(&[0.25 * t * t], &[0.0]);
        let bt = branch_points(&st).unwrap();
        assert!((bt[1].x.unwrap().re - t).abs() < 1e-10);
    }

    #[test]
    fn branch_point_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in 1..=3 {
            for _ in 0..20 {
                let a: Vec<f64> = (0..s).map(|_| rng.gen_range(0.1..2.0)).collect();
                let b: Vec<f64> = (0..s).map(|j| j as f64 * 1.5 + rng.gen_range(-0.5..0.5)).collect();
                assert_eq!(branch_points(&eq(&a, &b)).unwrap().len(), 2 * s);
            }
        }
    }

    #[test]
    fn far_field_classification() {
        let e = eq(&[0.5, 1.0, 0.25], &[-1.0, 0.5, 2.0]);
        let x = c(0.0, 1e4);
        let r = principal_branch(&e, x).unwrap();
        assert!((r.z - x).norm() <= 2.0 * e.total_a() / x.norm());
        let others: Vec<_> = r.all_roots.iter().filter(|z| (*z - r.z).norm() > 1.0).collect();
        assert_eq!(others.len(), 3);
        for g in &e.groups {
            let d = others.iter().map(|z| (*z - g.b).norm()).fold(f64::INFINITY, f64::min);
            assert!(d <= 2.0 * 1.0 / x.norm());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn nevanlinna_symmetry_and_fixed_point(re in -4.0f64..4.0, im in 0.01f64..4.0) {
            let e = eq(&[0.5, 1.0, 0.25], &[-1.0, 0.5, 2.0]);
            let x = c(re, im);
            let r = principal_branch(&e, x).unwrap();
            prop_assert!(r.z.im > 0.0);
            let rc = principal_branch(&e, x.conj()).unwrap();
            prop_assert!((rc.z - r.z.conj()).norm() <= 1e-10 * r.z.norm().max(1.0));
            let s: Complex64 = e.groups.iter().map(|g| g.a / (r.z - g.b)).sum();
            prop_assert!((x - r.z - s).norm() <= 1e-10);
            prop_assert!(r.residual <= 1e-10 * (1.0 + x.norm()).powi(4));
        }
    }
}
