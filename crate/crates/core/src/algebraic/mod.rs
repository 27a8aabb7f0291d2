//! The limit equation `(z - x) B(z) + A(z) = 0`, where
//! `A(z) / B(z) = sum_j a*_j / (z - b*_j)` over the merged limit groups, and
//! its principal branch `z(x)` with `z(x) - x -> 0` at infinity.

mod branch;
pub mod poly;
mod roots;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{LimitData, MergedGroup, Provenance};
use poly::Poly;

pub use branch::{
    branch_points, principal_branch, principal_branch_with, ratio_limit, BranchOptions, BranchPoint,
    BranchResult, PathLog,
};
pub use roots::{all_roots, residual_ok};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEquation {
    /// Distinct `b*` groups, sorted by `b*`.
    pub groups: Vec<MergedGroup>,
    /// The unmerged `b` limit of every direction.
    pub b_direction: Vec<f64>,
    /// `A`, degree at most `s - 1`.
    pub numerator: Poly,
    /// `B = prod (z - b*_j)`, monic of degree `s`.
    pub denominator: Poly,
}

impl LimitEquation {
    /// Number of distinct groups `s`.
    pub fn order(&self) -> usize {
        self.groups.len()
    }

    pub fn dim(&self) -> usize {
        self.b_direction.len()
    }

    pub fn total_a(&self) -> f64 {
        self.groups.iter().map(|g| g.a).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(|g| g.a == 0.0)
    }

    /// `1 + max(|b*|, sqrt(max |a*|))`, the natural size of the equation.
    pub fn scale(&self) -> f64 {
        let bmax = self.groups.iter().map(|g| g.b.abs()).fold(0.0, f64::max);
        let amax = self.groups.iter().map(|g| g.a.abs()).fold(0.0, f64::max);
        1.0 + bmax.max(amax.sqrt())
    }

    /// `A(b*_j) / B'(b*_j)` for every group.
    pub fn residues(&self) -> Vec<f64> {
        let db = self.denominator.derivative();
        self.groups
            .iter()
            .map(|g| {
                let z = Complex64::new(g.b, 0.0);
                (self.numerator.eval(z) / db.eval(z)).re
            })
            .collect()
    }
}

/// Builds `A` and `B` from the merged groups of `limits`.
pub fn partial_fraction_numerator(limits: &LimitData) -> Result<LimitEquation> {
    if let Some(reason) = &limits.refusal {
        return Err(Error::DegenerateLimit(reason.clone()));
    }
    let unavailable = |p: &[Provenance]| p.contains(&Provenance::Unavailable);
    if unavailable(&limits.provenance_a)
        || unavailable(&limits.provenance_b)
        || limits.a.iter().chain(&limits.b).any(|v| !v.is_finite())
    {
        return Err(Error::DegenerateLimit("some limits are unavailable".into()));
    }
    if limits.merged.is_empty() {
        return Err(Error::DegenerateLimit("no limit groups".into()));
    }
    for w in limits.merged.windows(2) {
        if !(w[1].b > w[0].b) {
            return Err(Error::DegenerateLimit(format!("coincident b* = {} after merging", w[0].b)));
        }
    }
    let one = Poly::constant(Complex64::new(1.0, 0.0));
    let factors: Vec<Poly> = limits.merged.iter().map(|g| Poly::linear(Complex64::new(g.b, 0.0))).collect();
    let denominator = factors.iter().fold(one.clone(), |acc, f| &acc * f);
    let mut numerator = Poly::zero();
    for (j, g) in limits.merged.iter().enumerate() {
        let mut term = Poly::constant(Complex64::new(g.a, 0.0));
        for (i, f) in factors.iter().enumerate() {
            if i != j {
                term = &term * f;
            }
        }
        numerator = &numerator + &term;
    }
    Ok(LimitEquation { groups: limits.merged.clone(), b_direction: limits.b.clone(), numerator, denominator })
}

/// `F(z; x) = (z - x) B(z) + A(z)`, monic of degree `s + 1`.
pub fn build_equation(eq: &LimitEquation, x: Complex64) -> Poly {
    &(&Poly::linear(x) * &eq.denominator) + &eq.numerator
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(a: &[f64], b: &[f64]) -> LimitEquation {
        partial_fraction_numerator(&LimitData::new(a.to_vec(), b.to_vec(), 0.0).unwrap()).unwrap()
    }

    #[test]
    fn numerator_examples() {
        let e = eq(&[1.0, 2.0], &[0.0, 1.0]);
        assert_eq!(e.numerator, Poly::from_real(&[-1.0, 3.0]));
        let res = e.residues();
        assert!((res[0] - 1.0).abs() < 1e-12 && (res[1] - 2.0).abs() < 1e-12);

        let e1 = eq(&[0.25], &[0.0]);
        assert_eq!(e1.numerator, Poly::from_real(&[0.25]));
        assert_eq!(e1.denominator, Poly::from_real(&[0.0, 1.0]));

        assert!(eq(&[0.0, 0.0], &[0.0, 1.0]).numerator.is_zero());
    }

    #[test]
    fn equation_examples() {
        let e1 = eq(&[0.25], &[0.0]);
        assert_eq!(build_equation(&e1, Complex64::new(2.0, 0.0)), Poly::from_real(&[0.25, -2.0, 1.0]));
        let e2 = eq(&[1.0, 2.0], &[0.0, 1.0]);
        assert_eq!(build_equation(&e2, Complex64::new(0.0, 0.0)), Poly::from_real(&[-1.0, 3.0, -1.0, 1.0]));
        let e0 = eq(&[0.0, 0.0], &[0.0, 1.0]);
        let x = Complex64::new(0.5, 2.0);
        assert_eq!(build_equation(&e0, x), &Poly::linear(x) * &e0.denominator);
    }

    #[test]
    fn refusal_and_unavailable_are_rejected() {
        let mut d = LimitData::new(vec![0.5, 0.5], vec![0.0, 0.0], 0.0).unwrap();
        d.refusal = Some("all b limits coincide".into());
        assert!(matches!(partial_fraction_numerator(&d), Err(Error::DegenerateLimit(_))));
        let mut u = LimitData::new(vec![0.5, 0.5], vec![0.0, 1.0], 0.0).unwrap();
        u.provenance_b[1] = Provenance::Unavailable;
        assert!(partial_fraction_numerator(&u).is_err());
    }

    #[test]
    fn merged_equation_has_lower_order() {
        let e = eq(&[0.2, 0.3], &[1.0, 1.0]);
        assert_eq!(e.order(), 1);
        assert_eq!(e.dim(), 2);
        assert!((e.groups[0].a - 0.5).abs() < 1e-15);
    }
}
