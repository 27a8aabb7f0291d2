//! Direct evaluation of `P_n` over the lower set `{m <= n}` with one common
//! scale exponent per degree slice.

use num_complex::Complex64;
use serde::Serialize;

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::families::Recurrence;
use crate::lattice::MultiIndex;

/// `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledValue {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Principal `log` of the represented value.
    pub fn ln(&self) -> Complex64 {
        self.mantissa.ln() + self.log_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DpValue {
    pub value: ScaledValue,
    pub derivative: ScaledValue,
}

impl DpValue {
    /// `P'_n / P_n`.
    pub fn log_derivative(&self) -> Complex64 {
        self.derivative.mantissa / self.value.mantissa * (self.derivative.log_scale - self.value.log_scale).exp()
    }
}

/// Per-slice evaluation of the whole lower set at one point; `values[i]` is
/// scaled by `exp(slice_scale[weight])`.
#[derive(Debug, Clone)]
pub struct EvalGrid<S: Scalar = Complex64> {
    pub x: Complex64,
    pub values: Vec<S>,
    pub derivatives: Vec<S>,
    pub slice_scale: Vec<f64>,
}

/// The lower set of `n` with the recurrence coefficients cached, so that `P_n`
/// can be evaluated at many points.
#[derive(Debug, Clone)]
pub struct LowerSet {
    target: MultiIndex,
    strides: Vec<usize>,
    /// linear indices grouped by weight
    by_weight: Vec<Vec<usize>>,
    weights: Vec<usize>,
    /// for each linear index m != 0: (direction k, linear index of m - e_k)
    parent: Vec<(usize, usize)>,
    /// a and b at every m < n (row-major, r entries each), NaN at n itself
    a: Vec<f64>,
    b: Vec<f64>,
}

impl LowerSet {
    pub fn new<P: Recurrence + ?Sized>(provider: &P, n: &MultiIndex, cap: usize) -> Result<Self> {
        let r = provider.dim();
        if n.dim() != r {
            return Err(Error::InvalidArgument(format!("index {n} has wrong dimension for r={r}")));
        }
        let size = n.lower_set_size();
        if size > cap as u128 {
            return Err(Error::ResourceLimit { size, cap });
        }
        let size = size as usize;
        let mut strides = vec![1usize; r];
        for j in (0..r.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * (n.get(j + 1) + 1);
        }
        let mut by_weight = vec![Vec::new(); n.weight() + 1];
        let mut weights = vec![0usize; size];
        let mut parent = vec![(0usize, 0usize); size];
        let mut a = vec![f64::NAN; size * r];
        let mut b = vec![f64::NAN; size * r];
        let mut m = vec![0usize; r];
        let top = size - 1;
        for lin in 0..size {
            let mut rem = lin;
            for j in 0..r {
                m[j] = rem / strides[j];
                rem %= strides[j];
            }
            let w: usize = m.iter().sum();
            weights[lin] = w;
            by_weight[w].push(lin);
            if let Some(k) = (0..r).rev().find(|&j| m[j] > 0) {
                parent[lin] = (k, lin - strides[k]);
            }
            if lin != top {
                let idx = MultiIndex::new(m.clone())?;
                provider.fill(&idx, &mut a[lin * r..(lin + 1) * r], &mut b[lin * r..(lin + 1) * r])?;
            }
        }
        Ok(LowerSet { target: n.clone(), strides, by_weight, weights, parent, a, b })
    }

    pub fn target(&self) -> &MultiIndex {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn r(&self) -> usize {
        self.strides.len()
    }

    /// `(min b, max b, sum_j max sqrt|a_j|)` over the cached coefficients.
    pub fn coefficient_extent(&self) -> (f64, f64, f64) {
        let r = self.r();
        let mut bmin = f64::INFINITY;
        let mut bmax = f64::NEG_INFINITY;
        let mut amax = vec![0.0f64; r];
        for lin in 0..self.len().saturating_sub(1) {
            for j in 0..r {
                let bv = self.b[lin * r + j];
                bmin = bmin.min(bv);
                bmax = bmax.max(bv);
                amax[j] = amax[j].max(self.a[lin * r + j].abs().sqrt());
            }
        }
        if !bmin.is_finite() {
            bmin = 0.0;
            bmax = 0.0;
        }
        (bmin, bmax, amax.iter().sum())
    }

    pub fn grid<S: Scalar>(&self, x: Complex64) -> EvalGrid<S> {
        let r = self.r();
        let size = self.len();
        let xs = S::from_c64(x);
        let mut vals = vec![S::zero(); size];
        let mut ders = vec![S::zero(); size];
        let mut scale = vec![0.0f64; self.by_weight.len()];
        vals[0] = S::one();
        for w in 1..self.by_weight.len() {
            // slice w-1 has scale exp(scale[w-1]); slice w-2 is rescaled into it
            let back = if w >= 2 { (scale[w - 2] - scale[w - 1]).exp() } else { 0.0 };
            let mut peak = 0.0f64;
            for &lin in &self.by_weight[w] {
                let (k, p) = self.parent[lin];
                let ca = &self.a[p * r..(p + 1) * r];
                let shift = xs - S::from_f64(self.b[p * r + k]);
                let mut v = shift * vals[p];
                let mut d = vals[p] + shift * ders[p];
                for (j, &aj) in ca.iter().enumerate() {
                    if aj != 0.0 {
                        let pp = p - self.strides[j];
                        let f = aj * back;
                        v = v - vals[pp].scale(f);
                        d = d - ders[pp].scale(f);
                    }
                }
                vals[lin] = v;
                ders[lin] = d;
                peak = peak.max(v.abs());
            }
            if peak > 0.0 && peak.is_finite() {
                let inv = 1.0 / peak;
                for &lin in &self.by_weight[w] {
                    vals[lin] = vals[lin].scale(inv);
                    ders[lin] = ders[lin].scale(inv);
                }
                scale[w] = scale[w - 1] + peak.ln();
            } else {
                scale[w] = scale[w - 1];
            }
        }
        EvalGrid { x, values: vals, derivatives: ders, slice_scale: scale }
    }

    /// `P_n` and `P_n'` at `x`.
    pub fn eval<S: Scalar>(&self, x: Complex64) -> DpValue {
        let g = self.grid::<S>(x);
        let top = self.len() - 1;
        let s = g.slice_scale[self.target.weight()];
        DpValue {
            value: ScaledValue { mantissa: g.values[top].to_c64(), log_scale: s },
            derivative: ScaledValue { mantissa: g.derivatives[top].to_c64(), log_scale: s },
        }
    }

    /// Real part of the scaled `P_n(x)` for real `x`; its sign is the sign of
    /// `P_n(x)`.
    pub fn real_sign_value(&self, x: f64) -> f64 {
        let r = self.r();
        let size = self.len();
        let mut vals = vec![0.0f64; size];
        let mut scale = vec![0.0f64; self.by_weight.len()];
        vals[0] = 1.0;
        for w in 1..self.by_weight.len() {
            let back = if w >= 2 { (scale[w - 2] - scale[w - 1]).exp() } else { 0.0 };
            let mut peak = 0.0f64;
            for &lin in &self.by_weight[w] {
                let (k, p) = self.parent[lin];
                let mut v = (x - self.b[p * r + k]) * vals[p];
                for j in 0..r {
                    let aj = self.a[p * r + j];
                    if aj != 0.0 {
                        v -= aj * back * vals[p - self.strides[j]];
                    }
                }
                vals[lin] = v;
                peak = peak.max(v.abs());
            }
            if peak > 0.0 && peak.is_finite() {
                for &lin in &self.by_weight[w] {
                    vals[lin] /= peak;
                }
                scale[w] = scale[w - 1] + peak.ln();
            } else {
                scale[w] = scale[w - 1];
            }
        }
        vals[size - 1]
    }

    /// When every cached `a` vanishes, `P_n` is the product of `x - b` along
    /// the parent chain; returns those `b` values (sorted).
    pub fn decoupled_roots(&self) -> Option<Vec<f64>> {
        let r = self.r();
        if self.a[..self.len().saturating_sub(1) * r].iter().any(|&v| v != 0.0) {
            return None;
        }
        let mut roots = Vec::with_capacity(self.target.weight());
        let mut lin = self.len() - 1;
        while lin != 0 {
            let (k, p) = self.parent[lin];
            roots.push(self.b[p * r + k]);
            lin = p;
        }
        roots.sort_by(f64::total_cmp);
        Some(roots)
    }

    /// Linear index of `m` (must lie in the lower set).
    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        if !m.le(&self.target) {
            return None;
        }
        Some(m.entries().iter().zip(&self.strides).map(|(v, s)| v * s).sum())
    }

    /// Unscaled value of `P_m` from a grid (may overflow for large degree).
    pub fn value_at<S: Scalar>(&self, grid: &EvalGrid<S>, m: &MultiIndex) -> Option<Complex64> {
        let lin = self.position(m)?;
        Some(grid.values[lin].to_c64() * grid.slice_scale[self.weights[lin]].exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::CoefficientProvider;

    #[test]
    fn charlier_quadratic() {
        let p = CoefficientProvider::charlier(vec![1.0]).unwrap();
        let ls = LowerSet::new(&p, &MultiIndex::new(vec![2]).unwrap(), 1000).unwrap();
        let v = ls.eval::<Complex64>(Complex64::new(0.0, 1.0));
        assert!((v.value.value() - Complex64::new(0.0, -3.0)).norm() < 1e-14);
        // P' = 2x - 3
        assert!((v.derivative.value() - Complex64::new(-3.0, 2.0)).norm() < 1e-14);
        assert!(ls.real_sign_value(0.0) > 0.0);
        assert!(ls.real_sign_value(1.0) < 0.0);
    }

    #[test]
    fn origin_is_one() {
        let p = CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.0).unwrap();
        let ls = LowerSet::new(&p, &MultiIndex::zero(2), 10).unwrap();
        assert_eq!(ls.eval::<Complex64>(Complex64::new(0.3, 0.1)).value.value(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cap_is_enforced() {
        let p = CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.0).unwrap();
        let n = MultiIndex::new(vec![99, 99]).unwrap();
        assert!(matches!(LowerSet::new(&p, &n, 9999), Err(Error::ResourceLimit { size: 10000, .. })));
    }

    #[test]
    fn large_degree_does_not_overflow() {
        let p = CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.0).unwrap();
        let n = MultiIndex::new(vec![200, 200]).unwrap();
        let ls = LowerSet::new(&p, &n, 1_000_000).unwrap();
        let v = ls.eval::<Complex64>(Complex64::new(3.0, 1.0));
        assert!(v.value.mantissa.norm() > 0.0 && v.value.mantissa.norm() <= 1.0 + 1e-12);
        assert!(v.value.log_scale.is_finite() && v.value.log_scale > 700.0);
    }
}
