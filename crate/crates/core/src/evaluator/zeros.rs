//! Real zeros of `P_n` by sign-change scanning and bisection.

use super::lower_set::LowerSet;
use crate::error::{Error, Result};

/// Largest degree handled by [`real_zeros_of`].
pub const MAX_ZERO_DEGREE: usize = 64;

const REFINEMENTS: u32 = 4;
const WIDENINGS: u32 = 3;

/// Sorted real zeros of the target polynomial of `set`.
pub fn real_zeros_of(set: &LowerSet) -> Result<Vec<f64>> {
    let deg = set.target().weight();
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg > MAX_ZERO_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "zero extraction is limited to degree {MAX_ZERO_DEGREE}, got {deg}"
        )));
    }
    if let Some(roots) = set.decoupled_roots() {
        return Ok(roots);
    }
    let (bmin, bmax, spread) = set.coefficient_extent();
    let mut lo = bmin - 2.0 * spread - 1.0;
    let mut hi = bmax + 2.0 * spread + 1.0;
    let mut best = 0;
    for widen in 0..=WIDENINGS {
        if widen > 0 {
            let (mid, half) = ((lo + hi) / 2.0, hi - lo);
            lo = mid - half;
            hi = mid + half;
        }
        for level in 0..=REFINEMENTS {
            let points = 64 * deg * (1usize << level);
            let zeros = scan(set, lo, hi, points);
            if zeros.len() == deg {
                return Ok(zeros);
            }
            best = best.max(zeros.len());
        }
    }
    Err(Error::ZeroIsolation { index: set.target().clone(), found: best, expected: deg })
}

fn scan(set: &LowerSet, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let f = |t: f64| set.real_sign_value(t);
    let step = (hi - lo) / points as f64;
    let mut zeros = Vec::new();
    let mut t0 = lo;
    let mut v0 = f(t0);
    for i in 1..=points {
        let t1 = if i == points { hi } else { lo + step * i as f64 };
        let v1 = f(t1);
        if v0 == 0.0 {
            zeros.push(t0);
        } else if v1 != 0.0 && (v0 < 0.0) != (v1 < 0.0) {
            zeros.push(bisect(&f, t0, t1, v0));
        }
        t0 = t1;
        v0 = v1;
    }
    if v0 == 0.0 {
        zeros.push(t0);
    }
    zeros
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    loop {
        let m = 0.5 * (a + b);
        if (b - a) <= 1e-12 * m.abs().max(1.0) || m <= a || m >= b {
            return m;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{CoefficientProvider, CoefficientTable};
    use crate::lattice::MultiIndex;

    fn zeros(p: &CoefficientProvider, n: Vec<usize>) -> Result<Vec<f64>> {
        real_zeros_of(&LowerSet::new(p, &MultiIndex::new(n).unwrap(), 1 << 20).unwrap())
    }

    #[test]
    fn charlier_small_degrees() {
        let p = CoefficientProvider::charlier(vec![1.0]).unwrap();
        let z = zeros(&p, vec![2]).unwrap();
        let s5 = 5f64.sqrt();
        assert!((z[0] - (3.0 - s5) / 2.0).abs() < 1e-11);
        assert!((z[1] - (3.0 + s5) / 2.0).abs() < 1e-11);
        let z1 = zeros(&p, vec![1]).unwrap();
        assert_eq!(z1.len(), 1);
        assert!((z1[0] - 1.0).abs() < 1e-12);
        assert!(zeros(&p, vec![0]).unwrap().is_empty());
    }

    #[test]
    fn table_with_shared_zero() {
        let mut t = CoefficientTable::new(1).unwrap();
        t.insert(MultiIndex::new(vec![0]).unwrap(), vec![0.0], vec![0.0]).unwrap();
        t.insert(MultiIndex::new(vec![1]).unwrap(), vec![0.0], vec![1.0]).unwrap();
        let p = CoefficientProvider::table(t);
        let z = zeros(&p, vec![2]).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z[0].abs() < 1e-12 && (z[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decoupled_product_has_multiple_zeros() {
        let p = CoefficientProvider::constant(vec![0.0], vec![0.0]).unwrap();
        assert_eq!(zeros(&p, vec![6]).unwrap(), vec![0.0; 6]);
    }

    #[test]
    fn complex_zeros_fail_isolation() {
        // x^2 + 1 : b = 0, a = -1
        let p = CoefficientProvider::constant(vec![-1.0], vec![0.0]).unwrap();
        assert!(matches!(zeros(&p, vec![2]), Err(Error::ZeroIsolation { found: 0, expected: 2, .. })));
    }

    #[test]
    fn chebyshev_like_zeros() {
        // a = 1/4, b = 0 gives 2^{-n} U_n(x) with zeros cos(k pi / (n+1))
        let p = CoefficientProvider::constant(vec![0.25], vec![0.0]).unwrap();
        let n = 40;
        let z = zeros(&p, vec![n]).unwrap();
        for (i, v) in z.iter().enumerate() {
            let k = (n - i) as f64;
            let exact = (k * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-10, "{i}: {v} vs {exact}");
        }
    }
}
