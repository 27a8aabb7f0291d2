//! Multi-indices, rays through the lattice `N^r`, and monotone paths from the
//! origin.
//!
//! Directions are 0-based throughout the library: direction `k` increments
//! entry `k` of a [`MultiIndex`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `n = (n_1, ..., n_r)` of the lattice `N^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("multi-index must have r >= 1 entries".into()));
        }
        Ok(MultiIndex(entries))
    }

    pub fn zero(r: usize) -> Self {
        assert!(r >= 1, "multi-index dimension must be at least 1");
        MultiIndex(vec![0; r])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|n|`, the degree of `P_n`.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, k: usize) -> usize {
        self.0[k]
    }

    /// `n + e_k`.
    pub fn plus(&self, k: usize) -> Self {
        let mut e = self.0.clone();
        e[k] += 1;
        MultiIndex(e)
    }

    /// `n - e_k`, or `None` when `n_k = 0`.
    pub fn minus(&self, k: usize) -> Option<Self> {
        if self.0[k] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[k] -= 1;
        Some(MultiIndex(e))
    }

    pub(crate) fn increment(&mut self, k: usize) {
        self.0[k] += 1;
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Number of points in the lower set `{m : m <= n}`.
    pub fn lower_set_size(&self) -> u128 {
        self.0.iter().map(|&n| n as u128 + 1).product()
    }

    /// Every multi-index of dimension `r` with weight at most `max_weight`,
    /// ordered by weight and then lexicographically.
    pub fn up_to_weight(r: usize, max_weight: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for w in 0..=max_weight {
            let mut cur = vec![0; r];
            compositions(w, 0, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(rest: usize, pos: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in (0..=rest).rev() {
        cur[pos] = v;
        compositions(rest - v, pos + 1, cur, out);
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<MultiIndex> for Vec<usize> {
    fn from(m: MultiIndex) -> Self {
        m.0
    }
}

/// Direction weights `q` of a ray `n_j = floor(q_j n)` together with the
/// scaling exponent `gamma` (`0` for bounded coefficients).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySpec {
    q: Vec<f64>,
    gamma: f64,
}

impl RaySpec {
    pub fn new(q: Vec<f64>, gamma: f64) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidArgument("ray needs at least one direction".into()));
        }
        if q.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("all q_j must be positive, got {q:?}")));
        }
        let s: f64 = q.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("q must sum to 1, got {s}")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(RaySpec { q, gamma })
    }

    /// The diagonal ray `q_j = 1/r`.
    pub fn uniform(r: usize, gamma: f64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        let mut q = vec![1.0 / r as f64; r];
        // absorb rounding so the sum check holds exactly
        let s: f64 = q[..r - 1].iter().sum();
        q[r - 1] = 1.0 - s;
        RaySpec::new(q, gamma)
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        RaySpec::new(self.q.clone(), gamma)
    }

    /// `(floor(q_1 n), ..., floor(q_r n))`.
    pub fn index(&self, n: usize) -> MultiIndex {
        MultiIndex(self.q.iter().map(|&q| floor_product(q, n)).collect())
    }
}

/// `floor(q * n)`, treating products within a few ulps below an integer as
/// that integer so that e.g. `(1/3) * 3` floors to 1.
fn floor_product(q: f64, n: usize) -> usize {
    let v = q * n as f64;
    let f = v.floor();
    if f + 1.0 - v <= 1e-12 * v.max(1.0) {
        (f + 1.0) as usize
    } else {
        f as usize
    }
}

/// Free-function form of [`RaySpec::index`].
pub fn ray_index(ray: &RaySpec, n: usize) -> MultiIndex {
    ray.index(n)
}

/// A monotone path from the origin: each step increments one direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePath {
    r: usize,
    steps: Vec<usize>,
}

impl LatticePath {
    pub fn from_steps(r: usize, steps: Vec<usize>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        if let Some(&bad) = steps.iter().find(|&&k| k >= r) {
            return Err(Error::InvalidArgument(format!("step direction {bad} out of range for r={r}")));
        }
        Ok(LatticePath { r, steps })
    }

    /// Proportionally interleaved path to `target`: at every step the
    /// direction lagging furthest behind `t * target / |target|` is taken,
    /// so that every prefix endpoint `m` has `|m_j - |m| target_j/|target|| < 1`.
    pub fn interleaved(target: &MultiIndex) -> Self {
        let r = target.dim();
        let total = target.weight();
        let mut cur = vec![0usize; r];
        let mut steps = Vec::with_capacity(total);
        for t in 1..=total {
            let mut best = usize::MAX;
            let mut best_deficit = f64::NEG_INFINITY;
            for (j, (&c, &goal)) in cur.iter().zip(target.entries()).enumerate() {
                if c >= goal {
                    continue;
                }
                let deficit = (t * goal) as f64 / total as f64 - c as f64;
                if deficit > best_deficit + 1e-12 {
                    best_deficit = deficit;
                    best = j;
                }
            }
            cur[best] += 1;
            steps.push(best);
        }
        LatticePath { r, steps }
    }

    /// All steps in direction 0 first, then direction 1, and so on.
    pub fn blocked(target: &MultiIndex) -> Self {
        let steps = target
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(j, &n)| std::iter::repeat_n(j, n))
            .collect();
        LatticePath { r: target.dim(), steps }
    }

    /// Blocked path visiting directions in the given order.
    pub fn blocked_in_order(target: &MultiIndex, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; target.dim()];
        for &j in order {
            if j >= target.dim() || seen[j] {
                return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
            }
            seen[j] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
        }
        let steps = order
            .iter()
            .flat_map(|&j| std::iter::repeat_n(j, target.get(j)))
            .collect();
        Ok(LatticePath { r: target.dim(), steps })
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, k: usize) {
        assert!(k < self.r);
        self.steps.push(k);
    }

    pub fn endpoint(&self) -> MultiIndex {
        let mut m = MultiIndex::zero(self.r);
        for &k in &self.steps {
            m.increment(k);
        }
        m
    }

    /// Endpoints of every prefix, starting with the origin.
    pub fn prefixes(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        let mut m = MultiIndex::zero(self.r);
        std::iter::once(m.clone()).chain(self.steps.iter().map(move |&k| {
            m.increment(k);
            m.clone()
        }))
    }
}

/// Path used by the evaluators to reach `target`. The ray is accepted for
/// interface symmetry; interleaving follows the target's own proportions,
/// which coincide with `q` up to flooring for indices on the ray.
pub fn build_path(target: &MultiIndex, _ray: &RaySpec) -> LatticePath {
    LatticePath::interleaved(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ray_index_examples() {
        let r = RaySpec::new(vec![0.5, 0.5], 0.0).unwrap();
        assert_eq!(r.index(7).entries(), &[3, 3]);
        let r = RaySpec::new(vec![1.0 / 3.0, 2.0 / 3.0], 0.0).unwrap();
        assert_eq!(r.index(10).entries(), &[3, 6]);
        assert_eq!(r.index(3).entries(), &[1, 2]);
        let r = RaySpec::new(vec![1.0], 0.0).unwrap();
        assert_eq!(r.index(0).entries(), &[0]);
    }

    #[test]
    fn ray_rejects_bad_q() {
        assert!(RaySpec::new(vec![0.5, 0.4], 0.0).is_err());
        assert!(RaySpec::new(vec![1.2, -0.2], 0.0).is_err());
        assert!(RaySpec::new(vec![], 0.0).is_err());
        assert!(RaySpec::new(vec![1.0], -1.0).is_err());
        assert!(RaySpec::uniform(3, 0.0).is_ok());
        assert!(RaySpec::uniform(7, 1.0).is_ok());
    }

    #[test]
    fn path_examples() {
        let t = MultiIndex::new(vec![2, 1]).unwrap();
        assert_eq!(LatticePath::interleaved(&t).steps(), &[0, 1, 0]);
        let t = MultiIndex::new(vec![3]).unwrap();
        assert_eq!(LatticePath::interleaved(&t).steps(), &[0, 0, 0]);
        let t = MultiIndex::new(vec![1, 1, 1]).unwrap();
        let mut s = LatticePath::interleaved(&t).steps().to_vec();
        s.sort();
        assert_eq!(s, vec![0, 1, 2]);
        assert!(LatticePath::interleaved(&MultiIndex::zero(2)).is_empty());
    }

    #[test]
    fn blocked_paths() {
        let t = MultiIndex::new(vec![2, 1]).unwrap();
        assert_eq!(LatticePath::blocked(&t).steps(), &[0, 0, 1]);
        let p = LatticePath::blocked_in_order(&t, &[1, 0]).unwrap();
        assert_eq!(p.steps(), &[1, 0, 0]);
        assert!(LatticePath::blocked_in_order(&t, &[1, 1]).is_err());
        assert!(LatticePath::from_steps(2, vec![0, 2]).is_err());
    }

    #[test]
    fn up_to_weight_counts() {
        // C(w + r - 1, r - 1) summed over w <= 3 for r = 2: 1+2+3+4
        assert_eq!(MultiIndex::up_to_weight(2, 3).len(), 10);
        assert_eq!(MultiIndex::up_to_weight(3, 2).len(), 10);
        assert!(MultiIndex::up_to_weight(2, 3).windows(2).all(|w| w[0].weight() <= w[1].weight()));
    }

    fn target_strategy() -> impl Strategy<Value = MultiIndex> {
        (1usize..=4)
            .prop_flat_map(|r| prop::collection::vec(0usize..40, r))
            .prop_map(|v| MultiIndex::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn path_reaches_target_and_stays_near_ray(t in target_strategy()) {
            let p = LatticePath::interleaved(&t);
            prop_assert_eq!(p.len(), t.weight());
            prop_assert_eq!(p.endpoint(), t.clone());
            let total = t.weight().max(1) as f64;
            for m in p.prefixes() {
                let w = m.weight() as f64;
                for j in 0..t.dim() {
                    let ideal = w * t.get(j) as f64 / total;
                    prop_assert!((m.get(j) as f64 - ideal).abs() <= 1.0 + 1e-9);
                }
            }
        }

        #[test]
        fn ray_index_monotone(w in prop::collection::vec(0.05f64..1.0, 1..5), n in 0usize..500, d in 0usize..500) {
            let s: f64 = w.iter().sum();
            let mut q: Vec<f64> = w.iter().map(|v| v / s).collect();
            let head: f64 = q[..q.len() - 1].iter().sum();
            let last = q.len() - 1;
            q[last] = 1.0 - head;
            prop_assume!(q[last] > 0.0);
            let ray = RaySpec::new(q, 0.0).unwrap();
            prop_assert!(ray.index(n).le(&ray.index(n + d)));
            prop_assert!(ray.index(n).weight() <= n);
            prop_assert!(ray.index(n).weight() + ray.dim() >= n);
        }
    }
}
