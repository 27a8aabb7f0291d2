use num_complex::Complex64;
use serde::Serialize;

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::families::Recurrence;
use crate::lattice::MultiIndex;

/// Threshold below which a forward ratio is treated as a zero of `P`.
const DEGENERATE: f64 = 1e-300;

/// Neighbor ratios of `P_n` at one point, advanced one lattice step at a
/// time.
///
/// * `h[j] = P_{n-e_j}(x) / P_n(x)` (zero while `n_j = 0`)
/// * `g[j] = P'_{n-e_j}(x) / P_n(x)`
/// * `u = P'_n(x) / P_n(x)`
/// * `log_p` is `log P_n(x)` as a sum of principal logs of the forward
///   ratios, so only its real part and `exp(log_p)` are meaningful.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioState<S: Scalar = Complex64> {
    pub x: Complex64,
    pub index: MultiIndex,
    #[serde(skip)]
    pub h: Vec<S>,
    #[serde(skip)]
    pub g: Vec<S>,
    pub log_p: Complex64,
    #[serde(skip)]
    pub u: S,
}

/// Scratch coefficient buffers reused across steps.
#[derive(Debug, Clone)]
pub struct StepBuffers {
    a: Vec<f64>,
    b: Vec<f64>,
    a_low: Vec<f64>,
    b_low: Vec<f64>,
}

impl StepBuffers {
    pub fn new(r: usize) -> Self {
        StepBuffers { a: vec![0.0; r], b: vec![0.0; r], a_low: vec![0.0; r], b_low: vec![0.0; r] }
    }
}

impl<S: Scalar> RatioState<S> {
    /// State at the origin: `P_0 = 1`.
    pub fn new(r: usize, x: Complex64) -> Self {
        RatioState {
            x,
            index: MultiIndex::zero(r),
            h: vec![S::zero(); r],
            g: vec![S::zero(); r],
            log_p: Complex64::new(0.0, 0.0),
            u: S::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    /// `P_{n+e_k}(x) / P_n(x) = x - b_{n,k} - sum_j a_{n,j} h_j`, given the
    /// coefficients at the current index.
    pub fn forward_ratio_with(&self, k: usize, a: &[f64], b: &[f64]) -> S {
        let mut s = S::from_c64(self.x) - S::from_f64(b[k]);
        for (j, &aj) in a.iter().enumerate() {
            if aj != 0.0 {
                s = s - self.h[j].scale(aj);
            }
        }
        s
    }

    pub fn forward_ratio<P: Recurrence + ?Sized>(&self, k: usize, provider: &P) -> Result<S> {
        let (a, b) = provider.coefficients(&self.index)?;
        Ok(self.forward_ratio_with(k, &a, &b))
    }

    /// Moves from `n` to `n + e_k`.
    pub fn advance<P: Recurrence + ?Sized>(&mut self, k: usize, provider: &P) -> Result<()> {
        let mut buf = StepBuffers::new(self.dim());
        self.advance_with(k, provider, &mut buf)
    }

    pub fn advance_with<P: Recurrence + ?Sized>(
        &mut self,
        k: usize,
        provider: &P,
        buf: &mut StepBuffers,
    ) -> Result<()> {
        let r = self.dim();
        if k >= r {
            return Err(Error::InvalidArgument(format!("direction {k} out of range for r={r}")));
        }
        provider.fill(&self.index, &mut buf.a, &mut buf.b)?;
        let x = S::from_c64(self.x);
        let ratio = self.forward_ratio_with(k, &buf.a, &buf.b);
        if ratio.abs() < DEGENERATE {
            return Err(Error::DegeneratePoint { index: self.index.clone(), re: self.x.re, im: self.x.im });
        }
        let inv = S::one() / ratio;

        // differentiated recurrence: P'_{n+e_k} = P_n + (x - b) P'_n - sum a P'_{n-e_j}
        let mut du = S::one() + (x - S::from_f64(buf.b[k])) * self.u;
        for j in 0..r {
            if buf.a[j] != 0.0 {
                du = du - self.g[j].scale(buf.a[j]);
            }
        }
        let new_u = du * inv;

        // P_{n-e_j+e_k} = P_n + (b_{n-e_j,j} - b_{n-e_j,k}) P_{n-e_j}
        for j in 0..r {
            if j == k || self.index.get(j) == 0 {
                continue;
            }
            let low = self.index.minus(j).expect("n_j > 0");
            provider.fill(&low, &mut buf.a_low, &mut buf.b_low)?;
            let db = buf.b_low[j] - buf.b_low[k];
            let hj = self.h[j];
            self.h[j] = (S::one() + hj.scale(db)) * inv;
            self.g[j] = (self.u + self.g[j].scale(db)) * inv;
        }
        self.h[k] = inv;
        self.g[k] = self.u * inv;
        self.u = new_u;
        self.log_p += ratio.to_c64().ln();
        self.index.increment(k);
        Ok(())
    }

    /// Converts to the `Complex64` snapshot.
    pub fn to_standard(&self) -> RatioState<Complex64> {
        RatioState {
            x: self.x,
            index: self.index.clone(),
            h: self.h.iter().map(|v| v.to_c64()).collect(),
            g: self.g.iter().map(|v| v.to_c64()).collect(),
            log_p: self.log_p,
            u: self.u.to_c64(),
        }
    }
}

impl RatioState<Complex64> {
    /// `P_n(x)`; overflows for large degree, use `log_p` instead.
    pub fn value(&self) -> Complex64 {
        self.log_p.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::CoefficientProvider;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn init_state() {
        let s: RatioState = RatioState::new(3, c(0.0, 1.0));
        assert_eq!(s.h, vec![c(0.0, 0.0); 3]);
        assert_eq!(s.value(), c(1.0, 0.0));
        assert_eq!(s.u, c(0.0, 0.0));
        let real: RatioState = RatioState::new(1, c(2.0, 0.0));
        assert_eq!(real.index.weight(), 0);
    }

    #[test]
    fn charlier_by_hand() {
        let p = CoefficientProvider::charlier(vec![1.0]).unwrap();
        let x = c(0.0, 1.0);
        let mut s: RatioState = RatioState::new(1, x);
        s.advance(0, &p).unwrap();
        // P_1 = x - 1
        assert!((s.h[0] - 1.0 / (x - 1.0)).norm() < 1e-15);
        assert!((s.value() - (x - 1.0)).norm() < 1e-15);
        assert!((s.u - 1.0 / (x - 1.0)).norm() < 1e-15);
        s.advance(0, &p).unwrap();
        // P_2 = x^2 - 3x + 1 = -3i at x = i
        assert!((1.0 / s.h[0] - c(-1.5, 1.5)).norm() < 1e-14);
        assert!((s.value() - c(0.0, -3.0)).norm() < 1e-14);
        // P_2' / P_2 = (2x - 3) / (x^2 - 3x + 1)
        assert!((s.u - (2.0 * x - 3.0) / c(0.0, -3.0)).norm() < 1e-14);
    }

    #[test]
    fn decoupled_recurrence_telescopes() {
        let p = CoefficientProvider::constant(vec![0.0, 0.0], vec![0.5, -1.0]).unwrap();
        let x = c(0.3, 0.7);
        let mut s: RatioState = RatioState::new(2, x);
        for k in [0, 1, 1, 0, 1] {
            s.advance(k, &p).unwrap();
        }
        let expected = (x - 0.5).powi(2) * (x + 1.0).powi(3);
        assert!((s.value() - expected).norm() < 1e-13 * expected.norm());
        assert!((s.h[0] - 1.0 / (x - 0.5)).norm() < 1e-14);
        assert!((s.h[1] - 1.0 / (x + 1.0)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_point_is_reported() {
        let p = CoefficientProvider::constant(vec![0.0], vec![2.0]).unwrap();
        let mut s: RatioState = RatioState::new(1, c(2.0, 0.0));
        assert!(matches!(s.advance(0, &p), Err(Error::DegeneratePoint { .. })));
    }
}
