//! Evaluation of `P_n`, `P_n'` and neighbor ratios at complex points.
//!
//! Off the real axis the default engine propagates the ratios
//! `h_j = P_{n-e_j} / P_n` along a lattice path ([`RatioState`]); these stay
//! bounded by `1 / |Im x|` in the positive-coefficient regime, so nothing
//! overflows. Near or on the axis, [`LowerSet`] evaluates the recurrence over
//! the whole lower set with per-degree rescaling.

mod lower_set;
mod ratio;
pub mod scalar;
mod zeros;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Recurrence;
use crate::lattice::{LatticePath, MultiIndex};
use scalar::{ComplexDd, Scalar};

pub use lower_set::{DpValue, EvalGrid, LowerSet, ScaledValue};
pub use ratio::{RatioState, StepBuffers};
pub use zeros::{real_zeros_of, MAX_ZERO_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Smallest `|Im x|` accepted by ratio propagation.
    pub delta_min: f64,
    /// Run both engines in double-double arithmetic.
    pub extended: bool,
    /// Largest lower set the direct evaluator will allocate.
    pub dp_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { delta_min: 1e-8, extended: false, dp_cap: 10_000_000 }
    }
}

/// Point scaling for growing coefficients: the polynomial is evaluated at
/// `n^gamma x` and the ratio divided by `n^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub gamma: f64,
    pub n: f64,
}

impl Scaling {
    pub fn factor(&self) -> f64 {
        self.n.powf(self.gamma)
    }
}

pub struct Evaluator<'a, P: Recurrence + ?Sized> {
    provider: &'a P,
    opts: EvalOptions,
}

impl<'a, P: Recurrence + ?Sized> Evaluator<'a, P> {
    pub fn new(provider: &'a P) -> Self {
        Self::with_options(provider, EvalOptions::default())
    }

    pub fn with_options(provider: &'a P, opts: EvalOptions) -> Self {
        Evaluator { provider, opts }
    }

    pub fn options(&self) -> &EvalOptions {
        &self.opts
    }

    pub fn provider(&self) -> &'a P {
        self.provider
    }

    pub fn init_state(&self, x: Complex64) -> RatioState {
        RatioState::new(self.provider.dim(), x)
    }

    fn check_index(&self, n: &MultiIndex) -> Result<()> {
        let r = self.provider.dim();
        if n.dim() != r {
            return Err(Error::InvalidArgument(format!("index {n} has dimension {}, expected {r}", n.dim())));
        }
        Ok(())
    }

    fn check_off_axis(&self, x: Complex64) -> Result<()> {
        if !(x.im.abs() >= self.opts.delta_min) || !x.re.is_finite() {
            return Err(Error::NearAxis { im_abs: x.im.abs(), delta_min: self.opts.delta_min });
        }
        Ok(())
    }

    fn propagate<S: Scalar>(&self, path: &LatticePath, x: Complex64) -> Result<RatioState<S>> {
        let r = self.provider.dim();
        let mut state = RatioState::<S>::new(r, x);
        let mut buf = StepBuffers::new(r);
        for &k in path.steps() {
            state.advance_with(k, self.provider, &mut buf)?;
        }
        Ok(state)
    }

    /// Ratio state after walking `path` from the origin.
    pub fn state_along(&self, path: &LatticePath, x: Complex64) -> Result<RatioState> {
        self.check_off_axis(x)?;
        if self.opts.extended {
            Ok(self.propagate::<ComplexDd>(path, x)?.to_standard())
        } else {
            self.propagate::<Complex64>(path, x)
        }
    }

    /// Ratio state at `n` along the proportionally interleaved path.
    pub fn state_at(&self, n: &MultiIndex, x: Complex64) -> Result<RatioState> {
        self.check_index(n)?;
        self.state_along(&LatticePath::interleaved(n), x)
    }

    /// `P_{n+e_k}(x) / P_n(x)`, or `P_{n+e_k}(s x) / (s P_n(s x))` with
    /// `s = n^gamma` when `scaled` is given.
    pub fn neighbor_ratio(
        &self,
        n: &MultiIndex,
        k: usize,
        x: Complex64,
        scaled: Option<Scaling>,
    ) -> Result<Complex64> {
        self.check_index(n)?;
        self.neighbor_ratio_along(&LatticePath::interleaved(n), k, x, scaled)
    }

    /// As [`Self::neighbor_ratio`], reaching `n` along a given path.
    pub fn neighbor_ratio_along(
        &self,
        path: &LatticePath,
        k: usize,
        x: Complex64,
        scaled: Option<Scaling>,
    ) -> Result<Complex64> {
        let r = self.provider.dim();
        if k >= r {
            return Err(Error::InvalidArgument(format!("direction {} out of range for r={r}", k + 1)));
        }
        let s = scaled.map_or(1.0, |s| s.factor());
        let xs = x * s;
        self.check_off_axis(xs)?;
        let ratio = if self.opts.extended {
            self.forward::<ComplexDd>(path, k, xs)?.to_c64()
        } else {
            self.forward::<Complex64>(path, k, xs)?
        };
        Ok(ratio / s)
    }

    fn forward<S: Scalar>(&self, path: &LatticePath, k: usize, x: Complex64) -> Result<S> {
        let state = self.propagate::<S>(path, x)?;
        let (a, b) = self.provider.coefficients(&state.index)?;
        Ok(state.forward_ratio_with(k, &a, &b))
    }

    pub fn lower_set(&self, n: &MultiIndex) -> Result<LowerSet> {
        self.check_index(n)?;
        LowerSet::new(self.provider, n, self.opts.dp_cap)
    }

    /// `P_n(x)` and `P_n'(x)` by the direct lower-set recurrence.
    pub fn eval_dp(&self, n: &MultiIndex, x: Complex64) -> Result<DpValue> {
        let set = self.lower_set(n)?;
        Ok(if self.opts.extended { set.eval::<ComplexDd>(x) } else { set.eval::<Complex64>(x) })
    }

    /// `P_n'(x) / (|n| P_n(x))`.
    pub fn stieltjes_estimate(&self, n: &MultiIndex, x: Complex64) -> Result<Complex64> {
        let w = n.weight();
        if w == 0 {
            return Err(Error::Undefined("the Stieltjes estimate needs |n| > 0".into()));
        }
        Ok(self.state_at(n, x)?.u / w as f64)
    }

    /// `P_n'/P_n` as the log-derivative at `n - n_r e_r` plus the
    /// log-derivatives of the successive ratios `P_{m+e_r} / P_m` in the last
    /// direction.
    pub fn telescoped_logderiv(&self, n: &MultiIndex, x: Complex64) -> Result<Complex64> {
        self.check_index(n)?;
        self.check_off_axis(x)?;
        let r = self.provider.dim();
        let last = r - 1;
        let mut base = n.clone();
        let tail = n.get(last);
        for _ in 0..tail {
            base = base.minus(last).expect("n_r > 0");
        }
        let mut path = LatticePath::interleaved(&base);
        for _ in 0..tail {
            path.push(last);
        }
        if self.opts.extended {
            Ok(self.telescope::<ComplexDd>(&path, base.weight(), x)?.to_c64())
        } else {
            self.telescope::<Complex64>(&path, base.weight(), x)
        }
    }

    fn telescope<S: Scalar>(&self, path: &LatticePath, split: usize, x: Complex64) -> Result<S> {
        let r = self.provider.dim();
        let last = r - 1;
        let mut state = RatioState::<S>::new(r, x);
        let mut buf = StepBuffers::new(r);
        for &k in &path.steps()[..split] {
            state.advance_with(k, self.provider, &mut buf)?;
        }
        let mut total = state.u;
        for _ in split..path.len() {
            state.advance_with(last, self.provider, &mut buf)?;
            // R = 1/h, so R'/R = -h'/h with h' = g - h u
            total = total + state.u - state.g[last] / state.h[last];
        }
        Ok(total)
    }

    /// Sorted real zeros of `P_n`, `|n| <= 64`.
    pub fn real_zeros(&self, n: &MultiIndex) -> Result<Vec<f64>> {
        if n.weight() > MAX_ZERO_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "zero extraction is limited to degree {MAX_ZERO_DEGREE}, got {}",
                n.weight()
            )));
        }
        real_zeros_of(&self.lower_set(n)?)
    }
}
