use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{EvalOptions, Evaluator, MAX_ZERO_DEGREE};
use crate::families::{CoefficientProvider, Recurrence};
use crate::lattice::MultiIndex;

/// `|n| <= 63`, so that `n + e_k` stays within the zero extraction limit.
pub const MAX_INTERLACE_WEIGHT: usize = MAX_ZERO_DEGREE - 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlaceEntry {
    pub n: MultiIndex,
    /// 0-based direction.
    pub k: usize,
    pub pass: bool,
    pub zeros_n: Vec<f64>,
    pub zeros_next: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlaceReport {
    pub max_weight: usize,
    pub entries: Vec<InterlaceEntry>,
}

impl InterlaceReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InterlaceEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// `outer[i] < inner[i] < outer[i+1]` for all `i`, with a separation margin
/// of `1e-9 max(1, |y|)`; `outer` must have one more element.
pub fn strictly_interlace(inner: &[f64], outer: &[f64]) -> bool {
    if outer.len() != inner.len() + 1 {
        return false;
    }
    inner.iter().enumerate().all(|(i, &y)| {
        let tol = 1e-9 * y.abs().max(1.0);
        outer[i] < y - tol && y + tol < outer[i + 1]
    })
}

/// Checks that the zeros of `P_n` and `P_{n+e_k}` strictly interlace for all
/// `|n| <= max_weight` and all `k`.
pub fn interlace_check(provider: &CoefficientProvider, max_weight: usize) -> Result<InterlaceReport> {
    if max_weight > MAX_INTERLACE_WEIGHT {
        return Err(Error::InvalidArgument(format!(
            "interlacing is checked up to |n| = {MAX_INTERLACE_WEIGHT}, got {max_weight}"
        )));
    }
    let r = provider.dim();
    let ev = Evaluator::with_options(provider, EvalOptions::default());
    let all = MultiIndex::up_to_weight(r, max_weight + 1);
    let zeros: HashMap<MultiIndex, Vec<f64>> = all
        .par_iter()
        .map(|n| Ok((n.clone(), ev.real_zeros(n)?)))
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for n in all.iter().filter(|n| n.weight() <= max_weight) {
        for k in 0..r {
            let next = n.plus(k);
            let (zn, zk) = (&zeros[n], &zeros[&next]);
            entries.push(InterlaceEntry {
                n: n.clone(),
                k,
                pass: strictly_interlace(zn, zk),
                zeros_n: zn.clone(),
                zeros_next: zk.clone(),
            });
        }
    }
    Ok(InterlaceReport { max_weight, entries })
}
