//! Recurrence coefficients `a_{n,j}`, `b_{n,j}` of the nearest-neighbor
//! recurrence
//!
//! ```text
//! x P_n(x) = P_{n+e_k}(x) + b_{n,k} P_n(x) + sum_j a_{n,j} P_{n-e_j}(x)
//! ```
//!
//! for the classical families and for user-supplied tables, plus their limits
//! along a ray (see [`limits`]).

mod limits;
mod table;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::MultiIndex;

pub use limits::{
    limit_coefficients, merge_coincident, LimitData, LimitOptions, MergedGroup, Provenance,
    DEFAULT_MERGE_TOL,
};
pub use table::CoefficientTable;

/// Anything that supplies recurrence coefficients at lattice points.
///
/// Implementations must return `a_j = 0` whenever `n_j = 0`.
pub trait Recurrence: Send + Sync {
    fn dim(&self) -> usize;

    fn fill(&self, n: &MultiIndex, a: &mut [f64], b: &mut [f64]) -> Result<()>;

    fn coefficients(&self, n: &MultiIndex) -> Result<(Vec<f64>, Vec<f64>)> {
        let r = self.dim();
        let mut a = vec![0.0; r];
        let mut b = vec![0.0; r];
        self.fill(n, &mut a, &mut b)?;
        Ok((a, b))
    }
}

/// The coefficient families understood by [`CoefficientProvider`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Jacobi-Piñeiro, weights `x^{alpha_j} (1-x)^beta` on `[0,1]`. Only the
    /// `a` coefficients have a closed form here; `b` needs a table.
    JacobiPineiro { alpha: Vec<f64>, beta: f64 },
    /// Multiple Hermite, weights `exp(-x^2 + c_j x)`.
    MultipleHermite { c: Vec<f64> },
    /// Multiple Laguerre of the first kind, weights `x^{alpha_j} e^{-x}`.
    MultipleLaguerreI { alpha: Vec<f64> },
    /// Multiple Laguerre of the second kind, weights `x^alpha e^{-c_j x}`.
    MultipleLaguerreII { c: Vec<f64>, alpha: f64 },
    /// Multiple Charlier with Poisson parameters `a_j`.
    MultipleCharlier { a: Vec<f64> },
    /// Constant coefficients (with `a_j` switched off while `n_j = 0`).
    ConstantCustom { a: Vec<f64>, b: Vec<f64> },
    /// Explicit table.
    TableCustom(Arc<CoefficientTable>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::JacobiPineiro { .. } => "jacobi-pineiro",
            Family::MultipleHermite { .. } => "hermite",
            Family::MultipleLaguerreI { .. } => "laguerre1",
            Family::MultipleLaguerreII { .. } => "laguerre2",
            Family::MultipleCharlier { .. } => "charlier",
            Family::ConstantCustom { .. } => "constant",
            Family::TableCustom(_) => "table",
        }
    }
}

/// Parameter scaling for the families whose limits only separate when the
/// parameters grow with the index: Hermite `c_j -> c_j sqrt(N)` and Charlier
/// `a_j -> a_j N`. `N` is fixed per provider, so each provider is still a
/// genuine fixed-coefficient recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ParamScaling {
    Off,
    Reference(f64),
}

/// A coefficient family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProvider {
    family: Family,
    scaling: ParamScaling,
    b_table: Option<Arc<CoefficientTable>>,
}

fn non_integer(d: f64) -> bool {
    (d - d.round()).abs() > 1e-12
}

fn check_finite(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameters(format!("{name} must be finite: {v:?}")));
    }
    Ok(())
}

fn check_pairwise_distinct(name: &str, v: &[f64]) -> Result<()> {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Err(Error::InvalidParameters(format!("{name} must be pairwise distinct: {v:?}")));
            }
        }
    }
    Ok(())
}

fn check_alpha_non_integer_gaps(alpha: &[f64]) -> Result<()> {
    for i in 0..alpha.len() {
        for j in i + 1..alpha.len() {
            if !non_integer(alpha[i] - alpha[j]) {
                return Err(Error::InvalidParameters(format!(
                    "alpha_i - alpha_j must not be an integer: {alpha:?}"
                )));
            }
        }
    }
    Ok(())
}

fn nonempty(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidParameters(format!("{name} needs at least one entry")));
    }
    Ok(())
}

impl CoefficientProvider {
    fn plain(family: Family) -> Self {
        CoefficientProvider { family, scaling: ParamScaling::Off, b_table: None }
    }

    pub fn jacobi_pineiro(alpha: Vec<f64>, beta: f64) -> Result<Self> {
        nonempty("alpha", &alpha)?;
        check_finite("alpha", &alpha)?;
        if alpha.iter().any(|&a| a <= -1.0) || !(beta > -1.0) {
            return Err(Error::InvalidParameters("Jacobi-Piñeiro needs alpha_j, beta > -1".into()));
        }
        check_alpha_non_integer_gaps(&alpha)?;
        Ok(Self::plain(Family::JacobiPineiro { alpha, beta }))
    }

    pub fn hermite(c: Vec<f64>) -> Result<Self> {
        nonempty("c", &c)?;
        check_finite("c", &c)?;
        check_pairwise_distinct("c", &c)?;
        Ok(Self::plain(Family::MultipleHermite { c }))
    }

    pub fn laguerre_first(alpha: Vec<f64>) -> Result<Self> {
        nonempty("alpha", &alpha)?;
        check_finite("alpha", &alpha)?;
        if alpha.iter().any(|&a| a <= -1.0) {
            return Err(Error::InvalidParameters("Laguerre I needs alpha_j > -1".into()));
        }
        check_alpha_non_integer_gaps(&alpha)?;
        Ok(Self::plain(Family::MultipleLaguerreI { alpha }))
    }

    pub fn laguerre_second(c: Vec<f64>, alpha: f64) -> Result<Self> {
        nonempty("c", &c)?;
        check_finite("c", &c)?;
        if c.iter().any(|&v| v <= 0.0) || !(alpha > -1.0) {
            return Err(Error::InvalidParameters("Laguerre II needs c_j > 0 and alpha > -1".into()));
        }
        check_pairwise_distinct("c", &c)?;
        Ok(Self::plain(Family::MultipleLaguerreII { c, alpha }))
    }

    pub fn charlier(a: Vec<f64>) -> Result<Self> {
        nonempty("a", &a)?;
        check_finite("a", &a)?;
        if a.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidParameters("Charlier needs a_j > 0".into()));
        }
        check_pairwise_distinct("a", &a)?;
        Ok(Self::plain(Family::MultipleCharlier { a }))
    }

    pub fn constant(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        nonempty("a", &a)?;
        if a.len() != b.len() {
            return Err(Error::InvalidParameters("a and b must have the same length".into()));
        }
        check_finite("a", &a)?;
        check_finite("b", &b)?;
        Ok(Self::plain(Family::ConstantCustom { a, b }))
    }

    pub fn table(table: CoefficientTable) -> Self {
        Self::plain(Family::TableCustom(Arc::new(table)))
    }

    /// Reads a JSON coefficient table (`{"r": .., "entries": [..]}`).
    pub fn load_custom(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Ok(Self::table(CoefficientTable::load(path)?))
    }

    /// Supplies the Jacobi-Piñeiro `b` coefficients from a table.
    pub fn with_b_table(mut self, table: CoefficientTable) -> Result<Self> {
        if !matches!(self.family, Family::JacobiPineiro { .. }) {
            return Err(Error::InvalidArgument("a b-table only applies to Jacobi-Piñeiro".into()));
        }
        if table.dim() != self.dim() {
            return Err(Error::InvalidArgument("b-table dimension does not match".into()));
        }
        self.b_table = Some(Arc::new(table));
        Ok(self)
    }

    /// Enables parameter scaling with reference size `n`.
    pub fn with_param_scaling(mut self, reference: f64) -> Result<Self> {
        if !matches!(self.family, Family::MultipleHermite { .. } | Family::MultipleCharlier { .. }) {
            return Err(Error::InvalidArgument(format!(
                "parameter scaling is defined for hermite and charlier, not {}",
                self.family.name()
            )));
        }
        if !(reference > 0.0) {
            return Err(Error::InvalidArgument("scaling reference must be positive".into()));
        }
        self.scaling = ParamScaling::Reference(reference);
        Ok(self)
    }

    pub fn scales_params(&self) -> bool {
        matches!(self.scaling, ParamScaling::Reference(_))
    }

    /// The same provider with the scaling reference replaced by `n`; a no-op
    /// when scaling is off.
    pub fn at_reference(&self, n: f64) -> Self {
        let mut p = self.clone();
        if self.scales_params() {
            p.scaling = ParamScaling::Reference(n);
        }
        p
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scaling(&self) -> ParamScaling {
        self.scaling
    }

    /// Whether `a_{n,j} > 0` holds for `n_j > 0` by construction, which
    /// guarantees interlacing zeros.
    pub fn has_positive_a(&self) -> bool {
        match &self.family {
            Family::MultipleHermite { .. }
            | Family::MultipleLaguerreII { .. }
            | Family::MultipleCharlier { .. } => true,
            Family::ConstantCustom { a, .. } => a.iter().all(|&v| v > 0.0),
            _ => false,
        }
    }
}

impl Recurrence for CoefficientProvider {
    fn dim(&self) -> usize {
        match &self.family {
            Family::JacobiPineiro { alpha, .. } => alpha.len(),
            Family::MultipleHermite { c } => c.len(),
            Family::MultipleLaguerreI { alpha } => alpha.len(),
            Family::MultipleLaguerreII { c, .. } => c.len(),
            Family::MultipleCharlier { a } => a.len(),
            Family::ConstantCustom { a, .. } => a.len(),
            Family::TableCustom(t) => t.dim(),
        }
    }

    fn fill(&self, n: &MultiIndex, a: &mut [f64], b: &mut [f64]) -> Result<()> {
        let r = self.dim();
        if n.dim() != r {
            return Err(Error::InvalidArgument(format!("index {n} has dimension {}, expected {r}", n.dim())));
        }
        let nj = |j: usize| n.get(j) as f64;
        let total = n.weight() as f64;
        match &self.family {
            Family::JacobiPineiro { alpha, beta } => {
                let table = self.b_table.as_ref().ok_or_else(|| {
                    Error::UnsupportedCoefficient(
                        "Jacobi-Piñeiro b coefficients require a user-supplied b-table".into(),
                    )
                })?;
                let (_, tb) = table.get(n)?;
                b.copy_from_slice(tb);
                jacobi_pineiro_a(alpha, *beta, n, a);
            }
            Family::MultipleHermite { c } => {
                let s = match self.scaling {
                    ParamScaling::Off => 1.0,
                    ParamScaling::Reference(m) => m.sqrt(),
                };
                for j in 0..r {
                    a[j] = nj(j) / 2.0;
                    b[j] = c[j] * s / 2.0;
                }
            }
            Family::MultipleLaguerreI { alpha } => {
                for j in 0..r {
                    a[j] = if n.get(j) == 0 {
                        0.0
                    } else {
                        let mut v = nj(j) * (nj(j) + alpha[j]);
                        for i in (0..r).filter(|&i| i != j) {
                            v *= (nj(j) + alpha[j] - alpha[i]) / (nj(j) - nj(i) + alpha[j] - alpha[i]);
                        }
                        v
                    };
                    b[j] = total + nj(j) + alpha[j] + 1.0;
                }
            }
            Family::MultipleLaguerreII { c, alpha } => {
                let tail: f64 = (0..r).map(|i| nj(i) / c[i]).sum();
                for j in 0..r {
                    a[j] = nj(j) / (c[j] * c[j]) * (total + alpha);
                    b[j] = (total + alpha + 1.0) / c[j] + tail;
                }
            }
            Family::MultipleCharlier { a: params } => {
                let s = match self.scaling {
                    ParamScaling::Off => 1.0,
                    ParamScaling::Reference(m) => m,
                };
                for j in 0..r {
                    a[j] = params[j] * s * nj(j);
                    b[j] = params[j] * s + total;
                }
            }
            Family::ConstantCustom { a: ca, b: cb } => {
                for j in 0..r {
                    a[j] = if n.get(j) == 0 { 0.0 } else { ca[j] };
                    b[j] = cb[j];
                }
            }
            Family::TableCustom(table) => {
                let (ta, tb) = table.get(n)?;
                a.copy_from_slice(ta);
                b.copy_from_slice(tb);
            }
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(n.clone()));
        }
        Ok(())
    }
}

impl CoefficientProvider {
    /// Only the `a` coefficients; available for every family including
    /// Jacobi-Piñeiro without a b-table.
    pub fn a_coefficients(&self, n: &MultiIndex) -> Result<Vec<f64>> {
        match &self.family {
            Family::JacobiPineiro { alpha, beta } => {
                if n.dim() != alpha.len() {
                    return Err(Error::InvalidArgument(format!("index {n} has wrong dimension")));
                }
                let mut a = vec![0.0; alpha.len()];
                jacobi_pineiro_a(alpha, *beta, n, &mut a);
                if a.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite(n.clone()));
                }
                Ok(a)
            }
            _ => Ok(self.coefficients(n)?.0),
        }
    }

    /// Only the `b` coefficients.
    pub fn b_coefficients(&self, n: &MultiIndex) -> Result<Vec<f64>> {
        Ok(self.coefficients(n)?.1)
    }
}

fn jacobi_pineiro_a(alpha: &[f64], beta: f64, n: &MultiIndex, a: &mut [f64]) {
    let r = alpha.len();
    let total = n.weight() as f64;
    let common: f64 = (0..r)
        .map(|i| (total + alpha[i] + beta) / (total + n.get(i) as f64 + alpha[i] + beta))
        .product();
    for j in 0..r {
        if n.get(j) == 0 {
            a[j] = 0.0;
            continue;
        }
        let nj = n.get(j) as f64;
        let s = total + nj + alpha[j] + beta;
        let mut v = nj * (nj + alpha[j]) * (total + beta) / ((s + 1.0) * s * (s - 1.0)) * common;
        for i in (0..r).filter(|&i| i != j) {
            let ni = n.get(i) as f64;
            v *= (nj + alpha[j] - alpha[i]) / (nj - ni + alpha[j] - alpha[i]);
        }
        a[j] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn charlier_first_coefficients() {
        let p = CoefficientProvider::charlier(vec![1.0]).unwrap();
        let (a, b) = p.coefficients(&idx(&[1])).unwrap();
        assert_eq!(a, vec![1.0]);
        assert_eq!(b, vec![2.0]);
    }

    #[test]
    fn laguerre_first_b() {
        let p = CoefficientProvider::laguerre_first(vec![0.0, 0.5]).unwrap();
        let (_, b) = p.coefficients(&idx(&[2, 1])).unwrap();
        assert_eq!(b[0], 6.0);
        assert_eq!(b[1], 3.0 + 1.0 + 0.5 + 1.0);
    }

    #[test]
    fn hermite_coefficients_are_displayed_recurrence() {
        let p = CoefficientProvider::hermite(vec![1.0, -1.0]).unwrap();
        for n in [idx(&[0, 0]), idx(&[3, 5]), idx(&[10, 1])] {
            let (a, b) = p.coefficients(&n).unwrap();
            assert_eq!(b, vec![0.5, -0.5]);
            assert_eq!(a, vec![n.get(0) as f64 / 2.0, n.get(1) as f64 / 2.0]);
        }
        let s = p.with_param_scaling(4.0).unwrap();
        assert_eq!(s.coefficients(&idx(&[1, 1])).unwrap().1, vec![1.0, -1.0]);
    }

    #[test]
    fn a_vanishes_on_coordinate_hyperplanes() {
        let providers = vec![
            CoefficientProvider::jacobi_pineiro(vec![0.1, 0.6], 0.3).unwrap(),
            CoefficientProvider::hermite(vec![1.0, -1.0]).unwrap(),
            CoefficientProvider::laguerre_first(vec![0.0, 0.5]).unwrap(),
            CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.0).unwrap(),
            CoefficientProvider::charlier(vec![1.0, 2.0]).unwrap(),
            CoefficientProvider::constant(vec![0.25, 0.25], vec![0.0, 1.0]).unwrap(),
        ];
        for p in providers {
            for n in MultiIndex::up_to_weight(2, 6) {
                let a = p.a_coefficients(&n).unwrap();
                for j in 0..2 {
                    if n.get(j) == 0 {
                        assert_eq!(a[j], 0.0, "{:?} at {n}", p.family().name());
                    }
                    assert!(a[j].is_finite());
                }
            }
        }
    }

    #[test]
    fn strictly_positive_a_on_a_ray() {
        let ray = crate::lattice::RaySpec::new(vec![0.5, 0.5], 1.0).unwrap();
        let ps = [
            CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.0).unwrap(),
            CoefficientProvider::charlier(vec![1.0, 2.0]).unwrap(),
            CoefficientProvider::charlier(vec![1.0, 2.0]).unwrap().with_param_scaling(50.0).unwrap(),
        ];
        for p in &ps {
            let path = crate::lattice::LatticePath::interleaved(&ray.index(200));
            for m in path.prefixes() {
                let a = p.a_coefficients(&m).unwrap();
                for j in 0..2 {
                    if m.get(j) > 0 {
                        assert!(a[j] > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_pineiro_b_requires_table() {
        let p = CoefficientProvider::jacobi_pineiro(vec![0.1, 0.6], 0.0).unwrap();
        assert!(matches!(
            p.coefficients(&idx(&[1, 1])),
            Err(Error::UnsupportedCoefficient(_))
        ));
        assert!(p.a_coefficients(&idx(&[1, 1])).is_ok());
    }

    #[test]
    fn jacobi_pineiro_r1_matches_jacobi() {
        // r = 1 reduces to shifted monic Jacobi on [0,1]; alpha = beta = 0 is
        // shifted Legendre with a_n = n^2 / (4 (2n+1)(2n-1)).
        let p = CoefficientProvider::jacobi_pineiro(vec![0.0], 0.0).unwrap();
        for n in 1..20usize {
            let a = p.a_coefficients(&idx(&[n])).unwrap()[0];
            let nf = n as f64;
            let expected = nf * nf / (4.0 * (2.0 * nf + 1.0) * (2.0 * nf - 1.0));
            assert!((a - expected).abs() < 1e-14, "n={n}: {a} vs {expected}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(CoefficientProvider::jacobi_pineiro(vec![0.0, 1.0], 0.0).is_err());
        assert!(CoefficientProvider::jacobi_pineiro(vec![-1.5], 0.0).is_err());
        assert!(CoefficientProvider::hermite(vec![1.0, 1.0]).is_err());
        assert!(CoefficientProvider::laguerre_second(vec![1.0, -2.0], 0.0).is_err());
        assert!(CoefficientProvider::laguerre_second(vec![1.0, 2.0], -1.0).is_err());
        assert!(CoefficientProvider::laguerre_first(vec![0.0, 2.0]).is_err());
        assert!(CoefficientProvider::charlier(vec![1.0, 1.0]).is_err());
        assert!(CoefficientProvider::charlier(vec![0.0]).is_err());
        assert!(CoefficientProvider::constant(vec![0.25], vec![0.0, 1.0]).is_err());
        assert!(CoefficientProvider::laguerre_second(vec![1.0], 0.0)
            .unwrap()
            .with_param_scaling(10.0)
            .is_err());
    }

    #[test]
    fn constant_matches_equivalent_table() {
        let mut t = CoefficientTable::new(1).unwrap();
        for n in 0..=500usize {
            let a = if n == 0 { 0.0 } else { 0.25 };
            t.insert(idx(&[n]), vec![a], vec![0.0]).unwrap();
        }
        let table = CoefficientProvider::table(t);
        let constant = CoefficientProvider::constant(vec![0.25], vec![0.0]).unwrap();
        for n in 0..=500usize {
            assert_eq!(table.coefficients(&idx(&[n])).unwrap(), constant.coefficients(&idx(&[n])).unwrap());
        }
        assert!(matches!(table.coefficients(&idx(&[501])), Err(Error::MissingEntry(_))));
    }
}
