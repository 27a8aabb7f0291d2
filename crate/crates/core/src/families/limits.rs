//! Limits `a_j = lim a_{n,j} / n^{2 gamma}`, `b_j = lim b_{n,j} / n^gamma`
//! along a ray, and grouping of coincident `b` limits.

use serde::{Deserialize, Serialize};

use super::{CoefficientProvider, Family, ParamScaling, Recurrence};
use crate::error::{Error, Result};
use crate::lattice::RaySpec;

/// Absolute tolerance for treating two `b` limits as equal.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Extrapolated,
    /// No formula and no data; the value is NaN.
    Unavailable,
}

/// Coincident `b` limits collapsed into one term: `a* = sum of a_j` over the
/// members `j` with `b_j = b*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedGroup {
    pub b: f64,
    pub a: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitData {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub gamma: f64,
    pub merged: Vec<MergedGroup>,
    pub provenance_a: Vec<Provenance>,
    pub provenance_b: Vec<Provenance>,
    pub warnings: Vec<String>,
    /// Set when the limit equation must not be formed from this data.
    pub refusal: Option<String>,
}

impl LimitData {
    /// Limit data given directly, merged with [`DEFAULT_MERGE_TOL`].
    pub fn new(a: Vec<f64>, b: Vec<f64>, gamma: f64) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidArgument("limit vectors must be non-empty and of equal length".into()));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("limits must be finite".into()));
        }
        let r = a.len();
        let data = LimitData {
            a,
            b,
            gamma,
            merged: Vec::new(),
            provenance_a: vec![Provenance::ClosedForm; r],
            provenance_b: vec![Provenance::ClosedForm; r],
            warnings: Vec::new(),
            refusal: None,
        };
        Ok(merge_coincident(&data, DEFAULT_MERGE_TOL))
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn total_a(&self) -> f64 {
        self.a.iter().sum()
    }
}

/// Groups `b` entries within `tol` of each other (chained after sorting) and
/// sums their `a`. Groups are sorted by `b*`, which is the group mean.
pub fn merge_coincident(limits: &LimitData, tol: f64) -> LimitData {
    let mut order: Vec<usize> = (0..limits.b.len()).filter(|&j| limits.b[j].is_finite()).collect();
    order.sort_by(|&i, &j| limits.b[i].total_cmp(&limits.b[j]).then(i.cmp(&j)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for j in order {
        match groups.last_mut() {
            Some(g) if limits.b[j] - limits.b[*g.last().unwrap()] <= tol => g.push(j),
            _ => groups.push(vec![j]),
        }
    }
    let merged = groups
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            let b = members.iter().map(|&j| limits.b[j]).sum::<f64>() / members.len() as f64;
            let a = members.iter().map(|&j| limits.a[j]).sum();
            MergedGroup { b, a, members }
        })
        .collect();
    LimitData { merged, ..limits.clone() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitOptions {
    /// Smallest ray parameter `N` of the extrapolation samples `N, 2N, 4N`
    /// (the consistency check also uses `8N`).
    pub base_n: usize,
    /// Relative tolerance for closed-form vs extrapolated agreement.
    pub agree_tol: f64,
    /// Relative tolerance between the two Richardson estimates.
    pub consistency_tol: f64,
    pub merge_tol: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions { base_n: 2000, agree_tol: 1e-6, consistency_tol: 1e-6, merge_tol: DEFAULT_MERGE_TOL }
    }
}

/// Limits of the provider's coefficients along `ray`, with default options.
pub fn limit_coefficients(provider: &CoefficientProvider, ray: &RaySpec) -> Result<LimitData> {
    limit_coefficients_with(provider, ray, &LimitOptions::default())
}

pub fn limit_coefficients_with(
    provider: &CoefficientProvider,
    ray: &RaySpec,
    opts: &LimitOptions,
) -> Result<LimitData> {
    let r = provider.dim();
    if ray.dim() != r {
        return Err(Error::InvalidArgument(format!("ray has dimension {}, provider {r}", ray.dim())));
    }
    let gamma = ray.gamma();
    let q = ray.q();
    if matches!(provider.family(), Family::JacobiPineiro { .. } | Family::MultipleLaguerreI { .. }) {
        for i in 0..r {
            for j in i + 1..r {
                if (q[i] - q[j]).abs() <= 1e-12 {
                    return Err(Error::NoLimit(format!(
                        "{}: a-limits do not exist when q_{} = q_{}",
                        provider.family().name(),
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }

    let closed = closed_form(provider, ray);
    let base = choose_base(provider, ray, opts.base_n)?;
    let sampler = Sampler { provider, ray, base };

    let mut data = LimitData {
        a: vec![f64::NAN; r],
        b: vec![f64::NAN; r],
        gamma,
        merged: Vec::new(),
        provenance_a: vec![Provenance::Unavailable; r],
        provenance_b: vec![Provenance::Unavailable; r],
        warnings: Vec::new(),
        refusal: None,
    };

    let extrap_a = sampler.extrapolate(Kind::A, opts);
    let extrap_b = sampler.extrapolate(Kind::B, opts);

    for (kind, extrap) in [(Kind::A, &extrap_a), (Kind::B, &extrap_b)] {
        for j in 0..r {
            let cf = closed.as_ref().and_then(|c| c.get(kind, j));
            let ex = extrap.as_ref().map(|v| v[j]);
            let (value, prov) = match (cf, ex) {
                (Some(cf), Ok(ex)) => {
                    if (cf - ex).abs() <= opts.agree_tol * cf.abs() + 1e-12 {
                        (cf, Provenance::ClosedForm)
                    } else {
                        data.warnings.push(format!(
                            "{}_{}: closed form {cf} disagrees with the extrapolated limit {ex} of the \
                             implemented recurrence; using the extrapolated value",
                            kind.name(),
                            j + 1
                        ));
                        (ex, Provenance::Extrapolated)
                    }
                }
                (Some(cf), Err(e)) => {
                    data.warnings.push(format!("{}_{}: extrapolation failed ({e}); using closed form", kind.name(), j + 1));
                    (cf, Provenance::ClosedForm)
                }
                (None, Ok(ex)) => (ex, Provenance::Extrapolated),
                (None, Err(e @ (Error::UnsupportedCoefficient(_) | Error::MissingEntry(_))))
                    if matches!(provider.family(), Family::JacobiPineiro { .. }) && kind == Kind::B =>
                {
                    if data.warnings.iter().all(|w| !w.starts_with("b limits unavailable")) {
                        data.warnings.push(format!("b limits unavailable for jacobi-pineiro: {e}"));
                    }
                    (f64::NAN, Provenance::Unavailable)
                }
                (None, Err(e)) => return Err(e.clone()),
            };
            match kind {
                Kind::A => {
                    data.a[j] = value;
                    data.provenance_a[j] = prov;
                }
                Kind::B => {
                    data.b[j] = value;
                    data.provenance_b[j] = prov;
                }
            }
        }
    }

    if matches!(provider.family(), Family::MultipleHermite { .. })
        && !provider.scales_params()
        && r >= 2
    {
        data.refusal = Some(
            "unscaled multiple Hermite: all b limits coincide, so the partial fraction \
             decomposition is unavailable; enable parameter scaling"
                .into(),
        );
    }
    Ok(merge_coincident(&data, opts.merge_tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    A,
    B,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::A => "a",
            Kind::B => "b",
        }
    }
}

struct ClosedForm {
    a: Vec<Option<f64>>,
    b: Vec<Option<f64>>,
}

impl ClosedForm {
    fn get(&self, kind: Kind, j: usize) -> Option<f64> {
        match kind {
            Kind::A => self.a[j],
            Kind::B => self.b[j],
        }
    }
}

fn same(g: f64, target: f64) -> bool {
    (g - target).abs() < 1e-12
}

/// Limits stated in closed form for each family at its natural scaling.
fn closed_form(p: &CoefficientProvider, ray: &RaySpec) -> Option<ClosedForm> {
    let q = ray.q();
    let r = q.len();
    let g = ray.gamma();
    let all = |v: Vec<f64>| v.into_iter().map(Some).collect::<Vec<_>>();
    match p.family() {
        Family::JacobiPineiro { .. } if same(g, 0.0) => {
            let common: f64 = q.iter().map(|qi| 1.0 / (1.0 + qi)).product();
            let a = (0..r)
                .map(|j| {
                    let mut v = q[j].powi(r as i32 + 1) / (1.0 + q[j]).powi(3) * common;
                    for i in (0..r).filter(|&i| i != j) {
                        v /= q[j] - q[i];
                    }
                    Some(v)
                })
                .collect();
            Some(ClosedForm { a, b: vec![None; r] })
        }
        Family::MultipleHermite { c } if same(g, 0.5) => {
            let b = match p.scaling() {
                ParamScaling::Off => vec![0.0; r],
                ParamScaling::Reference(_) => c.iter().map(|v| v / 2.0).collect(),
            };
            Some(ClosedForm { a: all(q.to_vec()), b: all(b) })
        }
        Family::MultipleLaguerreI { .. } if same(g, 1.0) => {
            let a = (0..r)
                .map(|j| {
                    let mut v = q[j].powi(r as i32 + 1);
                    for i in (0..r).filter(|&i| i != j) {
                        v /= q[j] - q[i];
                    }
                    v
                })
                .collect();
            Some(ClosedForm { a: all(a), b: all(q.iter().map(|v| 1.0 + v).collect()) })
        }
        Family::MultipleLaguerreII { c, .. } if same(g, 1.0) => {
            let tail: f64 = q.iter().zip(c).map(|(qi, ci)| qi / ci).sum();
            Some(ClosedForm {
                a: all(q.iter().zip(c).map(|(qj, cj)| qj / (cj * cj)).collect()),
                b: all(c.iter().map(|cj| 1.0 / cj + tail).collect()),
            })
        }
        Family::MultipleCharlier { a } if same(g, 1.0) && p.scales_params() => Some(ClosedForm {
            a: all(a.iter().zip(q).map(|(aj, qj)| aj * qj).collect()),
            b: all(a.iter().map(|aj| aj + 1.0).collect()),
        }),
        Family::ConstantCustom { a, b } if same(g, 0.0) => Some(ClosedForm { a: all(a.clone()), b: all(b.clone()) }),
        _ => None,
    }
}

/// Smallest denominator `d <= 1000` with `q d` within `1e-12` of an integer.
fn denominator(q: f64) -> Option<u64> {
    (1..=1000u64).find(|&d| {
        let v = q * d as f64;
        (v - v.round()).abs() <= 1e-12 * d as f64
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Base `N` for extrapolation. When all `q_j` are rationals with small
/// denominators, `N` is aligned to their lcm so that `floor(q_j n)` is exact at
/// every sample and the samples are smooth in `1/n`.
fn choose_base(p: &CoefficientProvider, ray: &RaySpec, requested: usize) -> Result<usize> {
    let lcm = ray.q().iter().try_fold(1u64, |acc, &q| {
        let d = denominator(q)?;
        let l = acc / gcd(acc, d) * d;
        (l <= 1_000_000).then_some(l)
    });
    if let Family::TableCustom(table) = p.family() {
        // largest N with the 8N sample inside the table
        let mut n = 0usize;
        while table.contains(&ray.index(8 * (n + 1))) {
            n += 1;
            if n > 1 << 24 {
                break;
            }
        }
        if n < 2 {
            return Err(Error::NonConvergence(format!(
                "table too small to extrapolate along the ray (needs entries up to {})",
                ray.index(16)
            )));
        }
        let n = n.min(requested);
        return Ok(match lcm {
            Some(l) if n as u64 >= l => (n as u64 / l * l) as usize,
            _ => n,
        });
    }
    let n = requested.max(1);
    Ok(match lcm {
        Some(l) => (n as u64).div_ceil(l) as usize * l as usize,
        None => n,
    })
}

struct Sampler<'a> {
    provider: &'a CoefficientProvider,
    ray: &'a RaySpec,
    base: usize,
}

impl Sampler<'_> {
    fn sample(&self, kind: Kind, n: usize) -> Result<Vec<f64>> {
        let p = self.provider.at_reference(n as f64);
        let idx = self.ray.index(n);
        let g = self.ray.gamma();
        let nf = n as f64;
        Ok(match kind {
            Kind::A => p.a_coefficients(&idx)?.into_iter().map(|v| v / nf.powf(2.0 * g)).collect(),
            Kind::B => p.coefficients(&idx)?.1.into_iter().map(|v| v / nf.powf(g)).collect(),
        })
    }

    /// Richardson extrapolation of the scaled samples at `N, 2N, 4N`,
    /// eliminating the first two terms of an expansion in `h = n^{-p}`; `p = 1`
    /// for integer `gamma`, otherwise the fractional part of `gamma`.
    fn extrapolate(&self, kind: Kind, opts: &LimitOptions) -> Result<Vec<f64>> {
        let g = self.ray.gamma();
        let frac = g - g.floor();
        let p = if frac < 1e-12 || 1.0 - frac < 1e-12 { 1.0 } else { frac };
        let t = 2f64.powf(p);
        let n = self.base;
        let s: Vec<Vec<f64>> = [n, 2 * n, 4 * n, 8 * n]
            .iter()
            .map(|&m| self.sample(kind, m))
            .collect::<Result<_>>()?;
        let r = s[0].len();
        let mut out = Vec::with_capacity(r);
        for j in 0..r {
            let v = [s[0][j], s[1][j], s[2][j], s[3][j]];
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonConvergence(format!("{}_{}: non-finite samples", kind.name(), j + 1)));
            }
            let d_first = (v[1] - v[0]).abs();
            let d_last = (v[3] - v[2]).abs();
            if d_last > 1e-10 * (1.0 + v[3].abs()) && d_last >= 0.75 * d_first {
                return Err(Error::NoLimit(format!(
                    "{}_{} / n^{} keeps changing: {:e} at n={} vs {:e} at n={}",
                    kind.name(),
                    j + 1,
                    if kind == Kind::A { 2.0 * g } else { g },
                    v[2],
                    4 * n,
                    v[3],
                    8 * n
                )));
            }
            let rich = |x0: f64, x1: f64, x2: f64| {
                let r0 = (t * x1 - x0) / (t - 1.0);
                let r1 = (t * x2 - x1) / (t - 1.0);
                (t * t * r1 - r0) / (t * t - 1.0)
            };
            let e1 = rich(v[0], v[1], v[2]);
            let e2 = rich(v[1], v[2], v[3]);
            if !e1.is_finite() || (e1 - e2).abs() > opts.consistency_tol * e1.abs().max(1.0) {
                return Err(Error::NonConvergence(format!(
                    "{}_{}: Richardson estimates {e1} and {e2} disagree",
                    kind.name(),
                    j + 1
                )));
            }
            out.push(e1);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::CoefficientTable;
    use crate::lattice::MultiIndex;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300) + 1e-15
    }

    #[test]
    fn laguerre_second_limits() {
        let p = CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.0).unwrap();
        let ray = RaySpec::new(vec![0.5, 0.5], 1.0).unwrap();
        let l = limit_coefficients(&p, &ray).unwrap();
        assert_eq!(l.a, vec![0.5, 0.125]);
        assert_eq!(l.b, vec![1.75, 1.25]);
        assert!(l.provenance_a.iter().all(|p| *p == Provenance::ClosedForm));
        assert!(l.warnings.is_empty(), "{:?}", l.warnings);
        assert_eq!(l.merged.len(), 2);
    }

    #[test]
    fn scaled_charlier_limits() {
        let p = CoefficientProvider::charlier(vec![1.0, 2.0]).unwrap().with_param_scaling(1.0).unwrap();
        let ray = RaySpec::new(vec![0.5, 0.5], 1.0).unwrap();
        let l = limit_coefficients(&p, &ray).unwrap();
        assert_eq!(l.a, vec![0.5, 1.0]);
        assert_eq!(l.b, vec![2.0, 3.0]);
        assert!(l.warnings.is_empty(), "{:?}", l.warnings);
    }

    #[test]
    fn constant_limits() {
        let p = CoefficientProvider::constant(vec![0.25], vec![0.0]).unwrap();
        let l = limit_coefficients(&p, &RaySpec::new(vec![1.0], 0.0).unwrap()).unwrap();
        assert_eq!((l.a[0], l.b[0]), (0.25, 0.0));
    }

    #[test]
    fn extrapolation_matches_closed_forms() {
        let ray = RaySpec::new(vec![0.5, 0.5], 1.0).unwrap();
        let cases = [
            (CoefficientProvider::laguerre_second(vec![1.0, 2.0], 0.3).unwrap(), ray.clone()),
            (
                CoefficientProvider::charlier(vec![1.0, 2.0]).unwrap().with_param_scaling(1.0).unwrap(),
                ray.clone(),
            ),
            (
                CoefficientProvider::laguerre_second(vec![1.0, 3.0, 0.5], -0.5).unwrap(),
                RaySpec::new(vec![0.25, 0.25, 0.5], 1.0).unwrap(),
            ),
        ];
        for (p, ray) in cases {
            let cf = closed_form(&p, &ray).unwrap();
            let s = Sampler { provider: &p, ray: &ray, base: 2000 };
            let ea = s.extrapolate(Kind::A, &LimitOptions::default()).unwrap();
            let eb = s.extrapolate(Kind::B, &LimitOptions::default()).unwrap();
            for j in 0..ray.dim() {
                assert!(close(ea[j], cf.a[j].unwrap(), 1e-6), "{} a_{j}: {} vs {:?}", p.family().name(), ea[j], cf.a[j]);
                assert!(close(eb[j], cf.b[j].unwrap(), 1e-6), "{} b_{j}", p.family().name());
            }
        }
    }

    #[test]
    fn jacobi_pineiro_a_limits() {
        let p = CoefficientProvider::jacobi_pineiro(vec![0.2, 0.7], 0.4).unwrap();
        let ray = RaySpec::new(vec![1.0 / 3.0, 2.0 / 3.0], 0.0).unwrap();
        let cf = closed_form(&p, &ray).unwrap();
        let opts = LimitOptions { base_n: 4000, ..Default::default() };
        let base = choose_base(&p, &ray, opts.base_n).unwrap();
        assert_eq!(base % 3, 0);
        let s = Sampler { provider: &p, ray: &ray, base };
        let ea = s.extrapolate(Kind::A, &opts).unwrap();
        for j in 0..2 {
            assert!(close(ea[j], cf.a[j].unwrap(), 1e-6), "{} vs {:?}", ea[j], cf.a[j]);
        }
        let l = limit_coefficients_with(&p, &ray, &opts).unwrap();
        assert_eq!(l.provenance_a, vec![Provenance::ClosedForm; 2]);
        assert_eq!(l.provenance_b, vec![Provenance::Unavailable; 2]);
        assert!(l.b.iter().all(|v| v.is_nan()));
        // a_2 limit has the factor 1/(q_2 - q_1) > 0, a_1 is negative
        assert!(l.a[0] < 0.0 && l.a[1] > 0.0);
    }

    #[test]
    fn coincident_q_has_no_limit() {
        let ray = RaySpec::new(vec![0.5, 0.5], 0.0).unwrap();
        let p = CoefficientProvider::jacobi_pineiro(vec![0.2, 0.7], 0.4).unwrap();
        assert!(matches!(limit_coefficients(&p, &ray), Err(Error::NoLimit(_))));
        let p = CoefficientProvider::laguerre_first(vec![0.2, 0.7]).unwrap();
        assert!(matches!(limit_coefficients(&p, &ray.with_gamma(1.0).unwrap()), Err(Error::NoLimit(_))));
    }

    #[test]
    fn laguerre_first_limits() {
        let p = CoefficientProvider::laguerre_first(vec![0.0, 0.5]).unwrap();
        let ray = RaySpec::new(vec![0.25, 0.75], 1.0).unwrap();
        let l = limit_coefficients(&p, &ray).unwrap();
        assert!(l.warnings.is_empty(), "{:?}", l.warnings);
        assert!(close(l.a[0], 0.25f64.powi(3) / (0.25 - 0.75), 1e-12));
        assert!(close(l.b[1], 1.75, 1e-12));
    }

    #[test]
    fn unscaled_charlier_diverges_without_scaling() {
        let p = CoefficientProvider::charlier(vec![1.0, 2.0]).unwrap();
        let ray = RaySpec::new(vec![0.5, 0.5], 0.0).unwrap();
        assert!(matches!(limit_coefficients(&p, &ray), Err(Error::NoLimit(_))));
        // at gamma = 1 the b limits coincide at 1 and the a limits vanish
        let l = limit_coefficients(&p, &ray.with_gamma(1.0).unwrap()).unwrap();
        assert_eq!(l.merged.len(), 1);
        assert!(l.a.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn hermite_discrepancy_is_flagged() {
        let ray = RaySpec::new(vec![0.5, 0.5], 0.5).unwrap();
        let p = CoefficientProvider::hermite(vec![1.0, -1.0]).unwrap().with_param_scaling(1.0).unwrap();
        let l = limit_coefficients(&p, &ray).unwrap();
        // the implemented recurrence has a = n_j / 2, so a_j / n -> q_j / 2
        assert!(close(l.a[0], 0.25, 1e-9) && close(l.a[1], 0.25, 1e-9));
        assert_eq!(l.provenance_a, vec![Provenance::Extrapolated; 2]);
        assert_eq!(l.provenance_b, vec![Provenance::ClosedForm; 2]);
        assert_eq!(l.b, vec![0.5, -0.5]);
        assert_eq!(l.warnings.len(), 2);
        assert!(l.refusal.is_none());

        let l = limit_coefficients(&CoefficientProvider::hermite(vec![1.0, -1.0]).unwrap(), &ray).unwrap();
        assert_eq!(l.merged.len(), 1);
        assert!(l.refusal.is_some());
    }

    #[test]
    fn table_limits_by_extrapolation() {
        let mut t = CoefficientTable::new(1).unwrap();
        for n in 0..=2000usize {
            let nf = n as f64;
            let a = if n == 0 { 0.0 } else { 0.25 + 1.0 / (nf + 1.0) };
            t.insert(MultiIndex::new(vec![n]).unwrap(), vec![a], vec![0.5 - 2.0 / (nf + 3.0)]).unwrap();
        }
        let p = CoefficientProvider::table(t);
        let l = limit_coefficients(&p, &RaySpec::new(vec![1.0], 0.0).unwrap()).unwrap();
        assert!(close(l.a[0], 0.25, 1e-6), "{}", l.a[0]);
        assert!(close(l.b[0], 0.5, 1e-6), "{}", l.b[0]);
        assert_eq!(l.provenance_a[0], Provenance::Extrapolated);

        let mut small = CoefficientTable::new(1).unwrap();
        small.insert(MultiIndex::new(vec![0]).unwrap(), vec![0.0], vec![0.0]).unwrap();
        let p = CoefficientProvider::table(small);
        assert!(matches!(
            limit_coefficients(&p, &RaySpec::new(vec![1.0], 0.0).unwrap()),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn merge_examples() {
        let l = LimitData::new(vec![0.2, 0.3], vec![1.0, 1.0], 0.0).unwrap();
        assert_eq!(l.merged, vec![MergedGroup { b: 1.0, a: 0.5, members: vec![0, 1] }]);
        let l = LimitData::new(vec![1.0, 2.0], vec![0.0, 1.0], 0.0).unwrap();
        assert_eq!(l.merged.len(), 2);
        assert_eq!((l.merged[0].b, l.merged[0].a), (0.0, 1.0));
        assert_eq!((l.merged[1].b, l.merged[1].a), (1.0, 2.0));
        let l = LimitData::new(vec![1.0, 2.0, 4.0], vec![0.0, 1e-12, 5.0], 0.0).unwrap();
        assert_eq!(l.merged.len(), 2);
        assert!(l.merged[0].b.abs() < 1e-11);
        assert_eq!(l.merged[0].a, 3.0);
        assert_eq!((l.merged[1].b, l.merged[1].a), (5.0, 4.0));
    }

    proptest! {
        #[test]
        fn merge_idempotent_and_conserves_mass(
            entries in prop::collection::vec((-1.0f64..1.0, 0usize..6), 1..8),
            tol in 1e-9f64..0.3,
        ) {
            // b values on a coarse grid so that coincidences actually occur
            let a: Vec<f64> = entries.iter().map(|e| e.0).collect();
            let b: Vec<f64> = entries.iter().map(|e| e.1 as f64 * 0.25).collect();
            let raw = LimitData::new(a.clone(), b, 0.0).unwrap();
            let once = merge_coincident(&raw, tol);
            let total: f64 = once.merged.iter().map(|g| g.a).sum();
            prop_assert!((total - a.iter().sum::<f64>()).abs() < 1e-12);
            for w in once.merged.windows(2) {
                prop_assert!(w[1].b - w[0].b > tol);
            }
            let as_data = LimitData::new(
                once.merged.iter().map(|g| g.a).collect(),
                once.merged.iter().map(|g| g.b).collect(),
                0.0,
            ).unwrap();
            let twice = merge_coincident(&as_data, tol);
            prop_assert_eq!(twice.merged.len(), once.merged.len());
            for (x, y) in twice.merged.iter().zip(&once.merged) {
                prop_assert!((x.b - y.b).abs() < 1e-15 && (x.a - y.a).abs() < 1e-15);
            }
        }
    }
}
