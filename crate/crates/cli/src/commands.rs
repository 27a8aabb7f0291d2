use std::fmt;
use std::path::Path;

use mop_ratio::acceptance::run_all;
use mop_ratio::algebraic::{branch_points, partial_fraction_numerator, principal_branch, ratio_limit};
use mop_ratio::evaluator::{EvalOptions, Evaluator, Scaling};
use mop_ratio::families::{limit_coefficients, CoefficientProvider, CoefficientTable, Recurrence};
use mop_ratio::lattice::{MultiIndex, RaySpec};
use mop_ratio::verify::{density_compare, rectangle_sample, thm2_convergence};
use mop_ratio::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::args::Settings;
use crate::complex;
use crate::output::{emit, json as to_json, Cell, Csv};
use crate::svg;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or files; exit status 2.
    Usage(String),
    /// The computation itself failed; exit status 1.
    Domain(Error),
    /// Some acceptance checks failed; exit status 1.
    Failed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Failed(n) => write!(f, "{n} acceptance check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_) | Error::Parse(_) | Error::Io(_) => CliError::Usage(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn required<'a, T>(v: &'a Option<T>, flag: &str, family: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| usage(format!("--{flag} is required for family {family}")))
}

pub fn provider(s: &Settings) -> Result<CoefficientProvider> {
    let family = s.family.as_deref().ok_or_else(|| usage("--family is required"))?;
    let p = match family {
        "jacobi-pineiro" | "jp" => {
            let alpha = required(&s.alpha, "alpha", family)?;
            let p = CoefficientProvider::jacobi_pineiro(alpha.clone(), s.beta.unwrap_or(0.0))?;
            match &s.table {
                Some(path) => p.with_b_table(CoefficientTable::load(path)?)?,
                None => p,
            }
        }
        "hermite" => CoefficientProvider::hermite(required(&s.c, "c", family)?.clone())?,
        "laguerre1" => CoefficientProvider::laguerre_first(required(&s.alpha, "alpha", family)?.clone())?,
        "laguerre2" => {
            let alpha = match s.alpha.as_deref() {
                None => 0.0,
                Some([v]) => *v,
                Some(_) => return Err(usage("laguerre2 takes a single --alpha")),
            };
            CoefficientProvider::laguerre_second(required(&s.c, "c", family)?.clone(), alpha)?
        }
        "charlier" => CoefficientProvider::charlier(required(&s.a, "a", family)?.clone())?,
        "constant" => {
            CoefficientProvider::constant(required(&s.a, "a", family)?.clone(), required(&s.b, "b", family)?.clone())?
        }
        "table" => CoefficientProvider::load_custom(required(&s.table, "table", family)?)?,
        other => return Err(usage(format!("unknown family {other:?}"))),
    };
    let p = if s.scale_params { p.with_param_scaling(1.0).map_err(|e| usage(e.to_string()))? } else { p };
    if let Some(r) = s.r {
        if r != p.dim() {
            return Err(usage(format!("--r {r} does not match the {} parameters given", p.dim())));
        }
    }
    Ok(p)
}

fn ray(s: &Settings, r: usize) -> Result<RaySpec> {
    let gamma = s.gamma.unwrap_or(0.0);
    let ray = match &s.q {
        Some(q) => RaySpec::new(q.clone(), gamma),
        None => RaySpec::uniform(r, gamma),
    }
    .map_err(|e| usage(e.to_string()))?;
    if ray.dim() != r {
        return Err(usage(format!("--q has {} entries, expected {r}", ray.dim())));
    }
    Ok(ray)
}

fn direction(s: &Settings, r: usize) -> Result<usize> {
    let k = s.k.unwrap_or(1);
    if k == 0 || k > r {
        return Err(usage(format!("--k must lie in 1..={r}")));
    }
    Ok(k - 1)
}

fn points(s: &Settings) -> Result<Option<Vec<Complex64>>> {
    s.x.as_ref()
        .map(|xs| xs.iter().map(|x| complex::parse(x).map_err(usage)).collect::<Result<Vec<_>>>())
        .transpose()
}

fn require_points(s: &Settings) -> Result<Vec<Complex64>> {
    match points(s)? {
        Some(xs) if !xs.is_empty() => Ok(xs),
        _ => Err(usage("--x is required")),
    }
}

fn eval_options(s: &Settings) -> EvalOptions {
    EvalOptions {
        delta_min: s.delta_min.unwrap_or(EvalOptions::default().delta_min),
        extended: s.extended_precision,
        ..EvalOptions::default()
    }
}

/// The indices to work on: `--index`, or the ray points for `--n`. Each comes
/// with the ray parameter used for scaling (`|index|` for explicit indices).
fn targets(s: &Settings, ray: &RaySpec) -> Result<Vec<(usize, MultiIndex, bool)>> {
    if let Some(index) = &s.index {
        let m = MultiIndex::new(index.clone()).map_err(|e| usage(e.to_string()))?;
        if m.dim() != ray.dim() {
            return Err(usage(format!("--index has {} entries, expected {}", m.dim(), ray.dim())));
        }
        return Ok(vec![(m.weight(), m, false)]);
    }
    let ns = s.n.as_ref().filter(|v| !v.is_empty()).ok_or_else(|| usage("--n or --index is required"))?;
    Ok(ns.iter().map(|&n| (n, ray.index(n), true)).collect())
}

fn index_cell(m: &MultiIndex) -> Cell {
    Cell::Text(m.entries().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"))
}

fn cz(z: Complex64) -> Value {
    Value::String(complex::format(z))
}

pub fn run(command: &str, s: &Settings) -> Result<()> {
    match command {
        "limits" => limits(s),
        "branch" => branch(s),
        "eval" => eval(s),
        "converge" => converge(s),
        "zeros" => zeros(s),
        "density" => density(s),
        "selftest" => selftest(s),
        other => Err(usage(format!("unknown command {other}"))),
    }
}

fn limits(s: &Settings) -> Result<()> {
    let p = provider(s)?;
    let ray = ray(s, p.dim())?;
    let l = limit_coefficients(&p, &ray)?;
    let mut v = serde_json::to_value(&l).map_err(|e| CliError::Domain(e.into()))?;
    v["family"] = json!(p.family().name());
    v["q"] = json!(ray.q());
    emit(&to_json(&v), s.out.as_deref())?;
    Ok(())
}

fn branch(s: &Settings) -> Result<()> {
    let p = provider(s)?;
    let ray = ray(s, p.dim())?;
    let xs = require_points(s)?;
    let l = limit_coefficients(&p, &ray)?;
    let eq = partial_fraction_numerator(&l)?;
    let bps = if eq.numerator.is_zero() { Vec::new() } else { branch_points(&eq)? };
    let mut pts = Vec::new();
    for &x in &xs {
        let res = principal_branch(&eq, x)?;
        let ratios = (0..eq.dim()).map(|k| ratio_limit(&eq, x, k).map(cz)).collect::<mop_ratio::Result<Vec<_>>>()?;
        pts.push(json!({
            "x": cz(x),
            "z": cz(res.z),
            "all_roots": res.all_roots.iter().map(|&r| cz(r)).collect::<Vec<_>>(),
            "ratio_limits": ratios,
            "residual": res.residual,
            "path_log": {
                "steps": res.path_log.steps,
                "halvings": res.path_log.halvings,
                "min_gap": res.path_log.min_gap,
            },
        }));
    }
    let v = json!({
        "family": p.family().name(),
        "q": ray.q(),
        "gamma": ray.gamma(),
        "limits": serde_json::to_value(&l).map_err(|e| CliError::Domain(e.into()))?,
        "numerator": eq.numerator.coef.iter().map(|&c| cz(c)).collect::<Vec<_>>(),
        "denominator": eq.denominator.coef.iter().map(|&c| cz(c)).collect::<Vec<_>>(),
        "branch_points": bps.iter().map(|b| json!({"z": cz(b.z), "x": b.x.map(cz)})).collect::<Vec<_>>(),
        "points": pts,
    });
    emit(&to_json(&v), s.out.as_deref())?;
    Ok(())
}

fn eval(s: &Settings) -> Result<()> {
    let base = provider(s)?;
    let r = base.dim();
    let ray = ray(s, r)?;
    let xs = require_points(s)?;
    let ks: Vec<usize> = if s.k.is_some() { vec![direction(s, r)?] } else { (0..r).collect() };
    let opts = eval_options(s);
    let mut csv = Csv::new(&[
        "n", "index", "k", "x_re", "x_im", "engine", "ratio_re", "ratio_im", "log_abs_p", "logderiv_re", "logderiv_im",
    ]);
    for (n, m, on_ray) in targets(s, &ray)? {
        let p = base.at_reference(n as f64);
        let ev = Evaluator::with_options(&p, opts);
        let scaling = (on_ray && ray.gamma() > 0.0).then_some(Scaling { gamma: ray.gamma(), n: n as f64 });
        let factor = scaling.map_or(1.0, |sc| sc.factor());
        for &x in &xs {
            let xs_pt = x * factor;
            for &k in &ks {
                let (engine, ratio, log_abs, logderiv) = if xs_pt.im.abs() >= opts.delta_min {
                    let st = ev.state_at(&m, xs_pt)?;
                    ("ratio", ev.neighbor_ratio(&m, k, x, scaling)?, st.log_p.re, st.u)
                } else {
                    let here = ev.eval_dp(&m, xs_pt)?;
                    let next = ev.eval_dp(&m.plus(k), xs_pt)?;
                    let ratio = next.value.mantissa / here.value.mantissa
                        * (next.value.log_scale - here.value.log_scale).exp()
                        / factor;
                    let log_abs = here.value.mantissa.norm().ln() + here.value.log_scale;
                    ("lower-set", ratio, log_abs, here.log_derivative())
                };
                csv.row(vec![
                    n.into(),
                    index_cell(&m),
                    (k + 1).into(),
                    x.re.into(),
                    x.im.into(),
                    engine.into(),
                    ratio.re.into(),
                    ratio.im.into(),
                    log_abs.into(),
                    logderiv.re.into(),
                    logderiv.im.into(),
                ]);
            }
        }
    }
    emit(csv.as_str(), s.out.as_deref())?;
    Ok(())
}

fn converge(s: &Settings) -> Result<()> {
    let p = provider(s)?;
    let r = p.dim();
    let ray = ray(s, r)?;
    let k = direction(s, r)?;
    let grid = s.n.clone().filter(|v| !v.is_empty()).ok_or_else(|| usage("--n is required"))?;
    let xs = match points(s)? {
        Some(xs) => xs,
        None => {
            let l = limit_coefficients(&p, &ray)?;
            let finite = l.b.iter().copied().filter(|v| v.is_finite());
            let lo = finite.clone().fold(f64::INFINITY, f64::min);
            let hi = finite.fold(f64::NEG_INFINITY, f64::max);
            if lo.is_finite() { rectangle_sample(lo - 1.0, hi + 1.0) } else { rectangle_sample(-1.0, 1.0) }
        }
    };
    let rep = thm2_convergence(&p, &ray, k, &xs, &grid, eval_options(s))?;
    let mut header: Vec<String> = vec!["n".into(), "index".into(), "max_error".into()];
    header.extend((1..=xs.len()).map(|i| format!("error_{i}")));
    let mut csv = Csv::new(&header);
    for row in &rep.rows {
        let mut cells = vec![row.n.into(), index_cell(&ray.index(row.n)), row.max_error.into()];
        cells.extend(row.errors.iter().map(|&e| Cell::Float(e)));
        csv.row(cells);
    }
    emit(csv.as_str(), s.out.as_deref())?;
    if let Some(path) = &s.svg {
        let pts: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.n as f64, r.max_error)).collect();
        let title = format!("{} ratio error, k = {}", rep.family, k + 1);
        write_file(path, &svg::error_plot(&title, &[(format!("k={}", k + 1), pts)]))?;
    }
    Ok(())
}

fn zeros(s: &Settings) -> Result<()> {
    let base = provider(s)?;
    let ray = ray(s, base.dim())?;
    let mut csv = Csv::new(&["n", "index", "j", "zero"]);
    for (n, m, _) in targets(s, &ray)? {
        let p = base.at_reference(n as f64);
        let z = Evaluator::with_options(&p, eval_options(s)).real_zeros(&m)?;
        for (j, v) in z.iter().enumerate() {
            csv.row(vec![n.into(), index_cell(&m), (j + 1).into(), (*v).into()]);
        }
    }
    emit(csv.as_str(), s.out.as_deref())?;
    Ok(())
}

fn density(s: &Settings) -> Result<()> {
    let p = provider(s)?;
    let ray = ray(s, p.dim())?;
    let grid = s.n.clone().filter(|v| !v.is_empty()).ok_or_else(|| usage("--n is required"))?;
    let bins = s.bins.unwrap_or(12);
    let mut csv = Csv::new(&["n", "bin", "lo", "hi", "center", "mass", "zero_density", "model_density"]);
    let mut last = None;
    for &n in &grid {
        let rep = density_compare(&p, &ray, n, bins, eval_options(s))?;
        for i in 0..bins {
            csv.row(vec![
                n.into(),
                (i + 1).into(),
                rep.edges[i].into(),
                rep.edges[i + 1].into(),
                rep.centers[i].into(),
                rep.histogram[i].into(),
                rep.zero_density[i].into(),
                rep.model_density[i].into(),
            ]);
        }
        eprintln!("n={n}: sup discrepancy {:.6e} (eps = {:.6e})", rep.discrepancy, rep.epsilon);
        last = Some((n, rep));
    }
    emit(csv.as_str(), s.out.as_deref())?;
    if let (Some(path), Some((n, rep))) = (&s.svg, last) {
        let title = format!("zeros of P at n = {n}");
        let chart = svg::density_plot(
            &title,
            &rep.edges,
            &rep.histogram,
            &[("model", &rep.model_density), ("smoothed zeros", &rep.zero_density)],
        );
        write_file(path, &chart)?;
    }
    Ok(())
}

fn selftest(s: &Settings) -> Result<()> {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    if let Some(path) = &s.out {
        let v = serde_json::to_value(&outcomes).map_err(|e| CliError::Domain(e.into()))?;
        write_file(path, &to_json(&v))?;
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    if failed > 0 {
        return Err(CliError::Failed(failed));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}
