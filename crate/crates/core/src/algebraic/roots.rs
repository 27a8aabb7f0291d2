//! Simultaneous root finding (Aberth-Ehrlich iteration).

use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

const MAX_ITER: usize = 200;
const UPDATE_TOL: f64 = 1e-14;
const RESIDUAL_TOL: f64 = 1e-12;

/// Whether `root` passes the residual test
/// `|p(root)| <= 1e-12 * sum|c_i| * max(1, |root|)^deg`.
pub fn residual_ok(p: &Poly, root: Complex64) -> bool {
    residual_ratio(p, root) <= 1.0
}

fn residual_ratio(p: &Poly, root: Complex64) -> f64 {
    let deg = p.degree().unwrap_or(0) as i32;
    let bound = RESIDUAL_TOL * p.norm1() * root.norm().max(1.0).powi(deg);
    p.eval(root).norm() / bound
}

/// All roots of `p` with multiplicity.
pub fn all_roots(p: &Poly) -> Result<Vec<Complex64>> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidArgument("root finding needs degree >= 1".into())),
    };
    let lead = p.leading();
    if !lead.is_finite() || p.coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
    }
    if deg == 1 {
        return Ok(vec![-p.coef[0] / lead]);
    }
    let monic = p.scale(1.0 / lead);
    let radius = 1.0 + monic.coef[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / deg as f64 + 0.4))
        .collect();
    let mut iterations = 0;
    for it in 1..=MAX_ITER {
        iterations = it;
        let mut worst = 0.0f64;
        for i in 0..deg {
            let (v, d) = monic.eval_with_derivative(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < UPDATE_TOL {
            break;
        }
    }
    for zi in z.iter_mut() {
        polish(&monic, zi);
    }
    let worst = z.iter().map(|&r| residual_ratio(p, r)).fold(0.0, f64::max);
    if !(worst <= 1.0) {
        let residual = z.iter().map(|&r| p.eval(r).norm()).fold(0.0, f64::max);
        return Err(Error::Solver { iterations, residual });
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

/// A few Newton steps, kept only while they reduce the residual.
fn polish(p: &Poly, z: &mut Complex64) {
    let mut best = p.eval(*z).norm();
    for _ in 0..3 {
        let (v, d) = p.eval_with_derivative(*z);
        let step = v / d;
        if !step.is_finite() {
            return;
        }
        let cand = *z - step;
        let r = p.eval(cand).norm();
        if r < best {
            *z = cand;
            best = r;
        } else {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic() {
        let r = all_roots(&Poly::from_real(&[0.25, -2.0, 1.0])).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!((r[0] - c(1.0 - s, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0 + s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn factored_cubic_and_linear() {
        let x = c(0.0, 5.0);
        let p = &(&Poly::linear(x) * &Poly::linear(c(0.0, 0.0))) * &Poly::linear(c(1.0, 0.0));
        let r = all_roots(&p).unwrap();
        for want in [x, c(0.0, 0.0), c(1.0, 0.0)] {
            assert!(r.iter().any(|z| (z - want).norm() < 1e-13));
        }
        assert_eq!(all_roots(&Poly::linear(c(2.0, -1.0))).unwrap(), vec![c(2.0, -1.0)]);
        assert!(all_roots(&Poly::constant(c(1.0, 0.0))).is_err());
    }

    #[test]
    fn double_root_passes_residual() {
        let p = &Poly::linear(c(0.5, 0.0)) * &Poly::linear(c(0.5, 0.0));
        let r = all_roots(&p).unwrap();
        assert!(r.iter().all(|z| (z - c(0.5, 0.0)).norm() < 1e-7));
    }

    proptest! {
        #[test]
        fn recovers_random_roots(roots in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..7)) {
            let mut p = Poly::constant(c(1.0, 0.0));
            for &(re, im) in &roots {
                p = &p * &Poly::linear(c(re, im));
            }
            let found = all_roots(&p).unwrap();
            prop_assert_eq!(found.len(), roots.len());
            for z in &found {
                prop_assert!(residual_ok(&p, *z));
            }
        }
    }
}
