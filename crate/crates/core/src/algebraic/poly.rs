use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Polynomial with complex coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub coef: Vec<Complex64>,
}

impl Poly {
    pub fn new(coef: Vec<Complex64>) -> Self {
        let mut p = Poly { coef };
        p.trim();
        p
    }

    pub fn from_real(coef: &[f64]) -> Self {
        Self::new(coef.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coef: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z - c`.
    pub fn linear(c: Complex64) -> Self {
        Poly { coef: vec![-c, Complex64::new(1.0, 0.0)] }
    }

    fn trim(&mut self) {
        while matches!(self.coef.last(), Some(c) if *c == Complex64::new(0.0, 0.0)) {
            self.coef.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coef.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coef.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coef.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut d = zero;
        for &c in self.coef.iter().rev() {
            d = d * z + p;
            p = p * z + c;
        }
        (p, d)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coef.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coef.iter().map(|&c| c * s).collect())
    }

    /// Sum of coefficient magnitudes.
    pub fn norm1(&self) -> f64 {
        self.coef.iter().map(|c| c.norm()).sum()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coef.len().max(o.coef.len());
        let get = |p: &Poly, i: usize| p.coef.get(i).copied().unwrap_or_default();
        Poly::new((0..n).map(|i| get(self, i) + get(o, i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &o.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coef.len() + o.coef.len() - 1];
        for (i, &a) in self.coef.iter().enumerate() {
            for (j, &b) in o.coef.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly::from_real(&[-1.0, 0.0, 1.0]);
        let q = &Poly::linear(Complex64::new(1.0, 0.0)) * &Poly::linear(Complex64::new(-1.0, 0.0));
        assert_eq!(p, q);
        assert_eq!(p.derivative(), Poly::from_real(&[0.0, 2.0]));
        assert_eq!(&p - &p, Poly::zero());
        assert_eq!(p.degree(), Some(2));
        let (v, d) = p.eval_with_derivative(Complex64::new(3.0, 0.0));
        assert_eq!((v, d), (Complex64::new(8.0, 0.0), Complex64::new(6.0, 0.0)));
    }
}
