//! Complex scalars for the evaluators: `Complex64` and a double-double
//! complex type for extended-precision runs.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;

    fn from_f64(v: f64) -> Self {
        Self::from_c64(Complex64::new(v, 0.0))
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn scale(self, s: f64) -> Self {
        self * Self::from_f64(s)
    }

    fn abs(self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for Complex64 {
    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(self) -> Complex64 {
        self
    }

    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn new(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * DoubleDouble::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DoubleDouble::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexDd {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl Add for ComplexDd {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ComplexDd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for ComplexDd {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ComplexDd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for ComplexDd {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexDd { re: -self.re, im: -self.im }
    }
}

impl Mul for ComplexDd {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ComplexDd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for ComplexDd {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        // scale the divisor to unit size first so the squared norm stays in range
        let s = o.re.hi.abs().max(o.im.hi.abs());
        let inv = DoubleDouble::new(if s > 0.0 { 1.0 / s } else { 1.0 });
        let (c, d) = (o.re * inv, o.im * inv);
        let den = c * c + d * d;
        let re = (self.re * c + self.im * d) / den * inv;
        let im = (self.im * c - self.re * d) / den * inv;
        ComplexDd { re, im }
    }
}

impl Scalar for ComplexDd {
    fn from_c64(z: Complex64) -> Self {
        ComplexDd { re: DoubleDouble::new(z.re), im: DoubleDouble::new(z.im) }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_keeps_low_bits() {
        let one = DoubleDouble::new(1.0);
        let tiny = DoubleDouble::new(1e-20);
        let s = one + tiny;
        assert_eq!(s.hi(), 1.0);
        assert_eq!(s.lo(), 1e-20);
        assert_eq!((s - one).to_f64(), 1e-20);
    }

    #[test]
    fn double_double_division() {
        let third = DoubleDouble::new(1.0) / DoubleDouble::new(3.0);
        let back = third * DoubleDouble::new(3.0) - DoubleDouble::new(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_dd_matches_complex64() {
        let a = Complex64::new(1.5, -2.25);
        let b = Complex64::new(-0.75, 3.0);
        let (da, db) = (ComplexDd::from_c64(a), ComplexDd::from_c64(b));
        for (x, y) in [
            ((da + db).to_c64(), a + b),
            ((da - db).to_c64(), a - b),
            ((da * db).to_c64(), a * b),
            ((da / db).to_c64(), a / b),
        ] {
            assert!((x - y).norm() < 1e-15 * y.norm().max(1.0));
        }
        let big = ComplexDd::from_c64(Complex64::new(1e200, 1e200));
        assert!(((big / big).to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
