use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
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

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, about 32 significant
/// digits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(self.hi.sqrt());
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * s);
        let (hi, lo) = quick_two_sum(s, r);
        Dd { hi, lo }
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `e^x` by `x = k ln 2 + r`, `r` scaled by `2^-10`, Taylor, then squaring.
    pub fn exp(self) -> Self {
        const LN2: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).mul_f64(1.0 / 1024.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for j in 1..20 {
            term = (term * r) / Dd::new(j as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        let f = 2f64.powi(k as i32);
        Dd { hi: sum.hi * f, lo: sum.lo * f }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: CDd = CDd { re: Dd::ONE, im: Dd::ZERO };

    pub const fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Cheap magnitude estimate (f64 accuracy).
    pub fn norm_f64(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    pub fn scale(self, k: Dd) -> Self {
        CDd { re: self.re * k, im: self.im * k }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex64> for CDd {
    fn from(z: Complex64) -> Self {
        CDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }
}

impl From<f64> for CDd {
    fn from(x: f64) -> Self {
        CDd { re: Dd::new(x), im: Dd::ZERO }
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.norm_sqr().recip();
        let num = self
            * CDd {
                re: b.re,
                im: -b.im,
            };
        num.scale(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_accurate_beyond_f64() {
        let t = Dd::ONE / Dd::new(3.0);
        let back = t.mul_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn cancellation_keeps_low_part() {
        let a = Dd::new(1.0).add_f64(1e-20);
        let b = a - Dd::ONE;
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn complex_division_roundtrip() {
        let a = CDd::from(Complex64::new(1.5, -2.25));
        let b = CDd::from(Complex64::new(-0.3, 7.0));
        let c = (a / b) * b - a;
        assert!(c.norm_f64() < 1e-30);
    }

    #[test]
    fn exp_and_sqrt() {
        let e = Dd::ONE.exp();
        // e = 2.718281828459045 + 1.4456468917292502e-16
        let d = (e - Dd { hi: 2.718_281_828_459_045, lo: 1.445_646_891_729_250_2e-16 }).to_f64();
        assert!(d.abs() < 1e-28, "{d}");
        let x = Dd::new(2.0).sqrt();
        assert!(((x * x) - Dd::new(2.0)).to_f64().abs() < 1e-31);
        let y = Dd::new(-37.25).exp() * Dd::new(37.25).exp();
        assert!((y - Dd::ONE).to_f64().abs() < 1e-27);
        assert_eq!(Dd::new(3.0).powi(-2).to_f64(), 1.0 / 9.0);
    }
}
