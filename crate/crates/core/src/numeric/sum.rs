use core::ops::AddAssign;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Neumaier's improved Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Neumaier {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Neumaier::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of complex numbers, component-wise Neumaier.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for ComplexSum {
    fn add_assign(&mut self, z: Complex64) {
        self.add(z);
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = ComplexSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}
