use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{BlockRange, CompletedL};
use crate::automorphic::{fourier_sum, majorant};
use crate::hecke::PoleBlock;
use crate::numeric::ComplexSum;
use crate::quad::{gauss_kronrod, QuadOptions};
use crate::specialfn::{gamma, hyp2f1};
use crate::{i_pow, Error, Result};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl CompletedL {
    /// Number of `r` values of a pole block that enter `E^B`.
    pub fn block_r_max(&self, b: &PoleBlock) -> usize {
        match self.config.block_range {
            BlockRange::Stored => b.coeffs.len(),
            BlockRange::CappedAtK => b.coeffs.len().min(self.group.k() as usize),
        }
    }

    /// Upper limit used for the `D` integral at `s`.
    pub fn d_upper_limit(&self, s: Complex64) -> Result<f64> {
        let cst = 2.0 * PI / self.group.lambda();
        let m1 = majorant(&self.series, &self.group, 1.0, &self.config.budget)?;
        if m1 == 0.0 {
            return Ok(self.config.quad_y_max);
        }
        let p = (s.re - 1.0).max(self.two_k() - s.re - 1.0).max(0.0);
        let target = self.config.quad_abs_tol * 1e-2;
        let mut y = self.config.quad_y_max;
        loop {
            let denom = cst - p / y;
            if denom > 0.5 * cst {
                let tail = m1 * (cst * (1.0 - y)).exp() * y.powf(p) / denom;
                if tail <= target {
                    return Ok(y);
                }
            }
            y += 0.5;
            if y > 1e4 {
                return Err(Error::TailNotCertifiable { y, needed: p / cst });
            }
        }
    }

    /// `D(s) = ∫_1^∞ (F(iy) - a₀)(y^s + i^{2k} y^{2k-s}) dy/y`, entire in `s`.
    pub fn d_integral(&self, s: Complex64) -> Result<Complex64> {
        if self.series.coeffs().iter().all(|a| *a == Complex64::new(0.0, 0.0)) {
            return Ok(c(0.0));
        }
        let y_max = self.d_upper_limit(s)?;
        let e = self.i2k();
        let two_k_minus_s = c(self.two_k()) - s;
        let budget = self.config.budget;
        let f = |y: f64| -> Result<Complex64> {
            let fy = fourier_sum(&self.series, &self.group, Complex64::new(0.0, y), &budget, false)?.value;
            let ly = y.ln();
            Ok(fy * ((s * ly).exp() + e * (two_k_minus_s * ly).exp()) / y)
        };
        let opts = QuadOptions {
            abs_tol: self.config.quad_abs_tol,
            rel_tol: self.config.quad_rel_tol,
            max_intervals: 4000,
        };
        Ok(gauss_kronrod(f, 1.0, y_max, &opts)?.value)
    }

    /// `D⁰(s) = -a₀ (1/s - i^{2k}/(s-2k))`.
    pub fn d0(&self, s: Complex64) -> Result<Complex64> {
        let a0 = self.series.a0();
        if a0 == c(0.0) {
            return Ok(c(0.0));
        }
        self.check_pole(s, 0.0)?;
        self.check_pole(s, self.two_k())?;
        Ok(-a0 * (s.inv() - self.i2k() / (s - self.two_k())))
    }

    /// `E⁰(s) = Σ C_r (-i)^r [1/(r-s) + i^{2k}/(r-2k+s)]`.
    pub fn e0(&self, s: Complex64) -> Result<Complex64> {
        let e = self.i2k();
        let mut acc = ComplexSum::new();
        for t in &self.rpf.zero_terms {
            let r = t.r as f64;
            self.check_pole(s, r)?;
            self.check_pole(s, self.two_k() - r)?;
            acc.add(t.coeff * i_pow(-(t.r as i64)) * ((c(r) - s).inv() + e / (s + r - self.two_k())));
        }
        Ok(acc.value())
    }

    fn check_integer_poles(&self, s: Complex64, keep: impl Fn(f64) -> bool) -> Result<()> {
        let n = s.re.round();
        if keep(n) {
            self.check_pole(s, n)?;
        }
        Ok(())
    }

    /// The hypergeometric piece `E^H(s)`.
    pub fn eh(&self, s: Complex64) -> Result<Complex64> {
        if self.rpf.pole_blocks.is_empty() {
            return Ok(c(0.0));
        }
        let two_k = self.two_k();
        self.check_integer_poles(s, |n| n <= 0.0 || n >= two_k)?;
        let e = self.i2k();
        let one = c(1.0);
        let sp = s + 1.0;
        let sm = c(1.0 + two_k) - s;
        let budget = self.config.budget;
        let mut acc = ComplexSum::new();
        for b in &self.rpf.pole_blocks {
            let ia1 = Complex64::new(1.0, b.alpha);
            let w = ia1.inv();
            for (i, coef) in b.coeffs.iter().enumerate() {
                let r = (i + 1) as i32;
                let rc = c(r as f64);
                let pre = i_pow(-(r as i64)) * ia1.powi(-r);
                let h1 = hyp2f1(one, rc, sp, w, &budget)?;
                let h2 = hyp2f1(one, rc, sm, w, &budget)?;
                acc.add(coef * pre * (h1 / s + e * h2 / (c(two_k) - s)));
            }
        }
        Ok(-acc.value())
    }

    /// The Beta piece `E^B(s) = i^{2k} Σ C (-1/α)^r B(2k-s, r-2k+s) (iα)^{2k-s}`.
    pub fn eb(&self, s: Complex64) -> Result<Complex64> {
        if self.rpf.pole_blocks.is_empty() {
            return Ok(c(0.0));
        }
        self.check_integer_poles(s, |_| true)?;
        let two_k = self.two_k();
        let w = c(two_k) - s;
        let gw = gamma(w)?;
        let mut acc = ComplexSum::new();
        for b in &self.rpf.pole_blocks {
            let ia = Complex64::new(0.0, b.alpha).powc(w);
            for r in 1..=self.block_r_max(b) {
                let rf = r as f64;
                let beta = gw * gamma(s + rf - two_k)? / gamma(c(rf))?;
                acc.add(b.coeffs[r - 1] * (-1.0 / b.alpha).powi(r as i32) * beta * ia);
            }
        }
        Ok(self.i2k() * acc.value())
    }

    /// `i^{2k} Σ C (-1/α)^r {(iα)^s B(s, r-s) - i^{-s} α^{2k-s} B(2k-s, r-2k+s)}`.
    pub(crate) fn r_expanded(&self, s: Complex64) -> Result<Complex64> {
        if self.rpf.pole_blocks.is_empty() {
            return Ok(c(0.0));
        }
        self.check_integer_poles(s, |_| true)?;
        let two_k = self.two_k();
        let w = c(two_k) - s;
        let (gs, gw) = (gamma(s)?, gamma(w)?);
        let i_ms = (Complex64::new(0.0, -0.5 * PI) * s).exp();
        let mut acc = ComplexSum::new();
        for b in &self.rpf.pole_blocks {
            let ias = Complex64::new(0.0, b.alpha).powc(s);
            let aw = c(b.alpha).powc(w);
            for r in 1..=self.block_r_max(b) {
                let rf = r as f64;
                let gr = gamma(c(rf))?;
                let b1 = gs * gamma(c(rf) - s)? / gr;
                let b2 = gw * gamma(s + rf - two_k)? / gr;
                acc.add(b.coeffs[r - 1] * (-1.0 / b.alpha).powi(r as i32) * (ias * b1 - i_ms * aw * b2));
            }
        }
        Ok(self.i2k() * acc.value())
    }
}
