use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::lseries::CompletedL;
use crate::numeric::ComplexSum;
use crate::quad::{gauss_kronrod_to_infinity, trapezoid_line, QuadOptions};
use crate::specialfn::{bessel_j, gamma, gamma_real, hyp1f1, tricomi_u, EvalBudget};
use crate::{i_pow, Error, Result};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The Laplace-type and Mellin–Barnes kernels behind the two identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelSelector {
    /// `y^{ρ+1} ∫_0^∞ e^{-xy} (Bessel term of Λ₁) dx`.
    L2,
    /// `y^{ρ+1} ∫_0^∞ e^{-xy} x^{ρ+r} ₁F₁(r; ρ+r+1; -2πiαx/λ)/Γ(r+ρ+1) dx`.
    L5,
    /// `y^{ρ+1} ∫_0^∞ e^{-xy} x^{2k+ρ} ₁F₁(r; 2k+ρ+1; -2πx/(iαλ))/Γ(2k+ρ+1) dx`.
    L6,
    /// Mellin–Barnes integral on `Re s = 2k-δ` giving `Γ Ψ(r, 1/2-ρ; ·)` minus
    /// a finite residue sum.
    Q1,
    /// The companion integral for `Ψ(r, r-2k-ρ+1/2; ·)`.
    Q2,
    /// Laplace transform in `√x` of the `Λ₃` term against `psi1`.
    I1,
    /// Laplace transform in `√x` of the `Λ₄` term against `psi2`.
    I2,
}

impl KernelSelector {
    pub const ALL: [KernelSelector; 7] = [
        KernelSelector::L2,
        KernelSelector::L5,
        KernelSelector::L6,
        KernelSelector::Q1,
        KernelSelector::Q2,
        KernelSelector::I1,
        KernelSelector::I2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelSelector::L2 => "L2",
            KernelSelector::L5 => "L5",
            KernelSelector::L6 => "L6",
            KernelSelector::Q1 => "Q1",
            KernelSelector::Q2 => "Q2",
            KernelSelector::I1 => "I1",
            KernelSelector::I2 => "I2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// Kernel parameters. With `r` and `alpha` both `None`, the kernel is summed
/// over the period function with weights `C_{rj}(-1/α_j)^r`. `L2` uses
/// `m` or, when `None`, the first five coefficients `a_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub r: Option<u32>,
    pub alpha: Option<f64>,
    pub rho: u32,
    pub y: f64,
    pub m: Option<u32>,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams { r: Some(1), alpha: Some(1.0), rho: 0, y: 10.0, m: Some(1) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelReport {
    pub selector: KernelSelector,
    pub closed: Complex64,
    pub numeric: Complex64,
    pub abs_err: f64,
    /// `abs_err / |closed|`, or `abs_err` when the closed form vanishes.
    pub rel_err: f64,
}

struct Ctx<'a> {
    l: &'a CompletedL,
    rho: u32,
    y: f64,
    budget: EvalBudget,
    opts: QuadOptions,
}

impl Ctx<'_> {
    fn lam(&self) -> f64 {
        self.l.group().lambda()
    }

    fn two_k(&self) -> i64 {
        self.l.group().weight() as i64
    }

    fn laplace_x(&self, f: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
        let y = self.y;
        let v = gauss_kronrod_to_infinity(|x: f64| Ok(f(x)? * (-x * y).exp()), 0.0, 1.0 / y, &self.opts)?.value;
        Ok(v * y.powi(self.rho as i32 + 1))
    }

    fn laplace_sqrt(&self, f: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
        let y = self.y;
        let v = gauss_kronrod_to_infinity(|u: f64| Ok(f(u * u)? * (-y * u).exp()), 0.0, 1.0 / y, &self.opts)?.value;
        Ok(v * 2f64.powi(-(self.rho as i32)))
    }

    fn p(&self) -> f64 {
        2f64.powi(self.rho as i32) / (PI.sqrt() * self.y.powf(2.0 * self.rho as f64 + 1.0))
    }

    fn w(&self) -> f64 {
        8.0 * PI / (self.lam() * self.y * self.y)
    }

    fn mb_line(&self) -> Result<f64> {
        let delta = self.l.config().delta_strip;
        let two_k = self.two_k() as f64;
        let rf = self.rho as f64;
        if !(rf + two_k + 0.5 > delta) {
            return Err(Error::precondition(alloc::format!(
                "rho + 2k + 1/2 = {} must exceed delta = {delta} for the Mellin-Barnes kernels",
                rf + two_k + 0.5
            )));
        }
        Ok(two_k - delta)
    }

    fn mb(&self, f: impl Fn(Complex64) -> Result<Complex64>) -> Result<Complex64> {
        trapezoid_line(f, self.mb_line()?, 40.0, 0.02)
    }

    /// Returns (closed, numeric) for one `(r, α)`.
    fn kernel(&self, sel: KernelSelector, r: u32, alpha: f64) -> Result<(Complex64, Complex64)> {
        let lam = self.lam();
        let y = self.y;
        let rho = self.rho;
        let rf = rho as f64;
        let ri = r as i32;
        let two_k = self.two_k();
        let b = &self.budget;
        match sel {
            KernelSelector::L5 => {
                if !(lam * y > 2.0 * PI * alpha.abs()) {
                    return Err(Error::Domain {
                        what: "L5",
                        detail: alloc::format!("needs lambda*y > 2*pi*|alpha|, got {} <= {}", lam * y, 2.0 * PI * alpha.abs()),
                    });
                }
                let closed = (Complex64::new(1.0, 2.0 * PI * alpha / (lam * y)) * y).powi(-ri);
                let g = gamma_real(r as f64 + rf + 1.0)?;
                let z = Complex64::new(0.0, -2.0 * PI * alpha / lam);
                let num = self.laplace_x(|x| {
                    Ok(hyp1f1(c(r as f64), c(r as f64 + rf + 1.0), z * x, b)? * (x.powf(rf + r as f64) / g))
                })?;
                Ok((closed, num))
            }
            KernelSelector::L6 => {
                if !(y > 2.0 * PI / (lam * alpha.abs())) {
                    return Err(Error::Domain {
                        what: "L6",
                        detail: alloc::format!("needs y > 2*pi/(lambda*|alpha|) = {}", 2.0 * PI / (lam * alpha.abs())),
                    });
                }
                let closed = Complex64::new(1.0, -2.0 * PI / (alpha * lam * y)).powi(-ri) * y.powi(-(two_k as i32));
                let bb = two_k as f64 + rf + 1.0;
                let g = gamma_real(bb)?;
                let z = Complex64::new(0.0, 2.0 * PI / (alpha * lam));
                let num = self.laplace_x(|x| Ok(hyp1f1(c(r as f64), c(bb), z * x, b)? * (x.powf(bb - 1.0) / g)))?;
                Ok((closed, num))
            }
            KernelSelector::Q1 => {
                let xx = Complex64::new(0.0, self.w() * alpha);
                let df = self.l.delta_floor();
                let mut fs = ComplexSum::new();
                for m in 0..=(df - two_k) {
                    let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
                    fs.add(xx.powi(-(m as i32)) * sgn * poch(r, m) / fact(m) * gamma(c(rf - m as f64 + 0.5))?);
                }
                let u = tricomi_u(c(r as f64), c(0.5 - rf), xx.inv(), b)?;
                let closed = gamma_real(rf + r as f64 + 0.5)? * u - fs.value();
                let lx = xx.ln();
                let gr = gamma_real(r as f64)?;
                let num = self.mb(|s| Ok((s * lx).exp() * gamma(s)? * gamma(c(r as f64) - s)? * gamma(s + rf + 0.5)? / gr))?;
                Ok((closed, num))
            }
            KernelSelector::Q2 => {
                let yy = Complex64::new(0.0, -self.w() / alpha);
                let z = yy.inv();
                let df = self.l.delta_floor();
                let mut fs = ComplexSum::new();
                for m in 0..=(df - r as i64) {
                    let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let e = two_k - m - r as i64;
                    fs.add(yy.powi(e as i32) * sgn * poch(r, m) / fact(m) * gamma(c(e as f64 + rf + 0.5))?);
                }
                let u = tricomi_u(c(r as f64), c(r as f64 - two_k as f64 - rf + 0.5), z, b)?;
                let closed = gamma_real(two_k as f64 + rf + 0.5)? * z.powi(ri - two_k as i32) * u - fs.value();
                let ly = yy.ln();
                let gr = gamma_real(r as f64)?;
                let tk = c(two_k as f64);
                let num = self.mb(|s| {
                    Ok((s * ly).exp() * gamma(tk - s)? * gamma(s + r as f64 - tk)? * gamma(s + rf + 0.5)? / gr)
                })?;
                Ok((closed, num))
            }
            KernelSelector::I1 => {
                let cl = 2.0 * PI / lam;
                let z1 = Complex64::new(0.0, -lam * y * y / (8.0 * PI * alpha));
                let closed = -self.p() * gamma_real(r as f64 + rf + 0.5)? * tricomi_u(c(r as f64), c(0.5 - rf), z1, b)?;
                let g = gamma_real(r as f64 + rf + 1.0)?;
                let pre = Complex64::new(0.0, alpha * cl).powi(ri);
                let zz = Complex64::new(0.0, -alpha * cl);
                let num = self.laplace_sqrt(|x| {
                    Ok(-pre * x.powf(r as f64 + rf) / g * hyp1f1(c(r as f64), c(r as f64 + rf + 1.0), zz * x, b)?)
                })?;
                Ok((closed, num))
            }
            KernelSelector::I2 => {
                let cl = 2.0 * PI / lam;
                let z2 = Complex64::new(0.0, alpha * lam * y * y / (8.0 * PI));
                let closed = self.p()
                    * alpha.powi(two_k as i32)
                    * gamma_real(two_k as f64 + rf + 0.5)?
                    * z2.powi(ri - two_k as i32)
                    * tricomi_u(c(r as f64), c(r as f64 - two_k as f64 - rf + 0.5), z2, b)?;
                let bb = two_k as f64 + rf + 1.0;
                let g = gamma_real(bb)?;
                let pre = i_pow(-two_k) * cl.powi(two_k as i32);
                let zz = Complex64::new(0.0, cl / alpha);
                let num = self.laplace_sqrt(|x| Ok(pre * x.powf(bb - 1.0) / g * hyp1f1(c(r as f64), c(bb), zz * x, b)?))?;
                Ok((closed, num))
            }
            KernelSelector::L2 => unreachable!(),
        }
    }

    fn l2(&self, m: u32) -> Result<(Complex64, Complex64)> {
        let lam = self.lam();
        let y = self.y;
        let k = self.l.group().k() as i64;
        let nu = (self.rho as i64 + 2 * k) as f64;
        let mf = m as f64;
        let closed = i_pow(-2 * k) * (2.0 * PI / (lam * y)).powi(2 * k as i32) * (-4.0 * PI * PI * mf / (y * lam * lam)).exp();
        let pre = i_pow(-2 * k) * (2.0 * PI / lam).powi(-(self.rho as i32));
        let b = self.budget;
        let num = self.laplace_x(|x| {
            if x == 0.0 {
                return Ok(c(0.0));
            }
            Ok(pre * (x / mf).powf(nu / 2.0) * bessel_j(nu, 4.0 * PI * (mf * x).sqrt() / lam, &b)?)
        })?;
        Ok((closed, num))
    }
}

fn fact(m: i64) -> f64 {
    (1..=m).fold(1.0, |a, j| a * j as f64)
}

fn poch(r: u32, m: i64) -> f64 {
    (0..m).fold(1.0, |a, j| a * (r as i64 + j) as f64)
}

/// Evaluates a kernel's closed form and its defining integral independently.
pub fn verify_proof_kernels(l: &CompletedL, sel: KernelSelector, params: &KernelParams) -> Result<KernelReport> {
    if !(params.y > 0.0) {
        return Err(Error::Domain { what: "y", detail: alloc::format!("y = {} must be positive", params.y) });
    }
    let ctx = Ctx {
        l,
        rho: params.rho,
        y: params.y,
        budget: EvalBudget::default(),
        opts: QuadOptions { abs_tol: 1e-15, rel_tol: 1e-11, max_intervals: 6000 },
    };
    let (closed, numeric) = if sel == KernelSelector::L2 {
        match params.m {
            Some(m) if m >= 1 => ctx.l2(m)?,
            Some(_) => return Err(Error::invalid("L2 needs m >= 1")),
            None => {
                let mut a = ComplexSum::new();
                let mut b = ComplexSum::new();
                for m in 1..=l.series().m_max().min(5) {
                    let am = l.series().a(m);
                    if am == c(0.0) {
                        continue;
                    }
                    let (x, y) = ctx.l2(m as u32)?;
                    a.add(am * x);
                    b.add(am * y);
                }
                (a.value(), b.value())
            }
        }
    } else {
        match (params.r, params.alpha) {
            (Some(r), Some(alpha)) => {
                if r == 0 || alpha == 0.0 || !alpha.is_finite() {
                    return Err(Error::invalid("kernel needs r >= 1 and a nonzero finite alpha"));
                }
                ctx.kernel(sel, r, alpha)?
            }
            _ => {
                let mut pairs: Vec<(u32, f64, Complex64)> = Vec::new();
                for b in &l.rpf().pole_blocks {
                    for (i, cf) in b.coeffs.iter().enumerate() {
                        let r = i as u32 + 1;
                        pairs.push((r, b.alpha, cf * (-1.0 / b.alpha).powi(r as i32)));
                    }
                }
                let mut a = ComplexSum::new();
                let mut bsum = ComplexSum::new();
                for (r, alpha, w) in pairs {
                    let (x, y) = ctx.kernel(sel, r, alpha)?;
                    a.add(w * x);
                    bsum.add(w * y);
                }
                (a.value(), bsum.value())
            }
        }
    };
    let abs_err = (closed - numeric).norm();
    let rel_err = if closed.norm() > 0.0 { abs_err / closed.norm() } else { abs_err };
    Ok(KernelReport { selector: sel, closed, numeric, abs_err, rel_err })
}
