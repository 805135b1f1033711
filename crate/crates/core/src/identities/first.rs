use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{check_rho, check_x, BesselCutoff, IdentityOptions, IdentityReport, IdentityRequest, Which};
use crate::lseries::CompletedL;
use crate::numeric::ComplexSum;
use crate::specialfn::{bessel_j, gamma_real, hyp1f1, rgamma, EvalBudget};
use crate::{i_pow, Error, Result, Warning};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const HALF_COUNT_TOL: f64 = 1e-12;

/// `(1/Γ(ρ+1)) Σ'_{0<=m<=x} a_m (x-m)^ρ`, the `m = 0` term included. For
/// `ρ = 0` a term with `m = x` counts half.
pub fn riesz_lhs(l: &CompletedL, x: f64, rho: u32) -> Result<Complex64> {
    check_x(l, x)?;
    let s = l.series();
    let top = (x + HALF_COUNT_TOL).floor() as usize;
    let inv = 1.0 / gamma_real(rho as f64 + 1.0)?;
    let mut acc = ComplexSum::new();
    for m in 0..=top {
        let a = s.a(m);
        let d = x - m as f64;
        let w = if rho == 0 {
            if d.abs() < HALF_COUNT_TOL {
                0.5
            } else {
                1.0
            }
        } else if d <= 0.0 {
            0.0
        } else {
            d.powi(rho as i32)
        };
        acc.add(a * w);
    }
    Ok(acc.value() * inv)
}

/// `a₀ x^ρ/Γ(ρ+1)`, the part of [`riesz_lhs`] that a Perron integral over
/// `φ` (which omits `a₀`) does not see.
pub fn riesz_a0_term(l: &CompletedL, x: f64, rho: u32) -> Result<Complex64> {
    Ok(l.series().a0() * x.powi(rho as i32) / gamma_real(rho as f64 + 1.0)?)
}

/// The five right-hand terms of the first identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstTerms {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub lambda3: Complex64,
    pub lambda4: Complex64,
    pub lambda5: Complex64,
    pub bessel_terms: usize,
    /// Envelope bound of the first omitted Bessel term (sharp cutoff) or of
    /// the first tapered term (smooth cutoff).
    pub bessel_bound: f64,
}

impl FirstTerms {
    pub fn named(&self) -> Vec<(&'static str, Complex64)> {
        vec![
            ("Lambda1", self.lambda1),
            ("Lambda2", self.lambda2),
            ("Lambda3", self.lambda3),
            ("Lambda4", self.lambda4),
            ("Lambda5", self.lambda5),
        ]
    }
}

fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

fn lambda1(l: &CompletedL, x: f64, rho: u32, opts: &IdentityOptions, budget: &EvalBudget) -> Result<(Complex64, usize, f64)> {
    let s = l.series();
    let lam = l.group().lambda();
    let k = l.group().k();
    let nu = (rho + 2 * k) as f64;
    let pre = i_pow(-2 * k as i64) * (2.0 * PI / lam).powf(-(rho as f64));
    let g = s.beta() - 0.25;
    let kk = s.growth_constant();
    let env = |m: f64| {
        let t = 4.0 * PI * (m * x).sqrt() / lam;
        kk * m.powf(g) * (x / m).powf(nu / 2.0) * (2.0 / (PI * t)).sqrt().min(1.0)
    };
    let m_cap = s.m_max().min(opts.max_bessel_terms);
    let mut acc = ComplexSum::new();
    match opts.cutoff {
        BesselCutoff::Sharp => {
            for m in 1..=m_cap {
                let a = s.a(m);
                let mf = m as f64;
                if a != c(0.0) {
                    let t = 4.0 * PI * (mf * x).sqrt() / lam;
                    acc.add(a * ((x / mf).powf(nu / 2.0) * bessel_j(nu, t, budget)?));
                }
                let next = env(mf + 1.0);
                if next < budget.rel_tol.max(1e-15) * acc.value().norm() {
                    return Ok((pre * acc.value(), m, next));
                }
            }
            Ok((pre * acc.value(), m_cap, env(m_cap as f64 + 1.0)))
        }
        BesselCutoff::Smooth => {
            let m0 = opts.taper_start * m_cap as f64;
            let width = m_cap as f64 + 1.0 - m0;
            for m in 1..=m_cap {
                let a = s.a(m);
                if a == c(0.0) {
                    continue;
                }
                let mf = m as f64;
                let w = 1.0 - smooth_step((mf - m0) / width);
                if w == 0.0 {
                    continue;
                }
                let t = 4.0 * PI * (mf * x).sqrt() / lam;
                acc.add(a * (w * (x / mf).powf(nu / 2.0) * bessel_j(nu, t, budget)?));
            }
            Ok((pre * acc.value(), m_cap, env(m0.max(1.0))))
        }
    }
}

/// `Λ₁ … Λ₅` at `x`.
pub fn first_rhs_terms(
    l: &CompletedL,
    x: f64,
    rho: u32,
    opts: &IdentityOptions,
    budget: &EvalBudget,
) -> Result<FirstTerms> {
    check_rho(l, Which::First, rho)?;
    if !(x > 0.0) {
        return Err(Error::Domain { what: "x", detail: alloc::format!("x = {x} must be positive") });
    }
    let lam = l.group().lambda();
    let k = l.group().k() as i64;
    let two_k = 2 * k;
    let rf = rho as f64;
    let cl = 2.0 * PI / lam;
    let (lambda1, bessel_terms, bessel_bound) = lambda1(l, x, rho, opts, budget)?;

    let lambda2 = i_pow(two_k) * cl.powi(two_k as i32) * l.series().a0() * x.powf(two_k as f64 + rf)
        / gamma_real(two_k as f64 + rf + 1.0)?;

    let mut l3 = ComplexSum::new();
    let mut l4 = ComplexSum::new();
    let b4 = c(two_k as f64 + rf + 1.0);
    let inv_i = if opts.flip_lambda4 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
    for b in &l.rpf().pole_blocks {
        let alpha = b.alpha;
        let z3 = Complex64::new(0.0, -alpha * cl * x);
        let z4 = inv_i * (-cl * x / alpha);
        for (i, coef) in b.coeffs.iter().enumerate() {
            let r = (i + 1) as i32;
            let rc = c(r as f64);
            let sign = (-1.0 / alpha).powi(r);
            let t3 = Complex64::new(0.0, alpha).powi(r) * cl.powi(r) * x.powf(r as f64 + rf)
                / gamma_real(r as f64 + rf + 1.0)?
                * hyp1f1(rc, c(r as f64 + rf + 1.0), z3, budget)?;
            l3.add(-coef * sign * t3);
            let t4 = i_pow(-two_k) * cl.powi(two_k as i32) * x.powf(two_k as f64 + rf) / gamma_real(two_k as f64 + rf + 1.0)?
                * hyp1f1(rc, b4, z4, budget)?;
            l4.add(coef * sign * t4);
        }
    }

    let mut l5 = ComplexSum::new();
    for t in &l.rpf().zero_terms {
        let m = t.r as i64;
        let a = i_pow(-m) * cl.powi(m as i32) * x.powf(m as f64 + rf) / gamma_real(m as f64 + rf + 1.0)?;
        let e = (two_k - m) as f64;
        let bb = i_pow(two_k - m) * cl.powf(e) * x.powf(e + rf) * rgamma(c(e + rf + 1.0)).re;
        l5.add(-t.coeff * (a - bb));
    }

    Ok(FirstTerms {
        lambda1,
        lambda2,
        lambda3: l3.value(),
        lambda4: l4.value(),
        lambda5: l5.value(),
        bessel_terms,
        bessel_bound,
    })
}

pub(super) fn point(l: &CompletedL, x: f64, req: &IdentityRequest) -> Result<IdentityReport> {
    let lhs = riesz_lhs(l, x, req.rho)?;
    let t = first_rhs_terms(l, x, req.rho, &req.options, &req.truncation)?;
    let mut rep = IdentityReport::assemble(
        Which::First,
        req.rho,
        x,
        lhs,
        t.named(),
        vec![("bessel", t.bessel_terms)],
    );
    if req.options.cutoff == BesselCutoff::Sharp && t.bessel_bound >= 1e-12 * lhs.norm().max(1.0) {
        rep.warnings.push(Warning::new(
            "bessel-truncation",
            alloc::format!("Bessel series hit its cap at {} terms with envelope {:.3e}", t.bessel_terms, t.bessel_bound),
        ));
    }
    Ok(rep)
}

/// Perron-integral value and the `O(T^{-ρ})` truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronValue {
    pub value: Complex64,
    pub truncation: f64,
    pub nodes: usize,
}

/// `(1/2πi) ∫_{σ-iT}^{σ+iT} Γ(s)φ(s) x^{s+ρ}/Γ(s+ρ+1) ds` by the trapezoid
/// rule with step `h`. This equals the Riesz sum over `1 <= m <= x` up to
/// truncation.
pub fn perron_oracle(l: &CompletedL, x: f64, rho: u32, sigma: f64, t_max: f64, h: f64) -> Result<PerronValue> {
    let bound = l.series().beta() + 1.0;
    if !(sigma > bound) {
        return Err(Error::Abscissa { sigma, bound });
    }
    if !(x > 0.0) || !(t_max > 0.0) || !(h > 0.0) {
        return Err(Error::invalid("perron_oracle needs x, T, h > 0"));
    }
    let coeffs = l.series().coeffs();
    let n = (t_max / h).ceil() as i64;
    let h = t_max / n as f64;
    let lx = x.ln();
    // state_m = a_m m^{-s}, advanced along the line by a fixed rotation
    let mut state: Vec<Complex64> = Vec::with_capacity(coeffs.len());
    let mut rot: Vec<Complex64> = Vec::with_capacity(coeffs.len());
    let mut abs_phi = 0.0;
    for (i, a) in coeffs.iter().enumerate() {
        let lm = ((i + 1) as f64).ln();
        let mag = (-sigma * lm).exp();
        abs_phi += a.norm() * mag;
        state.push(a * mag * Complex64::from_polar(1.0, t_max * lm));
        rot.push(Complex64::from_polar(1.0, -h * lm));
    }
    let mut acc = ComplexSum::new();
    for j in -n..=n {
        let t = j as f64 * h;
        let s = Complex64::new(sigma, t);
        let phi: Complex64 = state.iter().copied().collect::<ComplexSum>().value();
        let mut poch = s;
        for q in 1..=rho {
            poch *= s + q as f64;
        }
        let w = if j.abs() == n { 0.5 } else { 1.0 };
        acc.add(phi * ((s + rho as f64) * lx).exp() / poch * w);
        for (st, r) in state.iter_mut().zip(rot.iter()) {
            *st *= r;
        }
    }
    let value = acc.value() * (h / (2.0 * PI));
    let truncation = if rho == 0 {
        f64::INFINITY
    } else {
        abs_phi * x.powf(sigma + rho as f64) * t_max.powf(-(rho as f64)) / (PI * rho as f64)
    };
    Ok(PerronValue { value, truncation, nodes: (2 * n + 1) as usize })
}
