use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{check_rho, check_y, IdentityReport, IdentityRequest, Which};
use crate::lseries::CompletedL;
use crate::numeric::{CDd, ComplexSum, Dd};
use crate::specialfn::{gamma, gamma_real, tricomi_u, EvalBudget};
use crate::{i_pow, Error, Result, Warning};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Coefficients `b_j` (index `j`) of `(-(1/y) d/dy)^ρ (e^{-yu}/y) = e^{-yu} Σ b_j y^{-j}`.
fn operator_coeffs<T>(u: T, rho: u32) -> Vec<T>
where
    T: Copy + core::ops::Add<Output = T> + core::ops::Mul<Output = T> + From<f64>,
{
    let len = 2 * rho as usize + 2;
    let zero = T::from(0.0);
    let mut b = vec![zero; len];
    b[1] = T::from(1.0);
    for step in 0..rho as usize {
        let mut nb = vec![zero; len];
        // after `step` applications only indices step+1 ..= 2step+1 are live
        for j in (step + 1)..=(2 * step + 1) {
            if j + 1 < len {
                nb[j + 1] = nb[j + 1] + u * b[j];
            }
            if j + 2 < len {
                nb[j + 2] = nb[j + 2] + T::from(j as f64) * b[j];
            }
        }
        b = nb;
    }
    b
}

fn eval_poly(b: &[f64], y: f64) -> f64 {
    b.iter().enumerate().skip(1).map(|(j, v)| v * y.powi(-(j as i32))).sum()
}

fn eval_poly_dd(b: &[Dd], inv_y: Dd) -> Dd {
    let mut acc = Dd::ZERO;
    for v in b.iter().skip(1).rev() {
        acc = (acc + *v) * inv_y;
    }
    acc
}

/// `(-(1/y) d/dy)^ρ [(1/y) Σ_{m>=1} a_m e^{-y√m}]`, evaluated term by term
/// from the exact coefficient recurrence in double-double arithmetic (the
/// sum cancels heavily for small `y`). Returns the value and the number of
/// terms used.
pub fn second_lhs(l: &CompletedL, y: f64, rho: u32, budget: &EvalBudget) -> Result<(Complex64, usize)> {
    if !(y > 0.0) {
        return Err(Error::Domain { what: "y", detail: alloc::format!("y = {y} must be positive") });
    }
    let s = l.series();
    let g = (s.beta() - 0.25).max(0.0);
    let kk = s.growth_constant();
    let n = 2.0 * g + 1.0 + rho as f64;
    let yd = Dd::new(y);
    let inv_y = yd.recip();
    let mut acc = CDd::ZERO;
    for m in 1..=s.m_max() {
        let a = s.a(m);
        let u = (m as f64).sqrt();
        if a != c(0.0) {
            let ud = Dd::new(m as f64).sqrt();
            let b = operator_coeffs(ud, rho);
            let v = (-(yd * ud)).exp() * eval_poly_dd(&b, inv_y);
            acc = acc + s.a_dd(m).scale(v);
        }
        if kk == 0.0 {
            continue;
        }
        // Σ_{m'>m} |a_m'| e^{-y√m'} P(√m') <= 2K P(u)u^{-ρ} ∫_u^∞ t^n e^{-yt} dt
        if y * u > 2.0 * n {
            let p = eval_poly(&operator_coeffs(u, rho), y) * u.powi(-(rho as i32));
            let tail = 2.0 * kk * p * u.powf(n) * (-y * u).exp() / (y - n / u);
            if tail <= budget.rel_tol.max(1e-16) * acc.norm_f64() + budget.abs_floor {
                return Ok((acc.to_c64(), m));
            }
        }
    }
    if kk == 0.0 {
        return Ok((acc.to_c64(), s.m_max()));
    }
    Err(Error::TailNotCertifiable { y, needed: (n / y).powi(2).max(s.m_max() as f64 + 1.0) })
}

/// The right-hand groups of the second identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondTerms {
    /// `-P a₀ Γ(ρ+1/2)` plus the `m = 0` resolvent term.
    pub a0term: Complex64,
    pub resolvent: Complex64,
    pub psi1: Complex64,
    pub psi2: Complex64,
    pub gammapair: Complex64,
    /// Finite residue sums of the Mellin–Barnes shifts against the `E^H`,
    /// `E^B` residues; these cancel, so this is a consistency diagnostic.
    pub extra: Complex64,
    pub resolvent_terms: usize,
    pub resolvent_tail: f64,
}

impl SecondTerms {
    pub fn named(&self) -> Vec<(&'static str, Complex64)> {
        vec![
            ("a0term", self.a0term),
            ("resolvent", self.resolvent),
            ("psi1", self.psi1),
            ("psi2", self.psi2),
            ("gammapair", self.gammapair),
            ("extra", self.extra),
        ]
    }
}

fn fact(m: i64) -> f64 {
    (1..=m).fold(1.0, |a, j| a * j as f64)
}

fn poch_ratio(r: i64, m: i64) -> f64 {
    // Γ(r+m)/Γ(r)
    (0..m).fold(1.0, |a, j| a * (r + j) as f64)
}

pub fn second_rhs_terms(l: &CompletedL, y: f64, rho: u32, budget: &EvalBudget) -> Result<SecondTerms> {
    check_rho(l, Which::Second, rho)?;
    check_y(l, y)?;
    let lam = l.group().lambda();
    let k = l.group().k() as i64;
    let two_k = 2 * k;
    let rf = rho as f64;
    let cl = 2.0 * PI / lam;
    let e2k = i_pow(two_k);
    let p = 2f64.powi(rho as i32) / (PI.sqrt() * y.powf(2.0 * rf + 1.0));
    let w = 8.0 * PI / (lam * y * y);
    let g_top = gamma_real(two_k as f64 + rf + 0.5)?;
    let a0 = l.series().a0();

    let a0term = -p * a0 * gamma_real(rf + 0.5)? + a0 * e2k * p * w.powi(two_k as i32) * g_top;

    // resolvent series
    let s = l.series();
    let ex = two_k as f64 + rf + 0.5;
    let pre = e2k / PI.sqrt() * 2f64.powf(2.0 * two_k as f64 + rf) * g_top * cl.powi(two_k as i32);
    let g = s.beta() - 0.25;
    let kk = s.growth_constant();
    let q = 4.0 * cl * cl;
    let mut acc = ComplexSum::new();
    let mut used = s.m_max();
    let mut tail = 0.0;
    for m in 1..=s.m_max() {
        let a = s.a(m);
        if a != c(0.0) {
            acc.add(a * (y * y + q * m as f64).powf(-ex));
        }
        let mf = m as f64;
        tail = kk * q.powf(-ex) * mf.powf(g - ex + 1.0) / (ex - g - 1.0);
        if tail <= budget.rel_tol.max(1e-16) * acc.value().norm() || kk == 0.0 {
            used = m;
            break;
        }
    }
    let resolvent = pre * acc.value();

    let df = l.delta_floor();
    let mut psi1 = ComplexSum::new();
    let mut psi2 = ComplexSum::new();
    let mut extra = ComplexSum::new();
    for b in &l.rpf().pole_blocks {
        let alpha = b.alpha;
        let z1 = Complex64::new(0.0, -lam * y * y / (8.0 * PI * alpha));
        let z2 = Complex64::new(0.0, alpha * lam * y * y / (8.0 * PI));
        let xx = Complex64::new(0.0, w * alpha);
        let yy = Complex64::new(0.0, -w / alpha);
        let r_res = l.block_r_max(b) as i64;
        for (i, coef) in b.coeffs.iter().enumerate() {
            let r = (i + 1) as i64;
            let rc = c(r as f64);
            let sign = (-1.0 / alpha).powi(r as i32);
            let u1 = tricomi_u(rc, c(0.5 - rf), z1, budget)?;
            psi1.add(-p * coef * sign * gamma_real(r as f64 + rf + 0.5)? * u1);
            let u2 = tricomi_u(rc, c(r as f64 - two_k as f64 - rf + 0.5), z2, budget)?;
            psi2.add(p * coef * sign * alpha.powi(two_k as i32) * g_top * z2.powi((r - two_k) as i32) * u2);

            // finite Mellin–Barnes residue sums
            let mut fs1 = ComplexSum::new();
            for m in 0..=(df - two_k) {
                let v = xx.powi(-(m as i32)) * (if m % 2 == 0 { 1.0 } else { -1.0 }) / fact(m) * poch_ratio(r, m)
                    * gamma(c(rf - m as f64 + 0.5))?;
                fs1.add(v);
            }
            let mut fs2 = ComplexSum::new();
            for m in 0..=(df - r) {
                let v = yy.powi((two_k - m - r) as i32) * (if m % 2 == 0 { 1.0 } else { -1.0 }) / fact(m)
                    * poch_ratio(r, m)
                    * gamma(c((two_k - m - r) as f64 + rf + 0.5))?;
                fs2.add(v);
            }
            extra.add(p * coef * sign * (fs1.value() - alpha.powi(two_k as i32) * fs2.value()));

            if r > r_res {
                continue;
            }
            // residues of E^H at -m and of E^B at 2k-r-m, weighted by the
            // Mellin kernel P W^s Γ(s+ρ+1/2)
            let sr = if r % 2 == 0 { 1.0 } else { -1.0 };
            for m in 0..=(df - two_k) {
                let res = -coef * poch_ratio(r, m) * sr / fact(m) * i_pow(m) * alpha.powi(-(r + m) as i32);
                extra.add(res * p * w.powi(-(m as i32)) * gamma(c(rf - m as f64 + 0.5))?);
            }
            for m in 0..=(df - r) {
                let srm = if (r + m) % 2 == 0 { 1.0 } else { -1.0 };
                let res = coef * poch_ratio(r, m) * srm / fact(m) * i_pow(m + r - two_k) * alpha.powi(m as i32);
                let sp = two_k - r - m;
                extra.add(res * p * w.powi(sp as i32) * gamma(c(sp as f64 + rf + 0.5))?);
            }
        }
    }

    let mut gp = ComplexSum::new();
    for t in &l.rpf().zero_terms {
        let m = t.r as i64;
        let iw = Complex64::new(0.0, w);
        let a = iw.powi((two_k - m) as i32) * gamma(c((two_k - m) as f64 + rf + 0.5))?;
        let bb = (-iw).powi(m as i32) * gamma_real(m as f64 + rf + 0.5)?;
        gp.add(p * t.coeff * (a - bb));
    }

    Ok(SecondTerms {
        a0term,
        resolvent,
        psi1: psi1.value(),
        psi2: psi2.value(),
        gammapair: gp.value(),
        extra: extra.value(),
        resolvent_terms: used,
        resolvent_tail: tail,
    })
}

pub(super) fn point(l: &CompletedL, y: f64, req: &IdentityRequest) -> Result<IdentityReport> {
    check_y(l, y)?;
    let (lhs, n_lhs) = second_lhs(l, y, req.rho, &req.truncation)?;
    let t = second_rhs_terms(l, y, req.rho, &req.truncation)?;
    let mut rep = IdentityReport::assemble(
        Which::Second,
        req.rho,
        y,
        lhs,
        t.named(),
        vec![("lhs", n_lhs), ("resolvent", t.resolvent_terms)],
    );
    if t.resolvent_tail > 1e-12 * t.resolvent.norm() {
        rep.warnings.push(Warning::new(
            "resolvent-truncation",
            alloc::format!(
                "resolvent series stopped at m = {} with tail bound {:.3e}",
                t.resolvent_terms, t.resolvent_tail
            ),
        ));
    }
    Ok(rep)
}
