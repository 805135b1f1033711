use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use super::{gamma_real, EvalBudget};
use crate::numeric::Dd;
use crate::{Error, Result};

const SERIES_MAX_T: f64 = 25.0;

/// Bessel function of the first kind `J_ν(t)` for real `ν >= 0`, `t >= 0`.
///
/// Small arguments use the ascending series in double-double arithmetic,
/// large arguments Hankel's expansion; the band in between is covered by
/// Miller's backward recurrence normalised with the Neumann sum.
pub fn bessel_j(nu: f64, t: f64, budget: &EvalBudget) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain { what: "bessel_j", detail: alloc::format!("order {nu}") });
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain { what: "bessel_j", detail: alloc::format!("argument {t}") });
    }
    if t == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if t <= SERIES_MAX_T.max(4.0 * (nu + 1.0).sqrt()) {
        return series(nu, t, budget);
    }
    if t >= 0.5 * nu * nu {
        if let Some(v) = hankel(nu, t, budget) {
            return Ok(v);
        }
    }
    miller(nu, t, budget)
}

pub(crate) fn series(nu: f64, t: f64, budget: &EvalBudget) -> Result<f64> {
    let half = t * 0.5;
    let q = Dd::new(half) * Dd::new(half);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 0usize;
    loop {
        k += 1;
        if k > budget.max_terms {
            return Err(Error::BudgetExhausted { what: "bessel_j series", terms: k });
        }
        let den = Dd::new(k as f64) * Dd::new(nu).add_f64(k as f64);
        term = -(term * q / den);
        sum = sum + term;
        if (k as f64) * (k as f64 + nu) > q.hi
            && term.hi.abs() <= 1e-33 * sum.hi.abs().max(budget.abs_floor)
        {
            break;
        }
    }
    let pre = half.powf(nu) / gamma_real(nu + 1.0)?;
    Ok(pre * sum.to_f64())
}

pub(crate) fn hankel(nu: f64, t: f64, budget: &EvalBudget) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut k = 0usize;
    let mut prev = f64::INFINITY;
    loop {
        let odd = (2 * k + 1) as f64;
        term *= (mu - odd * odd) / ((k + 1) as f64 * 8.0 * t);
        k += 1;
        let mag = term.abs();
        if mag == 0.0 {
            break;
        }
        if mag > prev && odd * odd > mu {
            return None;
        }
        prev = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if mag <= 0.25 * f64::EPSILON * (p.abs() + q.abs()) {
            break;
        }
        if k > budget.max_terms.min(400) {
            return None;
        }
    }
    let phi = (0.5 * nu + 0.25) * PI;
    let (st, ct) = t.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let cos_chi = ct * cp + st * sp;
    let sin_chi = st * cp - ct * sp;
    Some((2.0 / (PI * t)).sqrt() * (p * cos_chi - q * sin_chi))
}

pub(crate) fn miller(nu: f64, t: f64, budget: &EvalBudget) -> Result<f64> {
    let start = (t + 20.0 + 10.0 * (t + nu + 10.0).sqrt()).ceil() as usize;
    let n_top = start + (start % 2);
    if n_top > budget.max_terms {
        return Err(Error::BudgetExhausted { what: "bessel_j recurrence", terms: n_top });
    }
    // Neumann weights w_k with sum_k w_k J_{ν+2k}(t) = (t/2)^ν / Γ(ν+1).
    let mut w = Vec::with_capacity(n_top / 2 + 1);
    w.push(1.0);
    let mut pk = 1.0;
    for k in 1..=n_top / 2 {
        if k > 1 {
            pk *= (nu + (k - 1) as f64) / k as f64;
        }
        w.push((nu + 2.0 * k as f64) * pk);
    }
    let mut j_up = 0.0f64;
    let mut j_cur = 1e-280f64;
    let mut norm = 0.0f64;
    let mut comp = 0.0f64;
    let mut n = n_top;
    loop {
        if n % 2 == 0 {
            let x = w[n / 2] * j_cur;
            let s = norm + x;
            if norm.abs() >= x.abs() {
                comp += (norm - s) + x;
            } else {
                comp += (x - s) + norm;
            }
            norm = s;
        }
        if n == 0 {
            break;
        }
        let order = nu + n as f64;
        let j_down = (2.0 * order / t) * j_cur - j_up;
        j_up = j_cur;
        j_cur = j_down;
        n -= 1;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_up *= 1e-250;
            norm *= 1e-250;
            comp *= 1e-250;
        }
    }
    let lhs = (t * 0.5).powf(nu) / gamma_real(nu + 1.0)?;
    Ok(j_cur * lhs / (norm + comp))
}
