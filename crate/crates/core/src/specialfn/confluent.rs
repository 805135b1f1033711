use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{gamma, is_nonpositive_int, nearest_int, rgamma, EvalBudget};
use crate::numeric::{CDd, ComplexSum};
use crate::quad::{gauss_kronrod_to_infinity, QuadOptions};
use crate::{Error, Result};

const SERIES_RADIUS: f64 = 40.0;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Kummer's function `₁F₁(a; b; z)`.
///
/// For `Re z < -1` Kummer's transformation `e^z ₁F₁(b-a; b; -z)` is applied
/// first. The power series (double-double) covers `|z| <= 40`; beyond that the
/// two-sided asymptotic expansion is used.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64, budget: &EvalBudget) -> Result<Complex64> {
    if is_nonpositive_int(b) {
        return Err(Error::ParameterPole { what: "hyp1f1", detail: alloc::format!("b = {b}") });
    }
    if z.re < -1.0 {
        return Ok(z.exp() * hyp1f1_right(b - a, b, -z, budget)?);
    }
    hyp1f1_right(a, b, z, budget)
}

fn hyp1f1_right(a: Complex64, b: Complex64, z: Complex64, budget: &EvalBudget) -> Result<Complex64> {
    if is_nonpositive_int(a) || z.norm() <= SERIES_RADIUS {
        return hyp1f1_series(a, b, z, budget);
    }
    if let Some(v) = hyp1f1_asymptotic(a, b, z, budget)? {
        return Ok(v);
    }
    if z.norm() <= 2.0 * SERIES_RADIUS {
        return hyp1f1_series(a, b, z, budget);
    }
    Err(Error::BudgetExhausted { what: "hyp1f1 asymptotic", terms: budget.max_terms })
}

/// Plain power series for `₁F₁`, summed in double-double.
pub(crate) fn hyp1f1_series(
    a: Complex64,
    b: Complex64,
    z: Complex64,
    budget: &EvalBudget,
) -> Result<Complex64> {
    if is_nonpositive_int(b) {
        return Err(Error::ParameterPole { what: "hyp1f1", detail: alloc::format!("b = {b}") });
    }
    let (a_d, b_d, z_d) = (CDd::from(a), CDd::from(b), CDd::from(z));
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let zn = z.norm();
    for n in 0..budget.max_terms {
        let nf = CDd::from(n as f64);
        term = term * (a_d + nf) * z_d / ((b_d + nf) * CDd::from((n + 1) as f64));
        sum = sum + term;
        let t = term.norm_f64();
        if t == 0.0 {
            return Ok(sum.to_c64());
        }
        let ratio = (a + n as f64 + 1.0).norm() * zn / ((b + n as f64 + 1.0).norm() * (n + 2) as f64);
        if ratio < 0.5 && t <= 1e-33 * sum.norm_f64().max(budget.abs_floor) {
            return Ok(sum.to_c64());
        }
    }
    Err(Error::BudgetExhausted { what: "hyp1f1 series", terms: budget.max_terms })
}

/// Sum an asymptotic series `sum_s (p)_s (q)_s / s! w^s` up to its smallest
/// term. Returns the sum and the size of the first omitted term.
fn asymptotic_sum(p: Complex64, q: Complex64, w: Complex64, max_terms: usize) -> (Complex64, f64) {
    let mut acc = ComplexSum::new();
    let mut term = one();
    acc.add(term);
    let mut last = 1.0;
    for s in 0..max_terms {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) / (sf + 1.0) * w;
        let m = next.norm();
        if m == 0.0 {
            return (acc.value(), 0.0);
        }
        if m > last {
            return (acc.value(), last);
        }
        if m <= 0.25 * f64::EPSILON * acc.value().norm() {
            acc.add(next);
            return (acc.value(), m * 1e-2);
        }
        acc.add(next);
        term = next;
        last = m;
    }
    (acc.value(), last)
}

fn hyp1f1_asymptotic(
    a: Complex64,
    b: Complex64,
    z: Complex64,
    budget: &EvalBudget,
) -> Result<Option<Complex64>> {
    let cap = budget.max_terms.min(500);
    let (s1, e1) = asymptotic_sum(b - a, one() - a, z.inv(), cap);
    let (s2, e2) = asymptotic_sum(a, a - b + 1.0, -z.inv(), cap);
    let gb = gamma(b)?;
    let dominant = z.exp() * z.powc(a - b) * rgamma(a) * s1;
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let phase = (Complex64::new(0.0, sign * PI) * a).exp();
    let recessive = phase * z.powc(-a) * rgamma(b - a) * s2;
    let value = gb * (dominant + recessive);
    let err = gb.norm()
        * ((z.exp() * z.powc(a - b) * rgamma(a)).norm() * e1
            + (phase * z.powc(-a) * rgamma(b - a)).norm() * e2);
    if err <= 1e-15 * value.norm().max(budget.abs_floor) {
        Ok(Some(value))
    } else {
        Ok(None)
    }
}

/// Tricomi's confluent hypergeometric function `Ψ(a, b; z)` (also written
/// `U(a, b, z)`) for non-integer `b`, principal branch `|arg z| < π`.
pub fn tricomi_u(a: Complex64, b: Complex64, z: Complex64, budget: &EvalBudget) -> Result<Complex64> {
    if b.im == 0.0 && nearest_int(b.re).0 < 1e-12 {
        return Err(Error::IntegerB { what: "tricomi_u", b: b.re });
    }
    if z.re <= 0.0 && z.im == 0.0 {
        return Err(Error::Domain { what: "tricomi_u", detail: alloc::format!("z = {z} on the cut") });
    }
    if z.norm() > 30.0 {
        let (s, e) = asymptotic_sum(a, a - b + 1.0, -z.inv(), budget.max_terms.min(500));
        if e <= 1e-16 * s.norm() {
            return Ok(z.powc(-a) * s);
        }
    }
    if a.re > 0.0 && z.norm() >= 1.0 {
        return tricomi_integral(a, b, z);
    }
    let m1 = hyp1f1(a, b, z, budget)?;
    let m2 = hyp1f1(a - b + 1.0, Complex64::new(2.0, 0.0) - b, z, budget)?;
    let t1 = gamma(one() - b)? * rgamma(a - b + 1.0) * m1;
    let t2 = gamma(b - 1.0)? * rgamma(a) * z.powc(one() - b) * m2;
    Ok(t1 + t2)
}

/// `Ψ(a, b; z) = z^{-a}/Γ(a) ∫_0^∞ e^{-v} v^{a-1} (1 + v/z)^{b-a-1} dv`, valid
/// for `Re a > 0` off the negative real axis. Used where the connection
/// formula cancels badly.
fn tricomi_integral(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let c = b - a - 1.0;
    let zi = z.inv();
    let am1 = a - 1.0;
    let f = |v: f64| -> Result<Complex64> {
        if v == 0.0 {
            return Ok(if am1.norm() == 0.0 { one() } else { Complex64::new(0.0, 0.0) });
        }
        let w = one() + zi * v;
        Ok((am1 * v.ln() - v + c * w.ln()).exp())
    };
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-14, max_intervals: 4000 };
    let r = gauss_kronrod_to_infinity(f, 0.0, 4.0, &opts)?;
    Ok(z.powc(-a) * rgamma(a) * r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn b() -> EvalBudget {
        EvalBudget::default()
    }

    #[test]
    fn exponential_special_case() {
        for &z in &[c(0.5, 0.0), c(-7.0, 2.0), c(3.0, -30.0), c(55.0, 10.0), c(-80.0, 0.0)] {
            let got = hyp1f1(c(2.5, 0.3), c(2.5, 0.3), z, &b()).unwrap();
            assert!((got - z.exp()).norm() <= 1e-13 * z.exp().norm(), "z = {z}");
        }
    }

    #[test]
    fn kummer_transformation_is_consistent() {
        let (a, bb) = (c(1.3, 0.2), c(3.7, -0.4));
        for &z in &[c(-2.0, 1.0), c(-10.0, -4.0), c(-18.0, 3.0)] {
            let direct = hyp1f1_series(a, bb, z, &b()).unwrap();
            let kummer = z.exp() * hyp1f1_series(bb - a, bb, -z, &b()).unwrap();
            assert!((direct - kummer).norm() <= 1e-12 * direct.norm(), "z = {z}");
        }
    }

    #[test]
    fn asymptotic_and_series_agree() {
        let (a, bb) = (c(2.0, 0.0), c(7.5, 0.0));
        for &z in &[c(0.0, 42.0), c(38.0, -15.0), c(0.0, -44.0)] {
            let s = hyp1f1_series(a, bb, z, &b()).unwrap();
            let asy = hyp1f1_asymptotic(a, bb, z, &b()).unwrap().unwrap();
            assert!((s - asy).norm() <= 1e-12 * s.norm(), "z = {z}: {s} {asy}");
        }
    }

    #[test]
    fn polynomial_case() {
        // 1F1(-2; b; z) = 1 - 2z/b + z^2/(b(b+1))
        let (bb, z) = (c(1.5, 0.0), c(0.7, -1.1));
        let want = one() - 2.0 * z / bb + z * z / (bb * (bb + 1.0));
        let got = hyp1f1(c(-2.0, 0.0), bb, z, &b()).unwrap();
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn tricomi_elementary() {
        // U(a, a+1, z) = z^{-a}
        for &z in &[c(0.3, 0.0), c(2.0, 5.0), c(0.0, 12.0), c(40.0, -3.0)] {
            let a = c(1.5, 0.0);
            let got = tricomi_u(a, a + 1.0, z, &b()).unwrap();
            let want = z.powc(-a);
            assert!((got - want).norm() <= 1e-12 * want.norm(), "z = {z}");
        }
    }

    #[test]
    fn tricomi_rejects_integer_b() {
        assert!(matches!(tricomi_u(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), &b()), Err(Error::IntegerB { .. })));
    }
}
