use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{is_nonpositive_int, EvalBudget};
use crate::numeric::CDd;
use crate::{Error, Result};

/// Gauss hypergeometric series `₂F₁(a, b; c; z)` for `|z| < 1`.
pub fn hyp2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    budget: &EvalBudget,
) -> Result<Complex64> {
    if is_nonpositive_int(c) {
        return Err(Error::ParameterPole { what: "hyp2f1", detail: alloc::format!("c = {c}") });
    }
    if z.norm() >= 1.0 {
        return Err(Error::Domain { what: "hyp2f1", detail: alloc::format!("|z| = {}", z.norm()) });
    }
    let (a_d, b_d, c_d, z_d) = (CDd::from(a), CDd::from(b), CDd::from(c), CDd::from(z));
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let tol = budget.rel_tol.min(1e-17);
    let mut small = 0;
    for n in 0..budget.max_terms {
        let nf = CDd::from(n as f64);
        let num = (a_d + nf) * (b_d + nf);
        let den = (c_d + nf) * CDd::from((n + 1) as f64);
        term = term * num / den * z_d;
        sum = sum + term;
        let ratio_bound = ((a + n as f64).norm() * (b + n as f64).norm())
            / ((c + n as f64).norm() * (n + 1) as f64)
            * z.norm();
        if term.norm_f64() <= tol * sum.norm_f64().max(budget.abs_floor) && ratio_bound < 1.0 {
            small += 1;
            // the tail is bounded by a geometric series in the ratio
            if small >= 2 && term.norm_f64() / (1.0 - ratio_bound) <= tol * sum.norm_f64() {
                return Ok(sum.to_c64());
            }
        } else {
            small = 0;
        }
        if term.norm_f64() == 0.0 {
            return Ok(sum.to_c64());
        }
    }
    Err(Error::BudgetExhausted { what: "hyp2f1", terms: budget.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elementary_reductions() {
        let z = c(0.3, 0.4);
        let b = EvalBudget::default();
        // 2F1(1, 1; 2; z) = -log(1 - z)/z
        let got = hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z, &b).unwrap();
        let want = -(c(1.0, 0.0) - z).ln() / z;
        assert!((got - want).norm() < 1e-15);
        // 2F1(1, r; 1; z) = (1 - z)^{-r}
        let got = hyp2f1(c(1.0, 0.0), c(3.0, 0.0), c(1.0, 0.0), z, &b).unwrap();
        let want = (c(1.0, 0.0) - z).powi(-3);
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn slow_convergence_near_unit_circle() {
        let z = c(0.0, 0.95);
        let got = hyp2f1(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), z, &EvalBudget::default()).unwrap();
        let want = (c(1.0, 0.0) - z).powi(-2);
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn domain_and_pole_errors() {
        let b = EvalBudget::default();
        assert!(hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(0.1, 0.0), &b).is_err());
        assert!(hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), &b).is_err());
    }
}
