//! Special functions on complex arguments.
//!
//! Series are accumulated in double-double arithmetic so that moderate
//! cancellation (oscillatory Bessel and confluent series) does not eat into
//! the f64 result. Each routine that iterates takes an [`EvalBudget`].

mod bessel;
mod confluent;
mod gamma;
mod gauss;

pub use bessel::bessel_j;
pub use confluent::{hyp1f1, tricomi_u};
pub use gamma::{beta_fn, gamma, gamma_real, ln_gamma, pochhammer, rgamma};
pub use gauss::hyp2f1;

/// Limits for iterative evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalBudget {
    /// Hard cap on series terms or recurrence steps.
    pub max_terms: usize,
    /// Target relative accuracy.
    pub rel_tol: f64,
    /// Absolute floor below which a value counts as zero.
    pub abs_floor: f64,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget { max_terms: 100_000, rel_tol: 1e-16, abs_floor: 1e-300 }
    }
}

impl EvalBudget {
    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn with_rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }
}

/// Distance from `x` to the nearest integer, and that integer.
pub(crate) fn nearest_int(x: f64) -> (f64, f64) {
    #[allow(unused_imports)]
    use num_traits::Float;
    let n = x.round();
    ((x - n).abs(), n)
}

/// True when `z` is (numerically) a non-positive integer.
pub(crate) fn is_nonpositive_int(z: num_complex::Complex64) -> bool {
    #[allow(unused_imports)]
    use num_traits::Float;
    if z.im != 0.0 {
        return false;
    }
    let (d, n) = nearest_int(z.re);
    n <= 0.0 && d <= 4.0 * f64::EPSILON * n.abs().max(1.0)
}
