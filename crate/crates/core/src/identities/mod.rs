//! The two arithmetical identities equivalent to the functional equation.
//!
//! The first identity expresses the Riesz sum
//!
//! ```text
//! (1/Γ(ρ+1)) Σ'_{0<=m<=x} a_m (x-m)^ρ
//! ```
//!
//! as a Bessel series plus confluent hypergeometric corrections from `q`.
//! The second is its Laplace transform in `√x`: a resolvent series plus
//! Tricomi `Ψ` terms. Both sides are computed independently and compared
//! point by point.

mod first;
mod kernels;
mod second;

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::lseries::CompletedL;
use crate::specialfn::EvalBudget;
use crate::{Error, Result, Warning};

pub use first::{first_rhs_terms, perron_oracle, riesz_a0_term, riesz_lhs, FirstTerms, PerronValue};
pub use kernels::{verify_proof_kernels, KernelParams, KernelReport, KernelSelector};
pub use second::{second_lhs, second_rhs_terms, SecondTerms};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

/// How the Bessel series is cut off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BesselCutoff {
    /// Stop when the envelope bound of the next term drops below tolerance.
    Sharp,
    /// Use every available coefficient, weighted by a `C^∞` step that falls
    /// from 1 to 0 over the upper half of the range.
    #[default]
    Smooth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityOptions {
    pub cutoff: BesselCutoff,
    /// Fraction of the range where the smooth step starts.
    pub taper_start: f64,
    /// Hard cap on Bessel terms.
    pub max_bessel_terms: usize,
    /// Replace `1/i` by `i` in the `Λ₄` argument.
    pub flip_lambda4: bool,
}

impl Default for IdentityOptions {
    fn default() -> Self {
        IdentityOptions { cutoff: BesselCutoff::Smooth, taper_start: 0.5, max_bessel_terms: 100_000, flip_lambda4: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRequest {
    pub rho: u32,
    /// `x` values for the first identity, `y` values for the second.
    pub grid: Vec<f64>,
    pub truncation: EvalBudget,
    pub which: Which,
    pub options: IdentityOptions,
}

impl IdentityRequest {
    pub fn new(which: Which, rho: u32, grid: Vec<f64>) -> Self {
        IdentityRequest {
            rho,
            grid,
            truncation: EvalBudget::default().with_rel_tol(1e-15),
            which,
            options: IdentityOptions::default(),
        }
    }

    /// Checks the `ρ` thresholds and, for the second identity, the lower
    /// bound on `y`.
    pub fn validate(&self, l: &CompletedL) -> Result<()> {
        check_rho(l, self.which, self.rho)?;
        for &g in &self.grid {
            match self.which {
                Which::First => check_x(l, g)?,
                Which::Second => check_y(l, g)?,
            }
        }
        Ok(())
    }
}

pub(crate) fn check_rho(l: &CompletedL, which: Which, rho: u32) -> Result<()> {
    let beta = l.series().beta();
    let two_k = l.group().weight() as f64;
    let rho = rho as f64;
    match which {
        Which::First => {
            let need = 2.0 * beta - two_k - 0.5;
            if rho < need {
                return Err(Error::precondition(alloc::format!(
                    "rho >= 2*beta - 2k - 1/2 violated: {rho} < {need}"
                )));
            }
        }
        Which::Second => {
            if rho + two_k < beta + 0.5 {
                return Err(Error::precondition(alloc::format!(
                    "rho + 2k >= beta + 1/2 violated: {} < {}",
                    rho + two_k,
                    beta + 0.5
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_x(l: &CompletedL, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "x", detail: alloc::format!("x = {x} must be positive") });
    }
    let max = l.series().m_max() as f64;
    if x > max {
        return Err(Error::OutOfRange { what: "x", value: x, max });
    }
    Ok(())
}

/// `max_j {2π|α_j|/λ, 2π/(|α_j|λ)}`, zero without pole blocks.
pub fn y_lower_bound(l: &CompletedL) -> f64 {
    let lam = l.group().lambda();
    l.rpf()
        .pole_blocks
        .iter()
        .map(|b| {
            let a = b.alpha.abs();
            (2.0 * core::f64::consts::PI * a / lam).max(2.0 * core::f64::consts::PI / (a * lam))
        })
        .fold(0.0, f64::max)
}

pub(crate) fn check_y(l: &CompletedL, y: f64) -> Result<()> {
    let lb = y_lower_bound(l);
    if !(y > lb) || !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain {
            what: "y",
            detail: alloc::format!("y = {y} must exceed max(2pi|alpha|/lambda, 2pi/(|alpha|lambda), 0) = {lb}"),
        });
    }
    Ok(())
}

/// One grid point of an identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub which: Which,
    pub rho: u32,
    /// `x` or `y`.
    pub at: f64,
    pub lhs: Complex64,
    pub rhs_terms: Vec<(&'static str, Complex64)>,
    pub rhs_total: Complex64,
    pub abs_err: f64,
    /// `abs_err / |lhs|`, or `abs_err` when the left side vanishes.
    pub rel_err: f64,
    pub terms_used: Vec<(&'static str, usize)>,
    pub notes: Vec<String>,
    pub warnings: Vec<Warning>,
    /// Set when this point could not be evaluated; the numeric fields are
    /// then NaN.
    pub error: Option<Error>,
}

impl IdentityReport {
    fn assemble(
        which: Which,
        rho: u32,
        at: f64,
        lhs: Complex64,
        rhs_terms: Vec<(&'static str, Complex64)>,
        terms_used: Vec<(&'static str, usize)>,
    ) -> Self {
        let rhs_total = resum(&rhs_terms);
        let abs_err = (rhs_total - lhs).norm();
        let rel_err = if lhs.norm() > 0.0 { abs_err / lhs.norm() } else { abs_err };
        IdentityReport {
            which,
            rho,
            at,
            lhs,
            rhs_terms,
            rhs_total,
            abs_err,
            rel_err,
            terms_used,
            notes: Vec::new(),
            warnings: Vec::new(),
            error: None,
        }
    }

    fn failed(which: Which, rho: u32, at: f64, e: Error) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        IdentityReport {
            which,
            rho,
            at,
            lhs: nan,
            rhs_terms: Vec::new(),
            rhs_total: nan,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            terms_used: Vec::new(),
            notes: Vec::new(),
            warnings: Vec::new(),
            error: Some(e),
        }
    }

    pub fn term(&self, name: &str) -> Option<Complex64> {
        self.rhs_terms.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

/// Sum of named terms, in order.
pub fn resum(terms: &[(&'static str, Complex64)]) -> Complex64 {
    terms.iter().map(|(_, v)| *v).collect::<crate::numeric::ComplexSum>().value()
}

/// Header notes attached to every report of the given identity.
pub fn report_notes(which: Which) -> Vec<String> {
    let mut v = Vec::new();
    match which {
        Which::First => {
            v.push(String::from(
                "lhs includes the m = 0 term a0 x^rho/Gamma(rho+1); the right side then needs no \
                 separate -a0 x^rho/Gamma(rho+1) term (that term is what the Perron integral adds \
                 when a0 is left out of the sum)",
            ));
            v.push(String::from("Lambda5 carries the zero-term coefficients C_m"));
        }
        Which::Second => {
            v.push(String::from("resolvent series starts at m = 1; the m = 0 term is booked in a0term"));
            v.push(String::from("resolvent prefactor uses 2^(4k+rho)"));
            v.push(String::from(
                "gammapair uses +2^rho/(sqrt(pi) y^(2rho+1)) and Gamma(2k-m+rho+1/2), with C_m",
            ));
        }
    }
    v
}

/// Evaluates one identity over the request grid. A failing point is
/// reported with its error; the rest of the grid is unaffected.
pub fn identity_report(l: &CompletedL, req: &IdentityRequest) -> Result<Vec<IdentityReport>> {
    check_rho(l, req.which, req.rho)?;
    let notes = report_notes(req.which);
    let mut out = Vec::with_capacity(req.grid.len());
    for &g in &req.grid {
        let r = match req.which {
            Which::First => first::point(l, g, req),
            Which::Second => second::point(l, g, req),
        };
        let mut rep = r.unwrap_or_else(|e| IdentityReport::failed(req.which, req.rho, g, e));
        rep.notes = notes.clone();
        rep.warnings.extend(l.warnings().iter().cloned());
        out.push(rep);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
