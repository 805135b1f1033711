//! The completed Dirichlet series
//!
//! ```text
//! Φ(s) = (2π/λ)^{-s} Γ(s) Σ_{m>=1} a_m m^{-s}
//! ```
//!
//! its continuation `Φ = D + D⁰ + E⁰ + E^H + E^B`, the functional equation
//! `Φ(2k-s) - i^{2k}Φ(s) = R(s)` and the residues of each piece.

mod pieces;
mod residues;

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::automorphic::CoefficientSeries;
use crate::hecke::{HeckeGroup, RationalPeriodFunction};
use crate::numeric::ComplexSum;
use crate::specialfn::{gamma, EvalBudget};
use crate::{Error, Result, Warning};

pub use residues::{PoleSet, ResidueCheck};

/// Which `r` range of each pole block enters `E^B` and its residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockRange {
    /// Every stored coefficient, `r = 1..=M_j` (the range that makes the
    /// pieces add up to the Mellin transform of `q`).
    #[default]
    Stored,
    /// `r = 1..=min(M_j, k)`.
    CappedAtK,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationConfig {
    /// `δ`: the strip `2k-δ <= Re s <= δ` used for pole sets.
    pub delta_strip: f64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// Lower bound for the upper limit of the `D` integral; raised per `s`
    /// when the tail estimate demands it.
    pub quad_y_max: f64,
    pub pole_exclusion_radius: f64,
    pub block_range: BlockRange,
    /// Evaluate `i^{2k}` as `(-1)^k` (default) or through `exp(iπk)`.
    pub exact_i2k: bool,
    pub budget: EvalBudget,
}

impl ContinuationConfig {
    /// `δ = max(β, 2k) + 1.55` and `y_max` with `e^{-2π y_max/λ} < tol/100`.
    pub fn default_for(group: &HeckeGroup, series: &CoefficientSeries) -> Self {
        let quad_abs_tol = 1e-13;
        let y_max = (-(quad_abs_tol * 1e-2).ln()) * group.lambda() / (2.0 * PI);
        ContinuationConfig {
            delta_strip: series.beta().max(group.weight() as f64) + 1.55,
            quad_abs_tol,
            quad_rel_tol: 1e-13,
            quad_y_max: y_max.max(1.5),
            pole_exclusion_radius: 1e-3,
            block_range: BlockRange::Stored,
            exact_i2k: true,
            budget: EvalBudget::default(),
        }
    }
}

/// `Φ` together with everything needed to continue it.
#[derive(Debug, Clone)]
pub struct CompletedL {
    group: HeckeGroup,
    series: CoefficientSeries,
    rpf: RationalPeriodFunction,
    config: ContinuationConfig,
    warnings: Vec<Warning>,
}

/// Values of the five continuation pieces at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pieces {
    pub d: Complex64,
    pub d0: Complex64,
    pub e0: Complex64,
    pub eh: Complex64,
    pub eb: Complex64,
}

impl Pieces {
    pub fn total(&self) -> Complex64 {
        let mut s = ComplexSum::new();
        for v in [self.d, self.d0, self.e0, self.eh, self.eb] {
            s.add(v);
        }
        s.value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    D,
    D0,
    E0,
    EH,
    EB,
}

/// `R(s)` from the definition and from the expanded Beta form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RValue {
    pub value: Complex64,
    pub expanded: Complex64,
    /// Whether the two forms agree to 1e-9 relative. They can differ for
    /// negative `α_j`, where `i^{-s} α^{2k-s}` and `(iα)^{2k-s}` sit on
    /// different principal branches.
    pub agree: bool,
}

/// Defects `X(2k-s) - i^{2k} X(s)` of each piece, and of `E^B` against `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    pub d: Complex64,
    pub d0: Complex64,
    pub e0: Complex64,
    pub eh: Complex64,
    pub eb_minus_r: Complex64,
}

impl CompletedL {
    pub fn new(
        group: HeckeGroup,
        series: CoefficientSeries,
        rpf: RationalPeriodFunction,
        config: ContinuationConfig,
    ) -> Result<Self> {
        let mut warnings = rpf.validate(&group)?;
        let two_k = group.weight() as f64;
        let delta = config.delta_strip;
        if !(delta > two_k) {
            return Err(Error::invalid(format!("delta_strip = {delta} must exceed 2k = {two_k}")));
        }
        if delta < series.beta() {
            return Err(Error::invalid(format!("delta_strip = {delta} below beta = {}", series.beta())));
        }
        if (delta - delta.round()).abs() < 1e-3 {
            return Err(Error::invalid(format!("delta_strip = {delta} is within 1e-3 of an integer")));
        }
        if !(config.pole_exclusion_radius > 0.0) || !(config.quad_abs_tol > 0.0) || !(config.quad_y_max > 1.0) {
            return Err(Error::invalid("continuation tolerances must be positive and y_max > 1"));
        }
        if config.block_range == BlockRange::CappedAtK {
            for b in &rpf.pole_blocks {
                if b.coeffs.len() > group.k() as usize {
                    warnings.push(Warning::new(
                        "block-range",
                        format!(
                            "pole block alpha = {} has M = {} > k = {}; E^B uses r <= k only",
                            b.alpha,
                            b.coeffs.len(),
                            group.k()
                        ),
                    ));
                }
            }
        }
        Ok(CompletedL { group, series, rpf, config, warnings })
    }

    /// Defaults for the continuation parameters.
    pub fn with_defaults(group: HeckeGroup, series: CoefficientSeries, rpf: RationalPeriodFunction) -> Result<Self> {
        let config = ContinuationConfig::default_for(&group, &series);
        Self::new(group, series, rpf, config)
    }

    pub fn group(&self) -> &HeckeGroup {
        &self.group
    }

    pub fn series(&self) -> &CoefficientSeries {
        &self.series
    }

    pub fn rpf(&self) -> &RationalPeriodFunction {
        &self.rpf
    }

    pub fn config(&self) -> &ContinuationConfig {
        &self.config
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub(crate) fn i2k(&self) -> Complex64 {
        if self.config.exact_i2k {
            Complex64::new(self.group.i2k(), 0.0)
        } else {
            Complex64::new(0.0, PI * self.group.k() as f64).exp()
        }
    }

    pub(crate) fn two_k(&self) -> f64 {
        self.group.weight() as f64
    }

    /// `floor(δ)`.
    pub fn delta_floor(&self) -> i64 {
        self.config.delta_strip.floor() as i64
    }

    /// `(2π/λ)^{-s} Γ(s) Σ_{m<=M} a_m m^{-s}` for `Re s > β + 1`.
    pub fn phi_dirichlet(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.phi_dirichlet_with_tail(s)?.0)
    }

    /// Also returns the integral-test bound on the omitted tail of `φ`.
    pub fn phi_dirichlet_with_tail(&self, s: Complex64) -> Result<(Complex64, f64)> {
        let bound = self.series.beta() + 1.0;
        if !(s.re > bound) {
            return Err(Error::Abscissa { sigma: s.re, bound });
        }
        let mut acc = ComplexSum::new();
        for (i, a) in self.series.coeffs().iter().enumerate() {
            if *a != Complex64::new(0.0, 0.0) {
                acc.add(a * (-s * ((i + 1) as f64).ln()).exp());
            }
        }
        let m = self.series.m_max().max(1) as f64;
        let g = self.series.beta() - 0.25;
        let tail = self.series.growth_constant() * m.powf(g - s.re + 1.0) / (s.re - g - 1.0);
        let pre = Complex64::new(2.0 * PI / self.group.lambda(), 0.0).powc(-s) * gamma(s)?;
        Ok((pre * acc.value(), pre.norm() * tail))
    }

    pub fn pieces(&self, s: Complex64) -> Result<Pieces> {
        Ok(Pieces {
            d: self.d_integral(s)?,
            d0: self.d0(s)?,
            e0: self.e0(s)?,
            eh: self.eh(s)?,
            eb: self.eb(s)?,
        })
    }

    pub fn piece(&self, which: Piece, s: Complex64) -> Result<Complex64> {
        match which {
            Piece::D => self.d_integral(s),
            Piece::D0 => self.d0(s),
            Piece::E0 => self.e0(s),
            Piece::EH => self.eh(s),
            Piece::EB => self.eb(s),
        }
    }

    /// `D + D⁰ + E⁰ + E^H + E^B`.
    pub fn phi_continued(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.pieces(s)?.total())
    }

    /// `R(s) = E^B(2k-s) - i^{2k} E^B(s)`, with the expanded Beta form.
    pub fn r_of(&self, s: Complex64) -> Result<RValue> {
        let two_k = Complex64::new(self.two_k(), 0.0);
        let value = self.eb(two_k - s)? - self.i2k() * self.eb(s)?;
        let expanded = self.r_expanded(s)?;
        let scale = 1.0 + value.norm().max(expanded.norm());
        Ok(RValue { value, expanded, agree: (value - expanded).norm() <= 1e-9 * scale })
    }

    /// `|Φ(2k-s) - i^{2k}Φ(s) - R(s)| / (1 + |Φ(s)|)`.
    pub fn fe_residual(&self, s: Complex64) -> Result<f64> {
        let two_k = Complex64::new(self.two_k(), 0.0);
        let phi_s = self.phi_continued(s)?;
        let phi_r = self.phi_continued(two_k - s)?;
        let r = self.r_of(s)?.value;
        Ok((phi_r - self.i2k() * phi_s - r).norm() / (1.0 + phi_s.norm()))
    }

    /// Piece-by-piece breakdown of the functional-equation defect.
    pub fn symmetry_defects(&self, s: Complex64) -> Result<SymmetryDefects> {
        let two_k = Complex64::new(self.two_k(), 0.0);
        let a = self.pieces(s)?;
        let b = self.pieces(two_k - s)?;
        let e = self.i2k();
        let r = self.r_of(s)?.value;
        Ok(SymmetryDefects {
            d: b.d - e * a.d,
            d0: b.d0 - e * a.d0,
            e0: b.e0 - e * a.e0,
            eh: b.eh - e * a.eh,
            eb_minus_r: b.eb - e * a.eb - r,
        })
    }

    pub(crate) fn check_pole(&self, s: Complex64, pole: f64) -> Result<()> {
        if (s - pole).norm() < self.config.pole_exclusion_radius {
            return Err(Error::PoleProximity { s, pole });
        }
        Ok(())
    }
}
