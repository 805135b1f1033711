//! Run configuration: one JSON document per run, strict schema.

use serde::{Deserialize, Serialize};

use hecke_core::automorphic::{coeffs_delta, coeffs_eisenstein, CoefficientSeries};
use hecke_core::hecke::{GroupParam, HeckeGroup, PoleBlock, RationalPeriodFunction, ZeroPoleTerm};
use hecke_core::identities::{IdentityRequest, KernelSelector, Which};
use hecke_core::lseries::{BlockRange, CompletedL, ContinuationConfig};
use hecke_core::Complex64;

use crate::LabError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupSpec,
    pub coefficients: CoefficientSpec,
    #[serde(default)]
    pub rpf: RpfSpec,
    pub check: CheckSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuation: Option<ContinuationSpec>,
}

/// `p` (or `λ`) and the weight `2k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoefficientSpec {
    Eisenstein {
        weight: u32,
        mmax: usize,
    },
    Delta {
        mmax: usize,
    },
    List {
        #[serde(default)]
        a0: [f64; 2],
        a: Vec<[f64; 2]>,
        beta: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RpfSpec {
    #[serde(default)]
    pub zero_terms: Vec<ZeroTermSpec>,
    #[serde(default)]
    pub poles: Vec<PoleSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroTermSpec {
    pub r: u32,
    pub c: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleSpec {
    pub alpha: f64,
    pub c: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockRangeSpec {
    Stored,
    Capped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuationSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_strip: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_range: Option<BlockRangeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffSpec {
    Smooth,
    Sharp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CheckSpec {
    /// Functional-equation residual on an `n × n` grid.
    Fe {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<[f64; 2]>,
        #[serde(default = "default_t")]
        t: [f64; 2],
        #[serde(default = "default_n")]
        n: usize,
        #[serde(default = "default_fe_tol")]
        tol: f64,
    },
    First {
        rho: u32,
        grid: Vec<f64>,
        #[serde(default = "default_first_tol")]
        tol: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<CutoffSpec>,
        #[serde(default)]
        flip_lambda4: bool,
    },
    Second {
        rho: u32,
        grid: Vec<f64>,
        #[serde(default = "default_second_tol")]
        tol: f64,
    },
    Residues {
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default = "default_contour_n")]
        n: usize,
        #[serde(default = "default_residue_tol")]
        tol: f64,
    },
    /// With `r` and `alpha` omitted each kernel is summed over the period
    /// function.
    Kernels {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        selectors: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
        #[serde(default)]
        rho: u32,
        #[serde(default = "default_kernel_y")]
        y: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<u32>,
        #[serde(default = "default_kernel_tol")]
        tol: f64,
    },
}

fn default_t() -> [f64; 2] {
    [-3.0, 3.0]
}
fn default_n() -> usize {
    7
}
fn default_fe_tol() -> f64 {
    1e-8
}
fn default_first_tol() -> f64 {
    1e-6
}
fn default_second_tol() -> f64 {
    1e-8
}
fn default_radius() -> f64 {
    0.25
}
fn default_contour_n() -> usize {
    64
}
fn default_residue_tol() -> f64 {
    1e-7
}
fn default_kernel_y() -> f64 {
    10.0
}
fn default_kernel_tol() -> f64 {
    1e-6
}

impl CheckSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CheckSpec::Fe { .. } => "fe",
            CheckSpec::First { .. } => "first",
            CheckSpec::Second { .. } => "second",
            CheckSpec::Residues { .. } => "residues",
            CheckSpec::Kernels { .. } => "kernels",
        }
    }

    pub fn tol(&self) -> f64 {
        match self {
            CheckSpec::Fe { tol, .. }
            | CheckSpec::First { tol, .. }
            | CheckSpec::Second { tol, .. }
            | CheckSpec::Residues { tol, .. }
            | CheckSpec::Kernels { tol, .. } => *tol,
        }
    }

    pub fn set_tol(&mut self, v: f64) {
        match self {
            CheckSpec::Fe { tol, .. }
            | CheckSpec::First { tol, .. }
            | CheckSpec::Second { tol, .. }
            | CheckSpec::Residues { tol, .. }
            | CheckSpec::Kernels { tol, .. } => *tol = v,
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, LabError> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| LabError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl RunConfig {
    /// Structural checks, then the thresholds of the selected check.
    pub fn validate(&self) -> Result<(), LabError> {
        self.build(None).map(|_| ())
    }

    pub fn group(&self) -> Result<HeckeGroup, LabError> {
        let w = self.group.weight;
        if w == 0 || w % 2 != 0 {
            return Err(LabError::invalid(format!("group.weight = {w} must be a positive even integer 2k")));
        }
        let k = w / 2;
        let g = match (self.group.p, self.group.lambda) {
            (Some(p), None) => HeckeGroup::new(GroupParam::Finite(p), k),
            (None, Some(l)) => HeckeGroup::from_lambda(l, k),
            _ => return Err(LabError::invalid("group needs exactly one of p or lambda")),
        };
        Ok(g?)
    }

    pub fn series(&self, max_terms: Option<usize>) -> Result<CoefficientSeries, LabError> {
        let cap = |m: usize| max_terms.map_or(m, |c| m.min(c));
        let s = match &self.coefficients {
            CoefficientSpec::Eisenstein { weight, mmax } => coeffs_eisenstein(*weight, cap(*mmax))?,
            CoefficientSpec::Delta { mmax } => coeffs_delta(cap(*mmax))?,
            CoefficientSpec::List { a0, a, beta } => {
                let mut v: Vec<Complex64> = a.iter().copied().map(cx).collect();
                v.truncate(cap(v.len()));
                CoefficientSeries::new(cx(*a0), v, *beta, "list")?
            }
        };
        Ok(s)
    }

    pub fn rpf(&self) -> Result<RationalPeriodFunction, LabError> {
        let mut blocks = Vec::new();
        for (i, p) in self.rpf.poles.iter().enumerate() {
            if p.alpha == 0.0 || !p.alpha.is_finite() {
                return Err(LabError::invalid(format!(
                    "rpf.poles[{i}]: PoleBlock.alpha = {} must be a nonzero real",
                    p.alpha
                )));
            }
            blocks.push(PoleBlock { alpha: p.alpha, coeffs: p.c.iter().copied().map(cx).collect() });
        }
        let zeros = self.rpf.zero_terms.iter().map(|t| ZeroPoleTerm { r: t.r, coeff: cx(t.c) }).collect();
        Ok(RationalPeriodFunction::new(zeros, blocks))
    }

    /// Builds the completed series and validates the check against it.
    pub fn build(&self, max_terms: Option<usize>) -> Result<CompletedL, LabError> {
        let g = self.group()?;
        let s = self.series(max_terms)?;
        let q = self.rpf()?;
        let mut cfg = ContinuationConfig::default_for(&g, &s);
        if let Some(c) = &self.continuation {
            if let Some(d) = c.delta_strip {
                cfg.delta_strip = d;
            }
            if let Some(b) = c.block_range {
                cfg.block_range = match b {
                    BlockRangeSpec::Stored => BlockRange::Stored,
                    BlockRangeSpec::Capped => BlockRange::CappedAtK,
                };
            }
        }
        let l = CompletedL::new(g, s, q, cfg)?;
        match &self.check {
            CheckSpec::First { .. } | CheckSpec::Second { .. } => {
                self.identity_request(None).expect("identity check").validate(&l)?;
            }
            CheckSpec::Fe { n, .. } if *n == 0 => return Err(LabError::invalid("check.n must be >= 1")),
            CheckSpec::Residues { radius, n, .. } if !(*radius > 0.0 && *radius < 0.5) || *n < 4 => {
                return Err(LabError::invalid("check.radius must lie in (0, 1/2) and check.n >= 4"));
            }
            CheckSpec::Kernels { selectors: Some(v), .. } => {
                if let Some(bad) = v.iter().find(|s| KernelSelector::parse(s).is_none()) {
                    return Err(LabError::invalid(format!("unknown kernel selector {bad:?}")));
                }
            }
            _ => {}
        }
        Ok(l)
    }

    /// The identity request of a `first` or `second` check.
    pub fn identity_request(&self, max_terms: Option<usize>) -> Option<IdentityRequest> {
        match &self.check {
            CheckSpec::First { rho, grid, cutoff, flip_lambda4, .. } => {
                let mut r = IdentityRequest::new(Which::First, *rho, grid.clone());
                if *cutoff == Some(CutoffSpec::Sharp) {
                    r.options.cutoff = hecke_core::identities::BesselCutoff::Sharp;
                }
                r.options.flip_lambda4 = *flip_lambda4;
                if let Some(m) = max_terms {
                    r.options.max_bessel_terms = m;
                }
                Some(r)
            }
            CheckSpec::Second { rho, grid, .. } => Some(IdentityRequest::new(Which::Second, *rho, grid.clone())),
            _ => None,
        }
    }
}
