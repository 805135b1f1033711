//! Hecke groups `G(λ)`, the weight `2k` slash action and the rational period
//! functions of the parametric family
//!
//! ```text
//! q(z) = Σ_{k≤r≤L} C_r f_r(z,0) + Σ_j Σ_{r=1}^{M_j} C_{rj} f_r(z,α_j)
//! f_r(z,0) = z^{-r} - (-1)^r z^{r-2k}
//! f_r(z,α) = (z-α)^{-r} - (-1)^r α^{-r} z^{r-2k} (z+1/α)^{-r}
//! ```

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, Warning};

/// Absolute distance below which an RPF evaluation is refused.
pub const NEAR_POLE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupParam {
    Finite(u32),
    Infinity,
}

/// `λ_p = 2cos(π/p)`, or 2 for the theta group.
pub fn lambda_of(p: GroupParam) -> Result<f64> {
    match p {
        GroupParam::Finite(p) if p < 3 => Err(Error::Domain { what: "lambda_of", detail: format!("p = {p} < 3") }),
        GroupParam::Finite(p) => Ok(2.0 * (PI / p as f64).cos()),
        GroupParam::Infinity => Ok(2.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeckeGroup {
    p: GroupParam,
    lambda: f64,
    k: u32,
}

impl HeckeGroup {
    /// Group `G(λ_p)` acting in weight `2k`.
    pub fn new(p: GroupParam, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("weight parameter k must be >= 1"));
        }
        Ok(HeckeGroup { p, lambda: lambda_of(p)?, k })
    }

    /// Identify the group from `λ`; accepts `λ_p` (to 1e-14) or 2.
    pub fn from_lambda(lambda: f64, k: u32) -> Result<Self> {
        if (lambda - 2.0).abs() <= 1e-14 {
            return Self::new(GroupParam::Infinity, k);
        }
        // λ_p increases to 2, so p is recovered from arccos.
        if lambda > 0.0 && lambda < 2.0 {
            let p = (PI / (0.5 * lambda).acos()).round();
            if p >= 3.0 && p < 1e6 {
                let g = Self::new(GroupParam::Finite(p as u32), k)?;
                if (g.lambda - lambda).abs() <= 1e-14 {
                    return Ok(g);
                }
            }
        }
        Err(Error::invalid(format!("lambda = {lambda} is not 2cos(pi/p) for an integer p >= 3, nor 2")))
    }

    pub fn p(&self) -> GroupParam {
        self.p
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn weight(&self) -> u32 {
        2 * self.k
    }

    /// `i^{2k} = (-1)^k`.
    pub fn i2k(&self) -> f64 {
        if self.k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Translation `S_λ: z ↦ z + λ`.
    pub fn s(&self) -> GroupElement {
        GroupElement { a: 1.0, b: self.lambda, c: 0.0, d: 1.0 }
    }

    /// Inversion `T: z ↦ -1/z`.
    pub fn t(&self) -> GroupElement {
        GroupElement { a: 0.0, b: 1.0, c: -1.0, d: 0.0 }
    }
}

/// A real 2×2 matrix of determinant one acting by Möbius transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("determinant {det} != 1")));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub const IDENTITY: GroupElement = GroupElement { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn pow(&self, n: u32) -> GroupElement {
        let mut m = GroupElement::IDENTITY;
        for _ in 0..n {
            m = m.mul(self);
        }
        m
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    /// Automorphy factor `cz + d`.
    pub fn j(&self, z: Complex64) -> Complex64 {
        z * self.c + self.d
    }
}

/// `(f|M)(z) = (cz+d)^{-2k} f(Mz)`.
pub fn slash<F>(f: F, m: &GroupElement, group: &HeckeGroup, z: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(z.im > 0.0) {
        return Err(Error::Domain { what: "slash", detail: format!("Im z = {} <= 0", z.im) });
    }
    let j = m.j(z);
    if j.norm() == 0.0 {
        return Err(Error::SingularPoint(z));
    }
    Ok(j.powi(-(group.weight() as i32)) * f(m.apply(z))?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPoleTerm {
    pub r: u32,
    pub coeff: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleBlock {
    pub alpha: f64,
    /// Entry `r - 1` holds `C_{rj}`.
    pub coeffs: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RationalPeriodFunction {
    pub zero_terms: Vec<ZeroPoleTerm>,
    pub pole_blocks: Vec<PoleBlock>,
}

/// Anything that can be evaluated as a period function in weight `2k`.
pub trait PeriodFunction {
    fn eval(&self, group: &HeckeGroup, z: Complex64) -> Result<Complex64>;
}

/// `f_r(z, 0)`.
pub fn f_zero(r: u32, k: u32, z: Complex64) -> Complex64 {
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    z.powi(-(r as i32)) - z.powi(r as i32 - 2 * k as i32) * sign
}

/// `f_r(z, α)` for `α ≠ 0`.
pub fn f_alpha(r: u32, k: u32, alpha: f64, z: Complex64) -> Complex64 {
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let ri = r as i32;
    (z - alpha).powi(-ri)
        - z.powi(ri - 2 * k as i32) * (z + 1.0 / alpha).powi(-ri) * (sign * alpha.powi(-ri))
}

impl RationalPeriodFunction {
    pub fn new(zero_terms: Vec<ZeroPoleTerm>, pole_blocks: Vec<PoleBlock>) -> Self {
        RationalPeriodFunction { zero_terms, pole_blocks }
    }

    pub fn is_empty(&self) -> bool {
        self.zero_terms.is_empty() && self.pole_blocks.is_empty()
    }

    /// `L`, the largest zero-term index (0 when there are none).
    pub fn max_r(&self) -> u32 {
        self.zero_terms.iter().map(|t| t.r).max().unwrap_or(0)
    }

    /// Check structural invariants for weight `2k`; returns warnings for
    /// degenerate (identically vanishing) terms.
    pub fn validate(&self, group: &HeckeGroup) -> Result<Vec<Warning>> {
        let k = group.k();
        let mut warnings = Vec::new();
        for (i, t) in self.zero_terms.iter().enumerate() {
            if t.r < k {
                return Err(Error::invalid(format!("zero term r = {} below k = {k}", t.r)));
            }
            if self.zero_terms[..i].iter().any(|u| u.r == t.r) {
                return Err(Error::invalid(format!("zero term index r = {} repeated", t.r)));
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::invalid("non-finite zero-term coefficient"));
            }
            if t.r == k && k % 2 == 0 {
                warnings.push(Warning::new(
                    "degenerate-term",
                    format!("f_{}(z,0) vanishes identically for even k = {k}", t.r),
                ));
            }
        }
        for (i, b) in self.pole_blocks.iter().enumerate() {
            if b.alpha == 0.0 || !b.alpha.is_finite() {
                return Err(Error::invalid("PoleBlock.alpha must be a nonzero real"));
            }
            if b.coeffs.is_empty() {
                return Err(Error::invalid(format!("pole block alpha = {} has no coefficients", b.alpha)));
            }
            if self.pole_blocks[..i].iter().any(|c| c.alpha == b.alpha) {
                return Err(Error::invalid(format!("pole block alpha = {} repeated", b.alpha)));
            }
        }
        Ok(warnings)
    }

    /// Real poles `0, α_j, -1/α_j`.
    pub fn poles(&self) -> Vec<f64> {
        let mut v = Vec::new();
        if !self.zero_terms.is_empty() || !self.pole_blocks.is_empty() {
            v.push(0.0);
        }
        for b in &self.pole_blocks {
            v.push(b.alpha);
            v.push(-1.0 / b.alpha);
        }
        v
    }
}

fn check_poles(poles: &[f64], z: Complex64) -> Result<()> {
    for &p in poles {
        if (z - p).norm() < NEAR_POLE {
            return Err(Error::NearPole(z));
        }
    }
    Ok(())
}

/// Evaluate `q(z)` term by term.
pub fn eval_rpf(q: &RationalPeriodFunction, group: &HeckeGroup, z: Complex64) -> Result<Complex64> {
    check_poles(&q.poles(), z)?;
    let k = group.k();
    let mut acc = crate::numeric::ComplexSum::new();
    for t in &q.zero_terms {
        acc.add(t.coeff * f_zero(t.r, k, z));
    }
    for b in &q.pole_blocks {
        for (i, c) in b.coeffs.iter().enumerate() {
            acc.add(c * f_alpha(i as u32 + 1, k, b.alpha, z));
        }
    }
    Ok(acc.value())
}

impl PeriodFunction for RationalPeriodFunction {
    fn eval(&self, group: &HeckeGroup, z: Complex64) -> Result<Complex64> {
        eval_rpf(self, group, z)
    }
}

/// `α₀(1 - z^{-2k})`, the period function of the constant `F ≡ -α₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialRpf {
    pub alpha0: Complex64,
}

pub fn trivial_rpf(alpha0: Complex64) -> TrivialRpf {
    TrivialRpf { alpha0 }
}

impl TrivialRpf {
    /// The same function written in the parametric family: `C_{2k} = -α₀`.
    pub fn to_rpf(&self, group: &HeckeGroup) -> RationalPeriodFunction {
        RationalPeriodFunction::new(
            alloc::vec![ZeroPoleTerm { r: group.weight(), coeff: -self.alpha0 }],
            Vec::new(),
        )
    }
}

impl PeriodFunction for TrivialRpf {
    fn eval(&self, group: &HeckeGroup, z: Complex64) -> Result<Complex64> {
        if self.alpha0 == Complex64::new(0.0, 0.0) {
            return Ok(self.alpha0);
        }
        if z.norm() < NEAR_POLE {
            return Err(Error::NearPole(z));
        }
        Ok(self.alpha0 * (Complex64::new(1.0, 0.0) - z.powi(-(group.weight() as i32))))
    }
}

/// `max |(q|T)(z) + q(z)| / (1 + |q(z)|)` over the samples.
pub fn check_t_relation<Q: PeriodFunction + ?Sized>(
    q: &Q,
    group: &HeckeGroup,
    samples: &[Complex64],
) -> Result<f64> {
    let t = group.t();
    let mut worst = 0.0f64;
    for &z in samples {
        let qz = q.eval(group, z)?;
        let qt = slash(|w| q.eval(group, w), &t, group, z)?;
        worst = worst.max((qt + qz).norm() / (1.0 + qz.norm()));
    }
    Ok(worst)
}

/// Default sample set for relation checks: a deterministic lattice in
/// `-1 <= Re z <= 1`, `0.6 <= Im z <= 2.1`.
pub fn default_samples(n: usize) -> Vec<Complex64> {
    // Kronecker sequence with the golden ratio
    let g = 0.618_033_988_749_894_9;
    (0..n)
        .map(|i| {
            let u = ((i as f64 + 0.5) * g).fract();
            let v = (i as f64 + 0.5) / n as f64;
            Complex64::new(2.0 * u - 1.0, 0.6 + 1.5 * v)
        })
        .collect()
}

/// Residual of `Σ_{j=0}^{p-1} q|(S_λ T)^j = 0` over 50 default samples.
pub fn check_cocycle_relation<Q: PeriodFunction + ?Sized>(q: &Q, group: &HeckeGroup) -> Result<f64> {
    let p = match group.p() {
        GroupParam::Finite(p) => p,
        GroupParam::Infinity => {
            return Err(Error::Domain { what: "check_cocycle_relation", detail: "p = infinity".into() })
        }
    };
    let st = group.s().mul(&group.t());
    let mats: Vec<GroupElement> = (0..p).map(|j| st.pow(j)).collect();
    let mut worst = 0.0f64;
    for z in default_samples(50) {
        let mut acc = crate::numeric::ComplexSum::new();
        let mut scale = 0.0f64;
        for m in &mats {
            let v = slash(|w| q.eval(group, w), m, group, z)?;
            scale = scale.max(v.norm());
            acc.add(v);
        }
        worst = worst.max(acc.value().norm() / (1.0 + scale));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lambdas() {
        assert!((lambda_of(GroupParam::Finite(3)).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambda_of(GroupParam::Finite(4)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(lambda_of(GroupParam::Infinity).unwrap(), 2.0);
        assert!(lambda_of(GroupParam::Finite(2)).is_err());
        let g = HeckeGroup::from_lambda(2f64.sqrt(), 1).unwrap();
        assert_eq!(g.p(), GroupParam::Finite(4));
    }

    #[test]
    fn slash_examples() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 1).unwrap();
        let v = slash(|_| Ok(c(1.0, 0.0)), &g.t(), &g, c(0.0, 1.0)).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        let z = c(0.3, 0.8);
        let v = slash(Ok, &g.s(), &g, z).unwrap();
        assert!((v - (z + 1.0)).norm() < 1e-15);
        let v = slash(|w| Ok(w * w), &GroupElement::IDENTITY, &g, z).unwrap();
        assert_eq!(v, z * z);
    }

    #[test]
    fn zero_term_at_i_vanishes() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 2).unwrap();
        let q = RationalPeriodFunction::new(vec![ZeroPoleTerm { r: 3, coeff: c(1.0, 0.0) }], vec![]);
        assert!(eval_rpf(&q, &g, c(0.0, 1.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn degenerate_term_is_flagged() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 2).unwrap();
        let q = RationalPeriodFunction::new(vec![ZeroPoleTerm { r: 2, coeff: c(1.0, 0.0) }], vec![]);
        let w = q.validate(&g).unwrap();
        assert_eq!(w.len(), 1);
        assert!(eval_rpf(&q, &g, c(0.4, 0.9)).unwrap().norm() == 0.0);
    }

    #[test]
    fn invalid_alpha_rejected() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 2).unwrap();
        let q = RationalPeriodFunction::new(vec![], vec![PoleBlock { alpha: 0.0, coeffs: vec![c(1.0, 0.0)] }]);
        let err = q.validate(&g).unwrap_err();
        assert!(format!("{err}").contains("PoleBlock.alpha"));
    }

    #[test]
    fn near_pole_refused() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 2).unwrap();
        let q = RationalPeriodFunction::new(vec![], vec![PoleBlock { alpha: 1.5, coeffs: vec![c(1.0, 0.0)] }]);
        assert!(matches!(eval_rpf(&q, &g, c(1.5, 1e-9)), Err(Error::NearPole(_))));
    }

    #[test]
    fn trivial_rpf_examples() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 1).unwrap();
        let q = trivial_rpf(c(1.0, 0.0));
        assert!((q.eval(&g, c(0.0, 2.0)).unwrap() - c(1.25, 0.0)).norm() < 1e-15);
        assert!(check_t_relation(&q, &g, &[c(1.0, 1.0)]).unwrap() < 1e-15);
        let as_family = q.to_rpf(&g);
        let z = c(-0.2, 0.7);
        assert!((as_family.eval(&g, z).unwrap() - q.eval(&g, z).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn cocycle_for_trivial_rpf() {
        let g = HeckeGroup::new(GroupParam::Finite(3), 2).unwrap();
        let r = check_cocycle_relation(&trivial_rpf(c(1.0, 0.0)), &g).unwrap();
        assert!(r < 1e-12, "{r}");
        let theta = HeckeGroup::new(GroupParam::Infinity, 2).unwrap();
        assert!(check_cocycle_relation(&trivial_rpf(c(1.0, 0.0)), &theta).is_err());
    }

    #[test]
    fn non_rpf_is_detected() {
        struct Identity;
        impl PeriodFunction for Identity {
            fn eval(&self, _: &HeckeGroup, z: Complex64) -> Result<Complex64> {
                Ok(z)
            }
        }
        let g = HeckeGroup::new(GroupParam::Finite(3), 1).unwrap();
        let r = check_t_relation(&Identity, &g, &default_samples(10)).unwrap();
        assert!(r > 1e-3);
    }
}
