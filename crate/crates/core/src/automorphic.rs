//! Fourier coefficient series `F(z) = Σ a_m e^{2πimz/λ}` of entire automorphic
//! integrals, with generators for Eisenstein series and `Δ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::hecke::{HeckeGroup, PeriodFunction};
use crate::numeric::{CDd, ComplexSum, Dd};
use crate::specialfn::EvalBudget;
use crate::{Error, Result};

/// Default number of stored coefficients.
pub const DEFAULT_M_MAX: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    a0: Complex64,
    coeffs: Vec<Complex64>,
    beta: f64,
    label: String,
    growth: f64,
    /// Real low-order parts of integer coefficients too large for an f64.
    lo: Vec<f64>,
}

impl CoefficientSeries {
    /// `coeffs[m-1] = a_m`. `beta` is the declared growth exponent with
    /// `Σ |a_m| m^{-β} < ∞`.
    pub fn new(a0: Complex64, coeffs: Vec<Complex64>, beta: f64, label: impl Into<String>) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid(format!("beta = {beta} must be positive")));
        }
        if !(a0.re.is_finite() && a0.im.is_finite()) {
            return Err(Error::invalid("a0 is not finite"));
        }
        if let Some(m) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid(format!("coefficient a_{} is not finite", m + 1)));
        }
        let gamma = beta - 0.25;
        let growth = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() / ((i + 1) as f64).powf(gamma))
            .fold(0.0, f64::max);
        Ok(CoefficientSeries { a0, coeffs, beta, label: label.into(), growth, lo: Vec::new() })
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    /// `a_m` for `m <= m_max`, zero beyond.
    pub fn a(&self, m: usize) -> Complex64 {
        if m == 0 {
            self.a0
        } else {
            self.coeffs.get(m - 1).copied().unwrap_or_default()
        }
    }

    /// `a_1, a_2, …` as stored.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn m_max(&self) -> usize {
        self.coeffs.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `K = max_m |a_m| / m^{β-1/4}` over the stored range.
    pub fn growth_constant(&self) -> f64 {
        self.growth
    }

    /// `a_m` in double-double, exact for integer coefficients built from
    /// `i128` values.
    pub fn a_dd(&self, m: usize) -> CDd {
        let a = CDd::from(self.a(m));
        match self.lo.get(m.wrapping_sub(1)) {
            Some(&lo) if m >= 1 && lo != 0.0 => CDd::new(a.re + Dd::new(lo), a.im),
            _ => a,
        }
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.a0.im == 0.0 && self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// The same series with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        CoefficientSeries {
            a0: self.a0 * c,
            coeffs,
            beta: self.beta,
            label: self.label.clone(),
            growth: self.growth * c.abs(),
            lo: self.lo.iter().map(|v| v * c).collect(),
        }
    }

    /// Truncate to the first `m_max` coefficients.
    pub fn truncated(&self, m_max: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(m_max);
        s.lo.truncate(m_max);
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Rational {
    num: i128,
    den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    fn new(num: i128, den: i128) -> Self {
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Rational { num: s * num / g, den: s * den / g }
    }

    fn add(self, o: Rational) -> Rational {
        Rational::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    fn mul_int(self, k: i128) -> Rational {
        Rational::new(self.num * k, self.den)
    }
}

/// Exact Bernoulli numbers `B_0..=B_n` (`B_1 = -1/2`).
fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::new(1, 1)];
    for m in 1..=n {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::new(0, 1);
        let mut binom: i128 = 1;
        for (j, bj) in b.iter().enumerate() {
            acc = acc.add(bj.mul_int(binom));
            binom = binom * (m as i128 + 1 - j as i128) / (j as i128 + 1);
        }
        b.push(Rational::new(-acc.num, acc.den * (m as i128 + 1)));
    }
    b
}

/// Leading constant `-4k/B_{2k}` of the normalised Eisenstein series.
pub fn eisenstein_constant(weight2k: u32) -> Result<i64> {
    if !matches!(weight2k, 4 | 6 | 8 | 10 | 14) {
        return Err(Error::invalid(format!("unsupported Eisenstein weight {weight2k}; use 4, 6, 8, 10 or 14")));
    }
    let b = bernoulli(weight2k as usize)[weight2k as usize];
    let c = Rational::new(-2 * weight2k as i128 * b.den, b.num);
    debug_assert_eq!(c.den, 1);
    Ok(c.num as i64)
}

/// `E_{2k}` on the full modular group: `a₀ = 1`, `a_m = c_{2k} σ_{2k-1}(m)`,
/// `β = 2k - 3/4`.
pub fn coeffs_eisenstein(weight2k: u32, m_max: usize) -> Result<CoefficientSeries> {
    let c = eisenstein_constant(weight2k)? as f64;
    if m_max == 0 {
        return Err(Error::invalid("m_max must be >= 1"));
    }
    let e = weight2k as i32 - 1;
    let mut sigma = vec![0.0f64; m_max + 1];
    for d in 1..=m_max {
        let dp = (d as f64).powi(e);
        let mut m = d;
        while m <= m_max {
            sigma[m] += dp;
            m += d;
        }
    }
    let coeffs = sigma[1..].iter().map(|&s| Complex64::new(c * s, 0.0)).collect();
    CoefficientSeries::new(
        Complex64::new(1.0, 0.0),
        coeffs,
        weight2k as f64 - 1.0 + 0.25,
        format!("eisenstein-{weight2k}"),
    )
}

/// Ramanujan's `τ(1..=m_max)` from `q Π (1-q^n)^24`, exactly.
pub fn ramanujan_tau(m_max: usize) -> Vec<i128> {
    let deg = m_max.saturating_sub(1);
    // Jacobi: Π (1-q^n)^3 = Σ_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}
    let mut cube: Vec<(usize, i128)> = Vec::new();
    let mut j = 0usize;
    while j * (j + 1) / 2 <= deg {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        cube.push((j * (j + 1) / 2, sign * (2 * j as i128 + 1)));
        j += 1;
    }
    let mut poly = vec![0i128; deg + 1];
    for &(e, c) in &cube {
        poly[e] = c;
    }
    for _ in 0..7 {
        let mut next = vec![0i128; deg + 1];
        for (i, &a) in poly.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(e, c) in &cube {
                if i + e > deg {
                    break;
                }
                next[i + e] += a * c;
            }
        }
        poly = next;
    }
    poly.truncate(m_max);
    poly
}

/// `Δ(z) = Σ τ(m) q^m` with `β = 6 + 1/4`.
pub fn coeffs_delta(m_max: usize) -> Result<CoefficientSeries> {
    if m_max == 0 {
        return Err(Error::invalid("m_max must be >= 1"));
    }
    let tau = ramanujan_tau(m_max);
    let coeffs = tau.iter().map(|&t| Complex64::new(t as f64, 0.0)).collect();
    let mut s = CoefficientSeries::new(Complex64::new(0.0, 0.0), coeffs, 6.25, "delta")?;
    s.lo = tau.iter().map(|&t| (t - (t as f64) as i128) as f64).collect();
    Ok(s)
}

/// Result of a truncated Fourier evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierSum {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// `Σ_{m>=m0} a_m e^{2πimz/λ}` with a certified tail, `m0` being 0 or 1.
pub fn fourier_sum(
    series: &CoefficientSeries,
    group: &HeckeGroup,
    z: Complex64,
    budget: &EvalBudget,
    include_a0: bool,
) -> Result<FourierSum> {
    if !(z.im > 0.0) {
        return Err(Error::Domain { what: "eval_F", detail: format!("Im z = {} <= 0", z.im) });
    }
    let lam = group.lambda();
    let r = (-2.0 * PI * z.im / lam).exp();
    let gamma = (series.beta - 0.25).max(0.0);
    let k = series.growth;
    let mut acc = ComplexSum::new();
    if include_a0 {
        acc.add(series.a0);
    }
    let phase = Complex64::new(0.0, 2.0 * PI / lam) * z;
    let m_max = series.m_max();
    for m in 1..=m_max {
        let a = series.coeffs[m - 1];
        if a != Complex64::new(0.0, 0.0) {
            acc.add(a * (phase * m as f64).exp());
        }
        let m1 = (m + 1) as f64;
        let ratio = ((m1 + 1.0) / m1).powf(gamma) * r;
        if ratio < 1.0 {
            let tail = k * m1.powf(gamma) * r.powf(m1) / (1.0 - ratio);
            if tail <= budget.rel_tol * acc.value().norm() + budget.abs_floor || k == 0.0 {
                return Ok(FourierSum { value: acc.value(), terms: m, tail_bound: tail });
            }
        }
    }
    if k == 0.0 || m_max == 0 {
        return Ok(FourierSum { value: acc.value(), terms: m_max, tail_bound: 0.0 });
    }
    // crude estimate of the index needed for the tail to drop below tolerance
    let needed = (-(budget.rel_tol.max(1e-300)).ln() + gamma * (m_max as f64).ln()) / (2.0 * PI * z.im / lam);
    Err(Error::TailNotCertifiable { y: z.im, needed })
}

/// `Σ_{m>=1} |a_m| e^{-2πmy/λ}`, an upper bound for `|F(iy') - a₀|` at every
/// `y' >= y`.
pub fn majorant(series: &CoefficientSeries, group: &HeckeGroup, y: f64, budget: &EvalBudget) -> Result<f64> {
    let abs = CoefficientSeries {
        a0: Complex64::new(0.0, 0.0),
        coeffs: series.coeffs.iter().map(|a| Complex64::new(a.norm(), 0.0)).collect(),
        beta: series.beta,
        label: String::new(),
        growth: series.growth,
        lo: Vec::new(),
    };
    let f = fourier_sum(&abs, group, Complex64::new(0.0, y), budget, false)?;
    Ok(f.value.re + f.tail_bound)
}

/// `F(z)` for `Im z > 0`.
pub fn eval_f(series: &CoefficientSeries, group: &HeckeGroup, z: Complex64, budget: &EvalBudget) -> Result<Complex64> {
    Ok(fourier_sum(series, group, z, budget, true)?.value)
}

/// `max |z^{-2k} F(-1/z) - F(z) - q(z)| / (1 + |F(z)|)` over the samples.
pub fn check_modular_relation<Q: PeriodFunction + ?Sized>(
    series: &CoefficientSeries,
    q: &Q,
    group: &HeckeGroup,
    samples: &[Complex64],
    budget: &EvalBudget,
) -> Result<f64> {
    let w = group.weight() as i32;
    let mut worst = 0.0f64;
    for &z in samples {
        let f = eval_f(series, group, z, budget)?;
        let ft = eval_f(series, group, -z.inv(), budget)?;
        let res = z.powi(-w) * ft - f - q.eval(group, z)?;
        worst = worst.max(res.norm() / (1.0 + f.norm()));
    }
    Ok(worst)
}
