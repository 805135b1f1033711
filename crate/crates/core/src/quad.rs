//! Quadrature for complex-valued integrands: adaptive Gauss–Kronrod (7/15)
//! on finite and semi-infinite ranges, and the trapezoid rule on circles and
//! vertical lines.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::numeric::ComplexSum;
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals kept by the adaptive driver.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    Ok((k, (k - g).norm()))
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn gauss_kronrod<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, evals: 0 });
    }
    let (v, e) = kronrod15(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    loop {
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature { estimate: err, tol: opts.abs_tol.max(opts.rel_tol * total.norm()) });
        }
        let Some(seg) = heap.pop() else { break };
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            // interval cannot be split further in f64
            heap.push(seg);
            return Err(Error::Quadrature { estimate: err, tol: opts.abs_tol });
        }
        let (v1, e1) = kronrod15(&mut f, seg.a, m)?;
        let (v2, e2) = kronrod15(&mut f, m, seg.b)?;
        evals += 30;
        heap.push(Segment { a: seg.a, b: m, value: v1, error: e1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, error: e2 });
        // recompute sums from scratch to avoid drift
        let mut s = ComplexSum::new();
        let mut es = 0.0;
        for sg in heap.iter() {
            s.add(sg.value);
            es += sg.error;
        }
        total = s.value();
        err = es;
    }
    Ok(QuadResult { value: total, error: err, evals })
}

/// Integrate over `[a, ∞)` by marching panels of doubling length (first panel
/// `scale`) until the panel contributions are negligible.
pub fn gauss_kronrod_to_infinity<F>(mut f: F, a: f64, scale: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut sum = ComplexSum::new();
    let mut error = 0.0;
    let mut evals = 0;
    let mut lo = a;
    let mut len = scale;
    let mut quiet = 0;
    for _ in 0..200 {
        let hi = lo + len;
        let r = gauss_kronrod(&mut f, lo, hi, opts)?;
        sum.add(r.value);
        error += r.error;
        evals += r.evals;
        let tol = opts.abs_tol.max(opts.rel_tol * sum.value().norm());
        if r.value.norm() + r.error <= 0.1 * tol {
            quiet += 1;
            if quiet >= 2 {
                return Ok(QuadResult { value: sum.value(), error, evals });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        len *= 2.0;
    }
    Err(Error::Quadrature { estimate: error, tol: opts.abs_tol })
}

/// `(1/2πi) ∮ f(s) ds` over the circle `|s - center| = radius` with the
/// `n`-point trapezoid rule.
pub fn trapezoid_circle<F>(mut f: F, center: Complex64, radius: f64, n: usize) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut acc = ComplexSum::new();
    for j in 0..n {
        let th = 2.0 * PI * (j as f64 + 0.5) / n as f64;
        let e = Complex64::from_polar(1.0, th);
        acc.add(f(center + e * radius)? * e);
    }
    Ok(acc.value() * (radius / n as f64))
}

/// `(1/2πi) ∫ f(s) ds` along `Re s = sigma`, `|Im s| <= t_max`, trapezoid
/// rule with step `h`.
pub fn trapezoid_line<F>(mut f: F, sigma: f64, t_max: f64, h: f64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let n = (t_max / h).ceil() as i64;
    let h = t_max / n as f64;
    let mut acc = ComplexSum::new();
    for j in -n..=n {
        let w = if j.abs() == n { 0.5 } else { 1.0 };
        acc.add(f(Complex64::new(sigma, j as f64 * h))? * w);
    }
    // ds = i dt, so (1/2πi) ∫ f ds = (1/2π) ∫ f dt
    Ok(acc.value() * (h / (2.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn kronrod_is_exact_for_polynomials() {
        let mut f = |x: f64| Ok(c(x.powi(22) + 3.0 * x.powi(5)));
        let (v, _) = kronrod15(&mut f, -1.0, 2.0).unwrap();
        let want = (2f64.powi(23) + 1.0) / 23.0 + 0.5 * (64.0 - 1.0);
        assert!((v.re - want).abs() < 1e-12 * want);
    }

    #[test]
    fn gauss_part_is_exact_to_degree_13() {
        let mut f = |x: f64| Ok(c(x.powi(12)));
        let (_, e) = kronrod15(&mut f, 0.0, 1.0).unwrap();
        assert!(e < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaks() {
        let r = gauss_kronrod(|x| Ok(c(1.0 / (1e-4 + x * x))), -1.0, 1.0, &QuadOptions::default()).unwrap();
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value.re - want).abs() < 1e-10 * want);
    }

    #[test]
    fn semi_infinite_oscillatory() {
        // ∫_0^∞ e^{-x} e^{ix} dx = 1/(1 - i)
        let r = gauss_kronrod_to_infinity(
            |x| Ok(Complex64::new(-x, x).exp()),
            0.0,
            2.0,
            &QuadOptions::default(),
        )
        .unwrap();
        let want = Complex64::new(1.0, -1.0).inv();
        assert!((r.value - want).norm() < 1e-13);
    }

    #[test]
    fn circle_residue() {
        let v = trapezoid_circle(|s| Ok((s - 0.3).inv() * 2.0 + s * s), c(0.0), 1.0, 32).unwrap();
        assert!((v - c(2.0)).norm() < 1e-14);
    }
}
