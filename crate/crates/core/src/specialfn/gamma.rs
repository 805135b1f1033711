use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::is_nonpositive_int;
use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

fn lanczos_sum(zm1: Complex64) -> Complex64 {
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        a += p / (zm1 + i as f64);
    }
    a
}

/// `log sin(πz)` on some branch, safe for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(πz) = e^{-iπz} (e^{2iπz} - 1) / (2i), and |e^{2iπz}| <= 1 here.
    let ipz = Complex64::new(0.0, PI) * z;
    let e2 = (ipz * 2.0).exp();
    -ipz + ((e2 - 1.0) / Complex64::new(0.0, 2.0)).ln()
}

/// `log Γ(z)` (branch unspecified off the positive axis, real on it).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_int(z) {
        return Err(Error::GammaPole(z));
    }
    if z.re < 0.5 {
        let pi = Complex64::new(PI.ln(), 0.0);
        return Ok(pi - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    let zm1 = z - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + lanczos_sum(zm1).ln())
}

/// `Γ(z)` for complex `z`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_int(z) {
        return Err(Error::GammaPole(z));
    }
    if z.re < 0.5 {
        let s = (Complex64::new(PI, 0.0) * z).sin();
        if z.im.abs() > 100.0 {
            return Ok(ln_gamma(z)?.exp());
        }
        return Ok(PI / (s * gamma(Complex64::new(1.0, 0.0) - z)?));
    }
    if z.im.abs() > 30.0 || z.re > 140.0 {
        return Ok(ln_gamma(z)?.exp());
    }
    let zm1 = z - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * ((zm1 + 0.5) * t.ln() - t).exp() * lanczos_sum(zm1))
}

/// `Γ(x)` for real `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}

/// `1/Γ(z)`, entire: zero at the non-positive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    match gamma(z) {
        Ok(g) => g.inv(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`; uses log-Γ when `|a| + |b| > 170`.
pub fn beta_fn(a: Complex64, b: Complex64) -> Result<Complex64> {
    let ab = a + b;
    if is_nonpositive_int(ab) && !is_nonpositive_int(a) && !is_nonpositive_int(b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a.norm() + b.norm() > 170.0 {
        return Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(ab)?).exp());
    }
    Ok(gamma(a)? * gamma(b)? * rgamma(ab))
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: Complex64, n: u32) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for j in 0..n {
        p *= a + j as f64;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..25 {
            let g = gamma(c(n as f64, 0.0)).unwrap();
            assert!((g.re - f).abs() <= 1e-14 * f, "n = {n}");
            f *= n as f64;
        }
    }

    #[test]
    fn half_integer() {
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-15);
        let g = gamma(c(-1.5, 0.0)).unwrap();
        assert!((g.re - 4.0 * PI.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(gamma(c(0.0, 0.0)), Err(Error::GammaPole(_))));
        assert!(matches!(gamma(c(-3.0, 0.0)), Err(Error::GammaPole(_))));
        assert_eq!(rgamma(c(-2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for &y in &[0.3, 1.0, 4.0, 12.0, 40.0] {
            let g = gamma(c(0.0, y)).unwrap();
            let want = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() / want - 1.0).abs() < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &z in &[c(3.2, 1.1), c(-2.7, 0.4), c(0.1, -5.0), c(12.0, 33.0)] {
            let a = gamma(z).unwrap();
            let b = ln_gamma(z).unwrap().exp();
            assert!((a - b).norm() <= 1e-12 * a.norm(), "z = {z}");
        }
    }

    #[test]
    fn beta_symmetry_and_value() {
        let b = beta_fn(c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((b.re - 1.0 / 12.0).abs() < 1e-15);
        let big = beta_fn(c(100.0, 1.0), c(90.0, -2.0)).unwrap();
        let small = (ln_gamma(c(100.0, 1.0)).unwrap() + ln_gamma(c(90.0, -2.0)).unwrap()
            - ln_gamma(c(190.0, -1.0)).unwrap())
        .exp();
        assert!((big - small).norm() <= 1e-12 * small.norm());
    }
}
