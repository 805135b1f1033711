#![allow(dead_code)]

use hecke_core::automorphic::{coeffs_delta, coeffs_eisenstein, CoefficientSeries};
use hecke_core::hecke::{GroupParam, HeckeGroup, PoleBlock, RationalPeriodFunction, ZeroPoleTerm};
use hecke_core::lseries::CompletedL;
use hecke_core::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn group(p: u32, k: u32) -> HeckeGroup {
    HeckeGroup::new(GroupParam::Finite(p), k).unwrap()
}

pub fn e4(m: usize) -> CompletedL {
    CompletedL::with_defaults(group(3, 2), coeffs_eisenstein(4, m).unwrap(), RationalPeriodFunction::default()).unwrap()
}

pub fn delta(m: usize) -> CompletedL {
    CompletedL::with_defaults(group(3, 6), coeffs_delta(m).unwrap(), RationalPeriodFunction::default()).unwrap()
}

pub fn constant_series(a0: f64) -> CoefficientSeries {
    CoefficientSeries::new(cx(a0, 0.0), vec![cx(0.0, 0.0); 4], 1.0, "a0").unwrap()
}

/// Zero terms `r = k..=2k+1` and one or two pole blocks, all with random
/// coefficients.
pub fn random_rpf(rng: &mut ChaCha8Rng, k: u32) -> RationalPeriodFunction {
    let mut zero_terms = Vec::new();
    for r in k..=2 * k + 1 {
        if rng.gen_bool(0.5) {
            zero_terms.push(ZeroPoleTerm { r, coeff: cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) });
        }
    }
    let mut pole_blocks = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let alpha = sign * rng.gen_range(0.4..2.5);
        let m = rng.gen_range(1..=k as usize + 1);
        let coeffs = (0..m).map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        pole_blocks.push(PoleBlock { alpha, coeffs });
    }
    RationalPeriodFunction::new(zero_terms, pole_blocks)
}

/// Euler–Maclaurin `ζ(s)` with `N = 30` and ten correction terms.
pub fn zeta(s: Complex64) -> Complex64 {
    const B2J: [f64; 10] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
    ];
    let n = 30.0f64;
    let mut acc = cx(0.0, 0.0);
    for j in 1..30 {
        acc += (-s * (j as f64).ln()).exp();
    }
    let ns = (-s * n.ln()).exp();
    acc += ns * n / (s - 1.0) + ns * 0.5;
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = ns / n;
    for (j, b) in B2J.iter().enumerate() {
        acc += rising * npow * (*b / fact);
        let jj = (2 * j + 2) as f64;
        rising = rising * (s + jj - 1.0) * (s + jj);
        fact *= (jj + 1.0) * (jj + 2.0);
        npow = npow / (n * n);
    }
    acc
}
