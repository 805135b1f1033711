use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::automorphic::{coeffs_delta, coeffs_eisenstein, CoefficientSeries};
use crate::hecke::{trivial_rpf, GroupParam, HeckeGroup, PoleBlock, RationalPeriodFunction, ZeroPoleTerm};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn group(p: u32, k: u32) -> HeckeGroup {
    HeckeGroup::new(GroupParam::Finite(p), k).unwrap()
}

fn e4(m: usize) -> CompletedL {
    CompletedL::with_defaults(group(3, 2), coeffs_eisenstein(4, m).unwrap(), RationalPeriodFunction::default()).unwrap()
}

fn delta(m: usize) -> CompletedL {
    CompletedL::with_defaults(group(3, 6), coeffs_delta(m).unwrap(), RationalPeriodFunction::default()).unwrap()
}

fn zero_l() -> CompletedL {
    let s = CoefficientSeries::new(cx(0.0, 0.0), vec![cx(0.0, 0.0); 8], 1.0, "zero").unwrap();
    CompletedL::with_defaults(group(3, 2), s, RationalPeriodFunction::default()).unwrap()
}

/// The constant `F ≡ -α₀` with its period function `α₀(1 - z^{-2k})`.
fn constant_l(g: HeckeGroup, alpha0: Complex64) -> CompletedL {
    let s = CoefficientSeries::new(-alpha0, vec![cx(0.0, 0.0); 16], 1.0, "const").unwrap();
    let q = trivial_rpf(alpha0).to_rpf(&g);
    CompletedL::with_defaults(g, s, q).unwrap()
}

/// A finite list padded with zeros far enough for the tail bound to close.
fn small_l(mut coeffs: Vec<Complex64>) -> CompletedL {
    coeffs.resize(10000, cx(0.0, 0.0));
    let s = CoefficientSeries::new(cx(0.0, 0.0), coeffs, 1.0, "small").unwrap();
    CompletedL::with_defaults(group(3, 2), s, RationalPeriodFunction::default()).unwrap()
}

fn budget() -> EvalBudget {
    EvalBudget::default()
}

#[test]
fn riesz_lhs_examples() {
    let l = e4(50);
    assert!((riesz_lhs(&l, 2.5, 0).unwrap() - 2401.0).norm() < 1e-9);
    assert!((riesz_lhs(&l, 2.0, 0).unwrap() - 1321.0).norm() < 1e-9);
    assert!((riesz_lhs(&l, 2.0 + 1e-13, 0).unwrap() - 1321.0).norm() < 1e-9);
    assert!((riesz_lhs(&l, 2.0, 1).unwrap() - 242.0).norm() < 1e-9);
    assert!((riesz_a0_term(&l, 2.0, 1).unwrap() - 2.0).norm() < 1e-14);
}

#[test]
fn first_identity_zero_input() {
    let l = zero_l();
    let t = first_rhs_terms(&l, 3.5, 2, &IdentityOptions::default(), &budget()).unwrap();
    for (_, v) in t.named() {
        assert_eq!(v, cx(0.0, 0.0));
    }
}

#[test]
fn first_identity_e4() {
    let l = e4(20000);
    let t = first_rhs_terms(&l, 10.5, 5, &IdentityOptions::default(), &budget()).unwrap();
    assert_eq!(t.lambda3, cx(0.0, 0.0));
    assert_eq!(t.lambda4, cx(0.0, 0.0));
    assert_eq!(t.lambda5, cx(0.0, 0.0));
    let lhs = riesz_lhs(&l, 10.5, 5).unwrap();
    assert!((t.lambda1 + t.lambda2 - lhs).norm() / lhs.norm() < 1e-6);

    let req = IdentityRequest::new(Which::First, 5, vec![2.5, 5.5, 10.5]);
    for r in identity_report(&l, &req).unwrap() {
        assert!(r.error.is_none());
        assert!(r.rel_err <= 1e-6, "x = {}: {}", r.at, r.rel_err);
    }
}

#[test]
fn first_identity_delta() {
    let l = delta(20000);
    let lhs = riesz_lhs(&l, 7.5, 2).unwrap();
    let t = first_rhs_terms(&l, 7.5, 2, &IdentityOptions::default(), &budget()).unwrap();
    assert_eq!(t.lambda2, cx(0.0, 0.0));
    assert!((t.lambda1 - lhs).norm() / lhs.norm() < 1e-6);
}

#[test]
fn first_identity_sharp_cutoff_is_reported() {
    let l = e4(20000);
    let mut req = IdentityRequest::new(Which::First, 5, vec![5.5]);
    req.options.cutoff = BesselCutoff::Sharp;
    let r = &identity_report(&l, &req).unwrap()[0];
    assert!(r.error.is_some() || r.rel_err.is_finite());
}

#[test]
fn first_identity_constant_form() {
    for (g, a) in [(group(3, 2), cx(0.7, -0.2)), (group(4, 3), cx(-1.3, 0.0)), (group(5, 1), cx(0.0, 2.0))] {
        let l = constant_l(g, a);
        for x in [0.5, 2.0, 3.75] {
            let lhs = riesz_lhs(&l, x, 3).unwrap();
            let t = first_rhs_terms(&l, x, 3, &IdentityOptions::default(), &budget()).unwrap();
            let rhs = resum(&t.named());
            assert!((rhs - lhs).norm() <= 1e-10 * (1.0 + lhs.norm()), "{x}: {rhs} vs {lhs}");
        }
    }
}

#[test]
fn perron_matches_riesz_sum() {
    let l = e4(400);
    let exact = riesz_lhs(&l, 5.5, 5).unwrap() - riesz_a0_term(&l, 5.5, 5).unwrap();
    let p = perron_oracle(&l, 5.5, 5, 6.0, 150.0, 0.05).unwrap();
    assert!((p.value - exact).norm() / exact.norm() < 1e-3);
    assert!((p.value - exact).norm() <= p.truncation);

    let l = delta(400);
    let exact = riesz_lhs(&l, 3.5, 3).unwrap();
    let p = perron_oracle(&l, 3.5, 3, 8.0, 150.0, 0.05).unwrap();
    assert!((p.value - exact).norm() / exact.norm() < 1e-3);

    let z = zero_l();
    assert_eq!(perron_oracle(&z, 3.5, 2, 3.0, 50.0, 0.1).unwrap().value, cx(0.0, 0.0));
    assert!(matches!(perron_oracle(&l, 3.5, 3, 6.0, 150.0, 0.05), Err(Error::Abscissa { .. })));
}

#[test]
fn perron_error_decays_with_t() {
    let l = e4(400);
    let rho = 3;
    let exact = riesz_lhs(&l, 5.5, rho).unwrap() - riesz_a0_term(&l, 5.5, rho).unwrap();
    let err = |t: f64| (perron_oracle(&l, 5.5, rho, 6.0, t, 0.05).unwrap().value - exact).norm();
    // averaged over a few nearby T to smooth out the oscillation
    let avg = |t: f64| (0..4).map(|j| err(t * (1.0 + 0.05 * j as f64))).sum::<f64>();
    let ratio = avg(100.0) / avg(200.0);
    assert!(ratio >= 2f64.powi(rho as i32 - 1), "ratio {ratio}");
}

/// `D^ρ g` with `D = -(1/y) d/dy` is `(-1)^ρ d^ρ/dt^ρ` in `t = y²/2`; a
/// central difference of order `ρ` in `t`, Richardson-extrapolated.
fn operator_oracle(coeffs: &[Complex64], y: f64, rho: u32) -> Complex64 {
    let g = |t: f64| {
        let yy = (2.0 * t).sqrt();
        coeffs.iter().enumerate().map(|(i, a)| a * (-yy * ((i + 1) as f64).sqrt()).exp()).sum::<Complex64>() / yy
    };
    let t0 = y * y / 2.0;
    let diff = |h: f64| {
        let mut acc = cx(0.0, 0.0);
        let mut binom = 1.0;
        for j in 0..=rho {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += g(t0 + (rho as f64 / 2.0 - j as f64) * h) * (sign * binom);
            binom = binom * (rho - j) as f64 / (j + 1) as f64;
        }
        acc / h.powi(rho as i32)
    };
    if rho == 0 {
        return g(t0);
    }
    // widest stencil reaches t0/2, half way to the branch point at t = 0
    let levels = 5usize;
    let h0 = t0 / rho as f64;
    let mut table: Vec<Complex64> = (0..levels).map(|i| diff(h0 * 0.5f64.powi(i as i32))).collect();
    for j in 1..levels {
        let f = 4f64.powi(j as i32);
        for i in (j..levels).rev() {
            table[i] = (table[i] * f - table[i - 1]) / (f - 1.0);
        }
    }
    let v = table[levels - 1];
    if rho % 2 == 0 {
        v
    } else {
        -v
    }
}

#[test]
fn second_lhs_single_coefficient() {
    let l = small_l(vec![cx(1.0, 0.0)]);
    let (v, _) = second_lhs(&l, 1.0, 1, &budget()).unwrap();
    assert!((v.re - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    assert!((v - operator_oracle(&[cx(1.0, 0.0)], 1.0, 1)).norm() < 1e-9);
    let (v0, _) = second_lhs(&l, 2.0, 0, &budget()).unwrap();
    assert!((v0.re - (-2.0f64).exp() / 2.0).abs() < 1e-16);
}

#[test]
fn second_lhs_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c: Vec<Complex64> = (0..5).map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let l = small_l(c.clone());
    let (v, _) = second_lhs(&l, 2.0, 3, &budget()).unwrap();
    let o = operator_oracle(&c, 2.0, 3);
    assert!((v - o).norm() / o.norm() < 1e-7, "{v} vs {o}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_second_lhs_operator(
        seed in any::<u64>(),
        rho in 0u32..=4,
        y in 0.8f64..4.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<Complex64> = (0..5).map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let l = small_l(c.clone());
        let (v, _) = second_lhs(&l, y, rho, &budget()).unwrap();
        let o = operator_oracle(&c, y, rho);
        prop_assert!((v - o).norm() <= 1e-7 * o.norm().max(1e-300), "{} vs {}", v, o);
    }

    #[test]
    fn prop_resummation_exact(seed in any::<u64>(), x in 0.3f64..6.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha0 = cx(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let l = constant_l(group(3, 2), alpha0);
        let req = IdentityRequest::new(Which::First, 2, vec![x]);
        let r = &identity_report(&l, &req).unwrap()[0];
        let mut again = cx(0.0, 0.0);
        let mut s = crate::numeric::ComplexSum::new();
        for (_, v) in &r.rhs_terms {
            s.add(*v);
            again = s.value();
        }
        prop_assert_eq!(r.rhs_total - again, cx(0.0, 0.0));
    }
}

#[test]
fn second_identity_zero_input() {
    let l = zero_l();
    let t = second_rhs_terms(&l, 3.0, 1, &budget()).unwrap();
    for (_, v) in t.named() {
        assert_eq!(v, cx(0.0, 0.0));
    }
    assert_eq!(second_lhs(&l, 3.0, 1, &budget()).unwrap().0, cx(0.0, 0.0));
}

#[test]
fn second_identity_delta() {
    let l = delta(20000);
    let t = second_rhs_terms(&l, 2.0, 1, &budget()).unwrap();
    for n in ["a0term", "psi1", "psi2", "gammapair", "extra"] {
        assert_eq!(t.named().iter().find(|(k, _)| *k == n).unwrap().1, cx(0.0, 0.0));
    }
    let (lhs, _) = second_lhs(&l, 2.0, 1, &budget()).unwrap();
    assert!((t.resolvent - lhs).norm() / lhs.norm() < 1e-8);

    let req = IdentityRequest::new(Which::Second, 1, vec![1.0, 2.0, 5.0]);
    for r in identity_report(&l, &req).unwrap() {
        assert!(r.error.is_none(), "{:?}", r.error);
        assert!(r.rel_err <= 1e-8, "y = {}: {}", r.at, r.rel_err);
    }
}

#[test]
fn second_identity_e4() {
    let l = e4(20000);
    let req = IdentityRequest::new(Which::Second, 1, vec![2.0, 3.0]);
    for r in identity_report(&l, &req).unwrap() {
        assert!(r.error.is_none(), "{:?}", r.error);
        assert!(r.rel_err <= 1e-8, "y = {}: {}", r.at, r.rel_err);
    }
    let req = IdentityRequest::new(Which::Second, 2, vec![3.0]);
    assert!(identity_report(&l, &req).unwrap()[0].rel_err <= 1e-8);
}

#[test]
fn second_identity_constant_form() {
    for (g, a) in [(group(3, 2), cx(0.7, -0.2)), (group(4, 3), cx(-1.3, 0.0))] {
        let l = constant_l(g, a);
        for y in [0.5, 2.0, 4.0] {
            let (lhs, _) = second_lhs(&l, y, 1, &budget()).unwrap();
            assert_eq!(lhs, cx(0.0, 0.0));
            let t = second_rhs_terms(&l, y, 1, &budget()).unwrap();
            let rhs = resum(&t.named());
            let scale = t.a0term.norm().max(t.gammapair.norm());
            assert!(rhs.norm() <= 1e-10 * scale, "{y}: {rhs}");
        }
    }
}

fn pole_rpf() -> RationalPeriodFunction {
    RationalPeriodFunction::new(
        vec![ZeroPoleTerm { r: 3, coeff: cx(0.3, -0.1) }, ZeroPoleTerm { r: 4, coeff: cx(-0.5, 0.2) }],
        vec![
            PoleBlock { alpha: 1.3, coeffs: vec![cx(0.4, 0.1), cx(-0.2, 0.3)] },
            PoleBlock { alpha: -0.8, coeffs: vec![cx(0.1, -0.6)] },
        ],
    )
}

#[test]
fn extra_term_vanishes() {
    let s = CoefficientSeries::new(cx(0.0, 0.0), vec![cx(0.0, 0.0); 4], 1.0, "zero").unwrap();
    let l = CompletedL::with_defaults(group(3, 2), s, pole_rpf()).unwrap();
    let y = y_lower_bound(&l) + 2.0;
    let t = second_rhs_terms(&l, y, 1, &budget()).unwrap();
    let scale = t.psi1.norm() + t.psi2.norm() + t.gammapair.norm();
    assert!(t.extra.norm() <= 1e-10 * scale, "{} vs {scale}", t.extra);
}

#[test]
fn request_validation_names_the_constraint() {
    let l = e4(200);
    let req = IdentityRequest::new(Which::First, 0, vec![2.5]);
    let e = identity_report(&l, &req).unwrap_err();
    assert!(alloc::format!("{e}").contains("rho"));
    let s = CoefficientSeries::new(cx(0.0, 0.0), vec![cx(0.0, 0.0); 4], 1.0, "zero").unwrap();
    let lp = CompletedL::with_defaults(group(3, 2), s, pole_rpf()).unwrap();
    let req = IdentityRequest::new(Which::Second, 1, vec![0.1]);
    assert!(req.validate(&lp).is_err());
    let req = IdentityRequest::new(Which::Second, 1, vec![]);
    assert!(identity_report(&lp, &req).unwrap().is_empty());
}

#[test]
fn scaling_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let coeffs: Vec<Complex64> = (0..40).map(|_| cx(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let s = CoefficientSeries::new(cx(0.5, 0.0), coeffs, 1.0, "rand").unwrap();
    let g = group(3, 2);
    let l1 = CompletedL::with_defaults(g, s.clone(), pole_rpf()).unwrap();
    let l2 = CompletedL::with_defaults(g, s.scaled(2.0), pole_rpf()).unwrap();
    let o = IdentityOptions::default();
    let a = first_rhs_terms(&l1, 3.5, 2, &o, &budget()).unwrap();
    let b = first_rhs_terms(&l2, 3.5, 2, &o, &budget()).unwrap();
    assert_eq!(b.lambda1, a.lambda1 * 2.0);
    assert_eq!(b.lambda2, a.lambda2 * 2.0);
    assert_eq!((b.lambda3, b.lambda4, b.lambda5), (a.lambda3, a.lambda4, a.lambda5));
    assert_eq!(riesz_lhs(&l2, 3.5, 2).unwrap(), riesz_lhs(&l1, 3.5, 2).unwrap() * 2.0);

    let y = y_lower_bound(&l1) + 1.0;
    let a = second_rhs_terms(&l1, y, 2, &budget()).unwrap();
    let b = second_rhs_terms(&l2, y, 2, &budget()).unwrap();
    assert_eq!(b.a0term, a.a0term * 2.0);
    assert_eq!(b.resolvent, a.resolvent * 2.0);
    assert_eq!((b.psi1, b.psi2, b.gammapair, b.extra), (a.psi1, a.psi2, a.gammapair, a.extra));
    assert_eq!(second_lhs(&l2, y, 2, &budget()).unwrap().0, second_lhs(&l1, y, 2, &budget()).unwrap().0 * 2.0);
}

fn kernel_l(k: u32, delta_strip: f64, rpf: RationalPeriodFunction) -> CompletedL {
    let g = group(3, k);
    let s = CoefficientSeries::new(cx(0.0, 0.0), vec![cx(1.0, 0.0), cx(-0.5, 0.0)], 1.0, "k").unwrap();
    let mut cfg = crate::lseries::ContinuationConfig::default_for(&g, &s);
    cfg.delta_strip = delta_strip;
    CompletedL::new(g, s, rpf, cfg).unwrap()
}

#[test]
fn kernel_examples() {
    let l = kernel_l(2, 5.55, pole_rpf());
    let p = KernelParams { r: Some(1), alpha: Some(1.0), rho: 0, y: 10.0, m: Some(1) };
    let r = verify_proof_kernels(&l, KernelSelector::L5, &p).unwrap();
    assert!(r.abs_err <= 1e-7 * (1.0 + r.closed.norm()), "{r:?}");

    let l = kernel_l(2, 4.55, pole_rpf());
    let p = KernelParams { r: Some(1), alpha: Some(1.0), rho: 1, y: 2.0, m: None };
    let r = verify_proof_kernels(&l, KernelSelector::Q1, &p).unwrap();
    assert!(r.abs_err <= 1e-6 * (1.0 + r.closed.norm()), "{r:?}");
}

#[test]
fn kernels_all_selectors() {
    let l = kernel_l(2, 4.55, pole_rpf());
    for sel in KernelSelector::ALL {
        for (r, alpha) in [(1, 1.0), (2, 0.7), (1, -1.4)] {
            let p = KernelParams { r: Some(r), alpha: Some(alpha), rho: 1, y: 12.0, m: Some(2) };
            let rep = verify_proof_kernels(&l, sel, &p).unwrap();
            assert!(rep.abs_err <= 1e-6 * (1.0 + rep.closed.norm()), "{} r={r} α={alpha}: {rep:?}", sel.name());
        }
        let p = KernelParams { r: None, alpha: None, rho: 1, y: 12.0, m: None };
        let rep = verify_proof_kernels(&l, sel, &p).unwrap();
        assert!(rep.abs_err <= 1e-6 * (1.0 + rep.closed.norm()), "{} summed: {rep:?}", sel.name());
    }
}

#[test]
fn kernels_vanish_for_empty_rpf() {
    let l = kernel_l(2, 4.55, RationalPeriodFunction::default());
    for sel in [KernelSelector::L5, KernelSelector::L6, KernelSelector::Q1, KernelSelector::Q2, KernelSelector::I1, KernelSelector::I2] {
        let p = KernelParams { r: None, alpha: None, rho: 1, y: 3.0, m: None };
        let rep = verify_proof_kernels(&l, sel, &p).unwrap();
        assert_eq!(rep.closed, cx(0.0, 0.0));
        assert_eq!(rep.numeric, cx(0.0, 0.0));
    }
    assert_eq!(KernelSelector::parse("q2"), Some(KernelSelector::Q2));
    assert_eq!(KernelSelector::parse("L9"), None);
}

