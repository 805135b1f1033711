//! Built-in verification suite: one row per check, no configuration.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use hecke_core::automorphic::{coeffs_delta, coeffs_eisenstein, CoefficientSeries};
use hecke_core::hecke::{
    check_t_relation, default_samples, GroupParam, HeckeGroup, PoleBlock, RationalPeriodFunction, ZeroPoleTerm,
};
use hecke_core::identities::{
    identity_report, perron_oracle, riesz_a0_term, riesz_lhs, verify_proof_kernels, IdentityRequest, KernelParams,
    KernelSelector, Which,
};
use hecke_core::lseries::{CompletedL, PoleSet};
use hecke_core::specialfn::{bessel_j, gamma, hyp1f1, EvalBudget};
use hecke_core::{Complex64, Error};

use crate::report::{Cell, Report};
use crate::run::fan_out;
use crate::LabError;

/// Apéry's constant `ζ(3)`.
const ZETA3: f64 = 1.202_056_903_159_594_3;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn group(p: u32, k: u32) -> Result<HeckeGroup, Error> {
    HeckeGroup::new(GroupParam::Finite(p), k)
}

/// A period function from the parametric family with random coefficients.
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

struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
    detail: String,
}

type Outcome = Result<(f64, String), Error>;

fn max_of(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn fe_grid(l: &CompletedL, sigma: [f64; 2]) -> Outcome {
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for i in 0..7 {
        for j in 0..7 {
            let s = cx(sigma[0] + (sigma[1] - sigma[0]) * i as f64 / 6.0, -3.0 + j as f64);
            match l.fe_residual(s) {
                Ok(v) => worst = max_of([worst, v]),
                Err(Error::PoleProximity { .. } | Error::GammaPole(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok((worst, format!("{skipped} grid points at poles skipped")))
}

fn e4(m: usize) -> Result<CompletedL, Error> {
    CompletedL::with_defaults(group(3, 2)?, coeffs_eisenstein(4, m)?, RationalPeriodFunction::default())
}

fn delta(m: usize) -> Result<CompletedL, Error> {
    CompletedL::with_defaults(group(3, 6)?, coeffs_delta(m)?, RationalPeriodFunction::default())
}

fn identity_max(l: &CompletedL, which: Which, rho: u32, grid: &[f64]) -> Outcome {
    let reps = identity_report(l, &IdentityRequest::new(which, rho, grid.to_vec()))?;
    if let Some(e) = reps.iter().find_map(|r| r.error.clone()) {
        return Err(e);
    }
    Ok((max_of(reps.iter().map(|r| r.rel_err)), format!("rho = {rho}, grid = {grid:?}")))
}

fn check_zeta() -> Outcome {
    let l = e4(400)?;
    let s = cx(6.0, 0.0);
    let zeta6 = PI.powi(6) / 945.0;
    let exact = (2.0 * PI).powi(-6) * 120.0 * 240.0 * zeta6 * ZETA3;
    let v = l.phi_continued(s)?;
    Ok(((v - exact).norm() / exact, format!("phi(6) = {v}")))
}

fn check_t_relations(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = default_samples(100);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let k = 1 + (i % 4) as u32;
        let p = 3 + (i % 5) as u32;
        let g = group(p, k)?;
        worst = max_of([worst, check_t_relation(&random_rpf(&mut rng, k), &g, &samples)?]);
    }
    Ok((worst, "20 random period functions, 100 samples each".into()))
}

fn check_symmetries(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut worst = 0.0f64;
    let mut configs = 0;
    while configs < 10 {
        let k = 1 + (configs % 3) as u32;
        let series = coeffs_eisenstein(4, 200)?.scaled(0.01);
        let Ok(l) = CompletedL::with_defaults(group(5, k)?, series, random_rpf(&mut rng, k)) else { continue };
        configs += 1;
        for _ in 0..20 {
            let s = cx(rng.gen_range(-1.5..5.5), rng.gen_range(0.3..3.0));
            let d = l.symmetry_defects(s)?;
            let scale = 1.0 + l.pieces(s)?.total().norm();
            worst = max_of([worst, max_of([d.d, d.d0, d.e0, d.eh, d.eb_minus_r].map(|v| v.norm() / scale))]);
        }
    }
    Ok((worst, "10 random configurations, 20 points each".into()))
}

fn check_residues(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut ls = vec![e4(400)?, delta(400)?];
    for i in 0..10 {
        let k = 1 + (i % 3) as u32;
        let a0 = rng.gen_range(-1.0..1.0);
        let s = CoefficientSeries::new(cx(a0, 0.0), vec![cx(0.0, 0.0); 4], 1.0, "a0")?;
        ls.push(CompletedL::with_defaults(group(5, k)?, s, random_rpf(&mut rng, k))?);
    }
    let mut worst = 0.0f64;
    for l in &ls {
        for set in PoleSet::ALL {
            worst = max_of([worst, l.residue_check(set, 0.25, 64)?.abs_error]);
        }
    }
    Ok((worst, "E4, Delta and 10 random configurations".into()))
}

fn check_perron() -> Outcome {
    let l = e4(400)?;
    let exact = riesz_lhs(&l, 5.5, 5)? - riesz_a0_term(&l, 5.5, 5)?;
    let p = perron_oracle(&l, 5.5, 5, 6.0, 150.0, 0.05)?;
    Ok(((p.value - exact).norm() / exact.norm(), format!("{} nodes", p.nodes)))
}

fn check_kernels() -> Outcome {
    let g = group(3, 2)?;
    let s = CoefficientSeries::new(cx(0.0, 0.0), vec![cx(1.0, 0.0), cx(-0.5, 0.0)], 1.0, "k")?;
    let rpf = RationalPeriodFunction::new(
        vec![ZeroPoleTerm { r: 3, coeff: cx(0.3, -0.1) }],
        vec![
            PoleBlock { alpha: 1.3, coeffs: vec![cx(0.4, 0.1), cx(-0.2, 0.3)] },
            PoleBlock { alpha: -0.8, coeffs: vec![cx(0.1, -0.6)] },
        ],
    );
    let mut cfg = hecke_core::lseries::ContinuationConfig::default_for(&g, &s);
    cfg.delta_strip = 4.55;
    let l = CompletedL::new(g, s, rpf, cfg)?;
    let mut worst = 0.0f64;
    for sel in KernelSelector::ALL {
        for p in [
            KernelParams { r: Some(1), alpha: Some(1.0), rho: 1, y: 12.0, m: Some(1) },
            KernelParams { r: None, alpha: None, rho: 1, y: 12.0, m: None },
        ] {
            worst = max_of([worst, verify_proof_kernels(&l, sel, &p)?.rel_err]);
        }
    }
    Ok((worst, "all kernels, single and summed".into()))
}

fn check_specialfn() -> Outcome {
    let b = EvalBudget::default();
    let mut worst = 0.0f64;
    for z in [cx(0.3, 0.4), cx(-2.7, 1.1), cx(0.5, -3.0)] {
        let lhs = gamma(z)? * gamma(1.0 - z)?;
        let rhs = PI / (z * PI).sin();
        worst = max_of([worst, (lhs - rhs).norm() / rhs.norm()]);
    }
    for x in [0.5, 3.0, 17.0] {
        let exact = (2.0 / (PI * x)).sqrt() * x.sin();
        worst = max_of([worst, (bessel_j(0.5, x, &b)? - exact).abs()]);
    }
    let (a, bb, z) = (cx(0.7, 0.2), cx(2.5, 0.0), cx(-1.5, 0.8));
    let k1 = hyp1f1(a, bb, z, &b)?;
    let k2 = z.exp() * hyp1f1(bb - a, bb, -z, &b)?;
    worst = max_of([worst, (k1 - k2).norm() / k1.norm()]);
    Ok((worst, "reflection, half-integer Bessel, Kummer".into()))
}

/// Runs the suite. `seed` drives the random configurations.
pub fn selfcheck(seed: u64, threads: usize) -> Result<Report, LabError> {
    let delta_big = delta(20000)?;
    let e4_big = e4(20000)?;
    let jobs: Vec<(&'static str, f64)> = vec![
        ("fe_e4_grid", 1e-8),
        ("fe_delta_grid", 1e-8),
        ("continuation_vs_zeta", 1e-9),
        ("first_identity_e4", 1e-6),
        ("first_identity_delta", 1e-6),
        ("second_identity_delta", 1e-8),
        ("second_identity_e4", 1e-8),
        ("rpf_t_relation", 1e-10),
        ("piece_symmetries", 1e-9),
        ("residues_vs_contours", 1e-7),
        ("perron_vs_riesz", 1e-3),
        ("proof_kernels", 1e-6),
        ("special_functions", 1e-12),
    ];
    let run_one = |name: &str| -> Outcome {
        match name {
            "fe_e4_grid" => fe_grid(&e4(400)?, [-1.0, 5.0]),
            "fe_delta_grid" => fe_grid(&delta(400)?, [-1.0, 13.0]),
            "continuation_vs_zeta" => check_zeta(),
            "first_identity_e4" => identity_max(&e4_big, Which::First, 5, &[2.5, 5.5, 10.5]),
            "first_identity_delta" => identity_max(&delta_big, Which::First, 2, &[3.5, 7.5]),
            "second_identity_delta" => identity_max(&delta_big, Which::Second, 1, &[1.0, 2.0, 5.0]),
            "second_identity_e4" => identity_max(&e4_big, Which::Second, 1, &[2.0, 3.0]),
            "rpf_t_relation" => check_t_relations(seed),
            "piece_symmetries" => check_symmetries(seed),
            "residues_vs_contours" => check_residues(seed),
            "perron_vs_riesz" => check_perron(),
            "proof_kernels" => check_kernels(),
            "special_functions" => check_specialfn(),
            _ => unreachable!(),
        }
    };
    let results = fan_out(&jobs, threads, |(name, _)| run_one(name));
    let mut rep = Report::new("selfcheck", &["check", "value", "tol", "status"], f64::NAN);
    for ((name, tol), r) in jobs.iter().zip(results) {
        let c = match r {
            Ok((value, detail)) => Check { name, value, tol: *tol, detail },
            Err(e) => Check { name, value: f64::NAN, tol: *tol, detail: format!("error: {e}") },
        };
        let ok = c.value <= c.tol;
        if !ok {
            rep.breaches += 1;
        }
        rep.rows.push(vec![
            Cell::Text(c.name.into()),
            Cell::Num(c.value),
            Cell::Num(c.tol),
            Cell::Text(if ok { "pass" } else { "fail" }.into()),
        ]);
        rep.diagnostics.push(json!({ "check": c.name, "detail": c.detail }));
    }
    Ok(rep)
}
