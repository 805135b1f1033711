//! Subcommand dispatch.

use std::path::PathBuf;
use std::thread;

use serde_json::{json, Value};

use hecke_core::identities::{identity_report, verify_proof_kernels, IdentityReport, KernelParams, KernelSelector};
use hecke_core::lseries::{CompletedL, PoleSet};
use hecke_core::{Complex64, Error};

use crate::config::{CheckSpec, RunConfig};
use crate::report::{emit_report, Cell, Report};
use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    VerifyFe,
    VerifyFirst,
    VerifySecond,
    Residues,
    Kernels,
    Selfcheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyFe => "verify-fe",
            Command::VerifyFirst => "verify-first",
            Command::VerifySecond => "verify-second",
            Command::Residues => "residues",
            Command::Kernels => "kernels",
            Command::Selfcheck => "selfcheck",
        }
    }

    /// The `check.type` a configuration must carry for this command.
    pub fn check_type(self) -> Option<&'static str> {
        match self {
            Command::VerifyFe => Some("fe"),
            Command::VerifyFirst => Some("first"),
            Command::VerifySecond => Some("second"),
            Command::Residues => Some("residues"),
            Command::Kernels => Some("kernels"),
            Command::Selfcheck => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out: PathBuf,
    pub tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub seed: Option<u64>,
    pub threads: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            out: PathBuf::from("."),
            tol: None,
            max_terms: None,
            seed: None,
            threads: thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub csv: PathBuf,
    pub json: PathBuf,
}

impl Outcome {
    /// 0 when every row is within tolerance, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            2
        }
    }
}

/// Evaluates `f` on every item, spread over `threads` scoped workers, and
/// returns the results in input order.
pub fn fan_out<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let f = &f;
    thread::scope(|sc| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| sc.spawn(move || c.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Runs a configured check and writes its report.
pub fn run(cmd: Command, config: &RunConfig, opts: &RunOptions) -> Result<Outcome, LabError> {
    let want = cmd.check_type().ok_or_else(|| LabError::invalid("selfcheck takes no configuration"))?;
    if config.check.name() != want {
        return Err(LabError::invalid(format!(
            "{} needs check.type = \"{want}\", found \"{}\"",
            cmd.name(),
            config.check.name()
        )));
    }
    let mut config = config.clone();
    if let Some(t) = opts.tol {
        config.check.set_tol(t);
    }
    let l = config.build(opts.max_terms)?;
    let report = match cmd {
        Command::VerifyFe => fe_report(&l, &config.check, opts),
        Command::VerifyFirst | Command::VerifySecond => identity_table(&l, &config, opts)?,
        Command::Residues => residue_report(&l, &config.check),
        Command::Kernels => kernel_report(&l, &config.check, opts)?,
        Command::Selfcheck => unreachable!(),
    };
    let (csv, json) = emit_report(&report, Some(&config), opts.seed, &opts.out, cmd.name())?;
    Ok(Outcome { report, csv, json })
}

fn linspace(a: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a[0] + a[1])];
    }
    (0..n).map(|i| a[0] + (a[1] - a[0]) * i as f64 / (n - 1) as f64).collect()
}

fn is_pole(e: &Error) -> bool {
    matches!(e, Error::PoleProximity { .. } | Error::GammaPole(_) | Error::ParameterPole { .. })
}

fn fe_report(l: &CompletedL, check: &CheckSpec, opts: &RunOptions) -> Report {
    let CheckSpec::Fe { sigma, t, n, tol } = check else { unreachable!() };
    let two_k = l.group().weight() as f64;
    let sigma = sigma.unwrap_or([-1.0, two_k + 1.0]);
    let mut pts = Vec::new();
    for &sg in &linspace(sigma, *n) {
        for &tt in &linspace(*t, *n) {
            pts.push(Complex64::new(sg, tt));
        }
    }
    let res = fan_out(&pts, opts.threads, |s| l.fe_residual(*s));
    let mut rep = Report::new("verify-fe", &["sigma", "t", "residual", "status"], *tol);
    for (s, r) in pts.iter().zip(res) {
        let (val, status, diag) = match r {
            Ok(v) => {
                let ok = v <= *tol;
                if !ok {
                    rep.breaches += 1;
                }
                (v, if ok { "ok" } else { "breach" }, Value::Null)
            }
            Err(e) if is_pole(&e) => (f64::NAN, "pole", json!({ "skipped": e.to_string() })),
            Err(e) => {
                rep.breaches += 1;
                (f64::NAN, "error", json!({ "error": e.to_string() }))
            }
        };
        rep.rows.push(vec![Cell::Num(s.re), Cell::Num(s.im), Cell::Num(val), Cell::Text(status.into())]);
        rep.diagnostics.push(json!({ "s": [s.re, s.im], "detail": diag }));
    }
    rep
}

fn identity_table(l: &CompletedL, config: &RunConfig, opts: &RunOptions) -> Result<Report, LabError> {
    let req = config.identity_request(opts.max_terms).expect("identity check");
    let tol = config.check.tol();
    let points: Vec<f64> = req.grid.clone();
    let per_point = fan_out(&points, opts.threads, |&g| {
        let mut r = req.clone();
        r.grid = vec![g];
        identity_report(l, &r).map(|mut v| v.remove(0))
    });
    let reps: Vec<IdentityReport> = per_point.into_iter().collect::<Result<_, _>>()?;
    let first = matches!(config.check, CheckSpec::First { .. });
    let (cmd, names, at, counts): (&str, &[&str], &str, &[&str]) = if first {
        (
            "verify-first",
            &["Lambda1", "Lambda2", "Lambda3", "Lambda4", "Lambda5"],
            "x",
            &["bessel"],
        )
    } else {
        (
            "verify-second",
            &["a0term", "resolvent", "psi1", "psi2", "gammapair", "extra"],
            "y",
            &["lhs", "resolvent"],
        )
    };
    let mut header: Vec<String> = vec![at.into(), "lhs_re".into(), "lhs_im".into()];
    for n in names {
        let short = if first { n.replace("Lambda", "L") } else { n.to_string() };
        header.push(format!("{short}_re"));
        header.push(format!("{short}_im"));
    }
    for h in ["rhs_re", "rhs_im", "abs_err", "rel_err"] {
        header.push(h.into());
    }
    for c in counts {
        header.push(if first { "bessel_terms_used".into() } else { format!("{c}_terms_used") });
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rep = Report::new(cmd, &header_refs, tol);
    for r in &reps {
        let mut row = vec![Cell::Num(r.at), Cell::Num(r.lhs.re), Cell::Num(r.lhs.im)];
        for n in names {
            let v = r.term(n).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            row.push(Cell::Num(v.re));
            row.push(Cell::Num(v.im));
        }
        row.extend([
            Cell::Num(r.rhs_total.re),
            Cell::Num(r.rhs_total.im),
            Cell::Num(r.abs_err),
            Cell::Num(r.rel_err),
        ]);
        for c in counts {
            let used = r.terms_used.iter().find(|(k, _)| k == c).map_or(0, |(_, v)| *v);
            row.push(Cell::Int(used as u64));
        }
        if r.error.is_some() || !(r.rel_err <= tol) {
            rep.breaches += 1;
        }
        rep.rows.push(row);
        rep.diagnostics.push(json!({
            "at": r.at,
            "rho": r.rho,
            "terms_used": r.terms_used.iter().map(|(k, v)| json!({ "name": k, "count": v })).collect::<Vec<_>>(),
            "notes": r.notes,
            "warnings": r.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "error": r.error.as_ref().map(|e| e.to_string()),
        }));
    }
    Ok(rep)
}

fn residue_report(l: &CompletedL, check: &CheckSpec) -> Report {
    let CheckSpec::Residues { radius, n, tol } = check else { unreachable!() };
    let mut rep = Report::new(
        "residues",
        &["set", "closed_re", "closed_im", "contour_re", "contour_im", "abs_err", "points"],
        *tol,
    );
    for set in PoleSet::ALL {
        match l.residue_check(set, *radius, *n) {
            Ok(c) => {
                if !(c.abs_error <= *tol) {
                    rep.breaches += 1;
                }
                rep.rows.push(vec![
                    Cell::Text(set.name().into()),
                    Cell::Num(c.closed_form.re),
                    Cell::Num(c.closed_form.im),
                    Cell::Num(c.contour.re),
                    Cell::Num(c.contour.im),
                    Cell::Num(c.abs_error),
                    Cell::Int(c.points.len() as u64),
                ]);
                rep.diagnostics.push(json!({
                    "set": set.name(),
                    "points": c.points,
                    "closed_form_extended": [c.closed_form_extended.re, c.closed_form_extended.im],
                    "limit_h": c.limit_h,
                    "limit_b": c.limit_b,
                }));
            }
            Err(e) => {
                rep.breaches += 1;
                let nan = Cell::Num(f64::NAN);
                rep.rows.push(vec![
                    Cell::Text(set.name().into()),
                    nan.clone(),
                    nan.clone(),
                    nan.clone(),
                    nan.clone(),
                    nan,
                    Cell::Int(0),
                ]);
                rep.diagnostics.push(json!({ "set": set.name(), "error": e.to_string() }));
            }
        }
    }
    rep
}

fn kernel_report(l: &CompletedL, check: &CheckSpec, opts: &RunOptions) -> Result<Report, LabError> {
    let CheckSpec::Kernels { selectors, r, alpha, rho, y, m, tol } = check else { unreachable!() };
    let sels: Vec<KernelSelector> = match selectors {
        Some(v) => v.iter().filter_map(|s| KernelSelector::parse(s)).collect(),
        None => KernelSelector::ALL.to_vec(),
    };
    let params = KernelParams { r: *r, alpha: *alpha, rho: *rho, y: *y, m: *m };
    let res = fan_out(&sels, opts.threads, |s| verify_proof_kernels(l, *s, &params));
    let mut rep = Report::new(
        "kernels",
        &["kernel", "closed_re", "closed_im", "numeric_re", "numeric_im", "abs_err", "rel_err"],
        *tol,
    );
    for (s, r) in sels.iter().zip(res) {
        match r {
            Ok(k) => {
                if !(k.rel_err <= *tol) {
                    rep.breaches += 1;
                }
                rep.rows.push(vec![
                    Cell::Text(s.name().into()),
                    Cell::Num(k.closed.re),
                    Cell::Num(k.closed.im),
                    Cell::Num(k.numeric.re),
                    Cell::Num(k.numeric.im),
                    Cell::Num(k.abs_err),
                    Cell::Num(k.rel_err),
                ]);
                rep.diagnostics.push(json!({ "kernel": s.name() }));
            }
            Err(e) => {
                rep.breaches += 1;
                let nan = Cell::Num(f64::NAN);
                let mut row = vec![Cell::Text(s.name().into())];
                row.extend(std::iter::repeat(nan).take(6));
                rep.rows.push(row);
                rep.diagnostics.push(json!({ "kernel": s.name(), "error": e.to_string() }));
            }
        }
    }
    Ok(rep)
}
