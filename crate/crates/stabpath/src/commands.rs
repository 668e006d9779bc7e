//! Subcommand implementations. Each returns the exit code on success paths
//! (0, or 2 for a boundary case that still produced artifacts).

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Deserialize;

use stabpath_core::bessel::{i0, k0, k01, k0_plus, k0_plus_prime};
use stabpath_core::cmath::{c64, I};
use stabpath_core::contour::{linebundle_charge, skyscraper_charge};
use stabpath_core::curves::{canonical_path, first_exit, path_tau, safe_path};
use stabpath_core::grid::{geometric, linear};
use stabpath_core::gw_model::{admissible_classes, builtin_p1, validate_model, TruncationParams};
use stabpath_core::linalg::{mat_pow_t, CMatrix};
use stabpath_core::mutation::{braid_apply, classes_up_to_sign, parse_word};
use stabpath_core::ode::{Gauged, OdeOptions};
use stabpath_core::qde::{
    asymptotic_spectrum, growth_rate_log, integrate_modified_with, integrate_raw_with, FundamentalSolution,
};
use stabpath_core::sod::{
    build_sod, cluster_and_order, fit_log_asymptotics, lift_log_samples, phase_witness, ratio_min, spanning_check,
    AsymptoticFit, ChargeSeries, FitOptions, SpanCandidate,
};
use stabpath_core::stab_p1::{
    bessel_fundamental_solution, eventual_objects, glue_check, line_bundle_class, qde_path, PathP1,
};
use stabpath_core::Error;

use crate::cli::{
    Cli, Command, ContourArgs, ContourKindArg, CurvePathArgs, FitArgs, GaugeArg, InitialArg, MutateArgs, P1PathArgs,
    QdeArgs, SodFromTraceArgs, ValidateModelArgs,
};
use crate::decomposition_file::{self, DecompositionFile};
use crate::failure::{exit, read_error, write_error, CmdResult, Failure};
use crate::model_file::{load_model, ModelFile};
use crate::report::{
    cvec, ContourReport, CurveSummary, GlueSummary, ModelReport, MutationSummary, P1Summary, QdeSummary, SodReport,
    SweepEntry,
};
use crate::trace::{
    curve_rows, p1_rows, qde_samples, read_qde_trace, write_json, write_qde_trace, write_rows, GlueRow,
};

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult<i32> {
    fs::create_dir_all(&cli.output_dir).map_err(|e| write_error(&cli.output_dir, e))?;
    let ctx = Ctx {
        dir: cli.output_dir.clone(),
        format: cli.format,
    };
    match &cli.command {
        Command::P1Path(a) => p1_path(&ctx, a),
        Command::CurvePath(a) => curve_path(&ctx, a),
        Command::Qde(a) => qde(&ctx, a),
        Command::Contour(a) => contour(&ctx, a),
        Command::Mutate(a) => mutate(&ctx, a),
        Command::ValidateModel(a) => validate(&ctx, a),
        Command::SodFromTrace(a) => sod_from_trace(&ctx, a),
    }
}

struct Ctx {
    dir: PathBuf,
    format: crate::trace::Format,
}

impl Ctx {
    fn json<T: serde::Serialize + ?Sized>(&self, name: &str, value: &T) -> CmdResult<PathBuf> {
        let path = self.dir.join(name);
        write_json(&path, value)?;
        Ok(path)
    }
}

fn note(path: &Path) {
    println!("wrote {}", path.display());
}

fn fit_options(f: &FitArgs) -> CmdResult<FitOptions> {
    if !(f.fit_tol > 0.0) || !(f.cluster_tol > 0.0) || !(f.rate_tol >= 0.0) {
        return Err(Failure::input("tolerances must be positive"));
    }
    Ok(FitOptions {
        fit_tol: f.fit_tol,
        inverse_t: !f.no_inverse_t,
        sqrt_t: f.sqrt_t,
    })
}

fn grid_geometric(t0: f64, t1: f64, points: usize) -> CmdResult<Vec<f64>> {
    if points < 16 {
        return Err(Failure::input("grids need at least 16 points"));
    }
    if !(t0 > 0.0) {
        return Err(Failure::input("t0 must be positive"));
    }
    Ok(geometric(t0, t1, points)?)
}

/// Outcome of clustering: a finished report, or a genericity violation.
enum SodOutcome {
    Done(SodReport),
    NonGeneric(SodReport, String),
}

/// Clusters, builds the SOD and runs the spanning check against `phi`
/// (sampled on the same grid as the series).
fn sod_pipeline(
    fits: &[AsymptoticFit],
    series: &[ChargeSeries],
    phi: &[Gauged],
    to_frame: Option<&CMatrix>,
    r_values: Option<&[f64]>,
    fit: &FitArgs,
) -> CmdResult<SodOutcome> {
    if let Some(f) = fits.iter().find(|f| !f.accepted) {
        return Err(Failure::Internal(format!(
            "sod: fit for {} not accepted (residual {:.3e}, quasi-convergent {})",
            f.label, f.residual_sup, f.quasi_convergent
        )));
    }
    let sk = match cluster_and_order(fits, fit.cluster_tol) {
        Ok(sk) => sk,
        Err(Error::Genericity { first, second }) => {
            let msg = Error::Genericity {
                first: first.clone(),
                second: second.clone(),
            }
            .to_string();
            return Ok(SodOutcome::NonGeneric(
                SodReport::non_generic(fits, fit.cluster_tol, first, second),
                msg,
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let mut sod = build_sod(&sk, fits, series)?;
    let t = &series[0].t;
    let candidates: Vec<SpanCandidate> = fits
        .iter()
        .zip(series)
        .map(|(f, s)| {
            let class_v = to_frame.map_or_else(|| f.class_v.clone(), |m| m.apply(&f.class_v));
            let s = ChargeSeries {
                class_v: class_v.clone(),
                ..s.clone()
            };
            SpanCandidate {
                label: f.label.clone(),
                class_v,
                alpha: f.alpha,
                ratio_min: ratio_min(&s, phi),
            }
        })
        .collect();
    let mut rs: Vec<f64> = match r_values {
        Some(r) => r.to_vec(),
        None => sod.clusters.iter().map(|c| c.alpha.re).collect(),
    };
    rs.sort_by(|a, b| a.total_cmp(b));
    rs.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    for r in rs {
        sod.spanning.push(spanning_check(t, phi, &candidates, r, fit.rate_tol)?);
    }
    let witness = phase_witness(&sod, series);
    Ok(SodOutcome::Done(SodReport::from_result(
        &sod,
        fits,
        fit.cluster_tol,
        Some(witness),
    )))
}

struct P1Result {
    path: PathP1,
    /// `None` for the boundary case.
    sod: Option<SodOutcome>,
}

fn p1_pipeline(b: Complex64, a: Complex64, t: &[f64], fit: &FitArgs) -> CmdResult<P1Result> {
    let opts = fit_options(fit)?;
    let path = qde_path(b, a, t).map_err(|e| match e {
        Error::Overflow { .. } => Failure::input(format!("{e}; lower --t1")),
        e => e.into(),
    })?;
    if path.boundary_case {
        return Ok(P1Result { path, sod: None });
    }
    let t1 = t[t.len() - 1];
    if let Some(t_star) = path.eventual_t_star.filter(|&ts| t1 < 100.0 * ts) {
        return Err(Failure::input(format!(
            "the eventual regime starts at t* = {t_star:.4}; the fits need t1 >= 100 t*, increase --t1"
        )));
    }
    let objs = match eventual_objects(&path) {
        Ok(o) => o,
        Err(Error::NoEventualRegime) => {
            return Err(Failure::input(format!(
                "stab_p1: the path does not reach Im phi > pi by t1 = {}; increase --t1",
                t[t.len() - 1]
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let series: Vec<ChargeSeries> = objs.iter().map(|o| o.series.clone()).collect();
    let fits: Vec<AsymptoticFit> = series
        .iter()
        .map(|s| fit_log_asymptotics(s, &opts))
        .collect::<Result<_, _>>()?;
    // Closed-form solutions on the tail, in the modified gauge and in the
    // frame O(k-1), O(k). Integrating forward, or using the lattice frame,
    // would bury the decaying solution under rounding from the growing one.
    let (_, k) = stabpath_core::stab_p1::kappa_and_chart(b, a);
    let frame = CMatrix::from_fn(2, |i, j| line_bundle_class(k - 1 + j as i64)[i]);
    let to_frame = frame.inverse()?;
    let phi: Vec<Gauged> = series[0]
        .t
        .iter()
        .map(|&t| charge_frame(b, a, t))
        .collect::<CmdResult<_>>()?;
    let sod = sod_pipeline(&fits, &series, &phi, Some(&to_frame), None, fit)?;
    Ok(P1Result { path, sod: Some(sod) })
}

/// `t^mu Phi_t P` with `P = [v(O(k-1)), v(O(k))]`: columns `(-t Z'/(2 e^b), Z)`
/// for the charges of `O(k-1)` and `O(k)`, each evaluated without cancellation.
fn charge_frame(b: Complex64, a: Complex64, t: f64) -> CmdResult<Gauged> {
    let (kappa, _) = stabpath_core::stab_p1::kappa_and_chart(b, a);
    let u = kappa * t;
    let (k0v, k1v) = k01(u)?;
    let cols = [
        (k0v.value, -kappa * k1v.value),
        (k0_plus(u)?, kappa * k0_plus_prime(u)?),
    ];
    let f = -t / (2.0 * b.exp());
    let raw = CMatrix::from_fn(2, |i, j| if i == 0 { f * cols[j].1 } else { cols[j].0 });
    let m = &mat_pow_t(&builtin_p1(a).mu_c(), t)? * &raw;
    let s = m.max_abs();
    if !(s > 0.0) || !m.is_finite() {
        return Err(Failure::Internal(format!(
            "fundamental solution under- or overflows at t = {t}; lower --t1"
        )));
    }
    Ok(Gauged {
        phi: m.scale_re(1.0 / s),
        log_scale: s.ln(),
    })
}

fn p1_summary(p: &PathP1) -> P1Summary {
    P1Summary {
        b: p.b.into(),
        a: p.a.into(),
        kappa: p.kappa.into(),
        chart_k: p.chart_k,
        boundary_case: p.boundary_case,
        eventual_t_star: p.eventual_t_star,
        meets_slope_strip: p.meets_slope_strip,
        asymptotic_constant: p.asymptotic_constant.into(),
        asymptotic_defect: p.asymptotic_defect,
        asymptotic_law_holds: p.asymptotic_law_holds(),
        samples: p.samples.len(),
    }
}

const GLUE_TOL: f64 = 1e-9;

fn p1_path(ctx: &Ctx, args: &P1PathArgs) -> CmdResult<i32> {
    if args.verify_glue {
        let s = linear(-3.0, 3.0, 100)?;
        let rows: Vec<GlueRow> = s
            .iter()
            .map(|&s| glue_check(s).map(|residual| GlueRow { s, residual }))
            .collect::<Result<_, _>>()?;
        let max = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        note(&write_rows(&ctx.dir, "glue", ctx.format, &rows)?);
        let summary = GlueSummary {
            points: rows.len(),
            s_min: -3.0,
            s_max: 3.0,
            max_residual: max,
            tolerance: GLUE_TOL,
            passed: max < GLUE_TOL,
        };
        note(&ctx.json("glue_summary.json", &summary)?);
        println!("gluing identity on 100 points of [-3, 3]: max residual {max:.3e}");
        return if summary.passed {
            Ok(exit::SUCCESS)
        } else {
            Err(Failure::Internal(format!(
                "gluing residual {max:.3e} exceeds {GLUE_TOL:e}"
            )))
        };
    }
    let t = grid_geometric(args.t0, args.t1, args.points)?;
    let b = args.b + I * args.phase;
    if let Some(list) = &args.sweep_phases {
        return p1_sweep(ctx, args, &t, list);
    }
    let res = p1_pipeline(b, args.a, &t, &args.fit)?;
    note(&write_rows(&ctx.dir, "p1_path", ctx.format, &p1_rows(&res.path))?);
    note(&ctx.json("path_summary.json", &p1_summary(&res.path))?);
    let p = &res.path;
    println!(
        "kappa = {:.6}, chart k = {}, eventual t* = {}",
        p.kappa,
        p.chart_k,
        p.eventual_t_star.map_or("none".into(), |t| format!("{t:.4}"))
    );
    match res.sod {
        None => {
            println!("boundary case: kappa is real, the path converges only in a partial compactification; no SOD");
            Ok(exit::BOUNDARY)
        }
        Some(SodOutcome::NonGeneric(report, msg)) => {
            note(&ctx.json("sod.json", &report)?);
            println!("{msg}");
            Ok(exit::BOUNDARY)
        }
        Some(SodOutcome::Done(report)) => {
            note(&ctx.json("sod.json", &report)?);
            print_sod(&report);
            Ok(exit::SUCCESS)
        }
    }
}

fn print_sod(r: &SodReport) {
    for (i, c) in r.clusters.iter().enumerate() {
        let labels: Vec<&str> = c.members.iter().map(|m| m.label.as_str()).collect();
        println!(
            "cluster {}: alpha = {:.6}{:+.6}i, members {}",
            i + 1,
            c.alpha.re,
            c.alpha.im,
            labels.join(", ")
        );
    }
    for s in &r.spanning {
        println!(
            "spanning at r = {:.4}: dim F = {}, span = {}, {}",
            s.r, s.dim_f, s.dim_span, s.status
        );
    }
}

fn p1_sweep(ctx: &Ctx, args: &P1PathArgs, t: &[f64], list: &str) -> CmdResult<i32> {
    let phases = crate::parse::real_list(list).map_err(Failure::Input)?;
    if phases.is_empty() {
        return Err(Failure::input("--sweep-phases is empty"));
    }
    let entries: Vec<SweepEntry> = phases
        .par_iter()
        .map(|&phase| {
            let b = args.b + I * (args.phase + phase);
            let (kappa, k) = stabpath_core::stab_p1::kappa_and_chart(b, args.a);
            let mut e = SweepEntry {
                phase,
                kappa: kappa.into(),
                chart_k: k,
                status: String::new(),
                alphas: Vec::new(),
                labels: Vec::new(),
                spanning: Vec::new(),
            };
            // the boundary case needs no path; it may leave the double range first
            let boundary = kappa.im.abs() <= 1e-12 * kappa.norm();
            if boundary {
                e.status = "boundary".into();
                return e;
            }
            match p1_pipeline(b, args.a, t, &args.fit) {
                Ok(P1Result { sod: None, .. }) => e.status = "boundary".into(),
                Ok(P1Result {
                    sod: Some(SodOutcome::NonGeneric(..)),
                    ..
                }) => e.status = "non-generic".into(),
                Ok(P1Result {
                    sod: Some(SodOutcome::Done(r)),
                    ..
                }) => {
                    e.status = "ok".into();
                    e.alphas = r.clusters.iter().map(|c| c.alpha).collect();
                    e.labels = r
                        .clusters
                        .iter()
                        .map(|c| c.members.iter().map(|m| m.label.clone()).collect())
                        .collect();
                    e.spanning = r.spanning.iter().map(|s| s.status).collect();
                }
                Err(f) => e.status = format!("error (exit {}): {f}", f.code()),
            }
            e
        })
        .collect();
    note(&ctx.json("sweep.json", &entries)?);
    for e in &entries {
        println!("phase {:.6}: {}", e.phase, e.status);
    }
    Ok(exit::SUCCESS)
}

fn curve_path(ctx: &Ctx, args: &CurvePathArgs) -> CmdResult<i32> {
    if args.genus == 0 {
        return Err(Failure::input("curve-path needs genus >= 1; use p1-path for genus 0"));
    }
    if args.points < 2 || !(args.s1 > 0.0) {
        return Err(Failure::input("curve-path needs s1 > 0 and at least 2 points"));
    }
    let s = linear(0.0, args.s1, args.points)?;
    let (path, exit_s) = if args.canonical {
        (canonical_path(args.genus, args.theta, &s)?, None)
    } else {
        let p = match args.a_param {
            None => safe_path(args.genus, args.theta, args.tau0, args.tau_inf, &s)?,
            Some(a) => path_tau(args.genus, args.theta, a, args.tau0, args.tau_inf, &s)?,
        };
        let ex = if args.genus >= 2 {
            first_exit(args.theta, p.a_param, args.tau0, args.tau_inf)
        } else {
            None
        };
        (p, ex)
    };
    note(&write_rows(&ctx.dir, "curve_path", ctx.format, &curve_rows(&path))?);
    let &(last_s, last_tau) = path
        .samples
        .last()
        .ok_or_else(|| Failure::Internal("empty path".into()))?;
    let summary = CurveSummary {
        genus: path.g,
        theta: path.theta,
        a_param: path.a_param.into(),
        tau0: path.tau0.into(),
        tau_inf: path.tau_inf.into(),
        lifts: path.lifts,
        lifts_on_grid: path.lifts_on_grid,
        converges_to_tau_inf: path.converges_to_tau_inf,
        limit_is_boundary: path.limit_is_boundary,
        filtration: path.filtration,
        first_exit: exit_s,
        last_s,
        last_tau: last_tau.into(),
    };
    note(&ctx.json("curve_summary.json", &summary)?);
    println!(
        "genus {}: tau({last_s:.3e}) = {last_tau:.6e}, lifts = {}, converges to tau_inf = {}",
        path.g, path.lifts, path.converges_to_tau_inf
    );
    if let Some(f) = path.filtration {
        println!("output: {f}");
    }
    Ok(exit::SUCCESS)
}

fn qde(ctx: &Ctx, args: &QdeArgs) -> CmdResult<i32> {
    let model = load_model(&args.model, args.a)?;
    let report = validate_model(&model);
    if !report.passed() {
        let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::input(format!("model fails validation: {}", v.join("; "))));
    }
    let params = match args.b {
        Some(b) => TruncationParams::from_b(b),
        None => TruncationParams::new(args.z, args.scale_omega)?,
    };
    let params = TruncationParams {
        scale_omega: args.scale_omega,
        ..params
    };
    let t = grid_geometric(args.t0, args.t1, args.points)?;
    let phi0 = match args.initial {
        InitialArg::Identity => CMatrix::identity(model.n()),
        InitialArg::Bessel => {
            if args.model != "p1" {
                return Err(Failure::input("--initial bessel needs --model p1"));
            }
            // z = e^{-b}
            let b = -params.z.ln();
            let raw = bessel_fundamental_solution(b, args.a, t[0])?;
            match args.gauge {
                GaugeArg::Raw => raw,
                GaugeArg::Modified => &mat_pow_t(&model.mu_c(), t[0])? * &raw,
            }
        }
    };
    if !(args.rtol > 0.0) {
        return Err(Failure::input("rtol must be positive"));
    }
    let opts = OdeOptions {
        rtol: args.rtol,
        ..OdeOptions::default()
    };
    let sol: FundamentalSolution = match args.gauge {
        GaugeArg::Raw => integrate_raw_with(&model, &params, &phi0, &t, &opts)?,
        GaugeArg::Modified => integrate_modified_with(&model, &params, &phi0, &t, &opts)?,
    };
    let rows = qde_samples(&t, &sol.samples);
    note(&write_qde_trace(&ctx.dir, "qde_trace", ctx.format, model.n(), &rows)?);
    let spec = asymptotic_spectrum(&model, &params)?;
    let n = model.n();
    let rates: Vec<f64> = (0..n)
        .map(|j| {
            let mut e = vec![c64(0.0, 0.0); n];
            e[j] = c64(1.0, 0.0);
            growth_rate_log(&t, &sol.log_norms(&e)).map(|r| r.rate)
        })
        .collect::<Result<_, _>>()
        .or_else(|e| match e {
            // short grids: report no rates rather than fail
            Error::InvalidInput(_) => Ok(Vec::new()),
            e => Err(e),
        })?;
    let summary = QdeSummary {
        model: args.model.clone(),
        z: params.z.into(),
        scale_omega: params.scale_omega,
        gauge: match args.gauge {
            GaugeArg::Raw => "raw",
            GaugeArg::Modified => "modified",
        },
        initial: match args.initial {
            InitialArg::Identity => "identity",
            InitialArg::Bessel => "bessel",
        },
        t0: t[0],
        t1: t[t.len() - 1],
        points: t.len(),
        asymptotic_eigenvalues: cvec(&spec.eigenvalues),
        ramification: spec.ramification,
        column_growth_rates: rates,
        min_det_ratio: sol.min_det_ratio(),
        accepted_steps: sol.stats.accepted,
        rejected_steps: sol.stats.rejected,
        rescalings: sol.stats.rescalings,
    };
    note(&ctx.json("qde_summary.json", &summary)?);
    let ev: Vec<String> = spec.eigenvalues.iter().map(|z| format!("{z:.6}")).collect();
    println!("asymptotic eigenvalues: {}", ev.join(", "));
    if !summary.column_growth_rates.is_empty() {
        let r: Vec<String> = summary.column_growth_rates.iter().map(|r| format!("{r:.5}")).collect();
        println!("column growth rates: {}", r.join(", "));
    }
    Ok(exit::SUCCESS)
}

fn contour(ctx: &Ctx, args: &ContourArgs) -> CmdResult<i32> {
    let (kappa, t) = match args.kappa_t {
        Some(u) => (u, 1.0),
        None => (args.kappa, args.t),
    };
    if kappa.norm() == 0.0 && args.kind == ContourKindArg::Line {
        return Err(Failure::input("the line bundle contour needs kappa t != 0"));
    }
    let u = kappa * t;
    let (kind, theta, v, oracle) = match args.kind {
        ContourKindArg::Point => ("unit_circle", None, skyscraper_charge(kappa, t)?, I * PI * i0(u).value),
        ContourKindArg::Line => {
            let theta = args.theta.unwrap_or(2.0 * kappa.arg());
            (
                "c_theta",
                Some(theta),
                linebundle_charge(kappa, t, theta)?,
                k0(u)?.value,
            )
        }
    };
    let report = ContourReport {
        kind,
        kappa: kappa.into(),
        t,
        theta,
        value: v.value.into(),
        oracle: oracle.into(),
        abs_diff: (v.value - oracle).norm(),
        est_error: v.est_error,
        evaluations: v.evaluations,
        cutoff: theta.map(|_| v.cutoff),
    };
    note(&ctx.json("contour.json", &report)?);
    println!(
        "{kind}: value {:.15e}, Bessel oracle {:.15e}, |diff| {:.2e}",
        v.value, oracle, report.abs_diff
    );
    Ok(exit::SUCCESS)
}

fn mutate(ctx: &Ctx, args: &MutateArgs) -> CmdResult<i32> {
    let dec = match (&args.file, &args.builtin) {
        (Some(f), _) => decomposition_file::load(f)?,
        (None, Some(b)) => decomposition_file::builtin(b)?,
        (None, None) => return Err(Failure::input("mutate needs --file or --builtin")),
    };
    let word = parse_word(&args.word)?;
    let out = braid_apply(&dec, &word)?;
    note(&ctx.json("decomposition.json", &DecompositionFile::from_lattice(&out))?);
    let summary = MutationSummary {
        word: stabpath_core::mutation::format_word(&word),
        classes_up_to_sign: classes_up_to_sign(&out),
    };
    note(&ctx.json("mutation_summary.json", &summary)?);
    for (i, s) in out.summands.iter().enumerate() {
        println!("summand {}: {:?}", i + 1, s);
    }
    Ok(exit::SUCCESS)
}

fn validate(ctx: &Ctx, args: &ValidateModelArgs) -> CmdResult<i32> {
    let model = load_model(&args.model, args.a)?;
    let report = validate_model(&model);
    let params = TruncationParams::new(c64(1.0, 0.0), args.scale_omega)?;
    let admissible = if report.passed() {
        admissible_classes(&model, &params)?
            .iter()
            .map(|c| c.label.clone())
            .collect()
    } else {
        Vec::new()
    };
    let out = ModelReport {
        model: args.model.clone(),
        dim_x: model.dim_x,
        rank: model.n(),
        passed: report.passed(),
        violations: report.violations.iter().map(|v| v.to_string()).collect(),
        admissible_classes: admissible,
        scale_omega: args.scale_omega,
    };
    note(&ctx.json("model_report.json", &out)?);
    if args.emit {
        note(&ctx.json("model.json", &ModelFile::from_model(&model))?);
    }
    if out.passed {
        println!("model {} passes all invariants", args.model);
        Ok(exit::SUCCESS)
    } else {
        for v in &out.violations {
            println!("violation: {v}");
        }
        Err(Failure::input(format!(
            "model {} violates {} invariant(s)",
            args.model,
            out.violations.len()
        )))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassEntry {
    label: String,
    class: Vec<[f64; 2]>,
}

fn sod_from_trace(ctx: &Ctx, args: &SodFromTraceArgs) -> CmdResult<i32> {
    let opts = fit_options(&args.fit)?;
    let model = load_model(&args.model, c64(0.0, 0.0))?;
    let functional = model.integration_functional()?;
    let (t_all, phi_all) = read_qde_trace(&args.trace)?;
    if phi_all.first().is_some_and(|g| g.phi.n() != model.n()) {
        return Err(Failure::input("trace dimension does not match the model"));
    }
    let start = match args.t_min {
        Some(m) => t_all.partition_point(|&t| t < m),
        None => 0,
    };
    let (t, phi) = (&t_all[start..], &phi_all[start..]);
    let text = fs::read_to_string(&args.classes).map_err(|e| read_error(&args.classes, e))?;
    let classes: Vec<ClassEntry> = serde_json::from_str(&text).map_err(|e| read_error(&args.classes, e))?;
    if classes.is_empty() || classes.iter().any(|c| c.class.len() != model.n()) {
        return Err(Failure::input(format!(
            "classes must be nonempty vectors of length {}",
            model.n()
        )));
    }
    let mut series = Vec::with_capacity(classes.len());
    for c in &classes {
        let v: Vec<Complex64> = c.class.iter().map(|p| c64(p[0], p[1])).collect();
        // Z = w . (M v) e^{g}; lift the bounded part and add the gauge back
        let z: Vec<Complex64> = phi
            .iter()
            .map(|g| g.phi.apply(&v).iter().zip(&functional).map(|(a, w)| a * w).sum())
            .collect();
        let mut log_z = lift_log_samples(&c.label, t, &z)?;
        for (l, g) in log_z.iter_mut().zip(phi) {
            l.re += g.log_scale;
        }
        series.push(ChargeSeries {
            label: c.label.clone(),
            class_v: v,
            t: t.to_vec(),
            log_z,
        });
    }
    let fits: Vec<AsymptoticFit> = series
        .iter()
        .map(|s| fit_log_asymptotics(s, &opts))
        .collect::<Result<_, _>>()?;
    let r_values = match &args.r {
        Some(s) => Some(crate::parse::real_list(s).map_err(Failure::Input)?),
        None => None,
    };
    match sod_pipeline(&fits, &series, phi, None, r_values.as_deref(), &args.fit)? {
        SodOutcome::Done(report) => {
            note(&ctx.json("sod.json", &report)?);
            print_sod(&report);
            Ok(exit::SUCCESS)
        }
        SodOutcome::NonGeneric(report, msg) => {
            note(&ctx.json("sod.json", &report)?);
            println!("{msg}");
            Ok(exit::BOUNDARY)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charge_frame_matches_the_lattice_frame() {
        for (b, a) in [
            (c64(0.3, 1.0), c64(0.0, 0.0)),
            (c64(-0.2, 2.5), c64(0.1, 0.0)),
            (c64(0.0, 5.0), c64(0.0, 0.0)),
        ] {
            let (_, k) = stabpath_core::stab_p1::kappa_and_chart(b, a);
            let p = CMatrix::from_fn(2, |i, j| line_bundle_class(k - 1 + j as i64)[i]);
            for t in [0.5, 1.0, 2.0] {
                let g = charge_frame(b, a, t).unwrap();
                let want = &(&mat_pow_t(&builtin_p1(a).mu_c(), t).unwrap()
                    * &bessel_fundamental_solution(b, a, t).unwrap())
                    * &p;
                let got = g.value();
                let err = (&got - &want).max_abs() / want.max_abs();
                assert!(err < 1e-12, "b = {b}, t = {t}: {err:e}");
            }
        }
    }
}
