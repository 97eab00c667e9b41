use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::registry::check_info;
use super::report::{Accumulator, CheckResult, Meta, RunReport};
use super::scenario::{CatalogConfig, InstanceConfig, OdeConfig, Scenario};
use crate::catalog::{self, make_space};
use crate::error::{Error, Result};
use crate::geometry::ChartDomain;
use crate::homogeneous::{both_signs, extension_conditions, extension_ricci, ExtensionData};
use crate::ode::{
    closed_family, family_residual, integrate, log_law_check, ode_residual, profile_to_warped, Family, GradientKind,
    IntegrateOptions, OdeKind, OdeProfile, SigmaKind,
};
use crate::sampling::sample_points;
use crate::verifier::{
    bianchi_defect, codazzi_and_traces, conformal_check, hessian_ricci_residual_at, identity_residuals_at,
    kahler_j_check, mu_at, pack_invariants, probe_at, project_to_level, ricci_spectrum_at, PointEval, PointRecord,
    RHInstance, Spread, Verdict,
};
use crate::warped::{assemble, product_split_check, warped_report, CaseTag, WarpedSpec};

/// One value produced by a check at a point.
enum Val {
    Gate(&'static str, f64),
    Info(&'static str, f64),
    Skip(String),
    Err(String),
}

type PointValues = Vec<(usize, Vec<Val>)>;

/// Run every check of a scenario. Numerical failures at individual points are
/// recorded in the report; only invalid configuration or unusable instances
/// return an error.
pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    s.validate()?;
    let start = Instant::now();
    let (instance_label, checks, points) = match &s.instance {
        InstanceConfig::Catalog(c) => run_catalog(s, c)?,
        InstanceConfig::Warped(w) => run_warped(s, &w.config.build()?)?,
        InstanceConfig::Ode(o) => run_ode(s, o)?,
        InstanceConfig::Extension(d) => run_extension(s, d)?,
    };
    let verdicts: BTreeMap<String, Verdict> = checks.iter().map(|c| (c.check.clone(), c.verdict)).collect();
    let overall = if checks.iter().all(CheckResult::matches_expectation) { Verdict::Pass } else { Verdict::Fail };
    let unix_time = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Ok(RunReport {
        scenario: s.clone(),
        instance_label,
        checks,
        points,
        verdicts,
        overall,
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            unix_time,
            wall_time_s: start.elapsed().as_secs_f64(),
            threads: rayon::current_num_threads(),
        },
    })
}

type Outcome = (String, Vec<CheckResult>, Vec<PointRecord>);

fn accumulators(s: &Scenario) -> Vec<Accumulator<'_>> {
    s.checks.iter().map(|c| Accumulator::new(check_info(c).expect("validated check name"), &s.tolerances)).collect()
}

fn expected(s: &Scenario, check: &str) -> Verdict {
    s.expect.get(check).copied().unwrap_or(Verdict::Pass)
}

fn finish(s: &Scenario, accs: Vec<Accumulator<'_>>) -> Vec<CheckResult> {
    accs.into_iter().zip(&s.checks).map(|(a, name)| a.finish(expected(s, name))).collect()
}

/// The sampling box with `margin` of each non-periodic side removed.
fn trimmed(domain: &ChartDomain, periodic: &[bool], margin: f64) -> ChartDomain {
    let mut d = domain.clone();
    for k in 0..d.dim() {
        if !periodic.get(k).copied().unwrap_or(false) {
            let w = d.upper[k] - d.lower[k];
            d.lower[k] += margin * w;
            d.upper[k] -= margin * w;
        }
    }
    d
}

/// Fold per-point values into point records and accumulators, in point order.
fn fold_points(
    s: &Scenario,
    accs: &mut [Accumulator<'_>],
    points: &[Vec<f64>],
    values: Vec<PointValues>,
) -> Vec<PointRecord> {
    points
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (p, vals))| {
            let mut rec = PointRecord::new(p);
            for (ci, list) in vals {
                let check = &s.checks[ci];
                for v in list {
                    match v {
                        Val::Gate(n, x) => {
                            accs[ci].gate(n, x);
                            rec.put(&format!("{check}.{n}"), x);
                        }
                        Val::Info(n, x) => {
                            accs[ci].record(n, x);
                            rec.put(&format!("{check}.{n}"), x);
                        }
                        Val::Skip(why) => {
                            accs[ci].skip();
                            rec.put_err(check, format!("skipped: {why}"));
                        }
                        Val::Err(e) => {
                            accs[ci].error(format!("point {i}: {e}"));
                            rec.put_err(check, e);
                        }
                    }
                }
            }
            rec
        })
        .collect()
}

struct CatalogCtx {
    inst: RHInstance,
    eps: Option<f64>,
    trace_eps: Option<f64>,
    scale: f64,
    poisson_rhs: f64,
}

fn build_catalog(c: &CatalogConfig) -> Result<(RHInstance, Option<f64>)> {
    let (label, space_spec, sol_spec) = match (&c.entry, &c.space, &c.solution) {
        (Some(name), _, _) => {
            let e = catalog::entry(name).ok_or_else(|| Error::UnknownEntry(name.clone()))?;
            (e.name, e.space, e.solution)
        }
        (None, Some(sp), Some(so)) => (format!("{} on {}", so.display(), sp.display()), sp.clone(), so.clone()),
        _ => return Err(Error::Config("field `instance`: missing `entry`".into())),
    };
    let scal = make_space(&space_spec)?.scal;
    Ok((catalog::build_instance(&label, &space_spec, &sol_spec)?, scal))
}

fn run_catalog(s: &Scenario, c: &CatalogConfig) -> Result<Outcome> {
    let (inst, scal) = build_catalog(c)?;
    if s.checks.iter().any(|n| n == "kahler") && inst.j.is_none() {
        return Err(Error::Config(format!("check `kahler`: instance `{}` has no complex structure", inst.label)));
    }
    let ctx = CatalogCtx {
        eps: c.epsilon.or(scal.map(|v| v / 2.0)),
        trace_eps: c.epsilon,
        scale: c.scale.unwrap_or(2.5),
        poisson_rhs: c.poisson_rhs.unwrap_or(2.0),
        inst,
    };
    let domain = trimmed(&ctx.inst.metric.domain, &ctx.inst.metric.periodic_axes, s.samples.margin);
    let points = sample_points(&domain, s.samples.count, s.samples.seed)?;
    let values: Vec<PointValues> = points.par_iter().map(|p| catalog_point(&ctx, &s.checks, p)).collect();
    let mut accs = accumulators(s);
    let records = fold_points(s, &mut accs, &points, values);
    for (acc, name) in accs.iter_mut().zip(&s.checks) {
        match name.as_str() {
            "mu" => {
                let sp = Spread::of(acc.values("mu"));
                acc.summary("mean", sp.mean);
                acc.summary("min", sp.min);
                acc.summary("max", sp.max);
                acc.gate("spread", sp.spread);
                if let Some(m) = c.expected_mu {
                    acc.summary("expected", m);
                    acc.gate("expected_error", (sp.mean - m).abs());
                }
            }
            "zero_set" => {
                let probes = acc.values("level").len() as f64;
                acc.summary("probes", probes);
            }
            _ => {}
        }
    }
    Ok((ctx.inst.label.clone(), finish(s, accs), records))
}

fn catalog_point(ctx: &CatalogCtx, checks: &[String], p: &[f64]) -> PointValues {
    let inst = &ctx.inst;
    let pe = PointEval::new(inst, p);
    checks
        .iter()
        .enumerate()
        .map(|(ci, name)| {
            let vals = match (&pe, name.as_str()) {
                (_, "codazzi") => codazzi_vals(ctx, p),
                (_, "kahler") => match kahler_j_check(inst, p) {
                    Ok(v) => vec![Val::Gate("commutator", v)],
                    Err(e) => vec![Val::Err(e.to_string())],
                },
                (_, "conformal") => match conformal_check(&inst.metric, &inst.f, p) {
                    Ok(r) => vec![
                        Val::Gate("ricci_law", r.ricci_law),
                        Val::Gate("laplacian_law", r.laplacian_law),
                        Val::Gate("einstein", r.einstein),
                        Val::Info("mu", r.mu),
                    ],
                    Err(e) => vec![Val::Err(e.to_string())],
                },
                (_, "zero_set") => zero_set_vals(inst, p),
                (Err(e), _) => vec![Val::Err(e.to_string())],
                (Ok(pe), check) => pointwise_vals(ctx, pe, check, p),
            };
            (ci, vals)
        })
        .collect()
}

fn codazzi_vals(ctx: &CatalogCtx, p: &[f64]) -> Vec<Val> {
    match codazzi_and_traces(&ctx.inst.metric, p, 4) {
        Ok(ct) => {
            let higher = ct.divergences[1..].iter().cloned().fold(0.0, f64::max);
            let mut v = vec![Val::Gate("codazzi", ct.codazzi), Val::Gate("divergence", ct.divergences[0])];
            match ctx.trace_eps {
                Some(eps) => {
                    v.push(Val::Gate("trace", ct.trace_deviation(eps)));
                    v.push(Val::Gate("power_divergence", higher));
                }
                None => {
                    v.push(Val::Info("trace_1", ct.traces[0]));
                    v.push(Val::Info("power_divergence", higher));
                }
            }
            v
        }
        Err(e) => vec![Val::Err(e.to_string())],
    }
}

fn zero_set_vals(inst: &RHInstance, p: &[f64]) -> Vec<Val> {
    let q = match project_to_level(inst, p, 0.0, 50) {
        Ok(q) => q,
        Err(e) => return vec![Val::Skip(format!("projection: {e}"))],
    };
    let pe = match PointEval::new(inst, &q) {
        Ok(pe) => pe,
        Err(e) => return vec![Val::Skip(format!("projected point: {e}"))],
    };
    if pe.f.value.abs() >= 0.05 {
        return vec![Val::Skip(format!("|f| = {} after projection", pe.f.value.abs()))];
    }
    match probe_at(&pe, 1e-4) {
        Ok(pr) => {
            let mut v = vec![
                Val::Info("level", pe.f.value.abs()),
                Val::Gate("weingarten_norm", pr.weingarten_norm),
                Val::Gate("scal_n", pr.scal_n.abs()),
            ];
            if let Some(r) = pr.ric_n_residual {
                v.push(Val::Gate("ric_n", r));
            }
            v
        }
        Err(Error::CriticalPoint { grad_norm }) => vec![Val::Skip(format!("critical point, |grad f| = {grad_norm}"))],
        Err(e) => vec![Val::Err(e.to_string())],
    }
}

fn pointwise_vals(ctx: &CatalogCtx, pe: &PointEval, check: &str, p: &[f64]) -> Vec<Val> {
    match check {
        "curvature_invariants" => {
            let inv = pack_invariants(&pe.pack);
            let mut v = vec![
                Val::Gate("antisymmetry", inv.antisymmetry),
                Val::Gate("pair_symmetry", inv.pair_symmetry),
                Val::Gate("first_bianchi", inv.first_bianchi),
                Val::Gate("scalar_trace", inv.scalar_trace),
            ];
            match bianchi_defect(&ctx.inst.metric, p) {
                Ok(b) => v.push(Val::Gate("second_bianchi", b)),
                Err(e) => v.push(Val::Err(e.to_string())),
            }
            v
        }
        "rh_residual" => vec![Val::Gate("rh", hessian_ricci_residual_at(pe, 1.0))],
        "mu" => vec![Val::Info("mu", mu_at(pe))],
        "identity_suite" => match identity_residuals_at(pe) {
            Ok(r) => r.named().iter().map(|&(n, x)| Val::Gate(n, x)).collect(),
            Err(Error::PreconditionViolated(why)) => vec![Val::Skip(why)],
            Err(e) => vec![Val::Err(e.to_string())],
        },
        "static_equation" => {
            vec![Val::Gate("static", hessian_ricci_residual_at(pe, -1.0)), Val::Gate("scal", pe.pack.scal.abs())]
        }
        "level_set" => match probe_at(pe, 1e-4) {
            Ok(pr) => vec![
                Val::Gate("weingarten_norm", pr.weingarten_norm),
                Val::Gate("scal_n", pr.scal_n.abs()),
                Val::Info("normal_defect", pr.normal_defect.abs()),
            ],
            Err(Error::CriticalPoint { grad_norm }) => {
                vec![Val::Skip(format!("critical point, |grad f| = {grad_norm}"))]
            }
            Err(e) => vec![Val::Err(e.to_string())],
        },
        "ricci_spectrum" => {
            let Some(eps) = ctx.eps else {
                return vec![Val::Err("no epsilon given and the scalar curvature is not a known constant".into())];
            };
            match ricci_spectrum_at(pe, eps, 1e-4) {
                Ok(sc) => vec![
                    Val::Gate("pattern_deviation", sc.pattern_deviation),
                    Val::Gate("ric_t", (sc.ric_t_norm2 - eps * eps).abs()),
                ],
                Err(Error::CriticalPoint { grad_norm }) => {
                    vec![Val::Skip(format!("critical point, |grad f| = {grad_norm}"))]
                }
                Err(e) => vec![Val::Err(e.to_string())],
            }
        }
        "scaling" => {
            let lambda = ctx.scale;
            match PointEval::new(&ctx.inst.rescaled(lambda), p) {
                Ok(scaled) => {
                    let l2 = lambda * lambda;
                    let rh = hessian_ricci_residual_at(pe, 1.0);
                    let mu = mu_at(pe);
                    vec![
                        Val::Gate("rh_law", (l2 * hessian_ricci_residual_at(&scaled, 1.0) - rh).abs()),
                        Val::Gate("mu_law", (l2 * mu_at(&scaled) - mu).abs()),
                    ]
                }
                Err(e) => vec![Val::Err(e.to_string())],
            }
        }
        "poisson" => vec![Val::Gate("trace", (-pe.f.lap - ctx.poisson_rhs).abs())],
        other => vec![Val::Err(format!("check `{other}` does not run on catalog instances"))],
    }
}

fn run_warped(s: &Scenario, spec: &WarpedSpec) -> Result<Outcome> {
    let (metric, _) = assemble(spec)?;
    let domain = trimmed(&metric.domain, &metric.periodic_axes, s.samples.margin);
    let points = sample_points(&domain, s.samples.count, s.samples.seed)?;
    let mut accs = accumulators(s);
    let equiv_tol =
        accs.iter().zip(&s.checks).find(|(_, n)| *n == "warped_equivalence").map_or(1e-7, |(a, _)| a.tol("violations"));
    let report = warped_report(spec, &points, equiv_tol)?;
    let case_names: &[&'static str] = match spec.case {
        CaseTag::B => &["assembled_rh", "res_base", "einstein_fiber"],
        _ => &["assembled_rh", "res_base", "res_fiber"],
    };
    let split = if s.checks.iter().any(|c| c == "product_split") {
        Some(product_split_check(&spec.base, &spec.fiber, &spec.f2, &points))
    } else {
        None
    };
    let mut values: Vec<PointValues> = Vec::with_capacity(points.len());
    for (i, rec) in report.points.iter().enumerate() {
        let get = |n: &str| rec.residuals.get(n).copied();
        let failure = rec.errors.values().next().cloned();
        let mut per = Vec::new();
        for (ci, name) in s.checks.iter().enumerate() {
            let mut v = Vec::new();
            if let Some(e) = &failure {
                v.push(Val::Err(e.clone()));
                per.push((ci, v));
                continue;
            }
            let mut push = |n: &'static str, gated: bool| {
                if let Some(x) = get(n) {
                    v.push(if gated { Val::Gate(n, x) } else { Val::Info(n, x) });
                }
            };
            match name.as_str() {
                "warped_case" => case_names.iter().for_each(|n| push(n, true)),
                "warped_equivalence" => case_names.iter().for_each(|n| push(n, false)),
                "besse" => push("besse", true),
                "mu_relation" => {
                    push("mu_relation_stated", true);
                    push("mu_relation_corrected", false);
                }
                "mu_relation_corrected" => {
                    push("mu_relation_corrected", true);
                    push("mu_relation_stated", false);
                }
                "product_split" => match split.as_ref().map(|r| r.as_ref().map(|v| v[i])) {
                    Some(Ok((rh, ric1))) => {
                        v.push(Val::Gate("rh", rh));
                        v.push(Val::Info("ric1", ric1));
                    }
                    Some(Err(e)) => v.push(Val::Err(e.to_string())),
                    None => {}
                },
                _ => {}
            }
            per.push((ci, v));
        }
        values.push(per);
    }
    let records = fold_points(s, &mut accs, &points, values);
    for (acc, name) in accs.iter_mut().zip(&s.checks) {
        match name.as_str() {
            "warped_case" => {
                acc.summary("mu1_mean", report.mu1.mean);
                acc.summary("mu1_spread", report.mu1.spread);
            }
            "warped_equivalence" => {
                acc.summary("violations", report.equivalence_violations as f64);
                acc.summary("tolerance", report.equivalence_tol);
                acc.condition("case_iff_assembled", report.equivalence_violations == 0);
            }
            "mu_relation" | "mu_relation_corrected" => {
                if spec.case != CaseTag::A {
                    acc.error(format!("`{name}` needs a case-a instance"));
                }
                acc.gate("mu1_spread", report.mu1.spread);
                acc.summary("mu1_mean", report.mu1.mean);
                acc.summary("mu_mean", report.mu.mean);
                acc.summary("mu_spread", report.mu.spread);
                acc.summary("mu2_mean", report.mu2.mean);
                acc.summary("grad_f1_spread", report.grad_f1.spread);
            }
            "product_split" => {
                let ric1 = acc.values("ric1").iter().cloned().fold(0.0, f64::max);
                acc.summary("ric1_max", ric1);
            }
            _ => {}
        }
    }
    Ok((spec.label.clone(), finish(s, accs), records))
}

fn closed_form(kind: &OdeKind, p: &OdeProfile) -> Option<Box<dyn Fn(f64) -> f64>> {
    let (t0, u0, up0) = (p.grid[0], p.u[0], p.up[0]);
    match *kind {
        OdeKind::BaseSecondOrder { n2, mu1 } if mu1 == 0.0 && u0 > 0.0 => {
            let h = f64::from(n2) / 2.0;
            let w0 = u0.powf(h);
            let a = h * u0.powf(h - 1.0) * up0;
            let b = w0 - a * t0;
            Some(Box::new(move |t| (a * t + b).powf(1.0 / h)))
        }
        OdeKind::Gradient { profile } if !p.negative_branch => {
            let c: f64 = match profile {
                GradientKind::Circ => u0.asin() - t0,
                GradientKind::Sinh => u0.asinh() - t0,
                GradientKind::Exp => return Some(Box::new(move |t| u0 * (t - t0).exp())),
                GradientKind::Cosh => u0.acosh() - t0,
            };
            Some(match profile {
                GradientKind::Circ => Box::new(move |t| (t + c).sin()),
                GradientKind::Sinh => Box::new(move |t| (t + c).sinh()),
                _ => Box::new(move |t| (t + c).cosh()),
            })
        }
        _ => None,
    }
}

/// Canonical parameters `(A, φ, μ1)` for the closed families on `[0, 1]`.
fn family_params(f: Family) -> (f64, f64, f64) {
    match f {
        Family::A1 => (1.0, 0.3, 1.0),
        Family::B1 => (1.0, 0.3, 0.0),
        _ => (1.0, 0.3, -1.0),
    }
}

fn family_vals(acc: &mut Accumulator<'_>, tol: f64) {
    for fam in Family::ALL {
        let (a, phi, mu1) = family_params(fam);
        let name = fam.name();
        let ts: Vec<f64> = (0..=40).map(|k| k as f64 / 40.0).collect();
        let mut worst = 0.0_f64;
        for &t in &ts {
            match family_residual(fam, a, phi, mu1, t) {
                Ok(r) => worst = worst.max(r),
                Err(e) => acc.error(format!("{name}: {e}")),
            }
        }
        let res_key: &'static str = Box::leak(format!("{name}_residual").into_boxed_str());
        acc.gate(res_key, worst);
        let int_key: &'static str = Box::leak(format!("{name}_integrator").into_boxed_str());
        let run = || -> Result<f64> {
            let (u0, up0) = closed_family(fam, a, phi, mu1, 0.0)?;
            let opts = IntegrateOptions { tol, ..IntegrateOptions::default() };
            let prof = integrate(OdeKind::LineBase { mu1 }, &[u0, up0], (0.0, 1.0), opts)?;
            let mut dev = 0.0_f64;
            for t in prof.grid.iter().copied().chain(prof.midpoints()) {
                let (u, _, _) = prof.interpolate(t).ok_or(Error::ZeroCrossing { t })?;
                dev = dev.max((u - closed_family(fam, a, phi, mu1, t)?.0).abs());
            }
            Ok(dev)
        };
        match run() {
            Ok(d) => acc.gate(int_key, d),
            Err(e) => acc.error(format!("{name} integration: {e}")),
        }
    }
}

fn run_ode(s: &Scenario, o: &OdeConfig) -> Result<Outcome> {
    let opts = IntegrateOptions { tol: o.tol, negative_branch: o.negative_branch, ..IntegrateOptions::default() };
    let profile = integrate(o.kind, &o.initial, (o.t_span[0], o.t_span[1]), opts);
    let mut accs = accumulators(s);
    for (acc, name) in accs.iter_mut().zip(&s.checks) {
        if name == "families" {
            family_vals(acc, o.tol.min(1e-11));
            continue;
        }
        let p = match &profile {
            Ok(p) => p,
            Err(e) => {
                acc.error(format!("integration: {e}"));
                continue;
            }
        };
        match name.as_str() {
            "ode_residual" => {
                acc.gate("residual", ode_residual(p));
                acc.summary("steps", p.stats.steps as f64);
                acc.summary("rejected", p.stats.rejected as f64);
                acc.summary("max_local_error", p.stats.max_local_error);
                acc.summary("t_end", p.t_max());
            }
            "closed_form" => match closed_form(&o.kind, p) {
                Some(f) => {
                    let dev = p
                        .grid
                        .iter()
                        .copied()
                        .chain(p.midpoints())
                        .filter_map(|t| p.interpolate(t).map(|(u, _, _)| (u - f(t)).abs()))
                        .fold(0.0, f64::max);
                    acc.gate("deviation", dev);
                }
                None => acc.skip(),
            },
            "first_integral" => match o.kind {
                OdeKind::Gradient { profile: g } => {
                    let (eps, energy) = g.epsilon_and_energy();
                    let drift =
                        p.u.iter().zip(&p.up).map(|(u, up)| (up * up + eps * u * u - energy).abs()).fold(0.0, f64::max);
                    acc.gate("drift", drift);
                }
                _ => acc.skip(),
            },
            "log_law" => match o.kind {
                OdeKind::FiberFirstOrder { mu1, c, .. } => match log_law_check(p, mu1, o.log_law_c.unwrap_or(c)) {
                    Ok(r) => {
                        acc.gate("scalar_law", r.scalar_law);
                        acc.gate("second_derivative", r.second_derivative);
                        acc.summary("samples", r.samples as f64);
                    }
                    Err(e) => acc.error(e.to_string()),
                },
                _ => acc.error("log_law needs a fiber_first_order profile"),
            },
            "profile_to_warped" => profile_surface_vals(s, o, p, acc),
            _ => {}
        }
        if let Ok(p) = &profile {
            acc.summary("t_start", p.t_min());
        }
    }
    Ok((format!("{} profile", o.kind.name()), finish(s, accs), Vec::new()))
}

fn profile_surface_vals(s: &Scenario, o: &OdeConfig, p: &OdeProfile, acc: &mut Accumulator<'_>) {
    let surface = match profile_to_warped(p, o.sigma.unwrap_or(SigmaKind::Line)) {
        Ok(x) => x,
        Err(e) => return acc.error(e.to_string()),
    };
    let pts = assemble(&surface.spec).and_then(|(m, _)| {
        sample_points(&trimmed(&m.domain, &m.periodic_axes, s.samples.margin), s.samples.count, s.samples.seed)
    });
    let samples = match pts.and_then(|pts| surface.residuals(&pts)) {
        Ok(x) => x,
        Err(e) => return acc.error(e.to_string()),
    };
    for smp in samples {
        if let Some(r) = smp.residual {
            acc.gate("residual", r);
        }
        acc.record("scal", smp.scal);
        if let Some(target) = o.expected_scal {
            acc.gate("scal_error", (smp.scal - target).abs());
        }
    }
    acc.summary("fiber_dim", f64::from(surface.fiber_dim));
}

fn run_extension(s: &Scenario, d: &ExtensionData) -> Result<Outcome> {
    let mut accs = accumulators(s);
    for (acc, name) in accs.iter_mut().zip(&s.checks) {
        if let Err(e) = extension_vals(name, d, acc) {
            acc.error(e.to_string());
        }
    }
    Ok(("extension".into(), finish(s, accs), Vec::new()))
}

fn extension_vals(name: &str, d: &ExtensionData, acc: &mut Accumulator<'_>) -> Result<()> {
    let cond = extension_conditions(d)?;
    match name {
        "extension_conditions" => {
            acc.gate("res_div", cond.res_div);
            acc.gate("res_ric", cond.res_ric);
            acc.summary("alpha", cond.alpha);
            acc.summary("epsilon", cond.epsilon);
            let [neg, pos] = both_signs(d)?;
            acc.summary("passes_minus", f64::from(u8::from(neg.passed)));
            acc.summary("passes_plus", f64::from(u8::from(pos.passed)));
            let tr_s = d.matrices()?.s.trace();
            acc.condition("at_most_one_sign", !(neg.passed && pos.passed && tr_s != 0.0));
        }
        "extension_ricci" => {
            let r = extension_ricci(d, cond.alpha)?;
            acc.gate("equation", r.equation_residual);
            acc.gate("mu", r.mu_coefficient.abs());
            acc.summary("alpha", r.alpha);
            acc.summary("ric_xi_xi", r.ric_xi_xi);
            acc.summary("ambient_scal", r.ambient_scal);
            acc.summary("mu_coefficient", r.mu_coefficient);
        }
        "extension_scaling" => {
            let mut law = 0.0_f64;
            for lambda in [0.5, 2.0, 3.0] {
                let c = extension_conditions(&d.scaled(lambda))?;
                law = law.max((lambda * c.alpha - cond.alpha).abs());
                acc.condition(&format!("verdict_invariant_{lambda}"), c.passed == cond.passed);
            }
            acc.gate("alpha_law", law);
        }
        _ => {}
    }
    Ok(())
}
