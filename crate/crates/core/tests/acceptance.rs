//! Acceptance suite: one line per criterion, driven by the shipped scenarios.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rhlab::runner::{run_scenario, to_json, RunReport, Scenario};
use rhlab::verifier::Verdict;

fn scenarios_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(name: &str) -> Result<RunReport, String> {
    let s = Scenario::load(&scenarios_dir().join(format!("{name}.toml"))).map_err(|e| format!("{name}: {e}"))?;
    run_scenario(&s).map_err(|e| format!("{name}: {e}"))
}

/// Largest value of a gated residual, or of every gated residual when
/// `residual` is `None`.
fn max_of(r: &RunReport, check: &str, residual: Option<&str>) -> Result<f64, String> {
    let c = r.check(check).ok_or_else(|| format!("{}: no check {check}", r.scenario.name))?;
    if !c.errors.is_empty() {
        return Err(format!("{} / {check}: {}", r.scenario.name, c.errors[0]));
    }
    let vals: Vec<f64> =
        c.stats.iter().filter(|(k, _)| residual.is_none_or(|n| n == k.as_str())).map(|(_, s)| s.max).collect();
    if vals.is_empty() {
        return Err(format!("{} / {check}: nothing recorded for {residual:?}", r.scenario.name));
    }
    Ok(vals.into_iter().fold(0.0, f64::max))
}

fn count_of(r: &RunReport, check: &str, residual: &str) -> usize {
    r.check(check).and_then(|c| c.stats.get(residual)).map_or(0, |s| s.count)
}

fn summary(r: &RunReport, check: &str, key: &str) -> Result<f64, String> {
    r.check(check)
        .and_then(|c| c.summary.get(key).copied())
        .ok_or_else(|| format!("{} / {check}: no summary {key}", r.scenario.name))
}

struct Outcome {
    ok: bool,
    detail: String,
}

type Check = Result<Outcome, String>;
type Criterion = (&'static str, fn() -> Check);
type SuiteRun = (BTreeMap<String, BTreeMap<String, Verdict>>, String);

fn outcome(ok: bool, detail: impl Into<String>) -> Check {
    Ok(Outcome { ok, detail: detail.into() })
}

fn obata() -> Check {
    let r = run("obata_sphere")?;
    let rh = max_of(&r, "rh_residual", Some("rh"))?;
    let mean = summary(&r, "mu", "mean")?;
    let spread = max_of(&r, "mu", Some("spread"))?;
    let ids = ["gradient_identity", "trace_law", "norm_identity"]
        .iter()
        .map(|n| max_of(&r, "identity_suite", Some(n)))
        .collect::<Result<Vec<_>, _>>()?;
    let id = ids.into_iter().fold(0.0, f64::max);
    let n = r.points.len();
    outcome(
        n == 64 && rh < 1e-8 && (mean - 2.0).abs() < 1e-8 && spread < 1e-8 && id < 1e-7,
        format!("{n} points, rh {rh:.1e}, mu {mean:.12} (spread {spread:.1e}), identities {id:.1e}"),
    )
}

fn tashiro() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, expected) in [("cosh", -2.0), ("sinh", 2.0), ("exp", 0.0)] {
        let r = run(&format!("tashiro_{name}"))?;
        let rh = max_of(&r, "rh_residual", Some("rh"))?;
        let mu = summary(&r, "mu", "mean")?;
        let spread = max_of(&r, "mu", Some("spread"))?;
        ok &= rh < 1e-8 && (mu - expected).abs() < 1e-8 && spread < 1e-8;
        parts.push(format!("{name}: rh {rh:.1e} mu {mu:+.10}"));
    }
    outcome(ok, parts.join("; "))
}

fn flat() -> Check {
    let mut worst = 0.0_f64;
    let mut level = 0.0_f64;
    for name in ["flat_affine", "flat_affine_r4"] {
        let r = run(name)?;
        for c in &r.checks {
            worst = worst.max(max_of(&r, &c.check, None)?);
        }
        level = level.max(max_of(&r, "level_set", None)?);
    }
    outcome(worst <= 1e-12 && level <= 1e-12, format!("largest residual {worst:.1e}, level-set W and S_N {level:.1e}"))
}

fn zero_set() -> Check {
    let r = run("sphere_torus_rigidity")?;
    let probes = count_of(&r, "zero_set", "weingarten_norm");
    let w = max_of(&r, "zero_set", Some("weingarten_norm"))?;
    let s = max_of(&r, "zero_set", Some("scal_n"))?;
    outcome(probes >= 16 && w < 1e-6 && s < 1e-6, format!("{probes} probes, |W| {w:.1e}, |S_N| {s:.1e}"))
}

fn spectrum() -> Check {
    let r = run("sphere_torus_rigidity")?;
    let n = count_of(&r, "ricci_spectrum", "pattern_deviation");
    let dev = max_of(&r, "ricci_spectrum", Some("pattern_deviation"))?;
    let rt = max_of(&r, "ricci_spectrum", Some("ric_t"))?;
    let skipped = r.check("ricci_spectrum").map_or(0, |c| c.skipped);
    outcome(
        n > 0 && dev < 1e-6 && rt < 1e-6,
        format!("{n} regular points ({skipped} critical skipped), spectrum {dev:.1e}, |Ric^T|^2 - 1 {rt:.1e}"),
    )
}

fn traces() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, eps) in [("sphere_torus_rigidity", 1), ("hyperbolic_torus_traces", -1)] {
        let r = run(name)?;
        let tr = max_of(&r, "codazzi", Some("trace"))?;
        let div = max_of(&r, "codazzi", Some("divergence"))?.max(max_of(&r, "codazzi", Some("power_divergence"))?);
        ok &= tr < 1e-7 && div < 1e-7;
        parts.push(format!("eps {eps:+}: traces {tr:.1e}, divergences {div:.1e}"));
    }
    outcome(ok, parts.join("; "))
}

fn conformal() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for u in ["linear", "x1x2", "saddle"] {
        let r = run(&format!("conformal_{u}"))?;
        let rh = max_of(&r, "rh_residual", Some("rh"))?;
        let ein = max_of(&r, "conformal", Some("einstein"))?;
        ok &= rh < 1e-7 && ein < 1e-6;
        parts.push(format!("{u}: rh {rh:.1e} einstein {ein:.1e}"));
    }
    outcome(ok, parts.join("; "))
}

fn schwarzschild() -> Check {
    let r = run("schwarzschild_static")?;
    let st = max_of(&r, "static_equation", Some("static"))?;
    let s = max_of(&r, "static_equation", Some("scal"))?;
    outcome(st < 1e-7 && s < 1e-8, format!("static {st:.1e}, |S| {s:.1e}"))
}

fn warped() -> Check {
    let positives = [
        "warped_a_hyperbolic_line",
        "warped_a_interval_sphere",
        "warped_a_flat_cone",
        "warped_b_hyperbolic",
        "warped_b_conformal_sphere",
    ];
    let negatives = ["warped_a_cone_wrong_kappa", "warped_b_hyperbolic_wrong_f1"];
    let mut ok = true;
    let mut case_max = 0.0_f64;
    let mut besse = 0.0_f64;
    let mut violations = 0.0;
    for name in positives {
        let r = run(name)?;
        case_max = case_max.max(max_of(&r, "warped_case", None)?);
        besse = besse.max(max_of(&r, "besse", None)?);
        violations += summary(&r, "warped_equivalence", "violations")?;
        ok &= r.verdicts["warped_case"] == Verdict::Pass;
    }
    let mut neg_min = f64::INFINITY;
    for name in negatives {
        let r = run(name)?;
        neg_min = neg_min.min(max_of(&r, "warped_case", Some("assembled_rh"))?);
        besse = besse.max(max_of(&r, "besse", None)?);
        violations += summary(&r, "warped_equivalence", "violations")?;
    }
    ok &= case_max < 1e-7 && neg_min > 1e-3 && besse < 1e-7 && violations == 0.0;
    outcome(
        ok,
        format!("positives {case_max:.1e}, negatives >= {neg_min:.2e}, besse {besse:.1e}, equivalence violations {violations}"),
    )
}

fn mu_bookkeeping() -> Check {
    let mut stated = 0.0_f64;
    let mut corrected = 0.0_f64;
    let mut spread = 0.0_f64;
    let r = run("mu_relation")?;
    stated = stated.max(max_of(&r, "mu_relation", Some("mu_relation_stated"))?);
    spread = spread.max(max_of(&r, "mu_relation", Some("mu1_spread"))?);
    corrected = corrected.max(max_of(&r, "mu_relation_corrected", Some("mu_relation_corrected"))?);
    for name in ["warped_a_hyperbolic_line", "warped_a_interval_sphere", "warped_a_schwarzschild_sphere"] {
        let r = run(name)?;
        corrected = corrected.max(max_of(&r, "mu_relation_corrected", Some("mu_relation_corrected"))?);
        spread = spread.max(max_of(&r, "mu_relation_corrected", Some("mu1_spread"))?);
    }
    outcome(
        stated < 1e-7 && spread < 1e-7,
        format!("mu = n2|grad f1|^2 f2^2 + mu2 off by {stated:.3e}; mu = mu2 holds to {corrected:.1e}; mu1 spread {spread:.1e}"),
    )
}

fn ode() -> Check {
    let fam = run("ode_families")?;
    let fam_res = ["a1", "b1", "c1", "d1", "e1"]
        .iter()
        .map(|f| max_of(&fam, "families", Some(&format!("{f}_residual"))))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let power = max_of(&run("ode_power_law")?, "closed_form", Some("deviation"))?;
    let mut first = 0.0_f64;
    for g in ["circ", "sinh", "exp", "cosh"] {
        first = first.max(max_of(&run(&format!("ode_gradient_{g}"))?, "first_integral", Some("drift"))?);
    }
    let log = max_of(&run("ode_log_law")?, "log_law", None)?;
    let mut rebuild = 0.0_f64;
    for n in ["ode_converse_n2", "ode_converse_n3"] {
        rebuild = rebuild.max(max_of(&run(n)?, "profile_to_warped", Some("residual"))?);
    }
    let log_neg = run("ode_log_law_mismatch")?.verdicts["log_law"] == Verdict::Fail;
    outcome(
        fam_res < 1e-10 && power < 1e-8 && first < 1e-9 && log < 1e-7 && rebuild < 1e-6 && log_neg,
        format!(
            "families {fam_res:.1e}, power law {power:.1e}, first integrals {first:.1e}, log law {log:.1e}, rebuild {rebuild:.1e}"
        ),
    )
}

fn homogeneous() -> Check {
    let r = run("extension_hyperbolic_line")?;
    let alpha = summary(&r, "extension_ricci", "alpha")?;
    let scal = summary(&r, "extension_ricci", "ambient_scal")?;
    let res = max_of(&r, "extension_conditions", None)?.max(max_of(&r, "extension_ricci", None)?);
    let eps = summary(&r, "extension_conditions", "epsilon")?;
    let flat = run("extension_flat_identity")?;
    let res_ric = max_of(&flat, "extension_conditions", Some("res_ric"))?;
    let expected = (2.0 - 2f64.sqrt()) / 2.0 * 2f64.sqrt();
    outcome(
        eps == -1.0 && alpha == -1.0 && (scal + 2.0).abs() < 1e-10 && res < 1e-10 && (res_ric - expected).abs() < 1e-12,
        format!("alpha {alpha}, ambient S {scal}, residuals {res:.1e}; flat identity res_ric {res_ric:.6}"),
    )
}

fn kahler() -> Check {
    let pos = max_of(&run("kahler_product")?, "kahler", Some("commutator"))?;
    let neg = max_of(&run("kahler_rank_one")?, "kahler", Some("commutator"))?;
    outcome(pos < 1e-8 && neg > 0.1, format!("product {pos:.1e}, rank-one control {neg:.3}"))
}

fn determinism() -> Check {
    let mut names: Vec<String> = std::fs::read_dir(scenarios_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    names.sort();
    let suite = || -> Result<SuiteRun, String> {
        let mut verdicts = BTreeMap::new();
        let mut json = String::new();
        for n in &names {
            let r = run(n)?;
            json.push_str(&to_json(&r.without_meta()).map_err(|e| e.to_string())?);
            verdicts.insert(n.clone(), r.verdicts);
        }
        Ok((verdicts, json))
    };
    let (v1, j1) = suite()?;
    let (v2, j2) = suite()?;
    outcome(v1 == v2 && j1 == j2, format!("{} scenarios, verdicts and reports identical across two runs", names.len()))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("sphere linear forms", obata),
        ("hyperbolic profiles", tashiro),
        ("flat affine functions", flat),
        ("zero-set rigidity", zero_set),
        ("Ricci eigenvalue rigidity", spectrum),
        ("traces of Ricci powers", traces),
        ("conformal construction", conformal),
        ("static Schwarzschild", schwarzschild),
        ("warped equivalence", warped),
        ("mu bookkeeping", mu_bookkeeping),
        ("ODE suite", ode),
        ("homogeneous extension", homogeneous),
        ("Kahler commutator", kahler),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        let ok = ok && secs < 60.0;
        println!("criterion {:>2} {:<28} {} ({secs:.2}s) {detail}", i + 1, name, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 14 criteria pass");
    } else {
        println!("acceptance: {} of 14 criteria pass; failing: {failed:?}", 14 - failed.len());
        std::process::exit(1);
    }
}
