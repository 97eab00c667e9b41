use std::path::PathBuf;
use std::process::{Command, Output};

fn rhlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhlab")).args(args).env("RHLAB_THREADS", "2").output().unwrap()
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name).display().to_string()
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("rhlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write_temp(tag: &str, body: &str) -> String {
    let path = temp_dir(tag).join("s.toml");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn passing_scenario_exits_zero() {
    let out = rhlab(&["run", &scenario("tashiro_cosh.toml"), "--samples", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("| rh_residual | Pass | Pass |"), "{stdout}");
}

#[test]
fn negative_control_matching_its_expectation_exits_zero() {
    let out = rhlab(&["run", &scenario("kahler_rank_one.toml")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failing_check_exits_one() {
    let out = rhlab(&["run", &scenario("tashiro_cosh.toml"), "--samples", "4", "--tol", "rh_residual=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_scenario_exits_two() {
    let path = write_temp(
        "bad",
        "name = \"x\"\nchecks = [\"nope\"]\n[instance]\ntype = \"catalog\"\nentry = \"cylinder_affine\"\n",
    );
    let out = rhlab(&["run", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check `nope`"));
}

#[test]
fn unknown_entry_and_missing_file_exit_two() {
    let path = write_temp(
        "entry",
        "name = \"x\"\nchecks = [\"rh_residual\"]\n[instance]\ntype = \"catalog\"\nentry = \"nowhere\"\n",
    );
    assert_eq!(rhlab(&["run", &path]).status.code(), Some(2));
    assert_eq!(rhlab(&["run", "/nonexistent/s.toml"]).status.code(), Some(2));
}

#[test]
fn bad_flag_value_exits_two() {
    assert_eq!(rhlab(&["run", &scenario("tashiro_cosh.toml"), "--tol", "rh_residual"]).status.code(), Some(2));
    assert_eq!(rhlab(&["run", &scenario("tashiro_cosh.toml"), "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn worst_code_wins_across_files() {
    let bad = write_temp("mixed", "not toml at all [");
    let out = rhlab(&["run", &scenario("tashiro_exp.toml"), &bad]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_directory_receives_declared_outputs() {
    let dir = temp_dir("out");
    let out = rhlab(&["run", &scenario("obata_sphere.toml"), "--samples", "8", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read_to_string(dir.join("obata_sphere.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    assert_eq!(v["meta"]["threads"], 2);
    assert!(dir.join("obata_sphere.md").exists());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seed_flag_is_reproducible() {
    let run = |seed: &str| {
        let out = rhlab(&["run", &scenario("tashiro_sinh.toml"), "--samples", "6", "--seed", seed, "--json"]);
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("meta");
        v
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9")["points"], run("10")["points"]);
}

#[test]
fn listings_name_entries_and_checks() {
    let cat = String::from_utf8(rhlab(&["list-catalog"]).stdout).unwrap();
    assert!(cat.contains("sphere2_linear_form") && cat.contains("schwarzschild_static"));
    let kahler = String::from_utf8(rhlab(&["list-catalog", "--tag", "kahler"]).stdout).unwrap();
    assert!(kahler.contains("euclidean4_x1_squared") && !kahler.contains("schwarzschild_static"));
    let checks = String::from_utf8(rhlab(&["list-checks"]).stdout).unwrap();
    for c in ["rh_residual", "warped_equivalence", "log_law", "extension_ricci"] {
        assert!(checks.contains(c), "{c}");
    }
}
