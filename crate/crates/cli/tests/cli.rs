use std::path::Path;
use std::process::{Command, Output};

fn lgmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgmf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_preset(dir: &Path, name: &str) -> String {
    let o = lgmf(&["fan", "preset", name]);
    assert!(o.status.success());
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn preset_p2_pretty() {
    let o = lgmf(&["mf", "preset", "p2", "--out", "pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let header = out.lines().nth(1).unwrap();
    let labels: Vec<&str> = header.split('|').skip(1).map(str::trim).collect();
    assert_eq!(labels, ["1", "e12", "e1", "e2"]);
    assert!(out.contains("-T*z1^-1*z2^-1*u1^-1 + T"));
    assert!(out.lines().any(|l| l.starts_with("PASS p2")));
}

#[test]
fn every_zoo_preset_passes() {
    for name in ["chan_leung", "p1_pair", "p1_perturbed", "p1p1_antidiagonal", "p1p1_torus", "rp3_char2", "rp3_signed", "rp5_char2"] {
        let o = lgmf(&["mf", "preset", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
    }
    assert_eq!(lgmf(&["mf", "preset", "nope"]).status.code(), Some(2));
}

#[test]
fn exhaustive_telescope() {
    let o = lgmf(&["oracle", "telescope", "--n", "2", "--max-entry", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("48 vectors checked"));
    let o = lgmf(&["oracle", "telescope", "--n", "4", "--count", "30", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("seed: 5"));
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(lgmf(&["mf", "verify", "/definitely/not/here.json"]).status.code(), Some(2));
    assert_eq!(lgmf(&["bogus"]).status.code(), Some(2));
    assert_eq!(lgmf(&["mf", "build", "x.json", "--out", "yaml"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2}").unwrap();
    assert_eq!(lgmf(&["potential", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn build_verify_and_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["p2", "p3", "p1p1", "hirzebruch_f1"] {
        let fan = write_preset(dir.path(), name);
        assert_eq!(lgmf(&["mf", "verify", &fan]).status.code(), Some(0), "{name}");
        let a = lgmf(&["mf", "build", &fan, "--out", "json"]);
        let b = lgmf(&["mf", "build", &fan, "--out", "json", "--sequential"]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        let endo = lgmf_core::Endomorphism::from_json(&stdout(&a)).unwrap();
        assert_eq!(endo.to_json().trim(), stdout(&a).trim());
    }
}

#[test]
fn toml_fans_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let fan = lgmf_core::ToricFanoData::preset("p2").unwrap();
    let path = dir.path().join("p2.toml");
    std::fs::write(&path, fan.to_toml()).unwrap();
    let o = lgmf(&["potential", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("W = "));
}

#[test]
fn crit_generators_and_quantum() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = write_preset(dir.path(), "p2");
    let o = lgmf(&["crit", &p2]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3 critical points"));
    let o = lgmf(&["generators", &p2, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let json = stdout(&o);
    let reports: serde_json::Value = serde_json::from_str(json.split_once('\n').unwrap().1).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 3);

    let p1_x4 = write_preset(dir.path(), "p1_x4");
    let a = lgmf(&["quantum4", &p1_x4, "--seed", "9"]);
    let b = lgmf(&["quantum4", &p1_x4, "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    let strip = |o: &Output| stdout(o).lines().map(|l| l.split(" ms)").next().unwrap().rsplit_once(", ").map_or(l, |p| p.0).to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
    let o = lgmf(&["quantum4", &p1_x4, "--g", "z1*u2 - 1/2*T"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lgmf(&["quantum4", &p2]).status.code(), Some(2));
}
