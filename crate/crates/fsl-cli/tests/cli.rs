//! End-to-end tests of the `fsl` binary: determinism, config-echo
//! reproduction, exit codes, and figure bundles.

use std::path::Path;
use std::process::{Command, Output};

fn fsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn identical_configs_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let res = fsl(&[
            "evolve",
            "--initial",
            "fock:5,down",
            "--gamma",
            "0.3",
            "--t-end",
            "10",
            "--samples",
            "11",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    assert_eq!(read(&a), read(&b));
}

#[test]
fn header_echo_reproduces_the_payload() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("run.csv");
    let res = fsl(&[
        "evolve",
        "--initial",
        "fock:5,down",
        "--gamma",
        "0.25",
        "--t-end",
        "8",
        "--samples",
        "9",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    // strip `# key = value` lines into a config document; drop derived notes
    let text = read(&first);
    let config_body: String = text
        .lines()
        .take_while(|l| l.starts_with("# "))
        .map(|l| l.trim_start_matches("# "))
        .filter(|l| {
            let key = l.split('=').next().unwrap().trim();
            !key.starts_with("p_mode_") && key != "columns_note" && key != "mode_projections"
        })
        .collect::<Vec<_>>()
        .join("\n");
    let config_path = dir.path().join("run.conf");
    std::fs::write(&config_path, config_body).unwrap();

    let second = dir.path().join("rerun.csv");
    let res = fsl(&[
        "evolve",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(read(&first), read(&second));
}

#[test]
fn spectrum_nh_reports_six_gain_pairs_at_gamma_half() {
    let res = fsl(&["spectrum", "--kind", "nh", "--gamma", "0.5"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    let mut gain_rows = 0;
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() == 4 && (cells[1] == "+" || cells[1] == "-") {
            let im: f64 = cells[3].parse().unwrap();
            if im != 0.0 {
                gain_rows += 1;
                assert!(im.abs() < 0.5, "|Im E| must stay below gamma: {line}");
                let n: usize = cells[0].parse().unwrap();
                assert!(n <= 5, "imaginary pair beyond n = 5: {line}");
            }
        }
    }
    assert_eq!(gain_rows, 12, "six conjugate pairs expected");
}

#[test]
fn exit_codes_classify_failures() {
    // invalid parameter: configuration error
    let res = fsl(&["spectrum", "--kind", "nh", "--gamma", "-0.2"]);
    assert_eq!(res.status.code(), Some(1));

    // unknown config key: configuration error with line context
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "scenario = evolve\nwavelength = 7\n").unwrap();
    let res = fsl(&["evolve", "--config", bad.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("wavelength"));

    // cutoff too small for the requested state: numerical guard
    let res = fsl(&[
        "evolve",
        "--initial",
        "fock:50,down",
        "--gamma",
        "0.15",
        "--n-max",
        "80",
        "--t-end",
        "10",
        "--samples",
        "3",
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("cutoff too small"));
}

#[test]
fn evolve_at_exceptional_point_omits_mode_columns() {
    // gamma = 0.4 puts the n = 3 block at its EP: mode projections are
    // undefined there, but the bound weight is still emitted
    let res = fsl(&[
        "evolve",
        "--initial",
        "fock:5,down",
        "--gamma",
        "0.4",
        "--t-end",
        "5",
        "--samples",
        "3",
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("# mode_projections = omitted: exceptional point at n_c = 3"));
    let header = text.lines().find(|l| l.starts_with("t,")).unwrap();
    assert_eq!(header, "t,mean_n,entropy,p_bound");
}

#[test]
fn json_format_emits_config_and_rows() {
    let res = fsl(&[
        "spectrum",
        "--kind",
        "hermitian",
        "--n-levels",
        "3",
        "--format",
        "json",
    ]);
    assert!(res.status.success());
    let value: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(value["config"]["scenario"], "spectrum_hermitian");
    assert_eq!(value["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn figure_a1_bundle_has_unit_entropy_at_every_ep() {
    let dir = tempfile::tempdir().unwrap();
    let res = fsl(&[
        "figures",
        "--which",
        "figA1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = read(&dir.path().join("figA1.csv"));
    let mut ep_rows = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with('n')) {
        let cells: Vec<&str> = line.split(',').collect();
        let n: usize = cells[0].parse().unwrap();
        let gamma: f64 = cells[1].parse().unwrap();
        let s_over_ln2: f64 = cells[3].parse().unwrap();
        let gamma_c = 0.2 * ((n + 1) as f64).sqrt();
        if (gamma - gamma_c).abs() < 1e-12 {
            ep_rows += 1;
            assert_eq!(s_over_ln2, 1.0, "coalesced eigenstate is maximally entangled");
        }
        if gamma < gamma_c {
            assert!((s_over_ln2 - 1.0).abs() < 1e-10, "plateau violated: {line}");
        } else if gamma > gamma_c {
            assert!(s_over_ln2 < 1.0, "decay violated: {line}");
        }
    }
    assert_eq!(ep_rows, 6, "one exact-EP row per level");
}

#[test]
fn figure_2_bundle_writes_every_panel() {
    let dir = tempfile::tempdir().unwrap();
    let res = fsl(&[
        "figures",
        "--which",
        "fig2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for name in [
        "fig2_a.csv",
        "fig2_b.csv",
        "fig2_c_left.csv",
        "fig2_c_right.csv",
        "fig2_d.csv",
        "fig2_e.csv",
    ] {
        let path = dir.path().join(name);
        assert!(path.exists(), "missing {name}");
        assert!(read(&path).lines().count() > 5, "panel {name} looks empty");
    }
    // the left edge state must be left-localized
    let left = read(&dir.path().join("fig2_c_left.csv"));
    let first_site_weight: f64 = left
        .lines()
        .find(|l| l.starts_with("0,"))
        .and_then(|l| l.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap();
    assert!(first_site_weight > 0.5, "site 0 weight {first_site_weight}");
}
