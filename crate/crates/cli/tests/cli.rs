use std::process::{Command, Output};

fn insperc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_insperc"))
        .args(args)
        .output()
        .expect("spawn insperc")
}

fn stdout(args: &[&str]) -> String {
    let out = insperc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sweep_is_byte_identical_across_runs_and_threads() {
    let base = ["sweep", "--trials", "30", "--n-max", "120", "--seed", "42"];
    let one = stdout(&[&base[..], &["--threads", "1"]].concat());
    let again = stdout(&[&base[..], &["--threads", "1"]].concat());
    let four = stdout(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, again);
    assert_eq!(one, four);
    let other_seed = stdout(&["sweep", "--trials", "30", "--n-max", "120", "--seed", "43"]);
    assert_ne!(one, other_seed);
}

#[test]
fn sweep_csv_echoes_config_and_has_all_columns() {
    let text = stdout(&[
        "sweep",
        "--trials",
        "5",
        "--n-max",
        "10",
        "--l-min",
        "0.05",
        "--independent",
    ]);
    assert!(text.starts_with("# command = \"sweep\"\n"));
    for key in [
        "# trials = 5",
        "# n_max = 10",
        "# l_min = 0.05",
        "# seed = 1",
        "# incremental = false",
    ] {
        assert!(text.lines().any(|l| l == key), "missing {key}");
    }
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "N,l_normal_sim,l_threat_sim,l_threat_exact,l_threat_percolation,ratio"
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (i + 1).to_string());
        let normal: f64 = r[1].parse().unwrap();
        assert!((normal - 1.0 / (i as f64 + 2.0)).abs() < 1e-9);
    }
}

#[test]
fn large_min_latitude_puts_the_minimum_near_two() {
    let v = json(&[
        "sweep", "--trials", "2000", "--n-max", "20", "--l-min", "0.5", "--format", "json",
    ]);
    let rows = v["rows"].as_array().unwrap();
    let exact_argmin = rows
        .iter()
        .min_by(|a, b| {
            a["l_threat_exact"]
                .as_f64()
                .partial_cmp(&b["l_threat_exact"].as_f64())
                .unwrap()
        })
        .unwrap()["N"]
        .as_u64()
        .unwrap();
    assert!((1..=3).contains(&exact_argmin), "argmin {exact_argmin}");
    let sim_argmin = rows
        .iter()
        .min_by(|a, b| {
            a["l_threat_sim"]
                .as_f64()
                .partial_cmp(&b["l_threat_sim"].as_f64())
                .unwrap()
        })
        .unwrap()["N"]
        .as_u64()
        .unwrap();
    assert!(
        (1..=4).contains(&sim_argmin),
        "simulated argmin {sim_argmin}"
    );
}

#[test]
fn exact_report_values() {
    let v = json(&["exact", "--n", "100", "--l-min", "0.01", "--format", "json"]);
    let r = &v["report"];
    assert!((r["l_exact"].as_f64().unwrap() - 0.026_722_321_811_282_506).abs() < 1e-12);
    assert!(
        (r["occupation_probability"].as_f64().unwrap() - 0.635_781_020_428_476_7).abs() < 1e-12
    );
    assert_eq!(r["n_min"].as_f64().unwrap(), 100.0);
    assert_eq!(r["regime"], "tipping-point");
    assert_eq!(v["config"]["n"], 100);
}

#[test]
fn classify_examples() {
    for (n, want) in [
        ("5", "under-regulated"),
        ("50", "possibly-optimal"),
        ("100", "tipping-point"),
        ("500", "over-regulated"),
    ] {
        let v = json(&["classify", "--n", n, "--l-min", "0.01", "--format", "json"]);
        assert_eq!(v["report"]["regime"], want, "N = {n}");
    }
    let text = stdout(&["classify", "--n", "100", "--l-min", "0.01"]);
    assert!(text.starts_with("regime: tipping-point"));
    let v = json(&[
        "classify",
        "--n",
        "100",
        "--l-min",
        "0.01",
        "--cutoff-tipping-point",
        "0.3",
        "--cutoff-over-regulated",
        "1.0",
        "--format",
        "json",
    ]);
    assert_eq!(v["report"]["regime"], "tipping-point");
    let v = json(&[
        "classify",
        "--n",
        "110",
        "--l-min",
        "0.01",
        "--cutoff-over-regulated",
        "1.0",
        "--format",
        "json",
    ]);
    assert_eq!(v["report"]["regime"], "over-regulated");
}

#[test]
fn lattice_threshold_bethe_and_linear() {
    let text = stdout(&[
        "lattice-threshold",
        "--geometry",
        "bethe",
        "--z",
        "3",
        "--geometry",
        "linear-1d",
        "--size",
        "10000",
        "--trials",
        "50",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows[0][0], "bethe-z3");
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.5);
    assert_eq!(rows[0][5], "analytic");
    assert_eq!(rows[1][0], "linear-1d");
    assert!(rows[1][3].parse::<f64>().unwrap() > 0.99);
}

#[test]
fn spacing_cdf_tracks_exponential() {
    let text = stdout(&[
        "spacing-cdf",
        "--n",
        "100",
        "--trials",
        "2000",
        "--grid-points",
        "20",
    ]);
    let ks: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# ks_exponential = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(ks < 0.02, "ks {ks}");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 20);
    for r in rows {
        let emp: f64 = r[1].parse().unwrap();
        let exp: f64 = r[2].parse().unwrap();
        assert!((emp - exp).abs() < 0.02);
    }
}

#[test]
fn config_file_round_trip_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out.csv");
    let direct = stdout(&[
        "sweep",
        "--trials",
        "7",
        "--n-max",
        "15",
        "--seed",
        "5",
        "--write-config",
        cfg.to_str().unwrap(),
    ]);
    let saved = std::fs::read_to_string(&cfg).unwrap();
    assert!(saved.contains("trials = 7"));

    let via_file = stdout(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(via_file.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), direct);

    let overridden = stdout(&["sweep", "--config", cfg.to_str().unwrap(), "--seed", "6"]);
    assert!(overridden.contains("# seed = 6"));
    assert!(overridden.contains("# trials = 7"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        insperc(&["exact", "--n", "10", "--l-min", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(insperc(&["exact", "--l-min", "0.1"]).status.code(), Some(2));
    assert_eq!(insperc(&["sweep", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(
        insperc(&["sweep", "--format", "xml"]).status.code(),
        Some(2)
    );
    assert_eq!(
        insperc(&["sweep", "--format", "text", "--n-max", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        insperc(&["lattice-threshold", "--geometry", "fcc-3d"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        insperc(&["exact", "--n", "100000", "--l-min", "0.9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        insperc(&["sweep", "--n-max", "3", "--out", "/nonexistent-dir/out.csv"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        insperc(&["sweep", "--config", "/nonexistent-dir/cfg.toml"])
            .status
            .code(),
        Some(4)
    );
    let bad = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(bad.path(), "trials = 3\nbogus = 1\n").unwrap();
    assert_eq!(
        insperc(&["sweep", "--config", bad.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
