use std::process::{Command, Output};

fn memflip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memflip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_of(csv: &str, key: &str) -> f64 {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn coefficients_command() {
    let on = memflip(&[
        "coefficients",
        "--n",
        "2",
        "--eta",
        "0.6",
        "--eps",
        "0.3",
        "--flips",
        "on",
    ]);
    assert!(on.status.success());
    assert!((value_of(&stdout(&on), "signal") - 0.7817).abs() < 1e-4);
    let off = memflip(&[
        "coefficients",
        "--n",
        "2",
        "--eta",
        "0.6",
        "--eps",
        "0.3",
        "--flips",
        "off",
    ]);
    assert!((value_of(&stdout(&off), "signal") - 0.4423).abs() < 1e-4);
    let lossless = stdout(&memflip(&[
        "coefficients",
        "--n",
        "4",
        "--eta",
        "1",
        "--eps",
        "0.5",
    ]));
    assert_eq!(value_of(&lossless, "signal"), 1.0);
    for line in lossless.lines().skip(2) {
        let (name, v) = line.split_once(',').unwrap();
        if name != "single_use" {
            assert!(v.parse::<f64>().unwrap().abs() < 1e-12, "{line}");
        }
    }
}

#[test]
fn coefficients_json() {
    let o = memflip(&["coefficients", "--format", "json", "--flips", "off"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["memory"].as_f64().unwrap() - 0.1217).abs() < 1e-4);
    assert_eq!(v["single_use"].as_f64(), Some(0.6));
}

#[test]
fn fidelity_sweep_csv() {
    let o = memflip(&[
        "fidelity", "--n", "2", "--flips", "on", "--T", "3", "--alpha2", "8", "--grid", "6x11",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,eps,value"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 66);
    let at = |eta: f64, eps: f64| {
        rows.iter()
            .find(|r| (r[0] - eta).abs() < 1e-12 && (r[1] - eps).abs() < 1e-12)
            .unwrap()[2]
    };
    assert!((at(0.6, 0.3) - 0.5987).abs() < 5e-4);
    assert!((at(0.6, 0.0) - 0.3779).abs() < 5e-4);
    assert!((at(1.0, 0.7) - 1.0).abs() < 1e-12);
    let off = stdout(&memflip(&["fidelity", "--flips", "off", "--grid", "6x11"]));
    assert!(off.lines().any(|l| l.starts_with("0.6,0,0.377868")));
}

#[test]
fn entanglement_sweep_csv() {
    let o = memflip(&[
        "entanglement",
        "--n",
        "2",
        "--flips",
        "on",
        "--T",
        "1",
        "--mu",
        "0.6",
        "--grid",
        "6x11",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("eta,eps,d_minus,separable\n"));
    assert!(text.lines().any(|l| l == "0,0,1.0625,true"));
    let anchor = text.lines().find(|l| l.starts_with("0.6,0.3,")).unwrap();
    let fields: Vec<&str> = anchor.split(',').collect();
    assert!((fields[2].parse::<f64>().unwrap() - 0.2648).abs() < 5e-4);
    assert_eq!(fields[3], "false");
    assert!(text.lines().any(|l| l.starts_with("1,0.5,0.125,false")));
}

#[test]
fn sweeps_are_byte_stable() {
    let args = ["fidelity", "--grid", "21x21", "--n", "4"];
    assert_eq!(memflip(&args).stdout, memflip(&args).stdout);
    let args = ["entanglement", "--grid", "21x21", "--format", "json"];
    assert_eq!(memflip(&args).stdout, memflip(&args).stdout);
}

#[test]
fn default_grid_is_51_by_51() {
    let text = stdout(&memflip(&["entanglement"]));
    assert_eq!(text.lines().count(), 1 + 51 * 51);
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("memflip-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fid.json");
    let o = memflip(&[
        "fidelity",
        "--grid",
        "3x3",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
    assert!(v[0].get("value").is_some());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["coefficients", "--n", "3"],
        vec!["coefficients", "--eta", "1.5"],
        vec!["fidelity", "--grid", "1x5"],
        vec!["fidelity", "--grid", "banana"],
        vec!["entanglement", "--mu", "1.0", "--grid", "2x2"],
        vec!["fidelity", "--flips", "maybe"],
        vec!["frobnicate"],
    ] {
        let o = memflip(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_exits_zero() {
    let o = memflip(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("[PASS]")).count() >= 6);
    assert!(!text.contains("[FAIL]"));
}
