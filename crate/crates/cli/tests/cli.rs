use std::path::Path;
use std::process::{Command, Output};

fn hmelas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmelas")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_domain(dir: &Path, json: &str) -> String {
    let path = dir.join("domain.json");
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

const UNIT_BALL: &str = r#"{"type":"cc_ball","center":[0,0,0],"radius":1}"#;

#[test]
fn axis_distance_is_two_root_pi() {
    let o = hmelas(&["dist", "--from", "0,0,0", "--to", "0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3.5449077"), "{}", stdout(&o));
}

#[test]
fn negative_coordinates_parse() {
    let o = hmelas(&["dist", "--from", "-1,0,0", "--to", "1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2.00000000e0"));
}

#[test]
fn missing_domain_file_names_the_key() {
    let o = hmelas(&["inradius", "--resolution", "16"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("domain_file"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn malformed_inputs_fail_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_domain(dir.path(), r#"{"type":"box","min":[0,0,0]}"#);
    for args in [
        vec!["inradius", "--domain-file", bad.as_str()],
        vec!["inradius", "--domain-file", "/nonexistent/domain.json"],
        vec!["dist", "--from", "0,0", "--to", "0,0,1"],
        vec!["eigen", "--resolution", "abc"],
        vec!["tube", "--domain-file", bad.as_str(), "--beta", "0.1"],
    ] {
        let o = hmelas(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr(&o).trim_end().lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
    let o = hmelas(&["inradius", "--domain-file", bad.as_str()]);
    assert!(stderr(&o).contains("domain_file"));
}

#[test]
fn verify_on_unit_ball_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write_domain(dir.path(), UNIT_BALL);
    let out = dir.path().join("report.csv");
    let o = hmelas(&[
        "verify",
        "--domain-file",
        &domain,
        "--resolution",
        "24",
        "--num-eigs",
        "30",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,riesz,hl,melas,improved,margin_hl,margin_melas,margin_improved"));
    assert_eq!(lines.count(), 50);
    assert!(!csv.contains('\r'));
}

#[test]
fn reports_are_byte_identical_and_formats_agree() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write_domain(dir.path(), r#"{"type":"box","min":[0,0,0],"max":[1,1,1]}"#);
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let run = |out: &str, format: &str| {
        let o = hmelas(&[
            "verify",
            "--domain-file",
            &domain,
            "--resolution",
            "12",
            "--num-eigs",
            "10",
            "--out",
            out,
            "--format",
            format,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    };
    run(&path("a.csv"), "csv");
    run(&path("b.csv"), "csv");
    run(&path("a.json"), "json");
    let a = std::fs::read(path("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(path("b.csv")).unwrap());

    let csv = String::from_utf8(a).unwrap();
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path("a.json")).unwrap()).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    for (i, line) in csv.lines().skip(1).enumerate() {
        for (name, cell) in header.iter().zip(line.split(',')) {
            if cell.is_empty() {
                assert!(json[name][i].is_null());
            } else {
                assert_eq!(json[name][i].as_f64().unwrap(), cell.parse::<f64>().unwrap(), "{name}[{i}]");
            }
        }
    }
}

#[test]
fn eigen_report_has_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write_domain(dir.path(), UNIT_BALL);
    let out = dir.path().join("eigs.csv");
    let o = hmelas(&[
        "eigen",
        "--domain-file",
        &domain,
        "--resolution",
        "12",
        "--num-eigs",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.starts_with("index,eigenvalue,residual\n1,"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn lambda_beyond_coverage_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write_domain(dir.path(), UNIT_BALL);
    let o =
        hmelas(&["verify", "--domain-file", &domain, "--resolution", "12", "--num-eigs", "5", "--lambda-max", "1e6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("coverage"), "{}", stderr(&o));
    let o =
        hmelas(&["verify", "--domain-file", &domain, "--resolution", "12", "--num-eigs", "5", "--lambda-points", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unwritable_output_is_an_error() {
    let o = hmelas(&["dist", "--from", "0,0,0", "--to", "1,0,0", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("out"));
}

#[test]
fn geometry_commands_report_values() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write_domain(dir.path(), UNIT_BALL);
    let o = hmelas(&["inradius", "--domain-file", &domain, "--resolution", "16"]);
    assert!(stdout(&o).contains("inradius 1.00000000e0"), "{}", stdout(&o));
    let o = hmelas(&["tube", "--domain-file", &domain, "--resolution", "24", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("holds") || stdout(&o).contains("violated"));
    let o = hmelas(&["tube", "--domain-file", &domain, "--resolution", "16", "--beta", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("beta"));
    let o = hmelas(&["sigma", "--domain-file", &domain, "--resolution", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let o = hmelas(&["hardy", "--domain-file", &domain, "--resolution", "16", "--epsilon", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    // (1/2 + ε)² with |X d| = 1
    let text = stdout(&o);
    let q: f64 = text.split_whitespace().skip_while(|w| *w != "quotient").nth(1).unwrap().parse().unwrap();
    assert!((q - 1.0).abs() < 1e-3, "{text}");
}

#[test]
fn ball_volume_is_seeded() {
    let args = ["ball-vol", "--resolution", "32", "--samples", "20000", "--seed", "3"];
    let a = hmelas(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&hmelas(&args)));
    assert!(stdout(&a).starts_with("ball-vol quadrature 8.2587576"), "{}", stdout(&a));
}
