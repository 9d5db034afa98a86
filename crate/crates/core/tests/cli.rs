use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qcharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcharm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_output_reingests_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("series.json");
    fs::write(
        &spec,
        r#"{"kind": "series", "a": [0, 1, [0.1, -0.05]], "b": [0, 0.2, [0, 0.03]]}"#,
    )
    .unwrap();
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    let out = qcharm(&[
        "--spec",
        path(&spec),
        "--out",
        path(&first),
        "eval",
        "--z",
        "0.1,0.2",
        "--z",
        "-0.35,0.6",
        "--z",
        "0.123456789012345,-0.7",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = qcharm(&[
        "--spec",
        path(&spec),
        "--out",
        path(&second),
        "eval",
        "--points",
        path(&first),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn verify_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for tag in ["a", "b"] {
        let base = dir.path().join(tag);
        let out = qcharm(&[
            "--gallery",
            "poisson:phi=t+0.2*sin(t)",
            "--seed",
            "11",
            "--out",
            path(&base),
            "verify",
            "selfmap",
            "--probes",
            "40",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let read = |name: &str| fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.json"), read("b.json"));
    let meta: serde_json::Value = serde_json::from_slice(&read("a.meta.json")).unwrap();
    assert!(meta["timestamp"].is_u64());
}

#[test]
fn exit_codes() {
    let sharp = qcharm(&[
        "--gallery",
        "scaled:2",
        "--format",
        "json",
        "verify",
        "thm5",
        "--k",
        "1",
    ]);
    assert_eq!(sharp.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&sharp.stdout).unwrap();
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["name"] == "thm5.sharpness" && r["holds"] == true));

    // The displayed constant fails but is informational.
    let prop2 = qcharm(&["verify", "prop2"]);
    assert_eq!(prop2.status.code(), Some(0));

    // K declared below the measured dilatation.
    let low_k = qcharm(&["--gallery", "affine:1,0.5", "verify", "prop1", "--k", "2"]);
    assert_eq!(low_k.status.code(), Some(3));

    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    fs::write(&spec, r#"{"kind": "affine", "a": 0.5, "b": 1}"#).unwrap();
    let flipped = qcharm(&["--spec", path(&spec), "verify", "thm5"]);
    assert_eq!(flipped.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&flipped.stderr).contains("not sense-preserving"));

    fs::write(&spec, "{\n  \"a\": [0, 1]\n}").unwrap();
    let missing = qcharm(&["--spec", path(&spec), "eval", "--z", "0"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("kind"));

    assert_eq!(qcharm(&["verify", "lemma7"]).status.code(), Some(1));
}

#[test]
fn thm2_identity_rows() {
    let out = qcharm(&[
        "--format", "json", "verify", "thm2", "--radii", "0.5,1,2", "--k", "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn curve_constants_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let circle = dir.path().join("circle.txt");
    let text: String = (0..512)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 512.0;
            format!("{:.17} {:.17}\n", t.cos(), t.sin())
        })
        .collect();
    fs::write(&circle, text).unwrap();
    let out = qcharm(&["--format", "json", "constants", path(&circle)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lav = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["constant"] == "lavrentiev")
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    assert!((lav - std::f64::consts::FRAC_PI_2).abs() < 1e-3);

    let open = dir.path().join("open.txt");
    fs::write(&open, "# open\n0 0\n1 0\n1 1\n").unwrap();
    assert_eq!(qcharm(&["constants", path(&open)]).status.code(), Some(1));
}

#[test]
fn gallery_lists_builtins() {
    let out = qcharm(&["gallery"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "identity",
        "scaled:2",
        "affine:1,0.5",
        "poly:z+0.3*zbar^2",
        "poisson:phi=t+0.2*sin(t)",
    ] {
        assert!(text.contains(name), "{name}");
    }
}
