//! End-to-end runs of the binary: exit codes, file round trips, determinism.

use std::path::Path;
use std::process::{Command, Output};

use hyperpolygon::quiver::{sample_exact, AnyPoint};
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperpolygon"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn betti_and_genericity_outputs() {
    let o = run(&["betti", "-r", "2", "-n", "4", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "r,n,t_degree,coefficient\n2,4,0,1\n2,4,2,4\n"
    );

    let o = run(&["genericity", "-r", "2", "--alpha", "1,1,1,1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        v,
        json!({"generic": false, "witness": {"rprime": 1, "S": [1, 2]}})
    );

    let o = run(&["betti-table", "-r", "2", "--n-max", "6"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("2,6,4,"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["betti", "-r", "0", "-n", "4"])), 3);
    assert_eq!(code(&run(&["betti", "-n", "4"])), 3);
    assert_eq!(code(&run(&["sample", "-r", "2", "-n", "3"])), 1);
    assert_eq!(
        code(&run(&[
            "sample",
            "-r",
            "2",
            "-n",
            "4",
            "--solve",
            "--alpha",
            "1,1,1,2",
            "--max-iter",
            "0"
        ])),
        2
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&run(&["hitchin", "--point", path(&bad)])), 3);

    // y_1 x_1 != 0: a well-formed file off the complex level set
    let off = dir.path().join("off.json");
    let mut v = sample_exact(2, 4, 0).unwrap().to_json();
    v["y"][0][0] = json!({"re": "1/1", "im": "0/1"});
    v["y"][0][1] = json!({"re": "0/1", "im": "0/1"});
    v["x"][0][0] = json!({"re": "1/1", "im": "0/1"});
    std::fs::write(&off, v.to_string()).unwrap();
    assert_eq!(code(&run(&["hitchin", "--point", path(&off)])), 1);

    let float = dir.path().join("float.json");
    assert_eq!(
        code(&run(&[
            "sample",
            "-r",
            "2",
            "-n",
            "5",
            "--solve",
            "--alpha",
            "1,1,1,2,2",
            "-o",
            path(&float)
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "spectral",
            "--point",
            path(&float),
            "--check-orders"
        ])),
        3
    );
    assert_eq!(code(&run(&["spectral", "--point", path(&float)])), 0);
}

#[test]
fn exact_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    assert_eq!(
        code(&run(&[
            "sample",
            "-r",
            "3",
            "-n",
            "6",
            "--seed",
            "7",
            "-o",
            path(&file)
        ])),
        0
    );
    let text = std::fs::read_to_string(&file).unwrap();
    let AnyPoint::Exact(p) = AnyPoint::from_json_str(&text).unwrap() else {
        panic!("flavor")
    };
    assert_eq!(p, sample_exact(3, 6, 7).unwrap());

    let stdout = run(&["sample", "-r", "3", "-n", "6", "--seed", "7"]).stdout;
    assert_eq!(String::from_utf8(stdout).unwrap(), text);

    for cmd in ["hitchin", "commute", "jacobian"] {
        let o = run(&[cmd, "--point", path(&file)]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&[
        "spectral",
        "--point",
        path(&file),
        "--check-orders",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("i,p,order,bound,pass\n"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let point = dir.path().join("p.json");
    run(&[
        "sample",
        "-r",
        "3",
        "-n",
        "7",
        "--seed",
        "3",
        "-o",
        path(&point),
    ]);
    let cases: Vec<Vec<&str>> = vec![
        vec!["sample", "-r", "3", "-n", "7", "--seed", "3"],
        vec![
            "sample",
            "-r",
            "3",
            "-n",
            "6",
            "--seed",
            "2",
            "--solve",
            "--alpha",
            "1,1,1,1,1,2",
        ],
        vec!["betti", "-r", "3", "-n", "9"],
        vec!["hitchin", "--point", path(&point)],
        vec!["jacobian", "--point", path(&point)],
        vec![
            "spectral",
            "--point",
            path(&point),
            "--check-orders",
            "--probe",
        ],
        vec!["plot-data", "-r", "3", "-n", "12"],
        vec!["fixtures"],
    ];
    for args in cases {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(
            code(&a),
            0,
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
