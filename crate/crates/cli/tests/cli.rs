use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn golden(name: &str) -> PathBuf {
    repo().join("designs/golden").join(name)
}

fn qcasim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcasim"))
        .args(args)
        .output()
        .expect("qcasim runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_layout(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(format!("{name}.qlf"));
    let text = format!("qca-layout v1 name={name} pitch_nm=20 cell_nm=18 dot_nm=5\n{body}");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn oracle_tables_match_goldens() {
    for name in ["rqg", "addsub"] {
        let o = qcasim(&["oracle", name]);
        assert_eq!(code(&o), 0);
        let want = fs::read_to_string(golden(&format!("{name}.csv"))).unwrap();
        assert_eq!(stdout(&o), want, "{name}");
    }
}

#[test]
fn oracle_reversibility_flag() {
    let o = qcasim(&["oracle", "rqg", "--check-reversible"]);
    assert!(stdout(&o).ends_with("reversible: yes\n"));
    let maj = stdout(&qcasim(&["oracle", "maj"]));
    assert_eq!(maj.lines().count(), 9);
    assert_eq!(maj.lines().next(), Some("A,B,C,Y"));
    assert_eq!(code(&qcasim(&["oracle", "nand"])), 2);
}

#[test]
fn verify_against_goldens() {
    for name in ["rqg", "addsub"] {
        let g = golden(&format!("{name}.csv"));
        let o = qcasim(&["verify", name, "--expect", g.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), format!("{name}: 8 rows, 0 mismatches\n"));
    }
}

#[test]
fn corrupted_golden_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(golden("addsub.csv")).unwrap();
    let bad = text.replace("\n1,1,0,1,1,1,1,0\n", "\n1,1,0,1,1,1,1,1\n");
    assert_ne!(bad, text);
    let path = dir.path().join("bad.csv");
    fs::write(&path, bad).unwrap();
    let o = qcasim(&["verify", "addsub", "--expect", path.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("row 7: inputs 111 expected 1111 got 1110"));
    let csv = qcasim(&[
        "verify",
        "addsub",
        "--expect",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&csv),
        "row,inputs,expected,actual\n7,111,1111,1110\n"
    );
}

#[test]
fn trace_columns() {
    let wire = stdout(&qcasim(&["simulate", "wire"]));
    assert_eq!(wire.lines().next(), Some("sample,in,out"));
    assert_eq!(wire.lines().count(), 16_001);
    let path = repo().join("designs/addsub.qlf");
    let o = qcasim(&["simulate", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).lines().next(),
        Some("sample,A,B,C,Cout,Bout,SumDiff,Gar")
    );
}

#[test]
fn trace_file_goes_to_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcasim(&[
        "simulate",
        "inverter",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("inverter_trace.csv").is_file());
}

#[test]
fn parse_and_validation_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.qlf");
    fs::write(&garbage, "not a layout\n").unwrap();
    assert_eq!(code(&qcasim(&["metrics", garbage.to_str().unwrap()])), 2);
    let rotated = write_layout(
        dir.path(),
        "rot",
        "cell x=0 y=0 layer=0 zone=0 kind=input:a rotated=1\ncell x=1 y=0 layer=0 zone=0 kind=output:y\n",
    );
    assert_eq!(code(&qcasim(&["simulate", &rotated])), 2);
    assert_eq!(
        code(&qcasim(&["simulate", "addsub", "--samples", "100"])),
        2
    );
    assert_eq!(code(&qcasim(&["simulate", "wire", "--tol", "-1"])), 2);
}

#[test]
fn non_convergence_exits_3() {
    let o = qcasim(&["simulate", "wire", "--tol", "1e-300"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn undecided_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    // the fixed cell cancels the input whenever a = 0
    let tie = write_layout(
        dir.path(),
        "tie",
        "cell x=0 y=0 layer=0 zone=0 kind=input:a\ncell x=1 y=0 layer=0 zone=0 kind=output:y\ncell x=2 y=0 layer=0 zone=0 kind=fixed:+1\n",
    );
    let expect = dir.path().join("tie.csv");
    fs::write(&expect, "a,y\n0,0\n1,1\n").unwrap();
    let o = qcasim(&["verify", &tie, "--expect", expect.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
}

#[test]
fn too_many_energy_inputs_exit_6() {
    let dir = tempfile::tempdir().unwrap();
    let body: String = (0..9)
        .map(|i| {
            let y = 3 * i;
            format!(
                "cell x=0 y={y} layer=0 zone=0 kind=input:i{i}\ncell x=1 y={y} layer=0 zone=0 kind=normal\ncell x=2 y={y} layer=0 zone=0 kind=output:o{i}\n"
            )
        })
        .collect();
    let nine = write_layout(dir.path(), "nine", &body);
    let o = qcasim(&["energy", &nine, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 6);
}

#[test]
fn metrics_text_and_csv() {
    let text = stdout(&qcasim(&["metrics", "addsub"]));
    assert!(text.contains("layers          1\n"));
    assert!(text.contains("rotated         0\n"));
    assert!(text.contains("latency_cycles  1.75000\n"));
    assert!(text.contains("constant_inputs 1\n"));
    assert!(text.contains("garbage_outputs 1\n"));
    let csv = stdout(&qcasim(&["metrics", "addsub", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("design,cells,rotated,layers,area_um2,latency_cycles,constant_inputs,garbage_outputs")
    );
    assert!(lines.next().unwrap().starts_with("addsub,216,0,1,"));
}

#[test]
fn energy_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = qcasim(&[
        "energy",
        "addsub",
        "--all",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let table = stdout(&o);
    let rows: Vec<Vec<f64>> = table
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!((r[3] - (r[1] + r[2])).abs() < 1e-5 * r[3]);
    }
    assert!(rows[0][1] < rows[1][1] && rows[1][1] < rows[2][1]);
    assert!(rows[0][2] > rows[1][2] && rows[1][2] > rows[2][2]);
    for f in ["0.5", "1.0", "1.5"] {
        for suffix in ["energy.csv", "power.txt", "power.pgm"] {
            assert!(
                dir.path().join(format!("addsub_{f}ek_{suffix}")).is_file(),
                "{f} {suffix}"
            );
        }
    }
}

#[test]
fn designs_listing_and_override() {
    let list = stdout(&qcasim(&["designs", "--format", "csv"]));
    assert_eq!(list.lines().count(), 9);
    let dir = tempfile::tempdir().unwrap();
    let o = qcasim(&["designs", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for name in ["wire", "addsub"] {
        let shipped = fs::read(repo().join(format!("designs/{name}.qlf"))).unwrap();
        assert_eq!(
            fs::read(dir.path().join(format!("{name}.qlf"))).unwrap(),
            shipped
        );
    }
    fs::rename(dir.path().join("wire.qlf"), dir.path().join("renamed.qlf")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qcasim"))
        .args(["simulate", "renamed"])
        .env("QCASIM_DESIGNS", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["simulate", "rqg", "--seedless"][..],
        &["energy", "xor2", "--all", "--out", "-"][..],
        &["metrics", "feynman", "--format", "csv"][..],
    ] {
        let dir = tempfile::tempdir().unwrap();
        let args: Vec<&str> = args
            .iter()
            .map(|&a| {
                if a == "-" {
                    dir.path().to_str().unwrap()
                } else {
                    a
                }
            })
            .collect();
        let a = qcasim(&args);
        let b = qcasim(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
