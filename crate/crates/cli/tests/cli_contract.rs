//! Surface contract of the nflux binary: deterministic artifacts and the
//! documented exit codes.

use std::path::Path;
use std::process::Command;

fn nflux() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nflux"))
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn box_outputs_are_byte_identical_across_runs() {
    let dir_a = std::env::temp_dir().join("nflux-test-box-a");
    let dir_b = std::env::temp_dir().join("nflux-test-box-b");
    for dir in [&dir_a, &dir_b] {
        let status = nflux()
            .args(["box", "--half-lengths", "1,1", "--grid", "12", "--out-dir"])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read(&dir_a, "box-1x1-sweep.csv"), read(&dir_b, "box-1x1-sweep.csv"));
    assert_eq!(read(&dir_a, "box-1x1-summary.json"), read(&dir_b, "box-1x1-summary.json"));
    let csv = read(&dir_a, "box-1x1-sweep.csv");
    assert!(csv.starts_with("# schema neumann-flux/sweep-csv/v1"));
    assert!(csv.lines().nth(1).unwrap().starts_with("# config"));
}

#[test]
fn sweep_is_identical_with_and_without_parallelism() {
    let dir_par = std::env::temp_dir().join("nflux-test-sweep-par");
    let dir_ser = std::env::temp_dir().join("nflux-test-sweep-ser");
    let base = ["sweep", "--domain", "equilateral", "--side", "2", "--grid", "8", "--target-nodes", "500"];
    let status = nflux().args(base).arg("--out-dir").arg(&dir_par).status().unwrap();
    assert!(status.success());
    let status = nflux().args(base).args(["--serial", "--out-dir"]).arg(&dir_ser).status().unwrap();
    assert!(status.success());
    assert_eq!(read(&dir_par, "equilateral-2-sweep.csv"), read(&dir_ser, "equilateral-2-sweep.csv"));
}

#[test]
fn exit_codes_follow_the_contract() {
    // 2: bad arguments (unknown domain, invalid spec values, clap errors)
    let out = nflux().args(["classify", "--domain", "nonsense", "--no-files"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error"), "stderr should carry machine-readable error json: {err}");
    let out = nflux().args(["ball", "--dim", "1", "--no-files"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = nflux().arg("not-a-subcommand").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // 0: success
    let out = nflux().args(["sector", "--alpha0", "--no-files"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("1.1748"), "{stdout}");
}

#[test]
fn classify_exports_a_readable_mesh() {
    let dir = std::env::temp_dir().join("nflux-test-mesh");
    std::fs::create_dir_all(&dir).unwrap();
    let mesh_path = dir.join("square.mesh.txt");
    let status = nflux()
        .args(["classify", "--domain", "square", "--target-nodes", "500", "--no-files", "--export-mesh"])
        .arg(&mesh_path)
        .arg("--out-dir")
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&mesh_path).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap().split(' ').map(|t| t.parse().unwrap()).collect();
    assert_eq!(header.len(), 3);
    assert!(header[0] >= 500);
    assert_eq!(text.lines().count(), 1 + header[0] + header[1] + header[2]);
}
