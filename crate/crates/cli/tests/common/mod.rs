use std::path::{Path, PathBuf};
use std::process::Command;

/// `(name, arguments, expected exit code)`; stdout is frozen in `tests/golden/<name>.json`.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("validate_six", &["validate", "tests/fixtures/six.json"], 0),
    ("validate_line_metric", &["validate", "tests/fixtures/line.json"], 0),
    ("validate_chain3", &["validate", "tests/fixtures/chain3.json"], 1),
    ("validate_empty", &["validate", "tests/fixtures/empty.json"], 2),
    ("validate_missing_file", &["validate", "tests/fixtures/no_such_file.json"], 2),
    ("validate_resource_bound", &["--max-support", "4", "validate", "tests/fixtures/six.json"], 3),
    ("cellularize_triangle", &["cellularize", "tests/fixtures/triangle.json"], 0),
    ("cellularize_chain3", &["cellularize", "tests/fixtures/chain3.json"], 2),
    ("partition_six", &["partition", "tests/fixtures/six.json"], 0),
    ("partition_six_r1", &["partition", "tests/fixtures/six.json", "--radius", "r1"], 0),
    ("partition_triangle", &["partition", "tests/fixtures/triangle.json"], 1),
    ("ultrametrize_isosceles", &["ultrametrize", "tests/fixtures/isosceles.json"], 0),
    ("ultrametrize_six", &["ultrametrize", "tests/fixtures/six.json"], 0),
    ("ultrametrize_line", &["ultrametrize", "tests/fixtures/line.json"], 1),
    ("decompose_six", &["decompose", "tests/fixtures/six.json"], 0),
    ("decompose_six_basepoint", &["decompose", "tests/fixtures/six.json", "--basepoint", "p3"], 0),
    ("decompose_unknown_basepoint", &["decompose", "tests/fixtures/six.json", "--basepoint", "zz"], 2),
    ("decompose_uneven", &["decompose", "tests/fixtures/uneven.json"], 1),
    ("decompose_repeated", &["decompose", "tests/fixtures/six_repeated.json"], 1),
    ("decompose_repeated_dedup", &["decompose", "tests/fixtures/six_repeated.json", "--dedup-radii"], 0),
    ("asymorph_z4_klein", &["asymorph", "tests/fixtures/z4.json", "tests/fixtures/klein.json"], 0),
    ("asymorph_z8_z2cubed", &["asymorph", "tests/fixtures/z8.json", "tests/fixtures/z2cubed.json"], 0),
    ("asymorph_mismatch", &["asymorph", "tests/fixtures/z4.json", "tests/fixtures/z4_fine.json"], 1),
    ("asymorph_same", &["asymorph", "tests/fixtures/z4.json", "tests/fixtures/z4.json"], 0),
    ("gen_ultrametric", &["gen-ultrametric", "--seed", "3", "--points", "6", "--depth", "3"], 0),
    ("gen_chain", &["gen-chain", "--seed", "1", "--levels", "3"], 0),
    ("gen_chain_too_large", &["--max-support", "64", "gen-chain", "--seed", "1", "--levels", "12"], 3),
];

pub fn golden_path(name: &str) -> PathBuf {
    Path::new("tests/golden").join(format!("{name}.json"))
}

pub struct Run {
    pub stdout: String,
    pub code: i32,
}

pub fn run_cli(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ballean"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        code: out.status.code().expect("exit code"),
    }
}

/// Runs one case against its golden file; `UPDATE_GOLDEN=1` rewrites the file instead.
pub fn check_case(name: &str, args: &[&str], code: i32) -> Result<(), String> {
    let run = run_cli(args);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &run.stdout).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if run.code != code {
        return Err(format!("{name}: exit {} expected {code}", run.code));
    }
    if run.stdout != expected {
        return Err(format!("{name}: output differs\n got: {}\nwant: {}", run.stdout, expected));
    }
    Ok(())
}
