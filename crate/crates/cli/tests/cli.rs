use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn zca(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zca")).args(args).current_dir(cwd).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn lech_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "lech.rat", "f = 1/(1-(1+u)*t) - 1/(1-u*t) - 1/(1-t)\n");
    let o = zca(&["build", "--field", "GF(2)(u)", "--input", "lech.rat", "-o", "lech.dfa.json", "--dot", "lech.dot"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    dir
}

#[test]
fn build_then_enumerate_and_decide() {
    let dir = lech_dir();
    let d = dir.path();
    let o = zca(&["enum", "lech.dfa.json", "--max", "20"], d);
    assert_eq!(stdout(&o).trim(), "1 2 4 8 16");
    let o = zca(&["decide", "finite", "lech.dfa.json"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("infinite", Some(1)));
    let o = zca(&["decide", "empty", "lech.dfa.json"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("nonempty", Some(1)));
    let o = zca(&["decide", "periodic", "lech.dfa.json"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("aperiodic", Some(1)));
    let dot = std::fs::read_to_string(d.join("lech.dot")).unwrap();
    assert!(dot.starts_with("digraph") && dot.contains("/1\""));
}

#[test]
fn empty_set_and_periodic_set() {
    let dir = lech_dir();
    let d = dir.path();
    zca(&["ops", "diff", "lech.dfa.json", "lech.dfa.json", "-o", "empty.dfa.json"], d);
    let o = zca(&["decide", "empty", "empty.dfa.json"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("empty", Some(0)));
    let o = zca(&["decide", "periodic", "empty.dfa.json"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("periodic"));
    let o = zca(&["decide", "finite", "empty.dfa.json"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("finite", Some(0)));
}

#[test]
fn boolean_operations() {
    let dir = lech_dir();
    let d = dir.path();
    zca(&["ops", "complement", "lech.dfa.json", "-o", "c.json"], d);
    assert_eq!(stdout(&zca(&["enum", "c.json", "--max", "10"], d)).trim(), "0 3 5 6 7 9 10");
    zca(&["ops", "or", "lech.dfa.json", "c.json", "-o", "all.json"], d);
    zca(&["ops", "complement", "all.json", "-o", "none.json"], d);
    assert_eq!(zca(&["decide", "empty", "none.json"], d).status.code(), Some(0));
    zca(&["ops", "xor", "lech.dfa.json", "c.json", "-o", "x.json"], d);
    assert_eq!(zca(&["ops", "eq", "x.json", "all.json"], d).status.code(), Some(0));
    assert_eq!(zca(&["ops", "eq", "lech.dfa.json", "c.json"], d).status.code(), Some(1));
    zca(&["ops", "reverse", "lech.dfa.json", "-o", "r.json"], d);
    assert_eq!(stdout(&zca(&["enum", "r.json", "--max", "20"], d)).trim(), "1 2 4 8 16");
    assert_eq!(zca(&["ops", "eq", "lech.dfa.json", "r.json"], d).status.code(), Some(0));
    zca(&["ops", "minimize", "lech.dfa.json", "-o", "m.json"], d);
    assert_eq!(zca(&["ops", "eq", "lech.dfa.json", "m.json"], d).status.code(), Some(0));
}

#[test]
fn membership_queries() {
    let dir = lech_dir();
    let d = dir.path();
    let o = zca(&["member", "lech.dfa.json", "8"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("member", Some(0)));
    let o = zca(&["member", "lech.dfa.json", "6"], d);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("not member", Some(1)));
    let o = zca(&["member", "lech.dfa.json", "-3"], d);
    assert_eq!(o.status.code(), Some(1));
    let o = zca(&["member", "lech.dfa.json", "--words", "+1000"], d);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn recurrence_problem() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(
        d,
        "lech.toml",
        "[field]\nspec = \"GF(3)(u)\"\n\n[[recurrence]]\ncoefficients = [\"2+2*u\", \"-(1+3*u+u^2)\", \"u+u^2\"]\n\
         initial = [\"-1\", \"0\", \"(1+u)^2-u^2-1\"]\n",
    );
    let o = zca(&["recurrence", "lech.toml", "--max", "30", "-o", "z.json"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("empty: no") && text.contains("finite: no"), "{text}");
    assert_eq!(stdout(&zca(&["enum", "z.json", "--max", "30"], d)).trim(), "1 3 9 27");
}

#[test]
fn sunit_problem_and_group_membership() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(
        d,
        "xy.toml",
        "[field]\nspec = \"GF(2)(u)\"\n\n[generators]\nelements = [\"u\", \"1-u\"]\n\n[equation]\ncoefficients = [\"1\", \"1\"]\n",
    );
    let o = zca(&["sunit", "xy.toml", "--max", "2", "-o", "s.json"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("finite: no") && text.contains("(1,0,0,1)"), "{text}");
    assert_eq!(zca(&["member", "s.json", "4", "0", "0", "4"], d).status.code(), Some(0));
    assert_eq!(zca(&["member", "s.json", "-2", "2", "-2", "0"], d).status.code(), Some(0));
    assert_eq!(zca(&["member", "s.json", "3", "0", "0", "3"], d).status.code(), Some(1));
    let o = zca(&["enum", "s.json", "--max", "1"], d);
    assert_eq!(stdout(&o).trim(), "(-1,0,-1,1) (-1,1,-1,0) (0,-1,1,-1) (0,1,1,0) (1,-1,0,-1) (1,0,0,1)");
}

#[test]
fn matrix_problem() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(
        d,
        "unip.toml",
        "[field]\nspec = \"GF(2)\"\n\n[matrices]\ndim = 2\nlist = [[[\"1\", \"1\"], [\"0\", \"1\"]]]\n\n[variety]\nequations = [\"x12\"]\n",
    );
    let o = zca(&["matrix", "unip.toml", "--max", "6", "--json"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["elements"], serde_json::json!([[-6], [-4], [-2], [0], [2], [4], [6]]));
    assert_eq!(v["finite"], false);
}

#[test]
fn bound_table_and_json() {
    let dir = TempDir::new().unwrap();
    let o = zca(&["bound", "--p", "2", "--d", "1", "--H", "3", "--s", "2"], dir.path());
    assert!(stdout(&o).lines().next().unwrap().ends_with("24"));
    let o = zca(&["bound", "--p", "2", "--d", "1", "--H", "3", "--s", "2", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
    let o = zca(&["bound", "--p", "4", "--d", "1", "--H", "3", "--s", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn error_codes_and_json_errors() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let o = zca(&["--json-errors", "enum", "missing.json", "--max", "3"], d);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(v["exit_code"], 2);
    assert_eq!(v["kind"], "io");
    write(d, "bad.rat", "f = 1/(1-u*t\n");
    let o = zca(&["build", "--field", "GF(2)(u)", "--input", "bad.rat"], d);
    assert_eq!(o.status.code(), Some(2));
    write(d, "big.rat", "f = 1/(1-(1+u)*t) - 1/(1-u*t) - 1/(1-t)\n");
    let o = zca(&["--json-errors", "build", "--field", "GF(5)(u)", "--input", "big.rat", "--ceiling", "2"], d);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = zca(&["decide", "sideways", "x.json"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn builds_are_byte_identical() {
    let a = lech_dir();
    let b = lech_dir();
    for f in ["lech.dfa.json", "lech.dot"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn jobs_flag_does_not_change_artifacts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(
        d,
        "xy.toml",
        "[field]\nspec = \"GF(2)(u)\"\n\n[generators]\nelements = [\"u\", \"1-u\"]\n\n[equation]\ncoefficients = [\"1\", \"1\"]\n",
    );
    zca(&["--jobs", "1", "sunit", "xy.toml", "-o", "one.json"], d);
    zca(&["--jobs", "3", "sunit", "xy.toml", "-o", "three.json"], d);
    assert_eq!(std::fs::read(d.join("one.json")).unwrap(), std::fs::read(d.join("three.json")).unwrap());
}
