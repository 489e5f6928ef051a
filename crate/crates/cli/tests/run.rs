use std::path::{Path, PathBuf};
use std::process::Command as Process;

use hecke_cli::{parse_command, parse_program, run_program, Session};
use serde_json::Value;

const SAMPLES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/samples");
const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
const SCHEMA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/schemas/report.schema.json");

fn hecke(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .current_dir(dir)
        .env_remove("HECKE_COSET_CAP")
        .env_remove("HECKE_ORBIT_CAP")
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn samples() -> PathBuf {
    PathBuf::from(SAMPLES)
}

fn sample_programs() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(SAMPLES)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("pairs"))
        .collect();
    out.sort();
    out
}

/// Compares against `tests/golden/NAME`, or rewrites it when `HECKE_BLESS` is set.
fn golden(name: &str, actual: &str) {
    let path = Path::new(GOLDEN).join(name);
    if std::env::var_os("HECKE_BLESS").is_some() {
        std::fs::create_dir_all(GOLDEN).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

#[test]
fn spec_command_examples() {
    let (code, out, _) = hecke(&["tower", "--n", "3", "--seed", "abstract"], &samples());
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("xi(G_3, U_3) >= w*3 + 2"), "{out}");

    let (code, out, _) = hecke(&["verify", "bs(2)", "--depth", "3"], &samples());
    assert_eq!(code, 0);
    assert!(out.starts_with("verify bs(2) --depth 3: PASS"), "{out}");

    let (code, out, _) = hecke(&["filter", "compare", "z6.filter", "z2.filter", "--format", "json"], &samples());
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["results"]["factorization"], Value::Bool(true));
    assert_eq!(v["report"]["results"]["injective"], Value::Bool(false));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = samples();
    assert_eq!(hecke(&["index", "bs(2)", "t"], &dir).0, 0);
    let (code, out, _) = hecke(&["verify", "free2()", "--depth", "2", "--caps", "100000,200"], &dir);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("b  idx = (?, ?)  FAIL"), "{out}");
    let (code, _, err) = hecke(&["verify", "bs(2"], &dir);
    assert_eq!(code, 2);
    assert!(err.contains("expected `)`"), "{err}");
    let (code, _, err) = hecke(&["index", "bs(2)", "z"], &dir);
    assert_eq!(code, 2);
    assert!(err.contains("unknown generator `z`") && err.contains('^'), "{err}");
    assert_eq!(hecke(&["filter", "compare", "missing.filter", "z2.filter"], &dir).0, 2);
    assert_eq!(hecke(&[], &dir).0, 2);
    assert_eq!(hecke(&["--help"], &dir).0, 0);
    assert_eq!(hecke(&["run"], &dir).0, 2);

    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    let (_, json, _) = hecke(&["tower", "--n", "2", "--format", "json"], &dir);
    let mut v: Value = serde_json::from_str(&json).unwrap();
    std::fs::write(tmp.path().join("good.json"), serde_json::to_string(&v["report"]["certificate"]).unwrap()).unwrap();
    v["report"]["certificate"]["fact"]["value"] = Value::String("w*5".into());
    std::fs::write(&bad, serde_json::to_string(&v["report"]["certificate"]).unwrap()).unwrap();
    assert_eq!(hecke(&["rank", "--certificate", "good.json"], tmp.path()).0, 0);
    assert_eq!(hecke(&["rank", "--certificate", "bad.json"], tmp.path()).0, 1);
}

#[test]
fn environment_caps_override_defaults() {
    let out = Process::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["index", "bs(2)", "t^12"])
        .env("HECKE_ORBIT_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Process::new(env!("CARGO_BIN_EXE_hecke")).args(["index", "bs(2)", "t"]).env("HECKE_ORBIT_CAP", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn run_sample(path: &Path) -> (i32, String) {
    let source = std::fs::read_to_string(path).unwrap();
    let program = parse_program(&source).unwrap();
    let mut session = Session::new(SAMPLES).unwrap();
    let r = run_program(&mut session, &program, &source);
    assert!(r.error.is_none(), "{}: {:?}", path.display(), r.error);
    (r.exit_code, r.output)
}

#[test]
fn sample_programs_match_golden_output() {
    for path in sample_programs() {
        let (code, output) = run_sample(&path);
        assert_eq!(code, 0, "{}", path.display());
        let name = path.file_stem().unwrap().to_str().unwrap();
        golden(&format!("{name}.out"), &output);
    }
}

#[test]
fn json_and_dot_are_byte_identical_across_runs() {
    let dir = samples();
    let commands: [&[&str]; 4] = [
        &["verify", "bs(2)", "--depth", "3", "--format", "json"],
        &["complete", "lamplighter(2)", "t*a", "--depth", "3", "--format", "json"],
        &["ball", "wreath(dihedral(), bs(2))", "--radius", "2", "--format", "dot"],
        &["tower", "--n", "2", "--format", "json"],
    ];
    for args in commands {
        let (c1, a, _) = hecke(args, &dir);
        let (c2, b, _) = hecke(args, &dir);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(a, b, "{args:?}");
    }
    let (_, dot, _) = hecke(&["ball", "bs(2)", "--radius", "2", "--format", "dot"], &dir);
    golden("bs2_ball.dot", &dot);
    let (_, json, _) = hecke(&["index", "bs(2)", "t", "t^-1", "a", "--format", "json"], &dir);
    golden("bs2_index.json", &json);
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(SCHEMA).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(validator: &jsonschema::Validator, value: &Value, what: &str) {
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

#[test]
fn emitted_json_validates_against_the_schema() {
    let validator = validator();
    let session = Session::new(SAMPLES).unwrap();
    let lines = [
        "verify bs(2) --depth 2",
        "verify free2() --depth 1 --caps 100000,100",
        "verify hnn(iterwreath(dihedral(), 1), contraction(1))",
        "orbits lamplighter(2) --radius 2",
        "index bs(3) t t^-1 a",
        "index hnn(iterwreath(dihedral(), 2), contraction(1)) s",
        "scale bs(2) t --steps 6",
        "scale dihedral() --steps 4 --depth 1",
        "ball translation() --radius 3",
        "complete bs(2) t^-1*a --depth 2",
        "filter compare z6.filter z2.filter",
        "filter compare bs2_belyaev.filter bs2_schlichting.filter",
        "filter show z3x2.filter",
        "rank perfectize(bs(2))",
        "tower --n 4",
    ];
    for line in lines {
        let cmd = parse_command(line).unwrap();
        let outcome = session.outcome(&cmd).unwrap_or_else(|e| panic!("{line}: {e}"));
        assert_valid(&validator, &outcome.envelope(cmd.verb), line);
    }
    let bogus = serde_json::json!({ "command": "x", "verb": "index", "status": "maybe", "report": {} });
    assert!(!validator.is_valid(&bogus));
}

/// Each line is a node, an edge, or a brace.
fn check_dot(dot: &str) {
    let mut lines = dot.lines();
    assert_eq!(lines.next(), Some("digraph schreier {"));
    assert_eq!(dot.lines().last(), Some("}"));
    let body: Vec<&str> = dot.lines().skip(1).take_while(|l| *l != "}").collect();
    for line in body {
        let stmt = line.trim().strip_suffix(';').unwrap_or_else(|| panic!("unterminated `{line}`"));
        let node = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
        match stmt.split_once(" -> ") {
            None => assert!(node(stmt), "bad node `{line}`"),
            Some((from, rest)) => {
                let (to, attrs) = rest.split_once(' ').expect("edge attributes");
                assert!(node(from) && node(to), "bad edge `{line}`");
                assert!(attrs.starts_with("[label=\"") && attrs.ends_with("\"]"), "bad attributes `{line}`");
            }
        }
    }
}

#[test]
fn dot_output_is_well_formed() {
    let session = Session::new(SAMPLES).unwrap();
    for target in ["bs(2)", "dihedral()", "lamplighter(2)", "wreath(dihedral(), translation())", "perfectize(bs(2))"] {
        let cmd = parse_command(&format!("ball {target} --radius 2 --format dot")).unwrap();
        let outcome = session.outcome(&cmd).unwrap();
        check_dot(outcome.dot.as_deref().unwrap());
    }
}

#[test]
fn output_option_writes_the_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out, _) = hecke(&["ball", "dihedral()", "--format", "dot", "--output", "d.dot"], tmp.path());
    assert_eq!(code, 0);
    assert!(out.contains("wrote d.dot"));
    check_dot(&std::fs::read_to_string(tmp.path().join("d.dot")).unwrap());
}

#[test]
fn fmt_prints_canonical_programs() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("messy.pairs");
    std::fs::write(&file, "# comment\npair   p=bs( 2 )\n\nindex p   t  --depth 3   # trailing\n").unwrap();
    let (code, out, _) = hecke(&["fmt", file.to_str().unwrap()], tmp.path());
    assert_eq!(code, 0);
    assert_eq!(out, "pair p = bs(2)\nindex p t --depth 3\n");
    let (code, _, err) = hecke(&["run", file.to_str().unwrap()], tmp.path());
    assert_eq!(code, 0, "{err}");
    std::fs::write(&file, "pair p = bs(2)\nindex p q\n").unwrap();
    let (code, _, err) = hecke(&["run", file.to_str().unwrap()], tmp.path());
    assert_eq!(code, 2);
    assert!(err.contains("2:9"), "{err}");
}
