use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::io::Write;

use serde_json::Value;

fn waring() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_waring"));
    c.env_remove("WARING_DEFAULT_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    waring().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/paper");
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .collect();
    v.sort();
    assert!(!v.is_empty());
    v
}

fn batch(path: &Path, parallelism: usize) -> Output {
    let p = parallelism.to_string();
    run(&["batch", path.to_str().unwrap(), "--parallelism", &p])
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/response.schema.json");
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&raw).unwrap()
}

fn assert_valid(schema: &jsonschema::JSONSchema, v: &Value) {
    if let Err(errors) = schema.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{v}\n{}", msgs.join("\n"));
    }
}

#[test]
fn fixtures_are_deterministic() {
    for f in fixtures() {
        let a = batch(&f, 1);
        assert!(a.status.success(), "{}", f.display());
        let b = batch(&f, 1);
        let c = batch(&f, 4);
        assert_eq!(a.stdout, b.stdout, "{} differs between runs", f.display());
        assert_eq!(a.stdout, c.stdout, "{} differs with parallelism", f.display());
    }
}

#[test]
fn every_response_matches_the_schema() {
    let schema = schema();
    for f in fixtures() {
        for v in lines(&batch(&f, 4)) {
            assert_valid(&schema, &v);
        }
    }
    let singles: [&[&str]; 6] = [
        &["--json", "rank", "x^4 + 4*x^2*y^2 + y^4"],
        &["--json", "rank", "x^4 +"],
        &["--json", "real-rank", "x^6 + y^6", "--budget-samples", "5"],
        &["--json", "gap-bound", "x^5 - y^5"],
        &["--json", "family", "pd", "--d", "5", "--gamma", "7"],
        &["--json", "kernel", "--r", "9", "x^3"],
    ];
    for args in singles {
        assert_valid(&schema, &json(&run(args)));
    }
}

#[test]
fn quartic_rank() {
    let out = run(&["--json", "rank", "x^4+4*x^2*y^2+y^4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["complex_rank"], 3);
    assert_eq!(v["result"]["certificate"]["claim"]["r"], 3);
}

#[test]
fn cubic_field_classification() {
    let v = json(&run(&["--json", "classify", "3*x^7+210*x^4*y^3+84*x*y^6"]));
    assert_eq!(v["result"]["classification"]["kind"], "rank3");
    assert_eq!(v["result"]["classification"]["case"], "case2_generic");
}

#[test]
fn kernel_of_the_quintic() {
    let v = json(&run(&["--json", "kernel", "--r", "3", "-15*x^5+90*x^4*y-30*x^3*y^2+60*x^2*y^3+3*y^5"]));
    assert_eq!(v["result"]["basis"], serde_json::json!(["x^3 - 3*x*y^2 + y^3"]));
}

#[test]
fn quartic_shapes_in_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shapes.jsonl");
    let body = ["x^4", "x^3*y", "x^2*y^2", "x^2*y*(x + y)"]
        .iter()
        .map(|f| format!("{{\"command\":\"rank\",\"form_text\":\"{f}\"}}\n"))
        .collect::<String>();
    std::fs::write(&path, body).unwrap();
    let out = batch(&path, 2);
    assert_eq!(out.status.code(), Some(0));
    let ranks: Vec<i64> = lines(&out).iter().map(|v| v["result"]["complex_rank"].as_i64().unwrap()).collect();
    assert_eq!(ranks, [1, 4, 3, 3]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "4 requests: 4 ok, 0 error");
}

#[test]
fn empty_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    std::fs::write(&path, "").unwrap();
    let out = batch(&path, 1);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "0 requests: 0 ok, 0 error");
}

#[test]
fn malformed_line_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.jsonl");
    std::fs::write(
        &path,
        "{\"command\":\"rank\",\"form_text\":\"x^3\"}\n{\"command\":\"rank\",\n{\"command\":\"gap-bound\",\"form_text\":\"x^4 + y^4\"}\n",
    )
    .unwrap();
    let out = batch(&path, 3);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    assert_eq!(v.len(), 3);
    assert_eq!(v[0]["status"], "ok");
    assert_eq!(v[1]["status"], "error");
    assert_eq!(v[1]["error"]["kind"], "input");
    assert!(v[1]["error"]["message"].as_str().unwrap().starts_with("line 2"));
    assert_eq!(v[2]["status"], "ok");
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "3 requests: 2 ok, 1 error");
}

#[test]
fn unreadable_batch_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = batch(&dir.path().join("missing.jsonl"), 1);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_reads_stdin() {
    let dec = r#"{"degree":4,"summands":[{"lambda":"1","alpha":"1","beta":"0"},{"lambda":"1","alpha":"1/2","beta":"sqrt(3)/2"},{"lambda":"1","alpha":"1/2","beta":"-sqrt(3)/2"}],"exactness":"exact"}"#;
    let mut child = waring()
        .args(["--json", "verify", "9/8*(x^2 + y^2)^2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(dec.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verification"]["status"], "exact_match");
}

#[test]
fn verify_rejects_garbage_on_stdin() {
    let mut child = waring()
        .args(["verify", "x^2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"not json").unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let out = run(&["rank", "x^4 + * y"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let v = json(&run(&["--json", "rank", "x^4 + * y"]));
    assert_eq!(v["status"], "error");
    assert!(v["error"]["position"].is_u64());
    assert_eq!(run(&["rank"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--rational-only", "rank", "x^3 + sqrt(2)*y^3"]).status.code(), Some(1));
}

#[test]
fn quiet_prints_the_headline() {
    let out = run(&["--quiet", "rank", "x^4 + y^4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    assert!(text.contains('2'));
}

#[test]
fn precision_from_the_environment() {
    let form = "x^5 + 3*x^2*y^3 + y^5";
    let with = |p: &str| {
        let out = waring().env("WARING_DEFAULT_PRECISION", p).args(["--json", "decompose", "--numeric-ok", form]).output().unwrap();
        (out.status.code(), json(&out))
    };
    let (code, v) = with("128");
    assert_eq!(code, Some(0));
    assert_eq!(v["result"]["decomposition"]["exactness"]["numeric"]["precision"], 128);
    // the flag wins over the environment
    let out = waring()
        .env("WARING_DEFAULT_PRECISION", "128")
        .args(["--json", "--precision", "512", "decompose", "--numeric-ok", form])
        .output()
        .unwrap();
    assert_eq!(json(&out)["result"]["decomposition"]["exactness"]["numeric"]["precision"], 512);
    let (code, v) = with("lots");
    assert_eq!(code, Some(1));
    assert_eq!(v["error"]["kind"], "input");
}

#[test]
fn schema_rejects_malformed_responses() {
    let schema = schema();
    let bad = [
        serde_json::json!({"status": "ok", "command": "rank", "diagnostics": []}),
        serde_json::json!({"status": "error", "diagnostics": []}),
        serde_json::json!({"status": "ok", "command": "rank", "result": {"complex_rank": 3}, "diagnostics": []}),
        serde_json::json!({"status": "maybe", "diagnostics": []}),
    ];
    for v in bad {
        assert!(!schema.is_valid(&v), "{v}");
    }
}
