use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;
use wallx_cli::{Cache, Lookup, Request, Source, ARTIFACT_VERSION};
use wallx_target::presets;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox { dir: TempDir::new().unwrap() }
    }

    fn target(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn cache_dir(&self) -> PathBuf {
        self.dir.path().join("cache")
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_wallx"))
            .args(args)
            .env("WALLX_CACHE", self.cache_dir())
            .env("WALLX_THREADS", "2")
            .output()
            .unwrap()
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn cache_entries(dir: &Path) -> Vec<PathBuf> {
    match fs::read_dir(dir) {
        Ok(rd) => rd.map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "json")).collect(),
        Err(_) => vec![],
    }
}

#[test]
fn ifun_reports_degree_three() {
    let sb = Sandbox::new();
    let p2 = sb.target("p2.toml", &presets::projective_config(2));
    let out = sb.run(&["ifun", "--target", s(&p2), "--order", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let text = doc.to_string();
    assert!(text.contains("\"beta\""), "{text}");
    let terms = doc["series"]["terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["beta"] == serde_json::json!([3])), "no q^3 term");
}

#[test]
fn unitarity_suite_passes_on_p1() {
    let sb = Sandbox::new();
    let p1 = sb.target("p1.toml", &presets::projective_config(1));
    let out = sb.run(&["check", "--suite", "unitarity", "--target", s(&p1), "--order", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["status"], "ok");
}

#[test]
fn missing_target_is_a_usage_error() {
    let sb = Sandbox::new();
    let out = sb.run(&["ifun", "--target", "/nonexistent/target.toml", "--order", "1"]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("target.toml"), "{}", stderr(&out));
}

#[test]
fn unknown_command_is_a_usage_error() {
    let sb = Sandbox::new();
    assert_eq!(code(&sb.run(&["frobnicate"])), 64);
    assert_eq!(code(&sb.run(&[])), 64);
}

#[test]
fn malformed_target_is_a_validation_error() {
    let sb = Sandbox::new();
    let bad = sb.target("bad.toml", "this is = = not toml");
    let out = sb.run(&["ifun", "--target", s(&bad), "--order", "1"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(!stderr(&out).is_empty());
}

#[test]
fn csv_for_nested_document_is_rejected() {
    let sb = Sandbox::new();
    let p1 = sb.target("p1.toml", &presets::projective_config(1));
    let out = sb.run(&["check", "--suite", "unitarity", "--target", s(&p1), "--order", "1", "--format", "csv"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
}

#[test]
fn repeated_request_is_served_from_cache() {
    let sb = Sandbox::new();
    let p2 = sb.target("p2.toml", &presets::projective_config(2));
    let args = ["ifun", "--target", s(&p2), "--order", "2"];
    let first = sb.run(&args);
    assert_eq!(code(&first), 0);
    let entries = cache_entries(&sb.cache_dir());
    assert_eq!(entries.len(), 1);
    let stamp = fs::metadata(&entries[0]).unwrap().modified().unwrap();

    let second = sb.run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::metadata(&entries[0]).unwrap().modified().unwrap(), stamp);

    let fresh = sb.run(&["ifun", "--target", s(&p2), "--order", "2", "--no-cache"]);
    assert_eq!(first.stdout, fresh.stdout);
    assert_eq!(cache_entries(&sb.cache_dir()).len(), 1);
}

#[test]
fn target_content_keys_the_cache() {
    let sb = Sandbox::new();
    let a = sb.target("a.toml", &presets::projective_config(1));
    let b = sb.target("b.toml", &presets::projective_config(2));
    sb.run(&["ifun", "--target", s(&a), "--order", "1"]);
    sb.run(&["ifun", "--target", s(&b), "--order", "1"]);
    assert_eq!(cache_entries(&sb.cache_dir()).len(), 2);
    fs::write(&b, presets::projective_config(1)).unwrap();
    sb.run(&["ifun", "--target", s(&b), "--order", "1"]);
    assert_eq!(cache_entries(&sb.cache_dir()).len(), 2);
}

#[test]
fn corrupted_entry_is_recomputed() {
    let sb = Sandbox::new();
    let p1 = sb.target("p1.toml", &presets::projective_config(1));
    let args = ["ifun", "--target", s(&p1), "--order", "2"];
    let first = sb.run(&args);
    let entry = cache_entries(&sb.cache_dir()).pop().unwrap();
    fs::write(&entry, "{\"payload\": \"garbage").unwrap();
    let second = sb.run(&args);
    assert_eq!(code(&second), 0);
    assert!(stderr(&second).contains("warning"), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);
    let third = sb.run(&args);
    assert!(stderr(&third).is_empty(), "{}", stderr(&third));
}

#[test]
fn tampered_payload_is_detected() {
    let dir = TempDir::new().unwrap();
    let cache = Cache::new(dir.path());
    let req = Request::new("ifun", "target").with("order", 2);
    cache.put(&req, "{\"a\": 1}\n", Default::default()).unwrap();
    let path = cache.path(&req);
    let text = fs::read_to_string(&path).unwrap().replace("\\\"a\\\": 1", "\\\"a\\\": 2");
    fs::write(&path, text).unwrap();
    assert!(matches!(cache.get(&req), Lookup::Corrupt(_)));
}

#[test]
fn version_bump_invalidates_entries() {
    let dir = TempDir::new().unwrap();
    let req = Request::new("mirror", "target").with("order", 3);
    let old = Cache::new(dir.path());
    let (_, src) = old.get_or_compute(&req, || Ok("{}\n".into())).unwrap();
    assert!(matches!(src, Source::Computed));
    let (_, src) = old.get_or_compute(&req, || panic!("should hit")).unwrap();
    assert!(matches!(src, Source::Cache));
    let newer = Cache::new(dir.path()).with_version(&format!("{ARTIFACT_VERSION}+next"));
    assert!(matches!(newer.get(&req), Lookup::Miss));
    let (_, src) = newer.get_or_compute(&req, || Ok("{}\n".into())).unwrap();
    assert!(matches!(src, Source::Computed));
}

#[test]
fn csv_and_json_agree() {
    let sb = Sandbox::new();
    let p2 = sb.target("p2.toml", &presets::projective_config(2));
    let json = sb.run(&["ifun", "--target", s(&p2), "--order", "2"]);
    let csv = sb.run(&["ifun", "--target", s(&p2), "--order", "2", "--format", "csv"]);
    assert_eq!(code(&csv), 0, "{}", stderr(&csv));
    let doc: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let table = wallx_cli::flat_table(&doc).unwrap();
    assert_eq!(wallx_cli::render_csv(&table).unwrap(), stdout(&csv));

    let mut reader = csv::Reader::from_reader(csv.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["beta", "t_exp", "z_exp", "basis", "value"]);
    let rows = reader.records().count();
    assert!(rows > 0);
}

#[test]
fn output_file_receives_the_document() {
    let sb = Sandbox::new();
    let p1 = sb.target("p1.toml", &presets::projective_config(1));
    let dest = sb.dir.path().join("out.json");
    let out = sb.run(&["mirror", "--target", s(&p1), "--order", "2", "--out", s(&dest)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(dest).unwrap()).unwrap();
    assert!(doc.get("series").is_some());
}

#[test]
fn quintic_line_count_through_gw() {
    let sb = Sandbox::new();
    let q = sb.target("quintic.toml", &presets::quintic_config());
    let out = sb.run(&["gw", "--target", s(&q), "--degree", "1", "--insertions", "H,H,H", "--non-equivariant"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["value"], "2875");
}

#[test]
fn verify_selects_criteria() {
    let sb = Sandbox::new();
    let out = sb.run(&["verify", "--suite", "A1,A8"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS A1 ") && text.contains("PASS A8 "), "{text}");
    assert!(!text.contains("A2 "));
    assert_eq!(code(&sb.run(&["verify", "--suite", "A99"])), 64);
}

proptest! {
    #[test]
    fn canonical_form_ignores_insertion_order(params in proptest::collection::btree_map("[a-z_]{1,8}", "[0-9a-z+/-]{0,6}", 0..6)) {
        let forward = params.iter().fold(Request::new("ifun", "x"), |r, (k, v)| r.with(k, v));
        let backward = params.iter().rev().fold(Request::new("ifun", "x"), |r, (k, v)| r.with(k, v));
        prop_assert_eq!(forward.canonical(), backward.canonical());
        prop_assert_eq!(forward.key(ARTIFACT_VERSION), backward.key(ARTIFACT_VERSION));
    }

    #[test]
    fn distinct_targets_get_distinct_keys(a in "[ -~]{0,40}", b in "[ -~]{0,40}") {
        prop_assume!(a != b);
        let ka = Request::new("ifun", &a).key(ARTIFACT_VERSION);
        let kb = Request::new("ifun", &b).key(ARTIFACT_VERSION);
        prop_assert_ne!(ka, kb);
    }
}
