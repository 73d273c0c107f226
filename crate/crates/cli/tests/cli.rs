use std::path::{Path, PathBuf};
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wrsm::automaton::accept_weight;
use wrsm::generators::{random_crsm, random_rsm, sample_bool, sample_cost, sample_genkill, RandomParams};
use wrsm::oracle::all_configurations;
use wrsm::rsm::Rsm;
use wrsm::semiring::{GenKill, SemiringSpec, Value};
use wrsm_cli::doc::{AutomatonDocument, CrsmDocument, RsmDocument};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn wrsm(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wrsm")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_accepts_the_mutual_recursion_fixture() {
    let (code, out, _) = wrsm(&["validate", path(&fixture("two_module_mutual_recursion.bool.json"))]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok: 2 modules"), "{out}");
}

#[test]
fn validate_reports_ill_formed_rsms() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"semiring": "boolean", "modules": [{"name": "M", "entries": ["e"], "exits": ["x"],
            "transitions": [{"from": "x", "to": "e", "weight": true}]}]}"#,
    )
    .unwrap();
    let (code, _, err) = wrsm(&["validate", path(&bad)]);
    assert_eq!(code, 1);
    assert!(err.contains("exit node as transition source"), "{err}");

    std::fs::write(&bad, "{\"semiring\": \"boolean\",\n\"modules\": [").unwrap();
    let (code, _, err) = wrsm(&["validate", path(&bad)]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");

    std::fs::write(&bad, r#"{"semiring": "fuzzy", "modules": []}"#).unwrap();
    assert_eq!(wrsm(&["validate", path(&bad)]).0, 1);
}

#[test]
fn missing_files_and_bad_flags_are_usage_errors() {
    assert_eq!(wrsm(&["validate", "/no/such/file.json"]).0, 2);
    assert_eq!(wrsm(&["post-star", path(&fixture("two_module_mutual_recursion.bool.json"))]).0, 2);
    assert_eq!(wrsm(&["bench", "dense", "--sizes", "ten"]).0, 2);
}

#[test]
fn boolean_queries() {
    let (code, out, _) = wrsm(&[
        "query",
        path(&fixture("two_module_mutual_recursion.bool.json")),
        "--init",
        "e1_1",
        "--queries",
        path(&fixture("mutual_recursion.queries.json")),
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        [
            "config u1 [b2,b1] => true",
            "config e1_2 [] => false",
            "superconfig u1 [M2,M1] => true",
            "node u1 => true",
            "same-context u1 => true",
        ]
    );
}

#[test]
fn tropical_queries_agree_with_the_oracle() {
    let rsm = path(&fixture("two_module_mutual_recursion.tropical.json")).to_string();
    let queries = path(&fixture("mutual_recursion.config_queries.json")).to_string();
    let (code, fast, _) = wrsm(&["query", &rsm, "--init", "e1_1", "--queries", &queries]);
    assert_eq!(code, 0);
    assert_eq!(fast, "config u1 [b2,b1] => 3\nconfig e1_2 [] => inf\n");
    let (code, slow, _) = wrsm(&["oracle", &rsm, "--init", "e1_1", "--queries", &queries]);
    assert_eq!(code, 0);
    assert_eq!(fast, slow);

    let (code, _, err) = wrsm(&["oracle", &rsm, "--init", "e1_1", "--queries", &queries, "--ceiling", "2"]);
    assert_eq!(code, 3, "{err}");
    let all = path(&fixture("mutual_recursion.queries.json")).to_string();
    assert_eq!(wrsm(&["oracle", &rsm, "--init", "e1_1", "--queries", &all]).0, 2);
}

#[test]
fn unknown_query_node_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    std::fs::write(&q, r#"[{"kind": "node", "node": "nowhere"}]"#).unwrap();
    let (code, _, err) = wrsm(&[
        "query",
        path(&fixture("two_module_mutual_recursion.bool.json")),
        "--init",
        "e1_1",
        "--queries",
        path(&q),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("nowhere"), "{err}");
}

#[test]
fn post_star_output_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let rsm_path = fixture("two_module_mutual_recursion.tropical.json");
    let mut texts = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("a{i}.json"));
        let dot = dir.path().join(format!("a{i}.dot"));
        let (code, _, err) = wrsm(&["post-star", path(&rsm_path), "--init", "e1_1", "--init", "entries:M2", "--out", path(&out), "--dot", path(&dot)]);
        assert_eq!(code, 0, "{err}");
        texts.push((std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(&dot).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
    assert!(texts[0].1.starts_with("digraph"));

    let rsm = RsmDocument::parse(&std::fs::read_to_string(&rsm_path).unwrap())
        .unwrap()
        .to_rsm()
        .unwrap()
        .normalize_exit_weights();
    let doc = AutomatonDocument::parse(&texts[0].0).unwrap();
    let aut = doc.to_automaton(&rsm).unwrap();
    assert_eq!(AutomatonDocument::from_automaton(&rsm, &aut), doc);
    assert_eq!(doc.to_json(), texts[0].0);
    let c = rsm.config("u1", &["b2", "b1"]).unwrap();
    assert_eq!(accept_weight(&rsm, &aut, &c).unwrap(), Value::Cost(wrsm::Cost::Finite(3)));
}

#[test]
fn post_star_without_outputs_prints_the_automaton() {
    let (code, out, _) = wrsm(&["post-star", path(&fixture("two_module_mutual_recursion.bool.json")), "--init", "u1 [b2,b1]"]);
    assert_eq!(code, 0);
    assert!(AutomatonDocument::parse(&out).is_ok());
}

#[test]
fn concurrent_checks() {
    let crsm = path(&fixture("flip_then_error.crsm.json")).to_string();
    let (code, out, _) = wrsm(&["concurrent", &crsm, "-k", "1", "--check", "t@g1 | err@g1", "--check", "s@g0 | s@g0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "t@g1 [] | err@g1 [] => unreachable\ns@g0 [] | s@g0 [] => reachable\n");
    let (_, out, _) = wrsm(&["concurrent", &crsm, "-k", "2", "--check", "t@g1 | err@g1"]);
    assert_eq!(out, "t@g1 [] | err@g1 [] => reachable\n");
    let (code, out, _) = wrsm(&["concurrent", &crsm, "-k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(wrsm(&["concurrent", &crsm, "-k", "0"]).0, 2);
    assert_eq!(wrsm(&["concurrent", &crsm, "-k", "1", "--check", "t@g1"]).0, 1);
}

#[test]
fn dense_bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let (code, _, err) = wrsm(&["bench", "dense", "--sizes", "10,20", "--csv", path(&csv)]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,confdist_seconds,wpds_seconds,speedup,confdist_ops,wpds_ops");
    assert_eq!(lines.len(), 3);
    for (line, n) in lines[1..].iter().zip(["10", "20"]) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 6);
        assert_eq!(cols[0], n);
        assert!(cols[3].parse::<f64>().unwrap() > 0.0);
    }
}

fn random_documents(seed: u64) -> Vec<RsmDocument> {
    let gk = GenKill::new(["a", "b", "c"]).unwrap();
    let p = RandomParams::default();
    let rng = || ChaCha8Rng::seed_from_u64(seed);
    let mut w = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
    let mut out = Vec::new();
    let b = random_rsm(&p, &mut rng(), |_| ()).map_weights(|()| Value::Bool(sample_bool(&mut w)));
    out.push((SemiringSpec::from_name("boolean").unwrap(), b));
    let t = random_rsm(&p, &mut rng(), |_| ()).map_weights(|()| Value::Cost(sample_cost(&mut w, 5)));
    out.push((SemiringSpec::from_name("tropical").unwrap(), t));
    let g = random_rsm(&p, &mut rng(), |_| ()).map_weights(|()| Value::GenKill(sample_genkill(&gk, &mut w)));
    out.push((SemiringSpec::GenKill(gk.clone()), g));
    out.into_iter()
        .map(|(s, def)| RsmDocument::from_rsm(&Rsm::new(s, &def).unwrap()))
        .collect()
}

#[test]
fn rsm_documents_round_trip() {
    for seed in 0..50 {
        for doc in random_documents(seed) {
            let text = doc.to_json();
            let back = RsmDocument::parse(&text).unwrap();
            assert_eq!(back, doc);
            let rsm = back.to_rsm().unwrap();
            assert_eq!(RsmDocument::from_rsm(&rsm).to_json(), text);
            assert_eq!(rsm.to_def(), doc.to_rsm().unwrap().to_def());
        }
    }
}

#[test]
fn automaton_documents_round_trip_on_the_corpus() {
    for seed in 0..30 {
        for doc in random_documents(seed) {
            let rsm = doc.to_rsm().unwrap().normalize_exit_weights();
            let init = wrsm::generators::sample_initial(&rsm, &mut ChaCha8Rng::seed_from_u64(seed));
            let a = wrsm::automaton::configurations_automaton(&rsm, &init).unwrap();
            let post = wrsm::confdist::post_star(&rsm, &a).unwrap();
            let adoc = AutomatonDocument::from_automaton(&rsm, &post.automaton);
            let back = AutomatonDocument::parse(&adoc.to_json()).unwrap();
            assert_eq!(back, adoc);
            let aut = back.to_automaton(&rsm).unwrap();
            assert_eq!(AutomatonDocument::from_automaton(&rsm, &aut), adoc);
            for c in all_configurations(&rsm, 2) {
                assert_eq!(
                    accept_weight(&rsm, &aut, &c).unwrap(),
                    accept_weight(&rsm, &post.automaton, &c).unwrap()
                );
            }
        }
    }
}

#[test]
fn crsm_documents_round_trip() {
    for seed in 0..50 {
        let def = random_crsm(&mut ChaCha8Rng::seed_from_u64(seed));
        let doc = CrsmDocument::from_def(&def);
        let back = CrsmDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_def().unwrap(), def);
    }
}
