mod common;

use common::{fixture_path, osc_cmd, osc_json};
use serde_json::json;
use tempfile::TempDir;

fn fx(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn cost_estimate_json() {
    let dir = TempDir::new().unwrap();
    let v = osc_json(dir.path(), &["cost", "estimate", "--bytes", "532480"]);
    assert_eq!(v["gas"], json!(332_800_000));
    assert_eq!(v["eth"], json!("6.656"));
    assert_eq!(v["usd"], json!(null));
    let v = osc_json(dir.path(), &["--usd-per-eth", "7.5", "cost", "estimate", "--bytes", "532480"]);
    assert_eq!(v["usd"], json!("49.92"));
}

#[test]
fn cost_estimate_from_file_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("blob"), [0u8; 33]).unwrap();
    let v = osc_json(dir.path(), &["cost", "estimate", "--file", "blob"]);
    assert_eq!(v["gas"], json!(40_000));
    let (code, out, err) = osc_cmd(dir.path(), &["cost", "estimate"], &[]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && err.contains("Usage"), "{err}");
    let (code, _, _) = osc_cmd(dir.path(), &["cost", "estimate", "--bytes", "1", "--file", "blob"], &[]);
    assert_eq!(code, 2);
    let (code, _, _) = osc_cmd(dir.path(), &["frobnicate"], &[]);
    assert_eq!(code, 2);
    let (code, out, _) = osc_cmd(dir.path(), &["--help"], &[]);
    assert_eq!(code, 0);
    assert!(out.contains("osc"));
}

#[test]
fn graph_canon_of_empty_file() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("empty.ttl"), "").unwrap();
    let (code, out, err) = osc_cmd(dir.path(), &["graph", "canon", "empty.ttl"], &[]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "", ""));
}

#[test]
fn graph_canon_and_check() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = osc_cmd(dir.path(), &["graph", "canon", &fx("state-sold-at-95.ttl")], &[]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.ends_with(" .")));
    let check = osc_json(dir.path(), &["graph", "check", &fx("state-sold-at-95.ttl")]);
    assert_eq!(check["triples"], json!(4));
    std::fs::write(dir.path().join("canon.nt"), &out).unwrap();
    let again = osc_json(dir.path(), &["graph", "check", "canon.nt"]);
    assert_eq!(again["cid"], check["cid"]);

    std::fs::write(dir.path().join("bad.ttl"), "<http://x/a> <http://x/b> _:c .\n").unwrap();
    let (code, out, err) = osc_cmd(dir.path(), &["graph", "check", "bad.ttl"], &[]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("bad.ttl") && err.contains("1:"), "{err}");
}

#[test]
fn store_put_get_and_names() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("a.txt"), "hello").unwrap();
    let put = osc_json(dir.path(), &["store", "put", "a.txt"]);
    let cid = put["cid"].as_str().unwrap().to_string();
    let (code, out, _) = osc_cmd(dir.path(), &["store", "get", &cid], &[]);
    assert_eq!((code, out.as_str()), (0, "hello"));
    let rec = osc_json(dir.path(), &["store", "publish", "peer-1", &cid]);
    assert_eq!(rec["sequence"], json!(1));
    let res = osc_json(dir.path(), &["store", "resolve", "peer-1"]);
    assert_eq!(res["current"], json!(cid));
    let (code, _, err) = osc_cmd(dir.path(), &["store", "resolve", "peer-2"], &[]);
    assert_eq!(code, 1);
    assert!(err.contains("peer-2"));
    let missing = format!("sha256:{}", "0".repeat(64));
    assert_eq!(osc_cmd(dir.path(), &["store", "get", &missing], &[]).0, 1);
    // A malformed CID is a usage error.
    assert_eq!(osc_cmd(dir.path(), &["store", "get", "sha256:xyz"], &[]).0, 2);
}

#[test]
fn ledger_commands() {
    let dir = TempDir::new().unwrap();
    let (o, q) = (format!("sha256:{}", "a".repeat(64)), format!("sha256:{}", "b".repeat(64)));
    let t1 = osc_json(dir.path(), &["--sender", "0xABC", "ledger", "mint", "--ontology-cid", &o, "--query-cid", &q]);
    assert_eq!((t1["tokenId"].clone(), t1["sender"].clone()), (json!(1), json!("0xABC")));
    osc_json(dir.path(), &["ledger", "mint", "--ontology-cid", &o, "--query-cid", &q, "--prev", "1"]);
    let chain = osc_json(dir.path(), &["ledger", "chain", "2"]);
    let ids: Vec<_> = chain.as_array().unwrap().iter().map(|t| t["tokenId"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![2, 1]);
    let one = osc_json(dir.path(), &["ledger", "inspect", "1"]);
    assert_eq!(one, t1);
    assert_eq!(osc_json(dir.path(), &["ledger", "inspect"]).as_array().unwrap().len(), 2);
    let (code, _, err) = osc_cmd(dir.path(), &["ledger", "mint", "--ontology-cid", &o, "--query-cid", &q, "--prev", "99"], &[]);
    assert_eq!(code, 1);
    assert!(err.contains("99"));
    assert_eq!(osc_cmd(dir.path(), &["ledger", "inspect", "0"], &[]).0, 1);
}

#[test]
fn config_precedence() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("osc.toml"), "store = \"from-file\"\nusd_per_eth = 2\n").unwrap();
    std::fs::write(dir.path().join("a.txt"), "x").unwrap();
    osc_json(dir.path(), &["store", "put", "a.txt"]);
    assert!(dir.path().join("from-file/objects").is_dir());

    let (code, _, _) = osc_cmd(dir.path(), &["store", "put", "a.txt"], &[("OASIS_OSC_STORE", "from-env")]);
    assert_eq!(code, 0);
    assert!(dir.path().join("from-env/objects").is_dir());

    let (code, _, _) =
        osc_cmd(dir.path(), &["--store", "from-flag", "store", "put", "a.txt"], &[("OASIS_OSC_STORE", "from-env")]);
    assert_eq!(code, 0);
    assert!(dir.path().join("from-flag/objects").is_dir());

    let v = osc_json(dir.path(), &["cost", "estimate", "--bytes", "32"]);
    assert_eq!(v["usd"], json!("0.0008"));

    std::fs::write(dir.path().join("other.toml"), "gas_price_gwei = \"1\"\n").unwrap();
    let v = osc_json(dir.path(), &["--config", "other.toml", "cost", "estimate", "--bytes", "32"]);
    assert_eq!((v["wei"].clone(), v["usd"].clone()), (json!(20_000_000_000_000u64), json!(null)));

    assert_eq!(osc_cmd(dir.path(), &["--config", "missing.toml", "cost", "estimate", "--bytes", "1"], &[]).0, 1);
}

#[test]
fn osc_workflow_human_output() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = osc_cmd(
        dir.path(),
        &["osc", "deploy", &fx("brokerage-osc.ttl"), "--query", &fx("brokerage-validation.rq")],
        &[],
    );
    assert_eq!(code, 0);
    assert!(out.starts_with("token 1\n"));
    let (code, out, _) = osc_cmd(dir.path(), &["osc", "fetch", "1", "--query-out", "q.rq", "--graph-out", "g.nt"], &[]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(std::fs::read(dir.path().join("q.rq")).unwrap(), std::fs::read(fixture_path("brokerage-validation.rq")).unwrap());
    assert_eq!(osc_json(dir.path(), &["graph", "check", "g.nt"])["cid"], osc_json(dir.path(), &["osc", "fetch", "1"])["ontologyCid"]);
    let (code, out, _) = osc_cmd(dir.path(), &["osc", "verify-chain", "1"], &[]);
    assert_eq!((code, out.trim()), (0, "token 1: ontology Ok, query Ok"));
}

#[test]
fn verify_chain_exit_status_reflects_damage() {
    let dir = TempDir::new().unwrap();
    let r = osc_json(dir.path(), &["osc", "deploy", &fx("brokerage-osc.ttl"), "--query", &fx("brokerage-validation.rq")]);
    let cid = r["queryCid"].as_str().unwrap();
    let hex = cid.strip_prefix("sha256:").unwrap();
    let path = dir.path().join(".osc/store/objects").join(&hex[..2]).join(hex);
    common::corrupt(&path, 0);
    let (code, out, err) = osc_cmd(dir.path(), &["--json", "osc", "verify-chain", "1"], &[]);
    assert_eq!(code, 1);
    let links: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(links[0]["query"], json!("IntegrityError"));
    assert!(err.contains("token 1"));
}
