#![allow(dead_code)]

use std::path::PathBuf;

use oasis_core::syntax::{parse, Format};
use oasis_core::{Graph, Vocabulary};
use oasis_osc::cas::FsStore;
use oasis_osc::journal::LedgerFile;
use oasis_osc::protocol::Osc;
use tempfile::TempDir;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture_graph(name: &str) -> Graph {
    parse(fixture_text(name).as_bytes(), Format::Turtle).unwrap()
}

/// A protocol instance over a fresh temporary store and journal.
pub fn temp_osc() -> (TempDir, Osc) {
    let dir = TempDir::new().unwrap();
    let osc = reopen(&dir);
    (dir, osc)
}

pub fn reopen(dir: &TempDir) -> Osc {
    let store = FsStore::open(dir.path().join("store")).unwrap();
    let ledger = LedgerFile::open(dir.path().join("ledger.jsonl")).unwrap();
    Osc::new(store, ledger, Vocabulary::default())
}

/// Flips one bit of the byte at `offset` (wrapped to the file length).
pub fn corrupt(path: &std::path::Path, offset: usize) {
    let mut bytes = std::fs::read(path).unwrap();
    assert!(!bytes.is_empty(), "cannot corrupt an empty object");
    let i = offset % bytes.len();
    bytes[i] ^= 0x01;
    std::fs::write(path, bytes).unwrap();
}

use oasis_core::engine::{Binding, Engine, Status};
use oasis_core::model::{
    build_conditional_set, build_contract, build_contract_instance, extract_conditional_set, extract_contract,
};
use oasis_core::scenario::{self, ex};
use oasis_core::query::parse_query;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Each shipped fixture parses to exactly the graph its model builds, and
/// extraction gives the model back.
pub fn check_fixture_fidelity() -> Result<(), String> {
    let v = Vocabulary::default();
    let sets = [
        ("sell-conditional.ttl", scenario::sell_conditional_set()),
        ("price-drop-conditional.ttl", scenario::price_drop_conditional_set(&v)),
    ];
    for (name, model) in &sets {
        let g = fixture_graph(name);
        let built = build_conditional_set(model, &v).map_err(|e| e.to_string())?;
        ensure!(g == built, "{name}: parsed graph differs from the built one");
        let back = extract_conditional_set(&g, &model.set_id, &v).map_err(|e| format!("{name}: {e}"))?;
        ensure!(back == model.normalized(), "{name}: extraction differs from the model");
    }
    let sell = &sets[0].1.conditionals[0];
    ensure!(sell.head.atoms.len() == 1 && sell.body_atoms().is_empty(), "sell conditional shape");
    let head = &sell.head.atoms[0];
    ensure!(
        [&head.subject, &head.operator].map(|e| e.refers.clone())
            == [oasis_core::model::EntryRef::Exact(ex("trading-agent")), oasis_core::model::EntryRef::Exact(ex("sell"))],
        "sell head atom"
    );
    ensure!(sets[1].1.conditionals[0].body_atoms().len() == 3, "price-drop body has three atoms");

    let contract = scenario::brokerage_contract();
    let g = fixture_graph("brokerage-contract.ttl");
    ensure!(g == build_contract(&contract, &v).map_err(|e| e.to_string())?, "brokerage-contract.ttl differs");
    let back = extract_contract(&g, &contract.id, &v).map_err(|e| e.to_string())?;
    ensure!(back == contract.normalized(), "contract extraction differs");
    ensure!(back.entries.len() == 3, "contract has three entries");

    let instance = scenario::brokerage_instance();
    let g = fixture_graph("brokerage-instance.ttl");
    let built = build_contract_instance(&instance, &contract.id, &v).map_err(|e| e.to_string())?;
    ensure!(g == built, "brokerage-instance.ttl differs");
    let back = extract_contract(&g, &instance.id, &v).map_err(|e| e.to_string())?;
    ensure!(back == instance.normalized(), "instance extraction differs");

    let osc = fixture_graph("brokerage-osc.ttl");
    let expected = build_contract(&contract, &v)
        .unwrap()
        .merge(&build_conditional_set(&scenario::price_drop_conditional_set(&v), &v).unwrap());
    ensure!(osc == expected, "brokerage-osc.ttl is not contract + price-drop set");

    for (name, price, sold) in
        [("state-sold-at-95.ttl", 95, true), ("state-unsold-at-95.ttl", 95, false), ("state-unsold-at-120.ttl", 120, false)]
    {
        ensure!(fixture_graph(name) == scenario::market_state(&v, price, sold), "{name} differs");
    }
    let q = parse_query(&fixture_text("brokerage-validation.rq")).map_err(|e| e.to_string())?;
    ensure!(q == parse_query(&scenario::validation_query(&v)).unwrap(), "validation query differs");
    Ok(())
}

/// The price-drop conditional from its fixture, against prices around the
/// threshold, with and without the sell triple.
pub fn check_conditional_boundary() -> Result<(), String> {
    let v = Vocabulary::default();
    let g = fixture_graph("price-drop-conditional.ttl");
    let set = extract_conditional_set(&g, &ex("101314-cond-set"), &v).map_err(|e| e.to_string())?;
    let c = &set.conditionals[0];
    let engine = Engine::new(&v);
    for (price, body_holds) in [(95, true), (100, true), (101, false), (120, false)] {
        let state = scenario::market_state(&v, price, false);
        let mut holds = true;
        for atom in c.body_atoms() {
            holds &= engine.ground_atom(&state, atom, &Binding::new()).map_err(|e| e.to_string())?;
        }
        ensure!(holds == body_holds, "price {price}: body satisfied = {holds}, expected {body_holds}");
        for sold in [true, false] {
            let state = scenario::market_state(&v, price, sold);
            let status = engine.evaluate_conditional(&state, c).map_err(|e| e.to_string())?.status;
            let expected = match (body_holds, sold) {
                (false, _) => Status::NotApplicable,
                (true, true) => Status::Fulfilled,
                (true, false) => Status::Violated,
            };
            ensure!(status == expected, "price {price}, sold {sold}: {status:?}, expected {expected:?}");
        }
    }
    Ok(())
}

pub const GRAPH_FIXTURES: [&str; 8] = [
    "sell-conditional.ttl",
    "price-drop-conditional.ttl",
    "brokerage-contract.ttl",
    "brokerage-instance.ttl",
    "brokerage-osc.ttl",
    "state-sold-at-95.ttl",
    "state-unsold-at-95.ttl",
    "state-unsold-at-120.ttl",
];

/// Runs the `osc` binary inside `dir` with no `OASIS_OSC_*` variables
/// inherited, returning (status, stdout, stderr).
pub fn osc_cmd(dir: &std::path::Path, args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_osc"));
    cmd.current_dir(dir).args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("OASIS_OSC_") {
            cmd.env_remove(k);
        }
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("osc runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Like [`osc_cmd`] with `--json`, parsing stdout; panics unless the exit
/// status is 0.
pub fn osc_json(dir: &std::path::Path, args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, out, err) = osc_cmd(dir, &all, &[]);
    assert_eq!(code, 0, "osc {args:?} failed: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("osc {args:?}: bad JSON ({e}): {out}"))
}
