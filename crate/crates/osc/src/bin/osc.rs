//! `osc`: command line over the store, the ledger and the protocol.
//!
//! Exit status is 0 on success, 1 on a domain error (bad input file, failed
//! integrity check, unknown token, ...) and 2 on a usage error. Data goes to
//! stdout; diagnostics go to stderr.

use std::error::Error;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oasis_core::cost::estimate_storage_cost;
use oasis_core::ledger::{AnchorRecord, LedgerTransaction, TokenId};
use oasis_core::syntax::{parse, serialize, Format};
use oasis_core::{Cid, Decimal, Graph};
use oasis_osc::cas::FsStore;
use oasis_osc::config::{CliConfig, FileConfig, Overrides};
use oasis_osc::journal::LedgerFile;
use oasis_osc::output::result_set_json;
use oasis_osc::protocol::Osc;
use serde::Serialize;
use serde_json::json;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "osc", version, about = "Anchor, fetch and validate ontological smart contracts")]
struct Cli {
    /// Object store directory.
    #[arg(long, global = true, env = "OASIS_OSC_STORE")]
    store: Option<PathBuf>,
    /// Ledger journal file.
    #[arg(long, global = true, env = "OASIS_OSC_LEDGER")]
    ledger: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Base IRI of the conditional and contract vocabulary.
    #[arg(long, global = true, env = "OASIS_OSC_VOCAB_BASE")]
    vocab_base: Option<String>,
    /// Sender address recorded on minted transactions.
    #[arg(long, global = true, env = "OASIS_OSC_SENDER")]
    sender: Option<String>,
    #[arg(long, global = true, env = "OASIS_OSC_GAS_PER_WORD")]
    gas_per_word: Option<u64>,
    #[arg(long, global = true, env = "OASIS_OSC_GAS_PRICE_GWEI")]
    gas_price_gwei: Option<Decimal>,
    #[arg(long, global = true, env = "OASIS_OSC_USD_PER_ETH")]
    usd_per_eth: Option<Decimal>,
    /// Config file (default: ./osc.toml if present).
    #[arg(long, global = true, env = "OASIS_OSC_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Content-addressed objects and names.
    #[command(subcommand)]
    Store(StoreCmd),
    /// Raw ledger access.
    #[command(subcommand)]
    Ledger(LedgerCmd),
    /// Contract deployment, retrieval and validation.
    #[command(subcommand)]
    Osc(OscCmd),
    /// Storage cost estimates.
    #[command(subcommand)]
    Cost(CostCmd),
    /// RDF graph utilities.
    #[command(subcommand)]
    Graph(GraphCmd),
}

#[derive(Subcommand)]
enum StoreCmd {
    /// Store a file ("-" for stdin) and print its CID.
    Put { file: PathBuf },
    /// Print (or write) the verified bytes of an object.
    Get {
        cid: Cid,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Point a peer name at a CID.
    Publish { peer: String, cid: Cid },
    /// The CID a peer name currently points at.
    Resolve { peer: String },
}

#[derive(Subcommand)]
enum LedgerCmd {
    /// Mint an anchor for two stored CIDs.
    Mint {
        #[arg(long)]
        ontology_cid: Cid,
        #[arg(long)]
        query_cid: Cid,
        #[arg(long)]
        prev: Option<TokenId>,
    },
    /// The version chain of a token, newest first.
    Chain { token: TokenId },
    /// One transaction, or all of them.
    Inspect { token: Option<TokenId> },
}

#[derive(Subcommand)]
enum OscCmd {
    /// Deploy a contract graph with its validation query.
    Deploy {
        contract: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Token of the version this one replaces.
        #[arg(long)]
        prev: Option<TokenId>,
    },
    /// Deploy a contract instance against a contract token.
    DeployInstance {
        instance: PathBuf,
        #[arg(long)]
        contract: TokenId,
    },
    /// Store an ontology for contracts to import by CID.
    Publish { file: PathBuf },
    /// Fetch and verify an anchored graph, its imports and its query.
    Fetch {
        token: TokenId,
        /// Write the merged graph (canonical N-Triples) here.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        /// Write the validation query here.
        #[arg(long)]
        query_out: Option<PathBuf>,
    },
    /// Validate an instance against its contract and a state graph.
    Validate {
        #[arg(long)]
        contract: TokenId,
        #[arg(long)]
        instance: TokenId,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Check the stored artifacts of every version of a token. Exits 1 if
    /// any artifact is damaged or missing.
    VerifyChain { token: TokenId },
}

#[derive(Subcommand)]
enum CostCmd {
    /// Cost of storing some bytes on chain.
    Estimate(EstimateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EstimateArgs {
    #[arg(long)]
    bytes: Option<u64>,
    /// Use the size of this file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Print a graph in canonical form.
    Canon {
        file: PathBuf,
        /// Output syntax: nt (canonical) or ttl.
        #[arg(long, default_value = "nt")]
        format: String,
    },
    /// Parse a graph and report its size and CID.
    Check { file: PathBuf },
}

struct Ctx {
    config: CliConfig,
    json: bool,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, human: impl FnOnce() -> String) -> Result<()> {
        let mut out = io::stdout().lock();
        if self.json {
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
        } else {
            let text = human();
            if !text.is_empty() {
                writeln!(out, "{text}")?;
            }
        }
        Ok(())
    }

    fn store(&self) -> Result<FsStore> {
        Ok(FsStore::open(&self.config.store)?)
    }

    fn osc(&self) -> Result<Osc> {
        Ok(Osc::new(self.store()?, LedgerFile::open(&self.config.ledger)?, self.config.vocab.clone()))
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_graph(path: &Path) -> Result<Graph> {
    let format = path.extension().and_then(|e| e.to_str()).and_then(Format::from_extension).unwrap_or(Format::Turtle);
    let bytes = read_input(path)?;
    parse(&bytes, format).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_input(path)?).map_err(|_| format!("{}: not UTF-8", path.display()).into())
}

fn tx_line(tx: &LedgerTransaction) -> String {
    let prev = tx.payload.prev_token_id.map_or("-".to_string(), |p| p.to_string());
    format!(
        "token {} tx {} block {} sender {} prev {}\n  ontology {}\n  query    {}",
        tx.token_id, tx.tx_id, tx.block_number, tx.sender, prev, tx.payload.ontology_cid, tx.payload.query_cid
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    let overrides = Overrides {
        store: cli.store,
        ledger: cli.ledger,
        vocab_base: cli.vocab_base,
        sender: cli.sender,
        gas_per_word: cli.gas_per_word,
        gas_price_gwei: cli.gas_price_gwei,
        usd_per_eth: cli.usd_per_eth,
    };
    let config = CliConfig::resolve(overrides, FileConfig::load(cli.config.as_deref())?)?;
    let ctx = Ctx { config, json: cli.json };
    match cli.command {
        Command::Store(cmd) => store_cmd(&ctx, cmd)?,
        Command::Ledger(cmd) => ledger_cmd(&ctx, cmd)?,
        Command::Osc(cmd) => return osc_cmd(&ctx, cmd),
        Command::Cost(CostCmd::Estimate(args)) => {
            let bytes = match (args.bytes, args.file) {
                (Some(b), _) => b,
                (None, Some(f)) => fs::metadata(&f).map_err(|e| format!("{}: {e}", f.display()))?.len(),
                (None, None) => unreachable!("clap requires one of --bytes / --file"),
            };
            let e = estimate_storage_cost(bytes, &ctx.config.cost)?;
            ctx.emit(&e, || {
                let usd = e.usd.as_ref().map_or("(set --usd-per-eth for a dollar figure)".to_string(), |u| format!("{u} USD"));
                format!("{} bytes = {} words\ngas {}\nwei {}\neth {}\nusd {}", e.bytes, e.words, e.gas, e.wei, e.eth, usd)
            })?;
        }
        Command::Graph(cmd) => graph_cmd(&ctx, cmd)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn store_cmd(ctx: &Ctx, cmd: StoreCmd) -> Result<()> {
    let store = ctx.store()?;
    match cmd {
        StoreCmd::Put { file } => {
            let bytes = read_input(&file)?;
            let cid = store.put(&bytes)?;
            ctx.emit(&json!({ "cid": cid, "size": bytes.len() }), || cid.to_string())
        }
        StoreCmd::Get { cid, out } => {
            let bytes = store.get(&cid)?;
            if let Some(path) = &out {
                fs::write(path, &bytes)?;
            }
            if ctx.json {
                let text = std::str::from_utf8(&bytes).ok();
                ctx.emit(&json!({ "cid": cid, "size": bytes.len(), "text": text }), String::new)
            } else {
                if out.is_none() {
                    io::stdout().write_all(&bytes)?;
                }
                Ok(())
            }
        }
        StoreCmd::Publish { peer, cid } => {
            let r = store.publish_name(&peer, cid)?;
            ctx.emit(&r, || format!("{} -> {} (sequence {})", r.peer_id, r.current, r.sequence))
        }
        StoreCmd::Resolve { peer } => {
            let r = store.resolve_name(&peer)?;
            ctx.emit(&r, || r.current.to_string())
        }
    }
}

fn ledger_cmd(ctx: &Ctx, cmd: LedgerCmd) -> Result<()> {
    let mut journal = LedgerFile::open(&ctx.config.ledger)?;
    match cmd {
        LedgerCmd::Mint { ontology_cid, query_cid, prev } => {
            let record = AnchorRecord { ontology_cid, query_cid, prev_token_id: prev };
            let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
            let tx = journal.mint(&ctx.config.sender, record, now)?;
            ctx.emit(&tx, || tx_line(&tx))
        }
        LedgerCmd::Chain { token } => {
            let chain = journal.ledger().version_chain(token)?;
            ctx.emit(&chain, || chain.iter().map(|tx| tx_line(tx)).collect::<Vec<_>>().join("\n"))
        }
        LedgerCmd::Inspect { token: Some(token) } => {
            let tx = journal.ledger().get_anchor(token)?;
            ctx.emit(tx, || tx_line(tx))
        }
        LedgerCmd::Inspect { token: None } => {
            let txs = journal.ledger().transactions();
            ctx.emit(&txs, || txs.iter().map(tx_line).collect::<Vec<_>>().join("\n"))
        }
    }
}

fn osc_cmd(ctx: &Ctx, cmd: OscCmd) -> Result<ExitCode> {
    let mut osc = ctx.osc()?;
    let sender = ctx.config.sender.clone();
    match cmd {
        OscCmd::Deploy { contract, query, prev } => {
            let g = read_graph(&contract)?;
            let q = read_text(&query)?;
            let r = osc.deploy_osc(&g, &q, prev, &sender)?;
            ctx.emit(&r, || format!("token {}\nontology {}\nquery    {}", r.token_id, r.ontology_cid, r.query_cid))?;
        }
        OscCmd::DeployInstance { instance, contract } => {
            let g = read_graph(&instance)?;
            let r = osc.deploy_instance(&g, contract, &sender)?;
            ctx.emit(&r, || format!("token {}\nontology {}\nquery    {}", r.token_id, r.ontology_cid, r.query_cid))?;
        }
        OscCmd::Publish { file } => {
            let cid = osc.publish_ontology(&read_graph(&file)?)?;
            ctx.emit(&json!({ "cid": cid }), || cid.to_string())?;
        }
        OscCmd::Fetch { token, graph_out, query_out } => {
            let f = osc.fetch(token)?;
            let canonical = String::from_utf8(f.merged.canonicalize()).expect("canonical form is UTF-8");
            if let Some(p) = &graph_out {
                fs::write(p, &canonical)?;
            }
            if let Some(p) = &query_out {
                fs::write(p, &f.query)?;
            }
            let doc = json!({
                "tokenId": token,
                "ontologyCid": f.anchor.payload.ontology_cid,
                "queryCid": f.anchor.payload.query_cid,
                "imports": f.imports,
                "triples": f.merged.len(),
                "graph": canonical,
                "query": f.query,
            });
            ctx.emit(&doc, || {
                format!(
                    "token {token}: {} triples ({} imports), integrity ok\nontology {}\nquery    {}",
                    f.merged.len(),
                    f.imports.len(),
                    f.anchor.payload.ontology_cid,
                    f.anchor.payload.query_cid
                )
            })?;
        }
        OscCmd::Validate { contract, instance, state } => {
            let state = state.as_deref().map(read_graph).transpose()?;
            let r = osc.validate_instance(contract, instance, state.as_ref())?;
            ctx.emit(&r, || {
                let mut s = format!("verdict: {:?}\nquery: {}", r.verdict, result_set_json(&r.query_result));
                for c in &r.conditional_statuses {
                    s.push_str(&format!("\n{:?}: {}", c.status, c.conditional.as_str()));
                }
                s
            })?;
        }
        OscCmd::VerifyChain { token } => {
            let links = osc.verify_chain(token)?;
            ctx.emit(&links, || {
                links
                    .iter()
                    .map(|l| format!("token {}: ontology {:?}, query {:?}", l.token_id, l.ontology, l.query))
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
            if let Some(bad) = links.iter().find(|l| !l.is_intact()) {
                eprintln!("osc: token {} failed verification", bad.token_id);
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn graph_cmd(ctx: &Ctx, cmd: GraphCmd) -> Result<()> {
    match cmd {
        GraphCmd::Canon { file, format } => {
            let g = read_graph(&file)?;
            let fmt = match format.as_str() {
                "nt" | "ntriples" => Format::NTriples,
                "ttl" | "turtle" => Format::Turtle,
                other => return Err(format!("unknown format '{other}' (expected nt or ttl)").into()),
            };
            let text = serialize(&g, fmt);
            if ctx.json {
                ctx.emit(&json!({ "cid": Cid::of(&g.canonicalize()), "triples": g.len(), "text": text }), String::new)
            } else {
                io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
        GraphCmd::Check { file } => {
            let g = read_graph(&file)?;
            let cid = Cid::of(&g.canonicalize());
            ctx.emit(&json!({ "ok": true, "triples": g.len(), "cid": cid }), || format!("ok: {} triples, {cid}", g.len()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version go to stdout with status 0; usage errors exit 2.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("osc: {e}");
            ExitCode::from(1)
        }
    }
}
