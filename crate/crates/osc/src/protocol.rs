//! Deploying, fetching and validating ontological smart contracts.
//!
//! A deployment stores the contract graph's canonical N-Triples and the raw
//! validation query, then mints an anchor holding both CIDs. Instances are
//! anchored with the contract's query CID and a link back to the contract
//! token. Ontologies may import others by CID through `importsCid` string
//! literals (under the vocabulary base); fetching resolves those imports
//! recursively and checks every digest on the way.

use std::collections::BTreeSet;
use std::time::{SystemTime, UNIX_EPOCH};

use oasis_core::engine::{ConditionalOutcome, Engine, EngineError};
use oasis_core::ledger::{AnchorRecord, LedgerTransaction, TokenId};
use oasis_core::model::{extract_conditional_set, extract_contract, single_node_of_class, ContractKind, ModelError};
use oasis_core::query::{evaluate, parse_query, QueryError, ResultSet};
use oasis_core::syntax::{parse, Format, ParseError};
use oasis_core::verdict::{compose_verdict, Verdict};
use oasis_core::vocab::Class;
use oasis_core::{Cid, Graph, Term, Vocabulary};
use serde::Serialize;

use crate::cas::{FsStore, StoreError};
use crate::journal::{JournalError, LedgerFile};
use crate::output::result_set_json;

/// Local name of the import annotation property.
pub const IMPORTS_CID: &str = "importsCid";

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Journal(#[from] JournalError),
    #[error("malformed encoding: {0}")]
    Malformed(#[from] ModelError),
    #[error("object {cid} is not a valid N-Triples graph: {source}")]
    Parse {
        cid: Cid,
        #[source]
        source: ParseError,
    },
    #[error("query object {0} is not UTF-8")]
    QueryEncoding(Cid),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("invalid import annotation {literal:?}: expected a CID string")]
    BadImport { literal: String },
    #[error("import cycle: {}", render_cycle(.0))]
    ImportCycle(Vec<Cid>),
    #[error("token {instance} is not an instance of contract token {contract}")]
    NotAnInstance { instance: TokenId, contract: TokenId },
}

fn render_cycle(cycle: &[Cid]) -> String {
    cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" -> ")
}

impl ProtocolError {
    /// The ledger error inside, if this came from the ledger.
    pub fn ledger_error(&self) -> Option<&oasis_core::ledger::LedgerError> {
        match self {
            ProtocolError::Journal(JournalError::Ledger(e)) => Some(e),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeploymentReceipt {
    pub token_id: TokenId,
    pub tx_id: u64,
    pub ontology_cid: Cid,
    pub query_cid: Cid,
    pub imports: Vec<Cid>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fetched {
    pub anchor: LedgerTransaction,
    /// The anchored graph alone.
    pub graph: Graph,
    /// The anchored graph merged with its import closure.
    pub merged: Graph,
    /// Every transitively imported CID, in resolution order.
    pub imports: Vec<Cid>,
    pub query: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegrityStatus {
    Ok,
    IntegrityError,
    NotFound,
}

impl IntegrityStatus {
    fn of(store: &FsStore, cid: &Cid) -> Result<Self, StoreError> {
        match store.get(cid) {
            Ok(_) => Ok(IntegrityStatus::Ok),
            Err(StoreError::Integrity { .. }) => Ok(IntegrityStatus::IntegrityError),
            Err(StoreError::NotFound(_)) => Ok(IntegrityStatus::NotFound),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ArtifactRole {
    Ontology,
    Query,
    Import,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ArtifactIntegrity {
    pub token_id: TokenId,
    pub role: ArtifactRole,
    pub cid: Cid,
    pub status: IntegrityStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub contract_token_id: TokenId,
    /// The instance token.
    pub token_id: TokenId,
    #[serde(serialize_with = "ser_result_set")]
    pub query_result: ResultSet,
    pub conditional_statuses: Vec<ConditionalOutcome>,
    pub verdict: Verdict,
    pub integrity: Vec<ArtifactIntegrity>,
}

fn ser_result_set<S: serde::Serializer>(r: &ResultSet, s: S) -> Result<S::Ok, S::Error> {
    result_set_json(r).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainLink {
    pub token_id: TokenId,
    pub ontology_cid: Cid,
    pub ontology: IntegrityStatus,
    pub query_cid: Cid,
    pub query: IntegrityStatus,
}

impl ChainLink {
    pub fn is_intact(&self) -> bool {
        self.ontology == IntegrityStatus::Ok && self.query == IntegrityStatus::Ok
    }
}

/// CIDs named by `importsCid` literals anywhere in `g`, sorted.
pub fn declared_imports(g: &Graph, v: &Vocabulary) -> Result<Vec<Cid>, ProtocolError> {
    let p = v.term(IMPORTS_CID);
    let mut out = BTreeSet::new();
    for t in g.iter().filter(|t| t.predicate == p) {
        let lexical = match &t.object {
            Term::Literal(l) => l.lexical().to_string(),
            Term::Iri(i) => i.as_str().to_string(),
        };
        let cid = lexical.parse::<Cid>().map_err(|_| ProtocolError::BadImport { literal: lexical.clone() })?;
        out.insert(cid);
    }
    Ok(out.into_iter().collect())
}

/// Loads `root` and its import closure through `load`, merging everything.
/// Returns the merged graph and the imported CIDs in resolution order
/// (`root` excluded). An import path that returns to a CID already on it is
/// an [`ProtocolError::ImportCycle`].
pub fn resolve_imports(
    root: Cid,
    v: &Vocabulary,
    mut load: impl FnMut(&Cid) -> Result<Graph, ProtocolError>,
) -> Result<(Graph, Vec<Cid>), ProtocolError> {
    fn visit(
        cid: Cid,
        v: &Vocabulary,
        load: &mut dyn FnMut(&Cid) -> Result<Graph, ProtocolError>,
        path: &mut Vec<Cid>,
        done: &mut BTreeSet<Cid>,
        order: &mut Vec<Cid>,
        merged: &mut Graph,
    ) -> Result<(), ProtocolError> {
        if let Some(pos) = path.iter().position(|c| *c == cid) {
            let mut cycle = path[pos..].to_vec();
            cycle.push(cid);
            return Err(ProtocolError::ImportCycle(cycle));
        }
        if done.contains(&cid) {
            return Ok(());
        }
        let g = load(&cid)?;
        path.push(cid);
        for import in declared_imports(&g, v)? {
            visit(import, v, load, path, done, order, merged)?;
        }
        path.pop();
        merged.extend_from(&g);
        done.insert(cid);
        order.push(cid);
        Ok(())
    }
    let (mut path, mut done, mut order, mut merged) = (Vec::new(), BTreeSet::new(), Vec::new(), Graph::new());
    visit(root, v, &mut load, &mut path, &mut done, &mut order, &mut merged)?;
    order.retain(|c| *c != root);
    Ok((merged, order))
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// A store, a ledger and the vocabulary they are read with.
#[derive(Debug)]
pub struct Osc {
    store: FsStore,
    ledger: LedgerFile,
    vocab: Vocabulary,
}

impl Osc {
    pub fn new(store: FsStore, ledger: LedgerFile, vocab: Vocabulary) -> Self {
        Self { store, ledger, vocab }
    }

    pub fn store(&self) -> &FsStore {
        &self.store
    }

    pub fn ledger(&self) -> &LedgerFile {
        &self.ledger
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    fn load_graph(&self, cid: &Cid) -> Result<Graph, ProtocolError> {
        let bytes = self.store.get(cid)?;
        parse(&bytes, Format::NTriples).map_err(|source| ProtocolError::Parse { cid: *cid, source })
    }

    /// Every declared import of `g` must already be stored and parse.
    fn check_imports(&self, g: &Graph) -> Result<Vec<Cid>, ProtocolError> {
        let imports = declared_imports(g, &self.vocab)?;
        for cid in &imports {
            self.load_graph(cid)?;
        }
        Ok(imports)
    }

    /// Stores an ontology that contracts may import, returning its CID.
    pub fn publish_ontology(&self, g: &Graph) -> Result<Cid, ProtocolError> {
        self.check_imports(g)?;
        Ok(self.store.put(&g.canonicalize())?)
    }

    pub fn deploy_osc(
        &mut self,
        contract: &Graph,
        query: &str,
        prev: Option<TokenId>,
        sender: &str,
    ) -> Result<DeploymentReceipt, ProtocolError> {
        let id = single_node_of_class(contract, Class::SmartContract, &self.vocab)?;
        extract_contract(contract, &id, &self.vocab)?;
        parse_query(query)?;
        let imports = self.check_imports(contract)?;
        let ontology_cid = self.store.put(&contract.canonicalize())?;
        let query_cid = self.store.put(query.as_bytes())?;
        let record = AnchorRecord { ontology_cid, query_cid, prev_token_id: prev };
        let tx = self.ledger.mint(sender, record, now())?;
        Ok(DeploymentReceipt { token_id: tx.token_id, tx_id: tx.tx_id, ontology_cid, query_cid, imports })
    }

    pub fn deploy_instance(
        &mut self,
        instance: &Graph,
        contract_token: TokenId,
        sender: &str,
    ) -> Result<DeploymentReceipt, ProtocolError> {
        let contract = self.ledger.ledger().get_anchor(contract_token).map_err(JournalError::from)?.clone();
        let id = single_node_of_class(instance, Class::SmartContractInstance, &self.vocab)?;
        extract_contract(instance, &id, &self.vocab)?;
        let imports = self.check_imports(instance)?;
        let ontology_cid = self.store.put(&instance.canonicalize())?;
        let query_cid = contract.payload.query_cid;
        let record = AnchorRecord { ontology_cid, query_cid, prev_token_id: Some(contract_token) };
        let tx = self.ledger.mint(sender, record, now())?;
        Ok(DeploymentReceipt { token_id: tx.token_id, tx_id: tx.tx_id, ontology_cid, query_cid, imports })
    }

    pub fn fetch(&self, token: TokenId) -> Result<Fetched, ProtocolError> {
        let anchor = self.ledger.ledger().get_anchor(token).map_err(JournalError::from)?.clone();
        let graph = self.load_graph(&anchor.payload.ontology_cid)?;
        let query_bytes = self.store.get(&anchor.payload.query_cid)?;
        let query = String::from_utf8(query_bytes).map_err(|_| ProtocolError::QueryEncoding(anchor.payload.query_cid))?;
        let (merged, imports) = resolve_imports(anchor.payload.ontology_cid, &self.vocab, |cid| self.load_graph(cid))?;
        Ok(Fetched { anchor, graph, merged, imports, query })
    }

    /// Runs the contract's validation query and conditionals over the
    /// contract, the instance, their imports and an optional state graph.
    pub fn validate_instance(
        &self,
        contract_token: TokenId,
        instance_token: TokenId,
        state: Option<&Graph>,
    ) -> Result<ValidationReport, ProtocolError> {
        let contract = self.fetch(contract_token)?;
        let instance = self.fetch(instance_token)?;
        let chain = self.ledger.ledger().version_chain(instance_token).map_err(JournalError::from)?;
        if instance_token == contract_token || !chain.iter().any(|tx| tx.token_id == contract_token) {
            return Err(ProtocolError::NotAnInstance { instance: instance_token, contract: contract_token });
        }

        let mut merged = contract.merged.merge(&instance.merged);
        if let Some(s) = state {
            merged.extend_from(s);
        }

        let query = parse_query(&contract.query)?;
        let query_result = evaluate(&query, &merged)?;

        let engine = Engine::new(&self.vocab);
        let contract_id = single_node_of_class(&contract.graph, Class::SmartContract, &self.vocab)?;
        let model = extract_contract(&contract.graph, &contract_id, &self.vocab)?;
        debug_assert_eq!(model.kind, ContractKind::Contract);
        let mut conditional_statuses = Vec::new();
        for set_id in &model.conditional_sets {
            let set = extract_conditional_set(&merged, set_id, &self.vocab)?;
            conditional_statuses.extend(engine.evaluate_set(&merged, &set)?);
        }
        let statuses: Vec<_> = conditional_statuses.iter().map(|o| o.status).collect();
        let verdict = compose_verdict(&query_result, &statuses);

        let mut integrity = Vec::new();
        for f in [&contract, &instance] {
            let token_id = f.anchor.token_id;
            integrity.push(ArtifactIntegrity {
                token_id,
                role: ArtifactRole::Ontology,
                cid: f.anchor.payload.ontology_cid,
                status: IntegrityStatus::Ok,
            });
            integrity.push(ArtifactIntegrity {
                token_id,
                role: ArtifactRole::Query,
                cid: f.anchor.payload.query_cid,
                status: IntegrityStatus::Ok,
            });
            for cid in &f.imports {
                integrity.push(ArtifactIntegrity { token_id, role: ArtifactRole::Import, cid: *cid, status: IntegrityStatus::Ok });
            }
        }

        Ok(ValidationReport {
            contract_token_id: contract_token,
            token_id: instance_token,
            query_result,
            conditional_statuses,
            verdict,
            integrity,
        })
    }

    /// Digest status of both artifacts of every version from `token` back to
    /// the first.
    pub fn verify_chain(&self, token: TokenId) -> Result<Vec<ChainLink>, ProtocolError> {
        let chain = self.ledger.ledger().version_chain(token).map_err(JournalError::from)?;
        chain
            .into_iter()
            .map(|tx| {
                Ok(ChainLink {
                    token_id: tx.token_id,
                    ontology_cid: tx.payload.ontology_cid,
                    ontology: IntegrityStatus::of(&self.store, &tx.payload.ontology_cid)?,
                    query_cid: tx.payload.query_cid,
                    query: IntegrityStatus::of(&self.store, &tx.payload.query_cid)?,
                })
            })
            .collect()
    }
}
