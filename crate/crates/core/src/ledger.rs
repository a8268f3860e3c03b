//! A simulated anchoring chain.
//!
//! Each transaction mints one non-fungible token whose payload holds three
//! states: the ontology CID, the validation-query CID and, for later
//! versions, the token that secured the previous version. The ledger is
//! append-only; there is no operation that changes a written transaction.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cid::Cid;

pub type TokenId = u64;
pub type TxId = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct AnchorRecord {
    pub ontology_cid: Cid,
    pub query_cid: Cid,
    pub prev_token_id: Option<TokenId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct LedgerTransaction {
    pub tx_id: TxId,
    pub token_id: TokenId,
    pub sender: String,
    pub payload: AnchorRecord,
    pub block_number: u64,
    /// Seconds since the Unix epoch, supplied by the caller.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LedgerError {
    #[error("previous token {0} does not exist")]
    UnknownPrevToken(TokenId),
    #[error("token {0} does not exist")]
    UnknownToken(TokenId),
    #[error("transaction {index} cannot be replayed: {reason}")]
    Replay { index: usize, reason: String },
}

/// The token registry. Every transaction mints exactly one token and is
/// sealed in its own block, so transaction, token and block numbers all
/// start at 1 and advance together.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    txs: Vec<LedgerTransaction>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a ledger from its transaction log, checking every record as
    /// if it were being minted again.
    pub fn replay(txs: impl IntoIterator<Item = LedgerTransaction>) -> Result<Self, LedgerError> {
        let mut ledger = Ledger::new();
        for (index, tx) in txs.into_iter().enumerate() {
            let expected = index as u64 + 1;
            let fail = |reason: String| LedgerError::Replay { index, reason };
            if tx.tx_id != expected || tx.token_id != expected || tx.block_number != expected {
                return Err(fail(alloc::format!(
                    "expected id {expected}, found tx {} token {} block {}",
                    tx.tx_id,
                    tx.token_id,
                    tx.block_number
                )));
            }
            if let Some(prev) = tx.payload.prev_token_id {
                if prev >= tx.token_id {
                    return Err(fail(alloc::format!("previous token {prev} does not predate token {}", tx.token_id)));
                }
            }
            ledger.txs.push(tx);
        }
        Ok(ledger)
    }

    pub fn mint(&mut self, sender: &str, record: AnchorRecord, timestamp: u64) -> Result<&LedgerTransaction, LedgerError> {
        if let Some(prev) = record.prev_token_id {
            if !self.exists(prev) {
                return Err(LedgerError::UnknownPrevToken(prev));
            }
        }
        let id = self.txs.len() as u64 + 1;
        self.txs.push(LedgerTransaction {
            tx_id: id,
            token_id: id,
            sender: sender.into(),
            payload: record,
            block_number: id,
            timestamp,
        });
        Ok(self.txs.last().expect("just pushed"))
    }

    pub fn exists(&self, token: TokenId) -> bool {
        token >= 1 && token <= self.txs.len() as u64
    }

    pub fn get_anchor(&self, token: TokenId) -> Result<&LedgerTransaction, LedgerError> {
        if !self.exists(token) {
            return Err(LedgerError::UnknownToken(token));
        }
        Ok(&self.txs[(token - 1) as usize])
    }

    pub fn owner_of(&self, token: TokenId) -> Result<&str, LedgerError> {
        self.get_anchor(token).map(|tx| tx.sender.as_str())
    }

    /// `token` followed by its predecessors back to the first version.
    pub fn version_chain(&self, token: TokenId) -> Result<Vec<&LedgerTransaction>, LedgerError> {
        let mut chain = Vec::new();
        let mut current = Some(token);
        while let Some(t) = current {
            let tx = self.get_anchor(t)?;
            chain.push(tx);
            current = tx.payload.prev_token_id;
        }
        Ok(chain)
    }

    pub fn transactions(&self) -> &[LedgerTransaction] {
        &self.txs
    }

    pub fn len(&self) -> usize {
        self.txs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.txs.is_empty()
    }
}
