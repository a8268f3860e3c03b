//! The ledger's on-disk form: one JSON transaction per line, appended and
//! synced on every mint. Opening a journal replays it through
//! [`Ledger::replay`], so a hand-edited or truncated file is rejected rather
//! than trusted.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use oasis_core::ledger::{AnchorRecord, Ledger, LedgerError, LedgerTransaction};

#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("journal I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("journal {}:{line}: {source}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

#[derive(Debug)]
pub struct LedgerFile {
    path: PathBuf,
    ledger: Ledger,
}

impl LedgerFile {
    /// Loads the journal at `path`; a missing file is an empty ledger.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, JournalError> {
        let path = path.into();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(source) => return Err(JournalError::Io { path, source }),
        };
        let mut txs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let tx: LedgerTransaction =
                serde_json::from_str(line).map_err(|source| JournalError::Parse { path: path.clone(), line: i + 1, source })?;
            txs.push(tx);
        }
        let ledger = Ledger::replay(txs)?;
        Ok(Self { path, ledger })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    /// Mints in memory, then appends the transaction. If the append fails the
    /// in-memory ledger is reloaded from disk so both stay in step.
    pub fn mint(&mut self, sender: &str, record: AnchorRecord, timestamp: u64) -> Result<LedgerTransaction, JournalError> {
        let tx = self.ledger.mint(sender, record, timestamp)?.clone();
        if let Err(source) = self.append(&tx) {
            self.ledger = Self::open(&self.path)?.ledger;
            return Err(JournalError::Io { path: self.path.clone(), source });
        }
        Ok(tx)
    }

    fn append(&self, tx: &LedgerTransaction) -> io::Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut line = serde_json::to_vec(tx).expect("transactions serialize");
        line.push(b'\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(&line)?;
        f.sync_all()
    }
}
