//! Content-addressed object store with a mutable name service.
//!
//! Objects live at `<root>/objects/<first two hex digits>/<hex digest>`.
//! Reads re-hash the bytes, so a file changed behind the store's back is
//! reported as an [`StoreError::Integrity`] error instead of being returned.
//! Names map a peer identifier to its latest CID and are kept in
//! `<root>/names.json`.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use oasis_core::Cid;
use serde::{Deserialize, Serialize};

use crate::fsutil::write_atomic;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("storage I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("object {0} not found")]
    NotFound(Cid),
    #[error("integrity error: stored bytes for {cid} hash to {actual}")]
    Integrity { cid: Cid, actual: Cid },
    #[error("no name published for peer '{0}'")]
    UnknownPeer(String),
    #[error("stale publish for peer '{peer}': sequence {sequence} is not above {current}")]
    StaleSequence { peer: String, sequence: u64, current: u64 },
    #[error("name records at {} are unreadable: {source}", path.display())]
    Names {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NameRecord {
    pub peer_id: String,
    pub current: Cid,
    pub sequence: u64,
}

#[derive(Clone, Debug)]
pub struct FsStore {
    root: PathBuf,
}

impl FsStore {
    /// Opens the store at `root`, creating it if needed.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        let objects = root.join("objects");
        fs::create_dir_all(&objects).map_err(io_err(&objects))?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Where the object for `cid` is (or would be) stored.
    pub fn object_path(&self, cid: &Cid) -> PathBuf {
        let hex = cid.hex();
        self.root.join("objects").join(&hex[..2]).join(hex)
    }

    pub fn put(&self, bytes: &[u8]) -> Result<Cid, StoreError> {
        let cid = Cid::of(bytes);
        let path = self.object_path(&cid);
        // An intact copy is left alone; a damaged one is repaired.
        if let Ok(existing) = fs::read(&path) {
            if cid.verify(&existing) {
                return Ok(cid);
            }
        }
        write_atomic(&path, bytes).map_err(io_err(&path))?;
        Ok(cid)
    }

    pub fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError> {
        let path = self.object_path(cid);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(StoreError::NotFound(*cid)),
            Err(e) => return Err(io_err(&path)(e)),
        };
        if !cid.verify(&bytes) {
            return Err(StoreError::Integrity { cid: *cid, actual: Cid::of(&bytes) });
        }
        Ok(bytes)
    }

    pub fn contains(&self, cid: &Cid) -> bool {
        self.object_path(cid).is_file()
    }

    fn names_path(&self) -> PathBuf {
        self.root.join("names.json")
    }

    fn load_names(&self) -> Result<BTreeMap<String, NameRecord>, StoreError> {
        let path = self.names_path();
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|source| StoreError::Names { path, source }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(BTreeMap::new()),
            Err(e) => Err(io_err(&path)(e)),
        }
    }

    fn save_names(&self, names: &BTreeMap<String, NameRecord>) -> Result<(), StoreError> {
        let path = self.names_path();
        let json = serde_json::to_vec_pretty(names).expect("name records serialize");
        write_atomic(&path, &json).map_err(io_err(&path))
    }

    /// Points `peer` at `cid` with the next sequence number.
    pub fn publish_name(&self, peer: &str, cid: Cid) -> Result<NameRecord, StoreError> {
        let sequence = self.load_names()?.get(peer).map_or(1, |r| r.sequence + 1);
        self.publish_record(NameRecord { peer_id: peer.into(), current: cid, sequence })
    }

    /// Stores a record with an explicit sequence number, rejecting it unless
    /// the sequence is above the current one.
    pub fn publish_record(&self, record: NameRecord) -> Result<NameRecord, StoreError> {
        let mut names = self.load_names()?;
        if let Some(current) = names.get(&record.peer_id) {
            if record.sequence <= current.sequence {
                return Err(StoreError::StaleSequence {
                    peer: record.peer_id,
                    sequence: record.sequence,
                    current: current.sequence,
                });
            }
        }
        names.insert(record.peer_id.clone(), record.clone());
        self.save_names(&names)?;
        Ok(record)
    }

    pub fn resolve_name(&self, peer: &str) -> Result<NameRecord, StoreError> {
        self.load_names()?.remove(peer).ok_or_else(|| StoreError::UnknownPeer(peer.into()))
    }
}
