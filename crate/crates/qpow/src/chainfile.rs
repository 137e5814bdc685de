//! JSON chain persistence.
//!
//! A chain file is one JSON array of block objects with exactly these fields: `index`,
//! `timestamp`, `prev_hash` (64 lowercase hex), `payload`, `nonce`, `n_qubits` and
//! `pow_hash` (64 lowercase hex).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qpow_core::{Block, Digest256};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainFileError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("malformed chain JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("block {position}: field {field}: {reason}")]
    Field { position: usize, field: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockRecord {
    index: u64,
    timestamp: u64,
    prev_hash: String,
    payload: String,
    nonce: u32,
    n_qubits: usize,
    pow_hash: String,
}

impl From<&Block> for BlockRecord {
    fn from(b: &Block) -> Self {
        BlockRecord {
            index: b.index,
            timestamp: b.timestamp,
            prev_hash: b.prev_hash.to_hex(),
            payload: b.payload.clone(),
            nonce: b.nonce,
            n_qubits: b.n_qubits,
            pow_hash: b.pow_hash.to_hex(),
        }
    }
}

fn parse_hash(position: usize, field: &'static str, s: &str) -> Result<Digest256, ChainFileError> {
    if s.bytes().any(|c| c.is_ascii_uppercase()) {
        return Err(ChainFileError::Field { position, field, reason: "hex must be lowercase".into() });
    }
    Digest256::from_hex(s).map_err(|e| ChainFileError::Field { position, field, reason: e.to_string() })
}

impl BlockRecord {
    fn into_block(self, position: usize) -> Result<Block, ChainFileError> {
        Ok(Block {
            index: self.index,
            timestamp: self.timestamp,
            prev_hash: parse_hash(position, "prev_hash", &self.prev_hash)?,
            payload: self.payload,
            nonce: self.nonce,
            n_qubits: self.n_qubits,
            pow_hash: parse_hash(position, "pow_hash", &self.pow_hash)?,
        })
    }
}

pub fn to_json(chain: &[Block]) -> String {
    let records: Vec<BlockRecord> = chain.iter().map(BlockRecord::from).collect();
    serde_json::to_string_pretty(&records).expect("block records always serialize")
}

pub fn from_json(json: &str) -> Result<Vec<Block>, ChainFileError> {
    let records: Vec<BlockRecord> = serde_json::from_str(json)?;
    records.into_iter().enumerate().map(|(i, r)| r.into_block(i)).collect()
}

pub fn load(path: &Path) -> Result<Vec<Block>, ChainFileError> {
    let json =
        fs::read_to_string(path).map_err(|source| ChainFileError::Read { path: path.to_owned(), source })?;
    from_json(&json)
}

/// Writes to a sibling temp file, then renames over `path`.
pub fn save(path: &Path, chain: &[Block]) -> Result<(), ChainFileError> {
    let write_err = |source| ChainFileError::Write { path: path.to_owned(), source };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut json = to_json(chain);
    json.push('\n');
    fs::write(&tmp, json).map_err(write_err)?;
    fs::rename(&tmp, path).map_err(write_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genesis() -> Block {
        Block::genesis(4, 1_650_000_000).unwrap()
    }

    #[test]
    fn field_names_and_types() {
        let json = to_json(&[genesis()]);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = value.as_array().unwrap()[0].as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["index", "n_qubits", "nonce", "payload", "pow_hash", "prev_hash", "timestamp"]);
        assert_eq!(obj["prev_hash"], "0".repeat(64));
        assert_eq!(obj["payload"], "genesis");
        assert!(obj["timestamp"].is_u64());
        assert_eq!(obj["pow_hash"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn round_trip() {
        let chain = vec![genesis()];
        assert_eq!(from_json(&to_json(&chain)).unwrap(), chain);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(from_json("{"), Err(ChainFileError::Json(_))));
        assert!(matches!(from_json("{}"), Err(ChainFileError::Json(_))));
        let good = to_json(&[genesis()]);
        let extra = good.replacen("\"index\"", "\"extra\": 1, \"index\"", 1);
        assert!(matches!(from_json(&extra), Err(ChainFileError::Json(_))));
        let short = good.replacen(&"0".repeat(64), "00", 1);
        assert!(matches!(from_json(&short), Err(ChainFileError::Field { field: "prev_hash", .. })));
        let upper =
            good.replacen(&genesis().pow_hash.to_hex(), &genesis().pow_hash.to_hex().to_uppercase(), 1);
        if upper != good {
            assert!(matches!(from_json(&upper), Err(ChainFileError::Field { field: "pow_hash", .. })));
        }
    }

    #[test]
    fn save_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("chain.json");
        save(&path, &[genesis()]).unwrap();
        assert_eq!(load(&path).unwrap(), [genesis()]);
        assert!(matches!(load(&dir.path().join("missing.json")), Err(ChainFileError::Read { .. })));
    }
}
