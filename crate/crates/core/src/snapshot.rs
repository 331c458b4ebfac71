//! Snapshot file persistence.
//!
//! ```text
//! +----------------------+
//! | magic "WOSSNAP\n"    | 8 bytes
//! | format version: u32  | 4 bytes LE
//! | payload length: u64  | 8 bytes LE
//! | payload crc32: u32   | 4 bytes LE
//! +----------------------+
//! | payload              | canonical JSON of `GraphData`
//! +----------------------+
//! ```
//!
//! The payload is compact JSON with every collection in canonical order, so
//! save → load → save reproduces identical bytes. Loading verifies magic,
//! version, length and checksum before decoding anything, and never returns a
//! partially built graph.

use crate::store::{GraphData, GraphError, KnowledgeGraph};
use std::fs;
use std::io::Write;
use std::path::Path;

pub const MAGIC: &[u8; 8] = b"WOSSNAP\n";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 8 + 4;

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("snapshot I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a snapshot file (bad magic)")]
    BadMagic,
    #[error("snapshot header truncated ({0} bytes)")]
    TruncatedHeader(usize),
    #[error("unsupported snapshot format version {found} (this build reads {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("snapshot checksum mismatch: header says {expected_len} bytes / crc {expected_crc:08x}, found {actual_len} bytes / crc {actual_crc:08x}")]
    Checksum { expected_len: u64, actual_len: u64, expected_crc: u32, actual_crc: u32 },
    #[error("snapshot payload undecodable: {0}")]
    Decode(#[from] serde_json::Error),
    #[error("snapshot content invalid: {0}")]
    Invalid(#[from] GraphError),
}

pub fn encode(graph: &KnowledgeGraph) -> Vec<u8> {
    let payload = serde_json::to_vec(&graph.to_data()).expect("graph data always serializes");
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    out.extend_from_slice(&payload);
    out
}

pub fn decode(bytes: &[u8]) -> Result<KnowledgeGraph, SnapshotError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(if bytes.len() < MAGIC.len() && MAGIC.starts_with(bytes) {
            SnapshotError::TruncatedHeader(bytes.len())
        } else {
            SnapshotError::BadMagic
        });
    }
    if bytes.len() < HEADER_LEN {
        return Err(SnapshotError::TruncatedHeader(bytes.len()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(SnapshotError::UnsupportedVersion { found: version, supported: FORMAT_VERSION });
    }
    let expected_len = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let expected_crc = u32::from_le_bytes(bytes[20..24].try_into().unwrap());
    let payload = &bytes[HEADER_LEN..];
    let actual_crc = crc32fast::hash(payload);
    if payload.len() as u64 != expected_len || actual_crc != expected_crc {
        return Err(SnapshotError::Checksum {
            expected_len,
            actual_len: payload.len() as u64,
            expected_crc,
            actual_crc,
        });
    }
    let data: GraphData = serde_json::from_slice(payload)?;
    Ok(KnowledgeGraph::from_data(data)?)
}

/// Writes atomically: a sibling temp file is renamed over `path`.
pub fn save_snapshot(graph: &KnowledgeGraph, path: &Path) -> Result<(), SnapshotError> {
    let bytes = encode(graph);
    let tmp = path.with_extension("tmp-snapshot");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<KnowledgeGraph, SnapshotError> {
    decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geo::GeoTable;

    #[test]
    fn empty_round_trip() {
        let g = KnowledgeGraph::empty();
        let bytes = encode(&g);
        let back = decode(&bytes).unwrap();
        assert_eq!(back, g);
        assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn truncated_file_is_checksum_error() {
        let g = KnowledgeGraph::from_records(&fixtures::f1_records(), GeoTable::new());
        let bytes = encode(&g);
        let cut = &bytes[..bytes.len() - 7];
        assert!(matches!(decode(cut), Err(SnapshotError::Checksum { .. })));
        assert!(matches!(decode(&bytes[..10]), Err(SnapshotError::TruncatedHeader(10))));
    }

    #[test]
    fn flipped_byte_is_checksum_error() {
        let g = KnowledgeGraph::from_records(&fixtures::f1_records(), GeoTable::new());
        let mut bytes = encode(&g);
        let last = bytes.len() - 3;
        bytes[last] ^= 0x20;
        assert!(matches!(decode(&bytes), Err(SnapshotError::Checksum { .. })));
    }

    #[test]
    fn future_version_refused() {
        let mut bytes = encode(&KnowledgeGraph::empty());
        bytes[8..12].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(decode(&bytes), Err(SnapshotError::UnsupportedVersion { found: 7, .. })));
        assert!(matches!(decode(b"PK\x03\x04garbage-garbage-garbage"), Err(SnapshotError::BadMagic)));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.snap");
        let g = KnowledgeGraph::from_records(&fixtures::f1_records(), GeoTable::new());
        save_snapshot(&g, &path).unwrap();
        assert_eq!(load_snapshot(&path).unwrap(), g);
        assert!(matches!(load_snapshot(&dir.path().join("missing")), Err(SnapshotError::Io(_))));
    }
}
