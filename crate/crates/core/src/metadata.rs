//! Content-addressed metadata store standing in for off-chain storage.
//!
//! Append-only: blobs are stored immutably under the SHA-256 of their bytes,
//! so hashes are stable across runs and platforms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SimError};

/// 32-byte content digest, rendered as lowercase hex in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentHash(pub [u8; 32]);

impl ContentHash {
    pub fn of(bytes: &[u8]) -> Self {
        ContentHash(Sha256::digest(bytes).into())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let raw = hex::decode(s).ok()?;
        let arr: [u8; 32] = raw.try_into().ok()?;
        Some(ContentHash(arr))
    }
}

impl std::fmt::Display for ContentHash {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for ContentHash {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for ContentHash {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ContentHash::from_hex(&s)
            .ok_or_else(|| serde::de::Error::custom("expected 64 hex characters"))
    }
}

/// Append-only blob store keyed by content hash.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetadataStore {
    blobs: BTreeMap<ContentHash, Vec<u8>>,
}

impl MetadataStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Idempotent: re-putting identical bytes returns the identical hash.
    pub fn put(&mut self, bytes: Vec<u8>) -> ContentHash {
        let hash = ContentHash::of(&bytes);
        self.blobs.entry(hash).or_insert(bytes);
        hash
    }

    pub fn get(&self, hash: &ContentHash) -> Result<&[u8]> {
        self.blobs
            .get(hash)
            .map(|v| v.as_slice())
            .ok_or(SimError::NotFound)
    }

    pub fn len(&self) -> usize {
        self.blobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blobs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_is_idempotent() {
        let mut s = MetadataStore::new();
        let h1 = s.put(b"metadata".to_vec());
        let h2 = s.put(b"metadata".to_vec());
        assert_eq!(h1, h2);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn distinct_content_distinct_hash() {
        let mut s = MetadataStore::new();
        let h1 = s.put(b"a".to_vec());
        let h2 = s.put(b"b".to_vec());
        assert_ne!(h1, h2);
    }

    #[test]
    fn empty_blob_hashes_to_reference_digest() {
        // SHA-256 of the empty string, from the FIPS 180-4 reference vectors.
        let mut s = MetadataStore::new();
        let h = s.put(Vec::new());
        assert_eq!(
            h.to_hex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn get_round_trips() {
        let mut s = MetadataStore::new();
        let h = s.put(b"hello".to_vec());
        assert_eq!(s.get(&h).unwrap(), b"hello");
    }

    #[test]
    fn get_unknown_hash_fails() {
        let s = MetadataStore::new();
        assert_eq!(s.get(&ContentHash::of(b"x")), Err(SimError::NotFound));
    }

    #[test]
    fn buyer_validation_flow() {
        // recompute the digest of the fetched blob and compare to the stored hash
        let mut s = MetadataStore::new();
        let h = s.put(b"{\"name\":\"art\"}".to_vec());
        let fetched = s.get(&h).unwrap();
        assert_eq!(ContentHash::of(fetched), h);
    }
}
