//! Append-only result cache: one JSON record per line.
//!
//! Keys are the graph6 text exactly as computed (no canonical labelling),
//! the weight/distribution echo, the canonical command echo, and the
//! tolerance; a hit replays the stored body byte for byte. Differing
//! tolerances never share an entry because the tolerance is part of the key.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub graph6: String,
    pub weights: String,
    pub command: String,
    pub tol: String,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    key: CacheKey,
    body: String,
}

/// Latest stored body for the key, if any.
pub fn lookup(path: &Path, key: &CacheKey) -> Option<String> {
    let file = std::fs::File::open(path).ok()?;
    let mut hit = None;
    for line in BufReader::new(file).lines() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(record) = serde_json::from_str::<CacheRecord>(&line) {
            if &record.key == key {
                hit = Some(record.body);
            }
        }
    }
    hit
}

pub fn store(path: &Path, key: &CacheKey, body: &str) -> std::io::Result<()> {
    let record = CacheRecord { key: key.clone(), body: body.to_string() };
    let line = serde_json::to_string(&record).expect("cache records are plain strings");
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{line}")
}
