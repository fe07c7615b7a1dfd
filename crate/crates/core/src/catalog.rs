//! Append-only JSON-lines catalog of hyperfields.
//!
//! Each line holds one hyperfield in canonical form together with what is
//! known about it. Reading merges lines that describe the same hyperfield,
//! so catalogs written by separate (sharded) runs can simply be concatenated.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blocks::{block_label, BlockPartition};
use crate::census::{automorphisms_fixing, canonical_key, Census, IsoClass};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::hyperfield::{HyperfieldCandidate, HyperfieldRecord};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFlags {
    pub ample: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fetvins_checked_to: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub run_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub group: GroupSpec,
    pub minus_one: usize,
    /// Row-major bit string of the canonical `π`.
    pub pi: String,
    pub status: String,
    /// Block labels of the canonical `π`, e.g. `"BD"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<String>,
    /// Number of block selections in the isomorphism class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<u64>,
    pub flags: CatalogFlags,
    pub provenance: Provenance,
}

/// Short stable digest of the parts describing a run.
pub fn run_id(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p.as_bytes());
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn labels(blocks: &[usize]) -> String {
    blocks.iter().map(|&b| block_label(b)).collect()
}

impl CatalogRecord {
    /// Record for a hyperfield, after putting `π` in canonical form.
    pub fn from_candidate(
        h: &HyperfieldCandidate,
        bp: Option<&BlockPartition>,
        flags: CatalogFlags,
        run_id: &str,
    ) -> Result<Self> {
        let autos = automorphisms_fixing(h.group(), h.minus_one())?;
        let mut canon = HyperfieldCandidate::new(
            h.group().clone(),
            h.minus_one(),
            canonical_key(h.pi(), &autos).to_relation(),
        )?;
        canon.set_status(h.status().clone());
        let blocks = match bp {
            Some(bp) => canon.blocks_used(bp)?.map(|b| labels(&b)),
            None => None,
        };
        let rec = canon.to_record();
        Ok(CatalogRecord {
            group: rec.group,
            minus_one: rec.minus_one,
            pi: rec.pi,
            status: rec.status,
            blocks,
            members: None,
            flags,
            provenance: Provenance {
                tool_version: TOOL_VERSION.to_string(),
                run_id: run_id.to_string(),
            },
        })
    }

    pub fn from_class(class: &IsoClass, run_id: &str) -> Self {
        let rec = class.representative.to_record();
        CatalogRecord {
            group: rec.group,
            minus_one: rec.minus_one,
            pi: class.canonical.clone(),
            status: rec.status,
            blocks: Some(labels(&class.blocks)),
            members: Some(class.members),
            flags: CatalogFlags {
                ample: class.ample,
                ..CatalogFlags::default()
            },
            provenance: Provenance {
                tool_version: TOOL_VERSION.to_string(),
                run_id: run_id.to_string(),
            },
        }
    }

    /// One record per class of the census.
    pub fn from_census(census: &Census, run_id: &str) -> Vec<Self> {
        census
            .classes
            .iter()
            .map(|c| Self::from_class(c, run_id))
            .collect()
    }

    pub fn to_candidate(&self) -> Result<HyperfieldCandidate> {
        HyperfieldCandidate::from_record(&HyperfieldRecord {
            group: self.group.clone(),
            minus_one: self.minus_one,
            pi: self.pi.clone(),
            status: self.status.clone(),
        })
    }

    fn key(&self) -> (Vec<usize>, usize, String) {
        (self.group.factors.clone(), self.minus_one, self.pi.clone())
    }

    /// Folds a record for the same hyperfield into this one.
    ///
    /// Member counts add up only across different runs, so re-reading a
    /// catalog that repeats a line does not double count.
    fn absorb(&mut self, other: CatalogRecord) {
        if other.provenance.run_id != self.provenance.run_id {
            self.members = match (self.members, other.members) {
                (Some(a), Some(b)) => Some(a + b),
                (a, b) => a.or(b),
            };
        }
        self.blocks = self.blocks.take().or(other.blocks);
        self.flags.ample |= other.flags.ample;
        self.flags.fetvins_checked_to = self
            .flags
            .fetvins_checked_to
            .max(other.flags.fetvins_checked_to);
        let definite = |s: &Option<String>| s.as_deref().is_some_and(|s| s != "unknown");
        if !definite(&self.flags.quotient_status) && other.flags.quotient_status.is_some() {
            self.flags.quotient_status = other.flags.quotient_status;
        }
        if self.status == "unverified" {
            self.status = other.status;
        }
    }
}

pub fn append_jsonl(path: &Path, records: &[CatalogRecord]) -> Result<()> {
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot open {}: {e}", path.display())))?;
    write_records(file, records)
}

pub fn write_jsonl(path: &Path, records: &[CatalogRecord]) -> Result<()> {
    let file = File::create(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot create {}: {e}", path.display())))?;
    write_records(file, records)
}

fn write_records(file: File, records: &[CatalogRecord]) -> Result<()> {
    let mut w = std::io::BufWriter::new(file);
    for rec in records {
        let line = serde_json::to_string(rec).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| Error::InvalidSpec(format!("write failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| Error::InvalidSpec(format!("write failed: {e}")))
}

/// Parses JSON lines (blank lines skipped) and merges duplicates, keeping
/// the order of first appearance.
pub fn parse_catalog(reader: impl BufRead) -> Result<Vec<CatalogRecord>> {
    let mut order: Vec<(Vec<usize>, usize, String)> = Vec::new();
    let mut merged: BTreeMap<(Vec<usize>, usize, String), CatalogRecord> = BTreeMap::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CatalogRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        let key = rec.key();
        match merged.get_mut(&key) {
            Some(existing) => existing.absorb(rec),
            None => {
                order.push(key.clone());
                merged.insert(key, rec);
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|k| merged.remove(&k).expect("key recorded"))
        .collect())
}

pub fn read_catalog(path: &Path) -> Result<Vec<CatalogRecord>> {
    let file = File::open(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot open {}: {e}", path.display())))?;
    parse_catalog(BufReader::new(file))
}
