use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use hyperblocks::blocks::parse_block_selection;
use hyperblocks::group::GroupSpec;
use hyperblocks::hyperfield::HyperfieldRecord;
use hyperblocks::{AbelianGroup, BlockPartition, Elem, HyperfieldCandidate};
use serde::Deserialize;

use crate::{GlobalArgs, InputArgs};

pub fn group(global: &GlobalArgs) -> Result<Arc<AbelianGroup>> {
    let Some(spec) = &global.group else {
        bail!(hyperblocks::Error::InvalidSpec(
            "--group is required".into()
        ));
    };
    Ok(Arc::new(spec.parse::<AbelianGroup>()?))
}

pub fn minus_one(global: &GlobalArgs, group: &AbelianGroup) -> Elem {
    global
        .minus_one
        .map(Elem)
        .unwrap_or_else(|| group.involution_candidates()[0])
}

pub fn partition(global: &GlobalArgs) -> Result<BlockPartition> {
    let g = group(global)?;
    let m1 = minus_one(global, &g);
    Ok(BlockPartition::compute(g, m1)?)
}

/// The group may be given as `"Z2xZ4"` or as `{"factors": [2, 4]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum GroupField {
    Name(String),
    Spec(GroupSpec),
}

#[derive(Deserialize)]
struct InputRecord {
    group: GroupField,
    minus_one: usize,
    pi: String,
    #[serde(default)]
    status: Option<String>,
}

pub fn read_candidate(path: &Path) -> Result<HyperfieldCandidate> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rec: InputRecord = serde_json::from_str(&text)
        .map_err(|e| hyperblocks::Error::Parse(format!("{}: {e}", path.display())))?;
    let group = match rec.group {
        GroupField::Name(s) => s.parse::<AbelianGroup>()?,
        GroupField::Spec(spec) => AbelianGroup::try_from(&spec)?,
    };
    Ok(HyperfieldCandidate::from_record(&HyperfieldRecord {
        group: group.spec(),
        minus_one: rec.minus_one,
        pi: rec.pi,
        status: rec.status.unwrap_or_else(|| "unverified".into()),
    })?)
}

/// Loads the candidate and, when it can be built, its block partition.
pub fn candidate(
    global: &GlobalArgs,
    input: &InputArgs,
) -> Result<(HyperfieldCandidate, Option<BlockPartition>)> {
    match (&input.input, &input.blocks) {
        (Some(path), _) => {
            let h = read_candidate(path)?;
            let bp = BlockPartition::compute(h.group().clone(), h.minus_one()).ok();
            Ok((h, bp))
        }
        (None, Some(sel)) => {
            let bp = partition(global)?;
            let h = HyperfieldCandidate::from_blocks(&bp, &parse_block_selection(sel)?)?;
            Ok((h, Some(bp)))
        }
        (None, None) => bail!(hyperblocks::Error::InvalidSpec(
            "give a hyperfield with --in FILE or --group G --blocks SEL".into()
        )),
    }
}
