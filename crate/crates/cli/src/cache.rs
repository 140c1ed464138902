//! Output cache keyed by a content hash of the canonical job description.

use std::fs;
use std::io;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Format, JobSpec};

/// `serde_json` keeps object keys sorted, so re-serializing a parsed
/// document gives a canonical byte string.
pub fn key(job: &JobSpec, input: &Value) -> String {
    let canonical = json!({
        "command": job.command.name(),
        "format": match job.output { Format::Json => "json", Format::Table => "table" },
        "input": input,
        "max_group_order": job.max_group_order,
        "seed": job.seed,
        "samples": job.samples,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let bytes = serde_json::to_vec(&canonical).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

pub fn load(dir: &Path, key: &str) -> Option<String> {
    fs::read_to_string(dir.join(format!("{key}.out"))).ok()
}

pub fn store(dir: &Path, key: &str, contents: &str) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{key}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(tmp, dir.join(format!("{key}.out")))
}
