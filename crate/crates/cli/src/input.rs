//! Input documents accepted by the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;
use stringy_core::{ActionSpec, GroupSpec, PicardGroupData};

/// `{"group": <group spec>, "action": <action spec>}`, or a bare group spec
/// meaning `dim = 0`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum InstanceDoc {
    Full {
        group: GroupSpec,
        #[serde(default)]
        action: ActionSpec,
    },
    Bare(GroupSpec),
}

impl InstanceDoc {
    pub fn into_parts(self) -> (GroupSpec, ActionSpec) {
        match self {
            InstanceDoc::Full { group, action } => (group, action),
            InstanceDoc::Bare(group) => (group, ActionSpec::point()),
        }
    }
}

/// `{"degree": "7/2" | 3, "monodromies": [[k, r], [k, r], [k, r]]}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RrDoc {
    #[serde(default = "zero_degree")]
    pub degree: Value,
    pub monodromies: [[u64; 2]; 3],
}

fn zero_degree() -> Value {
    Value::from(0)
}

pub fn parse_rational(v: &Value) -> anyhow::Result<BigRational> {
    let text = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => anyhow::bail!("degree must be an integer or a \"p/q\" string, got {other}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>()?, d.trim().parse::<BigInt>()?),
        None => (text.parse::<BigInt>()?, BigInt::from(1)),
    };
    anyhow::ensure!(den != BigInt::from(0), "zero denominator in degree");
    Ok(BigRational::new(num, den))
}

/// Picard data plus the root index: `{"free_rank", "torsion", "element", "r"}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsDoc {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    pub element: Vec<i64>,
    pub r: u64,
}

impl RootsDoc {
    pub fn picard(&self) -> stringy_core::Result<PicardGroupData> {
        PicardGroupData::new(self.free_rank, self.torsion.clone(), self.element.clone())
    }
}

/// A ring table document is recognized by its `products` key.
pub fn is_table_document(v: &Value) -> bool {
    v.get("products").is_some() && v.get("basis").is_some()
}
