//! JSON interchange formats. Every writer goes through [`to_sorted_json`], so
//! object keys always come out in sorted order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bh::{BhDesign, DesignChoice, SpecialClique, NUM_BLOCKS};
use crate::classify::ClassificationRecord;
use crate::gf2::Block;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad block mask {0:?} (expected 16 hex digits)")]
    BadMask(String),
    #[error("design has {0} blocks, expected 336")]
    BlockCount(usize),
}

/// Pretty JSON with object keys sorted, newline-terminated.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String, FormatError> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// `{ "blocks": [336 hex masks], "choice": [21 trits] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignJson {
    pub blocks: Vec<String>,
    pub choice: DesignChoice,
}

impl DesignJson {
    pub fn from_design(d: &BhDesign) -> DesignJson {
        DesignJson { blocks: d.blocks.iter().map(|b| b.to_hex()).collect(), choice: d.choice }
    }

    pub fn to_design(&self) -> Result<BhDesign, FormatError> {
        if self.blocks.len() != NUM_BLOCKS {
            return Err(FormatError::BlockCount(self.blocks.len()));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|s| Block::from_hex(s).ok_or_else(|| FormatError::BadMask(s.clone())))
            .collect::<Result<_, _>>()?;
        Ok(BhDesign { choice: self.choice, blocks })
    }
}

pub fn design_to_json(d: &BhDesign) -> Result<String, FormatError> {
    to_sorted_json(&DesignJson::from_design(d))
}

pub fn design_from_json(s: &str) -> Result<BhDesign, FormatError> {
    serde_json::from_str::<DesignJson>(s)?.to_design()
}

#[derive(Debug, Clone, Serialize)]
pub struct CliqueJson {
    pub blocks: Vec<String>,
    pub class_id: usize,
    pub id: usize,
    pub label: u8,
}

impl From<&SpecialClique> for CliqueJson {
    fn from(c: &SpecialClique) -> CliqueJson {
        CliqueJson {
            blocks: c.blocks.iter().map(|b| b.to_hex()).collect(),
            class_id: c.class_id,
            id: c.id(),
            label: c.label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RecordJson {
    aut_order: u64,
    canonical_choice: DesignChoice,
    families: Vec<String>,
    two_rank: usize,
}

pub fn classification_to_json(records: &[ClassificationRecord]) -> Result<String, FormatError> {
    to_sorted_json(&records)
}

pub fn classification_from_json(s: &str) -> Result<Vec<ClassificationRecord>, FormatError> {
    let raw: Vec<RecordJson> = serde_json::from_str(s)?;
    Ok(raw
        .into_iter()
        .map(|r| ClassificationRecord {
            aut_order: r.aut_order,
            canonical_choice: r.canonical_choice,
            families: r.families,
            two_rank: r.two_rank,
        })
        .collect())
}

/// Histogram as `[[key, count], ...]` in ascending key order.
pub fn histogram_pairs(h: &std::collections::BTreeMap<u64, u64>) -> Vec<[u64; 2]> {
    h.iter().map(|(&k, &v)| [k, v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bh::Universe;

    #[test]
    fn design_json_round_trip() {
        let u = Universe::build().unwrap();
        let d = u.assemble_design(DesignChoice::from_index(123_456_789).unwrap());
        let s = design_to_json(&d).unwrap();
        assert!(s.find("\"blocks\"").unwrap() < s.find("\"choice\"").unwrap());
        let back = design_from_json(&s).unwrap();
        assert_eq!(back, d);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["blocks"].as_array().unwrap().len(), 336);
        assert!(v["blocks"][0].as_str().unwrap().len() == 16);
    }

    #[test]
    fn design_json_rejects_garbage() {
        let bad = r#"{"blocks": ["xyz"], "choice": [0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#;
        assert!(matches!(design_from_json(bad), Err(FormatError::BlockCount(1))));
        let short_choice = r#"{"blocks": [], "choice": [0,0]}"#;
        assert!(design_from_json(short_choice).is_err());
    }

    #[test]
    fn classification_round_trip() {
        let recs = vec![ClassificationRecord {
            aut_order: 128,
            canonical_choice: DesignChoice::from_index(42).unwrap(),
            families: vec!["H1".into()],
            two_rank: 13,
        }];
        let s = classification_to_json(&recs).unwrap();
        assert_eq!(classification_from_json(&s).unwrap(), recs);
        let keys: Vec<usize> = ["aut_order", "canonical_choice", "families", "two_rank"]
            .iter()
            .map(|k| s.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
