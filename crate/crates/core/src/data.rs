//! Shipped data files: rule tables, the default label table and the
//! five-colour table.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::inflation::{ChildPlacement, Coverage, InflationRule, Variation};
use crate::tile::{LabelTable, TileKind};

pub const RULES_FORMAT_VERSION: u32 = 1;

const RULES_V1: &str = include_str!("../data/rules_v1.json");
const RULES_V2: &str = include_str!("../data/rules_v2.json");
const LABELS: &str = include_str!("../data/labels.json");
const FIVE_COLORS: &str = include_str!("../data/five_colors.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleFile {
    pub format_version: u32,
    pub variation: Variation,
    pub children_of_acute: Vec<ChildPlacement>,
    pub children_of_obtuse: Vec<ChildPlacement>,
    pub checksum: String,
}

/// sha256 over one line per placement, acute parent first:
/// `K:a,b,delta,kind,coverage` with coverage one of W/L/H.
pub fn rule_checksum(rule: &InflationRule) -> String {
    let mut h = Sha256::new();
    for kind in TileKind::ALL {
        for c in rule.children(kind) {
            let cov = match c.coverage {
                Coverage::Whole => 'W',
                Coverage::HalfLow => 'L',
                Coverage::HalfHigh => 'H',
            };
            h.update(format!(
                "{}:{},{},{},{},{}\n",
                kind.letter(),
                c.offset.a,
                c.offset.b,
                c.orientation_delta,
                c.kind.letter(),
                cov
            ));
        }
    }
    hex::encode(h.finalize())
}

pub fn parse_rule_file(text: &str) -> Result<InflationRule, Error> {
    let f: RuleFile = serde_json::from_str(text)?;
    if f.format_version != RULES_FORMAT_VERSION {
        return Err(Error::Data(format!(
            "unsupported rule format {}",
            f.format_version
        )));
    }
    let rule = InflationRule {
        variation: f.variation,
        children_of_acute: f.children_of_acute,
        children_of_obtuse: f.children_of_obtuse,
    };
    let sum = rule_checksum(&rule);
    if sum != f.checksum {
        return Err(Error::Data(format!(
            "rule checksum mismatch for {}",
            f.variation
        )));
    }
    Ok(rule)
}

pub fn rule_file(rule: &InflationRule) -> RuleFile {
    RuleFile {
        format_version: RULES_FORMAT_VERSION,
        variation: rule.variation,
        children_of_acute: rule.children_of_acute.clone(),
        children_of_obtuse: rule.children_of_obtuse.clone(),
        checksum: rule_checksum(rule),
    }
}

pub fn rule(variation: Variation) -> &'static InflationRule {
    static V1: OnceLock<InflationRule> = OnceLock::new();
    static V2: OnceLock<InflationRule> = OnceLock::new();
    let (cell, text) = match variation {
        Variation::V1 => (&V1, RULES_V1),
        Variation::V2 => (&V2, RULES_V2),
    };
    cell.get_or_init(|| parse_rule_file(text).expect("shipped rule data is corrupt"))
}

#[derive(Deserialize)]
struct LabelFile {
    format_version: u32,
    symbols: LabelSymbols,
    partner: Vec<u8>,
    #[serde(default)]
    names: Vec<String>,
}

#[derive(Deserialize)]
struct LabelSymbols {
    acute: [u8; 4],
    obtuse: [u8; 4],
}

pub fn parse_label_file(text: &str) -> Result<LabelTable, Error> {
    let f: LabelFile = serde_json::from_str(text)?;
    if f.format_version != 1 {
        return Err(Error::Data(format!(
            "unsupported label format {}",
            f.format_version
        )));
    }
    let t = LabelTable {
        symbols: [f.symbols.acute, f.symbols.obtuse],
        partner: f.partner,
        names: f.names,
    };
    let n = t.partner.len();
    if t.symbols.iter().flatten().any(|&s| s as usize >= n) || !t.is_involutive() {
        return Err(Error::Data(
            "label table is not an involution over its symbols".into(),
        ));
    }
    Ok(t)
}

/// Reads either the shipped label layout or a serialized `LabelTable`.
pub fn load_label_table(text: &str) -> Result<LabelTable, Error> {
    parse_label_file(text).or_else(|_| {
        let t: LabelTable = serde_json::from_str(text)?;
        if !t.is_involutive() {
            return Err(Error::Data(
                "label table is not an involution over its symbols".into(),
            ));
        }
        Ok(t)
    })
}

pub fn default_labels() -> LabelTable {
    static T: OnceLock<LabelTable> = OnceLock::new();
    T.get_or_init(|| parse_label_file(LABELS).expect("shipped label data is corrupt"))
        .clone()
}

/// Slot table for the five-colour scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiveColorTable {
    pub format_version: u32,
    /// Acute children in these slots, per parent kind, are pink.
    pub pink_slots: PinkSlots,
    /// Acute tiles whose parent sat in one of these slots are green.
    pub green_parent_slots: Vec<u8>,
    pub blue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinkSlots {
    pub acute: Vec<u8>,
    pub obtuse: Vec<u8>,
}

impl PinkSlots {
    pub fn get(&self, parent: TileKind) -> &[u8] {
        match parent {
            TileKind::Acute => &self.acute,
            TileKind::Obtuse => &self.obtuse,
        }
    }
}

pub fn five_color_table() -> &'static FiveColorTable {
    static T: OnceLock<FiveColorTable> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(FIVE_COLORS).expect("shipped colour data is corrupt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_rules_load() {
        for v in Variation::ALL {
            let r = rule(v);
            assert_eq!(r.variation, v);
            assert_eq!(r.children_of_acute.len(), 11);
            assert_eq!(r.children_of_obtuse.len(), 11);
        }
    }

    #[test]
    fn checksum_detects_edits() {
        let mut f = rule_file(rule(Variation::V1));
        f.children_of_acute[2].orientation_delta ^= 1;
        let text = serde_json::to_string(&f).unwrap();
        assert!(matches!(parse_rule_file(&text), Err(Error::Data(_))));
    }

    #[test]
    fn rule_file_round_trip() {
        let text = serde_json::to_string(&rule_file(rule(Variation::V2))).unwrap();
        assert_eq!(&parse_rule_file(&text).unwrap(), rule(Variation::V2));
    }

    #[test]
    fn default_labels_are_involutive() {
        let t = default_labels();
        assert!(t.is_involutive());
        assert_eq!(t.symbol_count(), 4);
    }
}
