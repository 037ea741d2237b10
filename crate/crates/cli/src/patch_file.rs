//! JSON persistence for patches.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sixfold::{Error, LatticePoint, Patch, PatchTile, Tile, TileKind, TileMeta, Variation};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileRecord {
    pub anchor: LatticePoint,
    pub orientation: u8,
    pub kind: TileKind,
    pub metadata: TileMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchFile {
    pub format_version: u32,
    pub variation: Option<u8>,
    pub generation: u32,
    pub tiles: Vec<TileRecord>,
    /// SHA-256 of the compact JSON of `tiles` in key order.
    pub checksum: String,
}

fn checksum(tiles: &[TileRecord]) -> String {
    let json = serde_json::to_string(tiles).expect("tile records serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

impl PatchFile {
    pub fn from_patch(p: &Patch) -> Self {
        let tiles: Vec<TileRecord> = p
            .iter()
            .map(|t| TileRecord {
                anchor: t.tile.anchor,
                orientation: t.tile.orientation,
                kind: t.tile.kind,
                metadata: t.meta.clone(),
            })
            .collect();
        PatchFile {
            format_version: FORMAT_VERSION,
            variation: p.variation.map(Variation::number),
            generation: p.generation,
            checksum: checksum(&tiles),
            tiles,
        }
    }

    pub fn to_patch(&self) -> Result<Patch, Error> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported patch format version {}",
                self.format_version
            )));
        }
        if checksum(&self.tiles) != self.checksum {
            return Err(Error::InvalidArgument("patch checksum mismatch".into()));
        }
        let variation = match self.variation {
            None => None,
            Some(n) => Some(
                Variation::from_number(n)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown variation {n}")))?,
            ),
        };
        let mut tiles = BTreeMap::new();
        for r in &self.tiles {
            if r.orientation > 5 {
                return Err(Error::InvalidArgument(format!(
                    "orientation {} out of range",
                    r.orientation
                )));
            }
            let tile = Tile::new(r.kind, r.orientation, r.anchor);
            if tiles
                .insert(
                    tile.key(),
                    PatchTile {
                        tile,
                        meta: r.metadata.clone(),
                    },
                )
                .is_some()
            {
                return Err(Error::InvalidArgument(format!(
                    "duplicate tile at {:?}",
                    r.anchor
                )));
            }
        }
        Ok(Patch {
            tiles,
            generation: self.generation,
            variation,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("patch file serializes")
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = sixfold::generate(Variation::V2, TileKind::Obtuse, 3).unwrap();
        let f = PatchFile::parse(&PatchFile::from_patch(&p).to_json()).unwrap();
        assert_eq!(f.to_patch().unwrap(), p);
    }

    #[test]
    fn tampering_is_detected() {
        let p = sixfold::generate(Variation::V1, TileKind::Acute, 2).unwrap();
        let mut f = PatchFile::from_patch(&p);
        f.tiles[0].orientation = (f.tiles[0].orientation + 3) % 6;
        assert!(f.to_patch().is_err());
    }
}
