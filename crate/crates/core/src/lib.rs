//! A 6-fold substitution tiling built from two 60°/120° diamonds.
//!
//! Patches are generated by inflation, checked against edge-matching rules,
//! rebuilt as hexagrid duals, regrouped into darts, kites and shields, and
//! rendered to SVG.

pub mod data;
pub mod dks;
pub mod error;
pub mod hexagrid;
pub mod inflation;
pub mod lattice;
pub mod matching;
pub mod render;
pub mod seqsub;
pub mod tile;

pub use error::{Error, Result};
pub use inflation::{
    generate, inflate, rule, Coverage, InflationRule, Patch, PatchTile, TileMeta, Variation,
};
pub use lattice::{ExactScalar, LatticePoint};
pub use tile::{LabelTable, Tile, TileKey, TileKind};
