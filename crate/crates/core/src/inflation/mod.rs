//! Substitution rules and patch generation.
//!
//! Children are stored in the canonical frame of a parent with orientation 0
//! and anchor at the origin (unit-lattice doubled coordinates). A parent of
//! any pose maps them by rotation; its anchor scales by 3.

mod discover;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{ExactScalar, LatticePoint};
use crate::render::Color;
use crate::tile::{half_diagonal, unit_area, Tile, TileKey, TileKind};

pub use discover::{
    discover_rules, discover_rules_with_budget, DiscoveredRule, Discovery, Geometry, Signature,
    DEFAULT_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variation {
    V1,
    V2,
}

impl Variation {
    pub const ALL: [Variation; 2] = [Variation::V1, Variation::V2];

    pub fn number(self) -> u8 {
        match self {
            Variation::V1 => 1,
            Variation::V2 => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Variation::V1),
            2 => Some(Variation::V2),
            _ => None,
        }
    }
}

impl fmt::Display for Variation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.number())
    }
}

/// Which part of a rhomb lies inside the patch. Halves are cut along the
/// short diagonal; `HalfLow` is the half on the side of `anchor - h(axis)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Whole,
    HalfLow,
    HalfHigh,
}

impl Coverage {
    pub fn is_half(self) -> bool {
        self != Coverage::Whole
    }

    pub fn opposite(self) -> Coverage {
        match self {
            Coverage::Whole => Coverage::Whole,
            Coverage::HalfLow => Coverage::HalfHigh,
            Coverage::HalfHigh => Coverage::HalfLow,
        }
    }

    /// Direction from the anchor into the covered half, or `None` if whole.
    pub fn direction(self, orientation: u8) -> Option<LatticePoint> {
        let h = half_diagonal(orientation % 3);
        match self {
            Coverage::Whole => None,
            Coverage::HalfLow => Some(-h),
            Coverage::HalfHigh => Some(h),
        }
    }

    /// The half of a tile with the given orientation that faces `dir`.
    pub fn facing(orientation: u8, dir: LatticePoint) -> Coverage {
        if half_diagonal(orientation % 3).dot8(dir) > 0 {
            Coverage::HalfHigh
        } else {
            Coverage::HalfLow
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChildPlacement {
    pub offset: LatticePoint,
    pub orientation_delta: u8,
    pub kind: TileKind,
    pub coverage: Coverage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflationRule {
    pub variation: Variation,
    pub children_of_acute: Vec<ChildPlacement>,
    pub children_of_obtuse: Vec<ChildPlacement>,
}

/// Slots of the children sitting in the parent's 60° corners.
pub const CORNER_SLOTS: [u8; 2] = [1, 9];
/// Slots of the three children along the parent's long diagonal, tail to head.
pub const DIAGONAL_SLOTS: [u8; 3] = [1, 5, 9];

impl InflationRule {
    pub fn children(&self, kind: TileKind) -> &[ChildPlacement] {
        match kind {
            TileKind::Acute => &self.children_of_acute,
            TileKind::Obtuse => &self.children_of_obtuse,
        }
    }

    /// Area-weighted (acute, obtuse) counts of one parent's children.
    pub fn child_counts(&self, kind: TileKind) -> (Ratio<i64>, Ratio<i64>) {
        let mut c = [Ratio::from_integer(0), Ratio::from_integer(0)];
        for ch in self.children(kind) {
            let w = if ch.coverage.is_half() {
                Ratio::new(1, 2)
            } else {
                Ratio::from_integer(1)
            };
            c[ch.kind.index()] += w;
        }
        (c[0], c[1])
    }

    /// Checks that children of each parent kind tile the tripled rhomb
    /// exactly, unit triangle by unit triangle, and that only obtuse
    /// children are cut.
    pub fn check_coverage(&self) -> Result<(), String> {
        let parent = Tile {
            kind: TileKind::Acute,
            orientation: 0,
            anchor: LatticePoint::ORIGIN,
            scale_exponent: 1,
        };
        let expected = parent_triangles(&parent);
        for kind in TileKind::ALL {
            let mut got = Vec::new();
            for ch in self.children(kind) {
                if ch.coverage.is_half() && ch.kind != TileKind::Obtuse {
                    return Err(format!("{kind} parent: cut child of kind {}", ch.kind));
                }
                let t = Tile::new(ch.kind, ch.orientation_delta, ch.offset);
                for tri in tile_triangles(&t) {
                    if ch.coverage == Coverage::Whole || tri.1 == ch.coverage {
                        got.push(tri.0);
                    }
                }
            }
            got.sort();
            if got != expected {
                return Err(format!("{kind} parent: children do not tile the parent"));
            }
        }
        Ok(())
    }
}

/// The two unit triangles of a unit tile as (centroid ×3, half).
pub(crate) fn tile_triangles(t: &Tile) -> [(LatticePoint, Coverage); 2] {
    let v = t.vertices();
    let tail_tri = v[0] + v[1] + v[3];
    let head_tri = v[2] + v[1] + v[3];
    let tail_half = if t.orientation < 3 {
        Coverage::HalfLow
    } else {
        Coverage::HalfHigh
    };
    [(tail_tri, tail_half), (head_tri, tail_half.opposite())]
}

/// Unit triangles (centroid ×3) inside a scale-1 parent.
pub(crate) fn parent_triangles(parent: &Tile) -> Vec<LatticePoint> {
    let v = parent.vertices();
    let inside = |p: LatticePoint| -> bool {
        // p is a centroid ×3; compare against edges scaled by 3
        (0..4).all(|i| {
            let a = v[i] * 3;
            let b = v[(i + 1) % 4] * 3;
            cross(b - a, p - a) > 0
        })
    };
    let mut out = Vec::new();
    let lo = v.iter().map(|p| p.a.min(p.b)).min().unwrap() - 2;
    let hi = v.iter().map(|p| p.a.max(p.b)).max().unwrap() + 2;
    for a in (lo..=hi).filter(|a| a.rem_euclid(2) == v[0].a.rem_euclid(2)) {
        for b in (lo..=hi).filter(|b| b.rem_euclid(2) == v[0].b.rem_euclid(2)) {
            let p = LatticePoint::new(a, b);
            let up = p * 3 + LatticePoint::new(2, 0) + LatticePoint::new(0, 2);
            let down = p * 3 + LatticePoint::new(2, 0) + LatticePoint::new(2, -2);
            for c in [up, down] {
                if inside(c) {
                    out.push(c);
                }
            }
        }
    }
    out.sort();
    out
}

/// Orientation-preserving cross product sign in doubled axial coordinates.
pub(crate) fn cross(u: LatticePoint, w: LatticePoint) -> i64 {
    u.a * w.b - u.b * w.a
}

pub fn rule(variation: Variation) -> &'static InflationRule {
    crate::data::rule(variation)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileMeta {
    pub parent_slot: Option<u8>,
    pub parent_kind: Option<TileKind>,
    /// The parent's own slot inside the grandparent.
    pub grand_slot: Option<u8>,
    pub generation_born: u32,
    pub color_label: Option<Color>,
    pub coverage: Coverage,
}

impl TileMeta {
    pub fn seed() -> Self {
        TileMeta {
            parent_slot: None,
            parent_kind: None,
            grand_slot: None,
            generation_born: 1,
            color_label: None,
            coverage: Coverage::Whole,
        }
    }

    pub fn boundary_half(&self) -> bool {
        self.coverage.is_half()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchTile {
    pub tile: Tile,
    pub meta: TileMeta,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Patch {
    pub tiles: BTreeMap<TileKey, PatchTile>,
    pub generation: u32,
    pub variation: Option<Variation>,
}

/// Area-weighted census of a patch. Halves are kept separate so the
/// whole-tile and weighted views are both exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindCounts {
    pub acute_whole: u64,
    pub obtuse_whole: u64,
    pub acute_halves: u64,
    pub obtuse_halves: u64,
}

impl KindCounts {
    pub fn acute(&self) -> Ratio<u64> {
        Ratio::new(2 * self.acute_whole + self.acute_halves, 2)
    }

    pub fn obtuse(&self) -> Ratio<u64> {
        Ratio::new(2 * self.obtuse_whole + self.obtuse_halves, 2)
    }

    /// Area in unit tiles.
    pub fn units(&self) -> Ratio<u64> {
        self.acute() + self.obtuse()
    }
}

impl Patch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(tile: Tile) -> Self {
        let mut p = Patch {
            generation: 1,
            ..Patch::default()
        };
        p.tiles.insert(
            tile.key(),
            PatchTile {
                tile,
                meta: TileMeta::seed(),
            },
        );
        p
    }

    /// Builds a patch from whole unit tiles; later duplicates replace earlier.
    pub fn from_tiles<I: IntoIterator<Item = Tile>>(tiles: I) -> Self {
        let mut p = Patch::new();
        for t in tiles {
            p.tiles.insert(
                t.key(),
                PatchTile {
                    tile: t,
                    meta: TileMeta::seed(),
                },
            );
        }
        p
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn get(&self, key: &TileKey) -> Option<&PatchTile> {
        self.tiles.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PatchTile> {
        self.tiles.values()
    }

    pub fn whole_tiles(&self) -> impl Iterator<Item = &Tile> {
        self.tiles
            .values()
            .filter(|t| !t.meta.boundary_half())
            .map(|t| &t.tile)
    }

    pub fn counts(&self) -> KindCounts {
        let mut c = KindCounts::default();
        for pt in self.tiles.values() {
            match (pt.tile.kind, pt.meta.boundary_half()) {
                (TileKind::Acute, false) => c.acute_whole += 1,
                (TileKind::Obtuse, false) => c.obtuse_whole += 1,
                (TileKind::Acute, true) => c.acute_halves += 1,
                (TileKind::Obtuse, true) => c.obtuse_halves += 1,
            }
        }
        c
    }

    /// Exact area from per-tile shoelace areas (halves weigh 1/2).
    pub fn area(&self) -> ExactScalar {
        let half = ExactScalar::from_ratios(1, 2, 0, 1);
        let mut acc = ExactScalar::zero();
        for pt in self.tiles.values() {
            let a = pt.tile.area();
            acc = if pt.meta.boundary_half() {
                &acc + &(&a * &half)
            } else {
                &acc + &a
            };
        }
        acc
    }

    /// Area implied by the census, `units · √3/2`.
    pub fn census_area(&self) -> ExactScalar {
        let u = self.counts().units();
        &unit_area() * &ExactScalar::from_ratios(*u.numer() as i64, *u.denom() as i64, 0, 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    #[default]
    Parallel,
}

/// Children of one parent in global coordinates.
fn emit_children(parent: &PatchTile, rule: &InflationRule, generation: u32) -> Vec<PatchTile> {
    let t = &parent.tile;
    let o = t.orientation as i64;
    let centre = t.anchor * 3;
    let present = parent.meta.coverage.direction(t.orientation);
    let mut out = Vec::with_capacity(11);
    for (slot, ch) in rule.children(t.kind).iter().enumerate() {
        let off = ch.offset.rotated(o);
        let orientation = ((ch.orientation_delta as i64 + o).rem_euclid(6)) as u8;
        let mut coverage = match ch.coverage {
            Coverage::Whole => Coverage::Whole,
            c => {
                let d = c.direction(ch.orientation_delta).unwrap().rotated(o);
                Coverage::facing(orientation, d)
            }
        };
        if let Some(dir) = present {
            match off.dot8(dir).signum() {
                -1 => continue,
                0 => coverage = Coverage::facing(orientation, dir),
                _ => {}
            }
        }
        out.push(PatchTile {
            tile: Tile::new(ch.kind, orientation, centre + off),
            meta: TileMeta {
                parent_slot: Some(slot as u8),
                parent_kind: Some(t.kind),
                grand_slot: parent.meta.parent_slot,
                generation_born: generation,
                color_label: None,
                coverage,
            },
        });
    }
    out
}

fn merge_into(tiles: &mut BTreeMap<TileKey, PatchTile>, child: PatchTile) -> Result<(), Error> {
    use std::collections::btree_map::Entry;
    match tiles.entry(child.tile.key()) {
        Entry::Vacant(v) => {
            v.insert(child);
            Ok(())
        }
        Entry::Occupied(mut o) => {
            let cur = o.get_mut();
            let (a, b) = (cur.meta.coverage, child.meta.coverage);
            if cur.tile != child.tile || !a.is_half() || !b.is_half() || a == b {
                return Err(Error::OverlapConflict {
                    anchor: child.tile.anchor,
                    existing: format!("{} o{} {:?}", cur.tile.kind, cur.tile.orientation, a),
                    incoming: format!("{} o{} {:?}", child.tile.kind, child.tile.orientation, b),
                });
            }
            // the low-half emitter's lineage is kept
            if b == Coverage::HalfLow {
                cur.meta = child.meta;
            }
            cur.meta.coverage = Coverage::Whole;
            Ok(())
        }
    }
}

pub fn inflate(p: &Patch, rule: &InflationRule) -> Result<Patch, Error> {
    inflate_with(p, rule, Parallelism::Parallel)
}

pub fn inflate_with(p: &Patch, rule: &InflationRule, mode: Parallelism) -> Result<Patch, Error> {
    let generation = p.generation + 1;
    let parents: Vec<&PatchTile> = p.tiles.values().collect();
    let batches: Vec<Vec<PatchTile>> = match mode {
        Parallelism::Serial => parents
            .iter()
            .map(|t| emit_children(t, rule, generation))
            .collect(),
        Parallelism::Parallel => parents
            .par_iter()
            .map(|t| emit_children(t, rule, generation))
            .collect(),
    };
    let mut tiles = BTreeMap::new();
    for child in batches.into_iter().flatten() {
        merge_into(&mut tiles, child)?;
    }
    Ok(Patch {
        tiles,
        generation,
        variation: Some(rule.variation),
    })
}

/// The unit seed tile: tail at the origin, arrow at 30°.
pub fn seed_tile(kind: TileKind) -> Tile {
    Tile::new(kind, 0, LatticePoint::new(1, 1))
}

pub fn generate(
    variation: Variation,
    seed_kind: TileKind,
    generations: u32,
) -> Result<Patch, Error> {
    generate_with(variation, seed_kind, generations, Parallelism::Parallel)
}

pub fn generate_with(
    variation: Variation,
    seed_kind: TileKind,
    generations: u32,
    mode: Parallelism,
) -> Result<Patch, Error> {
    generate_from(rule(variation), seed_kind, generations, mode)
}

pub fn generate_from(
    rule: &InflationRule,
    seed_kind: TileKind,
    generations: u32,
    mode: Parallelism,
) -> Result<Patch, Error> {
    if generations == 0 {
        return Err(Error::InvalidArgument(
            "generations must be at least 1".into(),
        ));
    }
    let mut p = Patch::single(seed_tile(seed_kind));
    p.variation = Some(rule.variation);
    for _ in 1..generations {
        p = inflate_with(&p, rule, mode)?;
    }
    Ok(p)
}
