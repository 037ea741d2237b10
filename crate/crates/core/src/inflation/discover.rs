//! Exhaustive search for inflation rules of the tripled acute rhomb.
//!
//! Stage one enumerates every pairing of the 18 unit triangles of the
//! parent into rhombs (a boundary triangle may pair with one outside the
//! parent, giving a half tile) and keeps the pairings that sit on a
//! rhombille tiling with whole rhombs in both 60° corners. Stage two assigns
//! kinds and arrows to the acute parent's children, keeps the obtuse parent's
//! children from a shipped rule, and accepts candidates whose patches grow
//! without overlap conflicts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    generate_from, parent_triangles, rule, tile_triangles, ChildPlacement, Coverage, InflationRule,
    Parallelism, Variation,
};
use crate::error::Error;
use crate::lattice::LatticePoint;
use crate::matching::periodic_rhombille;
use crate::seqsub::{table8, Letter, Word};
use crate::tile::{Tile, TileKey, TileKind};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Generations grown from each seed when checking a candidate.
const CHECK_GENERATIONS: [u32; 2] = [3, 4];

/// Arrows of the three children along the parent's long diagonal, tail to
/// head; `X` runs with the parent's arrow, `Y` against it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature(pub Word);

impl Signature {
    /// Table row (index and name) and column holding the production
    /// `X → signature`.
    pub fn classify(&self) -> Option<(usize, String, &'static str)> {
        const COLUMNS: [&str; 4] = ["substitution rule", "mirror", "dual", "dual mirror"];
        for (r, row) in table8().into_iter().enumerate() {
            for (i, cell) in row.cells.iter().enumerate() {
                if cell.lhs == Letter::X && cell.image == self.0 {
                    return Some((r, row.name, COLUMNS[i]));
                }
            }
        }
        None
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscoveredRule {
    pub rule: InflationRule,
    pub signature: Signature,
    /// Index into `Discovery::geometries`.
    pub geometry: usize,
}

/// A pairing of the parent's unit triangles: child rhombs with their axis
/// and whether they are cut by the parent's boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub children: Vec<(TileKey, Coverage)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Discovery {
    /// Number of triangle pairings found.
    pub pairings: usize,
    /// Pairings that survive the rhombille and corner constraints.
    pub geometries: Vec<Geometry>,
    pub candidates_checked: u64,
    pub nodes: u64,
    pub solutions: Vec<DiscoveredRule>,
}

impl Discovery {
    /// Solution count per diagonal signature.
    pub fn classes(&self) -> BTreeMap<Signature, usize> {
        let mut m = BTreeMap::new();
        for s in &self.solutions {
            *m.entry(s.signature.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn contains(&self, r: &InflationRule) -> bool {
        let key = |r: &InflationRule| (sorted(&r.children_of_acute), sorted(&r.children_of_obtuse));
        let want = key(r);
        self.solutions.iter().any(|s| key(&s.rule) == want)
    }
}

fn sorted(v: &[ChildPlacement]) -> Vec<(LatticePoint, u8, TileKind, Coverage)> {
    let mut out: Vec<_> = v
        .iter()
        .map(|c| (c.offset, c.orientation_delta, c.kind, c.coverage))
        .collect();
    out.sort_by_key(|c| (c.0, c.1, c.2.index(), c.3 as u8));
    out
}

pub fn discover_rules() -> Result<Discovery, Error> {
    discover_rules_with_budget(DEFAULT_BUDGET)
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn spend(&mut self, n: u64) -> Result<(), Error> {
        self.used += n;
        if self.used > self.limit {
            Err(Error::SearchBudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

pub fn discover_rules_with_budget(budget: u64) -> Result<Discovery, Error> {
    let mut b = Budget {
        limit: budget,
        used: 0,
    };
    let pairings = pair_triangles(&mut b)?;
    let n_pairings = pairings.len();
    let geometries: Vec<Geometry> = pairings
        .into_iter()
        .filter(|g| on_rhombille(g) && corners_whole(g))
        .collect();

    let mut candidates = Vec::new();
    for (gi, g) in geometries.iter().enumerate() {
        for variation in Variation::ALL {
            for acute in fills(g, &mut b)? {
                candidates.push((gi, acute, variation));
            }
        }
    }
    let checked = candidates.len() as u64;
    let mut solutions: Vec<DiscoveredRule> = candidates
        .into_par_iter()
        .filter_map(|(gi, children_of_acute, variation)| {
            let r = InflationRule {
                variation,
                children_of_acute,
                children_of_obtuse: rule(variation).children_of_obtuse.clone(),
            };
            grows_cleanly(&r).then(|| {
                let signature = signature(&r)?;
                Some(DiscoveredRule {
                    rule: r,
                    signature,
                    geometry: gi,
                })
            })?
        })
        .collect();
    solutions.sort_by(|a, b| {
        (
            &a.signature,
            a.geometry,
            a.rule.variation.number(),
            sorted(&a.rule.children_of_acute),
        )
            .cmp(&(
                &b.signature,
                b.geometry,
                b.rule.variation.number(),
                sorted(&b.rule.children_of_acute),
            ))
    });
    solutions.dedup_by(|a, b| {
        a.geometry == b.geometry
            && sorted(&a.rule.children_of_acute) == sorted(&b.rule.children_of_acute)
            && a.rule.variation == b.rule.variation
    });
    Ok(Discovery {
        pairings: n_pairings,
        geometries,
        candidates_checked: checked,
        nodes: b.used,
        solutions,
    })
}

fn parent() -> Tile {
    Tile {
        kind: TileKind::Acute,
        orientation: 0,
        anchor: LatticePoint::ORIGIN,
        scale_exponent: 1,
    }
}

/// All unit rhombs (axis 0..3) touching the parent, with the parent's
/// triangles they cover.
fn rhombs_touching(inside: &BTreeSet<LatticePoint>) -> Vec<(TileKey, Vec<LatticePoint>)> {
    let mut out = Vec::new();
    for a in -8..=8 {
        for bb in -8..=8 {
            for axis in 0..3u8 {
                let t = Tile::new(TileKind::Acute, axis, LatticePoint::new(a, bb));
                let tris: Vec<LatticePoint> = tile_triangles(&t)
                    .iter()
                    .map(|x| x.0)
                    .filter(|c| inside.contains(c))
                    .collect();
                if !tris.is_empty() {
                    out.push((t.key(), tris));
                }
            }
        }
    }
    out
}

fn pair_triangles(b: &mut Budget) -> Result<Vec<Geometry>, Error> {
    let tris = parent_triangles(&parent());
    let inside: BTreeSet<LatticePoint> = tris.iter().copied().collect();
    let rhombs = rhombs_touching(&inside);
    let mut by_tri: BTreeMap<LatticePoint, Vec<usize>> = BTreeMap::new();
    for (i, (_, ts)) in rhombs.iter().enumerate() {
        for t in ts {
            by_tri.entry(*t).or_default().push(i);
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut covered = BTreeSet::new();
    search(
        &tris,
        &rhombs,
        &by_tri,
        &mut covered,
        &mut chosen,
        &mut out,
        b,
    )?;
    Ok(out)
}

fn search(
    tris: &[LatticePoint],
    rhombs: &[(TileKey, Vec<LatticePoint>)],
    by_tri: &BTreeMap<LatticePoint, Vec<usize>>,
    covered: &mut BTreeSet<LatticePoint>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Geometry>,
    b: &mut Budget,
) -> Result<(), Error> {
    b.spend(1)?;
    let Some(next) = tris.iter().find(|t| !covered.contains(t)) else {
        let children = chosen
            .iter()
            .map(|&i| {
                let (key, ts) = &rhombs[i];
                let cov = if ts.len() == 2 {
                    Coverage::Whole
                } else {
                    half_coverage(*key, ts[0])
                };
                (*key, cov)
            })
            .collect();
        out.push(Geometry { children });
        return Ok(());
    };
    for &i in &by_tri[next] {
        let ts = &rhombs[i].1;
        if ts.iter().any(|t| covered.contains(t)) {
            continue;
        }
        covered.extend(ts.iter().copied());
        chosen.push(i);
        search(tris, rhombs, by_tri, covered, chosen, out, b)?;
        chosen.pop();
        for t in ts {
            covered.remove(t);
        }
    }
    Ok(())
}

fn half_coverage(key: TileKey, tri: LatticePoint) -> Coverage {
    let t = Tile::new(TileKind::Obtuse, key.axis, key.anchor);
    tile_triangles(&t)
        .into_iter()
        .find(|x| x.0 == tri)
        .map(|x| x.1)
        .unwrap_or(Coverage::Whole)
}

/// Whether the child rhombs lie on one rhombille tiling.
fn on_rhombille(g: &Geometry) -> bool {
    (0..2u8).any(|parity| {
        let keys: BTreeSet<TileKey> = periodic_rhombille(4, parity)
            .iter()
            .map(|t| t.tile.key())
            .collect();
        (-6..=6i64).any(|a| {
            (-6..=6i64).any(|bb| {
                let s = LatticePoint::new(a, bb);
                g.children.iter().all(|(k, _)| {
                    keys.contains(&TileKey {
                        anchor: k.anchor + s,
                        axis: k.axis,
                    })
                })
            })
        })
    })
}

/// Whole children sitting in the parent's 60° corners with a 60° corner of
/// their own, so that corners can gather into six-fold stars.
fn corners_whole(g: &Geometry) -> bool {
    let v = parent().vertices();
    [v[0], v[2]].iter().all(|&c| {
        g.children.iter().any(|(k, cov)| {
            let t = Tile::new(TileKind::Acute, k.axis, k.anchor);
            let tv = t.vertices();
            *cov == Coverage::Whole && (tv[0] == c || tv[2] == c)
        })
    })
}

/// Slot order: children sorted by offset.
fn slots(g: &Geometry) -> Vec<(TileKey, Coverage)> {
    let mut s = g.children.clone();
    s.sort_by_key(|(k, _)| k.anchor);
    s
}

fn is_corner(k: &TileKey) -> bool {
    let v = parent().vertices();
    let tv = Tile::new(TileKind::Acute, k.axis, k.anchor).vertices();
    [v[0], v[2]].iter().any(|c| tv[0] == *c || tv[2] == *c)
}

/// Acute-parent fills of one geometry: corner children acute, cut children
/// obtuse, five acute children in all, every choice of arrows.
fn fills(g: &Geometry, b: &mut Budget) -> Result<Vec<Vec<ChildPlacement>>, Error> {
    let s = slots(g);
    let free: Vec<usize> = (0..s.len())
        .filter(|&i| s[i].1 == Coverage::Whole && !is_corner(&s[i].0))
        .collect();
    let corners = s
        .iter()
        .filter(|(k, c)| *c == Coverage::Whole && is_corner(k))
        .count();
    let need = 5usize.saturating_sub(corners);
    let mut out = Vec::new();
    for mask in 0u32..(1 << free.len()) {
        if mask.count_ones() as usize != need {
            continue;
        }
        for arrows in 0u32..(1 << s.len()) {
            b.spend(1)?;
            let children = s
                .iter()
                .enumerate()
                .map(|(i, (k, cov))| {
                    let acute = is_corner(k) && *cov == Coverage::Whole
                        || free
                            .iter()
                            .position(|&f| f == i)
                            .is_some_and(|j| mask >> j & 1 == 1);
                    ChildPlacement {
                        offset: k.anchor,
                        orientation_delta: k.axis + if arrows >> i & 1 == 1 { 3 } else { 0 },
                        kind: if acute {
                            TileKind::Acute
                        } else {
                            TileKind::Obtuse
                        },
                        coverage: *cov,
                    }
                })
                .collect();
            out.push(children);
        }
    }
    Ok(out)
}

fn grows_cleanly(r: &InflationRule) -> bool {
    CHECK_GENERATIONS.iter().all(|&n| {
        TileKind::ALL
            .iter()
            .all(|&seed| generate_from(r, seed, n, Parallelism::Serial).is_ok())
    })
}

fn signature(r: &InflationRule) -> Option<Signature> {
    let mut diag: Vec<&ChildPlacement> = r
        .children_of_acute
        .iter()
        .filter(|c| {
            c.coverage == Coverage::Whole
                && c.offset.a == c.offset.b
                && c.orientation_delta % 3 == 0
        })
        .collect();
    diag.sort_by_key(|c| c.offset.a);
    if diag.len() != 3 {
        return None;
    }
    let letters: Vec<Letter> = diag
        .iter()
        .map(|c| {
            if c.orientation_delta == 0 {
                Letter::X
            } else {
                Letter::Y
            }
        })
        .collect();
    Some(Signature(Word(letters)))
}
