//! Darts, kites and shields as a view over a rhomb patch.
//!
//! A dart is a whole acute tile (its two long-diagonal halves), a kite is one
//! such half plus the obtuse tile sitting in its 120° apex, and a shield is
//! three obtuse tiles around a common 120° vertex. Which acute tiles split is
//! an exact-cover problem over the obtuse tiles, solved with a SAT solver.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use varisat::{ExtendFormula, Lit, Solver};

use crate::error::Error;
use crate::inflation::{inflate, rule, Coverage, Patch, PatchTile, Variation};
use crate::lattice::LatticePoint;
use crate::matching::vertex_map;
use crate::tile::{TileKey, TileKind};

/// Which long-diagonal half of an acute tile: `Right` holds corner 1,
/// `Left` holds corner 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn corner(self) -> usize {
        match self {
            Side::Right => 1,
            Side::Left => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureKind {
    Dart,
    Kite,
    Shield,
}

impl FigureKind {
    /// Area in unit tiles.
    pub fn area(self) -> Ratio<u64> {
        match self {
            FigureKind::Dart => Ratio::from_integer(1),
            FigureKind::Kite => Ratio::new(3, 2),
            FigureKind::Shield => Ratio::from_integer(3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "figure", rename_all = "lowercase")]
pub enum DksFigure {
    Dart {
        acute: PatchTile,
    },
    Kite {
        acute: PatchTile,
        side: Side,
        obtuse: PatchTile,
    },
    Shield {
        center: LatticePoint,
        obtuse: [PatchTile; 3],
    },
}

impl DksFigure {
    pub fn kind(&self) -> FigureKind {
        match self {
            DksFigure::Dart { .. } => FigureKind::Dart,
            DksFigure::Kite { .. } => FigureKind::Kite,
            DksFigure::Shield { .. } => FigureKind::Shield,
        }
    }

    /// Constituent polygons, counterclockwise.
    pub fn pieces(&self) -> Vec<Vec<LatticePoint>> {
        match self {
            DksFigure::Dart { acute } => vec![acute.tile.vertices().to_vec()],
            DksFigure::Kite {
                acute,
                side,
                obtuse,
            } => {
                vec![half_triangle(acute, *side), obtuse.tile.vertices().to_vec()]
            }
            DksFigure::Shield { obtuse, .. } => {
                obtuse.iter().map(|t| t.tile.vertices().to_vec()).collect()
            }
        }
    }

    /// Outline of the union of the pieces.
    pub fn outline(&self) -> Vec<LatticePoint> {
        union_outline(&self.pieces())
    }
}

/// Pieces left over at the patch boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "piece", rename_all = "snake_case")]
pub enum Remainder {
    AcuteHalf { acute: PatchTile, side: Side },
    Obtuse { obtuse: PatchTile },
}

impl Remainder {
    pub fn area(&self) -> Ratio<u64> {
        match self {
            Remainder::AcuteHalf { .. } => Ratio::new(1, 2),
            Remainder::Obtuse { obtuse } if obtuse.meta.coverage.is_half() => Ratio::new(1, 2),
            Remainder::Obtuse { .. } => Ratio::from_integer(1),
        }
    }

    pub fn polygon(&self) -> Vec<LatticePoint> {
        match self {
            Remainder::AcuteHalf { acute, side } => half_triangle(acute, *side),
            Remainder::Obtuse { obtuse } => match obtuse.meta.coverage {
                Coverage::Whole => obtuse.tile.vertices().to_vec(),
                _ => {
                    let v = obtuse.tile.vertices();
                    if obtuse.present_edges() == [0, 3] {
                        vec![v[3], v[0], v[1]]
                    } else {
                        vec![v[1], v[2], v[3]]
                    }
                }
            },
        }
    }
}

fn half_triangle(acute: &PatchTile, side: Side) -> Vec<LatticePoint> {
    let v = acute.tile.vertices();
    match side {
        Side::Right => vec![v[0], v[1], v[2]],
        Side::Left => vec![v[2], v[3], v[0]],
    }
}

/// Boundary of a union of counterclockwise polygons, collinear points
/// dropped.
pub fn union_outline(pieces: &[Vec<LatticePoint>]) -> Vec<LatticePoint> {
    let mut edges: BTreeSet<(LatticePoint, LatticePoint)> = BTreeSet::new();
    for poly in pieces {
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            if !edges.remove(&(b, a)) {
                edges.insert((a, b));
            }
        }
    }
    let next: BTreeMap<LatticePoint, LatticePoint> = edges.iter().copied().collect();
    let Some(&(start, _)) = edges.iter().next() else {
        return Vec::new();
    };
    let mut out = vec![start];
    let mut cur = next[&start];
    while cur != start && out.len() <= next.len() {
        out.push(cur);
        cur = next[&cur];
    }
    let n = out.len();
    let keep: Vec<LatticePoint> = (0..n)
        .filter(|&i| {
            let (p, c, q) = (out[(i + n - 1) % n], out[i], out[(i + 1) % n]);
            let (u, w) = (c - p, q - c);
            u.a * w.b - u.b * w.a != 0
        })
        .map(|i| out[i])
        .collect();
    keep
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub figures: Vec<DksFigure>,
    pub remainder: Vec<Remainder>,
    pub generation: u32,
    pub variation: Option<Variation>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureCounts {
    pub darts: usize,
    pub kites: usize,
    pub shields: usize,
    pub remainder: usize,
}

impl Decomposition {
    pub fn counts(&self) -> FigureCounts {
        let mut c = FigureCounts {
            remainder: self.remainder.len(),
            ..Default::default()
        };
        for f in &self.figures {
            match f.kind() {
                FigureKind::Dart => c.darts += 1,
                FigureKind::Kite => c.kites += 1,
                FigureKind::Shield => c.shields += 1,
            }
        }
        c
    }

    pub fn figure_area(&self) -> Ratio<u64> {
        self.figures.iter().map(|f| f.kind().area()).sum()
    }

    pub fn remainder_area(&self) -> Ratio<u64> {
        self.remainder.iter().map(|r| r.area()).sum()
    }

    /// Figure multiset keyed by kind, for comparisons across runs.
    pub fn multiset(&self) -> BTreeMap<FigureKind, usize> {
        let mut m = BTreeMap::new();
        for f in &self.figures {
            *m.entry(f.kind()).or_insert(0) += 1;
        }
        m
    }
}

/// Angle at a tile corner in units of 60°.
fn corner_angle(corner: u8) -> u32 {
    if corner % 2 == 0 {
        1
    } else {
        2
    }
}

struct Options {
    /// (acute key, obtuse partner for the right and left halves)
    splits: Vec<(TileKey, [Option<TileKey>; 2])>,
    shields: Vec<(LatticePoint, [TileKey; 3])>,
}

fn build_options(p: &Patch) -> (Options, BTreeSet<TileKey>) {
    let vm = vertex_map(p);
    let complete = |v: &LatticePoint| -> bool {
        vm.get(v).is_some_and(|c| {
            c.iter().map(|&(_, i)| corner_angle(i)).sum::<u32>() == 6
        })
    };
    let kind = |k: &TileKey| p.tiles[k].tile.kind;
    let mut splits = Vec::new();
    for pt in p
        .iter()
        .filter(|t| t.tile.kind == TileKind::Acute && !t.meta.boundary_half())
    {
        let v = pt.tile.vertices();
        let mut partners = [None, None];
        let mut ok = true;
        for (s, side) in [Side::Right, Side::Left].into_iter().enumerate() {
            let apex = v[side.corner()];
            let obtuse: Vec<(TileKey, u8)> = vm[&apex]
                .iter()
                .copied()
                .filter(|(k, _)| kind(k) == TileKind::Obtuse)
                .collect();
            match obtuse.as_slice() {
                [(k, i)] if i % 2 == 1 => partners[s] = Some(*k),
                [] if !complete(&apex) => {}
                _ => ok = false,
            }
        }
        if ok && partners.iter().any(|p| p.is_some()) {
            splits.push((pt.tile.key(), partners));
        }
    }
    let mut shields = Vec::new();
    for (v, corners) in &vm {
        if corners.len() == 3
            && corners
                .iter()
                .all(|(k, i)| i % 2 == 1 && kind(k) == TileKind::Obtuse)
        {
            shields.push((*v, [corners[0].0, corners[1].0, corners[2].0]));
        }
    }
    let interior: BTreeSet<TileKey> = p
        .iter()
        .filter(|t| t.tile.kind == TileKind::Obtuse && !t.meta.boundary_half())
        .filter(|t| t.tile.vertices().iter().all(&complete))
        .map(|t| t.tile.key())
        .collect();
    (Options { splits, shields }, interior)
}

/// Partitions `p` into darts, kites and shields. Every interior obtuse tile
/// ends up in exactly one kite or shield; what is left lies on the boundary.
pub fn to_dks(p: &Patch, variation: Variation) -> Result<Decomposition, Error> {
    let (opts, interior) = build_options(p);
    let n_split = opts.splits.len();
    let n = n_split + opts.shields.len();
    // obtuse tile -> options using it
    let mut users: BTreeMap<TileKey, Vec<usize>> = BTreeMap::new();
    for (i, (_, partners)) in opts.splits.iter().enumerate() {
        for k in partners.iter().flatten() {
            users.entry(*k).or_default().push(i);
        }
    }
    for (j, (_, tiles)) in opts.shields.iter().enumerate() {
        for k in tiles {
            users.entry(*k).or_default().push(n_split + j);
        }
    }
    let mut solver = Solver::new();
    let vars: Vec<Lit> = (0..n).map(|_| solver.new_lit()).collect();
    for (k, us) in &users {
        for a in 0..us.len() {
            for b in a + 1..us.len() {
                solver.add_clause(&[!vars[us[a]], !vars[us[b]]]);
            }
        }
        if interior.contains(k) {
            let clause: Vec<Lit> = us.iter().map(|&u| vars[u]).collect();
            solver.add_clause(&clause);
        }
    }
    for k in &interior {
        if !users.contains_key(k) {
            return Err(Error::NotDecomposable(format!(
                "interior obtuse tile at {:?} has no figure",
                k.anchor
            )));
        }
    }
    let sat = solver
        .solve()
        .map_err(|e| Error::NotDecomposable(e.to_string()))?;
    if !sat {
        return Err(Error::NotDecomposable(
            "no exact cover of the obtuse tiles".into(),
        ));
    }
    let model: BTreeSet<Lit> = solver.model().unwrap_or_default().into_iter().collect();
    let chosen = |i: usize| model.contains(&vars[i]);

    let mut dec = Decomposition {
        generation: p.generation,
        variation: Some(variation),
        ..Default::default()
    };
    let mut used: BTreeSet<TileKey> = BTreeSet::new();
    let split_of: BTreeMap<TileKey, [Option<TileKey>; 2]> = (0..n_split)
        .filter(|&i| chosen(i))
        .map(|i| opts.splits[i])
        .collect();
    for pt in p.iter() {
        let key = pt.tile.key();
        match (pt.tile.kind, split_of.get(&key)) {
            (TileKind::Acute, Some(partners)) => {
                for (side, partner) in [Side::Right, Side::Left].into_iter().zip(partners) {
                    match partner {
                        Some(ok) => {
                            used.insert(*ok);
                            dec.figures.push(DksFigure::Kite {
                                acute: pt.clone(),
                                side,
                                obtuse: p.tiles[ok].clone(),
                            });
                        }
                        None => dec.remainder.push(Remainder::AcuteHalf {
                            acute: pt.clone(),
                            side,
                        }),
                    }
                }
            }
            (TileKind::Acute, None) => dec.figures.push(DksFigure::Dart { acute: pt.clone() }),
            _ => {}
        }
    }
    for (j, (center, tiles)) in opts.shields.iter().enumerate() {
        if chosen(n_split + j) {
            used.extend(tiles.iter().copied());
            dec.figures.push(DksFigure::Shield {
                center: *center,
                obtuse: tiles.map(|k| p.tiles[&k].clone()),
            });
        }
    }
    for pt in p.iter().filter(|t| t.tile.kind == TileKind::Obtuse) {
        if !used.contains(&pt.tile.key()) {
            if interior.contains(&pt.tile.key()) {
                return Err(Error::NotDecomposable(format!(
                    "obtuse tile at {:?} left over",
                    pt.tile.anchor
                )));
            }
            dec.remainder.push(Remainder::Obtuse { obtuse: pt.clone() });
        }
    }
    Ok(dec)
}

/// Rejoins figures and remainder into the rhomb patch.
pub fn from_dks(d: &Decomposition) -> Result<Patch, Error> {
    let mut tiles: BTreeMap<TileKey, PatchTile> = BTreeMap::new();
    let mut halves: BTreeMap<TileKey, (PatchTile, BTreeSet<Side>)> = BTreeMap::new();
    let mut put = |t: &PatchTile| -> Result<(), Error> {
        if tiles.insert(t.tile.key(), t.clone()).is_some() {
            return Err(Error::InconsistentFigures(format!(
                "tile at {:?} used twice",
                t.tile.anchor
            )));
        }
        Ok(())
    };
    let mut half = |t: &PatchTile, side: Side| -> Result<(), Error> {
        let e = halves
            .entry(t.tile.key())
            .or_insert_with(|| (t.clone(), BTreeSet::new()));
        if e.0 != *t || !e.1.insert(side) {
            return Err(Error::InconsistentFigures(format!(
                "acute half at {:?} repeated",
                t.tile.anchor
            )));
        }
        Ok(())
    };
    for f in &d.figures {
        match f {
            DksFigure::Dart { acute } => put(acute)?,
            DksFigure::Kite {
                acute,
                side,
                obtuse,
            } => {
                half(acute, *side)?;
                put(obtuse)?;
            }
            DksFigure::Shield { obtuse, .. } => {
                for t in obtuse {
                    put(t)?;
                }
            }
        }
    }
    for r in &d.remainder {
        match r {
            Remainder::AcuteHalf { acute, side } => half(acute, *side)?,
            Remainder::Obtuse { obtuse } => put(obtuse)?,
        }
    }
    for (key, (t, sides)) in halves {
        if sides.len() != 2 {
            return Err(Error::InconsistentFigures(format!(
                "acute tile at {:?} is missing a half",
                key.anchor
            )));
        }
        put(&t)?;
    }
    Ok(Patch {
        tiles,
        generation: d.generation,
        variation: d.variation,
    })
}

/// `generations` rounds of rejoin, inflate, regroup.
pub fn dks_substitute(
    d: &Decomposition,
    variation: Variation,
    generations: u32,
) -> Result<Decomposition, Error> {
    let mut cur = d.clone();
    for _ in 0..generations {
        let p = inflate(&from_dks(&cur)?, rule(variation))?;
        cur = to_dks(&p, variation)?;
    }
    Ok(cur)
}
