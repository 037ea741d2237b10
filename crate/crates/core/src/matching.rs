//! Edge-matching validation, label derivation, local configurations and
//! symmetry scans.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::inflation::{Coverage, Patch, PatchTile};
use crate::lattice::LatticePoint;
use crate::tile::{edge_label, EdgeKey, LabelTable, Tile, TileKey, TileKind};

impl PatchTile {
    /// Edge indices lying on the covered part of the tile.
    pub fn present_edges(&self) -> &'static [u8] {
        match self.meta.coverage {
            Coverage::Whole => &[0, 1, 2, 3],
            c => {
                let tail_low = self.tile.orientation < 3;
                if (c == Coverage::HalfLow) == tail_low {
                    &[0, 3]
                } else {
                    &[1, 2]
                }
            }
        }
    }
}

/// Incidence of (tile, edge index) on each edge of a patch.
pub fn edge_map(p: &Patch) -> BTreeMap<EdgeKey, Vec<(TileKey, u8)>> {
    let mut m: BTreeMap<EdgeKey, Vec<(TileKey, u8)>> = BTreeMap::new();
    for pt in p.iter() {
        let edges = pt.tile.edges();
        for &i in pt.present_edges() {
            m.entry(edges[i as usize].0)
                .or_default()
                .push((pt.tile.key(), i));
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub edge: EdgeKey,
    pub tiles: (TileKey, TileKey),
    pub labels: (u8, u8),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub boundary_edges: usize,
    pub interior_edges: usize,
    /// Edges claimed by more than two tiles.
    pub overfull_edges: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.overfull_edges == 0
    }
}

pub fn validate(p: &Patch, table: &LabelTable) -> ValidationReport {
    let mut r = ValidationReport::default();
    for (edge, inc) in edge_map(p) {
        match inc.len() {
            1 => r.boundary_edges += 1,
            2 => {
                r.interior_edges += 1;
                let (k0, i0) = inc[0];
                let (k1, i1) = inc[1];
                let s0 = edge_label(&p.tiles[&k0].tile, i0, table);
                let s1 = edge_label(&p.tiles[&k1].tile, i1, table);
                if !table.compatible(s0, s1) {
                    r.violations.push(Violation {
                        edge,
                        tiles: (k0, k1),
                        labels: (s0, s1),
                    });
                }
            }
            _ => r.overfull_edges += 1,
        }
    }
    r
}

fn slot(kind: TileKind, edge: u8) -> usize {
    kind.index() * 4 + edge as usize
}

/// Finest involutive table that accepts every interior adjacency of `p`.
///
/// Each (kind, edge index) slot starts as its own symbol. Slots seen facing
/// a common class are merged until every class faces exactly one class.
pub fn derive_labels(p: &Patch) -> Result<LabelTable, Error> {
    let mut pairs = BTreeSet::new();
    for (edge, inc) in edge_map(p) {
        match inc.len() {
            1 => {}
            2 => {
                let a = &p.tiles[&inc[0].0].tile;
                let b = &p.tiles[&inc[1].0].tile;
                let (s, t) = (slot(a.kind, inc[0].1), slot(b.kind, inc[1].1));
                pairs.insert((s, t));
                pairs.insert((t, s));
            }
            n => {
                return Err(Error::InconsistentPatch(format!(
                    "edge {edge:?} shared by {n} tiles"
                )));
            }
        }
    }
    let mut parent: Vec<usize> = (0..8).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    loop {
        let mut facing: BTreeMap<usize, usize> = BTreeMap::new();
        let mut merged = false;
        for &(s, t) in &pairs {
            let (cs, ct) = (find(&mut parent, s), find(&mut parent, t));
            match facing.get(&cs) {
                None => {
                    facing.insert(cs, ct);
                }
                Some(&other) => {
                    let co = find(&mut parent, other);
                    if co != ct {
                        let (lo, hi) = (co.min(ct), co.max(ct));
                        parent[hi] = lo;
                        merged = true;
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }
    // number classes by first appearance in slot order
    let mut ids: BTreeMap<usize, u8> = BTreeMap::new();
    let mut symbols = [[0u8; 4]; 2];
    for s in 0..8 {
        let c = find(&mut parent, s);
        let next = ids.len() as u8;
        symbols[s / 4][s % 4] = *ids.entry(c).or_insert(next);
    }
    let n = ids.len();
    let mut partner: Vec<Option<u8>> = vec![None; n];
    for &(s, t) in &pairs {
        let cs = ids[&find(&mut parent, s)];
        let ct = ids[&find(&mut parent, t)];
        partner[cs as usize] = Some(ct);
    }
    let partner: Vec<u8> = partner
        .iter()
        .enumerate()
        .map(|(i, p)| p.unwrap_or(i as u8))
        .collect();
    let table = LabelTable {
        symbols,
        partner,
        names: Vec::new(),
    };
    if !table.is_involutive() {
        return Err(Error::InconsistentPatch(
            "no involutive label table exists".into(),
        ));
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigurationKind {
    /// Six acute tiles meeting at their 60° corners.
    Star,
    /// Three obtuse tiles meeting at their 120° corners.
    Hexagon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub kind: ConfigurationKind,
    pub center: LatticePoint,
    pub tiles: Vec<TileKey>,
    /// Stars: (arrows pointing out, arrows pointing in).
    /// Hexagons: (tiles meeting at their right corner, at their left corner).
    pub polarity: (u8, u8),
}

/// Corners of whole tiles at each vertex: (tile, corner index).
pub fn vertex_map(p: &Patch) -> BTreeMap<LatticePoint, Vec<(TileKey, u8)>> {
    let mut m: BTreeMap<LatticePoint, Vec<(TileKey, u8)>> = BTreeMap::new();
    for pt in p.iter().filter(|t| !t.meta.boundary_half()) {
        for (i, v) in pt.tile.vertices().into_iter().enumerate() {
            m.entry(v).or_default().push((pt.tile.key(), i as u8));
        }
    }
    m
}

pub fn find_stars_and_hexagons(p: &Patch) -> Vec<Configuration> {
    let mut out = Vec::new();
    for (v, corners) in vertex_map(p) {
        let kind_of = |k: &TileKey| p.tiles[k].tile.kind;
        if corners.len() == 6
            && corners
                .iter()
                .all(|(k, i)| i % 2 == 0 && kind_of(k) == TileKind::Acute)
        {
            let outward = corners.iter().filter(|(_, i)| *i == 0).count() as u8;
            out.push(Configuration {
                kind: ConfigurationKind::Star,
                center: v,
                tiles: corners.iter().map(|c| c.0).collect(),
                polarity: (outward, 6 - outward),
            });
        } else if corners.len() == 3
            && corners
                .iter()
                .all(|(k, i)| i % 2 == 1 && kind_of(k) == TileKind::Obtuse)
        {
            let right = corners.iter().filter(|(_, i)| *i == 1).count() as u8;
            out.push(Configuration {
                kind: ConfigurationKind::Hexagon,
                center: v,
                tiles: corners.iter().map(|c| c.0).collect(),
                polarity: (right, 3 - right),
            });
        }
    }
    out
}

/// Star centres differ by multiples of three edge lengths along both axes.
pub fn on_common_lattice(points: &[LatticePoint], spacing: i64) -> bool {
    let m = 2 * spacing;
    match points.first() {
        None => true,
        Some(&p0) => points.iter().all(|q| {
            let d = *q - p0;
            d.a.rem_euclid(m) == 0 && d.b.rem_euclid(m) == 0
        }),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub center: LatticePoint,
    pub window_radius: f64,
    pub max_shift: f64,
    pub shifts_tested: usize,
    pub translations_found: Vec<LatticePoint>,
    /// Per star centre: the largest radius within which the patch is
    /// invariant under a 60° turn about that centre.
    pub max_sixfold_radius: Vec<(LatticePoint, f64)>,
}

fn dist(p: LatticePoint) -> f64 {
    (p.norm4() as f64).sqrt() / 2.0
}

/// Distance from `c` to the nearest boundary edge midpoint, in edge units.
pub fn inradius(p: &Patch, c: LatticePoint) -> f64 {
    edge_map(p)
        .iter()
        .filter(|(_, inc)| inc.len() == 1)
        .map(|(e, _)| {
            let (x0, y0) = e.lo.to_f64();
            let (x1, y1) = e.hi.to_f64();
            let (cx, cy) = c.to_f64();
            seg_dist((cx, cy), (x0, y0), (x1, y1))
        })
        .fold(f64::INFINITY, f64::min)
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

/// Lattice vertex nearest the centroid of the patch's tile anchors.
pub fn patch_center(p: &Patch) -> LatticePoint {
    let n = p.len().max(1) as f64;
    let (sa, sb) = p.iter().fold((0f64, 0f64), |(a, b), t| {
        (a + t.tile.anchor.a as f64, b + t.tile.anchor.b as f64)
    });
    let even = |x: f64| 2 * (x / n / 2.0).round() as i64;
    LatticePoint::new(even(sa), even(sb))
}

fn pose_index(p: &Patch) -> HashMap<TileKey, (TileKind, u8)> {
    p.iter()
        .filter(|t| !t.meta.boundary_half())
        .map(|t| (t.tile.key(), (t.tile.kind, t.tile.orientation)))
        .collect()
}

/// Exhaustive translation test: every lattice shift `s` with
/// `0 < |s| <= max_shift` is kept when each whole tile anchored in the
/// window reappears at `anchor + s` with the same kind and orientation.
pub fn translation_scan(
    p: &Patch,
    window_radius: f64,
    max_shift: f64,
) -> Result<SymmetryReport, Error> {
    translation_scan_at(p, patch_center(p), window_radius, max_shift)
}

pub fn translation_scan_at(
    p: &Patch,
    center: LatticePoint,
    window_radius: f64,
    max_shift: f64,
) -> Result<SymmetryReport, Error> {
    let mut report = SymmetryReport {
        center,
        window_radius,
        max_shift,
        ..Default::default()
    };
    if max_shift <= 0.0 || p.is_empty() {
        return Ok(report);
    }
    let available = inradius(p, center);
    if window_radius + max_shift > available + 1e-9 {
        return Err(Error::WindowTooLarge {
            radius: window_radius,
            shift: max_shift,
            available,
        });
    }
    let index = pose_index(p);
    let window: Vec<(TileKey, (TileKind, u8))> = {
        let mut w: Vec<_> = index
            .iter()
            .filter(|(k, _)| dist(k.anchor - center) <= window_radius)
            .map(|(k, v)| (*k, *v))
            .collect();
        w.sort();
        w
    };
    let m = (2.0 * max_shift).ceil() as i64 + 2;
    for a in (-m..=m).step_by(1) {
        for b in -m..=m {
            let s = LatticePoint::new(2 * a, 2 * b);
            if s == LatticePoint::ORIGIN || dist(s) > max_shift + 1e-9 {
                continue;
            }
            report.shifts_tested += 1;
            let fixed = window.iter().all(|(k, pose)| {
                let moved = TileKey {
                    anchor: k.anchor + s,
                    axis: k.axis,
                };
                index.get(&moved) == Some(pose)
            });
            if fixed {
                report.translations_found.push(s);
            }
        }
    }
    report.translations_found.sort();
    let stars: Vec<LatticePoint> = find_stars_and_hexagons(p)
        .into_iter()
        .filter(|c| c.kind == ConfigurationKind::Star)
        .map(|c| c.center)
        .collect();
    report.max_sixfold_radius = stars
        .iter()
        .map(|&c| (c, sixfold_radius(p, &index, c)))
        .collect();
    Ok(report)
}

/// Largest radius about `c` within which the whole tiles are invariant
/// under a 60° rotation, capped by the distance to the patch boundary.
pub fn sixfold_radius_about(p: &Patch, c: LatticePoint) -> f64 {
    sixfold_radius(p, &pose_index(p), c)
}

fn sixfold_radius(p: &Patch, index: &HashMap<TileKey, (TileKind, u8)>, c: LatticePoint) -> f64 {
    let limit = inradius(p, c);
    let mut tiles: Vec<(i64, Tile)> = p
        .iter()
        .filter(|t| !t.meta.boundary_half())
        .map(|t| ((t.tile.anchor - c).norm4(), t.tile))
        .collect();
    tiles.sort_by_key(|(d, t)| (*d, t.key()));
    for (d, t) in tiles {
        let r = (d as f64).sqrt() / 2.0;
        if r > limit {
            break;
        }
        let img = t.rotated(1, c);
        if index.get(&img.key()) != Some(&(img.kind, img.orientation)) {
            return r;
        }
    }
    limit
}

/// All-obtuse periodic rhombille patch: three rhombs around each hexagon
/// centre, hexagon centres on the lattice spanned by (2,2) and (-2,4).
/// Hexagons within `radius` hexagon steps of the origin are kept.
pub fn periodic_rhombille(radius: i64, orientation_parity: u8) -> Patch {
    let mut tiles = Vec::new();
    for i in -radius..=radius {
        for j in -radius..=radius {
            if (i + j).abs() > radius {
                continue;
            }
            let c = LatticePoint::new(2 * i - 2 * j, 2 * i + 4 * j);
            for r in [0i64, 2, 4] {
                let r = r + orientation_parity as i64 % 2;
                let step = crate::lattice::Direction::new(r).step();
                let anchor = c - step + crate::tile::half_diagonal(r as u8);
                tiles.push(Tile::new(TileKind::Obtuse, r as u8, anchor));
            }
        }
    }
    Patch::from_tiles(tiles)
}
