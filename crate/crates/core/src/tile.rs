//! The two diamond tiles, their poses and edge labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::{to_cartesian, Direction, ExactScalar, LatticePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileKind {
    Acute,
    Obtuse,
}

impl TileKind {
    pub const ALL: [TileKind; 2] = [TileKind::Acute, TileKind::Obtuse];

    pub fn index(self) -> usize {
        match self {
            TileKind::Acute => 0,
            TileKind::Obtuse => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            TileKind::Acute => 'A',
            TileKind::Obtuse => 'O',
        }
    }
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TileKind::Acute => "acute",
            TileKind::Obtuse => "obtuse",
        })
    }
}

/// A 60°/120° rhomb. The arrow runs along the long diagonal at angle
/// `30° + 60°·orientation`, from the tail corner to the head corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tile {
    pub kind: TileKind,
    pub orientation: u8,
    pub anchor: LatticePoint,
    pub scale_exponent: u32,
}

/// Dedup key: the rhomb centre plus its axis (orientation mod 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TileKey {
    pub anchor: LatticePoint,
    pub axis: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub lo: LatticePoint,
    pub hi: LatticePoint,
}

impl EdgeKey {
    pub fn new(p: LatticePoint, q: LatticePoint) -> Self {
        if p <= q {
            EdgeKey { lo: p, hi: q }
        } else {
            EdgeKey { lo: q, hi: p }
        }
    }
}

/// Half-diagonal vector from centre to head for a unit tile.
pub fn half_diagonal(orientation: u8) -> LatticePoint {
    let r = orientation as i64;
    let s = Direction::new(r).step() + Direction::new(r + 1).step();
    LatticePoint::new(s.a / 2, s.b / 2)
}

impl Tile {
    pub fn new(kind: TileKind, orientation: u8, anchor: LatticePoint) -> Self {
        Tile {
            kind,
            orientation: orientation % 6,
            anchor,
            scale_exponent: 0,
        }
    }

    pub fn key(&self) -> TileKey {
        TileKey {
            anchor: self.anchor,
            axis: self.orientation % 3,
        }
    }

    pub fn edge_len(&self) -> i64 {
        3i64.pow(self.scale_exponent)
    }

    pub fn tail(&self) -> LatticePoint {
        self.anchor - half_diagonal(self.orientation) * self.edge_len()
    }

    pub fn head(&self) -> LatticePoint {
        self.anchor + half_diagonal(self.orientation) * self.edge_len()
    }

    /// Counterclockwise from the tail: tail, right 120° corner, head, left 120° corner.
    pub fn vertices(&self) -> [LatticePoint; 4] {
        let r = self.orientation as i64;
        let l = self.edge_len();
        let tail = self.tail();
        [
            tail,
            tail + Direction::new(r).step() * l,
            self.head(),
            tail + Direction::new(r + 1).step() * l,
        ]
    }

    pub fn edges(&self) -> [(EdgeKey, u8); 4] {
        let v = self.vertices();
        [0u8, 1, 2, 3].map(|i| (EdgeKey::new(v[i as usize], v[(i as usize + 1) % 4]), i))
    }

    /// Exact area by the shoelace formula.
    pub fn area(&self) -> ExactScalar {
        let v = self.vertices().map(to_cartesian);
        let mut acc = ExactScalar::zero();
        for i in 0..4 {
            let (x0, y0) = &v[i];
            let (x1, y1) = &v[(i + 1) % 4];
            acc = &acc + &(&(x0 * y1) - &(x1 * y0));
        }
        &acc * &ExactScalar::from_ratios(1, 2, 0, 1)
    }

    /// Same pose with the arrow reversed.
    pub fn flipped(&self) -> Tile {
        Tile {
            orientation: (self.orientation + 3) % 6,
            ..*self
        }
    }

    pub fn translated(&self, v: LatticePoint) -> Tile {
        Tile {
            anchor: self.anchor + v,
            ..*self
        }
    }

    pub fn rotated(&self, k: i64, center: LatticePoint) -> Tile {
        Tile {
            anchor: crate::lattice::rotate6(self.anchor, k, center),
            orientation: ((self.orientation as i64 + k).rem_euclid(6)) as u8,
            ..*self
        }
    }
}

/// Unit-tile area `√3/2`.
pub fn unit_area() -> ExactScalar {
    ExactScalar::from_ratios(0, 1, 1, 2)
}

/// Edge decoration symbols with an involutive compatibility relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTable {
    /// `symbols[kind][edge_index]`
    pub symbols: [[u8; 4]; 2],
    /// `partner[s]` is the unique symbol compatible with `s`.
    pub partner: Vec<u8>,
    #[serde(default)]
    pub names: Vec<String>,
}

impl LabelTable {
    pub fn symbol(&self, kind: TileKind, edge_index: u8) -> u8 {
        self.symbols[kind.index()][edge_index as usize % 4]
    }

    pub fn compatible(&self, s: u8, t: u8) -> bool {
        self.partner.get(s as usize) == Some(&t)
    }

    pub fn symbol_count(&self) -> usize {
        self.partner.len()
    }

    pub fn is_involutive(&self) -> bool {
        self.partner
            .iter()
            .enumerate()
            .all(|(s, &t)| self.partner.get(t as usize) == Some(&(s as u8)))
    }

    /// Tables equal after some renaming of symbols.
    pub fn equivalent(&self, other: &LabelTable) -> bool {
        if self.partner.len() != other.partner.len() {
            return false;
        }
        let mut map = vec![None; self.partner.len()];
        for k in 0..2 {
            for e in 0..4 {
                let (s, t) = (self.symbols[k][e] as usize, other.symbols[k][e]);
                match map[s] {
                    None => map[s] = Some(t),
                    Some(u) if u == t => {}
                    Some(_) => return false,
                }
            }
        }
        let mut seen = vec![false; other.partner.len()];
        for t in map.iter().flatten() {
            if std::mem::replace(&mut seen[*t as usize], true) {
                return false;
            }
        }
        self.partner
            .iter()
            .enumerate()
            .all(|(s, &p)| match (map[s], map[p as usize]) {
                (Some(a), Some(b)) => other.partner[a as usize] == b,
                _ => true,
            })
    }

    /// One symbol per (kind, edge), each its own partner; accepts everything
    /// that pairs identical slots only.
    pub fn trivial() -> Self {
        let mut symbols = [[0u8; 4]; 2];
        for (k, row) in symbols.iter_mut().enumerate() {
            for (e, s) in row.iter_mut().enumerate() {
                *s = (k * 4 + e) as u8;
            }
        }
        LabelTable {
            symbols,
            partner: (0..8).collect(),
            names: Vec::new(),
        }
    }

    pub fn default_table() -> Self {
        crate::data::default_labels()
    }
}

pub fn edge_label(t: &Tile, edge_index: u8, table: &LabelTable) -> u8 {
    table.symbol(t.kind, edge_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(kind: TileKind, o: u8) -> Tile {
        Tile::new(kind, o, LatticePoint::new(1, 1))
    }

    #[test]
    fn unit_tile_distances() {
        let t = unit(TileKind::Acute, 0);
        let v = t.vertices();
        let mut d: Vec<i64> = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                d.push((v[i] - v[j]).norm4());
            }
        }
        d.sort();
        // squared lengths ×4: five of length 1 and the long diagonal √3
        assert_eq!(d, vec![4, 4, 4, 4, 4, 12]);
        assert!(v.iter().all(|p| p.is_vertex()));
    }

    #[test]
    fn areas_are_exact() {
        for o in 0..6 {
            for kind in TileKind::ALL {
                assert_eq!(unit(kind, o).area(), unit_area());
                let big = Tile {
                    scale_exponent: 1,
                    anchor: LatticePoint::new(3, 3),
                    ..unit(kind, o)
                };
                assert_eq!(big.area(), &unit_area() * &ExactScalar::from_int(9));
            }
        }
    }

    #[test]
    fn kinds_share_geometry() {
        for o in 0..6 {
            assert_eq!(
                unit(TileKind::Acute, o).vertices(),
                unit(TileKind::Obtuse, o).vertices()
            );
        }
    }

    #[test]
    fn flipped_tile_has_same_outline() {
        let t = unit(TileKind::Obtuse, 2);
        let mut a = t.vertices().to_vec();
        let mut b = t.flipped().vertices().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(t.key(), t.flipped().key());
    }

    #[test]
    fn neighbours_share_one_edge() {
        let t = unit(TileKind::Acute, 0);
        let n = t.rotated(3, t.vertices()[1]);
        let ek: Vec<_> = t.edges().iter().map(|e| e.0).collect();
        let shared = n.edges().iter().filter(|e| ek.contains(&e.0)).count();
        assert!(shared <= 1);
        let across = Tile::new(TileKind::Acute, 0, t.anchor + LatticePoint::new(2, 0));
        let shared = across.edges().iter().filter(|e| ek.contains(&e.0)).count();
        assert_eq!(shared, 1);
    }
}
