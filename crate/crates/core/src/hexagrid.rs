//! Hexagrids: three line families with substitution spacings, and their
//! rhomb duals.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::inflation::{Patch, Variation};
use crate::lattice::LatticePoint;
use crate::seqsub::{expand, word, Letter, SubRule, Word};
use crate::tile::{half_diagonal, Tile, TileKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpacingToken {
    A,
    B,
    C,
    /// Half of A, at block borders.
    #[serde(rename = "a")]
    HalfA,
    /// Half of B, at block borders.
    #[serde(rename = "b")]
    HalfB,
}

impl SpacingToken {
    pub fn value(self, delta: &BigRational) -> BigRational {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let two = r(2, 1);
        match self {
            SpacingToken::A => r(1, 1) + &two * delta,
            SpacingToken::B => two - &r(2, 1) * delta,
            SpacingToken::C => r(3, 2),
            SpacingToken::HalfA => r(1, 2) + delta.clone(),
            SpacingToken::HalfB => r(1, 1) - delta.clone(),
        }
    }

    fn merged(self) -> SpacingToken {
        match self {
            SpacingToken::HalfA => SpacingToken::A,
            SpacingToken::HalfB => SpacingToken::B,
            t => t,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SpacingToken::A => "A",
            SpacingToken::B => "B",
            SpacingToken::C => "C",
            SpacingToken::HalfA => "a",
            SpacingToken::HalfB => "b",
        }
    }
}

impl fmt::Display for SpacingToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How a letter becomes a block of spacings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockStyle {
    /// X = aBCa, Y = aCBa.
    ABorder,
    /// X = bACb, Y = bCAb.
    BBorder,
}

impl BlockStyle {
    pub fn for_variation(v: Variation) -> Self {
        match v {
            Variation::V1 => BlockStyle::ABorder,
            Variation::V2 => BlockStyle::BBorder,
        }
    }

    fn block(self, l: Letter) -> [SpacingToken; 4] {
        use SpacingToken::*;
        match (self, l) {
            (BlockStyle::ABorder, Letter::X) => [HalfA, B, C, HalfA],
            (BlockStyle::ABorder, Letter::Y) => [HalfA, C, B, HalfA],
            (BlockStyle::BBorder, Letter::X) => [HalfB, A, C, HalfB],
            (BlockStyle::BBorder, Letter::Y) => [HalfB, C, A, HalfB],
        }
    }
}

pub fn check_delta(delta: &BigRational) -> Result<(), Error> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if delta.is_positive() && *delta < half {
        Ok(())
    } else {
        Err(Error::DeltaOutOfRange(delta.to_string()))
    }
}

pub fn parse_delta(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::InvalidArgument(format!("delta must be an exact fraction p/q, got {s:?}"));
    let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Blocks for each letter, adjacent half tokens merged into whole ones.
pub fn spacing_tokens(w: &Word, style: BlockStyle) -> Vec<SpacingToken> {
    let mut out: Vec<SpacingToken> = Vec::with_capacity(w.len() * 3 + 1);
    for &l in &w.0 {
        for (i, t) in style.block(l).into_iter().enumerate() {
            if i == 0 {
                if let Some(last) = out.last_mut() {
                    if *last == t {
                        *last = t.merged();
                        continue;
                    }
                }
            }
            out.push(t);
        }
    }
    out
}

/// Tokens of `w` with their cumulative offsets from 0.
pub fn spacing_sequence(
    w: &Word,
    delta: &BigRational,
) -> Result<(Vec<SpacingToken>, Vec<BigRational>), Error> {
    spacing_sequence_with(w, delta, BlockStyle::ABorder)
}

pub fn spacing_sequence_with(
    w: &Word,
    delta: &BigRational,
    style: BlockStyle,
) -> Result<(Vec<SpacingToken>, Vec<BigRational>), Error> {
    check_delta(delta)?;
    let tokens = spacing_tokens(w, style);
    let offsets = cumulative(&tokens, delta, BigRational::zero());
    Ok((tokens, offsets))
}

fn cumulative(
    tokens: &[SpacingToken],
    delta: &BigRational,
    start: BigRational,
) -> Vec<BigRational> {
    let mut acc = start;
    let mut out = vec![acc.clone()];
    for t in tokens {
        acc += t.value(delta);
        out.push(acc.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Centering {
    /// `σⁿ(left)·σⁿ(right)` with the origin in the middle of the central gap.
    TwoSided,
    /// `σⁿ(X)` starting at the origin.
    OneSided,
    /// Two-sided, with every line moved by the given rational.
    Shifted(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFamily {
    pub index: u8,
    /// Unit normal in doubled coordinates.
    pub normal: LatticePoint,
    pub offsets: Vec<BigRational>,
    /// Sign of each line: true when the gap before it is at least the gap
    /// after it.
    pub signs: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSource {
    pub variation: Option<Variation>,
    pub depth: u32,
    pub centering: Centering,
    pub word: String,
    /// Whether all three families use the same word in the same sense.
    pub families: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hexagrid {
    pub families: [GridFamily; 3],
    pub delta: BigRational,
    pub tokens: Vec<SpacingToken>,
    pub source: GridSource,
}

/// Normals at 0°, 120° and 240°.
pub const NORMALS: [LatticePoint; 3] = [
    LatticePoint::new(2, 0),
    LatticePoint::new(-2, 2),
    LatticePoint::new(0, -2),
];

impl Hexagrid {
    /// One family per normal, all using the same offsets.
    pub fn from_tokens(
        tokens: Vec<SpacingToken>,
        delta: &BigRational,
        origin_shift: BigRational,
        source: GridSource,
    ) -> Result<Self, Error> {
        check_delta(delta)?;
        let offsets: Vec<BigRational> = cumulative(&tokens, delta, BigRational::zero())
            .into_iter()
            .map(|o| o - &origin_shift)
            .collect();
        let signs = line_signs(&tokens, delta);
        let families = [0u8, 1, 2].map(|k| GridFamily {
            index: k,
            normal: NORMALS[k as usize],
            offsets: offsets.clone(),
            signs: signs.clone(),
        });
        Ok(Hexagrid {
            families,
            delta: delta.clone(),
            tokens,
            source,
        })
    }

    pub fn line_count(&self) -> usize {
        self.families.iter().map(|f| f.offsets.len()).sum()
    }

    /// Lines used by the dual: every line except the two frame lines.
    pub fn interior(&self, f: usize) -> std::ops::Range<usize> {
        let n = self.families[f].offsets.len();
        if n < 2 {
            0..n
        } else {
            1..n - 1
        }
    }

    /// Span from the first to the last line.
    pub fn span(&self) -> BigRational {
        let o = &self.families[0].offsets;
        match (o.first(), o.last()) {
            (Some(a), Some(b)) => b - a,
            _ => BigRational::zero(),
        }
    }
}

/// Per-line signs. Frame gaps that are half tokens count as their merged
/// whole, as if the word continued.
fn line_signs(tokens: &[SpacingToken], delta: &BigRational) -> Vec<bool> {
    let n = tokens.len();
    let gap = |i: usize| -> BigRational {
        let t = tokens[i];
        if i == 0 || i + 1 == n {
            t.merged().value(delta)
        } else {
            t.value(delta)
        }
    };
    (0..=n)
        .map(|i| match (i.checked_sub(1), (i < n).then_some(i)) {
            (Some(l), Some(r)) => gap(l) >= gap(r),
            _ => true,
        })
        .collect()
}

/// The substitution rule whose fixed word spaces the grid of a variation.
pub fn spacing_rule(v: Variation) -> SubRule {
    match v {
        Variation::V1 => SubRule::v1(),
        Variation::V2 => SubRule::v2(),
    }
}

pub fn build_grid(
    variation: Variation,
    depth: u32,
    delta: &BigRational,
    centering: Centering,
) -> Result<Hexagrid, Error> {
    check_delta(delta)?;
    let rule = spacing_rule(variation);
    let style = BlockStyle::for_variation(variation);
    let (left, right) = match variation {
        Variation::V1 => (word("Y"), word("X")),
        Variation::V2 => (word("X"), word("Y")),
    };
    let (w, centre_tokens) = match centering {
        Centering::OneSided => (expand(&rule, &word("X"), depth), None),
        _ => {
            let l = expand(&rule, &left, depth);
            let r = expand(&rule, &right, depth);
            // the central gap is the merged border token between the halves
            let before = spacing_tokens(&l, style).len() - 1;
            (l.concat(&r), Some(before))
        }
    };
    let tokens = spacing_tokens(&w, style);
    let mut shift = BigRational::zero();
    if let Some(i) = centre_tokens {
        let offs = cumulative(&tokens, delta, BigRational::zero());
        shift = (&offs[i] + &offs[i + 1]) / BigRational::from_integer(BigInt::from(2));
    }
    if let Centering::Shifted(s) = &centering {
        shift -= parse_delta(s)?;
    }
    let source = GridSource {
        variation: Some(variation),
        depth,
        centering,
        word: w.to_string(),
        families: "identical".into(),
    };
    Hexagrid::from_tokens(tokens, delta, shift, source)
}

/// Grid from an explicit token list, origin in the middle of the central
/// token (the one before the midpoint when the count is even).
pub fn build_grid_from_tokens(
    tokens: Vec<SpacingToken>,
    delta: &BigRational,
) -> Result<Hexagrid, Error> {
    build_grid_from_tokens_at(tokens, delta, None)
}

/// As [`build_grid_from_tokens`], or with the origin on line `origin_line`.
pub fn build_grid_from_tokens_at(
    tokens: Vec<SpacingToken>,
    delta: &BigRational,
    origin_line: Option<usize>,
) -> Result<Hexagrid, Error> {
    check_delta(delta)?;
    if tokens.is_empty() {
        return Err(Error::InvalidArgument("empty token list".into()));
    }
    let offs = cumulative(&tokens, delta, BigRational::zero());
    let shift = match origin_line {
        Some(i) => offs
            .get(i)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("no line {i}")))?,
        None => {
            let mid = (tokens.len() - 1) / 2;
            (&offs[mid] + &offs[mid + 1]) / BigRational::from_integer(BigInt::from(2))
        }
    };
    let source = GridSource {
        variation: None,
        depth: 0,
        centering: Centering::TwoSided,
        word: tokens.iter().map(|t| t.symbol()).collect(),
        families: "identical".into(),
    };
    Hexagrid::from_tokens(tokens, delta, shift, source)
}

/// `n` alternating A, B tokens.
pub fn alternating_tokens(n: usize) -> Vec<SpacingToken> {
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                SpacingToken::A
            } else {
                SpacingToken::B
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplePoint {
    /// Line index in each family.
    pub lines: [usize; 3],
}

/// Three lines with normals summing to zero meet iff their offsets sum to 0.
/// Only interior lines are checked; the frame lines take no part in the dual.
pub fn check_genericity(g: &Hexagrid) -> Result<(), Vec<TriplePoint>> {
    let third: BTreeMap<&BigRational, usize> = g
        .interior(2)
        .map(|i| (&g.families[2].offsets[i], i))
        .collect();
    let mut bad = Vec::new();
    for i in g.interior(0) {
        let p0 = &g.families[0].offsets[i];
        for j in g.interior(1) {
            let p1 = &g.families[1].offsets[j];
            let want = -(p0 + p1);
            if let Some(&k) = third.get(&want) {
                bad.push(TriplePoint { lines: [i, j, k] });
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

fn count_below(offsets: &[BigRational], x: &BigRational) -> i64 {
    offsets.partition_point(|o| o < x) as i64
}

/// Orientation whose arrow runs along `d` (a long diagonal in doubled coordinates).
fn orientation_of(d: LatticePoint) -> u8 {
    (0..6u8)
        .find(|&o| half_diagonal(o) * 2 == d)
        .expect("not a long diagonal")
}

/// A crossing of interior lines `li` of family `k+1` and `lj` of family
/// `k+2` that lies strictly inside the frame of family `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub k: usize,
    pub li: usize,
    pub lj: usize,
    /// Coordinate of the crossing along the normal of family `k`.
    pub pk: BigRational,
}

/// Crossings inside the hexagon where all three families are present.
pub fn crossings(g: &Hexagrid) -> Vec<Crossing> {
    let mut out = Vec::new();
    for k in 0..3 {
        let (fi, fj) = ((k + 1) % 3, (k + 2) % 3);
        let ok = &g.families[k].offsets;
        let (Some(lo), Some(hi)) = (ok.first(), ok.last()) else {
            continue;
        };
        for li in g.interior(fi) {
            for lj in g.interior(fj) {
                let pk = -(&g.families[fi].offsets[li] + &g.families[fj].offsets[lj]);
                if *lo < pk && pk < *hi {
                    out.push(Crossing { k, li, lj, pk });
                }
            }
        }
    }
    out
}

/// De Bruijn dual. The rhomb of a crossing sits at `Σ K_f e_f` with `K_f`
/// counted from the origin's strip; a line's sign fixes the arrow, and
/// two lines of unequal sign give an acute rhomb.
pub fn dualize(g: &Hexagrid) -> Result<Patch, Error> {
    if let Err(t) = check_genericity(g) {
        return Err(Error::NonGenericGrid(t.len()));
    }
    let zero = BigRational::zero();
    let base: [i64; 3] = [0, 1, 2].map(|f| count_below(&g.families[f].offsets, &zero));
    let mut tiles = Vec::new();
    let mut seen = HashSet::new();
    for Crossing { k, li, lj, pk } in crossings(g) {
        let (fi, fj) = ((k + 1) % 3, (k + 2) % 3);
        let mut kf = [0i64; 3];
        kf[fi] = li as i64 - base[fi];
        kf[fj] = lj as i64 - base[fj];
        kf[k] = count_below(&g.families[k].offsets, &pk) - base[k];
        let v0 = (0..3).fold(LatticePoint::ORIGIN, |acc, f| acc + NORMALS[f] * kf[f]);
        let (ei, ej) = (NORMALS[fi], NORMALS[fj]);
        let anchor = v0 + LatticePoint::new((ei.a + ej.a) / 2, (ei.b + ej.b) / 2);
        let (si, sj) = (g.families[fi].signs[li], g.families[fj].signs[lj]);
        let kind = if si != sj {
            TileKind::Acute
        } else {
            TileKind::Obtuse
        };
        let (head, tail) = if si {
            (v0 + ei, v0 + ej)
        } else {
            (v0 + ej, v0 + ei)
        };
        let t = Tile::new(kind, orientation_of(head - tail), anchor);
        if !seen.insert(t.key()) {
            return Err(Error::InconsistentPatch(format!(
                "dual rhombs overlap at {:?}",
                t.anchor
            )));
        }
        tiles.push(t);
    }
    let mut p = Patch::from_tiles(tiles);
    p.generation = 0;
    p.variation = g.source.variation;
    Ok(p)
}

/// Number of rhombs the dual will contain.
pub fn interior_intersections(g: &Hexagrid) -> usize {
    crossings(g).len()
}

/// The 6-acute star seed whose inflations the two-sided grid of a
/// variation reproduces: arrows out for V1, in for V2.
pub fn star_seed(v: Variation) -> Patch {
    Patch::from_tiles((0..6u8).map(|r| {
        let o = match v {
            Variation::V1 => r,
            Variation::V2 => (r + 3) % 6,
        };
        Tile::new(TileKind::Acute, o, half_diagonal(r))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn block_span() {
        for d in [q(1, 10), q(1, 4), q(1, 3)] {
            let (t, o) = spacing_sequence(&word("X"), &d).unwrap();
            assert_eq!(t.len(), 4);
            assert_eq!(o.last().unwrap(), &q(9, 2));
            let (_, o) = spacing_sequence(&word("XYY"), &d).unwrap();
            assert_eq!(o.last().unwrap(), &q(27, 2));
        }
    }

    #[test]
    fn delta_swap_exchanges_a_and_b() {
        let d = q(1, 5);
        let e = q(1, 2) - &d;
        assert_eq!(SpacingToken::A.value(&d), SpacingToken::B.value(&e));
        assert_eq!(SpacingToken::B.value(&d), SpacingToken::A.value(&e));
    }

    #[test]
    fn quarter_gives_equal_spacings() {
        let d = q(1, 4);
        for t in [SpacingToken::A, SpacingToken::B, SpacingToken::C] {
            assert_eq!(t.value(&d), q(3, 2));
        }
        assert_eq!(SpacingToken::HalfA.value(&d), q(3, 4));
    }

    #[test]
    fn delta_range() {
        assert!(matches!(
            spacing_sequence(&word("X"), &q(1, 2)),
            Err(Error::DeltaOutOfRange(_))
        ));
        assert!(matches!(
            spacing_sequence(&word("X"), &q(0, 1)),
            Err(Error::DeltaOutOfRange(_))
        ));
        assert!(parse_delta("0.3").is_err());
        assert_eq!(parse_delta("1/3").unwrap(), q(1, 3));
    }

    #[test]
    fn depth_zero_grid() {
        let g = build_grid(Variation::V1, 0, &q(1, 3), Centering::OneSided).unwrap();
        assert!(g.families.iter().all(|f| f.offsets.len() == 5));
        assert_eq!(g.span(), q(9, 2));
    }

    #[test]
    fn symmetric_lines_meet() {
        let toks = vec![SpacingToken::C; 4];
        let g = build_grid_from_tokens_at(toks.clone(), &q(1, 3), Some(2)).unwrap();
        assert!(check_genericity(&g).is_err());
        assert!(matches!(dualize(&g), Err(Error::NonGenericGrid(_))));
        assert!(check_genericity(&build_grid_from_tokens(toks, &q(1, 3)).unwrap()).is_ok());
    }

    #[test]
    fn single_interior_line_is_generic() {
        let g = build_grid_from_tokens(vec![SpacingToken::C; 2], &q(1, 3)).unwrap();
        assert_eq!(g.interior(0).len(), 1);
        assert!(check_genericity(&g).is_ok());
    }

    #[test]
    fn two_sided_grid_is_generic() {
        for v in Variation::ALL {
            let g = build_grid(v, 2, &q(1, 3), Centering::TwoSided).unwrap();
            assert!(check_genericity(&g).is_ok());
            let p = dualize(&g).unwrap();
            assert_eq!(p.len(), interior_intersections(&g));
        }
    }
}
