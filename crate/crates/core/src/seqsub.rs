//! Substitutions of length 3 on the alphabet {X, Y}.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            'X' | 'x' => Some(Letter::X),
            'Y' | 'y' => Some(Letter::Y),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::Y => 'Y',
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|l| l.swap()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn counts(&self) -> (u64, u64) {
        let x = self.0.iter().filter(|&&l| l == Letter::X).count() as u64;
        (x, self.0.len() as u64 - x)
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.trim()
            .chars()
            .map(|c| {
                Letter::from_char(c)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad letter {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

pub fn word(s: &str) -> Word {
    s.parse().expect("literal word")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubRule {
    pub image_of_x: Word,
    pub image_of_y: Word,
}

impl SubRule {
    pub fn new(x: &str, y: &str) -> Result<Self, Error> {
        let r = SubRule {
            image_of_x: x.parse()?,
            image_of_y: y.parse()?,
        };
        if r.image_of_x.len() != 3 || r.image_of_y.len() != 3 {
            return Err(Error::InvalidArgument("images must have length 3".into()));
        }
        Ok(r)
    }

    pub fn v1() -> Self {
        SubRule::new("XYY", "XXY").unwrap()
    }

    pub fn v2() -> Self {
        SubRule::new("YXX", "YYX").unwrap()
    }

    pub fn image(&self, l: Letter) -> &Word {
        match l {
            Letter::X => &self.image_of_x,
            Letter::Y => &self.image_of_y,
        }
    }

    /// Images read backwards.
    pub fn mirror(&self) -> SubRule {
        SubRule {
            image_of_x: self.image_of_x.reversed(),
            image_of_y: self.image_of_y.reversed(),
        }
    }

    /// Conjugate by the letter swap X ↔ Y.
    pub fn dual(&self) -> SubRule {
        SubRule {
            image_of_x: self.image_of_y.swapped(),
            image_of_y: self.image_of_x.swapped(),
        }
    }

    /// Column-stochastic count matrix: `m[i][j]` = occurrences of letter i
    /// in the image of letter j.
    pub fn count_matrix(&self) -> [[u64; 2]; 2] {
        let (xx, yx) = self.image_of_x.counts();
        let (xy, yy) = self.image_of_y.counts();
        [[xx, xy], [yx, yy]]
    }
}

impl FromStr for SubRule {
    type Err = Error;

    /// Parses `"X:XYY,Y:XXY"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let (mut x, mut y) = (None, None);
        for part in s.split(',') {
            let (lhs, rhs) = part
                .split_once(':')
                .or_else(|| part.split_once("->"))
                .ok_or_else(|| Error::InvalidArgument(format!("bad production {part:?}")))?;
            match lhs.trim() {
                "X" | "x" => x = Some(rhs.trim().to_string()),
                "Y" | "y" => y = Some(rhs.trim().to_string()),
                other => return Err(Error::InvalidArgument(format!("bad letter {other:?}"))),
            }
        }
        match (x, y) {
            (Some(x), Some(y)) => SubRule::new(&x, &y),
            _ => Err(Error::InvalidArgument(
                "rule needs images for X and Y".into(),
            )),
        }
    }
}

impl fmt::Display for SubRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X:{},Y:{}", self.image_of_x, self.image_of_y)
    }
}

pub fn expand(rule: &SubRule, w: &Word, depth: u32) -> Word {
    let mut cur = w.clone();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(cur.len() * 3);
        for &l in &cur.0 {
            next.extend_from_slice(&rule.image(l).0);
        }
        cur = Word(next);
    }
    cur
}

/// Exact letter counts of `σⁿ(seed)` from the count matrix.
pub fn letter_counts(rule: &SubRule, seed: &Word, depth: u32) -> (u128, u128) {
    let m = rule.count_matrix();
    let (x, y) = seed.counts();
    let (mut x, mut y) = (x as u128, y as u128);
    for _ in 0..depth {
        (x, y) = (
            m[0][0] as u128 * x + m[0][1] as u128 * y,
            m[1][0] as u128 * x + m[1][1] as u128 * y,
        );
    }
    (x, y)
}

pub fn mat_mul(a: [[u64; 2]; 2], b: [[u64; 2]; 2]) -> [[u64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Periodicity {
    Periodic(usize),
    AperiodicAtDepth,
}

/// Smallest period of `w` up to half its length.
pub fn smallest_period(w: &Word) -> Option<usize> {
    let s = &w.0;
    (1..=s.len() / 2).find(|&p| (p..s.len()).all(|i| s[i] == s[i - p]))
}

pub fn classify(rule: &SubRule, depth: u32) -> Periodicity {
    let w = expand(rule, &word("X"), depth);
    match smallest_period(&w) {
        Some(p) => Periodicity::Periodic(p),
        None => Periodicity::AperiodicAtDepth,
    }
}

/// `σⁿ(left) · σⁿ(right)`: a word read outward from a centre.
pub fn two_sided(rule: &SubRule, left: &Word, right: &Word, depth: u32) -> Word {
    expand(rule, left, depth).concat(&expand(rule, right, depth))
}

pub fn is_prefix_stable(rule: &SubRule, depth: u32) -> bool {
    let x = word("X");
    (0..depth).all(|n| expand(rule, &x, n + 1).starts_with(&expand(rule, &x, n)))
}

/// One production `lhs → image`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Production {
    pub lhs: Letter,
    pub image: Word,
}

impl Production {
    fn new(lhs: Letter, image: &str) -> Self {
        Production {
            lhs,
            image: word(image),
        }
    }

    pub fn mirror(&self) -> Production {
        Production {
            lhs: self.lhs.swap(),
            image: self.image.reversed().swapped(),
        }
    }

    pub fn dual(&self) -> Production {
        Production {
            lhs: self.lhs.swap(),
            image: self.image.swapped(),
        }
    }

    pub fn dual_mirror(&self) -> Production {
        Production {
            lhs: self.lhs,
            image: self.image.reversed(),
        }
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.lhs.as_char(), self.image)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    /// Substitution rule, mirror, dual, dual mirror.
    pub cells: [Production; 4],
    /// Whether each of mirror, dual and dual mirror is the mechanical image
    /// of the first cell.
    pub relation_holds: [bool; 3],
}

impl TableRow {
    /// The full rule formed by the first two cells.
    pub fn rule(&self) -> SubRule {
        let (a, b) = (&self.cells[0], &self.cells[1]);
        let (x, y) = if a.lhs == Letter::X { (a, b) } else { (b, a) };
        SubRule {
            image_of_x: x.image.clone(),
            image_of_y: y.image.clone(),
        }
    }

    pub fn flagged(&self) -> Vec<&'static str> {
        ["mirror", "dual", "dual mirror"]
            .into_iter()
            .zip(self.relation_holds)
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n)
            .collect()
    }
}

/// The four-row rule table, stored verbatim; relations are checked, not
/// assumed.
pub fn table8() -> Vec<TableRow> {
    use Letter::{X, Y};
    let rows = [
        (
            "Variation 1",
            [(X, "XYY"), (Y, "XXY"), (Y, "YXX"), (X, "YYX")],
        ),
        (
            "Variation 2",
            [(Y, "YYX"), (X, "YXX"), (X, "XXY"), (Y, "XYY")],
        ),
        ("Periodic", [(X, "XXX"), (Y, "YYY"), (Y, "XXX"), (X, "YYY")]),
        ("Periodic", [(X, "XYX"), (Y, "YXY"), (X, "YXY"), (Y, "XYX")]),
    ];
    rows.iter()
        .map(|(name, cells)| {
            let cells = cells.map(|(l, w)| Production::new(l, w));
            let relation_holds = [
                cells[0].mirror() == cells[1],
                cells[0].dual() == cells[2],
                cells[0].dual_mirror() == cells[3],
            ];
            TableRow {
                name: name.to_string(),
                cells,
                relation_holds,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion() {
        let r = SubRule::v1();
        assert_eq!(expand(&r, &word("X"), 1).to_string(), "XYY");
        assert_eq!(expand(&r, &word("X"), 2).to_string(), "XYYXXYXXY");
        assert_eq!(expand(&r, &word("XY"), 0), word("XY"));
    }

    #[test]
    fn counts() {
        let r = SubRule::v1();
        assert_eq!(letter_counts(&r, &word("X"), 0), (1, 0));
        assert_eq!(letter_counts(&r, &word("X"), 2), (5, 4));
        assert_eq!(letter_counts(&r, &word("X"), 3), (13, 14));
        assert_eq!(letter_counts(&r, &word("X"), 4), (41, 40));
        assert_eq!(expand(&r, &word("X"), 4).counts(), (41, 40));
        let m = r.count_matrix();
        assert_eq!(mat_mul(m, m), [[5, 4], [4, 5]]);
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify(&SubRule::new("XXX", "YYY").unwrap(), 5),
            Periodicity::Periodic(1)
        );
        assert_eq!(
            classify(&SubRule::new("XYX", "YXY").unwrap(), 5),
            Periodicity::Periodic(2)
        );
        assert_eq!(classify(&SubRule::v1(), 7), Periodicity::AperiodicAtDepth);
    }

    #[test]
    fn table_relations() {
        let t = table8();
        assert_eq!(t[0].rule(), SubRule::v1());
        assert_eq!(t[1].rule(), SubRule::v2());
        assert!(t[0].flagged().is_empty() && t[1].flagged().is_empty());
        assert_eq!(t[2].flagged(), vec!["dual", "dual mirror"]);
        assert_eq!(t[0].cells[0].mirror().mirror(), t[0].cells[0]);
        assert_eq!(t[0].cells[0].dual().to_string(), "Y → YXX");
    }

    #[test]
    fn parse_rule() {
        let r: SubRule = "X:XYY,Y:XXY".parse().unwrap();
        assert_eq!(r, SubRule::v1());
        assert_eq!(r.to_string(), "X:XYY,Y:XXY");
        assert!("X:XY,Y:XXY".parse::<SubRule>().is_err());
        assert!(is_prefix_stable(&r, 4));
        assert!(!is_prefix_stable(&SubRule::v2(), 2));
    }
}
