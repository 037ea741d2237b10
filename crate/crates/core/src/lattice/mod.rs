//! Doubled axial coordinates on the triangular lattice.
//!
//! A point `(a, b)` sits at `(a/2)·e1 + (b/2)·e2` with `e1 = (1, 0)` and
//! `e2 = (1/2, √3/2)`, so lattice vertices have both coordinates even and
//! rhomb centres have at least one odd coordinate.

mod exact;

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use exact::ExactScalar;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    pub fn is_vertex(self) -> bool {
        self.a % 2 == 0 && self.b % 2 == 0
    }

    /// Squared Euclidean length times 4 (an integer).
    pub fn norm4(self) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    /// Cartesian position as floats, for rendering and coarse queries.
    pub fn to_f64(self) -> (f64, f64) {
        let x = self.a as f64 / 2.0 + self.b as f64 / 4.0;
        let y = self.b as f64 * 3f64.sqrt() / 4.0;
        (x, y)
    }

    /// Rotation by 60° about the origin.
    pub fn rot60(self) -> Self {
        LatticePoint {
            a: -self.b,
            b: self.a + self.b,
        }
    }

    pub fn rotated(self, k: i64) -> Self {
        let mut p = self;
        for _ in 0..k.rem_euclid(6) {
            p = p.rot60();
        }
        p
    }

    /// Inner product with another lattice vector, times 8.
    pub fn dot8(self, o: LatticePoint) -> i64 {
        2 * self.a * o.a + self.a * o.b + self.b * o.a + 2 * self.b * o.b
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([a, b]: [i64; 2]) -> Self {
        LatticePoint { a, b }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.a, p.b]
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.a, -self.b)
    }
}

impl Mul<i64> for LatticePoint {
    type Output = LatticePoint;
    fn mul(self, k: i64) -> LatticePoint {
        LatticePoint::new(self.a * k, self.b * k)
    }
}

/// One of the six unit steps, at angle `60°·r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction(u8);

impl Direction {
    pub fn new(r: i64) -> Self {
        Direction(r.rem_euclid(6) as u8)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn step(self) -> LatticePoint {
        const STEPS: [LatticePoint; 6] = [
            LatticePoint::new(2, 0),
            LatticePoint::new(0, 2),
            LatticePoint::new(-2, 2),
            LatticePoint::new(-2, 0),
            LatticePoint::new(0, -2),
            LatticePoint::new(2, -2),
        ];
        STEPS[self.0 as usize]
    }

    pub fn all() -> impl Iterator<Item = Direction> {
        (0..6).map(Direction::new)
    }
}

pub fn to_cartesian(pt: LatticePoint) -> (ExactScalar, ExactScalar) {
    let x = BigRational::new(BigInt::from(2 * pt.a + pt.b), BigInt::from(4));
    let y = BigRational::new(BigInt::from(pt.b), BigInt::from(4));
    (
        ExactScalar::rational(x),
        ExactScalar::new(BigRational::from_integer(0.into()), y),
    )
}

pub fn rotate6(pt: LatticePoint, k: i64, center: LatticePoint) -> LatticePoint {
    (pt - center).rotated(k) + center
}

/// Mirror across the line through `center` at angle `30°·axis_r`.
pub fn reflect(pt: LatticePoint, axis_r: i64, center: LatticePoint) -> LatticePoint {
    let d = pt - center;
    // mirror in the e1 axis, then turn by twice the axis angle
    let m = LatticePoint::new(d.a + d.b, -d.b);
    m.rotated(axis_r) + center
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_examples() {
        let (x, y) = to_cartesian(LatticePoint::new(2, 0));
        assert_eq!(x, ExactScalar::from_int(1));
        assert!(y.is_zero());
        let (x, y) = to_cartesian(LatticePoint::new(0, 2));
        assert_eq!(x, ExactScalar::from_ratios(1, 2, 0, 1));
        assert_eq!(y, ExactScalar::from_ratios(0, 1, 1, 2));
    }

    #[test]
    fn steps_sum_to_zero() {
        let s = Direction::all().fold(LatticePoint::ORIGIN, |acc, d| acc + d.step());
        assert_eq!(s, LatticePoint::ORIGIN);
    }

    #[test]
    fn rotation_maps_steps() {
        for d in Direction::all() {
            assert_eq!(
                d.step().rot60(),
                Direction::new(d.index() as i64 + 1).step()
            );
        }
        assert_eq!(
            rotate6(LatticePoint::new(2, 0), 1, LatticePoint::ORIGIN),
            LatticePoint::new(0, 2)
        );
    }

    #[test]
    fn reflect_axis_zero_fixes_e1() {
        let o = LatticePoint::ORIGIN;
        assert_eq!(
            reflect(LatticePoint::new(2, 0), 0, o),
            LatticePoint::new(2, 0)
        );
        assert_eq!(
            reflect(LatticePoint::new(0, 2), 0, o),
            LatticePoint::new(2, -2)
        );
        // axis at 30° swaps the two unit steps either side of it
        assert_eq!(
            reflect(LatticePoint::new(2, 0), 1, o),
            LatticePoint::new(0, 2)
        );
    }

    #[test]
    fn dot8_matches_cartesian() {
        let p = LatticePoint::new(3, -5);
        let q = LatticePoint::new(-2, 7);
        let (px, py) = p.to_f64();
        let (qx, qy) = q.to_f64();
        assert!(((px * qx + py * qy) * 8.0 - p.dot8(q) as f64).abs() < 1e-9);
        assert_eq!(p.dot8(p), 2 * p.norm4());
    }
}
