use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// An element `p + q·√3` of the quadratic field Q(√3).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub p: BigRational,
    pub q: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ExactScalar {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        ExactScalar { p, q }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar {
            p: rat(n, 1),
            q: BigRational::zero(),
        }
    }

    /// `pn/pd + (qn/qd)·√3`.
    pub fn from_ratios(pn: i64, pd: i64, qn: i64, qd: i64) -> Self {
        ExactScalar {
            p: rat(pn, pd),
            q: rat(qn, qd),
        }
    }

    pub fn rational(p: BigRational) -> Self {
        ExactScalar {
            p,
            q: BigRational::zero(),
        }
    }

    pub fn sqrt3() -> Self {
        ExactScalar {
            p: BigRational::zero(),
            q: rat(1, 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Exact sign of `p + q√3` as -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sp = sign_of(&self.p);
        let sq = sign_of(&self.q);
        if sp == 0 {
            return sq;
        }
        if sq == 0 || sp == sq {
            return sp;
        }
        // opposite signs: compare p² with 3q²
        let p2 = &self.p * &self.p;
        let q2 = &self.q * &self.q * rat(3, 1);
        match p2.cmp(&q2) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse via the conjugate; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.p * &self.p - &self.q * &self.q * rat(3, 1);
        Some(ExactScalar {
            p: &self.p / &norm,
            q: -(&self.q / &norm),
        })
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        p + q * 3f64.sqrt()
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "{}·√3", self.q)
        } else {
            write!(f, "{} + {}·√3", self.p, self.q)
        }
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            p: &self.p + &o.p,
            q: &self.q + &o.q,
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            p: &self.p - &o.p,
            q: &self.q - &o.q,
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            p: &self.p * &o.p + &self.q * &o.q * rat(3, 1),
            q: &self.p * &o.q + &self.q * &o.p,
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        &self - &o
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            p: -self.p,
            q: -self.q,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_mixed_terms() {
        // 2 - √3 > 0, 1 - √3 < 0, 3 - √3·√3 = 0
        assert_eq!(ExactScalar::from_ratios(2, 1, -1, 1).signum(), 1);
        assert_eq!(ExactScalar::from_ratios(1, 1, -1, 1).signum(), -1);
        let s = ExactScalar::sqrt3();
        assert!((&s * &s - ExactScalar::from_int(3)).is_zero());
    }

    #[test]
    fn recip_roundtrip() {
        let x = ExactScalar::from_ratios(5, 7, -2, 3);
        let y = x.recip().unwrap();
        assert_eq!(&x * &y, ExactScalar::from_int(1));
        assert!(ExactScalar::zero().recip().is_none());
    }

    #[test]
    fn ordering_is_total() {
        let a = ExactScalar::from_ratios(7, 4, 0, 1);
        let b = ExactScalar::sqrt3();
        assert!(a > b);
        assert_eq!(a.cmp(&a), Ordering::Equal);
    }
}
