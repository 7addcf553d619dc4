//! Arithmetic in `Z4` and `Z4 x Z4`, the vertex alphabets of `K4` and the
//! Shrikhande graph.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// An element of `Z4`; a vertex of `K4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z4(u8);

impl Z4 {
    pub const ZERO: Z4 = Z4(0);

    /// Reduces `v` mod 4.
    pub const fn new(v: u8) -> Z4 {
        Z4(v & 3)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Z4> {
        (0..4).map(Z4)
    }
}

impl Add for Z4 {
    type Output = Z4;
    fn add(self, rhs: Z4) -> Z4 {
        Z4((self.0 + rhs.0) & 3)
    }
}

impl Neg for Z4 {
    type Output = Z4;
    fn neg(self) -> Z4 {
        Z4((4 - self.0) & 3)
    }
}

impl Sub for Z4 {
    type Output = Z4;
    fn sub(self, rhs: Z4) -> Z4 {
        self + (-rhs)
    }
}

impl fmt::Display for Z4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Z4 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.as_bytes() {
            [c @ b'0'..=b'3'] => Ok(Z4(c - b'0')),
            _ => Err(Error::BadToken(s.to_string())),
        }
    }
}

/// An element `ab` of `Z4 x Z4`, stored as the integer `4a + b` so that the
/// 16 elements index bit positions of a `u16`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Z4Pair(u8);

/// Which of the named difference sets an element of `Z4 x Z4` falls in.
///
/// `A = {01,03,10,30,11,33}` is the Shrikhande connecting set,
/// `B = {02,20,22}` holds the elements of order 2 and
/// `C = {12,32,13,31,21,23}` the remaining elements of order 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiffClass {
    Zero,
    A,
    B,
    C,
}

const CLASS_TABLE: [DiffClass; 16] = {
    use DiffClass::*;
    // index 4a+b
    [
        Zero, A, B, A, // 00 01 02 03
        A, A, C, C, // 10 11 12 13
        B, C, B, C, // 20 21 22 23
        A, C, C, A, // 30 31 32 33
    ]
};

impl Z4Pair {
    pub const ZERO: Z4Pair = Z4Pair(0);

    pub const fn new(a: u8, b: u8) -> Z4Pair {
        Z4Pair(((a & 3) << 2) | (b & 3))
    }

    /// Builds the pair from its index `4a + b`; panics when out of range.
    pub fn from_index(i: u8) -> Z4Pair {
        assert!(i < 16, "Z4Pair index {i} out of range");
        Z4Pair(i)
    }

    pub const fn index(self) -> u8 {
        self.0
    }

    pub const fn a(self) -> u8 {
        self.0 >> 2
    }

    pub const fn b(self) -> u8 {
        self.0 & 3
    }

    pub fn all() -> impl Iterator<Item = Z4Pair> {
        (0..16).map(Z4Pair)
    }

    /// Smallest `t >= 1` with `t * self = 00`.
    pub fn order(self) -> u8 {
        let mut acc = self;
        let mut t = 1;
        while acc != Z4Pair::ZERO {
            acc = acc + self;
            t += 1;
        }
        t
    }

    pub fn class(self) -> DiffClass {
        CLASS_TABLE[self.0 as usize]
    }
}

/// The set among A, B, C (or Zero) that contains `x - y`.
pub fn classify_difference(x: Z4Pair, y: Z4Pair) -> DiffClass {
    (x - y).class()
}

impl Add for Z4Pair {
    type Output = Z4Pair;
    fn add(self, rhs: Z4Pair) -> Z4Pair {
        Z4Pair::new(self.a() + rhs.a(), self.b() + rhs.b())
    }
}

impl Neg for Z4Pair {
    type Output = Z4Pair;
    fn neg(self) -> Z4Pair {
        Z4Pair::new(4 - self.a(), 4 - self.b())
    }
}

impl Sub for Z4Pair {
    type Output = Z4Pair;
    fn sub(self, rhs: Z4Pair) -> Z4Pair {
        self + (-rhs)
    }
}

impl fmt::Display for Z4Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a(), self.b())
    }
}

impl FromStr for Z4Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.as_bytes() {
            [a @ b'0'..=b'3', b @ b'0'..=b'3'] => Ok(Z4Pair::new(a - b'0', b - b'0')),
            _ => Err(Error::BadToken(s.to_string())),
        }
    }
}

/// Parses a pair written as in the tables, e.g. `p("21")`. Panics on bad input;
/// meant for literals.
pub fn p(s: &str) -> Z4Pair {
    s.parse().unwrap_or_else(|_| panic!("bad Z4Pair literal {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_examples() {
        assert_eq!(p("02") + p("21"), p("23"));
        assert_eq!(p("00") + p("13"), p("13"));
        assert_eq!(p("33") + p("11"), p("00"));
        assert_eq!(Z4::new(3) + Z4::new(2), Z4::new(1));
        assert_eq!(-Z4::new(1), Z4::new(3));
    }

    #[test]
    fn order_examples() {
        assert_eq!(p("02").order(), 2);
        assert_eq!(p("13").order(), 4);
        assert_eq!(p("00").order(), 1);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_difference(p("02"), p("00")), DiffClass::B);
        assert_eq!(classify_difference(p("11"), p("00")), DiffClass::A);
        assert_eq!(classify_difference(p("21"), p("00")), DiffClass::C);
        assert_eq!(classify_difference(p("21"), p("21")), DiffClass::Zero);
    }

    #[test]
    fn orders_match_classes() {
        for x in Z4Pair::all() {
            let expected = match x.class() {
                DiffClass::Zero => 1,
                DiffClass::B => 2,
                DiffClass::A | DiffClass::C => 4,
            };
            assert_eq!(x.order(), expected, "{x}");
            assert_eq!(4 % x.order(), 0);
        }
        let sizes = |c| Z4Pair::all().filter(|x| x.class() == c).count();
        assert_eq!(sizes(DiffClass::A), 6);
        assert_eq!(sizes(DiffClass::B), 3);
        assert_eq!(sizes(DiffClass::C), 6);
    }

    #[test]
    fn display_and_parse() {
        for x in Z4Pair::all() {
            assert_eq!(x.to_string().parse::<Z4Pair>().unwrap(), x);
        }
        assert_eq!(p("21").to_string(), "21");
        assert!("4".parse::<Z4>().is_err());
        assert!("213".parse::<Z4Pair>().is_err());
        assert!("2".parse::<Z4Pair>().is_err());
        assert!("x1".parse::<Z4Pair>().is_err());
    }
}
