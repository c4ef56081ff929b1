use alloc::format;
use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

use crate::{Error, Result};

/// An integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Same integer/half-integer class as `other`.
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// The value as an integer, if it is one.
    pub const fn as_int(self) -> Option<i32> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Accepts `"3"`, `"-2"`, `"3/2"`, `"-1/2"` and `"4/2"`; floats are rejected.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpin(format!("`{s}` is not an integer or p/2"));
        match s.split_once('/') {
            None => s.parse::<i32>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i32 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(HalfInt::from_int(num)),
                    "2" => Ok(HalfInt(num)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Labels `(J, M, N)` of one basis function: `J ≥ 0`, `|M| ≤ J`, `|N| ≤ J`,
/// all three integer or all three half-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinTriple {
    j: HalfInt,
    m: HalfInt,
    n: HalfInt,
}

impl SpinTriple {
    pub fn new(j: HalfInt, m: HalfInt, n: HalfInt) -> Result<Self> {
        if j.twice() < 0 {
            return Err(Error::InvalidSpin(format!("J = {j} is negative")));
        }
        if !j.same_parity(m) || !j.same_parity(n) {
            return Err(Error::InvalidSpin(format!(
                "J = {j}, M = {m}, N = {n} mix integer and half-integer values"
            )));
        }
        if m.abs() > j {
            return Err(Error::InvalidSpin(format!(
                "|M| = {} exceeds J = {j}",
                m.abs()
            )));
        }
        if n.abs() > j {
            return Err(Error::InvalidSpin(format!(
                "|N| = {} exceeds J = {j}",
                n.abs()
            )));
        }
        Ok(SpinTriple { j, m, n })
    }

    /// Shorthand taking doubled values, e.g. `from_twice(1, 1, -1)` for
    /// `(1/2, 1/2, -1/2)`.
    pub fn from_twice(j: i32, m: i32, n: i32) -> Result<Self> {
        Self::new(
            HalfInt::from_twice(j),
            HalfInt::from_twice(m),
            HalfInt::from_twice(n),
        )
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn n(&self) -> HalfInt {
        self.n
    }

    /// Same `J`, `N` with a different `M`.
    pub fn with_m(&self, m: HalfInt) -> Result<Self> {
        Self::new(self.j, m, self.n)
    }

    /// `M + N`, an integer for every valid triple.
    pub fn m_plus_n(&self) -> i32 {
        (self.m + self.n).twice() / 2
    }

    // The following differences are non-negative integers by construction.

    pub fn j_minus_m(&self) -> u32 {
        ((self.j - self.m).twice() / 2) as u32
    }

    pub fn j_plus_m(&self) -> u32 {
        ((self.j + self.m).twice() / 2) as u32
    }

    pub fn j_minus_n(&self) -> u32 {
        ((self.j - self.n).twice() / 2) as u32
    }

    pub fn j_plus_n(&self) -> u32 {
        ((self.j + self.n).twice() / 2) as u32
    }

    pub fn two_j(&self) -> u32 {
        self.j.twice() as u32
    }
}

impl fmt::Display for SpinTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(J={}, M={}, N={})", self.j, self.m, self.n)
    }
}
