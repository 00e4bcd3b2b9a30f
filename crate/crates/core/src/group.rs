//! Elements of SL₂(ℤ) and their action on the upper half-plane.

use std::fmt;
use std::ops::Mul;

use rug::Float;

use crate::error::{Error, Result};
use crate::num::BigComplex;

/// `(a b; c d)` with `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// A letter in a word over the generators S and T.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    /// `T^n`, `n ≠ 0`.
    T(i64),
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Domain(format!("det of ({a} {b}; {c} {d}) is not 1")));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub const IDENTITY: GroupElement = GroupElement { a: 1, b: 0, c: 0, d: 1 };
    pub const S: GroupElement = GroupElement { a: 0, b: -1, c: 1, d: 0 };
    pub const T: GroupElement = GroupElement { a: 1, b: 1, c: 0, d: 1 };
    pub const MINUS_ONE: GroupElement = GroupElement { a: -1, b: 0, c: 0, d: -1 };

    pub fn t_pow(n: i64) -> Self {
        GroupElement { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// True for ±I.
    pub fn is_central(&self) -> bool {
        self.b == 0 && self.c == 0
    }

    pub fn inverse(&self) -> Self {
        GroupElement { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        GroupElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// `γτ = (aτ + b)/(cτ + d)`.
    pub fn act(&self, tau: &BigComplex) -> BigComplex {
        let p = tau.prec();
        let num = tau.scale(&Float::with_val(p, self.a)) + BigComplex::from_f64(p, self.b as f64, 0.0);
        num.div(&self.j(tau))
    }

    /// `j(γ, τ) = cτ + d`.
    pub fn j(&self, tau: &BigComplex) -> BigComplex {
        let p = tau.prec();
        tau.scale(&Float::with_val(p, self.c)) + BigComplex::from_f64(p, self.d as f64, 0.0)
    }

    /// Word `w` in S and T with `γ = ± w_1 w_2 ⋯`, and the sign.
    ///
    /// Euclid on the bottom row: `γ = T^q γ'` lowers `|a|` against `|c|`,
    /// and `S` swaps the rows.
    pub fn word(&self) -> (Vec<Letter>, bool) {
        let mut g = *self;
        let mut word = Vec::new();
        loop {
            if g.c == 0 {
                // g = ±T^{b/a}
                let negative = g.a < 0;
                let n = if negative { -g.b } else { g.b };
                if n != 0 {
                    word.push(Letter::T(n));
                }
                return (word, negative);
            }
            // g = T^q S g'' with g'' = S⁻¹ T^{-q} g
            let q = g.a.div_euclid(g.c);
            if q != 0 {
                word.push(Letter::T(q));
            }
            word.push(Letter::S);
            g = Self::S.inverse() * (Self::t_pow(-q) * g);
        }
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Letter {
    pub fn element(self) -> GroupElement {
        match self {
            Letter::S => GroupElement::S,
            Letter::T(n) => GroupElement::t_pow(n),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

impl std::str::FromStr for GroupElement {
    type Err = Error;

    /// Accepts `I`, a word over `S`, `T` and `t` (= T⁻¹) such as `STt`, or
    /// four comma-separated integers `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            let v: Vec<i64> = s
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Domain(format!("{x:?}: {e}"))))
                .collect::<Result<_>>()?;
            if v.len() != 4 {
                return Err(Error::Domain(format!("expected four entries, got {}", v.len())));
            }
            return GroupElement::new(v[0], v[1], v[2], v[3]);
        }
        let mut g = GroupElement::IDENTITY;
        for ch in s.chars() {
            g = g * match ch {
                'I' => GroupElement::IDENTITY,
                'S' => GroupElement::S,
                'T' => GroupElement::T,
                't' => GroupElement::T.inverse(),
                _ => return Err(Error::Domain(format!("unknown generator {ch:?}"))),
            };
        }
        Ok(g)
    }
}
