use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Element `(a, b)` of Z2 x Z2. Composition is componentwise XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: bool,
    pub b: bool,
}

impl GroupElement {
    pub const E: GroupElement = GroupElement { a: false, b: false };
    pub const X: GroupElement = GroupElement { a: false, b: true };
    pub const Y: GroupElement = GroupElement { a: true, b: false };
    pub const Z: GroupElement = GroupElement { a: true, b: true };

    pub const ALL: [GroupElement; 4] = [Self::E, Self::X, Self::Y, Self::Z];
    pub const NONTRIVIAL: [GroupElement; 3] = [Self::X, Self::Y, Self::Z];

    pub fn new(a: bool, b: bool) -> Self {
        GroupElement { a, b }
    }

    pub fn compose(self, other: GroupElement) -> GroupElement {
        GroupElement { a: self.a ^ other.a, b: self.b ^ other.b }
    }

    pub fn is_trivial(self) -> bool {
        !self.a && !self.b
    }

    /// Twist phase `(-1)^(ad - bc)` between `self = (a,b)` and `other = (c,d)`.
    pub fn twist(self, other: GroupElement) -> f64 {
        if (self.a & other.b) ^ (self.b & other.a) {
            -1.0
        } else {
            1.0
        }
    }

    /// The six ordered pairs of distinct nontrivial elements.
    pub fn ordered_pairs() -> [(GroupElement, GroupElement); 6] {
        use GroupElement as G;
        [(G::X, G::Y), (G::Y, G::X), (G::X, G::Z), (G::Z, G::X), (G::Y, G::Z), (G::Z, G::Y)]
    }

    pub fn label(self) -> char {
        match (self.a, self.b) {
            (false, false) => 'e',
            (false, true) => 'x',
            (true, false) => 'y',
            (true, true) => 'z',
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "e" | "E" => Ok(Self::E),
            "x" | "X" => Ok(Self::X),
            "y" | "Y" => Ok(Self::Y),
            "z" | "Z" => Ok(Self::Z),
            other => Err(Error::param(format!("unknown group element '{other}'"))),
        }
    }
}

/// Checks that `(g, h)` are distinct and nontrivial.
pub fn check_pair(g: GroupElement, h: GroupElement) -> Result<(), Error> {
    if g.is_trivial() || h.is_trivial() || g == h {
        Err(Error::InvalidPair)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_table() {
        use GroupElement as G;
        assert_eq!(G::X.compose(G::Y), G::Z);
        assert_eq!(G::Y.compose(G::Z), G::X);
        assert_eq!(G::Z.compose(G::Z), G::E);
        for g in G::ALL {
            assert_eq!(g.compose(G::E), g);
            assert_eq!(g.compose(g), G::E);
        }
    }

    #[test]
    fn twist_is_minus_one_on_distinct_nontrivial_pairs() {
        for (g, h) in GroupElement::ordered_pairs() {
            assert_eq!(g.twist(h), -1.0, "{g}{h}");
        }
        for g in GroupElement::ALL {
            assert_eq!(g.twist(g), 1.0);
            assert_eq!(g.twist(GroupElement::E), 1.0);
        }
    }

    #[test]
    fn parse_round_trip() {
        for g in GroupElement::ALL {
            assert_eq!(g.to_string().parse::<GroupElement>().unwrap(), g);
        }
        assert!("w".parse::<GroupElement>().is_err());
    }
}
