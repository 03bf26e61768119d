//! Child counts in `ℕ ∪ {ω}`.
//!
//! `ω` stands for "countably many". Addition saturates at `ω`, `ω` compares
//! greater than every natural number, and `ω − 1 = ω`.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    pub const ZERO: Multiplicity = Multiplicity::Finite(0);
    pub const ONE: Multiplicity = Multiplicity::Finite(1);

    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }

    pub fn is_zero(self) -> bool {
        self == Multiplicity::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(k) => Some(k),
            Multiplicity::Omega => None,
        }
    }

    /// Removes one element. `ω − 1 = ω`; `0 − 1` stays `0`.
    pub fn decrement(self) -> Multiplicity {
        match self {
            Multiplicity::Finite(k) => Multiplicity::Finite(k.saturating_sub(1)),
            Multiplicity::Omega => Multiplicity::Omega,
        }
    }

    /// Replaces `ω` by `bound`; finite values are capped at `bound` too.
    pub fn clamp_to(self, bound: u64) -> u64 {
        match self {
            Multiplicity::Finite(k) => k.min(bound),
            Multiplicity::Omega => bound,
        }
    }

    /// Token used by the scheme DSL (`w` for ω).
    pub fn dsl_token(self) -> String {
        match self {
            Multiplicity::Finite(k) => k.to_string(),
            Multiplicity::Omega => "w".to_string(),
        }
    }
}

impl Default for Multiplicity {
    fn default() -> Self {
        Multiplicity::ZERO
    }
}

impl From<u64> for Multiplicity {
    fn from(k: u64) -> Self {
        Multiplicity::Finite(k)
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a.saturating_add(b)),
            _ => Multiplicity::Omega,
        }
    }
}

impl Sum for Multiplicity {
    fn sum<I: Iterator<Item = Multiplicity>>(iter: I) -> Multiplicity {
        iter.fold(Multiplicity::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Multiplicity> for Multiplicity {
    fn sum<I: Iterator<Item = &'a Multiplicity>>(iter: I) -> Multiplicity {
        iter.copied().sum()
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Omega => f.write_str("ω"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Multiplicity::{self, *};

    #[test]
    fn omega_is_maximal() {
        assert!(Omega > Finite(u64::MAX));
        assert!(Finite(3) < Finite(4));
    }

    #[test]
    fn addition_saturates() {
        assert_eq!(Omega + Finite(7), Omega);
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        let total: Multiplicity = [Finite(1), Omega, Finite(2)].iter().sum();
        assert_eq!(total, Omega);
    }

    #[test]
    fn decrement_keeps_omega() {
        assert_eq!(Omega.decrement(), Omega);
        assert_eq!(Finite(1).decrement(), Finite(0));
        assert_eq!(Finite(0).decrement(), Finite(0));
    }
}
