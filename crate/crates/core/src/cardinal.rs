use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Cardinal numbers restricted to finite values and alephs with natural index.
///
/// The derived order is the cardinal order: every `Finite` is below every
/// `Aleph`, and each variant compares by its payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinal {
    Finite(u64),
    Aleph(u32),
}

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal::Finite(0);
    pub const ONE: Cardinal = Cardinal::Finite(1);
    pub const ALEPH_0: Cardinal = Cardinal::Aleph(0);

    pub fn is_zero(self) -> bool {
        self == Cardinal::ZERO
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Cardinal::Aleph(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::Aleph(_) => None,
        }
    }

    /// Collapse every infinite cardinal to `ℵ₀`.
    pub fn cap_aleph0(self) -> Cardinal {
        match self {
            Cardinal::Aleph(_) => Cardinal::ALEPH_0,
            c => c,
        }
    }

    /// Cardinal product, as needed for `κ · λ` multiplicities.
    pub fn mul(self, other: Cardinal) -> Cardinal {
        if self.is_zero() || other.is_zero() {
            return Cardinal::ZERO;
        }
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => {
                Cardinal::Finite(a.checked_mul(b).expect("finite cardinal overflow"))
            }
            _ => self.max(other),
        }
    }
}

impl Add for Cardinal {
    type Output = Cardinal;

    fn add(self, rhs: Cardinal) -> Cardinal {
        match (self, rhs) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => {
                Cardinal::Finite(a.checked_add(b).expect("finite cardinal overflow"))
            }
            _ => self.max(rhs),
        }
    }
}

impl std::iter::Sum for Cardinal {
    fn sum<I: Iterator<Item = Cardinal>>(iter: I) -> Cardinal {
        iter.fold(Cardinal::ZERO, |a, b| a + b)
    }
}

impl Default for Cardinal {
    fn default() -> Self {
        Cardinal::ZERO
    }
}

impl From<u64> for Cardinal {
    fn from(n: u64) -> Self {
        Cardinal::Finite(n)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(0) => write!(f, "w"),
            Cardinal::Aleph(i) => write!(f, "aleph({i})"),
        }
    }
}
