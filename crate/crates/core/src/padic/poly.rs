use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith;

/// An integer polynomial in `x, y`, stored as `(i, j) ↦ c` for `c·x^i·y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPolynomial2 {
    terms: BTreeMap<(u32, u32), i64>,
}

impl IntPolynomial2 {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), i64)>>(terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            *out.entry(m).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        IntPolynomial2 { terms: out }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn height(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// Terms in display order: by total degree, then `x` before `y`.
    fn ordered(&self) -> Vec<((u32, u32), i64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&m, &c)| (m, c)).collect();
        v.sort_by_key(|&((i, j), _)| (i + j, Reverse(i)));
        v
    }

    /// The sign-normalized copy whose first displayed coefficient is positive.
    pub fn normalized_sign(&self) -> Self {
        match self.ordered().first() {
            Some(&(_, c)) if c < 0 => IntPolynomial2 {
                terms: self.terms.iter().map(|(&m, &c)| (m, -c)).collect(),
            },
            _ => self.clone(),
        }
    }

    /// Order used to report the simplest relation: total degree, number of
    /// terms, height, then the displayed term list.
    pub fn simplicity_cmp(&self, other: &Self) -> Ordering {
        (self.total_degree(), self.terms.len(), self.height())
            .cmp(&(other.total_degree(), other.terms.len(), other.height()))
            .then_with(|| self.ordered().cmp(&other.ordered()))
    }

    /// `q(x, y) mod m` from residues of `x` and `y`.
    pub fn eval_mod(&self, x: &BigUint, y: &BigUint, m: &BigUint) -> BigUint {
        let mut acc = BigInt::zero();
        let mut xp: BTreeMap<u32, BigUint> = BTreeMap::new();
        let mut yp: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (&(i, j), &c) in &self.terms {
            let xi = xp
                .entry(i)
                .or_insert_with(|| x.modpow(&BigUint::from(i), m))
                .clone();
            let yj = yp
                .entry(j)
                .or_insert_with(|| y.modpow(&BigUint::from(j), m))
                .clone();
            acc += BigInt::from(c) * BigInt::from(xi * yj % m);
        }
        arith::reduce_signed(&acc, m)
    }
}

impl fmt::Display for IntPolynomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in terms.into_iter().enumerate() {
            let mag = c.unsigned_abs();
            match (n, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != 1 || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    e => parts.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let q = IntPolynomial2::from_terms([((1, 0), 1), ((0, 1), -1)]);
        assert_eq!(q.to_string(), "x - y");
        let q = IntPolynomial2::from_terms([((0, 1), 1), ((2, 0), -1)]);
        assert_eq!(q.to_string(), "y - x^2");
        let q = IntPolynomial2::from_terms([((0, 0), -3), ((1, 1), 2)]);
        assert_eq!(q.to_string(), "-3 + 2*x*y");
        assert_eq!(q.normalized_sign().to_string(), "3 - 2*x*y");
        assert_eq!(IntPolynomial2::default().to_string(), "0");
    }

    #[test]
    fn evaluation() {
        let q = IntPolynomial2::from_terms([((2, 0), 1), ((0, 1), -1), ((0, 0), 5)]);
        let m = BigUint::from(1000u32);
        // 7^2 - 11 + 5 = 43
        assert_eq!(
            q.eval_mod(&BigUint::from(7u32), &BigUint::from(11u32), &m),
            BigUint::from(43u32)
        );
    }

    #[test]
    fn simplicity_prefers_low_degree_then_few_terms() {
        let a = IntPolynomial2::from_terms([((1, 0), 1), ((0, 1), -1)]);
        let b = IntPolynomial2::from_terms([((2, 0), 1), ((0, 1), -1)]);
        let c = IntPolynomial2::from_terms([((1, 0), 2), ((0, 1), -2)]);
        assert_eq!(a.simplicity_cmp(&b), Ordering::Less);
        assert_eq!(a.simplicity_cmp(&c), Ordering::Less);
    }
}
