use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::PAdicError;
use crate::arith;
use crate::prime::Prime;

/// A `k×k` matrix over `ℤ/p^N`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixModPk {
    pub p: Prime,
    pub precision: u32,
    pub k: usize,
    pub entries: Vec<BigUint>,
}

impl MatrixModPk {
    pub fn new(p: Prime, precision: u32, k: usize, entries: Vec<BigUint>) -> Result<Self, PAdicError> {
        if entries.len() != k * k {
            return Err(PAdicError::Dimension);
        }
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        let m = arith::big_pow(p.get(), precision);
        Ok(MatrixModPk {
            p,
            precision,
            k,
            entries: entries.into_iter().map(|x| x % &m).collect(),
        })
    }

    pub fn from_u64(p: Prime, precision: u32, k: usize, entries: &[u64]) -> Result<Self, PAdicError> {
        Self::new(p, precision, k, entries.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn identity(p: Prime, precision: u32, k: usize) -> Self {
        let mut entries = vec![BigUint::zero(); k * k];
        for i in 0..k {
            entries[i * k + i] = BigUint::one();
        }
        MatrixModPk {
            p,
            precision,
            k,
            entries,
        }
    }

    pub fn modulus(&self) -> BigUint {
        arith::big_pow(self.p.get(), self.precision)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.k + j]
    }

    pub fn reduce(&self, precision: u32) -> Result<Self, PAdicError> {
        if precision > self.precision {
            return Err(PAdicError::PrecisionMismatch);
        }
        Self::new(self.p, precision, self.k, self.entries.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PAdicError> {
        if self.p != other.p || self.precision != other.precision || self.k != other.k {
            return Err(PAdicError::PrecisionMismatch);
        }
        let m = self.modulus();
        let k = self.k;
        let mut entries = vec![BigUint::zero(); k * k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = BigUint::zero();
                for t in 0..k {
                    acc += self.get(i, t) * other.get(t, j);
                }
                entries[i * k + j] = acc % &m;
            }
        }
        Ok(MatrixModPk {
            entries,
            ..self.clone()
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.precision, self.k)
    }

    /// Gauss–Jordan inverse over `ℤ/p^N`; pivots must be units.
    pub fn inverse(&self) -> Result<Self, PAdicError> {
        let k = self.k;
        let m = self.modulus();
        let p = self.p.get();
        let mut a = self.entries.clone();
        let mut b = Self::identity(self.p, self.precision, k).entries;
        let singular = PAdicError::SingularModP {
            level: self.precision,
        };
        for col in 0..k {
            let pivot = (col..k)
                .find(|&r| !(&a[r * k + col] % p).is_zero())
                .ok_or(singular.clone())?;
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
                b.swap(col * k + j, pivot * k + j);
            }
            let inv = arith::mod_inverse_big(&a[col * k + col], &m).ok_or(singular.clone())?;
            for j in 0..k {
                a[col * k + j] = &a[col * k + j] * &inv % &m;
                b[col * k + j] = &b[col * k + j] * &inv % &m;
            }
            for r in 0..k {
                if r == col || a[r * k + col].is_zero() {
                    continue;
                }
                let f = a[r * k + col].clone();
                for j in 0..k {
                    let sa = &f * &a[col * k + j] % &m;
                    a[r * k + j] = (&a[r * k + j] + &m - sa) % &m;
                    let sb = &f * &b[col * k + j] % &m;
                    b[r * k + j] = (&b[r * k + j] + &m - sb) % &m;
                }
            }
        }
        Ok(MatrixModPk {
            entries: b,
            ..self.clone()
        })
    }
}

/// Inverts a compatible sequence `A_1, A_2, ...` with `A_n` over `ℤ/p^n`.
///
/// Returns `B_n` with `A_n B_n = B_n A_n = I` at every level; the `B_n` are
/// compatible because inverses are unique.
pub fn matrix_limit_inverse(seq: &[MatrixModPk]) -> Result<Vec<MatrixModPk>, PAdicError> {
    for (i, a) in seq.iter().enumerate() {
        let level = i as u32 + 1;
        if a.precision != level {
            return Err(PAdicError::IncompatibleSequence { level });
        }
        if i > 0 && a.reduce(level - 1)? != seq[i - 1] {
            return Err(PAdicError::IncompatibleSequence { level });
        }
    }
    seq.iter().map(MatrixModPk::inverse).collect()
}

/// The truncations `A mod p^n`, `n = 1..=N`, of one matrix given at precision `N`.
pub fn truncation_sequence(a: &MatrixModPk) -> Vec<MatrixModPk> {
    (1..=a.precision)
        .map(|n| a.reduce(n).expect("lower precision"))
        .collect()
}
