//! p-adic integers: fixed-precision residues, lazily generated digit
//! streams, matrix limits, and bounded algebraic-independence certificates.

mod certificate;
mod matrix;
mod poly;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::prime::Prime;

pub use certificate::{
    independence_certificate, CertificateParams, IndependenceCertificate, Verdict,
    DEFAULT_SEARCH_BUDGET,
};
pub use matrix::{matrix_limit_inverse, truncation_sequence, MatrixModPk};
pub use poly::IntPolynomial2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PAdicError {
    #[error("operands have different prime or precision")]
    PrecisionMismatch,
    #[error("element is not a unit")]
    NonUnit,
    #[error("matrix is singular mod p at level {level}")]
    SingularModP { level: u32 },
    #[error("matrix sequence is not compatible under reduction at level {level}")]
    IncompatibleSequence { level: u32 },
    #[error("search space {space} exceeds the budget {budget}")]
    BudgetExceeded { space: f64, budget: f64 },
    #[error("denominator is divisible by p")]
    NotIntegral,
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("matrix dimensions do not match")]
    Dimension,
}

/// Exact valuation, or a lower bound when the residue vanishes at precision `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// True when the valuation is certainly at least `k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v >= k,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

/// An element of `ℤ/p^N`, read as a p-adic integer known to precision `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PAdicApprox {
    pub p: Prime,
    pub precision: u32,
    pub residue: BigUint,
}

impl PAdicApprox {
    pub fn new(p: Prime, precision: u32, residue: impl Into<BigUint>) -> Result<Self, PAdicError> {
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        let m = arith::big_pow(p.get(), precision);
        Ok(PAdicApprox {
            p,
            precision,
            residue: residue.into() % m,
        })
    }

    pub fn from_signed(p: Prime, precision: u32, x: &BigInt) -> Result<Self, PAdicError> {
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        let m = arith::big_pow(p.get(), precision);
        Ok(PAdicApprox {
            p,
            precision,
            residue: arith::reduce_signed(x, &m),
        })
    }

    /// `num / den` with `p ∤ den`.
    pub fn from_rational(
        p: Prime,
        precision: u32,
        num: &BigInt,
        den: &BigUint,
    ) -> Result<Self, PAdicError> {
        let x = Self::from_signed(p, precision, num)?;
        let d = Self::new(p, precision, den.clone())?;
        x.mul(&d.inv().map_err(|_| PAdicError::NotIntegral)?)
    }

    pub fn modulus(&self) -> BigUint {
        arith::big_pow(self.p.get(), self.precision)
    }

    fn check(&self, other: &Self) -> Result<(), PAdicError> {
        if self.p == other.p && self.precision == other.precision {
            Ok(())
        } else {
            Err(PAdicError::PrecisionMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PAdicError> {
        self.check(other)?;
        Ok(PAdicApprox {
            residue: (&self.residue + &other.residue) % self.modulus(),
            ..self.clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PAdicError> {
        self.check(other)?;
        Ok(PAdicApprox {
            residue: (&self.residue * &other.residue) % self.modulus(),
            ..self.clone()
        })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PAdicApprox {
            residue: (&m - &self.residue) % m,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PAdicError> {
        self.add(&other.neg())
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.p.get()).is_zero()
    }

    pub fn inv(&self) -> Result<Self, PAdicError> {
        if !self.is_unit() {
            return Err(PAdicError::NonUnit);
        }
        let r = arith::mod_inverse_big(&self.residue, &self.modulus()).ok_or(PAdicError::NonUnit)?;
        Ok(PAdicApprox {
            residue: r,
            ..self.clone()
        })
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeast(self.precision);
        }
        let v = arith::valuation_big(&BigInt::from(self.residue.clone()), self.p.get())
            .expect("nonzero residue");
        Valuation::Exact(v)
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, precision: u32) -> Result<Self, PAdicError> {
        if precision > self.precision {
            return Err(PAdicError::PrecisionMismatch);
        }
        Self::new(self.p, precision, self.residue.clone())
    }
}

/// How a lazy p-adic integer produces its digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LazySource {
    /// Uniform digits from a ChaCha stream; the first digit is nonzero.
    Seeded { seed: u64, stream: u64 },
    /// `num / den` with `p ∤ den`.
    Rational {
        #[serde(with = "crate::decimal::bigint")]
        num: BigInt,
        #[serde(with = "crate::decimal::biguint")]
        den: BigUint,
    },
    Sum { a: Box<PAdicLazy>, b: Box<PAdicLazy> },
    Product { a: Box<PAdicLazy>, b: Box<PAdicLazy> },
}

/// A p-adic integer given by a deterministic rule, truncated on demand.
///
/// The longest truncation computed so far is cached behind a mutex, so
/// concurrent readers always see a prefix of the same digit sequence.
#[derive(Clone, Serialize, Deserialize)]
pub struct PAdicLazy {
    pub p: Prime,
    pub source: LazySource,
    #[serde(skip)]
    cache: Arc<Mutex<Option<(u32, BigUint)>>>,
}

impl fmt::Debug for PAdicLazy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PAdicLazy")
            .field("p", &self.p)
            .field("source", &self.source)
            .finish()
    }
}

impl PartialEq for PAdicLazy {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.source == other.source
    }
}

impl Eq for PAdicLazy {}

impl PAdicLazy {
    fn from_source(p: Prime, source: LazySource) -> Self {
        PAdicLazy {
            p,
            source,
            cache: Arc::default(),
        }
    }

    pub fn seeded(p: Prime, seed: u64, stream: u64) -> Self {
        Self::from_source(p, LazySource::Seeded { seed, stream })
    }

    pub fn rational(p: Prime, num: impl Into<BigInt>, den: impl Into<BigUint>) -> Result<Self, PAdicError> {
        let den = den.into();
        if den.is_zero() || (&den % p.get()).is_zero() {
            return Err(PAdicError::NotIntegral);
        }
        Ok(Self::from_source(
            p,
            LazySource::Rational {
                num: num.into(),
                den,
            },
        ))
    }

    pub fn integer(p: Prime, n: i64) -> Self {
        Self::rational(p, n, 1u32).expect("denominator 1")
    }

    pub fn sum(a: &PAdicLazy, b: &PAdicLazy) -> Result<Self, PAdicError> {
        if a.p != b.p {
            return Err(PAdicError::PrecisionMismatch);
        }
        Ok(Self::from_source(
            a.p,
            LazySource::Sum {
                a: Box::new(a.clone()),
                b: Box::new(b.clone()),
            },
        ))
    }

    pub fn product(a: &PAdicLazy, b: &PAdicLazy) -> Result<Self, PAdicError> {
        if a.p != b.p {
            return Err(PAdicError::PrecisionMismatch);
        }
        Ok(Self::from_source(
            a.p,
            LazySource::Product {
                a: Box::new(a.clone()),
                b: Box::new(b.clone()),
            },
        ))
    }

    /// The seed of a seeded stream, if this is one.
    pub fn seed(&self) -> Option<(u64, u64)> {
        match self.source {
            LazySource::Seeded { seed, stream } => Some((seed, stream)),
            _ => None,
        }
    }

    /// `x mod p^N` as an integer in `[0, p^N)`.
    pub fn truncate(&self, precision: u32) -> BigUint {
        let mut cache = self.cache.lock().expect("digit cache poisoned");
        if let Some((n, v)) = cache.as_ref() {
            if *n >= precision {
                return v % arith::big_pow(self.p.get(), precision);
            }
        }
        let v = self.compute(precision);
        *cache = Some((precision, v.clone()));
        v
    }

    pub fn approx(&self, precision: u32) -> Result<PAdicApprox, PAdicError> {
        PAdicApprox::new(self.p, precision, self.truncate(precision))
    }

    /// The first `count` base-p digits.
    pub fn digits(&self, count: u32) -> Vec<u64> {
        let mut v = self.truncate(count);
        let p = BigUint::from(self.p.get());
        (0..count)
            .map(|_| {
                let (q, r) = v.div_rem(&p);
                v = q;
                u64::try_from(&r).expect("digit below p")
            })
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        !(self.truncate(1)).is_zero()
    }

    fn compute(&self, precision: u32) -> BigUint {
        let p = self.p.get();
        let m = arith::big_pow(p, precision);
        match &self.source {
            LazySource::Seeded { seed, stream } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(*stream);
                let mut acc = BigUint::zero();
                let mut place = BigUint::one();
                for i in 0..precision {
                    let d = if i == 0 {
                        rng.random_range(1..p)
                    } else {
                        rng.random_range(0..p)
                    };
                    acc += &place * d;
                    place *= p;
                }
                acc
            }
            LazySource::Rational { num, den } => {
                PAdicApprox::from_rational(self.p, precision, num, den)
                    .expect("validated on construction")
                    .residue
            }
            LazySource::Sum { a, b } => (a.truncate(precision) + b.truncate(precision)) % m,
            LazySource::Product { a, b } => (a.truncate(precision) * b.truncate(precision)) % m,
        }
    }
}

/// `p^k | num/den` in `ℤ_(p)`, read from the exact fraction.
pub fn rational_divisible(num: &BigInt, p: Prime, k: u32) -> bool {
    match arith::valuation_big(num, p.get()) {
        None => true,
        Some(v) => v >= k,
    }
}

/// `p^k | x` read from a truncation of precision `N > k`.
pub fn truncation_divisible(x: &PAdicApprox, k: u32) -> bool {
    x.valuation().at_least(k)
}

#[cfg(test)]
mod tests;
