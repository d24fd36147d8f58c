use std::collections::BTreeSet;

use thiserror::Error;

use super::{Entry, ExponentSet, GroupSpec, SummandFamily};
use crate::arith;
use crate::cardinal::Cardinal;
use crate::prime::{Prime, PrimeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected trailing input")]
    Trailing,
    #[error("cyclic modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("empty exclusion list after `all\\`")]
    EmptyComplement,
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("number does not fit in 64 bits")]
    Overflow,
}

pub(super) fn parse(text: &str) -> Result<GroupSpec, ParseError> {
    let mut p = Parser::new(text);
    let entries = p.spec()?;
    if !p.at_end() {
        return Err(p.error(ParseErrorKind::Trailing));
    }
    Ok(GroupSpec::normalize(entries))
}

/// Recursive-descent parser over the non-whitespace characters of the input,
/// each tagged with its original byte offset.
struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            len: text.len(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.offset(),
            kind,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, lit: &str) -> bool {
        let n = lit.chars().count();
        if self.pos + n > self.chars.len() {
            return false;
        }
        if self.chars[self.pos..self.pos + n]
            .iter()
            .map(|&(_, c)| c)
            .eq(lit.chars())
        {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &'static str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Expected(lit)))
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as u64))
                .ok_or_else(|| self.error(ParseErrorKind::Overflow))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(ParseErrorKind::Expected("a natural number")));
        }
        Ok(value)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = self.offset();
        let v = self.nat()?;
        let k = u32::try_from(v).map_err(|_| ParseError {
            position: at,
            kind: ParseErrorKind::Overflow,
        })?;
        if k == 0 {
            return Err(ParseError {
                position: at,
                kind: ParseErrorKind::ZeroExponent,
            });
        }
        Ok(k)
    }

    fn prime(&mut self) -> Result<Prime, ParseError> {
        let at = self.offset();
        let v = self.nat()?;
        Prime::new(v).map_err(|_| ParseError {
            position: at,
            kind: ParseErrorKind::NotPrime(v),
        })
    }

    fn spec(&mut self) -> Result<Vec<Entry>, ParseError> {
        let mut out = self.term()?;
        while self.eat("+") {
            out.extend(self.term()?);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Vec<Entry>, ParseError> {
        let families = self.atom()?;
        let mult = if self.eat("^") {
            self.mult()?
        } else {
            Cardinal::ONE
        };
        Ok(families
            .into_iter()
            .map(|(family, m)| Entry::new(family, Cardinal::Finite(m).mul(mult)))
            .collect())
    }

    fn mult(&mut self) -> Result<Cardinal, ParseError> {
        if self.eat("w") {
            return Ok(Cardinal::ALEPH_0);
        }
        if self.eat("aleph(") {
            let at = self.offset();
            let i = self.nat()?;
            let i = u32::try_from(i).map_err(|_| ParseError {
                position: at,
                kind: ParseErrorKind::Overflow,
            })?;
            self.expect(")")?;
            return Ok(Cardinal::Aleph(i));
        }
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(Cardinal::Finite(self.nat()?));
        }
        Err(self.error(ParseErrorKind::Expected("a multiplicity")))
    }

    /// Families with a finite multiplicity each (a composite `Z/n` yields several).
    fn atom(&mut self) -> Result<Vec<(SummandFamily, u64)>, ParseError> {
        if self.eat("Zhat(") {
            let p = self.prime()?;
            self.expect(")")?;
            return Ok(vec![(SummandFamily::PAdicComplete { p }, 1)]);
        }
        if self.eat("Z/") {
            let at = self.offset();
            let n = self.nat()?;
            if n < 2 {
                return Err(ParseError {
                    position: at,
                    kind: ParseErrorKind::ModulusTooSmall(n),
                });
            }
            return Ok(arith::factorize(n)
                .into_iter()
                .map(|(p, k)| {
                    let p = Prime::new(p).expect("factor is prime");
                    (SummandFamily::Cyclic { p, k }, 1)
                })
                .collect());
        }
        if self.eat("Prufer(") {
            let p = self.prime()?;
            self.expect(")")?;
            return Ok(vec![(SummandFamily::Prufer { p }, 1)]);
        }
        if self.eat("Q") {
            return Ok(vec![(SummandFamily::Rationals, 1)]);
        }
        if self.eat("sumP(") {
            let primes = self.prime_set()?;
            self.expect(";")?;
            let family = if self.eat("Zhat") {
                SummandFamily::PAdicPrimeFamily { primes }
            } else if self.eat("Z/p^") {
                let k = self.exponent()?;
                SummandFamily::CyclicPrimeFamily { primes, k }
            } else {
                return Err(self.error(ParseErrorKind::Expected("`Z/p^` or `Zhat`")));
            };
            self.expect(")")?;
            return Ok(vec![(family, 1)]);
        }
        if self.eat("sumK(") {
            let p = self.prime()?;
            self.expect(";")?;
            let exponents = self.exponent_set()?;
            self.expect(")")?;
            return Ok(vec![(SummandFamily::CyclicExponentFamily { p, exponents }, 1)]);
        }
        if self.eat("0") {
            return Ok(vec![]);
        }
        Err(self.error(ParseErrorKind::Expected("a summand")))
    }

    fn braced<T: Ord>(
        &mut self,
        item: impl Fn(&mut Self) -> Result<T, ParseError>,
    ) -> Result<BTreeSet<T>, ParseError> {
        self.expect("{")?;
        let mut out = BTreeSet::new();
        out.insert(item(self)?);
        while self.eat(",") {
            out.insert(item(self)?);
        }
        self.expect("}")?;
        Ok(out)
    }

    /// `all`, `all\{...}`, or `{...}`. Returns the cofinite exclusions when
    /// `all` was read.
    fn all_or_explicit<T: Ord>(
        &mut self,
        item: impl Fn(&mut Self) -> Result<T, ParseError> + Copy,
    ) -> Result<Result<BTreeSet<T>, BTreeSet<T>>, ParseError> {
        if self.eat("all") {
            if self.eat("\\") {
                if self.eat("{}") {
                    return Err(self.error(ParseErrorKind::EmptyComplement));
                }
                return Ok(Err(self.braced(item)?));
            }
            return Ok(Err(BTreeSet::new()));
        }
        if self.peek() == Some('{') {
            return Ok(Ok(self.braced(item)?));
        }
        Err(self.error(ParseErrorKind::Expected("`all` or `{`")))
    }

    fn prime_set(&mut self) -> Result<PrimeSet, ParseError> {
        Ok(match self.all_or_explicit(Self::prime)? {
            Ok(s) => PrimeSet::Explicit(s),
            Err(ex) => PrimeSet::Cofinite(ex),
        })
    }

    fn exponent_set(&mut self) -> Result<ExponentSet, ParseError> {
        Ok(match self.all_or_explicit(Self::exponent)? {
            Ok(s) => ExponentSet::Explicit(s),
            Err(ex) => ExponentSet::Cofinite(ex),
        })
    }
}
