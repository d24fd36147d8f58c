use std::fmt;

use super::{Entry, ExponentSet, GroupSpec, SummandFamily};
use crate::arith;
use crate::cardinal::Cardinal;

/// Renders in the input grammar, so `parse(render(x)) == x`.
pub(super) fn render(spec: &GroupSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if spec.entries.is_empty() {
        return write!(f, "0");
    }
    for (i, e) in spec.entries.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write_entry(e, f)?;
    }
    Ok(())
}

fn write_entry(e: &Entry, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}", e.family)?;
    if e.mult != Cardinal::ONE {
        write!(f, "^{}", e.mult)?;
    }
    Ok(())
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &std::collections::BTreeSet<u32>| {
            s.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
        };
        match self {
            ExponentSet::Explicit(s) => write!(f, "{{{}}}", join(s)),
            ExponentSet::Cofinite(ex) if ex.is_empty() => write!(f, "all"),
            ExponentSet::Cofinite(ex) => write!(f, "all\\{{{}}}", join(ex)),
        }
    }
}

impl fmt::Display for SummandFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandFamily::Cyclic { p, k } => match arith::checked_prime_power(p.get(), *k) {
                Some(n) => write!(f, "Z/{n}"),
                None => write!(f, "sumK({p};{{{k}}})"),
            },
            SummandFamily::Prufer { p } => write!(f, "Prufer({p})"),
            SummandFamily::Rationals => write!(f, "Q"),
            SummandFamily::PAdicComplete { p } => write!(f, "Zhat({p})"),
            SummandFamily::CyclicPrimeFamily { primes, k } => write!(f, "sumP({primes};Z/p^{k})"),
            SummandFamily::PAdicPrimeFamily { primes } => write!(f, "sumP({primes};Zhat)"),
            SummandFamily::CyclicExponentFamily { p, exponents } => {
                write!(f, "sumK({p};{exponents})")
            }
        }
    }
}
