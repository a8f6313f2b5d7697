//! Integer sequences mined from exact coefficient streams.

pub mod oeis;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::engine::Engine;
use crate::error::{ParseError, SequenceError};
use crate::symvalue::{ConstAtom, Rational};

pub use oeis::{oeis_lookup, OeisClient, OeisMatch, OeisResult};

/// Which coefficient of each value to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffTarget {
    Atom(ConstAtom),
    RationalPart,
}

impl FromStr for CoeffTarget {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" | "rational_part" => Ok(CoeffTarget::RationalPart),
            _ => s.parse().map(CoeffTarget::Atom),
        }
    }
}

impl fmt::Display for CoeffTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffTarget::Atom(a) => a.fmt(f),
            CoeffTarget::RationalPart => f.write_str("rational"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    #[default]
    All,
}

impl Parity {
    pub fn admits(self, n: u32) -> bool {
        match self {
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
            Parity::All => true,
        }
    }
}

impl FromStr for Parity {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            "all" => Ok(Parity::All),
            _ => Err(ParseError::Invalid(s.to_string())),
        }
    }
}

/// How rationals become integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegerMode {
    Numerators,
    Denominators,
    /// Multiply through by the lcm of all denominators.
    ScaledLcm,
}

/// `abs` may be combined with one integer mode; no mode means the values
/// must already be integers (`raw`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Normalization {
    pub abs: bool,
    pub mode: Option<IntegerMode>,
}

impl FromStr for Normalization {
    type Err = ParseError;

    /// `raw`, `abs`, `numerators`, `denominators`, `scaled_lcm`, or `abs+<mode>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Normalization::default();
        for part in s.split('+') {
            let mode = match part {
                "raw" => None,
                "abs" => {
                    out.abs = true;
                    continue;
                }
                "numerators" => Some(IntegerMode::Numerators),
                "denominators" => Some(IntegerMode::Denominators),
                "scaled_lcm" => Some(IntegerMode::ScaledLcm),
                _ => return Err(ParseError::Invalid(s.to_string())),
            };
            if out.mode.is_some() && mode.is_some() {
                return Err(ParseError::Invalid(s.to_string()));
            }
            out.mode = out.mode.or(mode);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffQuery {
    pub target: CoeffTarget,
    pub p: u32,
    pub parity: Parity,
    pub n_max: u32,
    pub normalize: Normalization,
}

/// Coefficient of `q.target` in `compute(n, q.p)` for each admitted
/// `n ≤ n_max`, increasing in `n`.
pub fn coeff_sequence(engine: &Engine, q: &CoeffQuery) -> Vec<Rational> {
    (0..=q.n_max)
        .filter(|n| q.parity.admits(*n))
        .map(|n| {
            let v = engine.compute(n, q.p);
            match q.target {
                CoeffTarget::Atom(a) => v.extract_coefficient(a),
                CoeffTarget::RationalPart => v.rational_part().clone(),
            }
        })
        .collect()
}

pub fn normalize(seq: &[Rational], how: &Normalization) -> Result<Vec<BigInt>, SequenceError> {
    if seq.is_empty() {
        return Err(SequenceError::Empty);
    }
    let vals: Vec<Rational> = seq.iter().map(|r| if how.abs { r.abs() } else { r.clone() }).collect();
    match how.mode {
        None => vals
            .iter()
            .map(|r| if r.is_integer() { Ok(r.to_integer()) } else { Err(SequenceError::NotIntegral(r.to_string())) })
            .collect(),
        Some(IntegerMode::Numerators) => Ok(vals.iter().map(|r| r.numer().clone()).collect()),
        Some(IntegerMode::Denominators) => Ok(vals.iter().map(|r| r.denom().clone()).collect()),
        Some(IntegerMode::ScaledLcm) => {
            let lcm = vals.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            Ok(vals.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect())
        }
    }
}

impl CoeffQuery {
    /// Extract and normalize in one step.
    pub fn terms(&self, engine: &Engine) -> Result<Vec<BigInt>, SequenceError> {
        normalize(&coeff_sequence(engine, self), &self.normalize)
    }
}
