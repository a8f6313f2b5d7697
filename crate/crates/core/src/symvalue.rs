//! Exact values as rational linear combinations of a fixed constant basis.
//!
//! Every integral in the family evaluates to
//! `r + Σ c_a · a` with rational `r`, `c_a` and atoms `a` drawn from
//! `{π^j, ln 2, π·ln 2, G, S_q}`. The basis is assumed linearly independent
//! over ℚ, so two values are equal exactly when their coefficients are.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Exact fraction; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Build a rational from small integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A basis constant.
///
/// The integral of `ln(cos x)` over `[0, π/4]` has no atom of its own; it is
/// always rewritten as `G/2 − (π/4)·ln 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstAtom {
    /// `π^j`, `j ≥ 1`.
    PiPow(u32),
    Ln2,
    /// `π · ln 2`.
    PiLn2,
    /// Catalan's constant `G`.
    Catalan,
    /// `S_q = ∫₀^{π/4} x^q tan x dx`, `q ≥ 2`; lower seeds expand to the
    /// other atoms.
    Seed(u32),
}

impl ConstAtom {
    pub fn is_valid(&self) -> bool {
        match *self {
            ConstAtom::PiPow(j) => j >= 1,
            ConstAtom::Seed(q) => q >= 2,
            _ => true,
        }
    }
}

impl fmt::Display for ConstAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstAtom::PiPow(j) => write!(f, "pi^{j}"),
            ConstAtom::Ln2 => f.write_str("ln2"),
            ConstAtom::PiLn2 => f.write_str("pi*ln2"),
            ConstAtom::Catalan => f.write_str("catalan"),
            ConstAtom::Seed(q) => write!(f, "seed_{q}"),
        }
    }
}

/// Parse a canonical decimal index: no sign, no leading zeros.
fn parse_index(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for ConstAtom {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let atom = match s {
            "ln2" => Some(ConstAtom::Ln2),
            "pi*ln2" => Some(ConstAtom::PiLn2),
            "catalan" => Some(ConstAtom::Catalan),
            _ => {
                if let Some(j) = s.strip_prefix("pi^") {
                    parse_index(j).map(ConstAtom::PiPow)
                } else if let Some(q) = s.strip_prefix("seed_") {
                    parse_index(q).map(ConstAtom::Seed)
                } else {
                    None
                }
            }
        };
        match atom {
            Some(a) if a.is_valid() => Ok(a),
            _ => Err(ParseError::UnknownAtom(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymValue {
    rational: Rational,
    terms: BTreeMap<ConstAtom, Rational>,
}

impl SymValue {
    pub fn zero() -> Self {
        SymValue::default()
    }

    pub fn from_rational(r: Rational) -> Self {
        SymValue { rational: r, terms: BTreeMap::new() }
    }

    /// `coeff · atom`.
    ///
    /// # Panics
    ///
    /// If `atom` is outside its valid index range (`PiPow(0)`, `Seed(0)`,
    /// `Seed(1)`).
    pub fn term(atom: ConstAtom, coeff: Rational) -> Self {
        assert!(atom.is_valid(), "invalid atom {atom:?}");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(atom, coeff);
        }
        SymValue { rational: Rational::zero(), terms }
    }

    pub fn atom(atom: ConstAtom) -> Self {
        SymValue::term(atom, Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    /// Nonzero atom coefficients in atom order.
    pub fn terms(&self) -> impl Iterator<Item = (&ConstAtom, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.terms.is_empty()
    }

    /// True when the value has no atom terms.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// The stored coefficient of `atom`, or zero.
    pub fn extract_coefficient(&self, atom: ConstAtom) -> Rational {
        self.terms.get(&atom).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> SymValue {
        if c.is_zero() {
            return SymValue::zero();
        }
        SymValue { rational: &self.rational * c, terms: self.terms.iter().map(|(a, v)| (*a, v * c)).collect() }
    }

    /// `self + c · other` without materializing the scaled operand.
    pub fn add_scaled(&self, c: &Rational, other: &SymValue) -> SymValue {
        let mut out = self.clone();
        if c.is_zero() {
            return out;
        }
        out.rational += &other.rational * c;
        for (atom, v) in &other.terms {
            let slot = out.terms.entry(*atom).or_insert_with(Rational::zero);
            *slot += v * c;
            if slot.is_zero() {
                out.terms.remove(atom);
            }
        }
        out
    }

    /// Canonical form: no stored zero coefficient and no invalid atom.
    /// Rationals are reduced by construction.
    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(a, c)| a.is_valid() && !c.is_zero())
    }

    pub fn to_json(&self) -> String {
        let wire = Wire {
            rational: rational_to_wire(&self.rational),
            terms: self.terms.iter().map(|(a, c)| (a.to_string(), rational_to_wire(c))).collect(),
        };
        serde_json::to_string(&wire).expect("string map serializes")
    }

    pub fn parse_json(text: &str) -> Result<SymValue, ParseError> {
        let wire: Wire = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let rational = rational_from_wire(&wire.rational)?;
        let mut terms = BTreeMap::new();
        for (name, coeff) in &wire.terms {
            let atom: ConstAtom = name.parse()?;
            let c = rational_from_wire(coeff)?;
            if c.is_zero() {
                return Err(ParseError::NonCanonical(format!("zero coefficient for {name}")));
            }
            terms.insert(atom, c);
        }
        Ok(SymValue { rational, terms })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    rational: String,
    terms: BTreeMap<String, String>,
}

/// `"0"` for zero, `"num/den"` otherwise (denominator always written).
pub fn rational_to_wire(r: &Rational) -> String {
    if r.is_zero() {
        "0".to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`rational_to_wire`]; also accepts `"0/1"`. Anything not in
/// lowest terms, or with a sign on the denominator, leading zeros or a `+`
/// sign, is rejected.
pub fn rational_from_wire(s: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::NonCanonical(s.to_string());
    if s == "0" {
        return Ok(Rational::zero());
    }
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if !den.is_positive() || num.to_string() != n || den.to_string() != d {
        return Err(bad());
    }
    let r = Rational::new(num.clone(), den.clone());
    if r.numer() != &num || r.denom() != &den {
        return Err(bad());
    }
    Ok(r)
}

impl Add<&SymValue> for &SymValue {
    type Output = SymValue;
    fn add(self, rhs: &SymValue) -> SymValue {
        self.add_scaled(&Rational::one(), rhs)
    }
}

impl Add for SymValue {
    type Output = SymValue;
    fn add(self, rhs: SymValue) -> SymValue {
        &self + &rhs
    }
}

impl Sub<&SymValue> for &SymValue {
    type Output = SymValue;
    fn sub(self, rhs: &SymValue) -> SymValue {
        self.add_scaled(&-Rational::one(), rhs)
    }
}

impl Sub for SymValue {
    type Output = SymValue;
    fn sub(self, rhs: SymValue) -> SymValue {
        &self - &rhs
    }
}

impl Neg for &SymValue {
    type Output = SymValue;
    fn neg(self) -> SymValue {
        self.scale(&-Rational::one())
    }
}

impl Neg for SymValue {
    type Output = SymValue;
    fn neg(self) -> SymValue {
        -&self
    }
}

impl From<Rational> for SymValue {
    fn from(r: Rational) -> Self {
        SymValue::from_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi_pow(j: u32, n: i64, d: i64) -> SymValue {
        SymValue::term(ConstAtom::PiPow(j), ratio(n, d))
    }

    fn ln2(n: i64, d: i64) -> SymValue {
        SymValue::term(ConstAtom::Ln2, ratio(n, d))
    }

    // I_2^(1) as printed in the even-n table
    fn i2_1() -> SymValue {
        &(&pi_pow(2, -1, 32) + &pi_pow(1, 1, 4)) + &ln2(-1, 2)
    }

    #[test]
    fn additive_inverse_and_cancellation() {
        let q = pi_pow(1, 1, 4);
        assert!((&q + &pi_pow(1, -1, 4)).is_zero());
        let one_minus = &SymValue::from_rational(ratio(1, 1)) - &q;
        let back = &one_minus + &q;
        assert_eq!(back, SymValue::from_rational(ratio(1, 1)));
        assert!(back.is_rational());
    }

    #[test]
    fn recurrence_left_side_at_n2_p1() {
        let sum = &i2_1() + &pi_pow(2, 1, 32);
        assert_eq!(sum, &pi_pow(1, 1, 4) + &ln2(-1, 2));
    }

    #[test]
    fn scaling() {
        assert!(i2_1().scale(&Rational::zero()).is_zero());
        assert_eq!(SymValue::atom(ConstAtom::Ln2).scale(&ratio(1, 2)), ln2(1, 2));
        let i4_1 = &(&(&pi_pow(2, 1, 32) + &pi_pow(1, -1, 6)) + &SymValue::from_rational(ratio(-1, 6))) + &ln2(2, 3);
        let neg = i4_1.scale(&ratio(-1, 1));
        assert_eq!(neg.extract_coefficient(ConstAtom::PiPow(2)), ratio(-1, 32));
        assert_eq!(neg.extract_coefficient(ConstAtom::PiPow(1)), ratio(1, 6));
        assert_eq!(neg.rational_part(), &ratio(1, 6));
        assert_eq!(neg.extract_coefficient(ConstAtom::Ln2), ratio(-2, 3));
    }

    #[test]
    fn coefficient_extraction() {
        assert_eq!(i2_1().extract_coefficient(ConstAtom::PiPow(2)), ratio(-1, 32));
        assert_eq!(i2_1().extract_coefficient(ConstAtom::Catalan), Rational::zero());
    }

    #[test]
    fn json_examples() {
        assert_eq!(SymValue::zero().to_json(), r#"{"rational":"0","terms":{}}"#);
        assert_eq!(pi_pow(1, 1, 4).to_json(), r#"{"rational":"0","terms":{"pi^1":"1/4"}}"#);
        let text = i2_1().to_json();
        assert_eq!(text, r#"{"rational":"0","terms":{"ln2":"-1/2","pi^1":"1/4","pi^2":"-1/32"}}"#);
        assert_eq!(SymValue::parse_json(&text).unwrap(), i2_1());
        let one = SymValue::from_rational(ratio(1, 1));
        assert_eq!(one.to_json(), r#"{"rational":"1/1","terms":{}}"#);
    }

    #[test]
    fn json_rejects_bad_input() {
        for bad in [
            r#"{"rational":"0","terms":{"pi^0":"1/2"}}"#,
            r#"{"rational":"0","terms":{"seed_1":"1/2"}}"#,
            r#"{"rational":"0","terms":{"pi^01":"1/2"}}"#,
            r#"{"rational":"0","terms":{"euler":"1/2"}}"#,
            r#"{"rational":"2/4","terms":{}}"#,
            r#"{"rational":"1/-2","terms":{}}"#,
            r#"{"rational":"+1/2","terms":{}}"#,
            r#"{"rational":"3","terms":{}}"#,
            r#"{"rational":"-0","terms":{}}"#,
            r#"{"rational":"0","terms":{"ln2":"0"}}"#,
            r#"{"rational":"0","terms":{"ln2":"0/1"}}"#,
            r#"{"rational":"0"}"#,
            r#"{"rational":"0","terms":{},"extra":1}"#,
            "not json",
        ] {
            assert!(SymValue::parse_json(bad).is_err(), "accepted {bad}");
        }
        assert!(SymValue::parse_json(r#"{"rational":"0/1","terms":{}}"#).unwrap().is_zero());
    }

    #[test]
    fn atom_names_round_trip() {
        for a in [
            ConstAtom::PiPow(1),
            ConstAtom::PiPow(12),
            ConstAtom::Ln2,
            ConstAtom::PiLn2,
            ConstAtom::Catalan,
            ConstAtom::Seed(2),
            ConstAtom::Seed(40),
        ] {
            assert_eq!(a.to_string().parse::<ConstAtom>().unwrap(), a);
        }
    }

    fn arb_atom() -> impl Strategy<Value = ConstAtom> {
        prop_oneof![
            (1u32..6).prop_map(ConstAtom::PiPow),
            Just(ConstAtom::Ln2),
            Just(ConstAtom::PiLn2),
            Just(ConstAtom::Catalan),
            (2u32..6).prop_map(ConstAtom::Seed),
        ]
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_value() -> impl Strategy<Value = SymValue> {
        (arb_rational(), prop::collection::vec((arb_atom(), arb_rational()), 0..6)).prop_map(|(r, ts)| {
            ts.into_iter().fold(SymValue::from_rational(r), |acc, (a, c)| &acc + &SymValue::term(a, c))
        })
    }

    proptest! {
        #[test]
        fn add_is_commutative_and_associative(a in arb_value(), b in arb_value(), c in arb_value()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a + &b).is_canonical());
        }

        #[test]
        fn scale_distributes(a in arb_value(), b in arb_value(), k in arb_rational()) {
            let lhs = (&a + &b).scale(&k);
            let rhs = &a.scale(&k) + &b.scale(&k);
            prop_assert!(lhs.is_canonical());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn json_round_trip(a in arb_value()) {
            prop_assert_eq!(SymValue::parse_json(&a.to_json()).unwrap(), a);
        }
    }
}
