//! High-precision numerical ground truth.
//!
//! [`NumericContext`] fixes a decimal working precision and caches basis
//! constants. Quadrature runs with [`GUARD_DIGITS`] extra digits and stops
//! when successive Gauss–Legendre rules agree to one digit beyond the
//! requested precision.

pub mod constants;
pub mod quad;

use std::collections::HashMap;
use std::sync::RwLock;

use crate::engine::{Engine, IntegralId};
use crate::error::OracleError;
use crate::par::*;
use crate::real::{bits_for_digits, Real};
use crate::symvalue::{ConstAtom, SymValue};

pub use quad::Integrand;

pub const GUARD_DIGITS: u32 = 5;
pub const MIN_DIGITS: u32 = 15;

#[derive(Debug)]
pub struct NumericContext {
    digits: u32,
    bits: u32,
    constant_cache: RwLock<HashMap<ConstAtom, Real>>,
}

impl NumericContext {
    pub fn new(digits: u32) -> Result<Self, OracleError> {
        if digits < MIN_DIGITS {
            return Err(OracleError::PrecisionTooLow(digits));
        }
        Ok(NumericContext {
            digits,
            bits: bits_for_digits(digits + GUARD_DIGITS) + 32,
            constant_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary working precision of every [`Real`] this context produces.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `10^-k` at working precision.
    pub fn pow10_neg(&self, k: u32) -> Real {
        Real::pow10_neg(k, self.bits)
    }

    pub fn from_f64(&self, v: f64) -> Option<Real> {
        Real::from_f64(v, self.bits)
    }

    pub fn quarter_pi(&self) -> Real {
        self.pi().shr(2)
    }

    fn pi(&self) -> Real {
        self.cached(ConstAtom::PiPow(1), || Ok(constants::pi_constant(self.bits))).expect("pi is infallible")
    }

    fn cached(&self, atom: ConstAtom, make: impl FnOnce() -> Result<Real, OracleError>) -> Result<Real, OracleError> {
        if let Some(v) = self.constant_cache.read().expect("cache poisoned").get(&atom) {
            return Ok(v.clone());
        }
        let v = make()?;
        let mut cache = self.constant_cache.write().expect("cache poisoned");
        Ok(cache.entry(atom).or_insert(v).clone())
    }

    /// Evaluate the given atoms in parallel so later lookups hit the cache.
    pub fn warm(&self, atoms: &[ConstAtom]) -> Result<(), OracleError> {
        let todo: Vec<ConstAtom> = {
            let cache = self.constant_cache.read().expect("cache poisoned");
            let mut v: Vec<_> = atoms.iter().copied().filter(|a| !cache.contains_key(a)).collect();
            v.sort();
            v.dedup();
            v
        };
        todo.par_iter().try_for_each(|a| const_numeric(*a, self).map(|_| ()))
    }
}

/// Numeric value of a basis constant at the context's precision.
pub fn const_numeric(atom: ConstAtom, ctx: &NumericContext) -> Result<Real, OracleError> {
    let bits = ctx.bits;
    match atom {
        ConstAtom::PiPow(1) => Ok(ctx.pi()),
        ConstAtom::PiPow(j) => ctx.cached(atom, || Ok(ctx.pi().powi(j))),
        ConstAtom::Ln2 => ctx.cached(atom, || Ok(constants::ln2_constant(bits))),
        ConstAtom::PiLn2 => ctx.cached(atom, || Ok(&ctx.pi() * &const_numeric(ConstAtom::Ln2, ctx)?)),
        ConstAtom::Catalan => ctx.cached(atom, || Ok(constants::catalan(bits))),
        ConstAtom::Seed(q) => {
            ctx.cached(atom, || quad(&Integrand::PowTan { p: q, n: 1 }, &Real::zero(bits), &ctx.quarter_pi(), ctx))
        }
    }
}

/// `∫_a^b f` to the context's precision.
pub fn quad(f: &Integrand, a: &Real, b: &Real, ctx: &NumericContext) -> Result<Real, OracleError> {
    let tol = ctx.pow10_neg(ctx.digits + 1);
    quad::integrate(|x| f.eval(x), &a.with_bits(ctx.bits), &b.with_bits(ctx.bits), &tol)
}

/// `∫` of `f` over its natural interval (`[0, π/4]`, or `[0, 1]` for the
/// arctangent integrands).
pub fn quad_natural(f: &Integrand, ctx: &NumericContext) -> Result<Real, OracleError> {
    let upper = f.upper_limit(&ctx.quarter_pi());
    quad(f, &Real::zero(ctx.bits), &upper, ctx)
}

/// `rational_part + Σ coeff · const(atom)`.
pub fn eval_numeric(v: &SymValue, ctx: &NumericContext) -> Result<Real, OracleError> {
    let mut acc = Real::from_ratio(v.rational_part(), ctx.bits);
    for (atom, c) in v.terms() {
        acc = &acc + &const_numeric(*atom, ctx)?.mul_ratio(c);
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub id: IntegralId,
    pub exact_numeric: Real,
    pub quadrature: Real,
    pub abs_diff: Real,
    pub tolerance: Real,
    pub pass: bool,
}

/// Compare every `compute(n, p)` for `n ≤ n_max`, `p ≤ p_max` against direct
/// quadrature of `x^p tanⁿx`. Mismatches are reported, not raised.
pub fn verify(
    engine: &Engine,
    n_max: u32,
    p_max: u32,
    ctx: &NumericContext,
    tol: &Real,
) -> Result<Vec<VerifyReport>, OracleError> {
    let tol = tol.with_bits(ctx.bits);
    if tol <= ctx.pow10_neg(ctx.digits).mul_int(10) {
        return Err(OracleError::ToleranceTooTight { tol: tol.to_sig_string(3) });
    }
    let exact = engine.table(n_max, p_max);
    let atoms: Vec<ConstAtom> = exact.iter().flat_map(|(_, v)| v.terms().map(|(a, _)| *a)).collect();
    ctx.warm(&atoms)?;
    exact
        .par_iter()
        .map(|(id, v)| {
            let exact_numeric = eval_numeric(v, ctx)?;
            let quadrature = quad_natural(&Integrand::PowTan { p: id.p, n: id.n }, ctx)?;
            let abs_diff = (&exact_numeric - &quadrature).abs();
            let pass = abs_diff <= tol;
            Ok(VerifyReport { id: *id, exact_numeric, quadrature, abs_diff, tolerance: tol.clone(), pass })
        })
        .collect()
}
