//! Integrals reducible to the family.
//!
//! `J_n = ∫₀^{π/4} tanⁿx/(1−x) dx` expands through the geometric series of
//! `1/(1−x)` into `Σ_i I_n^(i)`. Since `0 ≤ x^i ≤ (π/4)^i` on the domain, the
//! tail after `k` terms lies in `[0, (π/4)^k/(1−π/4) · I_n]`, which turns a
//! truncated sum into a two-sided enclosure.
//!
//! `L_n = ∫₀¹ arctanⁿx dx` becomes `∫₀^{π/4} uⁿ(1 + tan²u) du` under
//! `x = tan u`, i.e. `(π/4)^{n+1}/(n+1) + I_2^(n)`.

use crate::engine::{base_i0, tan_power_integral, Engine};
use crate::error::SeriesError;
use crate::oracle::{eval_numeric, NumericContext};
use crate::par::*;
use crate::real::Real;
use crate::symvalue::{ConstAtom, SymValue};

/// A closed interval guaranteed to contain the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Real,
    pub hi: Real,
    /// Number of series terms summed.
    pub terms_used: u32,
}

impl Enclosure {
    pub fn width(&self) -> Real {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Real) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Worst-case absolute error of `eval_numeric(v)`: each constant is good to
/// `unit` (absolute, with magnitude at most 4), and each product and the
/// rational conversion add at most one more `unit`.
fn eval_error_bound(v: &SymValue, unit: &Real) -> Real {
    let bits = unit.bits();
    let mut weight = Real::one(bits);
    for (atom, c) in v.terms() {
        let magnitude = match atom {
            ConstAtom::PiPow(j) => Real::from_int(4, bits).powi(*j),
            _ => Real::one(bits),
        };
        let c_abs = Real::from_ratio(&num_traits::Signed::abs(c), bits);
        weight = &(&weight + &(&c_abs * &magnitude)) + &Real::one(bits);
    }
    &weight * unit
}

/// Enclosure of `J_n` of width below `eps`.
///
/// Terms are summed at the context's working precision; the rounding error of
/// the partial sum is bounded explicitly and added to both ends. Fails with
/// [`SeriesError::InsufficientDigits`] when that bound reaches `eps/10`.
pub fn j_series(engine: &Engine, n: u32, eps: f64, ctx: &NumericContext) -> Result<Enclosure, SeriesError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(SeriesError::NonPositiveEps(eps));
    }
    let eps_r = ctx.from_f64(eps).expect("finite");
    let eps_tenth = eps_r.div_int(10);
    let unit = ctx.pow10_neg(ctx.digits() - 1);
    let bits = ctx.bits();
    let one = Real::one(bits);

    if unit >= eps_tenth {
        return Err(SeriesError::InsufficientDigits { digits: ctx.digits(), eps, bound: unit.to_sig_string(3) });
    }

    let quarter_pi = ctx.quarter_pi();
    let i_n = eval_numeric(&tan_power_integral(n), ctx)?;
    let tail_scale = &i_n / &(&one - &quarter_pi);
    // T_k = (π/4)^k I_n / (1 − π/4), padded upward for rounding
    let tail = |k: u32| -> Real {
        let t = &quarter_pi.powi(k) * &tail_scale;
        &(&t + &t.abs().shr(40)) + &unit
    };

    // Smallest k with T_k < eps, ignoring rounding; refined below.
    let mut k = 0u32;
    while tail(k) >= eps_r {
        k += 1;
    }

    let terms: Vec<SymValue> = (0..k).map(|i| (*engine.compute(n, i)).clone()).collect();
    let atoms: Vec<ConstAtom> = terms.iter().flat_map(|v| v.terms().map(|(a, _)| *a)).collect();
    ctx.warm(&atoms)?;
    let evaluated: Vec<(Real, Real)> = terms
        .par_iter()
        .map(|v| Ok((eval_numeric(v, ctx)?, eval_error_bound(v, &unit))))
        .collect::<Result<_, SeriesError>>()?;

    let mut sum = Real::zero(bits);
    let mut bound = Real::zero(bits);
    for (value, err) in &evaluated {
        sum = &sum + value;
        bound = &bound + err;
    }
    loop {
        if bound >= eps_tenth {
            return Err(SeriesError::InsufficientDigits { digits: ctx.digits(), eps, bound: bound.to_sig_string(3) });
        }
        let t = tail(k);
        if (&t + &bound.mul_int(2)) < eps_r {
            return Ok(Enclosure { lo: &sum - &bound, hi: &(&sum + &t) + &bound, terms_used: k });
        }
        let v = engine.compute(n, k);
        sum = &sum + &eval_numeric(&v, ctx)?;
        bound = &bound + &eval_error_bound(&v, &unit);
        k += 1;
    }
}

/// `L_n = ∫₀¹ arctanⁿx dx` exactly.
pub fn l_integral(engine: &Engine, n: u32) -> SymValue {
    &base_i0(n) + &*engine.compute(2, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{quad_natural, Integrand};
    use crate::symvalue::{ratio, Rational};
    use num_traits::One;

    // −ln(1 − π/4)
    const J0: &str = "1.5389708905623671268807831692664177328";

    #[test]
    fn l_integral_examples() {
        let e = Engine::new();
        let l0 = l_integral(&e, 0);
        assert!(l0.is_rational());
        assert_eq!(l0.rational_part(), &Rational::one());
        let l1 = &SymValue::term(ConstAtom::PiPow(1), ratio(1, 4)) + &SymValue::term(ConstAtom::Ln2, ratio(-1, 2));
        assert_eq!(l_integral(&e, 1), l1);
        let l2 = [
            SymValue::term(ConstAtom::PiPow(2), ratio(1, 16)),
            SymValue::term(ConstAtom::Catalan, ratio(-1, 1)),
            SymValue::term(ConstAtom::PiLn2, ratio(1, 4)),
        ]
        .iter()
        .fold(SymValue::zero(), |a, b| &a + b);
        assert_eq!(l_integral(&e, 2), l2);
    }

    #[test]
    fn l_integral_numerics() {
        let ctx = NumericContext::new(30).unwrap();
        let e = Engine::new();
        for (n, lead) in [(1, "0.43882"), (2, "0.24528")] {
            let v = eval_numeric(&l_integral(&e, n), &ctx).unwrap();
            assert_eq!(v.to_sig_string(5), lead);
            let q = quad_natural(&Integrand::ArctanPow { n }, &ctx).unwrap();
            assert!((&v - &q).abs() < ctx.pow10_neg(25));
        }
    }

    #[test]
    fn j0_contains_closed_form() {
        let ctx = NumericContext::new(30).unwrap();
        let e = Engine::new();
        let enc = j_series(&e, 0, 1e-10, &ctx).unwrap();
        assert!(enc.width() < ctx.from_f64(1e-10).unwrap());
        assert!(enc.contains(&Real::parse_decimal(J0, ctx.bits()).unwrap()));
    }

    #[test]
    fn huge_tolerance_uses_no_terms() {
        let ctx = NumericContext::new(20).unwrap();
        let e = Engine::new();
        let enc = j_series(&e, 0, 10.0, &ctx).unwrap();
        assert_eq!(enc.terms_used, 0);
        let j0 = Real::parse_decimal(J0, ctx.bits()).unwrap();
        assert!(enc.contains(&j0));
    }

    #[test]
    fn bad_inputs() {
        let ctx = NumericContext::new(15).unwrap();
        let e = Engine::new();
        assert!(matches!(j_series(&e, 1, 0.0, &ctx), Err(SeriesError::NonPositiveEps(_))));
        assert!(matches!(j_series(&e, 1, -1.0, &ctx), Err(SeriesError::NonPositiveEps(_))));
        assert!(matches!(j_series(&e, 1, f64::NAN, &ctx), Err(SeriesError::NonPositiveEps(_))));
        assert!(matches!(j_series(&e, 1, 1e-14, &ctx), Err(SeriesError::InsufficientDigits { .. })));
    }

    #[test]
    fn refinement_is_monotone() {
        let ctx = NumericContext::new(30).unwrap();
        let e = Engine::new();
        let mut prev: Option<Enclosure> = None;
        for eps in [1e-3, 1e-6, 1e-9] {
            let enc = j_series(&e, 3, eps, &ctx).unwrap();
            if let Some(p) = &prev {
                assert!(enc.terms_used >= p.terms_used);
                assert!(enc.width() <= p.width());
            }
            prev = Some(enc);
        }
    }
}
