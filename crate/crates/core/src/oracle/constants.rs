//! Basis constants to arbitrary precision.

use crate::real::functions::{ln, ln2, pi};
use crate::real::Real;

const GUARD: u32 = 32;

/// Catalan's constant by Ramanujan's accelerated series
///
/// ```text
/// G = (π/8) ln(2 + √3) + (3/8) Σ_{k≥0} (k!)² / ((2k)! (2k+1)²)
/// ```
///
/// Terms shrink by a factor of about four, so the cost is linear in the
/// number of bits. The defining series `Σ (−1)^r/(2r+1)²` is only used as a
/// low-precision cross-check ([`catalan_by_definition`]).
pub fn catalan(bits: u32) -> Real {
    let w = bits + GUARD;
    let three = Real::from_int(3, w);
    let log_term = ln(&(&Real::from_int(2, w) + &three.sqrt()));
    let head = (&pi(w) * &log_term).shr(3);

    // a_k = (k!)² / (2k)!, a_{k+1} = a_k (k+1) / (2 (2k+1))
    let mut a = Real::one(w);
    let mut sum = Real::zero(w);
    let mut k: i64 = 0;
    while !a.is_zero() {
        sum = &sum + &a.div_int((2 * k + 1) * (2 * k + 1));
        a = a.mul_int(k + 1).div_int(2 * (2 * k + 1));
        k += 1;
    }
    let tail = sum.mul_int(3).shr(3);
    (&head + &tail).with_bits(bits)
}

/// Partial sums of `Σ_{r≥0} (−1)^r/(2r+1)²`, averaged over the last two
/// terms to cancel the leading oscillation. Error is roughly `1/terms³`.
pub fn catalan_by_definition(terms: usize) -> f64 {
    let mut s = 0.0f64;
    let mut prev = 0.0f64;
    for r in 0..terms {
        prev = s;
        let d = (2 * r + 1) as f64;
        let t = 1.0 / (d * d);
        s += if r % 2 == 0 { t } else { -t };
    }
    0.5 * (s + prev)
}

pub fn pi_constant(bits: u32) -> Real {
    pi(bits)
}

pub fn ln2_constant(bits: u32) -> Real {
    ln2(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::bits_for_digits;

    const CATALAN_60: &str = "0.915965594177219015054603514932384110774149374281672134266498";

    #[test]
    fn catalan_matches_reference_digits() {
        let g = catalan(bits_for_digits(70));
        assert_eq!(g.to_fixed_string(60), CATALAN_60);
        assert_eq!(catalan(bits_for_digits(20)).to_fixed_string(15), "0.915965594177219");
    }

    #[test]
    fn defining_series_agrees_at_low_precision() {
        let fast = catalan(64).to_f64();
        assert!((catalan_by_definition(20_000) - fast).abs() < 1e-11);
        // the raw partial sum (no averaging) is far off at the same length
        let raw: f64 = (0..20_000)
            .map(|r| {
                let d = (2 * r + 1) as f64;
                if r % 2 == 0 {
                    1.0 / (d * d)
                } else {
                    -1.0 / (d * d)
                }
            })
            .sum();
        assert!((raw - fast).abs() > 1e-10);
    }
}
