//! Exact evaluation of `I_n^(p) = ∫₀^{π/4} x^p tanⁿx dx`.
//!
//! Integrating `x^p (tan²x + 1) tan^{n−2}x` by parts gives, for `n ≥ 2`,
//!
//! ```text
//! I_n^(p) = (π/4)^p/(n−1) − p/(n−1) · I_{n−1}^(p−1) − I_{n−2}^(p)
//! ```
//!
//! with `I_0^(p) = (π/4)^{p+1}/(p+1)` and `I_1^(p) = S_p`. The middle term
//! vanishes for `p = 0`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::symvalue::{ratio, ConstAtom, Rational, SymValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegralId {
    pub n: u32,
    pub p: u32,
}

impl IntegralId {
    pub fn new(n: u32, p: u32) -> Self {
        IntegralId { n, p }
    }
}

impl fmt::Display for IntegralId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_{}^({})", self.n, self.p)
    }
}

/// Sign convention for the `I_{n−1}^(p−1)` term of the step recurrence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Recurrence {
    /// `− p/(n−1) · I_{n−1}^(p−1)`, the result of the integration by parts.
    #[default]
    Corrected,
    /// `+ p/(n−1) · I_{n−1}^(p−1)`. Kept only as a negative control; it does
    /// not reproduce the tabulated values.
    PlusSign,
}

/// Write-once store of computed integrals, safe for concurrent readers.
#[derive(Debug, Default)]
pub struct MemoTable {
    entries: RwLock<HashMap<IntegralId, Arc<SymValue>>>,
}

impl MemoTable {
    pub fn get(&self, id: IntegralId) -> Option<Arc<SymValue>> {
        self.entries.read().expect("memo lock poisoned").get(&id).cloned()
    }

    /// Insert unless present; returns the stored entry either way.
    fn insert(&self, id: IntegralId, v: SymValue) -> Arc<SymValue> {
        let mut map = self.entries.write().expect("memo lock poisoned");
        map.entry(id).or_insert_with(|| Arc::new(v)).clone()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `(π/4)^p` as a symbolic value (`1` for `p = 0`).
pub fn quarter_pi_pow(p: u32) -> SymValue {
    if p == 0 {
        SymValue::from_rational(Rational::one())
    } else {
        SymValue::term(ConstAtom::PiPow(p), Rational::new(1.into(), num_bigint::BigInt::from(4u32).pow(p)))
    }
}

/// `I_0^(p) = (π/4)^{p+1}/(p+1)`.
pub fn base_i0(p: u32) -> SymValue {
    quarter_pi_pow(p + 1).scale(&ratio(1, i64::from(p) + 1))
}

/// `S_q = I_1^(q)`.
///
/// `S_0 = ln2/2`. By parts, `S_1 = (π/8) ln 2 + ∫₀^{π/4} ln(cos x) dx`, and
/// that integral equals `G/2 − (π/4) ln 2`, so `S_1 = G/2 − (π/8) ln 2`.
/// Higher seeds stay opaque.
pub fn seed_s(q: u32) -> SymValue {
    match q {
        0 => SymValue::term(ConstAtom::Ln2, ratio(1, 2)),
        1 => &SymValue::term(ConstAtom::Catalan, ratio(1, 2)) + &SymValue::term(ConstAtom::PiLn2, ratio(-1, 8)),
        _ => SymValue::atom(ConstAtom::Seed(q)),
    }
}

/// Closed form of `I_n = ∫₀^{π/4} tanⁿx dx` as a finite alternating sum:
///
/// ```text
/// I_{2k}   = (−1)^k π/4    + Σ_{l=1..k} (−1)^{l+k}/(2l−1)
/// I_{2k+1} = (−1)^k ln2/2  + Σ_{l=1..k} (−1)^{l+k}/(2l)
/// ```
pub fn tan_power_integral(n: u32) -> SymValue {
    let k = i64::from(n / 2);
    let sign = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    let odd = n % 2 == 1;
    let sum = (1..=k).fold(Rational::zero(), |acc, l| {
        let den = if odd { 2 * l } else { 2 * l - 1 };
        acc + ratio(sign(l + k), den)
    });
    let head = if odd {
        SymValue::term(ConstAtom::Ln2, ratio(sign(k), 2))
    } else {
        SymValue::term(ConstAtom::PiPow(1), ratio(sign(k), 4))
    };
    &head + &SymValue::from_rational(sum)
}

/// Harmonic number `H_n`; `Ψ(n) + γ = H_{n−1}` at positive integers.
pub fn harmonic(n: u32) -> Rational {
    (1..=i64::from(n)).fold(Rational::zero(), |acc, k| acc + ratio(1, k))
}

/// `Ψ(n) + γ` for integer `n ≥ 1`, exactly.
pub fn digamma_plus_gamma(n: u32) -> Rational {
    assert!(n >= 1, "digamma is singular at non-positive integers");
    harmonic(n - 1)
}

/// Memoizing evaluator for the whole family.
#[derive(Debug, Default)]
pub struct Engine {
    recurrence: Recurrence,
    memo: MemoTable,
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    pub fn with_recurrence(recurrence: Recurrence) -> Self {
        Engine { recurrence, memo: MemoTable::default() }
    }

    pub fn recurrence(&self) -> Recurrence {
        self.recurrence
    }

    pub fn memo(&self) -> &MemoTable {
        &self.memo
    }

    /// Exact value of `I_n^(p)`.
    ///
    /// Missing entries are filled bottom-up: stage `q = 0, 1, …, p`, and
    /// within a stage increasing `m`. Only entries in the dependency set of
    /// `(n, p)` are visited, i.e. `q ≤ p`, `m ≤ n − (p − q)` and
    /// `m − q ≡ n − p (mod 2)`. Iteration keeps the stack flat for large `n`.
    pub fn compute(&self, n: u32, p: u32) -> Arc<SymValue> {
        let id = IntegralId::new(n, p);
        if let Some(v) = self.memo.get(id) {
            return v;
        }
        for q in 0..=p {
            let lag = p - q;
            if lag > n {
                continue;
            }
            let top = n - lag;
            let mut m = top % 2;
            while m <= top {
                let here = IntegralId::new(m, q);
                if self.memo.get(here).is_none() {
                    let v = self.step(m, q);
                    self.memo.insert(here, v);
                }
                m += 2;
            }
        }
        self.memo.get(id).expect("filled above")
    }

    fn step(&self, n: u32, p: u32) -> SymValue {
        match n {
            0 => base_i0(p),
            1 => seed_s(p),
            _ => {
                let k = i64::from(n) - 1;
                let two_back = self.memo.get(IntegralId::new(n - 2, p)).expect("stage order");
                let mut v = quarter_pi_pow(p).scale(&ratio(1, k)).add_scaled(&-Rational::one(), &two_back);
                if p > 0 {
                    let diag = self.memo.get(IntegralId::new(n - 1, p - 1)).expect("stage order");
                    let c = match self.recurrence {
                        Recurrence::Corrected => ratio(-i64::from(p), k),
                        Recurrence::PlusSign => ratio(i64::from(p), k),
                    };
                    v = v.add_scaled(&c, &diag);
                }
                v
            }
        }
    }

    /// All `(n, p)` with `n ≤ n_max`, `p ≤ p_max`, ordered by `p` then `n`.
    pub fn table(&self, n_max: u32, p_max: u32) -> Vec<(IntegralId, Arc<SymValue>)> {
        (0..=p_max)
            .flat_map(|p| (0..=n_max).map(move |n| IntegralId::new(n, p)))
            .map(|id| (id, self.compute(id.n, id.p)))
            .collect()
    }

    /// Exact residual of the step recurrence at `(n, p)`, `n ≥ 2`; zero when
    /// the stored entries are consistent.
    pub fn recurrence_residual(&self, n: u32, p: u32) -> SymValue {
        assert!(n >= 2, "the step recurrence starts at n = 2");
        let k = i64::from(n) - 1;
        let mut r = &*self.compute(n, p) + &*self.compute(n - 2, p);
        if p > 0 {
            r = r.add_scaled(&ratio(i64::from(p), k), &self.compute(n - 1, p - 1));
        }
        r.add_scaled(&ratio(-1, k), &quarter_pi_pow(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(j: u32, n: i64, d: i64) -> SymValue {
        SymValue::term(ConstAtom::PiPow(j), ratio(n, d))
    }

    fn sum(parts: &[SymValue]) -> SymValue {
        parts.iter().fold(SymValue::zero(), |a, b| &a + b)
    }

    fn q(n: i64, d: i64) -> SymValue {
        SymValue::from_rational(ratio(n, d))
    }

    #[test]
    fn base_cases() {
        assert_eq!(base_i0(0), pi(1, 1, 4));
        assert_eq!(base_i0(1), pi(2, 1, 32));
        assert_eq!(base_i0(2), pi(3, 1, 192));
        assert_eq!(seed_s(0), SymValue::term(ConstAtom::Ln2, ratio(1, 2)));
        assert_eq!(seed_s(2), SymValue::atom(ConstAtom::Seed(2)));
        let s1 = seed_s(1);
        assert_eq!(s1.extract_coefficient(ConstAtom::Catalan), ratio(1, 2));
        assert_eq!(s1.extract_coefficient(ConstAtom::PiLn2), ratio(-1, 8));
    }

    #[test]
    fn tan_power_closed_form() {
        assert_eq!(tan_power_integral(0), pi(1, 1, 4));
        assert_eq!(tan_power_integral(2), &q(1, 1) + &pi(1, -1, 4));
        let ln2_half = SymValue::term(ConstAtom::Ln2, ratio(-1, 2));
        assert_eq!(tan_power_integral(3), &q(1, 2) + &ln2_half);
        assert_eq!(tan_power_integral(1), SymValue::term(ConstAtom::Ln2, ratio(1, 2)));
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(1), ratio(1, 1));
        assert_eq!(harmonic(2), ratio(3, 2));
        assert_eq!(harmonic(4), ratio(25, 12));
        assert_eq!(digamma_plus_gamma(1), Rational::zero());
        assert_eq!(digamma_plus_gamma(5), ratio(25, 12));
    }

    #[test]
    fn compute_examples() {
        let e = Engine::new();
        let ln2 = |n, d| SymValue::term(ConstAtom::Ln2, ratio(n, d));
        assert_eq!(*e.compute(2, 1), sum(&[pi(2, -1, 32), pi(1, 1, 4), ln2(-1, 2)]));
        assert_eq!(*e.compute(4, 1), sum(&[pi(2, 1, 32), pi(1, -1, 6), q(-1, 6), ln2(2, 3)]));
        let i3 = sum(&[
            pi(1, 1, 4),
            q(-1, 2),
            SymValue::term(ConstAtom::Catalan, ratio(-1, 2)),
            SymValue::term(ConstAtom::PiLn2, ratio(1, 8)),
        ]);
        assert_eq!(*e.compute(3, 1), i3);
        assert_eq!(*e.compute(0, 0), pi(1, 1, 4));
    }

    #[test]
    fn table_order_and_second_order_entry() {
        let e = Engine::new();
        let t = e.table(2, 2);
        let ids: Vec<_> = t.iter().map(|(id, _)| (id.n, id.p)).collect();
        assert_eq!(ids, vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2)]);
        // I_2^(2) = (π/4)² − 2 S_1 − I_0^(2), unfolded by hand
        let expected = sum(&[
            pi(2, 1, 16),
            SymValue::term(ConstAtom::Catalan, ratio(-1, 1)),
            SymValue::term(ConstAtom::PiLn2, ratio(1, 4)),
            pi(3, -1, 192),
        ]);
        assert_eq!(*t[8].1, expected);
        assert_eq!(e.table(0, 0).len(), 1);
    }

    #[test]
    fn dependency_set_only() {
        let e = Engine::new();
        e.compute(6, 2);
        // (6,2) depends on (4,2),(5,1),(3,1),(4,0),(2,0),(0,*),(1,*) of one parity class
        assert!(e.memo().get(IntegralId::new(5, 2)).is_none());
        assert!(e.memo().get(IntegralId::new(5, 1)).is_some());
        assert!(e.memo().get(IntegralId::new(4, 1)).is_none());
    }

    #[test]
    fn recurrence_residual_vanishes() {
        let e = Engine::new();
        for n in 2..=30 {
            for p in 0..=4 {
                assert!(e.recurrence_residual(n, p).is_zero(), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn p_zero_matches_closed_form_and_wallis_law() {
        let e = Engine::new();
        for n in 0..=60 {
            assert_eq!(*e.compute(n, 0), tan_power_integral(n));
            if n >= 2 {
                let s = &*e.compute(n, 0) + &*e.compute(n - 2, 0);
                assert_eq!(s, q(1, i64::from(n) - 1));
            }
        }
    }

    #[test]
    fn sign_patterns() {
        let e = Engine::new();
        for l in 0..=7u32 {
            let s = if l % 2 == 0 { 1 } else { -1 };
            assert_eq!(e.compute(2 * l, 1).extract_coefficient(ConstAtom::PiPow(2)), ratio(s, 32));
            assert_eq!(e.compute(2 * l + 1, 1).extract_coefficient(ConstAtom::Catalan), ratio(s, 2));
        }
    }

    #[test]
    fn recompute_is_identical() {
        let a = Engine::new();
        let first = a.compute(12, 3);
        let again = a.compute(12, 3);
        assert!(Arc::ptr_eq(&first, &again));
        let b = Engine::new();
        assert_eq!(*b.compute(12, 3), *first);
    }

    #[test]
    fn plus_sign_breaks_the_first_nontrivial_row() {
        let e = Engine::with_recurrence(Recurrence::PlusSign);
        let good = Engine::new();
        assert_eq!(e.compute(1, 1), good.compute(1, 1));
        assert_ne!(e.compute(2, 1), good.compute(2, 1));
        // the two differ by 2·I_1^(0) = ln 2
        let diff = &*e.compute(2, 1) - &*good.compute(2, 1);
        assert_eq!(diff, seed_s(0).scale(&ratio(2, 1)));
    }
}
