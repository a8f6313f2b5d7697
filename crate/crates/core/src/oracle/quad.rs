//! Gauss–Legendre quadrature at arbitrary precision.
//!
//! Rules are built by Newton iteration on `P_N` with progressively doubled
//! working precision and cached per `(N, bits)`. [`integrate`] doubles `N`
//! until two successive rules agree to the requested tolerance. Every
//! integrand in scope is analytic on a neighbourhood of its closed interval,
//! so convergence is geometric.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{OracleError, ParseError};
use crate::par::*;
use crate::real::functions::{atan, cos, ln, tan};
use crate::real::Real;

const RULE_GUARD: u32 = 16;
pub const START_NODES: usize = 16;
pub const MAX_NODES: usize = 2048;

type RuleCache = HashMap<(usize, u32), Arc<GaussLegendre>>;

/// Positive half of an even-order Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub order: usize,
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

/// `(P_n(x), P_{n−1}(x))` by the three-term recurrence.
fn legendre_pair(n: usize, x: &Real) -> (Real, Real) {
    let mut p0 = Real::one(x.bits());
    let mut p1 = x.clone();
    for k in 1..n as i64 {
        let p2 = (&(x * &p1).mul_int(2 * k + 1) - &p0.mul_int(k)).div_int(k + 1);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn legendre_pair_f64(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// `(root, weight)` for the `i`-th positive root, descending from 1.
fn root_and_weight(n: usize, i: usize, bits: u32) -> (Real, Real) {
    let nf = n as f64;
    let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
    for _ in 0..4 {
        let (pn, pm) = legendre_pair_f64(n, x);
        let d = nf * (x * pn - pm) / (x * x - 1.0);
        x -= pn / d;
    }
    let w = bits + RULE_GUARD;
    let mut prec = 48u32;
    let mut xr = Real::from_f64(x, prec).expect("finite guess");
    let newton = |xr: &Real| -> (Real, Real) {
        let (pn, pm) = legendre_pair(n, xr);
        let one = Real::one(xr.bits());
        let d = (&(xr * &pn) - &pm).mul_int(n as i64) / (&(xr * xr) - &one);
        (xr - &(&pn / &d), d)
    };
    loop {
        prec = (prec * 2).min(w);
        xr = newton(&xr.with_bits(prec)).0;
        if prec == w {
            break;
        }
    }
    // one more step at full width, then the weight from the derivative
    let (x_final, _) = newton(&xr);
    let (_, d) = newton(&x_final);
    let one = Real::one(w);
    let weight = Real::from_int(2, w) / &(&(&one - &(&x_final * &x_final)) * &(&d * &d));
    (x_final.with_bits(bits), weight.with_bits(bits))
}

impl GaussLegendre {
    pub fn new(order: usize, bits: u32) -> Self {
        assert!(order >= 2 && order.is_multiple_of(2), "order must be even and at least 2");
        let (nodes, weights) = (0..order / 2)
            .into_par_iter()
            .map(|i| root_and_weight(order, i, bits))
            .collect::<Vec<_>>()
            .into_iter()
            .unzip();
        GaussLegendre { order, nodes, weights }
    }

    /// Shared instance for `(order, bits)`.
    pub fn cached(order: usize, bits: u32) -> Arc<GaussLegendre> {
        static RULES: OnceLock<Mutex<RuleCache>> = OnceLock::new();
        let rules = RULES.get_or_init(Default::default);
        if let Some(r) = rules.lock().expect("rule cache poisoned").get(&(order, bits)) {
            return r.clone();
        }
        // Built outside the lock; a concurrent duplicate is identical.
        let rule = Arc::new(GaussLegendre::new(order, bits));
        rules.lock().expect("rule cache poisoned").entry((order, bits)).or_insert(rule).clone()
    }

    pub fn integrate<F>(&self, f: F, a: &Real, b: &Real) -> Real
    where
        F: Fn(&Real) -> Real + Sync,
    {
        let mid = (a + b).shr(1);
        let half = (b - a).shr(1);
        let parts: Vec<Real> = (0..self.nodes.len())
            .into_par_iter()
            .map(|i| {
                let dx = &half * &self.nodes[i];
                let pair = &f(&(&mid + &dx)) + &f(&(&mid - &dx));
                &self.weights[i] * &pair
            })
            .collect();
        // fixed-point sums are exact, so the result does not depend on the
        // evaluation order
        let total = parts.iter().fold(Real::zero(a.bits()), |acc, t| &acc + t);
        &total * &half
    }
}

/// Integrands supported by the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Integrand {
    One,
    /// `x^p tanⁿx`
    PowTan {
        p: u32,
        n: u32,
    },
    /// `tanⁿx / (1 − x)`
    TanOverOneMinusX {
        n: u32,
    },
    /// `arctanⁿx`
    ArctanPow {
        n: u32,
    },
    /// `ln(cos x)`
    LnCos,
    /// `arctan(x)/x`, extended by 1 at the origin
    ArctanOverX,
}

impl Integrand {
    pub fn eval(&self, x: &Real) -> Real {
        let bits = x.bits();
        match *self {
            Integrand::One => Real::one(bits),
            Integrand::PowTan { p, n } => {
                let t = if n == 0 { Real::one(bits) } else { tan(x).powi(n) };
                if p == 0 {
                    t
                } else {
                    &x.powi(p) * &t
                }
            }
            Integrand::TanOverOneMinusX { n } => {
                let t = if n == 0 { Real::one(bits) } else { tan(x).powi(n) };
                &t / &(&Real::one(bits) - x)
            }
            Integrand::ArctanPow { n } => atan(x).powi(n),
            Integrand::LnCos => ln(&cos(x)),
            Integrand::ArctanOverX => {
                if x.is_zero() {
                    Real::one(bits)
                } else {
                    &atan(x) / x
                }
            }
        }
    }

    /// Upper limit of the interval the integrand is used on; the lower limit
    /// is always 0.
    pub fn upper_limit(&self, quarter_pi: &Real) -> Real {
        match self {
            Integrand::ArctanPow { .. } | Integrand::ArctanOverX => Real::one(quarter_pi.bits()),
            _ => quarter_pi.clone(),
        }
    }
}

impl fmt::Display for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrand::One => f.write_str("1"),
            Integrand::PowTan { p, n } => write!(f, "x^{p}*tan^{n}"),
            Integrand::TanOverOneMinusX { n } => write!(f, "tan^{n}/(1-x)"),
            Integrand::ArctanPow { n } => write!(f, "atan^{n}"),
            Integrand::LnCos => f.write_str("ln(cos)"),
            Integrand::ArctanOverX => f.write_str("atan/x"),
        }
    }
}

impl FromStr for Integrand {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseError::UnknownIntegrand(s.to_string());
        let num = |t: &str| t.parse::<u32>().map_err(|_| err());
        match s {
            "1" => return Ok(Integrand::One),
            "ln(cos)" => return Ok(Integrand::LnCos),
            "atan/x" => return Ok(Integrand::ArctanOverX),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("x^") {
            let (p, n) = rest.split_once("*tan^").ok_or_else(err)?;
            return Ok(Integrand::PowTan { p: num(p)?, n: num(n)? });
        }
        if let Some(rest) = s.strip_prefix("tan^") {
            let n = rest.strip_suffix("/(1-x)").ok_or_else(err)?;
            return Ok(Integrand::TanOverOneMinusX { n: num(n)? });
        }
        if let Some(n) = s.strip_prefix("atan^") {
            return Ok(Integrand::ArctanPow { n: num(n)? });
        }
        Err(err())
    }
}

/// Integrate `f` over `[a, b]` at the precision of `a`, doubling the rule
/// order from [`START_NODES`] until successive results differ by at most
/// `tol`.
pub fn integrate<F>(f: F, a: &Real, b: &Real, tol: &Real) -> Result<Real, OracleError>
where
    F: Fn(&Real) -> Real + Sync,
{
    integrate_up_to(f, a, b, tol, MAX_NODES)
}

/// [`integrate`] with an explicit cap on the rule order.
pub fn integrate_up_to<F>(f: F, a: &Real, b: &Real, tol: &Real, max_nodes: usize) -> Result<Real, OracleError>
where
    F: Fn(&Real) -> Real + Sync,
{
    let bits = a.bits();
    let mut order = START_NODES;
    let mut prev = GaussLegendre::cached(order, bits).integrate(&f, a, b);
    let mut change = None;
    while order * 2 <= max_nodes {
        order *= 2;
        let cur = GaussLegendre::cached(order, bits).integrate(&f, a, b);
        let delta = (&cur - &prev).abs();
        if &delta <= tol {
            return Ok(cur);
        }
        change = Some(delta);
        prev = cur;
    }
    Err(OracleError::NonConvergent {
        nodes: order,
        last_change: change.map_or_else(|| "n/a".to_string(), |c| c.to_sig_string(3)),
    })
}
