//! Text, LaTeX and CSV renderings of exact values.

use num_traits::{One, Signed, Zero};
use tanint::{ConstAtom, Rational, SymValue};

/// Display order: π-powers descending, the rational part, then ln 2, π ln 2,
/// G and the seeds.
fn ordered_terms(v: &SymValue) -> Vec<(Option<ConstAtom>, Rational)> {
    let mut pis: Vec<_> = v.terms().filter(|(a, _)| matches!(a, ConstAtom::PiPow(_))).collect();
    pis.sort_by(|a, b| b.0.cmp(a.0));
    let mut out: Vec<(Option<ConstAtom>, Rational)> = pis.into_iter().map(|(a, c)| (Some(*a), c.clone())).collect();
    if !v.rational_part().is_zero() {
        out.push((None, v.rational_part().clone()));
    }
    out.extend(v.terms().filter(|(a, _)| !matches!(a, ConstAtom::PiPow(_))).map(|(a, c)| (Some(*a), c.clone())));
    out
}

fn text_atom(a: ConstAtom) -> String {
    match a {
        ConstAtom::PiPow(1) => "pi".into(),
        _ => a.to_string(),
    }
}

fn latex_atom(a: ConstAtom) -> String {
    match a {
        ConstAtom::PiPow(1) => r"\pi".into(),
        ConstAtom::PiPow(j) if j < 10 => format!(r"\pi^{j}"),
        ConstAtom::PiPow(j) => format!(r"\pi^{{{j}}}"),
        ConstAtom::Ln2 => r"\ln 2".into(),
        ConstAtom::PiLn2 => r"\pi\ln 2".into(),
        ConstAtom::Catalan => "G".into(),
        ConstAtom::Seed(q) => format!("S_{{{q}}}"),
    }
}

/// `|c|·atom` in plain text, e.g. `13*pi/60`, `ln2/2`, `3/4`.
fn text_magnitude(c: &Rational, atom: Option<ConstAtom>) -> String {
    let (num, den) = (c.numer().abs(), c.denom());
    let head = match atom {
        None => num.to_string(),
        Some(a) if num.is_one() => text_atom(a),
        Some(a) => format!("{num}*{}", text_atom(a)),
    };
    if den.is_one() {
        head
    } else {
        format!("{head}/{den}")
    }
}

fn latex_magnitude(c: &Rational, atom: Option<ConstAtom>) -> String {
    let (num, den) = (c.numer().abs(), c.denom());
    let head = match atom {
        None => num.to_string(),
        Some(a) if num.is_one() => latex_atom(a),
        Some(a) => format!("{num}{}", latex_atom(a)),
    };
    if den.is_one() {
        head
    } else {
        format!(r"\frac{{{head}}}{{{den}}}")
    }
}

/// `-pi^2/32 + pi/4 - ln2/2`
pub fn text(v: &SymValue) -> String {
    let terms = ordered_terms(v);
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (atom, c)) in terms.iter().enumerate() {
        let body = text_magnitude(c, *atom);
        match (i, c.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&body);
    }
    s
}

/// `-\frac{\pi^2}{32}+\frac{\pi}{4}-\frac{\ln 2}{2}`
pub fn latex(v: &SymValue) -> String {
    let terms = ordered_terms(v);
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (atom, c)) in terms.iter().enumerate() {
        if c.is_negative() {
            s.push('-');
        } else if i > 0 {
            s.push('+');
        }
        s.push_str(&latex_magnitude(c, *atom));
    }
    s
}

/// Quote a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "n,p,term,coefficient";

/// One `n,p,term,coefficient` row per nonzero coefficient, with terms named
/// as in the JSON schema; the rational part is the term `1`. Zero renders
/// as a single `1,0` row.
pub fn csv_rows(n: u32, p: u32, v: &SymValue) -> Vec<String> {
    let terms = ordered_terms(v);
    if terms.is_empty() {
        return vec![format!("{n},{p},1,0")];
    }
    terms
        .iter()
        .map(|(atom, c)| {
            let term = atom.map_or_else(|| "1".to_string(), |a| a.to_string());
            format!("{n},{p},{},{c}", csv_field(&term))
        })
        .collect()
}
