use num_traits::{One, Signed};

use crate::graded::{
    DiffPolynomial, Geometry, JetVariable, Monomial, MultiIndex, Rational, VarKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Plain,
    Latex,
}

fn plain_suffix(index: &MultiIndex, n: usize) -> String {
    if index.is_zero() {
        return String::new();
    }
    let mut s = String::from("_");
    for d in index.dims() {
        if n == 1 {
            s.push('x');
        } else {
            s.push_str(&format!("x{}", d + 1));
        }
    }
    s
}

fn latex_derivatives(index: &MultiIndex, n: usize) -> String {
    index
        .dims()
        .into_iter()
        .map(|d| {
            if n == 1 {
                "x".to_string()
            } else {
                format!("x_{{{}}}", d + 1)
            }
        })
        .collect()
}

/// Name of a generator in the input grammar.
pub fn variable_name(var: &JetVariable, geometry: Geometry) -> String {
    let head = match var.kind {
        VarKind::Even if geometry.m == 1 => "q".to_string(),
        VarKind::Even => format!("q{}", var.fiber + 1),
        VarKind::Odd if geometry.m == 1 => "b".to_string(),
        VarKind::Odd => format!("b{}", var.fiber + 1),
        VarKind::Slot(j) if geometry.m == 1 => format!("p{j}"),
        VarKind::Slot(j) => format!("p{j}.{}", var.fiber + 1),
    };
    head + &plain_suffix(&var.index, geometry.n)
}

/// `q^α_σ`, `b_{α,σ}`, `p^{j}_{α,σ}`; fiber labels are dropped when `m = 1`.
pub fn variable_latex(var: &JetVariable, geometry: Geometry) -> String {
    let derivs = latex_derivatives(&var.index, geometry.n);
    let lower_with_fiber = |derivs: &str| -> String {
        match (geometry.m == 1, derivs.is_empty()) {
            (true, true) => String::new(),
            (true, false) => format!("_{{{derivs}}}"),
            (false, true) => format!("_{{{}}}", var.fiber + 1),
            (false, false) => format!("_{{{},{derivs}}}", var.fiber + 1),
        }
    };
    match var.kind {
        VarKind::Even => {
            let upper = if geometry.m == 1 {
                String::new()
            } else {
                format!("^{{{}}}", var.fiber + 1)
            };
            let lower = if derivs.is_empty() {
                String::new()
            } else {
                format!("_{{{derivs}}}")
            };
            format!("q{upper}{lower}")
        }
        VarKind::Odd => format!("b{}", lower_with_fiber(&derivs)),
        VarKind::Slot(j) => format!("p^{{{j}}}{}", lower_with_fiber(&derivs)),
    }
}

fn base_name(dim: usize, geometry: Geometry, style: Style) -> String {
    match (style, geometry.n) {
        (_, 1) => "x".to_string(),
        (Style::Plain, _) => format!("x{}", dim + 1),
        (Style::Latex, _) => format!("x_{{{}}}", dim + 1),
    }
}

fn power(base: String, exp: u32, style: Style) -> String {
    match (exp, style) {
        (1, _) => base,
        (_, Style::Plain) => format!("{base}^{exp}"),
        (_, Style::Latex) if base.contains('_') || base.contains('^') => {
            format!("{{{base}}}^{{{exp}}}")
        }
        (_, Style::Latex) => format!("{base}^{{{exp}}}"),
    }
}

fn factors(m: &Monomial, geometry: Geometry, style: Style) -> Vec<String> {
    let mut out = Vec::new();
    for (dim, &exp) in m.base().iter().enumerate() {
        if exp > 0 {
            out.push(power(base_name(dim, geometry, style), exp, style));
        }
    }
    let name = |v: &JetVariable| match style {
        Style::Plain => variable_name(v, geometry),
        Style::Latex => variable_latex(v, geometry),
    };
    for (v, exp) in m.even() {
        out.push(power(name(v), *exp, style));
    }
    for v in m.odd() {
        out.push(name(v));
    }
    out
}

fn magnitude(c: &Rational, style: Style) -> String {
    let c = c.abs();
    if c.is_integer() {
        return c.numer().to_string();
    }
    match style {
        Style::Plain => format!("{}/{}", c.numer(), c.denom()),
        Style::Latex => format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom()),
    }
}

/// Renders terms in canonical order; `0` for the zero polynomial. Plain
/// output is accepted by the parser and parses back to the same polynomial.
pub fn print(f: &DiffPolynomial, geometry: Geometry, style: Style) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let (times, plus, minus) = match style {
        Style::Plain => ("*", " + ", " - "),
        Style::Latex => (" ", " + ", " - "),
    };
    let mut out = String::new();
    for (i, (m, c)) in f.terms().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(minus),
            (_, false) => out.push_str(plus),
        }
        let mut parts = Vec::new();
        if m.is_one() || !c.abs().is_one() {
            parts.push(magnitude(c, style));
        }
        parts.extend(factors(m, geometry, style));
        out.push_str(&parts.join(times));
    }
    out
}
