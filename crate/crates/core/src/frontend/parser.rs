use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ParseError;
use crate::graded::{DiffPolynomial, Geometry, MultiIndex, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, line: usize, column: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = column + i;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned {
                tok,
                line,
                column: col,
            });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse().expect("ascii digits");
            out.push(Spanned {
                tok: Tok::Number(value),
                line,
                column: col,
            });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.')
            {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                column: col,
            });
        } else {
            return Err(ParseError::new(
                line,
                col,
                format!("unexpected character `{c}`"),
            ));
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: column + chars.len(),
    });
    Ok(out)
}

/// Names visible to the parser besides the built-in generators.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub(crate) lets: BTreeMap<String, DiffPolynomial>,
    pub(crate) slots: BTreeMap<String, u32>,
}

impl Scope {
    pub fn is_defined(&self, name: &str) -> bool {
        self.lets.contains_key(name) || self.slots.contains_key(name)
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    geometry: Geometry,
    scope: &'a Scope,
}

/// Parses an expression starting at the given line and column (both 1-based).
pub(crate) fn parse_at(
    text: &str,
    geometry: Geometry,
    scope: &Scope,
    line: usize,
    column: usize,
) -> Result<DiffPolynomial, ParseError> {
    let toks = lex(text, line, column)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        geometry,
        scope,
    };
    let value = parser.expr()?;
    match &parser.peek().tok {
        Tok::End => Ok(value),
        Tok::RParen => Err(parser.error_here("unbalanced `)`")),
        other => Err(parser.error_here(format!("unexpected {}", describe(other)))),
    }
}

/// Parses an expression over the given geometry with no user names.
pub fn parse(text: &str, geometry: Geometry) -> Result<DiffPolynomial, ParseError> {
    parse_at(text, geometry, &Scope::default(), 1, 1)
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Number(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("symbol `{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::new(t.line, t.column, message)
    }

    fn expr(&mut self) -> Result<DiffPolynomial, ParseError> {
        let negate = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc += self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffPolynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Number(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(self.error_here("expected `*` between factors"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DiffPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        let Tok::Number(exp) = t.tok else {
            return Err(ParseError::new(
                t.line,
                t.column,
                "expected a natural exponent after `^`",
            ));
        };
        let exp: u32 = exp
            .try_into()
            .map_err(|_| ParseError::new(t.line, t.column, "exponent too large"))?;
        let mut acc = DiffPolynomial::one();
        for _ in 0..exp {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<DiffPolynomial, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Number(num) => {
                if self.peek().tok != Tok::Slash {
                    return Ok(DiffPolynomial::constant(Rational::from_integer(num)));
                }
                self.bump();
                let d = self.bump();
                match d.tok {
                    Tok::Number(den) if !den.is_zero() => {
                        Ok(DiffPolynomial::constant(Rational::new(num, den)))
                    }
                    Tok::Number(_) => Err(ParseError::new(d.line, d.column, "zero denominator")),
                    _ => Err(ParseError::new(
                        d.line,
                        d.column,
                        "expected a denominator after `/`",
                    )),
                }
            }
            Tok::Ident(name) => self.resolve(&name, t.line, t.column),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(ParseError::new(
                        close.line,
                        close.column,
                        "unbalanced `(`: expected `)`",
                    ));
                }
                Ok(inner)
            }
            Tok::RParen => Err(ParseError::new(t.line, t.column, "unbalanced `)`")),
            other => Err(ParseError::new(
                t.line,
                t.column,
                format!("unexpected {}", describe(&other)),
            )),
        }
    }

    fn resolve(
        &self,
        ident: &str,
        line: usize,
        column: usize,
    ) -> Result<DiffPolynomial, ParseError> {
        let err = |msg: String| ParseError::new(line, column, msg);
        let (head, suffix) = match ident.split_once('_') {
            Some((h, s)) => (h, Some(s)),
            None => (ident, None),
        };
        let (name, fiber) = match head.split_once('.') {
            Some((n, f)) => (n, Some(f)),
            None => (head, None),
        };
        let index = match suffix {
            Some(s) => self.derivative_suffix(s).map_err(err)?,
            None => MultiIndex::zero(),
        };

        if let Some(density) = self.scope.lets.get(name) {
            if fiber.is_some() {
                return Err(err(format!(
                    "`{name}` is a definition and takes no fiber index"
                )));
            }
            return Ok(density.total_derivative_multi(&index));
        }
        if let Some(&slot) = self.scope.slots.get(name) {
            let alpha = self.fiber_index(fiber, name).map_err(err)?;
            return Ok(DiffPolynomial::p(slot, alpha, index));
        }

        let letters = name.trim_end_matches(|c: char| c.is_ascii_digit());
        let digits = &name[letters.len()..];
        let number = |what: &str| -> Result<Option<usize>, ParseError> {
            if digits.is_empty() {
                return Ok(None);
            }
            digits
                .parse::<usize>()
                .map(Some)
                .map_err(|_| err(format!("bad {what} index in `{name}`")))
        };
        match letters {
            "x" => {
                if suffix.is_some() || fiber.is_some() {
                    return Err(err(format!("base variable `{name}` takes no indices")));
                }
                let dim = match number("base")? {
                    None if self.geometry.n == 1 => 0,
                    None => return Err(err("write x1..xn when n > 1".into())),
                    Some(i) if (1..=self.geometry.n).contains(&i) => i - 1,
                    Some(i) => {
                        return Err(err(format!(
                            "base variable x{i} outside n = {}",
                            self.geometry.n
                        )))
                    }
                };
                Ok(DiffPolynomial::x_pow(dim, 1))
            }
            "q" | "b" => {
                if fiber.is_some() {
                    return Err(err(format!(
                        "write `{letters}<α>` for the fiber index of `{name}`"
                    )));
                }
                let alpha = match number("fiber")? {
                    None if self.geometry.m == 1 => 0,
                    None => return Err(err(format!("`{letters}` needs a fiber index when m > 1"))),
                    Some(a) if (1..=self.geometry.m).contains(&a) => a - 1,
                    Some(a) => {
                        return Err(err(format!("fiber {a} outside m = {}", self.geometry.m)))
                    }
                };
                Ok(if letters == "q" {
                    DiffPolynomial::q(alpha, index)
                } else {
                    DiffPolynomial::b(alpha, index)
                })
            }
            "p" => {
                let slot = match number("slot")? {
                    None => return Err(err("covector slots are written p1, p2, …".into())),
                    Some(j) if (1..=self.geometry.s).contains(&j) => j as u32,
                    Some(j) => {
                        return Err(err(format!(
                            "covector slot p{j} outside s = {}",
                            self.geometry.s
                        )))
                    }
                };
                let alpha = self.fiber_index(fiber, name).map_err(err)?;
                Ok(DiffPolynomial::p(slot, alpha, index))
            }
            _ => Err(err(format!("unknown symbol `{name}`"))),
        }
    }

    fn fiber_index(&self, fiber: Option<&str>, name: &str) -> Result<usize, String> {
        match fiber {
            None if self.geometry.m == 1 => Ok(0),
            None => Err(format!("`{name}` needs a fiber index `.α` when m > 1")),
            Some(f) => match f.parse::<usize>() {
                Ok(a) if (1..=self.geometry.m).contains(&a) => Ok(a - 1),
                Ok(a) => Err(format!("fiber {a} outside m = {}", self.geometry.m)),
                Err(_) => Err(format!("bad fiber index `{f}`")),
            },
        }
    }

    fn derivative_suffix(&self, suffix: &str) -> Result<MultiIndex, String> {
        let n = self.geometry.n;
        let mut counts = vec![0u32; n];
        let chars: Vec<char> = suffix.chars().collect();
        if chars.is_empty() {
            return Err("empty derivative suffix".into());
        }
        let mut i = 0;
        while i < chars.len() {
            if chars[i] != 'x' {
                return Err(format!(
                    "derivative suffix `{suffix}` may only name base variables"
                ));
            }
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let dim = if start == i {
                if n != 1 {
                    return Err(format!("write x1..x{n} in derivative suffix `{suffix}`"));
                }
                0
            } else {
                let d: usize = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| format!("bad derivative suffix `{suffix}`"))?;
                if d == 0 || d > n {
                    return Err(format!("x{d} in `{suffix}` outside n = {n}"));
                }
                d - 1
            };
            counts[dim] += 1;
        }
        Ok(MultiIndex::from_counts(counts))
    }
}
