use super::parser::{parse_at, Scope};
use super::ParseError;
use crate::graded::{DiffPolynomial, Geometry};

/// Named densities and slot aliases over one geometry.
///
/// A session file has one declaration per line:
///
/// ```text
/// # KdV
/// geometry 1 1 4
/// let P = b*b_xxx + q*b*b_x
/// slot r 2
/// ```
#[derive(Clone, Debug)]
pub struct Session {
    geometry: Geometry,
    scope: Scope,
    order: Vec<String>,
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Whether `name` would also be read as a built-in generator.
fn is_builtin(name: &str) -> bool {
    let letters = name.trim_end_matches(|c: char| c.is_ascii_digit());
    matches!(letters, "x" | "q" | "b" | "p")
}

impl Session {
    pub fn new(geometry: Geometry) -> Self {
        Session {
            geometry,
            scope: Scope::default(),
            order: Vec::new(),
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Parses an expression in this session, on line 1.
    pub fn parse(&self, text: &str) -> Result<DiffPolynomial, ParseError> {
        parse_at(text, self.geometry, &self.scope, 1, 1)
    }

    pub fn get(&self, name: &str) -> Option<&DiffPolynomial> {
        self.scope.lets.get(name)
    }

    /// Definitions in declaration order.
    pub fn definitions(&self) -> impl Iterator<Item = (&str, &DiffPolynomial)> {
        self.order.iter().map(|n| (n.as_str(), &self.scope.lets[n]))
    }

    pub fn slot_alias(&self, name: &str) -> Option<u32> {
        self.scope.slots.get(name).copied()
    }

    fn check_new_name(&self, name: &str, line: usize, column: usize) -> Result<(), ParseError> {
        if !is_name(name) {
            return Err(ParseError::new(
                line,
                column,
                format!("`{name}` is not a valid name"),
            ));
        }
        if is_builtin(name) {
            return Err(ParseError::new(
                line,
                column,
                format!("`{name}` clashes with a built-in generator"),
            ));
        }
        if self.scope.is_defined(name) {
            return Err(ParseError::new(
                line,
                column,
                format!("`{name}` is already declared"),
            ));
        }
        Ok(())
    }

    /// Reads a session file.
    pub fn from_source(text: &str) -> Result<Session, ParseError> {
        let mut session: Option<Session> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = content.len() - trimmed.len();
            let (keyword, rest) = trimmed
                .split_once(char::is_whitespace)
                .unwrap_or((trimmed.trim_end(), ""));
            let rest_trim = rest.trim_start();
            let rest_offset = if rest_trim.is_empty() {
                content.len()
            } else {
                rest_trim.as_ptr() as usize - raw.as_ptr() as usize
            };
            let rest_col = raw[..rest_offset].chars().count() + 1;
            match keyword {
                "geometry" => {
                    if session.is_some() {
                        return Err(ParseError::new(line, indent + 1, "geometry declared twice"));
                    }
                    let nums: Result<Vec<usize>, _> =
                        rest.split_whitespace().map(str::parse).collect();
                    let geometry = match nums.as_deref() {
                        Ok([n, m, s]) => Geometry::new(*n, *m, *s)
                            .map_err(|e| ParseError::new(line, rest_col, e.to_string()))?,
                        _ => {
                            return Err(ParseError::new(
                                line,
                                rest_col,
                                "expected `geometry <n> <m> <s>`",
                            ))
                        }
                    };
                    session = Some(Session::new(geometry));
                }
                "let" | "slot" => {
                    let Some(s) = session.as_mut() else {
                        return Err(ParseError::new(
                            line,
                            indent + 1,
                            "geometry must be declared before definitions",
                        ));
                    };
                    if keyword == "let" {
                        s.read_let(rest.trim_start(), line, rest_col)?;
                    } else {
                        s.read_slot(rest.trim_start(), line, rest_col)?;
                    }
                }
                other => {
                    return Err(ParseError::new(
                        line,
                        indent + 1,
                        format!("unknown declaration `{other}`"),
                    ))
                }
            }
        }
        session.ok_or_else(|| ParseError::new(1, 1, "missing geometry declaration"))
    }

    fn read_let(&mut self, rest: &str, line: usize, column: usize) -> Result<(), ParseError> {
        let Some((name, expr)) = rest.split_once('=') else {
            return Err(ParseError::new(
                line,
                column,
                "expected `let <name> = <expression>`",
            ));
        };
        let name = name.trim();
        self.check_new_name(name, line, column)?;
        let expr_col = column + rest.len() - expr.len();
        let density = parse_at(expr, self.geometry, &self.scope, line, expr_col)?;
        self.define(name, density);
        Ok(())
    }

    fn read_slot(&mut self, rest: &str, line: usize, column: usize) -> Result<(), ParseError> {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        let [name, index] = parts.as_slice() else {
            return Err(ParseError::new(line, column, "expected `slot <name> <j>`"));
        };
        self.check_new_name(name, line, column)?;
        let j: usize = index
            .parse()
            .map_err(|_| ParseError::new(line, column, format!("bad slot number `{index}`")))?;
        if j == 0 || j > self.geometry.s {
            return Err(ParseError::new(
                line,
                column,
                format!("covector slot {j} outside s = {}", self.geometry.s),
            ));
        }
        if let Some((other, _)) = self.scope.slots.iter().find(|(_, &k)| k as usize == j) {
            return Err(ParseError::new(
                line,
                column,
                format!("slot {j} already named `{other}`"),
            ));
        }
        self.scope.slots.insert(name.to_string(), j as u32);
        Ok(())
    }

    /// Adds or replaces a definition.
    pub fn define(&mut self, name: &str, density: DiffPolynomial) {
        if self.scope.lets.insert(name.to_string(), density).is_none() {
            self.order.push(name.to_string());
        }
    }
}
