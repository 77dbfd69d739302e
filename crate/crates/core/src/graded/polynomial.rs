use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{JetVariable, Monomial, MultiIndex, Rational, VarKind};

/// Which end an odd variation is pushed to when differentiating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A graded differential polynomial: exact rational combination of
/// canonical monomials. The zero polynomial has no terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sign `(-1)^n`.
pub fn parity_sign(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        DiffPolynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = DiffPolynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: JetVariable) -> Self {
        Self::term(Rational::one(), Monomial::variable(v))
    }

    /// `q^α_σ` with zero-based fiber.
    pub fn q(fiber: usize, index: MultiIndex) -> Self {
        Self::var(JetVariable::q(fiber, index))
    }

    pub fn b(fiber: usize, index: MultiIndex) -> Self {
        Self::var(JetVariable::b(fiber, index))
    }

    pub fn p(slot: u32, fiber: usize, index: MultiIndex) -> Self {
        Self::var(JetVariable::p(slot, fiber, index))
    }

    /// `x_dim^exp`.
    pub fn x_pow(dim: usize, exp: u32) -> Self {
        Self::term(Rational::one(), Monomial::base_power(dim, exp))
    }

    /// Adds `c · m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c · (m with the given sorting sign)` when the monomial exists.
    fn add_signed(&mut self, built: Option<(Monomial, bool)>, c: Rational) {
        if let Some((m, negative)) = built {
            self.add_term(m, if negative { -c } else { c });
        }
    }

    /// Builds a polynomial from loose monomial parts, odd factors given in
    /// left-to-right order.
    pub fn from_parts(
        c: Rational,
        base: Vec<u32>,
        even: Vec<(JetVariable, u32)>,
        odd: Vec<JetVariable>,
    ) -> Self {
        let mut p = DiffPolynomial::zero();
        p.add_signed(Monomial::from_parts(base, even, odd), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return DiffPolynomial::zero();
        }
        DiffPolynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&integer(c))
    }

    /// Rebuilds every monomial from its parts; the identity on stored values.
    pub fn recanonicalized(&self) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            out.add_signed(
                Monomial::from_parts(m.base().to_vec(), m.even().to_vec(), m.odd().to_vec()),
                c.clone(),
            );
        }
        out
    }

    /// Set of b-degrees of the monomials.
    pub fn b_degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Monomial::b_degree).collect()
    }

    /// The single b-degree, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let degrees = self.b_degrees();
        if degrees.len() == 1 {
            degrees.into_iter().next()
        } else {
            None
        }
    }

    /// Splits into b-homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<usize, DiffPolynomial> {
        let mut out: BTreeMap<usize, DiffPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.b_degree())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    pub fn component(&self, degree: usize) -> DiffPolynomial {
        DiffPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.b_degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// All jet generators occurring in the polynomial (base variables excluded).
    pub fn variables(&self) -> BTreeSet<JetVariable> {
        self.terms
            .keys()
            .flat_map(|m| m.variables().cloned())
            .collect()
    }

    /// `(kind, fiber)` pairs occurring in the polynomial.
    pub fn variable_families(&self) -> BTreeSet<(VarKind, usize)> {
        self.variables()
            .into_iter()
            .map(|v| (v.kind, v.fiber))
            .collect()
    }

    /// Covector slots occurring in the polynomial.
    pub fn slots(&self) -> BTreeSet<u32> {
        self.variables()
            .into_iter()
            .filter_map(|v| match v.kind {
                VarKind::Slot(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    pub fn max_order(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::max_order)
            .max()
            .unwrap_or(0)
    }

    pub fn is_b_free(&self) -> bool {
        self.terms.keys().all(|m| m.b_degree() == 0)
    }

    /// Left partial derivative. For an odd `v` at one-based position `r`
    /// in the sorted odd part the sign is `(-1)^(r-1)`.
    pub fn partial_left(&self, v: &JetVariable) -> Self {
        self.partial(v, Side::Left)
    }

    /// Right partial derivative. For an odd `v` at position `r` of `k` the
    /// sign is `(-1)^(k-r)`.
    pub fn partial_right(&self, v: &JetVariable) -> Self {
        self.partial(v, Side::Right)
    }

    pub fn partial(&self, v: &JetVariable, side: Side) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            if v.is_odd() {
                if let Some(r) = m.odd_position(v) {
                    let k = m.b_degree();
                    let sign = match side {
                        Side::Left => parity_sign(r - 1),
                        Side::Right => parity_sign(k - r),
                    };
                    out.add_term(m.without_odd_at(r - 1), c * integer(sign));
                }
            } else if let Some((exp, rest)) = m.without_even(v) {
                out.add_term(rest, c * integer(exp as i64));
            }
        }
        out
    }

    /// Ordinary derivative along the base variable `x_dim` (explicit dependence only).
    pub fn partial_base(&self, dim: usize) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            if let Some((exp, rest)) = m.without_base(dim) {
                out.add_term(rest, c * integer(exp as i64));
            }
        }
        out
    }

    /// Total derivative `D_i` (zero-based dimension).
    pub fn total_derivative(&self, dim: usize) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            for (dm, k) in m.total_derivative(dim) {
                out.add_term(dm, c * integer(k));
            }
        }
        out
    }

    /// `D_σ`, the composition of total derivatives along `σ`.
    pub fn total_derivative_multi(&self, sigma: &MultiIndex) -> Self {
        let mut out = self.clone();
        for d in sigma.dims() {
            out = out.total_derivative(d);
        }
        out
    }

    /// Renames every generator through `f`, re-sorting odd factors with signs.
    pub fn map_variables(&self, mut f: impl FnMut(&JetVariable) -> JetVariable) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            out.add_signed(m.map_variables(&mut f), c.clone());
        }
        out
    }

    /// Replaces generators by polynomials. Each monomial is expanded as
    /// `c · base · Π even · b_1 ⋯ b_k` with replacements multiplied in that
    /// left-to-right order; generators for which `rule` returns `None` stay.
    pub fn replace(&self, rule: &dyn Fn(&JetVariable) -> Option<DiffPolynomial>) -> Self {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPolynomial::term(
                c.clone(),
                Monomial::from_parts(m.base().to_vec(), Vec::new(), Vec::new())
                    .expect("base only")
                    .0,
            );
            for (v, e) in m.even() {
                let factor = rule(v).unwrap_or_else(|| DiffPolynomial::var(v.clone()));
                for _ in 0..*e {
                    acc = &acc * &factor;
                }
            }
            for v in m.odd() {
                let factor = rule(v).unwrap_or_else(|| DiffPolynomial::var(v.clone()));
                acc = &acc * &factor;
            }
            out += acc;
        }
        out
    }

    /// Largest absolute numerator or denominator among the coefficients.
    pub fn max_coefficient_height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for DiffPolynomial {
    type Output = DiffPolynomial;
    fn add(mut self, rhs: DiffPolynomial) -> DiffPolynomial {
        self += rhs;
        self
    }
}

impl AddAssign<&DiffPolynomial> for DiffPolynomial {
    fn add_assign(&mut self, rhs: &DiffPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for DiffPolynomial {
    fn add_assign(&mut self, rhs: DiffPolynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        DiffPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        -&self
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for DiffPolynomial {
    type Output = DiffPolynomial;
    fn sub(self, rhs: DiffPolynomial) -> DiffPolynomial {
        &self - &rhs
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_signed(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for DiffPolynomial {
    type Output = DiffPolynomial;
    fn mul(self, rhs: DiffPolynomial) -> DiffPolynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for DiffPolynomial {
    fn sum<I: Iterator<Item = DiffPolynomial>>(iter: I) -> Self {
        let mut out = DiffPolynomial::zero();
        for p in iter {
            out += p;
        }
        out
    }
}
