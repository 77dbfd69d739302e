use std::cmp::Ordering;

use super::{JetVariable, MultiIndex, VarKind};

/// A coefficient-free graded monomial `x^a · (even jets) · b_1 ⋯ b_k`.
///
/// Invariants: `base` has no trailing zeros; `even` is sorted by variable
/// with positive exponents and holds no odd variables; `odd` is strictly
/// increasing. Every sorting sign lives in the coefficient of the owning
/// polynomial, never here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    base: Vec<u32>,
    even: Vec<(JetVariable, u32)>,
    odd: Vec<JetVariable>,
}

/// Sorts a sequence of odd generators, returning the permutation parity
/// (`true` for odd), or `None` if a generator repeats.
pub fn sort_odd(mut factors: Vec<JetVariable>) -> Option<(Vec<JetVariable>, bool)> {
    let mut negative = false;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 {
            match factors[j - 1].cmp(&factors[j]) {
                Ordering::Greater => {
                    factors.swap(j - 1, j);
                    negative = !negative;
                    j -= 1;
                }
                Ordering::Equal => return None,
                Ordering::Less => break,
            }
        }
    }
    Some((factors, negative))
}

fn merge_even(a: &[(JetVariable, u32)], b: &[(JetVariable, u32)]) -> Vec<(JetVariable, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Builds a canonical monomial from loose parts. Odd factors are taken in
    /// the given left-to-right order; the returned flag is the sign picked up
    /// by sorting them. `None` means an odd factor repeats (the product is 0).
    pub fn from_parts(
        base: Vec<u32>,
        even: impl IntoIterator<Item = (JetVariable, u32)>,
        odd: Vec<JetVariable>,
    ) -> Option<(Monomial, bool)> {
        let mut evens: Vec<(JetVariable, u32)> = Vec::new();
        for (v, e) in even {
            debug_assert!(!v.is_odd(), "odd variable in even part");
            if e > 0 {
                evens = merge_even(&evens, &[(v, e)]);
            }
        }
        let (odd, negative) = sort_odd(odd)?;
        Some((
            Monomial {
                base: trim(base),
                even: evens,
                odd,
            },
            negative,
        ))
    }

    pub fn variable(var: JetVariable) -> Self {
        if var.is_odd() {
            Monomial {
                odd: vec![var],
                ..Default::default()
            }
        } else {
            Monomial {
                even: vec![(var, 1)],
                ..Default::default()
            }
        }
    }

    pub fn base_power(dim: usize, exp: u32) -> Self {
        let mut base = vec![0; dim + 1];
        base[dim] = exp;
        Monomial {
            base: trim(base),
            ..Default::default()
        }
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn base_exp(&self, dim: usize) -> u32 {
        self.base.get(dim).copied().unwrap_or(0)
    }

    pub fn even(&self) -> &[(JetVariable, u32)] {
        &self.even
    }

    pub fn odd(&self) -> &[JetVariable] {
        &self.odd
    }

    /// Number of odd factors.
    pub fn b_degree(&self) -> usize {
        self.odd.len()
    }

    pub fn is_one(&self) -> bool {
        self.base.is_empty() && self.even.is_empty() && self.odd.is_empty()
    }

    /// Total polynomial degree over all generators.
    pub fn total_degree(&self) -> u32 {
        self.base.iter().sum::<u32>()
            + self.even.iter().map(|(_, e)| *e).sum::<u32>()
            + self.odd.len() as u32
    }

    pub fn even_exponent(&self, var: &JetVariable) -> u32 {
        self.even
            .binary_search_by(|(v, _)| v.cmp(var))
            .map(|i| self.even[i].1)
            .unwrap_or(0)
    }

    /// One-based position of an odd generator in the sorted odd part.
    pub fn odd_position(&self, var: &JetVariable) -> Option<usize> {
        self.odd.binary_search(var).ok().map(|i| i + 1)
    }

    /// All distinct generators (even and odd) occurring in the monomial.
    pub fn variables(&self) -> impl Iterator<Item = &JetVariable> {
        self.even.iter().map(|(v, _)| v).chain(self.odd.iter())
    }

    /// Graded product `self · other`; the flag is the sign from interleaving
    /// the odd parts. `None` when an odd factor repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let len = self.base.len().max(other.base.len());
        let base: Vec<u32> = (0..len)
            .map(|d| self.base_exp(d) + other.base_exp(d))
            .collect();
        let even = merge_even(&self.even, &other.even);
        // Merge two sorted odd runs, counting crossings.
        let (a, b) = (&self.odd, &other.odd);
        let mut odd = Vec::with_capacity(a.len() + b.len());
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    odd.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    odd.push(b[j].clone());
                    // b[j] passes over the remaining a's.
                    if (a.len() - i) % 2 == 1 {
                        negative = !negative;
                    }
                    j += 1;
                }
                Ordering::Equal => return None,
            }
        }
        odd.extend_from_slice(&a[i..]);
        odd.extend_from_slice(&b[j..]);
        Some((
            Monomial {
                base: trim(base),
                even,
                odd,
            },
            negative,
        ))
    }

    /// Removes one power of an even generator; returns the exponent it had.
    pub fn without_even(&self, var: &JetVariable) -> Option<(u32, Monomial)> {
        let i = self.even.binary_search_by(|(v, _)| v.cmp(var)).ok()?;
        let exp = self.even[i].1;
        let mut m = self.clone();
        if exp == 1 {
            m.even.remove(i);
        } else {
            m.even[i].1 -= 1;
        }
        Some((exp, m))
    }

    /// Removes the odd factor at zero-based position `pos`.
    pub fn without_odd_at(&self, pos: usize) -> Monomial {
        let mut m = self.clone();
        m.odd.remove(pos);
        m
    }

    /// Lowers the exponent of `x^dim` by one, returning the old exponent.
    pub fn without_base(&self, dim: usize) -> Option<(u32, Monomial)> {
        let exp = self.base_exp(dim);
        if exp == 0 {
            return None;
        }
        let mut m = self.clone();
        m.base[dim] -= 1;
        m.base = trim(m.base);
        Some((exp, m))
    }

    /// Drops the odd part, keeping base and even factors.
    pub fn even_only(&self) -> Monomial {
        Monomial {
            base: self.base.clone(),
            even: self.even.clone(),
            odd: Vec::new(),
        }
    }

    /// Splits into (even part, odd generators in order).
    pub fn split(&self) -> (Monomial, Vec<JetVariable>) {
        (self.even_only(), self.odd.clone())
    }

    /// `D_dim` of the monomial as a list of `(monomial, integer factor)`.
    pub fn total_derivative(&self, dim: usize) -> Vec<(Monomial, i64)> {
        let mut out = Vec::new();
        if let Some((exp, m)) = self.without_base(dim) {
            out.push((m, exp as i64));
        }
        for (var, exp) in &self.even {
            let (_, rest) = self.without_even(var).expect("present");
            let shifted = Monomial::variable(var.shifted(dim));
            let (m, _) = rest.mul(&shifted).expect("even product");
            out.push((m, *exp as i64));
        }
        for pos in 0..self.odd.len() {
            let mut factors = self.odd.clone();
            factors[pos] = factors[pos].shifted(dim);
            if let Some((odd, negative)) = sort_odd(factors) {
                let m = Monomial {
                    base: self.base.clone(),
                    even: self.even.clone(),
                    odd,
                };
                out.push((m, if negative { -1 } else { 1 }));
            }
        }
        out
    }

    /// Renames variables through `f` (parity must be preserved), returning
    /// the re-canonicalized monomial and sorting sign.
    pub fn map_variables(
        &self,
        mut f: impl FnMut(&JetVariable) -> JetVariable,
    ) -> Option<(Monomial, bool)> {
        let even: Vec<(JetVariable, u32)> = self.even.iter().map(|(v, e)| (f(v), *e)).collect();
        let odd: Vec<JetVariable> = self.odd.iter().map(&mut f).collect();
        Monomial::from_parts(self.base.clone(), even, odd)
    }

    /// Largest derivative order among jet generators of the given kind.
    pub fn max_order(&self) -> u32 {
        self.variables().map(|v| v.index.order()).max().unwrap_or(0)
    }

    pub fn has_kind(&self, kind: VarKind) -> bool {
        self.variables().any(|v| v.kind == kind)
    }

    pub fn index_of_first_odd(&self) -> Option<&MultiIndex> {
        self.odd.first().map(|v| &v.index)
    }
}

impl Ord for Monomial {
    /// Graded: total degree first, then odd part, even part, base powers.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.odd.cmp(&other.odd))
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
