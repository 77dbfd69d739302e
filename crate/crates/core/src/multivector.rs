//! Variational k-vectors: homogeneous classes in the odd variables, their
//! evaluation on covector slots and the insertion operator.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graded::{
    parity_sign, rational, substitute_positional, CovectorArg, DiffPolynomial, Geometry, Rational,
    Side,
};
use crate::variational::{is_exact, var_derivative_b, Functional};

/// A functional whose density is homogeneous of degree `k` in the `b`'s.
///
/// The zero density is allowed with any nominal degree.
#[derive(Clone, Debug)]
pub struct Multivector {
    functional: Functional,
    degree: usize,
}

impl Multivector {
    pub fn new(functional: Functional, degree: usize) -> Result<Self> {
        let degrees = functional.density().b_degrees();
        if degrees.iter().any(|&d| d != degree) {
            return Err(Error::NotHomogeneous(degrees.into_iter().collect()));
        }
        Ok(Multivector { functional, degree })
    }

    /// Infers the degree from a nonzero homogeneous density.
    pub fn from_functional(functional: Functional) -> Result<Self> {
        let degrees = functional.density().b_degrees();
        match degrees.len() {
            1 => {
                let degree = *degrees.iter().next().expect("one degree");
                Ok(Multivector { functional, degree })
            }
            0 => Err(Error::Precondition("the zero density has no degree".into())),
            _ => Err(Error::NotHomogeneous(degrees.into_iter().collect())),
        }
    }

    pub fn from_density(density: DiffPolynomial, geometry: Geometry) -> Result<Self> {
        Self::from_functional(Functional::new(density, geometry)?)
    }

    pub fn with_degree(density: DiffPolynomial, geometry: Geometry, degree: usize) -> Result<Self> {
        Self::new(Functional::new(density, geometry)?, degree)
    }

    pub(crate) fn from_parts_unchecked(functional: Functional, degree: usize) -> Self {
        Multivector { functional, degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    pub fn density(&self) -> &DiffPolynomial {
        self.functional.density()
    }

    pub fn geometry(&self) -> Geometry {
        self.functional.geometry()
    }

    pub fn is_trivial(&self) -> bool {
        self.functional.is_trivial()
    }

    pub(crate) fn with_density(&self, density: DiffPolynomial, degree: usize) -> Multivector {
        Multivector {
            functional: self.functional.with_density(density),
            degree,
        }
    }
}

/// Splits a functional into homogeneous components, dropping trivial ones.
pub fn decompose(f: &Functional) -> Vec<Multivector> {
    f.density()
        .components()
        .into_iter()
        .filter(|(_, part)| !is_exact(part))
        .map(|(degree, part)| Multivector::from_parts_unchecked(f.with_density(part), degree))
        .collect()
}

/// `ι_arg` on a density of b-degree `degree`: the argument is put in each odd
/// position `j` with sign `(-1)^(k-j)`, averaged over the `k` positions.
pub(crate) fn insert_density(density: &DiffPolynomial, arg: &CovectorArg) -> DiffPolynomial {
    let mut out = DiffPolynomial::zero();
    for (m, c) in density.terms() {
        let k = m.b_degree();
        if k == 0 {
            continue;
        }
        for (pos, var) in m.odd().iter().enumerate() {
            let sign = parity_sign(k - (pos + 1));
            let coeff = c * rational(sign, k as i64);
            let rest = DiffPolynomial::term(coeff, m.without_odd_at(pos));
            out += &rest * &arg.at(var.fiber, &var.index);
        }
    }
    out
}

fn check_slot(geometry: Geometry, slot: u32) -> Result<()> {
    if slot == 0 || slot as usize > geometry.s {
        return Err(Error::IndexOutOfRange(format!(
            "covector slot {slot} outside 1..={}",
            geometry.s
        )));
    }
    Ok(())
}

/// `ξ(p)`: inserts the covector slot `p^(slot)` into the rightmost argument.
pub fn insert(xi: &Multivector, slot: u32) -> Result<Multivector> {
    if xi.degree == 0 {
        return Err(Error::DegreeZero);
    }
    check_slot(xi.geometry(), slot)?;
    if xi.density().slots().contains(&slot) {
        return Err(Error::SlotCollision(slot));
    }
    let density = insert_density(xi.density(), &CovectorArg::Slot(slot));
    Ok(xi.with_density(density, xi.degree - 1))
}

/// All permutations of `0..k` with their signs.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; k], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            (p, parity_sign(inversions))
        })
        .collect()
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// `(1/k!) Σ_s (-1)^s` of the positional substitution placing `args[s(i)]`
/// at the `i`-th odd factor.
pub(crate) fn evaluate_density(
    density: &DiffPolynomial,
    args: &[CovectorArg],
) -> Result<DiffPolynomial> {
    let k = args.len();
    let mut out = DiffPolynomial::zero();
    for (perm, sign) in signed_permutations(k) {
        let permuted: Vec<CovectorArg> = perm.iter().map(|&i| args[i].clone()).collect();
        let term = substitute_positional(density, &permuted)?;
        out += term.scale_int(sign);
    }
    Ok(out.scale(&rational(1, factorial(k))))
}

/// `ξ(p^(j_1), …, p^(j_k))` as a functional of degree 0 in `b`.
pub fn evaluate(xi: &Multivector, slots: &[u32]) -> Result<Functional> {
    if slots.len() != xi.degree {
        return Err(Error::ArityMismatch {
            expected: xi.degree,
            found: slots.len(),
        });
    }
    let mut seen = BTreeSet::new();
    let present = xi.density().slots();
    for &slot in slots {
        check_slot(xi.geometry(), slot)?;
        if !seen.insert(slot) {
            return Err(Error::DuplicateSlot(slot));
        }
        if present.contains(&slot) {
            return Err(Error::SlotCollision(slot));
        }
    }
    let args: Vec<CovectorArg> = slots.iter().map(|&s| CovectorArg::Slot(s)).collect();
    Ok(xi
        .functional()
        .with_density(evaluate_density(xi.density(), &args)?))
}

/// Evaluation on arbitrary arguments, including `q`-dependent sections.
pub fn evaluate_args(xi: &Multivector, args: &[CovectorArg]) -> Result<Functional> {
    if args.len() != xi.degree {
        return Err(Error::ArityMismatch {
            expected: xi.degree,
            found: args.len(),
        });
    }
    Ok(xi
        .functional()
        .with_density(evaluate_density(xi.density(), args)?))
}

/// The operator `A` in `ξ = ∫⟨b, A(b,…,b)⟩`, stored as its diagonal values
/// `A^α(b,…,b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewOperator {
    components: Vec<DiffPolynomial>,
    arity: usize,
}

impl SkewOperator {
    pub fn components(&self) -> &[DiffPolynomial] {
        &self.components
    }

    /// Number of arguments, `k - 1`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `A(a_1, …, a_{k-1})` componentwise, by skew-symmetrized substitution.
    pub fn apply(&self, args: &[CovectorArg]) -> Result<Vec<DiffPolynomial>> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        self.components
            .iter()
            .map(|c| evaluate_density(c, args))
            .collect()
    }

    /// The density `Σ_α b_α A^α(b,…,b)`.
    pub fn pair_with_b(&self) -> DiffPolynomial {
        self.components
            .iter()
            .enumerate()
            .map(|(alpha, c)| &DiffPolynomial::b(alpha, Default::default()) * c)
            .sum()
    }
}

/// Recovers `A` through `δ^L ξ/δb_α = k A^α(b,…,b)`.
pub fn extract_operator(xi: &Multivector) -> Result<SkewOperator> {
    if xi.degree == 0 {
        return Err(Error::DegreeZero);
    }
    let scale: Rational = rational(1, xi.degree as i64);
    let components = (0..xi.geometry().m)
        .map(|alpha| var_derivative_b(xi.density(), alpha, Side::Left).scale(&scale))
        .collect();
    Ok(SkewOperator {
        components,
        arity: xi.degree - 1,
    })
}
