use super::field::EvolutionaryField;
use crate::error::{Error, Result};
use crate::graded::{parity_sign, rational, reconstruct_odd, CovectorArg, DiffPolynomial, Side};
use crate::multivector::{insert_density, Multivector};
use crate::variational::{var_derivative_b, Functional};

/// Value of `⟦ξ,η⟧(a_1, …, a_N)` with `N = k + ℓ - 1`, reducing degrees by
///
/// `⟦ξ,η⟧(a) = ℓ/N ⟦ξ, η(a)⟧ + (-1)^{ℓ-1} k/N ⟦ξ(a), η⟧`
///
/// on the last argument, down to `⟦H, φ⟧ = ∫∂_q^φ H`.
pub(crate) fn recursive_value(
    xi: &DiffPolynomial,
    k: usize,
    eta: &DiffPolynomial,
    l: usize,
    args: &[CovectorArg],
    m: usize,
) -> DiffPolynomial {
    if k + l == 0 {
        return DiffPolynomial::zero();
    }
    let n = k + l - 1;
    debug_assert_eq!(args.len(), n);
    if n == 0 {
        return if k == 0 {
            base_case(xi, eta, m)
        } else {
            // ⟦φ, H⟧ = -⟦H, φ⟧
            -base_case(eta, xi, m)
        };
    }
    let (last, rest) = args.split_last().expect("n >= 1");
    let mut out = DiffPolynomial::zero();
    if l > 0 {
        let inner = recursive_value(xi, k, &insert_density(eta, last), l - 1, rest, m);
        out += inner.scale(&rational(l as i64, n as i64));
    }
    if k > 0 {
        let inner = recursive_value(&insert_density(xi, last), k - 1, eta, l, rest, m);
        out += inner.scale(&rational(parity_sign(l + 1) * k as i64, n as i64));
    }
    out
}

/// `∫∂_q^φ H` where `φ_α = δ^L φ/δb_α` is read off the 1-vector.
fn base_case(h: &DiffPolynomial, vector: &DiffPolynomial, m: usize) -> DiffPolynomial {
    let sections = (0..m)
        .map(|alpha| var_derivative_b(vector, alpha, Side::Left))
        .collect();
    EvolutionaryField::from_q_sections(sections).apply(h)
}

/// Result of the recursive construction: the value on fresh covector slots
/// and the multivector rebuilt from it.
#[derive(Clone, Debug)]
pub struct RecursiveBracket {
    pub slots: Vec<u32>,
    pub inserted: Functional,
    pub reconstructed: Multivector,
}

/// The bracket through repeated insertion of fresh horizontal-jet symbols.
pub fn bracket_recursive(xi: &Multivector, eta: &Multivector) -> Result<RecursiveBracket> {
    let geometry = xi.geometry();
    if geometry != eta.geometry() {
        return Err(Error::GeometryMismatch);
    }
    let (k, l) = (xi.degree(), eta.degree());
    let n = (k + l).saturating_sub(1);
    let used: std::collections::BTreeSet<u32> = xi
        .density()
        .slots()
        .union(&eta.density().slots())
        .copied()
        .collect();
    let slots: Vec<u32> = (1..=geometry.s as u32)
        .filter(|j| !used.contains(j))
        .take(n)
        .collect();
    if slots.len() < n {
        return Err(Error::SlotsExhausted {
            needed: n,
            available: slots.len(),
        });
    }
    let args: Vec<CovectorArg> = slots.iter().map(|&j| CovectorArg::Slot(j)).collect();
    let value = recursive_value(xi.density(), k, eta.density(), l, &args, geometry.m);
    let rebuilt = reconstruct_odd(&value, &slots)?;
    let inserted = Functional::new(value, geometry)?;
    let reconstructed = Multivector::with_degree(rebuilt, geometry, n)?;
    Ok(RecursiveBracket {
        slots,
        inserted,
        reconstructed,
    })
}
