//! Variational derivatives and the horizontal cohomology class of a density.
//!
//! Over `ℝⁿ` with polynomial coefficients a density is a total divergence
//! exactly when every fiber Euler operator (with respect to `q`, `b` and every
//! covector slot `p^(j)`) annihilates it; pure base polynomials are always
//! divergences. Equivalence of functionals is decided this way, without
//! searching for a potential.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::{DiffPolynomial, Geometry, MultiIndex, Side, VarKind};

/// `Σ_σ (-1)^|σ| D_σ(∂f/∂u_σ)` for the family `u = (kind, fiber)`.
///
/// `side` only matters for odd families.
pub fn euler_operator(
    f: &DiffPolynomial,
    kind: VarKind,
    fiber: usize,
    side: Side,
) -> DiffPolynomial {
    // Horner scheme: T_{σ-1_i} += -D_i T_σ from the highest order down, so
    // each σ costs one total derivative.
    let mut pending: BTreeMap<MultiIndex, DiffPolynomial> = f
        .variables()
        .into_iter()
        .filter(|v| v.kind == kind && v.fiber == fiber)
        .map(|v| (v.index.clone(), f.partial(&v, side)))
        .collect();
    while let Some((sigma, value)) = pending.pop_last() {
        let Some(dim) = sigma.first_dim() else {
            return value;
        };
        let lower = sigma.decremented(dim).expect("has dim");
        let step = -value.total_derivative(dim);
        *pending.entry(lower).or_default() += step;
    }
    DiffPolynomial::zero()
}

/// `δf/δq^α`. Left and right versions coincide because `δq` is even.
pub fn var_derivative_q(f: &DiffPolynomial, fiber: usize) -> DiffPolynomial {
    euler_operator(f, VarKind::Even, fiber, Side::Left)
}

/// `δf/δb_α` with the variation pushed to the given side.
pub fn var_derivative_b(f: &DiffPolynomial, fiber: usize, side: Side) -> DiffPolynomial {
    euler_operator(f, VarKind::Odd, fiber, side)
}

/// `δf/δp^(j)_α` for a covector slot.
pub fn var_derivative_slot(f: &DiffPolynomial, slot: u32, fiber: usize) -> DiffPolynomial {
    euler_operator(f, VarKind::Slot(slot), fiber, Side::Left)
}

/// Whether `f` is a total divergence `Σ D_i(g_i)`.
///
/// The part of `f` of positive degree in one family `u` is exact iff its
/// `u`-Euler operator vanishes, since `d·f_d ≡ Σ_α u_α δf_d/δu_α`, and total
/// derivatives preserve that degree. So one family is checked and the rest of
/// the test runs on the `u`-free part only.
pub fn is_exact(f: &DiffPolynomial) -> bool {
    let mut rest = f.clone();
    loop {
        let families = family_orders(&rest);
        let Some((&(kind, fiber), _)) = families
            .iter()
            .min_by_key(|(&(kind, _), &order)| (order, !matches!(kind, VarKind::Slot(_))))
        else {
            // pure base polynomials are divergences
            return true;
        };
        if !euler_operator(&rest, kind, fiber, Side::Left).is_zero() {
            return false;
        }
        let mut free = DiffPolynomial::zero();
        for (m, c) in rest.terms() {
            if !m.variables().any(|v| v.kind == kind && v.fiber == fiber) {
                free.add_term(m.clone(), c.clone());
            }
        }
        rest = free;
    }
}

fn family_orders(f: &DiffPolynomial) -> BTreeMap<(VarKind, usize), u32> {
    let mut out = BTreeMap::new();
    for v in f.variables() {
        let order = out.entry((v.kind, v.fiber)).or_insert(0);
        *order = (*order).max(v.index.order());
    }
    out
}

/// A density considered modulo total divergences, `∫ f dvol`.
#[derive(Clone, Debug)]
pub struct Functional {
    density: DiffPolynomial,
    geometry: Geometry,
}

impl Functional {
    /// Wraps a density after checking every generator against the geometry.
    pub fn new(density: DiffPolynomial, geometry: Geometry) -> Result<Self> {
        for v in density.variables() {
            geometry.check_variable(&v)?;
        }
        for (m, _) in density.terms() {
            if m.base().len() > geometry.n {
                return Err(Error::IndexOutOfRange(format!(
                    "base variable x{} exceeds n = {}",
                    m.base().len(),
                    geometry.n
                )));
            }
        }
        Ok(Functional { density, geometry })
    }

    pub fn zero(geometry: Geometry) -> Self {
        Functional {
            density: DiffPolynomial::zero(),
            geometry,
        }
    }

    pub fn density(&self) -> &DiffPolynomial {
        &self.density
    }

    pub fn into_density(self) -> DiffPolynomial {
        self.density
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Same class check as [`equivalent`], against zero.
    pub fn is_trivial(&self) -> bool {
        is_exact(&self.density)
    }

    pub(crate) fn with_density(&self, density: DiffPolynomial) -> Functional {
        Functional {
            density,
            geometry: self.geometry,
        }
    }
}

/// Equality of classes: the densities differ by a total divergence.
pub fn equivalent(a: &Functional, b: &Functional) -> Result<bool> {
    if a.geometry != b.geometry {
        return Err(Error::GeometryMismatch);
    }
    Ok(is_exact(&(&a.density - &b.density)))
}

/// Integrates by parts until, in every monomial, the smallest odd factor
/// carries no derivatives, giving a representative of the form `⟨b, A(b,…,b)⟩`.
///
/// The representative is not unique; compare classes with [`equivalent`].
pub fn normalize_to_ba_form(f: &Functional) -> Result<DiffPolynomial> {
    let degree = f
        .density
        .homogeneous_degree()
        .ok_or_else(|| Error::NotHomogeneous(f.density.b_degrees().into_iter().collect()))?;
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    Ok(normalize_density(&f.density))
}

/// Greedy integration by parts on the leading odd factor. Terminates because
/// each step lowers the order of that factor.
pub(crate) fn normalize_density(density: &DiffPolynomial) -> DiffPolynomial {
    let mut done = DiffPolynomial::zero();
    let mut pending = density.clone();
    while !pending.is_zero() {
        let mut next = DiffPolynomial::zero();
        for (m, c) in pending.terms() {
            let lead = match m.odd().first() {
                Some(v) if !v.index.is_zero() => v.clone(),
                _ => {
                    done.add_term(m.clone(), c.clone());
                    continue;
                }
            };
            // m = c · b_{α,τ} · R with the lead already leftmost in sorted order.
            let dim = lead.index.first_dim().expect("nonzero index");
            let lowered = lead.with_index(lead.index.decremented(dim).expect("has dim"));
            let rest = DiffPolynomial::term(c.clone(), m.without_odd_at(0));
            // b_τ R = D(b_{τ-1} R) - b_{τ-1} D(R)
            let moved = &DiffPolynomial::var(lowered) * &rest.total_derivative(dim);
            next = &next - &moved;
        }
        pending = next;
    }
    done
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(order: u32) -> MultiIndex {
        MultiIndex::from_counts(vec![order])
    }
    fn b(order: u32) -> DiffPolynomial {
        DiffPolynomial::b(0, ix(order))
    }
    fn q(order: u32) -> DiffPolynomial {
        DiffPolynomial::q(0, ix(order))
    }
    fn x(exp: u32) -> DiffPolynomial {
        DiffPolynomial::x_pow(0, exp)
    }
    fn line() -> Geometry {
        Geometry::line(4)
    }

    #[test]
    fn q_derivative_examples() {
        // δ(½ q_x²)/δq = -q_xx
        let half = crate::graded::rational(1, 2);
        let f = (&q(1) * &q(1)).scale(&half);
        assert_eq!(var_derivative_q(&f, 0), -q(2));
        let div = (&q(0) * &q(2)).total_derivative(0);
        assert!(var_derivative_q(&div, 0).is_zero());
        // δ(b x³ q_xx)/δq = D²(x³ b)
        let f = &(&b(0) * &x(3)) * &q(2);
        let expected = &x(1).scale_int(6) * &b(0) + &x(2).scale_int(6) * &b(1) + &x(3) * &b(2);
        assert_eq!(var_derivative_q(&f, 0), expected);
    }

    #[test]
    fn b_derivative_examples() {
        let bbx = &b(0) * &b(1);
        assert_eq!(var_derivative_b(&bbx, 0, Side::Left), b(1).scale_int(2));
        assert_eq!(var_derivative_b(&bbx, 0, Side::Right), b(1).scale_int(-2));
        assert!(var_derivative_b(&(&q(0) * &q(1)), 0, Side::Left).is_zero());
    }

    #[test]
    fn exactness_examples() {
        let bbx = &b(0) * &b(1);
        let shift = (&bbx * &b(2)).total_derivative(0);
        assert!(is_exact(&shift));
        assert!(!is_exact(&bbx));
        assert!(is_exact(&x(3)));
        assert!(is_exact(&DiffPolynomial::one()));
        assert!(is_exact(&(&q(0) * &q(1))));
        assert!(!is_exact(&(&q(0) * &q(0))));
    }

    #[test]
    fn equivalence_examples() {
        let g = line();
        let bbx = &b(0) * &b(1);
        let shifted = &bbx + &(&bbx * &b(2)).total_derivative(0);
        let f = |d: DiffPolynomial| Functional::new(d, g).unwrap();
        assert!(equivalent(&f(bbx.clone()), &f(shifted)).unwrap());
        assert!(equivalent(&f(&q(0) * &q(1)), &Functional::zero(g)).unwrap());
        assert!(!equivalent(&f(bbx.clone()), &Functional::zero(g)).unwrap());
        let other = Functional::zero(Geometry::line(2));
        assert_eq!(equivalent(&f(bbx), &other), Err(Error::GeometryMismatch));
    }

    #[test]
    fn normal_form_examples() {
        let g = line();
        // ∫ b_x b_xx ≡ -∫ b b_xxx
        let f = Functional::new(&b(1) * &b(2), g).unwrap();
        let n = normalize_to_ba_form(&f).unwrap();
        assert_eq!(n, -(&b(0) * &b(3)));
        assert!(is_exact(&(&n - f.density())));
        for (m, _) in n.terms() {
            assert!(m.odd()[0].index.is_zero());
        }
        let bbx = Functional::new(&b(0) * &b(1), g).unwrap();
        assert_eq!(normalize_to_ba_form(&bbx).unwrap(), bbx.density().clone());
        let zero_degree = Functional::new(&q(0) * &q(0), g).unwrap();
        assert_eq!(normalize_to_ba_form(&zero_degree), Err(Error::DegreeZero));
        let mixed = Functional::new(&b(0) + &(&b(0) * &b(1)), g).unwrap();
        assert!(matches!(
            normalize_to_ba_form(&mixed),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn normal_form_handles_base_coefficients() {
        let g = line();
        let f = Functional::new(&(&x(3) * &b(1)) * &b(2), g).unwrap();
        let n = normalize_to_ba_form(&f).unwrap();
        assert!(equivalent(&f, &Functional::new(n, g).unwrap()).unwrap());
    }

    #[test]
    fn geometry_is_checked() {
        let g = Geometry::line(1);
        assert!(Functional::new(DiffPolynomial::p(2, 0, ix(0)), g).is_err());
        assert!(Functional::new(DiffPolynomial::x_pow(1, 1), g).is_err());
    }
}
