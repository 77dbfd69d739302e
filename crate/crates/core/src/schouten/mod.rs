//! The variational Schouten bracket.
//!
//! Three constructions are provided and cross-checked by the test suite:
//! the odd Poisson bracket pairing `δ/δq` with `δ/δb` ([`bracket_poisson`]),
//! the recursive definition through insertions ([`bracket_recursive`]) and
//! the action of the graded evolutionary field `Q^ξ` ([`bracket_via_q`]).

mod field;
mod recursive;

pub use field::{graded_commutator, q_field, EvolutionaryField};
pub(crate) use recursive::recursive_value;
pub use recursive::{bracket_recursive, RecursiveBracket};

use crate::error::{Error, Result};
use crate::graded::{DiffPolynomial, MultiIndex, Side};
use crate::multivector::Multivector;
use crate::variational::{var_derivative_b, var_derivative_q};

/// Which construction produced a bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Poisson,
    Recursive,
    QField,
}

/// A bracket value together with how it was computed. A zero class has no
/// degree.
#[derive(Clone, Debug)]
pub struct BracketReport {
    pub result: Multivector,
    pub method: Method,
    pub zero: bool,
}

impl BracketReport {
    fn new(result: Multivector, method: Method) -> Self {
        let zero = result.is_trivial();
        BracketReport {
            result,
            method,
            zero,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        (!self.zero).then_some(self.result.degree())
    }
}

fn check_geometry(xi: &Multivector, eta: &Multivector) -> Result<()> {
    if xi.geometry() != eta.geometry() {
        return Err(Error::GeometryMismatch);
    }
    Ok(())
}

fn result_degree(xi: &Multivector, eta: &Multivector) -> usize {
    (xi.degree() + eta.degree()).saturating_sub(1)
}

pub(crate) fn poisson_density(
    xi: &DiffPolynomial,
    eta: &DiffPolynomial,
    m: usize,
) -> DiffPolynomial {
    let mut out = DiffPolynomial::zero();
    for alpha in 0..m {
        out += &var_derivative_q(xi, alpha) * &var_derivative_b(eta, alpha, Side::Left);
        out = &out - &(&var_derivative_b(xi, alpha, Side::Right) * &var_derivative_q(eta, alpha));
    }
    out
}

/// `⟦ξ,η⟧ = ∫ Σ_α (δ^R ξ/δq^α)(δ^L η/δb_α) - (δ^R ξ/δb_α)(δ^L η/δq^α)`.
pub fn bracket_poisson(xi: &Multivector, eta: &Multivector) -> Result<Multivector> {
    check_geometry(xi, eta)?;
    let density = poisson_density(xi.density(), eta.density(), xi.geometry().m);
    Multivector::with_degree(density, xi.geometry(), result_degree(xi, eta))
}

/// `⟦ξ,η⟧ = ∫ Q^ξ(η)`.
pub fn bracket_via_q(xi: &Multivector, eta: &Multivector) -> Result<Multivector> {
    check_geometry(xi, eta)?;
    let density = q_field(xi).apply(eta.density());
    Multivector::with_degree(density, xi.geometry(), result_degree(xi, eta))
}

/// `⟦H, φ⟧ = ∫∂_q^φ H` for a functional `H` and a 1-vector `φ`.
pub fn bracket_base_case(h: &Multivector, phi: &Multivector) -> Result<Multivector> {
    check_geometry(h, phi)?;
    if h.degree() != 0 {
        return Err(Error::WrongDegree {
            expected: 0,
            found: h.degree(),
        });
    }
    if phi.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            found: phi.degree(),
        });
    }
    let density = recursive_value(h.density(), 0, phi.density(), 1, &[], h.geometry().m);
    Multivector::with_degree(density, h.geometry(), 0)
}

/// Computes the bracket with the chosen construction. The recursive one is
/// reported through its reconstructed b-form.
pub fn bracket(xi: &Multivector, eta: &Multivector, method: Method) -> Result<BracketReport> {
    let result = match method {
        Method::Poisson => bracket_poisson(xi, eta)?,
        Method::QField => bracket_via_q(xi, eta)?,
        Method::Recursive => bracket_recursive(xi, eta)?.reconstructed,
    };
    Ok(BracketReport::new(result, method))
}

/// `(-1)^{(r-1)(t-1)}⟦ξ,⟦η,ζ⟧⟧ + (-1)^{(r-1)(s-1)}⟦η,⟦ζ,ξ⟧⟧ + (-1)^{(s-1)(t-1)}⟦ζ,⟦ξ,η⟧⟧`.
pub fn jacobi_defect(
    xi: &Multivector,
    eta: &Multivector,
    zeta: &Multivector,
) -> Result<Multivector> {
    check_geometry(xi, eta)?;
    check_geometry(xi, zeta)?;
    let sign = antisymmetry_sign;
    let (r, s, t) = (xi.degree(), eta.degree(), zeta.degree());
    let terms = [
        (
            sign(r, t),
            bracket_poisson(xi, &bracket_poisson(eta, zeta)?)?,
        ),
        (
            sign(r, s),
            bracket_poisson(eta, &bracket_poisson(zeta, xi)?)?,
        ),
        (
            sign(s, t),
            bracket_poisson(zeta, &bracket_poisson(xi, eta)?)?,
        ),
    ];
    let density: DiffPolynomial = terms
        .iter()
        .map(|(sign, term)| term.density().scale_int(*sign))
        .sum();
    let degree = (r + s + t).saturating_sub(2);
    Multivector::with_degree(density, xi.geometry(), degree)
}

/// Outcome of [`is_poisson`]; `witness` holds `⟦P,P⟧` when it is nonzero.
#[derive(Clone, Debug)]
pub struct PoissonVerdict {
    pub poisson: bool,
    pub witness: Option<Multivector>,
}

/// Whether the bivector satisfies `⟦P,P⟧ = 0`.
pub fn is_poisson(p: &Multivector) -> Result<PoissonVerdict> {
    if p.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            found: p.degree(),
        });
    }
    let square = bracket_poisson(p, p)?;
    if square.is_trivial() {
        Ok(PoissonVerdict {
            poisson: true,
            witness: None,
        })
    } else {
        Ok(PoissonVerdict {
            poisson: false,
            witness: Some(square),
        })
    }
}

/// Probe densities of b-degree 0 to 2 and jet order at most 3.
pub fn default_probes(m: usize) -> Vec<DiffPolynomial> {
    let ix = |k: u32| MultiIndex::from_counts(vec![k]);
    let x = DiffPolynomial::x_pow(0, 1);
    let mut probes = Vec::new();
    for alpha in 0..m {
        let q = |k| DiffPolynomial::q(alpha, ix(k));
        let b = |k| DiffPolynomial::b(alpha, ix(k));
        probes.push(q(0));
        probes.push(&q(0) * &q(0));
        probes.push(&(&x * &q(1)) * &q(3));
        probes.push(b(0));
        probes.push(&q(0) * &b(0));
        probes.push(&q(1) * &b(2));
        probes.push(&b(0) * &b(1));
        probes.push(&(&q(0) * &b(0)) * &b(3));
    }
    if m > 1 {
        let cross_q = &DiffPolynomial::q(0, ix(1)) * &DiffPolynomial::q(1, ix(0));
        let cross_b = &DiffPolynomial::b(0, ix(0)) * &DiffPolynomial::b(1, ix(2));
        probes.push(cross_q);
        probes.push(cross_b);
    }
    probes
}

/// Checks `∫(Q^P)²(f) = 0` on [`default_probes`].
pub fn q_differential_check(p: &Multivector) -> Result<bool> {
    q_differential_check_with(p, &default_probes(p.geometry().m))
}

pub fn q_differential_check_with(p: &Multivector, probes: &[DiffPolynomial]) -> Result<bool> {
    if !is_poisson(p)?.poisson {
        return Err(Error::Precondition("the bivector is not Poisson".into()));
    }
    let q = q_field(p);
    Ok(probes
        .iter()
        .all(|f| crate::variational::is_exact(&q.apply(&q.apply(f)))))
}

/// `(-1)^{(a-1)(b-1)}` for multivector degrees.
pub fn antisymmetry_sign(a: usize, b: usize) -> i64 {
    if a % 2 == 0 && b % 2 == 0 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{rational, CovectorArg, Geometry};
    use crate::multivector::{evaluate, evaluate_args};
    use crate::variational::is_exact;

    fn ix(order: u32) -> MultiIndex {
        MultiIndex::from_counts(vec![order])
    }
    fn b(order: u32) -> DiffPolynomial {
        DiffPolynomial::b(0, ix(order))
    }
    fn q(order: u32) -> DiffPolynomial {
        DiffPolynomial::q(0, ix(order))
    }
    fn p(slot: u32, order: u32) -> DiffPolynomial {
        DiffPolynomial::p(slot, 0, ix(order))
    }
    fn x(exp: u32) -> DiffPolynomial {
        DiffPolynomial::x_pow(0, exp)
    }
    fn g() -> Geometry {
        Geometry::line(4)
    }
    fn mv(d: DiffPolynomial, k: usize) -> Multivector {
        Multivector::with_degree(d, g(), k).unwrap()
    }
    fn same(a: &DiffPolynomial, b: &DiffPolynomial) -> bool {
        is_exact(&(a - b))
    }

    fn bbx() -> Multivector {
        mv(&b(0) * &b(1), 2)
    }
    fn x3qxx() -> Multivector {
        mv(&(&b(0) * &x(3)) * &q(2), 1)
    }

    #[test]
    fn bbx_x3qxx_all_definitions() {
        let expected = (&(&x(3) * &b(3)) * &b(0)).scale_int(2);
        let a = bracket_poisson(&bbx(), &x3qxx()).unwrap();
        assert_eq!(a.degree(), 2);
        assert!(same(a.density(), &expected));
        let c = bracket_via_q(&bbx(), &x3qxx()).unwrap();
        assert!(same(c.density(), &expected));
        let r = bracket_recursive(&bbx(), &x3qxx()).unwrap();
        assert_eq!(r.slots, vec![1, 2]);
        assert!(same(r.reconstructed.density(), &expected));
    }

    #[test]
    fn bbx_with_qx_bbx() {
        let eta = mv(&(&q(1) * &b(0)) * &b(1), 2);
        let got = bracket_poisson(&bbx(), &eta).unwrap();
        let expected = (&(&b(0) * &b(1)) * &b(2)).scale_int(2);
        assert_eq!(got.degree(), 3);
        assert!(same(got.density(), &expected));
    }

    fn commutator(phi1: &DiffPolynomial, phi2: &DiffPolynomial) -> DiffPolynomial {
        let d1 = EvolutionaryField::from_q_sections(vec![phi1.clone()]);
        let d2 = EvolutionaryField::from_q_sections(vec![phi2.clone()]);
        &d1.apply(phi2) - &d2.apply(phi1)
    }

    #[test]
    fn one_vectors_give_minus_commutator() {
        for (phi1, phi2) in [
            (q(1), &q(0) * &q(1)),
            (&q(0) * &q(0), q(2)),
            (&x(1) * &q(1), &q(0) * &q(3)),
        ] {
            let xi = mv(&b(0) * &phi1, 1);
            let eta = mv(&b(0) * &phi2, 1);
            let expected = -(&b(0) * &commutator(&phi1, &phi2));
            let got = bracket_poisson(&xi, &eta).unwrap();
            assert!(same(got.density(), &expected));
            let rec = bracket_recursive(&xi, &eta).unwrap();
            let inserted = evaluate(&mv(expected, 1), &rec.slots).unwrap();
            assert!(same(rec.inserted.density(), inserted.density()));
        }
    }

    #[test]
    fn evaluated_form_of_bbx_x3qxx() {
        let r = bracket_recursive(&bbx(), &x3qxx()).unwrap();
        let expected = &(&x(3) * &p(1, 3)) * &p(2, 0) - &(&x(3) * &p(2, 3)) * &p(1, 0);
        assert!(same(r.inserted.density(), &expected));
        let from_a = evaluate(&bracket_poisson(&bbx(), &x3qxx()).unwrap(), &[1, 2]).unwrap();
        assert!(same(r.inserted.density(), from_a.density()));
    }

    #[test]
    fn base_case_examples() {
        let half_q2 = mv((&q(0) * &q(0)).scale(&rational(1, 2)), 0);
        for phi in [q(1), q(3)] {
            let out = bracket_base_case(&half_q2, &mv(&b(0) * &phi, 1)).unwrap();
            assert_eq!(*out.density(), &q(0) * &phi);
            assert!(out.is_trivial());
        }
        let xq = mv(&x(1) * &q(0), 0);
        let out = bracket_base_case(&xq, &mv(b(0), 1)).unwrap();
        assert_eq!(*out.density(), x(1));
        assert!(out.is_trivial());
        assert!(matches!(
            bracket_base_case(&bbx(), &mv(b(0), 1)),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn hamiltonian_insertion_factor_two() {
        let h = mv((&q(0) * &q(0)).scale(&rational(1, 2)), 0);
        let r = bracket_recursive(&h, &bbx()).unwrap();
        assert!(same(r.inserted.density(), &(&q(0) * &p(1, 1)).scale_int(2)));
        let dh = CovectorArg::section(vec![q(0)]).unwrap();
        let rhs = evaluate_args(&bbx(), &[dh, CovectorArg::Slot(1)]).unwrap();
        assert!(same(r.inserted.density(), &rhs.density().scale_int(2)));
    }

    #[test]
    fn q_field_examples() {
        let qf = q_field(&bbx());
        assert_eq!(qf.q_sections(), &[b(1).scale_int(2)]);
        assert!(qf.b_sections()[0].is_zero());
        assert!(qf.is_odd());

        let qf = q_field(&mv(&b(0) * &q(1), 1));
        assert_eq!(qf.q_sections(), &[-q(1)]);
        assert_eq!(qf.b_sections(), &[-b(1)]);
        assert!(!qf.is_odd());

        let qf = q_field(&mv((&q(0) * &q(0)).scale(&rational(1, 2)), 0));
        assert!(qf.q_sections()[0].is_zero());
        assert_eq!(qf.b_sections(), &[q(0)]);
    }

    #[test]
    fn via_q_trivial_cases() {
        let h1 = mv(&q(0) * &q(0), 0);
        let h2 = mv(&x(1) * &q(2), 0);
        assert!(bracket_via_q(&h1, &h2).unwrap().density().is_zero());
        assert!(bracket_via_q(&bbx(), &bbx()).unwrap().density().is_zero());
    }

    #[test]
    fn commutator_examples() {
        let qf = q_field(&bbx());
        assert!(graded_commutator(&qf, &qf, &q(0)).is_zero());
        let d1 = EvolutionaryField::from_q_sections(vec![q(1)]);
        let d2 = EvolutionaryField::from_q_sections(vec![&q(0) * &q(0)]);
        assert_eq!(
            graded_commutator(&d1, &d2, &q(0)),
            commutator(&q(1), &(&q(0) * &q(0)))
        );
    }

    #[test]
    fn field_is_a_derivation_but_bracket_is_not_a_biderivation() {
        let qf = q_field(&bbx());
        let f = &q(0) * &b(1);
        let h = &q(2) * &q(0);
        // Q^ξ is odd, f is odd
        let lhs = qf.apply(&(&f * &h));
        let rhs = &(&qf.apply(&f) * &h) - &(&f * &qf.apply(&h));
        assert_eq!(lhs, rhs);
        // ⟦ξ, F·G⟧ ≠ ⟦ξ,F⟧·G + F·⟦ξ,G⟧ once F carries a divergence:
        // ξ = ∫b b_x, F = ∫(x q + q_x) ≡ ∫x q, G = ∫x q
        let xi = bbx();
        let f_rep = &(&x(1) * &q(0)) + &q(1);
        let g_rep = &x(1) * &q(0);
        let whole = bracket_poisson(&xi, &mv(&f_rep * &g_rep, 0)).unwrap();
        let xi_f = bracket_poisson(&xi, &mv(f_rep.clone(), 0)).unwrap();
        let xi_g = bracket_poisson(&xi, &mv(g_rep.clone(), 0)).unwrap();
        let expanded = &(xi_f.density() * &g_rep) + &(&f_rep * xi_g.density());
        assert!(!same(whole.density(), &expanded));
    }

    #[test]
    fn jacobi_examples() {
        let ones = [
            mv(&b(0) * &q(1), 1),
            mv(&b(0) * &(&q(0) * &q(1)), 1),
            mv(&b(0) * &(&x(1) * &q(2)), 1),
        ];
        assert!(jacobi_defect(&ones[0], &ones[1], &ones[2])
            .unwrap()
            .is_trivial());
        assert!(jacobi_defect(&bbx(), &bbx(), &bbx()).unwrap().is_trivial());
        let p2 = mv(&(&q(0) * &b(0)) * &b(1), 2);
        assert!(jacobi_defect(&bbx(), &p2, &x3qxx()).unwrap().is_trivial());
    }

    #[test]
    fn poisson_examples() {
        assert!(is_poisson(&bbx()).unwrap().poisson);
        let kdv = mv(&(&b(0) * &b(3)) + &(&(&q(0) * &b(0)) * &b(1)), 2);
        assert!(is_poisson(&kdv).unwrap().poisson);
        assert!(q_differential_check(&bbx()).unwrap());
        assert!(q_differential_check(&kdv).unwrap());
        // ∫q b b_x is the operator qD + ½q_x, itself Poisson
        assert!(
            is_poisson(&mv(&(&q(0) * &b(0)) * &b(1), 2))
                .unwrap()
                .poisson
        );
        let qbbx = mv(&(&q(1) * &b(0)) * &b(1), 2);
        let verdict = is_poisson(&qbbx).unwrap();
        assert!(!verdict.poisson);
        assert!(!verdict.witness.unwrap().is_trivial());
        assert!(matches!(
            q_differential_check(&qbbx),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            is_poisson(&x3qxx()),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn reports_carry_zero_flag() {
        let rep = bracket(&bbx(), &bbx(), Method::Poisson).unwrap();
        assert!(rep.zero);
        assert_eq!(rep.degree(), None);
        let rep = bracket(&bbx(), &x3qxx(), Method::Recursive).unwrap();
        assert_eq!(rep.degree(), Some(2));
    }

    #[test]
    fn slot_exhaustion() {
        let tiny = Geometry::line(1);
        let xi = Multivector::with_degree(&b(0) * &b(1), tiny, 2).unwrap();
        let eta = Multivector::with_degree(&(&b(0) * &x(3)) * &q(2), tiny, 1).unwrap();
        assert!(matches!(
            bracket_recursive(&xi, &eta),
            Err(Error::SlotsExhausted { .. })
        ));
    }

    #[test]
    fn geometry_mismatch() {
        let other = Multivector::with_degree(b(0), Geometry::line(2), 1).unwrap();
        assert_eq!(
            bracket_poisson(&bbx(), &other).unwrap_err(),
            Error::GeometryMismatch
        );
    }
}
