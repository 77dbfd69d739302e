use jetschouten::graded::{parity_sign, rational, DiffPolynomial, Geometry, MultiIndex, Side};
use jetschouten::multivector::{evaluate, extract_operator, insert, Multivector};
use jetschouten::schouten::{bracket_poisson, EvolutionaryField};
use jetschouten::variational::{
    equivalent, euler_operator, is_exact, normalize_to_ba_form, var_derivative_b, Functional,
};
use jetschouten::verify::{Generator, GeneratorConfig};
use jetschouten::VarKind;
use proptest::prelude::*;

fn cfg(seed: u64, n: usize) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        max_degree: 3,
        max_order: 2,
        max_terms: 3,
        coeff_bound: 5,
        geometry: Geometry::new(n, 1, 6).unwrap(),
    }
}

fn gen(seed: u64) -> Generator {
    Generator::new(cfg(seed, 1))
}

fn same(a: &DiffPolynomial, b: &DiffPolynomial) -> bool {
    is_exact(&(a - b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_are_graded_commutative(seed: u64, k in 0usize..3, l in 0usize..3) {
        let mut g = gen(seed);
        let (f, h) = (g.density(k), g.density(l));
        let sign = if k % 2 == 1 && l % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(&f * &h, (&h * &f).scale_int(sign));
    }

    #[test]
    fn canonical_form_is_idempotent(seed: u64) {
        let f = gen(seed).polynomial();
        prop_assert_eq!(f.recanonicalized(), f.clone());
        prop_assert_eq!(&f + &DiffPolynomial::zero(), f);
    }

    #[test]
    fn total_derivative_is_a_derivation(seed: u64, k in 0usize..3) {
        let mut g = gen(seed);
        let (f, h) = (g.density(k), g.density(1));
        let lhs = (&f * &h).total_derivative(0);
        let rhs = &(&f.total_derivative(0) * &h) + &(&f * &h.total_derivative(0));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivatives_commute(seed: u64, k in 0usize..3) {
        let f = Generator::new(cfg(seed, 2)).density(k);
        prop_assert_eq!(
            f.total_derivative(0).total_derivative(1),
            f.total_derivative(1).total_derivative(0)
        );
    }

    #[test]
    fn right_and_left_b_derivatives_differ_by_parity(seed: u64, k in 1usize..4) {
        let f = gen(seed).density(k);
        let sign = parity_sign(k - 1);
        for v in f.variables().into_iter().filter(|v| v.kind == VarKind::Odd) {
            prop_assert_eq!(f.partial(&v, Side::Right), f.partial(&v, Side::Left).scale_int(sign));
        }
    }

    #[test]
    fn euler_operators_annihilate_divergences(seed: u64, k in 0usize..4) {
        let exact = gen(seed).exact_density(k);
        prop_assert!(is_exact(&exact));
        for (kind, fiber) in exact.variable_families() {
            prop_assert!(euler_operator(&exact, kind, fiber, Side::Left).is_zero());
        }
    }

    #[test]
    fn exactness_agrees_with_every_euler_operator(seed: u64, exact in any::<bool>()) {
        let mut g = gen(seed);
        let mut f = g.polynomial();
        if exact {
            f = &g.exact_density(1) + &g.exact_density(0);
        }
        let all = f
            .variable_families()
            .into_iter()
            .all(|(kind, fiber)| euler_operator(&f, kind, fiber, Side::Left).is_zero());
        prop_assert_eq!(is_exact(&f), all);
    }

    #[test]
    fn normal_form_stays_in_class(seed: u64, k in 1usize..4) {
        let g = Geometry::line(6);
        let f = Functional::new(gen(seed).density(k), g).unwrap();
        let n = normalize_to_ba_form(&f).unwrap();
        prop_assert!(equivalent(&f, &Functional::new(n.clone(), g).unwrap()).unwrap());
        for (m, _) in n.terms() {
            prop_assert!(m.odd()[0].index.is_zero());
        }
    }

    #[test]
    fn operator_extraction_recovers_the_class(seed: u64, k in 1usize..4) {
        // δ^L ξ/δb = k A(b,…,b)
        let xi = gen(seed).multivector(k).unwrap();
        let a = extract_operator(&xi).unwrap();
        prop_assert!(same(&a.pair_with_b(), xi.density()));
    }

    #[test]
    fn iterated_insertion_is_evaluation(seed: u64, k in 1usize..4) {
        let xi = gen(seed).multivector(k).unwrap();
        let slots: Vec<u32> = (1..=k as u32).collect();
        let mut acc = xi.clone();
        for &j in slots.iter().rev() {
            acc = insert(&acc, j).unwrap();
        }
        let full = evaluate(&xi, &slots).unwrap();
        prop_assert_eq!(acc.density(), full.density());
    }

    #[test]
    fn evaluation_is_skew(seed: u64, k in 2usize..4) {
        let xi = gen(seed).multivector(k).unwrap();
        let mut slots: Vec<u32> = (1..=k as u32).collect();
        let before = evaluate(&xi, &slots).unwrap();
        slots.swap(0, 1);
        let after = evaluate(&xi, &slots).unwrap();
        prop_assert_eq!(before.density().clone(), -after.density());
    }

    #[test]
    fn insertion_commutes_with_b_derivative(seed: u64, k in 2usize..4) {
        // δ^L(ξ(p))/δb = (k-1)/k (δ^L ξ/δb)(p), and the right version with a sign
        let xi = gen(seed).multivector(k).unwrap();
        let inserted = insert(&xi, 1).unwrap();
        let factor = rational(k as i64 - 1, k as i64);
        let left = var_derivative_b(xi.density(), 0, Side::Left);
        let left = Multivector::with_degree(left, xi.geometry(), k - 1).unwrap();
        let expected = insert(&left, 1).unwrap().density().scale(&factor);
        prop_assert_eq!(var_derivative_b(inserted.density(), 0, Side::Left), expected);
        let right = var_derivative_b(xi.density(), 0, Side::Right);
        let right = Multivector::with_degree(right, xi.geometry(), k - 1).unwrap();
        let expected = -insert(&right, 1).unwrap().density().scale(&factor);
        prop_assert_eq!(var_derivative_b(inserted.density(), 0, Side::Right), expected);
    }

    #[test]
    fn bracket_through_operators(seed: u64, k in 0usize..4, l in 0usize..4) {
        // ⟦ξ,η⟧ = ∫ (-1)^{k(ℓ-1)} ℓ ∂_q^B ξ - (-1)^{k-1} k ∂_q^A η
        let mut g = gen(seed);
        let xi = g.multivector(k).unwrap();
        let eta = g.multivector(l).unwrap();
        let field = |m: &Multivector| EvolutionaryField::from_q_sections(vec![var_derivative_b(m.density(), 0, Side::Left)]);
        let first = field(&eta).apply(xi.density()).scale_int(parity_sign(k * (l + 1)));
        let second = field(&xi).apply(eta.density()).scale_int(parity_sign(k + 1));
        let expected = &first - &second;
        let got = bracket_poisson(&xi, &eta).unwrap();
        prop_assert!(same(got.density(), &expected));
    }

    #[test]
    fn graded_antisymmetry(seed: u64, k in 0usize..4, l in 0usize..4) {
        let mut g = gen(seed);
        let xi = g.multivector(k).unwrap();
        let eta = g.multivector(l).unwrap();
        let sign = if k % 2 == 0 && l % 2 == 0 { -1 } else { 1 };
        let a = bracket_poisson(&xi, &eta).unwrap();
        let b = bracket_poisson(&eta, &xi).unwrap();
        prop_assert!(is_exact(&(a.density() + &b.density().scale_int(sign))));
    }

    #[test]
    fn degree_law(seed: u64, k in 0usize..4, l in 0usize..4) {
        let mut g = gen(seed);
        let xi = g.multivector(k).unwrap();
        let eta = g.multivector(l).unwrap();
        let a = bracket_poisson(&xi, &eta).unwrap();
        if !a.is_trivial() {
            prop_assert_eq!(a.density().homogeneous_degree(), Some(k + l - 1));
        }
    }
}

#[test]
fn naive_wedge_depends_on_representatives() {
    // ∫f⟨b,φ⟩ changes when f is shifted by a divergence
    let g = Geometry::line(2);
    let f = DiffPolynomial::q(0, MultiIndex::zero());
    let shift = (&f * &f).total_derivative(0);
    let phi =
        &DiffPolynomial::b(0, MultiIndex::zero()) * &DiffPolynomial::q(0, MultiIndex::unit(0));
    let plain = Functional::new(&f * &phi, g).unwrap();
    let shifted = Functional::new(&(&f + &shift) * &phi, g).unwrap();
    assert!(Functional::new(shift, g).unwrap().is_trivial());
    assert!(!equivalent(&plain, &shifted).unwrap());
}
