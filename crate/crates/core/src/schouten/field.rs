use crate::graded::{DiffPolynomial, JetVariable, Side, VarKind};
use crate::multivector::Multivector;
use crate::variational::{var_derivative_b, var_derivative_q};

/// A graded evolutionary vector field `∂_q^φ + ∂_b^ψ`.
///
/// Applied to `f` it gives `Σ D_σ(φ^α)·∂^l f/∂q^α_σ + Σ D_σ(ψ_α)·∂^l f/∂b_{α,σ}`:
/// the transported section always multiplies the left partial derivative from
/// the left. With right multiplication the two bracket constructions disagree
/// in sign, e.g. on `⟦∫b b_x, ∫b x³ q_xx⟧`. Covector slots are inert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionaryField {
    q_sections: Vec<DiffPolynomial>,
    b_sections: Vec<DiffPolynomial>,
    odd: bool,
}

impl EvolutionaryField {
    /// `odd` is the parity of the field as a derivation.
    pub fn new(
        q_sections: Vec<DiffPolynomial>,
        b_sections: Vec<DiffPolynomial>,
        odd: bool,
    ) -> Self {
        EvolutionaryField {
            q_sections,
            b_sections,
            odd,
        }
    }

    /// The ordinary evolutionary field `∂_q^φ`; its parity is that of `φ`.
    pub fn from_q_sections(q_sections: Vec<DiffPolynomial>) -> Self {
        let odd = q_sections
            .iter()
            .find_map(DiffPolynomial::homogeneous_degree)
            .is_some_and(|d| d % 2 == 1);
        let m = q_sections.len();
        EvolutionaryField::new(q_sections, vec![DiffPolynomial::zero(); m], odd)
    }

    pub fn q_sections(&self) -> &[DiffPolynomial] {
        &self.q_sections
    }

    pub fn b_sections(&self) -> &[DiffPolynomial] {
        &self.b_sections
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    fn section_for(&self, var: &JetVariable) -> Option<&DiffPolynomial> {
        match var.kind {
            VarKind::Even => self.q_sections.get(var.fiber),
            VarKind::Odd => self.b_sections.get(var.fiber),
            VarKind::Slot(_) => None,
        }
    }

    pub fn apply(&self, f: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for var in f.variables() {
            let Some(section) = self.section_for(&var) else {
                continue;
            };
            if section.is_zero() {
                continue;
            }
            let partial = f.partial(&var, Side::Left);
            if partial.is_zero() {
                continue;
            }
            out += &section.total_derivative_multi(&var.index) * &partial;
        }
        out
    }
}

/// `Q^ξ = ∂_q^{-δ^R ξ/δb} + ∂_b^{δ^R ξ/δq}`, of parity `deg ξ - 1`.
pub fn q_field(xi: &Multivector) -> EvolutionaryField {
    let m = xi.geometry().m;
    let q_sections = (0..m)
        .map(|alpha| -var_derivative_b(xi.density(), alpha, Side::Right))
        .collect();
    let b_sections = (0..m)
        .map(|alpha| var_derivative_q(xi.density(), alpha))
        .collect();
    let odd = xi.degree() % 2 == 0;
    EvolutionaryField::new(q_sections, b_sections, odd)
}

/// `X(Y(f)) - (-1)^{|X||Y|} Y(X(f))`.
pub fn graded_commutator(
    x: &EvolutionaryField,
    y: &EvolutionaryField,
    f: &DiffPolynomial,
) -> DiffPolynomial {
    let xy = x.apply(&y.apply(f));
    let yx = y.apply(&x.apply(f));
    if x.odd && y.odd {
        &xy + &yx
    } else {
        &xy - &yx
    }
}
