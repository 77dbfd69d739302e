use super::{DiffPolynomial, JetVariable, Monomial, MultiIndex, VarKind};
use crate::error::{Error, Result};

/// Something that can stand in for `b` in an argument slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CovectorArg {
    /// The horizontal-jet symbol `p^(j)`: `b_{α,σ} ↦ p^(j)_{α,σ}`.
    Slot(u32),
    /// A section with components `P_α`: `b_{α,σ} ↦ D_σ(P_α)`. Such sections
    /// may depend on `q`, which is what distinguishes actual covectors from
    /// slot symbols.
    Section(Vec<DiffPolynomial>),
}

impl CovectorArg {
    pub fn section(components: Vec<DiffPolynomial>) -> Result<Self> {
        if components.iter().any(|c| !c.is_b_free()) {
            return Err(Error::OddSection);
        }
        Ok(CovectorArg::Section(components))
    }

    /// The value replacing `b_{fiber,index}`.
    pub fn at(&self, fiber: usize, index: &MultiIndex) -> DiffPolynomial {
        match self {
            CovectorArg::Slot(j) => DiffPolynomial::p(*j, fiber, index.clone()),
            CovectorArg::Section(components) => components
                .get(fiber)
                .map(|c| c.total_derivative_multi(index))
                .unwrap_or_default(),
        }
    }
}

/// Replaces the `i`-th odd factor (left to right, in canonical order) of each
/// monomial by `args[i]`. Monomials without odd factors pass through; all
/// others must have exactly `args.len()` odd factors.
pub fn substitute_positional(f: &DiffPolynomial, args: &[CovectorArg]) -> Result<DiffPolynomial> {
    let mut out = DiffPolynomial::zero();
    for (m, c) in f.terms() {
        let k = m.b_degree();
        if k == 0 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        if k != args.len() {
            return Err(Error::ArityMismatch {
                expected: k,
                found: args.len(),
            });
        }
        let mut acc = DiffPolynomial::term(c.clone(), m.even_only());
        for (var, arg) in m.odd().iter().zip(args) {
            acc = &acc * &arg.at(var.fiber, &var.index);
        }
        out += acc;
    }
    Ok(out)
}

/// Turns a b-free density multilinear in the slots `slots[0], slots[1], …`
/// back into a b-density: in each monomial the `p^(slots[i])` factor becomes
/// the `i`-th odd factor from the left. This inverts [`substitute_positional`]
/// composed with skew-symmetrization.
pub fn reconstruct_odd(f: &DiffPolynomial, slots: &[u32]) -> Result<DiffPolynomial> {
    let mut out = DiffPolynomial::zero();
    for (m, c) in f.terms() {
        if m.b_degree() != 0 {
            return Err(Error::Precondition(
                "reconstruction expects a density without odd variables".into(),
            ));
        }
        let mut odd: Vec<Option<JetVariable>> = vec![None; slots.len()];
        let mut even = Vec::new();
        for (var, exp) in m.even() {
            let pos = match var.kind {
                VarKind::Slot(j) => slots.iter().position(|&s| s == j),
                _ => None,
            };
            match pos {
                Some(i) => {
                    if *exp != 1 || odd[i].is_some() {
                        return Err(Error::Precondition(format!(
                            "density is not linear in slot p{}",
                            slots[i]
                        )));
                    }
                    odd[i] = Some(JetVariable::b(var.fiber, var.index.clone()));
                }
                None => even.push((var.clone(), *exp)),
            }
        }
        let odd: Option<Vec<JetVariable>> = odd.into_iter().collect();
        let odd =
            odd.ok_or_else(|| Error::Precondition("density does not contain every slot".into()))?;
        if let Some((mono, negative)) = Monomial::from_parts(m.base().to_vec(), even, odd) {
            out.add_term(mono, if negative { -c.clone() } else { c.clone() });
        }
    }
    Ok(out)
}
