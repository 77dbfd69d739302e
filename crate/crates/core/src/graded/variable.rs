use std::fmt;

use super::MultiIndex;
use crate::error::{Error, Result};

/// Base dimension `n`, fiber rank `m` and the number `s` of covector slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Geometry {
    pub n: usize,
    pub m: usize,
    pub s: usize,
}

impl Geometry {
    pub fn new(n: usize, m: usize, s: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidGeometry { n, m, s });
        }
        Ok(Geometry { n, m, s })
    }

    /// One base dimension, one fiber component.
    pub fn line(s: usize) -> Self {
        Geometry { n: 1, m: 1, s }
    }

    pub fn check_variable(&self, var: &JetVariable) -> Result<()> {
        if var.fiber >= self.m {
            return Err(Error::IndexOutOfRange(format!(
                "fiber {} exceeds m = {}",
                var.fiber + 1,
                self.m
            )));
        }
        if let Some(d) = var.index.max_dim() {
            if d >= self.n {
                return Err(Error::IndexOutOfRange(format!(
                    "derivative along x{} exceeds n = {}",
                    d + 1,
                    self.n
                )));
            }
        }
        if let VarKind::Slot(j) = var.kind {
            if j == 0 || j as usize > self.s {
                return Err(Error::IndexOutOfRange(format!(
                    "covector slot {j} outside 1..={}",
                    self.s
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} s={}", self.n, self.m, self.s)
    }
}

/// What a jet generator stands for. `Slot(j)` is the covector slot `p^(j)`,
/// numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Even fiber coordinate `q`.
    Even,
    /// Odd parity-reversed covector coordinate `b`.
    Odd,
    /// Even covector-slot coordinate `p^(j)`; carries no `q`-dependence.
    Slot(u32),
}

/// A jet coordinate `q^α_σ`, `b_{α,σ}` or `p^(j)_{α,σ}`.
///
/// The fiber index is zero-based. The derived order compares kind, then
/// fiber, then multi-index; restricted to odd variables it is the global
/// `(α, σ)` order used to sort odd factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVariable {
    pub kind: VarKind,
    pub fiber: usize,
    pub index: MultiIndex,
}

impl JetVariable {
    pub fn new(kind: VarKind, fiber: usize, index: MultiIndex) -> Self {
        JetVariable { kind, fiber, index }
    }

    pub fn q(fiber: usize, index: MultiIndex) -> Self {
        Self::new(VarKind::Even, fiber, index)
    }

    pub fn b(fiber: usize, index: MultiIndex) -> Self {
        Self::new(VarKind::Odd, fiber, index)
    }

    pub fn p(slot: u32, fiber: usize, index: MultiIndex) -> Self {
        Self::new(VarKind::Slot(slot), fiber, index)
    }

    pub fn is_odd(&self) -> bool {
        self.kind == VarKind::Odd
    }

    /// `D_i` applied to the coordinate.
    pub fn shifted(&self, dim: usize) -> Self {
        JetVariable {
            kind: self.kind,
            fiber: self.fiber,
            index: self.index.incremented(dim),
        }
    }

    pub fn with_index(&self, index: MultiIndex) -> Self {
        JetVariable {
            kind: self.kind,
            fiber: self.fiber,
            index,
        }
    }
}

impl fmt::Display for JetVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Even => write!(f, "q{}", self.fiber + 1)?,
            VarKind::Odd => write!(f, "b{}", self.fiber + 1)?,
            VarKind::Slot(j) => write!(f, "p{}.{}", j, self.fiber + 1)?,
        }
        if !self.index.is_zero() {
            write!(f, "_")?;
            for d in self.index.dims() {
                write!(f, "x{}", d + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_bounds() {
        assert!(Geometry::new(0, 1, 0).is_err());
        assert!(Geometry::new(1, 0, 0).is_err());
        let g = Geometry::new(1, 2, 2).unwrap();
        assert!(g
            .check_variable(&JetVariable::q(1, MultiIndex::zero()))
            .is_ok());
        assert!(g
            .check_variable(&JetVariable::q(2, MultiIndex::zero()))
            .is_err());
        assert!(g
            .check_variable(&JetVariable::b(0, MultiIndex::unit(1)))
            .is_err());
        assert!(g
            .check_variable(&JetVariable::p(3, 0, MultiIndex::zero()))
            .is_err());
        assert!(g
            .check_variable(&JetVariable::p(0, 0, MultiIndex::zero()))
            .is_err());
    }

    #[test]
    fn odd_order_follows_fiber_then_index() {
        let b1x = JetVariable::b(0, MultiIndex::unit(0));
        let b2 = JetVariable::b(1, MultiIndex::zero());
        let b1 = JetVariable::b(0, MultiIndex::zero());
        assert!(b1 < b1x);
        assert!(b1x < b2);
    }
}
