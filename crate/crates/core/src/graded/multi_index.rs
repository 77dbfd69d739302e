use std::cmp::Ordering;
use std::fmt;

/// A multi-index `σ` counting derivatives along each base dimension.
///
/// Stored as a dense count vector with trailing zeros trimmed, so the
/// order-0 index is the empty vector and equal indices have equal storage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex(Vec::new())
    }

    /// The unit index `1_i` (zero-based dimension).
    pub fn unit(dim: usize) -> Self {
        let mut counts = vec![0; dim + 1];
        counts[dim] = 1;
        MultiIndex(counts)
    }

    pub fn from_counts(counts: impl Into<Vec<u32>>) -> Self {
        let mut index = MultiIndex(counts.into());
        index.trim();
        index
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn count(&self, dim: usize) -> u32 {
        self.0.get(dim).copied().unwrap_or(0)
    }

    /// Total order `|σ|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest dimension (zero-based) with a nonzero count, if any.
    pub fn max_dim(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// `σ + 1_i`.
    pub fn incremented(&self, dim: usize) -> Self {
        let mut counts = self.0.clone();
        if counts.len() <= dim {
            counts.resize(dim + 1, 0);
        }
        counts[dim] += 1;
        MultiIndex(counts)
    }

    /// `σ - 1_i`, or `None` if dimension `i` carries no derivative.
    pub fn decremented(&self, dim: usize) -> Option<Self> {
        if self.count(dim) == 0 {
            return None;
        }
        let mut index = self.clone();
        index.0[dim] -= 1;
        index.trim();
        Some(index)
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        let len = self.0.len().max(other.0.len());
        let counts: Vec<u32> = (0..len).map(|d| self.count(d) + other.count(d)).collect();
        MultiIndex(counts)
    }

    /// First dimension carrying a derivative.
    pub fn first_dim(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }

    /// The dimensions of `σ` listed with multiplicity, e.g. `[0, 0, 1]` for `x1 x1 x2`.
    pub fn dims(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(d, &c)| std::iter::repeat_n(d, c as usize))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // Trimmed vectors compare like their zero-padded forms.
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(MultiIndex::from_counts(vec![0, 0]), MultiIndex::zero());
        assert_eq!(MultiIndex::from_counts(vec![1, 0]), MultiIndex::unit(0));
    }

    #[test]
    fn order_is_total_then_lexicographic() {
        let x = MultiIndex::unit(0);
        let xx = MultiIndex::from_counts(vec![2]);
        let xy = MultiIndex::from_counts(vec![1, 1]);
        let y = MultiIndex::unit(1);
        assert!(MultiIndex::zero() < y);
        assert!(y < x);
        assert!(x < xy);
        assert!(xy < xx);
    }

    #[test]
    fn increment_and_decrement() {
        let s = MultiIndex::zero().incremented(1).incremented(0);
        assert_eq!(s.counts(), &[1, 1]);
        assert_eq!(s.decremented(1), Some(MultiIndex::unit(0)));
        assert_eq!(MultiIndex::unit(0).decremented(1), None);
        assert_eq!(s.dims(), vec![0, 1]);
        assert_eq!(s.add(&s).counts(), &[2, 2]);
    }
}
