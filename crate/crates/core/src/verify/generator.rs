use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graded::{DiffPolynomial, Geometry, JetVariable, MultiIndex, Rational};
use crate::multivector::Multivector;
use crate::variational::is_exact;

/// Bounds for random densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Largest b-degree.
    pub max_degree: usize,
    /// Largest jet order `|σ|`.
    pub max_order: u32,
    pub max_terms: usize,
    /// Bound on numerators and denominators.
    pub coeff_bound: i64,
    pub geometry: Geometry,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            max_degree: 3,
            max_order: 3,
            max_terms: 4,
            coeff_bound: 5,
            geometry: Geometry::line(6),
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorConfig {
            seed,
            ..Default::default()
        }
    }
}

pub const MAX_RETRIES: usize = 32;

/// A deterministic stream of random objects. Case `i` of a battery uses
/// stream `i` of the configured seed, so any case replays on its own.
pub struct Generator {
    cfg: GeneratorConfig,
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(cfg: GeneratorConfig) -> Self {
        Generator::for_case(cfg, 0)
    }

    pub fn for_case(cfg: GeneratorConfig, case: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(case);
        Generator { cfg, rng }
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.cfg
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.random_range(lo..=hi)
    }

    pub fn coefficient(&mut self) -> Rational {
        let b = self.cfg.coeff_bound.max(1);
        let mut num = self.rng.random_range(1..=b);
        if self.rng.random_bool(0.5) {
            num = -num;
        }
        let den = self.rng.random_range(1..=b);
        Rational::new(num.into(), den.into())
    }

    pub fn multi_index(&mut self) -> MultiIndex {
        let n = self.cfg.geometry.n;
        let order = self.rng.random_range(0..=self.cfg.max_order);
        let mut counts = vec![0u32; n];
        for _ in 0..order {
            counts[self.rng.random_range(0..n)] += 1;
        }
        MultiIndex::from_counts(counts)
    }

    fn fiber(&mut self) -> usize {
        self.rng.random_range(0..self.cfg.geometry.m)
    }

    fn even_factor(&mut self, slots: bool) -> DiffPolynomial {
        let fiber = self.fiber();
        let index = self.multi_index();
        if slots && self.cfg.geometry.s > 0 && self.rng.random_bool(0.3) {
            let j = self.rng.random_range(1..=self.cfg.geometry.s as u32);
            DiffPolynomial::p(j, fiber, index)
        } else {
            DiffPolynomial::q(fiber, index)
        }
    }

    fn base_factor(&mut self) -> DiffPolynomial {
        let mut acc = DiffPolynomial::one();
        for dim in 0..self.cfg.geometry.n {
            if self.rng.random_bool(0.3) {
                acc = &acc * &DiffPolynomial::x_pow(dim, self.rng.random_range(1..=3));
            }
        }
        acc
    }

    /// One nonzero term of b-degree `k`.
    fn term(&mut self, k: usize, slots: bool) -> DiffPolynomial {
        loop {
            let mut acc = DiffPolynomial::constant(self.coefficient());
            acc = &acc * &self.base_factor();
            let evens = if k == 0 {
                self.rng.random_range(1..=3)
            } else {
                self.rng.random_range(0..=2)
            };
            for _ in 0..evens {
                acc = &acc * &self.even_factor(slots);
            }
            for _ in 0..k {
                let v = JetVariable::b(self.fiber(), self.multi_index());
                acc = &acc * &DiffPolynomial::var(v);
            }
            if !acc.is_zero() {
                return acc;
            }
        }
    }

    /// A b-homogeneous density of degree `k`; may be exact.
    pub fn density(&mut self, k: usize) -> DiffPolynomial {
        let terms = self.rng.random_range(1..=self.cfg.max_terms.max(1));
        (0..terms).map(|_| self.term(k, false)).sum()
    }

    /// A nontrivial `k`-vector, redrawn while its class is zero.
    pub fn multivector(&mut self, k: usize) -> Result<Multivector> {
        if k > self.cfg.max_degree {
            return Err(Error::Precondition(format!(
                "degree {k} exceeds max_degree {}",
                self.cfg.max_degree
            )));
        }
        for _ in 0..MAX_RETRIES {
            let d = self.density(k);
            if !is_exact(&d) {
                return Multivector::with_degree(d, self.cfg.geometry, k);
            }
        }
        Err(Error::RetryExhausted(MAX_RETRIES))
    }

    /// A total divergence `Σ D_i(g_i)` of b-degree `k`.
    pub fn exact_density(&mut self, k: usize) -> DiffPolynomial {
        (0..self.cfg.geometry.n)
            .map(|i| self.density(k).total_derivative(i))
            .sum()
    }

    /// A density of mixed degrees that may contain covector slots.
    pub fn polynomial(&mut self) -> DiffPolynomial {
        let terms = self.rng.random_range(0..=self.cfg.max_terms.max(1));
        let mut acc = DiffPolynomial::zero();
        for _ in 0..terms {
            let k = self.rng.random_range(0..=self.cfg.max_degree);
            acc += if self.rng.random_bool(0.1) {
                DiffPolynomial::constant(self.coefficient())
            } else {
                self.term(k, true)
            };
        }
        acc
    }
}

/// `random_multivector` with a fresh generator for `cfg`.
pub fn random_multivector(cfg: GeneratorConfig, k: usize) -> Result<Multivector> {
    Generator::new(cfg).multivector(k)
}
