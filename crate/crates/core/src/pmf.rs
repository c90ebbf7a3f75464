//! Dense probability mass functions over consecutive integers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Which construction produced a [`Pmf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PmfKind {
    /// Dynamic program over the Bernoulli sum T_n.
    BernoulliSum,
    /// Compound-Poisson recurrence for Y_n.
    PoissonSum,
    /// Discrete characteristic-function inversion (test oracle).
    FftOracle,
    /// Full outcome enumeration (test oracle).
    BruteForce,
}

/// Dense finite-support pmf: `probs[i]` is the probability of `offset + i`.
#[derive(Debug, Clone)]
pub struct Pmf {
    offset: usize,
    probs: Vec<f64>,
    n: u32,
    kind: PmfKind,
    /// Entries in [-1e-15, 0) clamped to zero during construction.
    clamped: usize,
    /// For truncated constructions (Poisson): the mass not represented.
    mass_deficit: f64,
}

impl Pmf {
    /// Wrap a probability vector, clamping tiny negative rounding noise to
    /// zero (counted) and rejecting anything more negative.  For exact
    /// constructions the total mass must be 1 within 1e-10.
    pub fn new(offset: usize, mut probs: Vec<f64>, n: u32, kind: PmfKind) -> Result<Pmf> {
        let mut clamped = 0usize;
        for p in probs.iter_mut() {
            if *p < 0.0 {
                if *p >= -1e-15 {
                    *p = 0.0;
                    clamped += 1;
                } else {
                    return Err(Error::Numerical {
                        what: "pmf construction",
                        message: format!("probability {p} below the clamping threshold"),
                    });
                }
            }
        }
        let total: f64 = probs.iter().copied().collect::<KahanSum>().value();
        let mass_deficit = 1.0 - total;
        if kind != PmfKind::PoissonSum && mass_deficit.abs() > 1e-10 {
            return Err(Error::Numerical {
                what: "pmf normalization",
                message: format!("total mass {total} for kind {kind:?}"),
            });
        }
        Ok(Pmf {
            offset,
            probs,
            n,
            kind,
            clamped,
            mass_deficit,
        })
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> PmfKind {
        self.kind
    }

    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn mass_deficit(&self) -> f64 {
        self.mass_deficit
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest support point (inclusive).
    pub fn support_end(&self) -> usize {
        self.offset + self.probs.len() - 1
    }

    /// P(X = m), zero outside the stored range.
    #[inline]
    pub fn prob(&self, m: usize) -> f64 {
        if m < self.offset || m > self.support_end() {
            0.0
        } else {
            self.probs[m - self.offset]
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().copied().collect::<KahanSum>().value()
    }

    pub fn mean(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (i, &p) in self.probs.iter().enumerate() {
            acc.add((self.offset + i) as f64 * p);
        }
        acc.value()
    }

    /// Variance around the given center (use the exact mean when known).
    pub fn variance_about(&self, center: f64) -> f64 {
        let mut acc = KahanSum::new();
        for (i, &p) in self.probs.iter().enumerate() {
            let d = (self.offset + i) as f64 - center;
            acc.add(d * d * p);
        }
        acc.value()
    }

    pub fn variance(&self) -> f64 {
        self.variance_about(self.mean())
    }
}
