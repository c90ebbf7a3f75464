//! Target sequences {m_n} for the hit-counting statistics L_N: the
//! canonical m_n = floor(u n) family plus user-supplied non-decreasing
//! sequences, with the drift and multiplicity statistics controlling the
//! error term of the almost-sure law.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    FloorUn,
    Custom,
}

/// A non-decreasing integer target sequence with level parameter u.
#[derive(Debug, Clone)]
pub struct TargetSequence {
    kind: TargetKind,
    u: f64,
    /// Custom values (1-indexed by n via values[n-1]); empty for floor_un.
    values: Vec<u64>,
    strict: bool,
}

/// Multiplicity statistics theta_m = #{n : m_n = m} over a finite run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThetaStats {
    /// max_m theta_m (the q of the non-decreasing regime).
    pub q_max: u64,
    /// Number of distinct target values visited.
    pub distinct: u64,
}

impl TargetSequence {
    /// m_n = floor(u n).  In strict mode the sequence must be strictly
    /// increasing, which requires u >= 1 (for u < 1 consecutive values
    /// of floor(u n) repeat, so strict mode is rejected).
    pub fn floor_un(u: f64, strict: bool) -> Result<Self> {
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::InvalidInput {
                what: "target sequence",
                message: format!("u must be positive and finite, got {u}"),
            });
        }
        if strict && u < 1.0 {
            return Err(Error::InvalidInput {
                what: "target sequence",
                message: format!(
                    "strictly increasing targets require u >= 1 (got u = {u}); \
                     floor(u n) repeats values when u < 1"
                ),
            });
        }
        Ok(TargetSequence {
            kind: TargetKind::FloorUn,
            u,
            values: Vec::new(),
            strict,
        })
    }

    /// A custom non-decreasing sequence; `u` is the nominal slope used for
    /// the drift statistics (never trusted from the data itself).
    pub fn custom(values: Vec<u64>, u: f64, strict: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput {
                what: "target sequence",
                message: "custom sequence must be non-empty".into(),
            });
        }
        for w in values.windows(2) {
            if w[1] < w[0] {
                return Err(Error::InvalidInput {
                    what: "target sequence",
                    message: format!("not non-decreasing: {} -> {}", w[0], w[1]),
                });
            }
            if strict && w[1] == w[0] {
                return Err(Error::InvalidInput {
                    what: "target sequence",
                    message: format!("not strictly increasing at value {}", w[0]),
                });
            }
        }
        Ok(TargetSequence {
            kind: TargetKind::Custom,
            u,
            values,
            strict,
        })
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn strict(&self) -> bool {
        self.strict
    }

    /// Largest n the sequence can serve (unbounded for floor_un).
    pub fn len_limit(&self) -> Option<u64> {
        match self.kind {
            TargetKind::FloorUn => None,
            TargetKind::Custom => Some(self.values.len() as u64),
        }
    }

    /// m_n (n >= 1).
    #[inline]
    pub fn m(&self, n: u64) -> u64 {
        match self.kind {
            TargetKind::FloorUn => (self.u * n as f64).floor() as u64,
            TargetKind::Custom => self.values[(n - 1) as usize],
        }
    }

    /// Per-n drift |m_n - u n| / n, recomputed from the values.
    #[inline]
    pub fn epsilon(&self, n: u64) -> f64 {
        (self.m(n) as f64 - self.u * n as f64).abs() / n as f64
    }

    /// eta_N = (1/log N) sum_{n<=N} epsilon_n / n.
    pub fn eta(&self, n_max: u64) -> f64 {
        if n_max < 2 {
            return 0.0;
        }
        let mut acc = KahanSum::new();
        for n in 1..=n_max {
            acc.add(self.epsilon(n) / n as f64);
        }
        acc.value() / (n_max as f64).ln()
    }

    /// Multiplicity statistics over n <= n_max.
    pub fn theta_stats(&self, n_max: u64) -> ThetaStats {
        let mut q_max = 0u64;
        let mut run = 0u64;
        let mut last = u64::MAX;
        let mut distinct = 0u64;
        for n in 1..=n_max {
            let m = self.m(n);
            if m == last {
                run += 1;
            } else {
                run = 1;
                distinct += 1;
                last = m;
            }
            q_max = q_max.max(run);
        }
        ThetaStats { q_max, distinct }
    }

    /// Check the strict-increase contract over n <= n_max (the floor_un
    /// family with u >= 1 satisfies it identically; custom data may not).
    pub fn validate_strict(&self, n_max: u64) -> Result<()> {
        if !self.strict {
            return Ok(());
        }
        let mut last = 0u64;
        for n in 1..=n_max {
            let m = self.m(n);
            if n > 1 && m <= last {
                return Err(Error::InvalidInput {
                    what: "target sequence",
                    message: format!("strict mode violated at n = {n}: {last} -> {m}"),
                });
            }
            last = m;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_values() {
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        for n in 1..50 {
            assert_eq!(t.m(n), n);
            assert_eq!(t.epsilon(n), 0.0);
        }
        assert_eq!(t.eta(10_000), 0.0);
        let t = TargetSequence::floor_un(2.5, true).unwrap();
        assert_eq!(t.m(1), 2);
        assert_eq!(t.m(2), 5);
        assert_eq!(t.m(3), 7);
        t.validate_strict(100_000).unwrap();
    }

    #[test]
    fn strict_requires_u_at_least_one() {
        assert!(TargetSequence::floor_un(0.5, true).is_err());
        assert!(TargetSequence::floor_un(0.5, false).is_ok());
        assert!(TargetSequence::floor_un(-1.0, false).is_err());
    }

    #[test]
    fn theta_multiplicities() {
        let t = TargetSequence::floor_un(0.5, false).unwrap();
        // floor(n/2): 0,1,1,2,2,3,3,... every positive value twice
        assert_eq!(t.theta_stats(1000).q_max, 2);
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        assert_eq!(t.theta_stats(1000).q_max, 1);
        let t = TargetSequence::floor_un(0.26, false).unwrap();
        assert_eq!(t.theta_stats(1000).q_max, 4);
    }

    #[test]
    fn custom_validation() {
        assert!(TargetSequence::custom(vec![1, 2, 2, 3], 1.0, false).is_ok());
        assert!(TargetSequence::custom(vec![1, 2, 2, 3], 1.0, true).is_err());
        assert!(TargetSequence::custom(vec![3, 2], 1.0, false).is_err());
        assert!(TargetSequence::custom(vec![], 1.0, false).is_err());
        let t = TargetSequence::custom(vec![1, 2, 4, 4], 1.0, false).unwrap();
        assert_eq!(t.len_limit(), Some(4));
        assert!(t.eta(4) > 0.0);
    }

    #[test]
    fn eta_nonnegative_and_small_for_floor() {
        // |floor(u n) - u n| <= 1, so eta_N <= (1/log N) sum 1/n^2 -> 0
        let t = TargetSequence::floor_un(2.5, true).unwrap();
        let eta = t.eta(10_000);
        assert!(eta >= 0.0);
        assert!(eta < 0.2, "{eta}");
    }
}
