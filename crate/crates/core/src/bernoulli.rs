//! Exact distribution of T_n = sum_{k<=n} k Z_k, Z_k ~ Bernoulli(1/k):
//! an incremental dynamic program, a full-enumeration oracle, and a
//! characteristic-function inversion oracle.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::pmf::{Pmf, PmfKind};
use crate::sici::cis_minus_one;

/// Cost cap for the dynamic program (O(n^3/6) work, O(n^2/2) memory).
pub const N_CAP: u32 = 4000;

/// Cap for the 2^{n-1} enumeration oracle.
pub const BRUTE_FORCE_CAP: u32 = 24;

fn check_cap(n: u32, cap: u32, what: &'static str) -> Result<()> {
    if n < 1 || n > cap {
        return Err(Error::ResourceCap {
            what,
            requested: n as usize,
            cap: cap as usize,
        });
    }
    Ok(())
}

/// Incremental dynamic program over n.  `probs[i] = P(T_k = i + 1)`;
/// the support after step k is exactly {1, ..., k(k+1)/2}.
///
/// Advancing one step updates in place in descending m, so each update
/// reads pre-step values only.  Every update is a convex combination,
/// which keeps the mass drift at rounding level.
#[derive(Debug, Clone)]
pub struct TnWalker {
    k: u32,
    probs: Vec<f64>,
}

impl Default for TnWalker {
    fn default() -> Self {
        Self::new()
    }
}

impl TnWalker {
    pub fn new() -> Self {
        TnWalker {
            k: 1,
            probs: vec![1.0],
        }
    }

    pub fn n(&self) -> u32 {
        self.k
    }

    /// Advance the walk to index `n` (no-op if already there).
    pub fn advance_to(&mut self, n: u32) -> Result<()> {
        check_cap(n, N_CAP, "tn_pmf dynamic program")?;
        if n < self.k {
            return Err(Error::InvalidInput {
                what: "TnWalker",
                message: format!("cannot rewind from {} to {n}", self.k),
            });
        }
        while self.k < n {
            let k = (self.k + 1) as usize;
            let q = 1.0 / k as f64;
            let r = 1.0 - q;
            let old_len = self.probs.len();
            self.probs.resize(old_len + k, 0.0);
            let p = &mut self.probs;
            for i in (k..old_len + k).rev() {
                let shifted = p[i - k] * q;
                p[i] = if i < old_len { p[i] * r + shifted } else { shifted };
            }
            for v in p.iter_mut().take(k.min(old_len)) {
                *v *= r;
            }
            self.k += 1;
        }
        Ok(())
    }

    /// P(T_n = m) for the current n.
    #[inline]
    pub fn prob_of(&self, m: usize) -> f64 {
        if m == 0 || m > self.probs.len() {
            0.0
        } else {
            self.probs[m - 1]
        }
    }

    /// Probabilities of 1, 2, ..., k(k+1)/2.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Accumulated mass drift |total - 1| of the dynamic program.
    pub fn mass_drift(&self) -> f64 {
        (self.probs.iter().copied().collect::<KahanSum>().value() - 1.0).abs()
    }

    pub fn snapshot(&self) -> Result<Pmf> {
        Pmf::new(1, self.probs.clone(), self.k, PmfKind::BernoulliSum)
    }
}

/// Exact pmf of T_n by dynamic programming.
pub fn tn_pmf(n: u32) -> Result<Pmf> {
    let mut w = TnWalker::new();
    w.advance_to(n)?;
    w.snapshot()
}

/// Enumeration oracle: all 2^{n-1} outcomes of (Z_2, ..., Z_n) with exact
/// product probabilities.
pub fn brute_force_pmf(n: u32) -> Result<Pmf> {
    check_cap(n, BRUTE_FORCE_CAP, "brute-force enumeration")?;
    let len = (n as usize * (n as usize + 1)) / 2;
    let mut probs = vec![0.0f64; len];
    let bits = n - 1;
    for mask in 0u64..(1u64 << bits) {
        let mut m = 1usize;
        let mut p = 1.0f64;
        for k in 2..=n as usize {
            if mask >> (k - 2) & 1 == 1 {
                m += k;
                p *= 1.0 / k as f64;
            } else {
                p *= 1.0 - 1.0 / k as f64;
            }
        }
        probs[m - 1] += p;
    }
    Pmf::new(1, probs, n, PmfKind::BruteForce)
}

/// Inversion oracle: sample phi_n at S equispaced frequencies 2 pi j / S
/// with S the smallest power of two exceeding the support size, then
/// invert by FFT.  Finite support below S means zero aliasing, so this is
/// exact up to rounding and fully independent of the dynamic program.
pub fn tn_pmf_fft(n: u32) -> Result<Pmf> {
    check_cap(n, N_CAP, "characteristic-function inversion")?;
    let support_end = n as usize * (n as usize + 1) / 2;
    let s = (support_end + 1).next_power_of_two().max(2);

    // e^{2 pi i r / S} - 1 for r in 0..S, with exact phase reduction
    // (j k mod S is exact integer arithmetic)
    let table: Vec<Complex64> = (0..s)
        .map(|r| cis_minus_one(2.0 * std::f64::consts::PI * r as f64 / s as f64))
        .collect();

    let mut spectrum = vec![Complex64::new(1.0, 0.0); s];
    for k in 1..=n as usize {
        for (j, v) in spectrum.iter_mut().enumerate() {
            let r = (j * k) % s;
            *v *= 1.0 + table[r] / k as f64;
        }
    }

    FftPlanner::new()
        .plan_fft_inverse(s)
        .process(&mut spectrum);
    let scale = 1.0 / s as f64;

    // bin 0 and bins beyond the support carry only rounding noise
    let mut probs = Vec::with_capacity(support_end);
    for m in 1..=support_end {
        probs.push(spectrum[m].re * scale);
    }
    let stray = spectrum[0].re.abs() * scale;
    if stray > 1e-10 {
        return Err(Error::Numerical {
            what: "fft inversion",
            message: format!("mass {stray} at the empty bin m = 0"),
        });
    }
    Pmf::new(1, probs, n, PmfKind::FftOracle)
}
