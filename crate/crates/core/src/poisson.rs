//! The Poissonized companion Y_n = sum_{k<=n} k X_k with X_k ~ Poisson(1/k),
//! computed by the compound-Poisson recurrence
//! m p_m = sum_{j=1}^{min(m,n)} p_{m-j},  p_0 = e^{-H_n}.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::pmf::{Pmf, PmfKind};

/// Mass deficit at which the support is considered complete.
pub const TARGET_DEFICIT: f64 = 1e-12;

/// Exact (up to rounding) pmf of Y_n on {0, 1, ..., m_max} where m_max is
/// extended automatically until the truncated mass is below
/// [`TARGET_DEFICIT`].  `m_max_hint` pre-sizes the buffer.
pub fn yn_pmf(n: u32, m_max_hint: usize) -> Result<Pmf> {
    if n < 1 {
        return Err(Error::InvalidInput {
            what: "yn_pmf",
            message: "n must be >= 1".into(),
        });
    }
    let nn = n as usize;
    let harmonic: f64 = (1..=nn)
        .rev()
        .map(|k| 1.0 / k as f64)
        .collect::<KahanSum>()
        .value();
    let mut probs = Vec::with_capacity(m_max_hint.max(4 * nn + 64));
    probs.push((-harmonic).exp());
    let mut total = KahanSum::new();
    total.add(probs[0]);

    let cap = 1000 * nn + 100_000;
    let mut m = 0usize;
    while 1.0 - total.value() > TARGET_DEFICIT {
        m += 1;
        if m > cap {
            return Err(Error::ResourceCap {
                what: "yn_pmf support extension",
                requested: m,
                cap,
            });
        }
        let lo = m.saturating_sub(nn);
        let mut s = KahanSum::new();
        // ascending index = ascending magnitude in the decaying tail
        for j in lo..m {
            s.add(probs[j]);
        }
        let p = s.value() / m as f64;
        probs.push(p);
        total.add(p);
    }
    Pmf::new(0, probs, n, PmfKind::PoissonSum)
}
