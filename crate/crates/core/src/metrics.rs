//! Distances between the exact laws and the rescaled Dickman density:
//! the l1 deviation v_n, its Poisson counterpart, the total variation
//! distance between T_n and Y_n (paper convention, no 1/2 factor), the
//! local correction term, and the Kolmogorov distance of T_n/n from the
//! Dickman law.

use std::f64::consts::PI;

use crate::dickman::DickmanTable;
use crate::error::Result;
use crate::kahan::KahanSum;
use crate::pmf::Pmf;
use crate::{bernoulli, poisson};

/// sum_m |P(X = m) - rho0(m/n)/n| over m >= 0, the rho tail truncated at
/// n * u_max where rho has decayed below 1e-131.
pub fn vn_from_pmf(pmf: &Pmf, table: &DickmanTable) -> f64 {
    let n = pmf.n() as f64;
    let m_hi = pmf
        .support_end()
        .max((table.u_max() * n).ceil() as usize);
    let mut acc = KahanSum::new();
    for m in 0..=m_hi {
        let r = table.rho0_truncated(m as f64 / n) / n;
        acc.add((pmf.prob(m) - r).abs());
    }
    acc.value()
}

/// v_n for the Bernoulli model T_n.
pub fn vn(n: u32, table: &DickmanTable) -> Result<f64> {
    Ok(vn_from_pmf(&bernoulli::tn_pmf(n)?, table))
}

/// The same l1 deviation for the Poissonized model Y_n.
pub fn poisson_vn(n: u32, table: &DickmanTable) -> Result<f64> {
    Ok(vn_from_pmf(&poisson::yn_pmf(n, 0)?, table))
}

/// Total variation distance in the paper's convention:
/// sum_m |P(A = m) - P(B = m)| (no 1/2).
pub fn dtv_between(a: &Pmf, b: &Pmf) -> f64 {
    let hi = a.support_end().max(b.support_end());
    let lo = a.offset().min(b.offset());
    let mut acc = KahanSum::new();
    for m in lo..=hi {
        acc.add((a.prob(m) - b.prob(m)).abs());
    }
    acc.value()
}

/// d_TV(T_n, Y_n).
pub fn dtv(n: u32) -> Result<f64> {
    let t = bernoulli::tn_pmf(n)?;
    let y = poisson::yn_pmf(n, t.support_end() + 1)?;
    Ok(dtv_between(&t, &y))
}

/// Scaled local deviation (P(T_n = m) - rho0(m/n)/n) * pi^2 m n / 2,
/// computed from an already-built pmf.
pub fn correction_term_from(pmf: &Pmf, m: usize, table: &DickmanTable) -> f64 {
    let n = pmf.n() as f64;
    let dev = pmf.prob(m) - table.rho0_truncated(m as f64 / n) / n;
    dev * PI * PI * m as f64 * n / 2.0
}

/// Scaled local deviation for T_n at one point.
pub fn correction_term(n: u32, m: usize, table: &DickmanTable) -> Result<f64> {
    Ok(correction_term_from(&bernoulli::tn_pmf(n)?, m, table))
}

/// sup_u |P(X <= n u) - F_D(u)|: Kolmogorov distance of X/n from the
/// Dickman law, evaluated at the jump points from both sides.
pub fn cdf_sup_distance(pmf: &Pmf, table: &DickmanTable) -> f64 {
    let n = pmf.n() as f64;
    let mut cum = KahanSum::new();
    let mut sup: f64 = 0.0;
    for m in 0..=pmf.support_end() {
        let f = table.cdf(m as f64 / n);
        sup = sup.max((cum.value() - f).abs()); // left limit at the jump
        cum.add(pmf.prob(m));
        sup = sup.max((cum.value() - f).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::{brute_force_pmf, tn_pmf};
    use crate::dickman::exp_neg_gamma;
    use crate::poisson::yn_pmf;

    fn table() -> &'static DickmanTable {
        DickmanTable::shared()
    }

    #[test]
    fn vn_at_one_matches_hand_sum() {
        // T_1 = 1 a.s.: v_1 = |1 - rho0(1/1)| + sum_{m != 1} rho0(m)/1
        let t = table();
        let eg = exp_neg_gamma();
        let mut hand = KahanSum::new();
        hand.add(1.0 - eg); // m = 1
        hand.add(eg); // m = 0
        let mut m = 2usize;
        while (m as f64) <= t.u_max() {
            hand.add(t.rho0_truncated(m as f64));
            m += 1;
        }
        let got = vn(1, t).unwrap();
        assert!(
            (got - hand.value()).abs() < 1e-12,
            "{} vs {}",
            got,
            hand.value()
        );
    }

    #[test]
    fn vn_decreases_along_small_ladder() {
        let t = table();
        let v20 = vn(20, t).unwrap();
        let v50 = vn(50, t).unwrap();
        let v100 = vn(100, t).unwrap();
        assert!(v100 < v50 && v50 < v20, "{v20} {v50} {v100}");
    }

    #[test]
    fn dtv_at_one_is_two_minus_two_over_e() {
        let d = dtv(1).unwrap();
        let want = 2.0 - 2.0 * (-1.0f64).exp();
        assert!((d - want).abs() < 1e-12, "{d}");
    }

    #[test]
    fn dtv_triangle_inequality() {
        let t = table();
        for n in [5u32, 50] {
            let d = dtv(n).unwrap();
            let v = vn(n, t).unwrap();
            let pv = poisson_vn(n, t).unwrap();
            assert!(d >= 0.0);
            assert!(d <= v + pv + 1e-12);
        }
    }

    #[test]
    fn poisson_beats_bernoulli() {
        let t = table();
        for n in [50u32, 120] {
            assert!(poisson_vn(n, t).unwrap() < vn(n, t).unwrap());
        }
    }

    #[test]
    fn poisson_vn_at_one_matches_hand_sum() {
        let t = table();
        let y = yn_pmf(1, 64).unwrap();
        let mut hand = KahanSum::new();
        let mut m = 0usize;
        while (m as f64) <= t.u_max() {
            hand.add((y.prob(m) - t.rho0_truncated(m as f64)).abs());
            m += 1;
        }
        let got = poisson_vn(1, t).unwrap();
        assert!((got - hand.value()).abs() < 1e-12);
    }

    #[test]
    fn small_m_probabilities_match_exact_rationals() {
        // n P(T_n = m) is independent of n once n >= m - 1; check the
        // enumeration oracle against hand-computed partition sums
        let p = brute_force_pmf(12).unwrap();
        let cases = [
            (2usize, 0.0),
            (3, 1.0),
            (4, 0.5),
            (5, 1.0 / 3.0),
            (6, 0.75),
            (10, 77.0 / 120.0),
        ];
        for (m, c) in cases {
            let got = 12.0 * p.prob(m);
            assert!((got - c).abs() < 1e-12, "m={m}: {got} vs {c}");
        }
    }

    #[test]
    fn correction_term_at_m_one() {
        // P(T_n = 1) = 1/n exactly, so the scaled term is
        // (1 - rho0(1/n)) pi^2 / 2 -> (1 - e^{-gamma}) pi^2 / 2
        let t = table();
        let c = correction_term(200, 1, t).unwrap();
        let limit = (1.0 - exp_neg_gamma()) * PI * PI / 2.0;
        assert!((c - limit).abs() < 1e-6, "{c} vs {limit}");
    }

    #[test]
    fn kolmogorov_distance_shrinks() {
        let t = table();
        let d50 = cdf_sup_distance(&tn_pmf(50).unwrap(), t);
        let d200 = cdf_sup_distance(&tn_pmf(200).unwrap(), t);
        assert!(d200 < d50);
        assert!(d200 < 0.01, "{d200}");
    }
}
