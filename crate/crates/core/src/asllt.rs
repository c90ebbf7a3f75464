//! Seeded Monte-Carlo engine for the almost-sure hit-count law
//! L_N = #{n <= N : T_n = m_n}, the exact expectation it is checked
//! against, and samplers for the Dickman law itself (perpetuity series
//! and rescaled walks).

use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::TnWalker;
use crate::dickman::DickmanTable;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::rng::CounterRng;
use crate::target::TargetSequence;

/// Hard cap on the walk length.
pub const N_MAX: u64 = 100_000_000;

/// One replica: hit counts at each checkpoint.
#[derive(Debug, Clone, Serialize)]
pub struct ReplicaSummary {
    pub seed: u64,
    pub replica: u64,
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
}

/// Cross-replica aggregates in fixed replica order.
#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub checkpoints: Vec<u64>,
    pub replicas: usize,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub std_err: Vec<f64>,
}

fn checkpoints_ok(checkpoints: &[u64], n_max: u64) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidInput {
            what: "checkpoints",
            message: "at least one checkpoint is required".into(),
        });
    }
    for w in checkpoints.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidInput {
                what: "checkpoints",
                message: "checkpoints must be strictly increasing".into(),
            });
        }
    }
    let last = *checkpoints.last().unwrap();
    if checkpoints[0] < 1 || last > n_max {
        return Err(Error::InvalidInput {
            what: "checkpoints",
            message: format!("checkpoints must lie in [1, {n_max}]"),
        });
    }
    Ok(())
}

/// Simulate one replica: a single pass n = 1..N maintaining
/// T_n = T_{n-1} + n [U_n < 1/n], counting hits T_n = m_n.
/// Deterministic in (seed, replica, target, checkpoints).
pub fn simulate_counts(
    target: &TargetSequence,
    n_max: u64,
    seed: u64,
    replica: u64,
    checkpoints: &[u64],
) -> Result<ReplicaSummary> {
    if n_max > N_MAX {
        return Err(Error::ResourceCap {
            what: "simulate_counts",
            requested: n_max as usize,
            cap: N_MAX as usize,
        });
    }
    if let Some(limit) = target.len_limit() {
        if n_max > limit {
            return Err(Error::InvalidInput {
                what: "simulate_counts",
                message: format!("target sequence has {limit} values, N = {n_max}"),
            });
        }
    }
    checkpoints_ok(checkpoints, n_max)?;
    target.validate_strict(n_max)?;

    let rng = CounterRng::new(seed, replica);
    let mut t_cur: u64 = 0;
    let mut count: u64 = 0;
    let mut counts = Vec::with_capacity(checkpoints.len());
    let mut ci = 0usize;
    let mut prev_m = 0u64;
    for n in 1..=n_max {
        if rng.uniform(n) < 1.0 / n as f64 {
            t_cur += n;
        }
        let m_n = target.m(n);
        debug_assert!(!(target.strict() && n > 1) || m_n > prev_m);
        // a hit is impossible beyond the maximal walk value n(n+1)/2
        debug_assert!(!(t_cur == m_n) || m_n <= n * (n + 1) / 2);
        prev_m = m_n;
        if t_cur == m_n {
            count += 1;
        }
        if ci < checkpoints.len() && n == checkpoints[ci] {
            counts.push(count);
            ci += 1;
        }
    }
    Ok(ReplicaSummary {
        seed,
        replica,
        checkpoints: checkpoints.to_vec(),
        counts,
    })
}

/// Run `replicas` independent replicas in parallel (deterministic: each
/// replica owns a counter-keyed stream and results are reduced in replica
/// order regardless of scheduling).
pub fn run_replicas(
    target: &TargetSequence,
    n_max: u64,
    replicas: u64,
    base_seed: u64,
    checkpoints: &[u64],
) -> Result<Vec<ReplicaSummary>> {
    (0..replicas)
        .into_par_iter()
        .map(|r| simulate_counts(target, n_max, base_seed, r, checkpoints))
        .collect()
}

/// Sample mean / variance / standard error per checkpoint, folded in
/// replica order.
pub fn aggregate(summaries: &[ReplicaSummary]) -> Aggregate {
    assert!(!summaries.is_empty());
    let checkpoints = summaries[0].checkpoints.clone();
    let ncp = checkpoints.len();
    let r = summaries.len();
    let mut mean = Vec::with_capacity(ncp);
    let mut variance = Vec::with_capacity(ncp);
    let mut std_err = Vec::with_capacity(ncp);
    for c in 0..ncp {
        let mut s = KahanSum::new();
        for rep in summaries {
            s.add(rep.counts[c] as f64);
        }
        let m = s.value() / r as f64;
        let mut v = KahanSum::new();
        for rep in summaries {
            let d = rep.counts[c] as f64 - m;
            v.add(d * d);
        }
        let var = if r > 1 { v.value() / (r - 1) as f64 } else { 0.0 };
        mean.push(m);
        variance.push(var);
        std_err.push((var / r as f64).sqrt());
    }
    Aggregate {
        checkpoints,
        replicas: r,
        mean,
        variance,
        std_err,
    }
}

/// E(L_N) split into an exact dynamic-programming part (n <= n_exact) and
/// a density approximation for the rest; `density_err_budget` is
/// sum_{n > n_exact} 1/n^2, the scale of the local-limit error incurred.
#[derive(Debug, Clone, Serialize)]
pub struct ExactExpectation {
    pub total: f64,
    pub dp_part: f64,
    pub density_part: f64,
    pub n_exact: u64,
    pub density_err_budget: f64,
}

pub fn exact_expectation(
    target: &TargetSequence,
    n_max: u64,
    n_exact: u64,
    table: &DickmanTable,
) -> Result<ExactExpectation> {
    let n_exact = n_exact.min(n_max);
    let mut walker = TnWalker::new();
    let mut dp = KahanSum::new();
    for n in 1..=n_exact {
        walker.advance_to(n as u32)?;
        dp.add(walker.prob_of(target.m(n) as usize));
    }
    let mut dens = KahanSum::new();
    let mut budget = KahanSum::new();
    for n in n_exact + 1..=n_max {
        let nf = n as f64;
        dens.add(table.rho0_truncated(target.m(n) as f64 / nf) / nf);
        budget.add(1.0 / (nf * nf));
    }
    Ok(ExactExpectation {
        total: dp.value() + dens.value(),
        dp_part: dp.value(),
        density_part: dens.value(),
        n_exact,
        density_err_budget: budget.value(),
    })
}

/// Variance report against the theoretical V(L_N) << q log N.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceReport {
    pub aggregate: Aggregate,
    /// variance / log N per checkpoint.
    pub ratio_log: Vec<f64>,
    /// variance / (q log N) per checkpoint, q = max theta_m over the run.
    pub ratio_q_log: Vec<f64>,
    pub q_max: u64,
}

pub fn variance_study(
    target: &TargetSequence,
    n_max: u64,
    replicas: u64,
    base_seed: u64,
    checkpoints: &[u64],
) -> Result<VarianceReport> {
    if replicas < 2 {
        return Err(Error::InvalidInput {
            what: "variance_study",
            message: "need at least 2 replicas".into(),
        });
    }
    let summaries = run_replicas(target, n_max, replicas, base_seed, checkpoints)?;
    let aggregate = aggregate(&summaries);
    let q_max = target.theta_stats(n_max).q_max.max(1);
    let ratio_log: Vec<f64> = aggregate
        .checkpoints
        .iter()
        .zip(&aggregate.variance)
        .map(|(&n, &v)| v / (n as f64).ln())
        .collect();
    let ratio_q_log = ratio_log.iter().map(|r| r / q_max as f64).collect();
    Ok(VarianceReport {
        aggregate,
        ratio_log,
        ratio_q_log,
        q_max,
    })
}

/// Samples of the perpetuity series sum_n prod_{j<=n} X_j (X_j uniform),
/// truncated once the running product drops below `trunc_eps`; the
/// expected truncated tail mass per sample is below `trunc_eps`.
pub fn perpetuity_sample(count: usize, seed: u64, trunc_eps: f64) -> Result<Vec<f64>> {
    if !(trunc_eps > 0.0) {
        return Err(Error::InvalidInput {
            what: "perpetuity_sample",
            message: "trunc_eps must be positive".into(),
        });
    }
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let rng = CounterRng::new(seed, i as u64);
            let mut product = 1.0f64;
            let mut sum = 0.0f64;
            let mut step = 0u64;
            while product >= trunc_eps {
                product *= rng.uniform(step);
                sum += product;
                step += 1;
            }
            sum
        })
        .collect())
}

/// Kolmogorov-Smirnov distance of a sample against a distribution
/// function; `samples` need not be sorted.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((i as f64 / n - f).abs());
        sup = sup.max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// Empirical CDF of T_n/n over independent walks vs. the Dickman law.
#[derive(Debug, Clone, Serialize)]
pub struct WalkEcdfReport {
    pub n: u64,
    pub samples: usize,
    pub sup_distance: f64,
}

pub fn walk_ecdf(
    n: u64,
    samples: usize,
    seed: u64,
    table: &DickmanTable,
) -> Result<WalkEcdfReport> {
    if n < 1 || n > N_MAX {
        return Err(Error::ResourceCap {
            what: "walk_ecdf",
            requested: n as usize,
            cap: N_MAX as usize,
        });
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let rng = CounterRng::new(seed, s as u64);
            let mut t_cur = 0u64;
            for k in 1..=n {
                if rng.uniform(k) < 1.0 / k as f64 {
                    t_cur += k;
                }
            }
            t_cur as f64 / n as f64
        })
        .collect();
    let sup = ks_distance(&values, |u| table.cdf(u));
    Ok(WalkEcdfReport {
        n,
        samples,
        sup_distance: sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickman::exp_neg_gamma;

    fn table() -> &'static DickmanTable {
        DickmanTable::shared()
    }

    #[test]
    fn first_step_always_hits_at_u_one() {
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        for seed in [0u64, 1, 99] {
            let s = simulate_counts(&t, 1, seed, 0, &[1]).unwrap();
            assert_eq!(s.counts, vec![1]);
        }
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        let a = simulate_counts(&t, 2000, 7, 3, &[100, 2000]).unwrap();
        let b = simulate_counts(&t, 2000, 7, 3, &[100, 2000]).unwrap();
        assert_eq!(a.counts, b.counts);
        let c = simulate_counts(&t, 2000, 8, 3, &[100, 2000]).unwrap();
        let d = simulate_counts(&t, 2000, 7, 4, &[100, 2000]).unwrap();
        assert!(a.counts != c.counts || a.counts != d.counts);
        // counts non-decreasing within a replica
        assert!(a.counts[1] >= a.counts[0]);
    }

    #[test]
    fn expectation_small_case_is_four_thirds() {
        // u = 1, N = 3: E = P(T_1=1) + P(T_2=2) + P(T_3=3) = 1 + 0 + 1/3
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        let e = exact_expectation(&t, 3, 3, table()).unwrap();
        assert!((e.total - 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(e.density_part, 0.0);
    }

    #[test]
    fn expectation_splits_and_budget() {
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        let e = exact_expectation(&t, 1000, 100, table()).unwrap();
        assert!((e.total - (e.dp_part + e.density_part)).abs() < 1e-12);
        // sum_{n>100} 1/n^2 ~ 1/100
        assert!(e.density_err_budget < 0.011 && e.density_err_budget > 0.008);
    }

    #[test]
    fn l3_distribution_matches_enumeration() {
        // At u = 1: always a hit at n=1, never at n=2 (T_2 is odd, m_2 = 2),
        // hit at n=3 iff (Z_2, Z_3) = (1, 0), so P(L_3 = 2) = 1/3.
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        let reps = 100_000u64;
        let summaries = run_replicas(&t, 3, reps, 2024, &[3]).unwrap();
        let twos = summaries.iter().filter(|s| s.counts[0] == 2).count();
        for s in &summaries {
            assert!(s.counts[0] == 1 || s.counts[0] == 2);
        }
        let phat = twos as f64 / reps as f64;
        // 4.4 sigma band, sigma = sqrt(p(1-p)/reps)
        let sigma = (2.0 / 9.0 / reps as f64).sqrt();
        assert!(
            (phat - 1.0 / 3.0).abs() < 4.4 * sigma,
            "phat = {phat}, sigma = {sigma}"
        );
    }

    #[test]
    fn aggregate_recomputation_matches() {
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        let summaries = run_replicas(&t, 500, 64, 5, &[100, 500]).unwrap();
        let agg = aggregate(&summaries);
        let mean0: f64 =
            summaries.iter().map(|s| s.counts[0] as f64).sum::<f64>() / 64.0;
        assert!((agg.mean[0] - mean0).abs() < 1e-12);
        assert_eq!(agg.replicas, 64);
    }

    #[test]
    fn perpetuity_sampler_basics() {
        let xs = perpetuity_sample(20_000, 99, 1e-12).unwrap();
        assert!(xs.iter().all(|&x| x > 0.0));
        let mean: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
        // E = 1, Var = 1/2: 4 sigma band
        assert!((mean - 1.0).abs() < 4.0 * (0.5f64 / 20_000.0).sqrt());
        let again = perpetuity_sample(20_000, 99, 1e-12).unwrap();
        assert_eq!(xs, again);
    }

    #[test]
    fn perpetuity_ks_is_small() {
        let xs = perpetuity_sample(20_000, 4321, 1e-12).unwrap();
        let ks = ks_distance(&xs, |u| table().cdf(u));
        // 99.9% KS band at 2e4 samples is ~ 1.95/sqrt(n) = 0.0138
        assert!(ks < 0.02, "ks = {ks}");
    }

    #[test]
    fn degenerate_walk_ecdf() {
        let r = walk_ecdf(1, 1000, 0, table()).unwrap();
        // T_1/1 = 1 always; sup distance is max(F(1), 1 - F(1)) = e^{-gamma}
        assert!((r.sup_distance - exp_neg_gamma()).abs() < 1e-9);
    }

    #[test]
    fn walk_ecdf_improves_with_n() {
        let t = table();
        let d250 = walk_ecdf(250, 40_000, 11, t).unwrap().sup_distance;
        let d1000 = walk_ecdf(1000, 40_000, 11, t).unwrap().sup_distance;
        assert!(d1000 < d250, "{d250} -> {d1000}");
    }

    #[test]
    fn variance_study_shapes() {
        let t = TargetSequence::floor_un(0.5, false).unwrap();
        let r = variance_study(&t, 1000, 200, 31, &[100, 1000]).unwrap();
        assert_eq!(r.q_max, 2);
        assert_eq!(r.ratio_log.len(), 2);
        assert!((r.ratio_q_log[0] - r.ratio_log[0] / 2.0).abs() < 1e-15);
    }

    #[test]
    fn input_validation() {
        let t = TargetSequence::floor_un(1.0, true).unwrap();
        assert!(simulate_counts(&t, 100, 0, 0, &[]).is_err());
        assert!(simulate_counts(&t, 100, 0, 0, &[50, 50]).is_err());
        assert!(simulate_counts(&t, 100, 0, 0, &[50, 200]).is_err());
        let c = TargetSequence::custom(vec![1, 2, 3], 1.0, false).unwrap();
        assert!(simulate_counts(&c, 5, 0, 0, &[5]).is_err());
        assert!(perpetuity_sample(10, 0, 0.0).is_err());
    }
}
