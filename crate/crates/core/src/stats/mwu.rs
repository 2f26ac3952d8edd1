//! Two-sided Mann-Whitney U test.
//!
//! Ranks use midranks for ties. Ranks are handled doubled (`2 * midrank`) so
//! every quantity in the exact path is an integer.

use super::StatsError;

/// Largest smaller-sample size that gets an exact p-value.
pub const EXACT_MAX_SMALL_SAMPLE: usize = 8;

/// Upper bound on exact-distribution work, `k^2 * N^2` for a smaller sample
/// of size `k` out of `N` pooled values. Beyond it the normal approximation
/// is used even for small `k`.
pub const EXACT_WORK_LIMIT: u128 = 256_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MannWhitney {
    /// U statistic of the first sample.
    pub u: f64,
    pub z: f64,
    pub p: f64,
    pub n_a: usize,
    pub n_b: usize,
    pub exact: bool,
}

/// Doubled midranks of the pooled sample `a ++ b`, in input order.
pub fn doubled_midranks(a: &[f64], b: &[f64]) -> Vec<u64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0u64; pooled.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share rank ((i+1) + (j+1)) / 2
        let r2 = (i + 1 + j + 1) as u64;
        for &k in &order[i..=j] {
            ranks[k] = r2;
        }
        i = j + 1;
    }
    ranks
}

fn tie_term(ranks: &[u64]) -> f64 {
    let mut sorted = ranks.to_vec();
    sorted.sort_unstable();
    let mut sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        sum += t * t * t - t;
        i = j;
    }
    sum
}

/// Exact two-sided p-value from the permutation distribution of the rank
/// sum of a size-`k` subset, `k = min(n_a, n_b)`.
fn exact_p(ranks: &[u64], k: usize, two_u_obs_dev: u64, n_a: usize, n_b: usize) -> f64 {
    let n = ranks.len();
    let mut sorted = ranks.to_vec();
    sorted.sort_unstable();
    let smax: usize = sorted[n - k..].iter().sum::<u64>() as usize;
    let width = smax + 1;
    let mut counts = vec![0u128; (k + 1) * width];
    counts[0] = 1;
    for (i, &v) in sorted.iter().enumerate() {
        let v = v as usize;
        for j in (1..=k.min(i + 1)).rev() {
            let (lo, hi) = counts.split_at_mut(j * width);
            let prev = &lo[(j - 1) * width..j * width];
            let cur = &mut hi[..width];
            for s in (v..width).rev() {
                cur[s] += prev[s - v];
            }
        }
    }
    let last = &counts[k * width..];
    let total: u128 = last.iter().sum();
    let nn = (n_a * n_b) as i64;
    let offset = (k * (k + 1)) as i64;
    let extreme: u128 = last
        .iter()
        .enumerate()
        .filter(|&(s, &c)| c > 0 && ((s as i64 - offset) - nn).unsigned_abs() >= two_u_obs_dev)
        .map(|(_, &c)| c)
        .sum();
    (extreme as f64 / total as f64).min(1.0)
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(StatsError::NonFinite);
    }
    let (n_a, n_b) = (a.len(), b.len());
    let ranks = doubled_midranks(a, b);
    let r2_a: u64 = ranks[..n_a].iter().sum();
    // 2U = 2R - n(n+1)
    let two_u = r2_a as i64 - (n_a * (n_a + 1)) as i64;
    let u = two_u as f64 / 2.0;
    let nn = (n_a * n_b) as f64;
    let n = (n_a + n_b) as f64;
    let mean = nn / 2.0;
    let var = nn / 12.0 * ((n + 1.0) - tie_term(&ranks) / (n * (n - 1.0)));
    let sd = if var > 0.0 { var.sqrt() } else { 0.0 };

    let k = n_a.min(n_b);
    let work = (k as u128).pow(2) * ((n_a + n_b) as u128).pow(2);
    if k <= EXACT_MAX_SMALL_SAMPLE && work <= EXACT_WORK_LIMIT {
        let dev = (two_u - (n_a * n_b) as i64).unsigned_abs();
        let p = exact_p(&ranks, k, dev, n_a, n_b);
        let z = if sd > 0.0 { (u - mean) / sd } else { 0.0 };
        return Ok(MannWhitney {
            u,
            z,
            p,
            n_a,
            n_b,
            exact: true,
        });
    }
    if sd == 0.0 {
        return Ok(MannWhitney {
            u,
            z: 0.0,
            p: 1.0,
            n_a,
            n_b,
            exact: false,
        });
    }
    let dev = ((u - mean).abs() - 0.5).max(0.0);
    let z = dev / sd * (u - mean).signum();
    let p = libm::erfc(dev / sd / std::f64::consts::SQRT_2).min(1.0);
    Ok(MannWhitney {
        u,
        z,
        p,
        n_a,
        n_b,
        exact: false,
    })
}
