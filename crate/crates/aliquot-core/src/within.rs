//! Range censuses of integers whose divisor sum stays close to ℓ·n.
//!
//! "Close" is measured by a [`ThresholdSpec`] radius: membership means
//! |σ(n) − ℓn| < k(n), decided exactly. The almost-perfect census and the
//! deviation spike scan use the exact equation σ(n) = ℓn + k instead.
//! Every scan streams ordered segments, so counts and member samples are
//! identical for any thread count.

use crate::arith::scan;
use crate::error::{Error, Result};
use crate::threshold::{Ell, ThresholdSpec};

/// Largest number of members retained per census as a sample (ascending).
pub const MEMBER_SAMPLE_CAP: usize = 32;

/// Result of a within-perfect range count.
#[derive(Clone, Debug, PartialEq)]
pub struct WithinCensus {
    pub x: u64,
    pub ell: Ell,
    pub threshold: ThresholdSpec,
    pub count: u64,
    /// First [`MEMBER_SAMPLE_CAP`] members in ascending order.
    pub members_sample: Vec<u64>,
}

impl WithinCensus {
    /// count · ln x / x, the scale on which these censuses are compared.
    pub fn normalized(&self) -> f64 {
        self.count as f64 * (self.x as f64).ln() / self.x as f64
    }
}

/// Exact membership test |σ(n) − ℓn| < k(n); `sigma_n` must equal σ(n).
pub fn is_within_perfect(n: u64, ell: Ell, k: ThresholdSpec, sigma_n: u64) -> bool {
    k.within(ell, n, sigma_n)
}

/// Count members ≤ x for one ratio and one threshold.
pub fn count_within(x: u64, ell: Ell, k: ThresholdSpec) -> Result<WithinCensus> {
    let mut rows = count_within_snapshots(&[x], ell, &[k])?;
    Ok(rows.pop().expect("one snapshot").pop().expect("one threshold"))
}

/// Count members at several cutoffs for several thresholds in a single
/// streaming pass; `result[i][j]` is the census at `snapshots[i]` under
/// `thresholds[j]`.
pub fn count_within_snapshots(
    snapshots: &[u64],
    ell: Ell,
    thresholds: &[ThresholdSpec],
) -> Result<Vec<Vec<WithinCensus>>> {
    if snapshots.is_empty() || thresholds.is_empty() {
        return Err(Error::invalid("empty snapshot or threshold list"));
    }
    if snapshots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("snapshots must be strictly ascending"));
    }
    if snapshots[0] < 2 {
        return Err(Error::invalid("census cutoff must be at least 2"));
    }
    let x_max = *snapshots.last().expect("nonempty");

    struct SegmentTally {
        hi: u64,
        counts: Vec<u64>,
        samples: Vec<Vec<u64>>,
    }

    let per_segment = scan::par_map_segments_split(1, x_max, snapshots, |seg| {
        let mut counts = vec![0u64; thresholds.len()];
        let mut samples = vec![Vec::new(); thresholds.len()];
        for rec in seg.iter() {
            for (j, t) in thresholds.iter().enumerate() {
                if t.within(ell, rec.n, rec.sigma) {
                    counts[j] += 1;
                    if samples[j].len() < MEMBER_SAMPLE_CAP {
                        samples[j].push(rec.n);
                    }
                }
            }
        }
        Ok(SegmentTally {
            hi: seg.hi,
            counts,
            samples,
        })
    })?;

    let mut totals = vec![0u64; thresholds.len()];
    let mut samples: Vec<Vec<u64>> = vec![Vec::new(); thresholds.len()];
    let mut out = Vec::with_capacity(snapshots.len());
    let mut next_snapshot = 0usize;
    for tally in per_segment {
        for j in 0..thresholds.len() {
            totals[j] += tally.counts[j];
            for &n in &tally.samples[j] {
                if samples[j].len() < MEMBER_SAMPLE_CAP {
                    samples[j].push(n);
                }
            }
        }
        while next_snapshot < snapshots.len() && snapshots[next_snapshot] == tally.hi {
            out.push(
                thresholds
                    .iter()
                    .enumerate()
                    .map(|(j, &t)| WithinCensus {
                        x: snapshots[next_snapshot],
                        ell,
                        threshold: t,
                        count: totals[j],
                        members_sample: samples[j].clone(),
                    })
                    .collect(),
            );
            next_snapshot += 1;
        }
    }
    debug_assert_eq!(out.len(), snapshots.len());
    Ok(out)
}

/// #{n ≤ x : σ(n) = ℓ·n + k} for an integer multiple ℓ ≥ 2 and signed k.
pub fn count_almost(x: u64, ell: u64, k: i64) -> Result<u64> {
    if ell < 2 {
        return Err(Error::invalid(format!(
            "almost-perfect census needs an integer multiple >= 2, got {ell}"
        )));
    }
    let partial = scan::par_map_segments(1, x, |seg| {
        Ok(seg
            .iter()
            .filter(|r| deviation_int(r.sigma, ell, r.n) == i128::from(k))
            .count() as u64)
    })?;
    Ok(partial.into_iter().sum())
}

/// Counts of σ(n) − ℓn = k over k ∈ [k_min, k_max] in one pass; returns
/// (k, count) pairs for every k in the window.
pub fn spike_scan(x: u64, ell: u64, k_min: i64, k_max: i64) -> Result<Vec<(i64, u64)>> {
    if ell == 0 {
        return Err(Error::invalid("spike scan multiple must be positive"));
    }
    if k_min > k_max {
        return Err(Error::invalid(format!("empty spike window [{k_min}, {k_max}]")));
    }
    if k_min.unsigned_abs() > x || k_max.unsigned_abs() > x {
        return Err(Error::invalid("spike window exceeds the scan bound"));
    }
    let width = (k_max - k_min) as usize + 1;
    let partial = scan::par_map_segments(1, x, |seg| {
        let mut local = vec![0u64; width];
        for rec in seg.iter() {
            let d = deviation_int(rec.sigma, ell, rec.n);
            if d >= i128::from(k_min) && d <= i128::from(k_max) {
                local[(d - i128::from(k_min)) as usize] += 1;
            }
        }
        Ok(local)
    })?;
    let mut totals = vec![0u64; width];
    for local in partial {
        for (t, l) in totals.iter_mut().zip(local) {
            *t += l;
        }
    }
    Ok(totals
        .into_iter()
        .enumerate()
        .map(|(i, c)| (k_min + i as i64, c))
        .collect())
}

/// Count of |σ(n) − ℓn| < c·n together with a verification of the exact set
/// identity  #{|σ/n − ℓ| < c} = #{σ/n < ℓ+c} − #{σ/n ≤ ℓ−c}.
pub fn phase_density(x: u64, ell: Ell, k: ThresholdSpec) -> Result<(u64, bool)> {
    let ThresholdSpec::Linear { num, den } = k else {
        return Err(Error::invalid(
            "phase density is defined for linear thresholds only",
        ));
    };
    let (a, b) = (ell.numer(), ell.denom());
    // σ/n < a/b + num/den  ⟺  σ·b·den < n·(a·den + b·num), and
    // σ/n ≤ a/b − num/den  ⟺  σ·b·den ≤ n·(a·den − b·num)   (never when ℓ ≤ c).
    let upper = u128::from(a) * u128::from(den) + u128::from(b) * u128::from(num);
    let lower = (u128::from(a) * u128::from(den)).checked_sub(u128::from(b) * u128::from(num));
    let partial = scan::par_map_segments(1, x, |seg| {
        let mut within = 0u64;
        let mut below_upper = 0u64;
        let mut below_lower = 0u64;
        for rec in seg.iter() {
            if k.within(ell, rec.n, rec.sigma) {
                within += 1;
            }
            let lhs = u128::from(rec.sigma) * u128::from(b) * u128::from(den);
            if lhs < u128::from(rec.n) * upper {
                below_upper += 1;
            }
            if let Some(lower) = lower {
                if lhs <= u128::from(rec.n) * lower {
                    below_lower += 1;
                }
            }
        }
        Ok((within, below_upper, below_lower))
    })?;
    let (mut within, mut upper_c, mut lower_c) = (0u64, 0u64, 0u64);
    for (w, u, l) in partial {
        within += w;
        upper_c += u;
        lower_c += l;
    }
    Ok((within, within == upper_c - lower_c))
}

fn deviation_int(sigma: u64, ell: u64, n: u64) -> i128 {
    i128::from(sigma) - i128::from(ell) * i128::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{sieve_range, sigma_of};

    fn ell2() -> Ell {
        Ell::integer(2).unwrap()
    }

    #[test]
    fn constant_radius_one_counts_only_perfect() {
        let census = count_within(10, ell2(), ThresholdSpec::constant(1, 1).unwrap()).unwrap();
        assert_eq!(census.count, 1);
        assert_eq!(census.members_sample, vec![6]);
    }

    #[test]
    fn census_agrees_with_direct_scan() {
        let t = ThresholdSpec::power(1, 2).unwrap();
        let census = count_within(2_000, ell2(), t).unwrap();
        let seg = sieve_range(1, 2_000).unwrap();
        let direct: Vec<u64> = seg
            .iter()
            .filter(|r| is_within_perfect(r.n, ell2(), t, r.sigma))
            .map(|r| r.n)
            .collect();
        assert_eq!(census.count, direct.len() as u64);
        assert_eq!(
            census.members_sample,
            direct.into_iter().take(MEMBER_SAMPLE_CAP).collect::<Vec<_>>()
        );
    }

    #[test]
    fn snapshots_match_single_counts() {
        let ts = [
            ThresholdSpec::power(1, 2).unwrap(),
            ThresholdSpec::constant(13, 1).unwrap(),
        ];
        let rows = count_within_snapshots(&[500, 1_500, 2_000], ell2(), &ts).unwrap();
        for (i, &x) in [500u64, 1_500, 2_000].iter().enumerate() {
            for (j, &t) in ts.iter().enumerate() {
                let single = count_within(x, ell2(), t).unwrap();
                assert_eq!(rows[i][j], single, "x = {x}, threshold {t}");
            }
        }
    }

    #[test]
    fn almost_census_brute_force() {
        // σ(n) = 2n + 12 below 100: 24, 30, 42, 54, 66, 78.
        assert_eq!(count_almost(100, 2, 12).unwrap(), 6);
        let seg = sieve_range(1, 100).unwrap();
        let members: Vec<u64> = seg
            .iter()
            .filter(|r| i128::from(r.sigma) == 2 * i128::from(r.n) + 12)
            .map(|r| r.n)
            .collect();
        assert_eq!(members, vec![24, 30, 42, 54, 66, 78]);
        // Deficit side: σ(n) = 2n − 1 catches the powers of two.
        assert_eq!(count_almost(1_000, 2, -1).unwrap(), 10); // 1,2,4,…,512
        assert!(count_almost(10, 1, 0).is_err());
    }

    #[test]
    fn spike_window_counts() {
        assert_eq!(spike_scan(10, 2, 0, 0).unwrap(), vec![(0, 1)]);
        let spikes = spike_scan(500, 2, -3, 14).unwrap();
        let seg = sieve_range(1, 500).unwrap();
        for &(k, count) in &spikes {
            let direct = seg
                .iter()
                .filter(|r| i128::from(r.sigma) - 2 * i128::from(r.n) == i128::from(k))
                .count() as u64;
            assert_eq!(count, direct, "k = {k}");
        }
        let total: u64 = spikes.iter().map(|&(_, c)| c).sum();
        let window = seg
            .iter()
            .filter(|r| {
                let d = i128::from(r.sigma) - 2 * i128::from(r.n);
                (-3..=14).contains(&d)
            })
            .count() as u64;
        assert_eq!(total, window);
    }

    #[test]
    fn constant_census_decomposes_into_almost_counts() {
        // Strict |σ−2n| < 5 means deviations −4…4.
        let c = ThresholdSpec::constant(5, 1).unwrap();
        let whole = count_within(400, ell2(), c).unwrap().count;
        let sum: u64 = (-4..=4)
            .map(|r| count_almost(400, 2, r).unwrap())
            .sum();
        assert_eq!(whole, sum);
    }

    #[test]
    fn six_p_family_sits_inside_constant_13() {
        let t = ThresholdSpec::constant(13, 1).unwrap();
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            let n = 6 * p;
            let sigma = sigma_of(n).unwrap();
            assert!(is_within_perfect(n, ell2(), t, sigma), "n = {n}");
        }
    }

    #[test]
    fn phase_identity_small_cases() {
        let ell1 = Ell::integer(1).unwrap();
        let (count, ok) = phase_density(100, ell1, ThresholdSpec::linear(1, 100).unwrap()).unwrap();
        assert!(ok);
        assert_eq!(count, 1); // only n = 1 has σ(n)/n inside (0.99, 1.01)
        let (count, ok) = phase_density(1_000, ell2(), ThresholdSpec::linear(10, 1).unwrap()).unwrap();
        assert!(ok);
        // Radius 10n swallows every n ≤ 1000: σ(n)/n < 12 at this scale.
        assert_eq!(count, 1_000);
        let (_, ok) = phase_density(5_000, ell2(), ThresholdSpec::linear(1, 2).unwrap()).unwrap();
        assert!(ok);
        assert!(phase_density(100, ell2(), ThresholdSpec::YOverLogY).is_err());
    }
}
