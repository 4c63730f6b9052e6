//! Streaming parallel scans over large ranges.
//!
//! The range is cut into fixed-length segments *before* any work is
//! distributed, each worker sieves its segments independently, and results
//! are collected back in segment order. Partitioning therefore depends only
//! on (lo, hi, splits) — never on the number of threads — which is what makes
//! every census byte-for-byte reproducible across thread counts.

use rayon::prelude::*;

use super::{isqrt, primes, segmented, SieveSegment, MAX_SIEVE_BOUND, SCAN_SEGMENT_LEN};
use crate::error::{Error, Result};

/// Apply `f` to every segment of `[lo, hi]` and return the per-segment
/// results in range order.
pub fn par_map_segments<T, F>(lo: u64, hi: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&SieveSegment) -> Result<T> + Sync,
{
    par_map_segments_split(lo, hi, &[], f)
}

/// Like [`par_map_segments`], but guarantees that a segment ends exactly at
/// each value in `splits`, so running census totals can be snapshotted at
/// those points without a segment straddling them.
pub fn par_map_segments_split<T, F>(lo: u64, hi: u64, splits: &[u64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&SieveSegment) -> Result<T> + Sync,
{
    if lo == 0 || lo > hi {
        return Err(Error::invalid(format!("scan range [{lo}, {hi}]")));
    }
    if hi > MAX_SIEVE_BOUND {
        return Err(Error::too_large(format!(
            "scan bound {hi} exceeds supported maximum {MAX_SIEVE_BOUND}"
        )));
    }
    let mut ends: Vec<u64> = splits.iter().copied().filter(|&s| s >= lo && s < hi).collect();
    ends.sort_unstable();
    ends.dedup();
    ends.push(hi);

    let mut ranges: Vec<(u64, u64)> = Vec::new();
    let mut start = lo;
    for &end in &ends {
        while start <= end {
            let seg_hi = end.min(start + (SCAN_SEGMENT_LEN - 1));
            ranges.push((start, seg_hi));
            start = seg_hi + 1;
        }
    }

    let base_primes = primes::primes_up_to(isqrt(hi));
    ranges
        .par_iter()
        .map(|&(seg_lo, seg_hi)| {
            let records = segmented::sieve_segment(seg_lo, seg_hi, &base_primes)?;
            f(&SieveSegment {
                lo: seg_lo,
                hi: seg_hi,
                records,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_range;

    #[test]
    fn concatenated_segments_equal_single_sieve() {
        let whole = sieve_range(1, 2_000).unwrap();
        let chunks = par_map_segments_split(1, 2_000, &[700, 701, 1999], |seg| {
            Ok(seg.records.clone())
        })
        .unwrap();
        let stitched: Vec<_> = chunks.into_iter().flatten().collect();
        assert_eq!(stitched, whole.records);
    }

    #[test]
    fn split_points_end_segments() {
        let bounds =
            par_map_segments_split(1, 1_000, &[10, 500], |seg| Ok((seg.lo, seg.hi))).unwrap();
        assert!(bounds.contains(&(1, 10)));
        assert!(bounds.iter().any(|&(_, hi)| hi == 500));
        assert_eq!(bounds.last().unwrap().1, 1_000);
        // Contiguous, in order.
        for w in bounds.windows(2) {
            assert_eq!(w[0].1 + 1, w[1].0);
        }
    }

    #[test]
    fn sum_reduction_is_order_stable() {
        let sums = par_map_segments(1, 10_000, |seg| {
            Ok(seg.iter().map(|r| r.sigma).sum::<u64>())
        })
        .unwrap();
        let total: u64 = sums.iter().sum();
        let direct: u64 = sieve_range(1, 10_000)
            .unwrap()
            .iter()
            .map(|r| r.sigma)
            .sum();
        assert_eq!(total, direct);
    }
}
