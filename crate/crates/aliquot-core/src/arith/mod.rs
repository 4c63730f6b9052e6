//! Arithmetic-function sieving over integer ranges.
//!
//! A [`SieveSegment`] holds one dense record per integer of a range
//! `[lo, hi]`. Ranges starting at 1 use a linear sieve keyed on smallest
//! prime factor; general ranges recompute per segment by dividing out the
//! primes up to √hi. Both paths produce identical records, and
//! [`scan::par_map_segments`] streams a large range through worker threads
//! with ordered reduction so results never depend on partitioning or thread
//! count.

mod cache;
mod linear;
mod primes;
mod segmented;
pub mod scan;

pub use cache::{read_segment, segment_cache_path, sieve_range_cached, write_segment};
pub use primes::{is_prime_u64, primes_up_to};

use crate::error::{Error, Result};

/// Hard ceiling on any sieved value: below this, σ(n) < 2⁶⁴ with slack
/// (σ(n)/n stays under 7 for n ≤ 10¹⁵), so all products fit checked u64.
pub const MAX_SIEVE_BOUND: u64 = 1_000_000_000_000_000;

/// Default upper bound accepted by [`sieve_range`]; larger requests must opt
/// in explicitly via [`sieve_range_with_bound`].
pub const DEFAULT_SIEVE_BOUND: u64 = 100_000_000;

/// Longest range a single [`sieve_range`] call will materialize (~200 MB of
/// records). Larger scans should stream via [`scan::par_map_segments`].
pub const MAX_SEGMENT_LEN: u64 = 1 << 22;

/// Segment length used by the streaming scan driver (per-worker ~12 MB).
pub const SCAN_SEGMENT_LEN: u64 = 1 << 18;

/// Every multiplicative invariant of a single integer that the censuses need.
///
/// Conventions at n = 1: σ = τ = φ = 1, μ = 1, ω = Ω = 0, and both the
/// largest and smallest prime factor are reported as 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArithmeticRecord {
    pub n: u64,
    /// Sum of all positive divisors of n.
    pub sigma: u64,
    /// Number of positive divisors of n.
    pub tau: u32,
    /// Number of distinct prime factors of n.
    pub small_omega: u8,
    /// Number of prime factors of n counted with multiplicity.
    pub big_omega: u8,
    /// Euler totient of n.
    pub phi: u64,
    /// Möbius value: 0 if n has a squared factor, else (−1)^ω.
    pub mu: i8,
    /// Largest prime factor of n (1 for n = 1).
    pub p_plus: u64,
    /// Smallest prime factor of n (1 for n = 1).
    pub spf: u64,
}

impl ArithmeticRecord {
    /// σ(n) − 2n, the quantity every perfection notion measures.
    pub fn abundance(&self) -> i64 {
        self.sigma as i64 - 2 * self.n as i64
    }

    pub(crate) fn one() -> Self {
        ArithmeticRecord {
            n: 1,
            sigma: 1,
            tau: 1,
            small_omega: 0,
            big_omega: 0,
            phi: 1,
            mu: 1,
            p_plus: 1,
            spf: 1,
        }
    }
}

/// Dense records for every integer in `[lo, hi]`; `records[i].n == lo + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveSegment {
    pub lo: u64,
    pub hi: u64,
    pub records: Vec<ArithmeticRecord>,
}

impl SieveSegment {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record for n; panics if n is outside `[lo, hi]`.
    pub fn get(&self, n: u64) -> &ArithmeticRecord {
        assert!(
            n >= self.lo && n <= self.hi,
            "n = {n} outside segment [{}, {}]",
            self.lo,
            self.hi
        );
        &self.records[(n - self.lo) as usize]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ArithmeticRecord> {
        self.records.iter()
    }
}

/// Sieve `[lo, hi]` under the default bound ([`DEFAULT_SIEVE_BOUND`]).
pub fn sieve_range(lo: u64, hi: u64) -> Result<SieveSegment> {
    sieve_range_with_bound(lo, hi, DEFAULT_SIEVE_BOUND)
}

/// Sieve `[lo, hi]` with an explicit bound ceiling (≤ [`MAX_SIEVE_BOUND`]).
///
/// Errors: `InvalidArgument` for lo = 0 or lo > hi; `RangeTooLarge` when hi
/// exceeds the bound or the range exceeds [`MAX_SEGMENT_LEN`] (the caller is
/// expected to split, or to use the streaming scan driver).
pub fn sieve_range_with_bound(lo: u64, hi: u64, bound: u64) -> Result<SieveSegment> {
    if lo == 0 {
        return Err(Error::invalid("sieve range starts at 1; lo = 0"));
    }
    if lo > hi {
        return Err(Error::invalid(format!("empty range: lo {lo} > hi {hi}")));
    }
    let bound = bound.min(MAX_SIEVE_BOUND);
    if hi > bound {
        return Err(Error::too_large(format!(
            "hi = {hi} exceeds configured bound {bound}"
        )));
    }
    if hi - lo + 1 > MAX_SEGMENT_LEN {
        return Err(Error::too_large(format!(
            "segment of {} records exceeds budget {MAX_SEGMENT_LEN}; split the range",
            hi - lo + 1
        )));
    }
    let records = if lo == 1 {
        linear::sieve_from_one(hi)?
    } else {
        let primes = primes::primes_up_to(isqrt(hi));
        segmented::sieve_segment(lo, hi, &primes)?
    };
    Ok(SieveSegment { lo, hi, records })
}

/// All positive divisors of n in ascending order.
pub fn divisors_of(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::invalid("divisors_of(0)"));
    }
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let prev_len = divs.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..prev_len {
                divs.push(divs[i] * pe);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Prime factorization of n as ascending (prime, exponent) pairs; empty for n = 1.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0u32;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// σ(n) computed by direct factorization (used where no sieve is in scope).
pub fn sigma_of(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("sigma_of(0)"));
    }
    let mut sigma: u64 = 1;
    for (p, e) in factorize(n) {
        let mut s_pp: u64 = 1;
        for _ in 0..e {
            s_pp = s_pp
                .checked_mul(p)
                .and_then(|v| v.checked_add(1))
                .ok_or(Error::Overflow("sigma_of"))?;
        }
        sigma = sigma.checked_mul(s_pp).ok_or(Error::Overflow("sigma_of"))?;
    }
    Ok(sigma)
}

/// Count of y-smooth integers in `[1, x]` (largest prime factor ≤ y; 1 counts).
pub fn count_smooth(x: u64, y: u64) -> Result<u64> {
    if y < 2 || y > x {
        return Err(Error::invalid(format!(
            "count_smooth requires 2 <= y <= x, got x = {x}, y = {y}"
        )));
    }
    let partial = scan::par_map_segments(1, x, |seg| {
        Ok(seg.iter().filter(|r| r.p_plus <= y).count() as u64)
    })?;
    Ok(partial.into_iter().sum())
}

/// Count of integers in `[1, x]` with exactly r prime factors with multiplicity.
pub fn count_omega(r: u32, x: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::invalid("count_omega requires r >= 1 (only n = 1 has zero factors)"));
    }
    if x == 0 {
        return Err(Error::invalid("count_omega requires x >= 1"));
    }
    let partial = scan::par_map_segments(1, x, |seg| {
        Ok(seg.iter().filter(|rec| u32::from(rec.big_omega) == r).count() as u64)
    })?;
    Ok(partial.into_iter().sum())
}

/// π(x): number of primes ≤ x.
pub fn prime_count(x: u64) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    let partial = scan::par_map_segments(1, x, |seg| {
        Ok(seg.iter().filter(|r| r.tau == 2).count() as u64)
    })?;
    Ok(partial.into_iter().sum())
}

/// Floor of √n, exact for all u64.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}
