//! Segmented sieve for ranges that do not start at 1.
//!
//! For each base prime p ≤ √hi we walk its multiples in the segment and
//! divide the full power p^{v_p(n)} out of a residual copy of n, folding
//! σ(p^e), τ, φ, μ, ω, Ω into accumulator arrays. Whatever remains of the
//! residual afterwards is either 1 or a single prime > √hi, which closes
//! every multiplicative function exactly.

use super::ArithmeticRecord;
use crate::error::{Error, Result};

pub(super) fn sieve_segment(lo: u64, hi: u64, base_primes: &[u32]) -> Result<Vec<ArithmeticRecord>> {
    let len = (hi - lo + 1) as usize;
    let mut rem: Vec<u64> = (lo..=hi).collect();
    let mut sigma = vec![1u64; len];
    let mut tau = vec![1u32; len];
    let mut phi = vec![1u64; len];
    let mut small_omega = vec![0u8; len];
    let mut big_omega = vec![0u8; len];
    let mut squarefull = vec![false; len];
    let mut p_plus = vec![1u64; len];
    let mut spf = vec![1u64; len];

    for &p in base_primes {
        let p = u64::from(p);
        if p * p > hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m <= hi {
            let idx = (m - lo) as usize;
            // rem[idx] still contains the full power of p (smaller primes only
            // were removed), so the first division is exact.
            let mut r = rem[idx] / p;
            let mut e = 1u32;
            let mut pe = p;
            let mut sigma_pp = 1 + p;
            while r % p == 0 {
                r /= p;
                e += 1;
                pe *= p;
                sigma_pp = sigma_pp * p + 1;
            }
            rem[idx] = r;
            sigma[idx] = sigma[idx]
                .checked_mul(sigma_pp)
                .ok_or(Error::Overflow("sigma in segmented sieve"))?;
            tau[idx] = tau[idx]
                .checked_mul(e + 1)
                .ok_or(Error::Overflow("tau in segmented sieve"))?;
            phi[idx] *= pe - pe / p;
            small_omega[idx] += 1;
            big_omega[idx] += e as u8;
            if e >= 2 {
                squarefull[idx] = true;
            }
            p_plus[idx] = p;
            if spf[idx] == 1 {
                spf[idx] = p;
            }
            m += p;
        }
    }

    let mut records = Vec::with_capacity(len);
    for idx in 0..len {
        let n = lo + idx as u64;
        let r = rem[idx];
        if r > 1 {
            // Leftover cofactor is prime: a composite leftover would need two
            // factors > √hi, exceeding hi.
            sigma[idx] = sigma[idx]
                .checked_mul(r + 1)
                .ok_or(Error::Overflow("sigma in segmented sieve"))?;
            tau[idx] = tau[idx]
                .checked_mul(2)
                .ok_or(Error::Overflow("tau in segmented sieve"))?;
            phi[idx] *= r - 1;
            small_omega[idx] += 1;
            big_omega[idx] += 1;
            p_plus[idx] = r;
            if spf[idx] == 1 {
                spf[idx] = r;
            }
        }
        let mu = if squarefull[idx] {
            0
        } else if small_omega[idx] % 2 == 0 {
            1
        } else {
            -1
        };
        records.push(ArithmeticRecord {
            n,
            sigma: sigma[idx],
            tau: tau[idx],
            small_omega: small_omega[idx],
            big_omega: big_omega[idx],
            phi: phi[idx],
            mu,
            p_plus: p_plus[idx],
            spf: spf[idx],
        });
    }
    Ok(records)
}
