//! Linear sieve for ranges starting at 1.
//!
//! Each composite is visited exactly once, at its smallest prime factor p.
//! Alongside spf we track spf_pow(n) = p^{v_p(n)}, which splits n into a
//! prime power times a coprime, already-computed core — so every record is
//! assembled from one multiplicative combination step.

use super::ArithmeticRecord;
use crate::error::{Error, Result};

pub(super) fn sieve_from_one(hi: u64) -> Result<Vec<ArithmeticRecord>> {
    let len = hi as usize;
    let mut records = Vec::with_capacity(len);
    records.push(ArithmeticRecord::one());
    if hi == 1 {
        return Ok(records);
    }

    let mut spf = vec![0u32; len + 1];
    let mut spf_pow = vec![0u64; len + 1];
    let mut primes: Vec<u32> = Vec::new();

    for n in 2..=len {
        if spf[n] == 0 {
            spf[n] = n as u32;
            spf_pow[n] = n as u64;
            primes.push(n as u32);
        }
        let p = u64::from(spf[n]);
        let pe = spf_pow[n];
        let core = n as u64 / pe;
        let rec = if core == 1 {
            prime_power_record(n as u64, p)
        } else {
            combine(&records[core as usize - 1], p, pe, n as u64)?
        };
        records.push(rec);

        for &q in &primes {
            let q = u64::from(q);
            if q > p {
                break;
            }
            let m = n as u64 * q;
            if m > hi {
                break;
            }
            spf[m as usize] = q as u32;
            spf_pow[m as usize] = if q == p { pe * q } else { q };
        }
    }
    Ok(records)
}

fn prime_power_record(n: u64, p: u64) -> ArithmeticRecord {
    let mut e = 0u32;
    let mut sigma = 1u64;
    let mut m = n;
    while m > 1 {
        m /= p;
        e += 1;
        sigma = sigma * p + 1; // σ(p^e) < 2n, safe at any supported bound
    }
    ArithmeticRecord {
        n,
        sigma,
        tau: e + 1,
        small_omega: 1,
        big_omega: e as u8,
        phi: n - n / p,
        mu: if e == 1 { -1 } else { 0 },
        p_plus: p,
        spf: p,
    }
}

/// Record for n = core · p^e where p < every prime factor of core.
fn combine(core: &ArithmeticRecord, p: u64, pe: u64, n: u64) -> Result<ArithmeticRecord> {
    let mut e = 0u32;
    let mut sigma_pp = 1u64;
    let mut m = pe;
    while m > 1 {
        m /= p;
        e += 1;
        sigma_pp = sigma_pp * p + 1;
    }
    Ok(ArithmeticRecord {
        n,
        sigma: core
            .sigma
            .checked_mul(sigma_pp)
            .ok_or(Error::Overflow("sigma in linear sieve"))?,
        tau: core
            .tau
            .checked_mul(e + 1)
            .ok_or(Error::Overflow("tau in linear sieve"))?,
        small_omega: core.small_omega + 1,
        big_omega: core.big_omega + e as u8,
        phi: core.phi * (pe - pe / p),
        mu: if e >= 2 { 0 } else { -core.mu },
        p_plus: core.p_plus,
        spf: p,
    })
}
