//! On-disk segment cache.
//!
//! Layout (all little-endian):
//!   magic "ALQ1" | version u32 | lo u64 | hi u64
//!   then one 39-byte record per integer (σ u64, τ u32, φ u64, μ i8, ω u8,
//!   Ω u8, largest prime u64, smallest prime u64 — n itself is implicit),
//!   then an FNV-1a 64-bit checksum of every preceding byte.
//!
//! Reads are strict: any mismatch — magic, version, bounds, record count,
//! checksum, or an impossible field — yields `None`, and callers silently
//! recompute. A stale or truncated cache can cost time, never correctness.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::{sieve_range_with_bound, ArithmeticRecord, SieveSegment, MAX_SIEVE_BOUND};
use crate::error::Result;

pub(crate) const CACHE_MAGIC: [u8; 4] = *b"ALQ1";
pub(crate) const CACHE_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8;
const RECORD_LEN: usize = 8 + 4 + 8 + 1 + 1 + 1 + 8 + 8;

/// Conventional file name for a segment within a cache directory.
pub fn segment_cache_path(dir: &Path, lo: u64, hi: u64) -> PathBuf {
    dir.join(format!("alq-{lo}-{hi}.seg"))
}

/// Serialize a segment to `path`, creating parent directories as needed.
pub fn write_segment(path: &Path, seg: &SieveSegment) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut buf = Vec::with_capacity(HEADER_LEN + seg.len() * RECORD_LEN + 8);
    buf.extend_from_slice(&CACHE_MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&seg.lo.to_le_bytes());
    buf.extend_from_slice(&seg.hi.to_le_bytes());
    for r in seg.iter() {
        buf.extend_from_slice(&r.sigma.to_le_bytes());
        buf.extend_from_slice(&r.tau.to_le_bytes());
        buf.extend_from_slice(&r.phi.to_le_bytes());
        buf.push(r.mu as u8);
        buf.push(r.small_omega);
        buf.push(r.big_omega);
        buf.extend_from_slice(&r.p_plus.to_le_bytes());
        buf.extend_from_slice(&r.spf.to_le_bytes());
    }
    let sum = fnv1a(&buf);
    buf.extend_from_slice(&sum.to_le_bytes());
    let mut file = fs::File::create(path)?;
    file.write_all(&buf)?;
    Ok(())
}

/// Deserialize a segment; `None` if the file is absent or fails validation.
pub fn read_segment(path: &Path) -> Option<SieveSegment> {
    let buf = fs::read(path).ok()?;
    if buf.len() < HEADER_LEN + 8 || buf[..4] != CACHE_MAGIC {
        return None;
    }
    let version = u32::from_le_bytes(buf[4..8].try_into().ok()?);
    if version != CACHE_VERSION {
        return None;
    }
    let lo = u64::from_le_bytes(buf[8..16].try_into().ok()?);
    let hi = u64::from_le_bytes(buf[16..24].try_into().ok()?);
    if lo == 0 || lo > hi || hi > MAX_SIEVE_BOUND {
        return None;
    }
    let count = (hi - lo + 1) as usize;
    if buf.len() != HEADER_LEN + count * RECORD_LEN + 8 {
        return None;
    }
    let payload_end = buf.len() - 8;
    let stored = u64::from_le_bytes(buf[payload_end..].try_into().ok()?);
    if fnv1a(&buf[..payload_end]) != stored {
        return None;
    }
    let mut records = Vec::with_capacity(count);
    let mut off = HEADER_LEN;
    for i in 0..count {
        let sigma = u64::from_le_bytes(buf[off..off + 8].try_into().ok()?);
        let tau = u32::from_le_bytes(buf[off + 8..off + 12].try_into().ok()?);
        let phi = u64::from_le_bytes(buf[off + 12..off + 20].try_into().ok()?);
        let mu = buf[off + 20] as i8;
        let small_omega = buf[off + 21];
        let big_omega = buf[off + 22];
        let p_plus = u64::from_le_bytes(buf[off + 23..off + 31].try_into().ok()?);
        let spf = u64::from_le_bytes(buf[off + 31..off + 39].try_into().ok()?);
        if !(-1..=1).contains(&mu) {
            return None;
        }
        records.push(ArithmeticRecord {
            n: lo + i as u64,
            sigma,
            tau,
            small_omega,
            big_omega,
            phi,
            mu,
            p_plus,
            spf,
        });
        off += RECORD_LEN;
    }
    Some(SieveSegment { lo, hi, records })
}

/// Sieve `[lo, hi]`, consulting a cache directory first and populating it on
/// a miss. Cache write failures are swallowed — the computed segment is
/// returned regardless.
pub fn sieve_range_cached(lo: u64, hi: u64, dir: &Path, bound: u64) -> Result<SieveSegment> {
    let path = segment_cache_path(dir, lo, hi);
    if let Some(seg) = read_segment(&path) {
        if seg.lo == lo && seg.hi == hi {
            return Ok(seg);
        }
    }
    let seg = sieve_range_with_bound(lo, hi, bound)?;
    let _ = write_segment(&path, &seg);
    Ok(seg)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
