//! Classification of solutions to the congruence b·σ(n) ≡ k (mod n).
//!
//! A solution n = p·m with p prime, p ∤ m, b·σ(m) = k and m | k is called
//! *regular*: such n satisfy the congruence automatically, since
//! b·σ(pm) = (1 + p)·b·σ(m) = k + p·k and pm | pk. One fixed m yields a
//! regular solution p·m for every prime p outside m, which is what produces
//! arithmetic-progression-like families among the solutions. Solutions with
//! no such splitting are *sporadic*.

use crate::arith::{factorize, scan, sigma_of};
use crate::error::{Error, Result};

/// How one n relates to the congruence b·σ(n) ≡ k (mod n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    /// The congruence does not hold at n.
    NotASolution,
    /// n = p·m with p prime, p ∤ m, b·σ(m) = k, m | k; smallest such p.
    Regular { p: u64, m: u64 },
    /// The congruence holds but no regular splitting exists.
    Sporadic,
}

/// A classified integer, carrying the congruence parameters it was tested
/// against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceClassification {
    pub n: u64,
    pub k: i64,
    pub b: u64,
    pub kind: SolutionKind,
}

/// Classify n against b·σ(n) ≡ k (mod n).
pub fn classify(n: u64, k: i64, b: u64) -> Result<CongruenceClassification> {
    if n == 0 || b == 0 {
        return Err(Error::invalid("congruence needs n >= 1 and b >= 1"));
    }
    let sigma = sigma_of(n)?;
    Ok(classify_with_sigma(n, sigma, k, b))
}

/// Sporadic solutions n ≤ x of b·σ(n) ≡ k (mod n), ascending. Only n with
/// n·b > |k| are reported: below that scale the residue k does not constrain
/// σ(n) meaningfully, so those n are noise rather than members of a family.
pub fn enumerate_sporadic(x: u64, k: i64, b: u64) -> Result<Vec<u64>> {
    if x == 0 || b == 0 {
        return Err(Error::invalid("sporadic census needs x >= 1 and b >= 1"));
    }
    let partial = scan::par_map_segments(1, x, |seg| {
        let mut found = Vec::new();
        for rec in seg.iter() {
            let scale = u128::from(rec.n) * u128::from(b);
            if scale <= u128::from(k.unsigned_abs()) {
                continue;
            }
            if !satisfies(rec.n, rec.sigma, k, b) {
                continue;
            }
            if regular_split(rec.n, rec.sigma, k, b).is_none() {
                found.push(rec.n);
            }
        }
        Ok(found)
    })?;
    Ok(partial.into_iter().flatten().collect())
}

/// Classification when σ(n) is already known (e.g. from a sieve record).
pub fn classify_with_sigma(n: u64, sigma: u64, k: i64, b: u64) -> CongruenceClassification {
    let kind = if !satisfies(n, sigma, k, b) {
        SolutionKind::NotASolution
    } else if let Some((p, m)) = regular_split(n, sigma, k, b) {
        SolutionKind::Regular { p, m }
    } else {
        SolutionKind::Sporadic
    };
    CongruenceClassification { n, k, b, kind }
}

fn satisfies(n: u64, sigma: u64, k: i64, b: u64) -> bool {
    let r = ((u128::from(b) * u128::from(sigma)) % u128::from(n)) as i128;
    (r - i128::from(k)).rem_euclid(i128::from(n)) == 0
}

/// Smallest prime p with n = p·m, p ∤ m, b·σ(m) = k and m | k, if any.
fn regular_split(n: u64, sigma: u64, k: i64, b: u64) -> Option<(u64, u64)> {
    // b·σ(m) = k forces k positive and divisible by b.
    if k <= 0 || (k as u64) % b != 0 {
        return None;
    }
    let target = k as u64 / b;
    for (p, e) in factorize(n) {
        if e != 1 {
            continue;
        }
        // p appears to the first power, so σ(n) = (1 + p)·σ(n / p).
        let m = n / p;
        let sigma_m = sigma / (1 + p);
        if sigma_m == target && (k as u64) % m == 0 {
            return Some((p, m));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_textbook_cases() {
        // 30 = 5·6 with σ(6) = 12 = k and 6 | 12, so the splitting is regular.
        assert_eq!(
            classify(30, 12, 1).unwrap().kind,
            SolutionKind::Regular { p: 5, m: 6 }
        );
        // σ(8) = 15 ≡ −1 (mod 8); negative k admits no regular splitting.
        assert_eq!(classify(8, -1, 1).unwrap().kind, SolutionKind::Sporadic);
        // σ(7) = 8 and 8 − 5 = 3 is not a multiple of 7.
        assert_eq!(classify(7, 5, 1).unwrap().kind, SolutionKind::NotASolution);
        // Everything is ≡ 0 (mod 1), and 1 has no prime splitting.
        assert_eq!(classify(1, 5, 3).unwrap().kind, SolutionKind::Sporadic);
        assert!(classify(0, 1, 1).is_err());
        assert!(classify(10, 1, 0).is_err());
    }

    #[test]
    fn regular_members_reconstruct() {
        // For m with m | σ(m), every prime p ∤ m makes p·m a regular solution
        // of σ(n) ≡ σ(m) (mod n).
        for (m, sigma_m) in [(1u64, 1u64), (6, 12), (28, 56), (120, 360), (496, 992)] {
            assert_eq!(sigma_of(m).unwrap(), sigma_m);
            for p in [11u64, 13, 17, 101] {
                if m % p == 0 {
                    continue;
                }
                let got = classify(p * m, sigma_m as i64, 1).unwrap();
                let SolutionKind::Regular { p: rp, m: rm } = got.kind else {
                    panic!("{} * {} should be regular, got {:?}", p, m, got.kind);
                };
                assert_eq!(rp * rm, p * m);
                assert_eq!(sigma_of(rm).unwrap(), sigma_m);
                assert_eq!(sigma_m % rm, 0);
            }
        }
    }

    #[test]
    fn splitting_prime_is_pinned_by_sigma() {
        // For fixed n and target t = k/b, σ(n) = (1 + p)·t determines p, so at
        // most one prime can head a regular splitting. With b = 5, k = 120 the
        // target is 24 = σ(15) and σ(30) = 72 = (1 + 2)·24 picks p = 2, even
        // though 30 also splits off p = 5 (σ(6) = 12 misses the target).
        assert_eq!(
            classify(30, 120, 5).unwrap().kind,
            SolutionKind::Regular { p: 2, m: 15 }
        );
        // The naive shape n = 7·5 with k = σ(5) = 6 is NOT a solution: the
        // splitting needs m | k, and 5 ∤ 6 — indeed σ(35) = 48 ≡ 13 (mod 35).
        assert_eq!(classify(35, 6, 1).unwrap().kind, SolutionKind::NotASolution);
    }

    #[test]
    fn sporadic_census_examples() {
        // σ(2^j) = 2^{j+1} − 1 ≡ −1 (mod 2^j): all powers of two qualify and
        // k = −1 < 0 rules out regular splittings.
        let got = enumerate_sporadic(1_000, -1, 1).unwrap();
        for j in 1..=9 {
            assert!(got.contains(&(1u64 << j)), "missing 2^{j}");
        }
        // n = 1 is a trivial solution but sits below the |k| scale.
        assert!(!got.contains(&1));

        // k = 12: the 6p family is regular, 24 is genuinely sporadic.
        let got = enumerate_sporadic(1_000, 12, 1).unwrap();
        assert!(got.contains(&24));
        for regular in [30u64, 42, 66, 78] {
            assert!(!got.contains(&regular), "{regular} splits as 6p");
        }
        assert!(!got.contains(&6), "6 sits below the |k| scale");

        // k = 0 asks for n | σ(n).
        assert_eq!(enumerate_sporadic(100, 0, 1).unwrap(), vec![1, 6, 28]);
    }

    #[test]
    fn census_matches_per_element_classification() {
        for k in [-6i64, 0, 1, 12, 56] {
            let got = enumerate_sporadic(600, k, 1).unwrap();
            let mut expect = Vec::new();
            for n in 1..=600u64 {
                if u128::from(n) <= u128::from(k.unsigned_abs()) {
                    continue;
                }
                if classify(n, k, 1).unwrap().kind == SolutionKind::Sporadic {
                    expect.push(n);
                }
            }
            assert_eq!(got, expect, "k = {k}");
        }
    }

    #[test]
    fn scaled_congruence_respects_b() {
        // b = 2: 2·σ(m) = k. m = 5, k = 12: σ(5) = 6, 5 ∤ 12 → not regular;
        // m = 3, k = 8: σ(3) = 4, 2·4 = 8, 3 ∤ 8 → still not regular;
        // m = 6, k = 24: 2·σ(6) = 24, 6 | 24 ✓ → p·6 regular for p ≥ 5.
        assert_eq!(
            classify(30, 24, 2).unwrap().kind,
            SolutionKind::Regular { p: 5, m: 6 }
        );
        // And the congruence itself: 2·σ(30) = 144 ≡ 24 (mod 30) since 120 = 4·30.
        assert_eq!(
            classify(42, 24, 2).unwrap().kind,
            SolutionKind::Regular { p: 7, m: 6 }
        );
    }
}
