//! Density estimates and exact constants: reciprocal sums over perfect
//! numbers, per-divisor-count rational constants, disjoint multiplier
//! families and the lower bound they give for the density of near-perfect
//! numbers, and the empirical distribution of σ(n)/n.

use num::{BigInt, One, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime_u64, scan};
use crate::error::{Error, Result};
use crate::nearperfect::{self, MinExceptions};
use crate::ExactRational;

/// Enumeration bound used when assembling the per-divisor-count constants:
/// every qualifying m is searched for below this cutoff rather than copied
/// from a published list.
pub const C_K_SEARCH_BOUND: u64 = 1_000_000;

/// π² as an exact fraction, truncated after 30 significant digits — far
/// beyond what the f64 results can resolve.
const PI_SQUARED_30: (&str, u32) = ("986960440108935861883449099987", 29);

/// Empirical distribution of σ(n)/n: for each u = num/den, the fraction of
/// n ≤ x with σ(n) ≤ u·n (decided exactly in integers).
pub fn empirical_distribution(x: u64, us: &[(u64, u64)]) -> Result<Vec<f64>> {
    if x == 0 {
        return Err(Error::invalid("distribution needs x >= 1"));
    }
    if us.is_empty() || us.iter().any(|&(_, den)| den == 0) {
        return Err(Error::invalid("distribution points must be rationals"));
    }
    let partial = scan::par_map_segments(1, x, |seg| {
        let mut counts = vec![0u64; us.len()];
        for rec in seg.iter() {
            for (i, &(num, den)) in us.iter().enumerate() {
                if u128::from(rec.sigma) * u128::from(den) <= u128::from(rec.n) * u128::from(num) {
                    counts[i] += 1;
                }
            }
        }
        Ok(counts)
    })?;
    let mut totals = vec![0u64; us.len()];
    for counts in partial {
        for (t, c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    Ok(totals.into_iter().map(|c| c as f64 / x as f64).collect())
}

/// Reciprocal sum over the ℓ-perfect numbers up to `limit`.
#[derive(Clone, Debug, PartialEq)]
pub struct InversePerfectSum {
    /// All n ≤ limit with σ(n) = ℓ·n, ascending, straight from the sieve.
    pub members: Vec<u64>,
    /// Σ 1/n over the members, exact.
    pub exact: ExactRational,
    pub approx: f64,
}

/// Find every n ≤ limit with σ(n) = ℓ·n and sum their reciprocals exactly.
pub fn sum_inverse_perfect(limit: u64, ell: u64) -> Result<InversePerfectSum> {
    if limit == 0 || ell < 2 {
        return Err(Error::invalid(
            "reciprocal sum needs limit >= 1 and an integer multiple >= 2",
        ));
    }
    let partial = scan::par_map_segments(1, limit, |seg| {
        Ok(seg
            .iter()
            .filter(|r| u128::from(r.sigma) == u128::from(ell) * u128::from(r.n))
            .map(|r| r.n)
            .collect::<Vec<_>>())
    })?;
    let members: Vec<u64> = partial.into_iter().flatten().collect();
    let exact = members
        .iter()
        .fold(ExactRational::zero(), |acc, &n| {
            acc + ExactRational::new(BigInt::one(), BigInt::from(n))
        });
    let approx = exact.to_f64().unwrap_or(f64::NAN);
    Ok(InversePerfectSum {
        members,
        exact,
        approx,
    })
}

/// The exact constant c_k = Σ 1/m over all m with some divisor count t,
/// 4 ≤ t ≤ k, admitting an exception set of size ≤ k − t. The m-sets are
/// discovered by scanning up to [`C_K_SEARCH_BOUND`], never hard-coded.
pub fn constant_c_k(k: u32) -> Result<ExactRational> {
    constant_c_k_with_bound(k, C_K_SEARCH_BOUND)
}

/// As [`constant_c_k`] with an explicit enumeration bound.
pub fn constant_c_k_with_bound(k: u32, bound: u64) -> Result<ExactRational> {
    if !(4..=9).contains(&k) {
        return Err(Error::invalid("the constant c_k is defined for 4 <= k <= 9"));
    }
    let mut sum = ExactRational::zero();
    for tau in 4..=k {
        for m in nearperfect::solve_structured_m(tau, k - tau, bound)? {
            sum += ExactRational::new(BigInt::one(), BigInt::from(m));
        }
    }
    Ok(sum)
}

/// ⌊log₂(k + 4)⌋ − 3 via exact bit length.
pub fn f_exponent(k: u64) -> Result<u32> {
    if k < 4 {
        return Err(Error::invalid("exponent formulas need k >= 4"));
    }
    Ok((k + 4).ilog2() - 3)
}

/// Smallest j ≥ 1 with 5·2^j > k + 1, i.e. the least integer strictly above
/// log₂(k+1) − log₂5, decided by exact integer comparison.
pub fn j0_exponent(k: u64) -> Result<u32> {
    if k < 4 {
        return Err(Error::invalid("exponent formulas need k >= 4"));
    }
    let mut j = 1u32;
    while 5u128 << j <= u128::from(k) + 1 {
        j += 1;
    }
    Ok(j)
}

/// Are the multiplier families A(mᵢ) = {mᵢ·m′ : m′ squarefree, gcd(mᵢ,m′)=1}
/// disjoint? Decided exactly from the factorizations: an element common to
/// both forces, prime by prime, equal valuations where both mᵢ share a prime
/// and valuation ≤ 1 where only one has it; the families intersect iff those
/// constraints are satisfiable (the lcm itself is then a common element).
pub fn disjoint_families(m1: u64, m2: u64) -> Result<bool> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::invalid("family bases must be positive"));
    }
    if m1 == m2 {
        return Err(Error::invalid("family bases must be distinct"));
    }
    let f1: std::collections::BTreeMap<u64, u32> = factorize(m1).into_iter().collect();
    let f2: std::collections::BTreeMap<u64, u32> = factorize(m2).into_iter().collect();
    let mut intersect = true;
    for (&p, &e1) in &f1 {
        match f2.get(&p) {
            Some(&e2) if e1 != e2 => intersect = false,
            Some(_) => {}
            None if e1 > 1 => intersect = false,
            None => {}
        }
    }
    for (&p, &e2) in &f2 {
        if !f1.contains_key(&p) && e2 > 1 {
            intersect = false;
        }
    }
    Ok(!intersect)
}

/// A density lower bound from pairwise disjoint multiplier families.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityLowerBound {
    /// Σ φ(m)/m² over the family bases, exact.
    pub phi_sum: ExactRational,
    /// (6/π²) · phi_sum.
    pub value: f64,
}

/// Density of ∪ A(m): each family contributes at least (6/π²)·φ(m)/m², and
/// disjointness lets the contributions add. The bases must all admit finite
/// exception sets and have pairwise disjoint families.
pub fn m_lower_bound(ms: &[u64]) -> Result<DensityLowerBound> {
    if ms.is_empty() {
        return Err(Error::invalid("need at least one family base"));
    }
    for (i, &m) in ms.iter().enumerate() {
        let prof = nearperfect::profile(m)?;
        if !matches!(prof.min_exceptions, MinExceptions::Exact(_)) {
            return Err(Error::invalid(format!(
                "{m} admits no exception set, so it heads no admissible family"
            )));
        }
        for &other in &ms[i + 1..] {
            if !disjoint_families(m, other)? {
                return Err(Error::invalid(format!(
                    "families of {m} and {other} overlap"
                )));
            }
        }
    }
    let phi_sum = ms.iter().fold(ExactRational::zero(), |acc, &m| {
        acc + ExactRational::new(
            BigInt::from(totient(m)),
            BigInt::from(m) * BigInt::from(m),
        )
    });
    let (digits, scale) = PI_SQUARED_30;
    let pi_squared = ExactRational::new(
        digits.parse::<BigInt>().expect("constant digits"),
        BigInt::from(10u64).pow(scale),
    );
    let value = (ExactRational::from_integer(6.into()) * &phi_sum / pi_squared)
        .to_f64()
        .expect("small rational");
    Ok(DensityLowerBound { phi_sum, value })
}

/// Greedy admissible subfamily: walk the n ≤ x admitting exception sets of
/// size ≤ k in ascending order, keeping each whose family is disjoint from
/// every family kept so far.
pub fn greedy_admissible(k: u32, x: u64) -> Result<Vec<u64>> {
    let members = nearperfect::census_near(x, k)?;
    let mut kept: Vec<u64> = Vec::new();
    'members: for m in members {
        for &b in &kept {
            if !disjoint_families(b, m)? {
                continue 'members;
            }
        }
        kept.push(m);
    }
    Ok(kept)
}

/// Even perfect numbers ≤ limit, with the doubled Mersenne exponents they
/// certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenPerfect {
    /// 2^(q−1)·(2^q − 1) for each Mersenne prime 2^q − 1, ascending.
    pub numbers: Vec<u64>,
    /// The matching values 2q (exponents of the square shapes built on the
    /// same Mersenne primes).
    pub exponent_doubles: Vec<u32>,
}

/// All even perfect numbers ≤ limit, by testing Mersenne candidates with
/// deterministic primality.
pub fn even_perfect(limit: u64) -> Result<EvenPerfect> {
    let mut out = EvenPerfect {
        numbers: Vec::new(),
        exponent_doubles: Vec::new(),
    };
    for q in 2u32..=63 {
        let mersenne = (1u128 << q) - 1;
        let candidate = (1u128 << (q - 1)) * mersenne;
        if candidate > u128::from(limit) {
            break;
        }
        if is_prime_u64(mersenne as u64) {
            out.numbers.push(candidate as u64);
            out.exponent_doubles.push(2 * q);
        }
    }
    Ok(out)
}

fn totient(m: u64) -> u64 {
    let mut phi = m;
    for (p, _) in factorize(m) {
        phi = phi / p * (p - 1);
    }
    phi
}
