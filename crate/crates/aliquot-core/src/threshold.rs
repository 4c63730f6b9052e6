//! Closeness thresholds for the |σ(n) − ℓn| < k(n) membership test.
//!
//! Every comparison is decided exactly over the integers/rationals. Floating
//! point appears only as a prefilter: when the two sides are far apart on a
//! log scale (beyond a margin that dwarfs f64 rounding error) the float
//! verdict stands; anything near the boundary is re-decided exactly, so the
//! result is identical to the all-exact computation and fully deterministic.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};

use crate::error::{Error, Result};

/// Target ratio ℓ = a/b ≥ 1 in lowest terms (σ(n)/n is compared against it).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ell {
    a: u64,
    b: u64,
}

impl Ell {
    /// Build ℓ = a/b, normalizing to lowest terms; requires ℓ ≥ 1.
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if b == 0 {
            return Err(Error::invalid("ratio denominator is zero"));
        }
        if a < b {
            return Err(Error::invalid(format!("ratio {a}/{b} is below 1")));
        }
        let g = gcd(a, b);
        Ok(Ell { a: a / g, b: b / g })
    }

    pub fn integer(v: u64) -> Result<Self> {
        Ell::new(v, 1)
    }

    pub fn numer(&self) -> u64 {
        self.a
    }

    pub fn denom(&self) -> u64 {
        self.b
    }

    /// Signed deviation b·σ(n) − a·n, the exact numerator of σ(n) − ℓn
    /// scaled by b. Fits i128 for all u64 inputs.
    pub fn deviation(&self, n: u64, sigma: u64) -> i128 {
        i128::from(self.b) * i128::from(sigma) - i128::from(self.a) * i128::from(n)
    }
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

impl FromStr for Ell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = parse_ratio(s)?;
        Ell::new(a, b)
    }
}

/// The closeness radius k(n) on the right-hand side of |σ(n) − ℓn| < k(n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdSpec {
    /// k(n) = num/den, a fixed positive rational.
    Constant { num: u64, den: u64 },
    /// k(n) = n^(p/q) with 0 < p/q < 1 in lowest terms.
    Power { p: u32, q: u32 },
    /// k(n) = (num/den)·n with num/den > 0 in lowest terms.
    Linear { num: u64, den: u64 },
    /// k(n) = n / ln n. At n = 1 the radius blows up, so membership holds.
    YOverLogY,
}

impl ThresholdSpec {
    pub fn constant(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::invalid("constant threshold must be positive"));
        }
        let g = gcd(num, den);
        Ok(ThresholdSpec::Constant {
            num: num / g,
            den: den / g,
        })
    }

    pub fn power(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 || p >= q {
            return Err(Error::invalid(format!(
                "power exponent {p}/{q} must lie strictly between 0 and 1"
            )));
        }
        if q > 10_000 {
            return Err(Error::invalid("power exponent denominator above 10000"));
        }
        let g = gcd(u64::from(p), u64::from(q)) as u32;
        Ok(ThresholdSpec::Power { p: p / g, q: q / g })
    }

    pub fn linear(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::invalid("linear threshold coefficient must be positive"));
        }
        let g = gcd(num, den);
        Ok(ThresholdSpec::Linear {
            num: num / g,
            den: den / g,
        })
    }

    /// Exact strict test |σ(n) − ℓn| < k(n).
    pub fn within(&self, ell: Ell, n: u64, sigma: u64) -> bool {
        debug_assert!(n >= 1);
        let dev = ell.deviation(n, sigma);
        if dev == 0 {
            // Every supported radius is strictly positive (n = 1 included).
            return true;
        }
        let dev = dev.unsigned_abs();
        let b = u128::from(ell.denom());
        match *self {
            // |Δ|/b < num/den  ⟺  |Δ|·den < b·num.
            ThresholdSpec::Constant { num, den } => {
                match dev.checked_mul(u128::from(den)) {
                    Some(lhs) => lhs < b * u128::from(num),
                    None => {
                        BigUint::from(dev) * BigUint::from(den)
                            < BigUint::from(b) * BigUint::from(num)
                    }
                }
            }
            ThresholdSpec::Power { p, q } => power_within(dev, ell.denom(), n, p, q),
            // |Δ|/b < (num/den)·n  ⟺  |Δ|·den < b·num·n.
            ThresholdSpec::Linear { num, den } => {
                let lhs = dev.checked_mul(u128::from(den));
                let rhs = b
                    .checked_mul(u128::from(num))
                    .and_then(|v| v.checked_mul(u128::from(n)));
                match (lhs, rhs) {
                    (Some(l), Some(r)) => l < r,
                    _ => {
                        BigUint::from(dev) * BigUint::from(den)
                            < BigUint::from(b) * BigUint::from(num) * BigUint::from(n)
                    }
                }
            }
            ThresholdSpec::YOverLogY => {
                if n == 1 {
                    return true; // y/ln y → +∞ as y → 1⁺
                }
                y_over_log_y_within(dev, ell.denom(), n)
            }
        }
    }
}

impl fmt::Display for ThresholdSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ratio = |f: &mut fmt::Formatter<'_>, label, num: u64, den: u64| {
            if den == 1 {
                write!(f, "{label}:{num}")
            } else {
                write!(f, "{label}:{num}/{den}")
            }
        };
        match *self {
            ThresholdSpec::Constant { num, den } => ratio(f, "constant", num, den),
            ThresholdSpec::Power { p, q } => write!(f, "power:{p}/{q}"),
            ThresholdSpec::Linear { num, den } => ratio(f, "linear", num, den),
            ThresholdSpec::YOverLogY => write!(f, "y-over-log-y"),
        }
    }
}

impl FromStr for ThresholdSpec {
    type Err = Error;

    /// Accepts `constant:C`, `power:P/Q`, `linear:NUM/DEN` (or `linear:NUM`),
    /// and `y-over-log-y` (alias `yly`).
    fn from_str(s: &str) -> Result<Self> {
        if s == "y-over-log-y" || s == "yly" {
            return Ok(ThresholdSpec::YOverLogY);
        }
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("threshold `{s}` (expected kind:param)")))?;
        match kind {
            "constant" => {
                let (num, den) = parse_ratio(param)?;
                ThresholdSpec::constant(num, den)
            }
            "power" => {
                let (p, q) = parse_ratio(param)?;
                let (p, q) = (
                    u32::try_from(p).map_err(|_| Error::invalid("power numerator too large"))?,
                    u32::try_from(q).map_err(|_| Error::invalid("power denominator too large"))?,
                );
                ThresholdSpec::power(p, q)
            }
            "linear" => {
                let (num, den) = parse_ratio(param)?;
                ThresholdSpec::linear(num, den)
            }
            other => Err(Error::invalid(format!("unknown threshold kind `{other}`"))),
        }
    }
}

fn parse_ratio(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::invalid(format!("ratio `{s}` (expected A or A/B)"));
    match s.split_once('/') {
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
        Some((a, b)) => Ok((
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        )),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Decide |Δ|/b < n^(p/q), i.e. |Δ|^q < b^q · n^p, exactly.
///
/// A log-scale float prefilter settles the overwhelming majority of calls;
/// only near-boundary cases pay for big-integer exponentiation.
fn power_within(dev: u128, b: u64, n: u64, p: u32, q: u32) -> bool {
    let lhs = f64::from(q) * ln_f64_u128(dev);
    let rhs = f64::from(q) * (b as f64).ln() + f64::from(p) * (n as f64).ln();
    // ln values are < 100 and q, p <= 10^4, so accumulated f64 error is far
    // below this margin.
    const MARGIN: f64 = 1e-4;
    if lhs < rhs - MARGIN {
        return true;
    }
    if lhs > rhs + MARGIN {
        return false;
    }
    let lhs = BigUint::from(dev).pow(q);
    let rhs = BigUint::from(b).pow(q) * BigUint::from(n).pow(p);
    lhs < rhs
}

/// Decide |Δ|/b < n/ln n, i.e. |Δ|·ln n < b·n, exactly (n ≥ 2).
fn y_over_log_y_within(dev: u128, b: u64, n: u64) -> bool {
    let lhs = (dev as f64) * (n as f64).ln();
    let rhs = (b as f64) * (n as f64);
    if lhs < rhs * (1.0 - 1e-9) {
        return true;
    }
    if lhs > rhs * (1.0 + 1e-9) {
        return false;
    }
    // Exact: bracket ln n between rationals and tighten until it decides.
    let dev = big_rational_from_u128(dev);
    let target = BigRational::from(BigInt::from(b)) * BigRational::from(BigInt::from(n));
    let mut terms = 24usize;
    loop {
        let (lo, hi) = ln_bracket(n, terms);
        if &dev * hi < target {
            return true;
        }
        if &dev * lo >= target {
            return false;
        }
        terms *= 2;
        assert!(
            terms <= 2048,
            "ln bracket failed to separate |σ−ℓn|·ln n from b·n at n = {n}; \
             this cannot happen for 64-bit inputs (ln n is irrational)"
        );
    }
}

/// Natural log of a u128 via two u64 halves (f64 loses at most a few ulps).
fn ln_f64_u128(v: u128) -> f64 {
    debug_assert!(v > 0);
    if v <= u128::from(u64::MAX) {
        (v as f64).ln()
    } else {
        let shift = 128 - v.leading_zeros() - 53;
        let mant = (v >> shift) as f64;
        mant.ln() + f64::from(shift) * std::f64::consts::LN_2
    }
}

/// ln 2 truncated to 50 decimal digits; the true value lies in
/// [LN2_LO, LN2_LO + 10⁻⁵⁰).
const LN2_DIGITS: &str = "69314718055994530941723212145817656807550013436025";

fn ln2_bracket() -> (BigRational, BigRational) {
    let numer = BigInt::parse_bytes(LN2_DIGITS.as_bytes(), 10).expect("literal");
    let denom = BigInt::from(10u8).pow(LN2_DIGITS.len() as u32);
    let lo = BigRational::new(numer, denom.clone());
    let hi = &lo + BigRational::new(BigInt::one(), denom);
    (lo, hi)
}

/// Rational bracket (lo, hi) with lo < ln n < hi for n ≥ 2.
///
/// Writes n = 2^e·r with r ∈ [1, 2), so ln n = e·ln 2 + 2·atanh(x) for
/// x = (n − 2^e)/(n + 2^e) ∈ [0, 1/3); the series tail after `terms` terms
/// is bounded by x^(2·terms+1)/(1 − x²), giving a rigorous enclosure.
fn ln_bracket(n: u64, terms: usize) -> (BigRational, BigRational) {
    assert!(n >= 2);
    let e = 63 - n.leading_zeros();
    let pow2 = BigInt::one() << e;
    let n_big = BigInt::from(n);
    let x = BigRational::new(&n_big - &pow2, &n_big + &pow2);
    let x2 = &x * &x;

    let mut sum = BigRational::zero();
    let mut x_pow = x.clone(); // x^(2j+1)
    for j in 0..terms {
        sum += &x_pow / BigRational::from(BigInt::from(2 * j as u64 + 1));
        x_pow *= &x2;
    }
    // 0 <= tail < x^(2·terms+1) / ((2·terms+1)(1 − x²)) <= x_pow / (1 − x²).
    let tail = if x.is_zero() {
        BigRational::zero()
    } else {
        &x_pow / (BigRational::one() - &x2)
    };

    let (ln2_lo, ln2_hi) = ln2_bracket();
    let e_big = BigRational::from(BigInt::from(e));
    let two = BigRational::from(BigInt::from(2));
    let lo = &e_big * ln2_lo + &two * &sum;
    let hi = &e_big * ln2_hi + &two * (&sum + &tail);
    (lo, hi)
}

fn big_rational_from_u128(v: u128) -> BigRational {
    BigRational::from(BigInt::from(v))
}
