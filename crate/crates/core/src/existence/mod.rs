//! Numerical existence criteria: the non-critical and critical bounds, the sieve
//! for `n = 6`, and the chain of bounds that reduces the `n = 6` problem to a
//! finite check.

mod bounds;
pub mod interval;

pub use bounds::{
    bound_chain, bound_chain_with, initial_bound, refine_bound, BoundChainReport, ChainStep,
    Refinement, DEFAULT_PRECISION,
};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{num_squarefree_poly_divisors, Fq, PrimePower};
use crate::num_theory::Factorizer;

/// Serializes an exact rational as `"num/den"` (or `"num"`).
pub(crate) fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `r` rounded up to `digits` significant decimal digits, as `d.ddd…eN`.
pub fn sci_upper(r: &BigRational, digits: usize) -> String {
    if !r.is_positive() {
        return r.to_string();
    }
    let ten = BigInt::from(10);
    // exponent e with 10^e <= r < 10^(e+1)
    let mut e = (r.numer().bits() as i64 - r.denom().bits() as i64) * 30103 / 100000;
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(ten.pow(k as u32))
        } else {
            BigRational::new(BigInt::one(), ten.pow((-k) as u32))
        }
    };
    while pow10(e) > *r {
        e -= 1;
    }
    while pow10(e + 1) <= *r {
        e += 1;
    }
    let scaled = r / pow10(e - digits as i64 + 1);
    let mut m = scaled.ceil().to_integer();
    if m >= ten.pow(digits as u32) {
        m /= 10;
        e += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{head}e{e}")
    } else {
        format!("{head}.{tail}e{e}")
    }
}

fn w_integer(factorizer: &Factorizer, q: u64, n: u32) -> Result<BigUint> {
    Ok(factorizer.factor_q_pow_minus_one(q, n)?.num_squarefree_divisors())
}

/// Sufficient condition for a primitive k-normal element when `2k < n`:
/// `q^(n - 2k) >= (W(q^n - 1) W(x^n - 1))^2`.
pub fn noncritical_bound_check(q: PrimePower, n: u32, k: u32, factorizer: &Factorizer) -> Result<bool> {
    if n == 2 * k {
        return Err(Error::CriticalCase { n });
    }
    if 2 * k > n {
        return Err(Error::InvalidInput(format!("need 2k < n (n = {n}, k = {k})")));
    }
    let fq = Fq::new(q)?;
    let wx = num_squarefree_poly_divisors(&fq, &fq.poly_ring().x_pow_minus_one(n as usize));
    let w = w_integer(factorizer, q.q(), n)? * wx;
    Ok(BigUint::from(q.q()).pow(n - 2 * k) >= &w * &w)
}

/// Sufficient condition at `n = 2k` when a property-(A) polynomial exists:
/// `q >= ((n - 1) W(q^n - 1))^2`.
pub fn critical_bound_check(q: PrimePower, n: u32, factorizer: &Factorizer) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2 (got {n})")));
    }
    let w = w_integer(factorizer, q.q(), n)? * (n - 1);
    Ok(BigUint::from(q.q()) >= &w * &w)
}

/// One step of the sieve: the largest `r` primes of `q^6 - 1` are sieved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveDecomposition {
    pub r: usize,
    pub sieve_primes: Vec<u128>,
    #[serde(serialize_with = "ser_rational")]
    pub delta: BigRational,
    /// `(r - 1) / delta + 2`; meaningful only when `usable`.
    #[serde(rename = "Delta", serialize_with = "ser_rational")]
    pub big_delta: BigRational,
    /// `(5 * 2^(u - r) * Delta)^2`.
    #[serde(serialize_with = "ser_rational")]
    pub threshold: BigRational,
    pub usable: bool,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveOutcome {
    pub q: u64,
    pub passed: bool,
    /// All distinct primes of `q^6 - 1`, increasing.
    pub primes: Vec<u128>,
    pub decomposition: Option<SieveDecomposition>,
    /// Every `r` tried, in order, up to and including the first success.
    pub trace: Vec<SieveDecomposition>,
}

/// Tries `r = 0, 1, ..., u` and stops at the first `r` with `delta > 0` and
/// `q >= (5 * 2^(u - r) * Delta)^2`. All arithmetic is exact.
pub fn sieve(q: PrimePower, factorizer: &Factorizer) -> Result<SieveOutcome> {
    let primes: Vec<u128> = factorizer.factor_q_pow_minus_one(q.q(), 6)?.primes().collect();
    let u = primes.len();
    let qr = BigRational::from_integer(BigInt::from(q.q()));
    let mut trace = Vec::new();
    let mut sum = BigRational::zero();
    for r in 0..=u {
        if r > 0 {
            sum += BigRational::new(BigInt::one(), BigInt::from(primes[u - r]));
        }
        let delta = BigRational::one() - &sum;
        let usable = delta.is_positive();
        let (big_delta, threshold) = if usable {
            let bd = BigRational::from_integer(BigInt::from(r as i64 - 1)) / &delta
                + BigRational::from_integer(BigInt::from(2));
            let base = BigRational::from_integer(BigInt::from(5) * (BigInt::one() << (u - r))) * &bd;
            let th = &base * &base;
            (bd, th)
        } else {
            (BigRational::zero(), BigRational::zero())
        };
        let passes = usable && qr >= threshold;
        trace.push(SieveDecomposition {
            r,
            sieve_primes: primes[u - r..].to_vec(),
            delta,
            big_delta,
            threshold,
            usable,
            passes,
        });
        if passes {
            break;
        }
    }
    let decomposition = trace.last().filter(|d| d.passes).cloned();
    Ok(SieveOutcome {
        q: q.q(),
        passed: decomposition.is_some(),
        primes,
        decomposition,
        trace,
    })
}

/// Smallest threshold over all usable `r`, as a float (for reporting).
pub fn min_threshold(outcome: &SieveOutcome) -> Option<f64> {
    outcome
        .trace
        .iter()
        .filter(|d| d.usable)
        .map(|d| d.threshold.to_f64().unwrap_or(f64::INFINITY))
        .reduce(f64::min)
}
