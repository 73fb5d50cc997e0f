use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::interval::Interval;
use super::{ser_rational, sci_upper};
use crate::error::{Error, Result};
use crate::num_theory::{first_primes, primes_in_range, RealBound};

pub const DEFAULT_PRECISION: u32 = 256;

/// `(omega_max, N)` for one bound `M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refinement {
    /// Largest `u` whose primorial is at most `M^6 - 1`.
    pub omega_max: usize,
    /// `max_{1 <= u <= omega_max} min_r (5 * 2^(u - r) * Delta_{u,r})^2`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub n: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStep {
    /// Upper bound on `M`, rounded up to 6 significant digits.
    pub m: String,
    pub omega_max: usize,
    pub n: String,
    #[serde(skip)]
    pub m_exact: BigRational,
    #[serde(skip)]
    pub n_exact: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundChainReport {
    #[serde(serialize_with = "ser_rational")]
    pub t: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub u: BigRational,
    pub precision: u32,
    pub r_count: usize,
    /// Enclosure of `S_{t,u}` as `[lower, upper]` floats; the exact bounds are kept below.
    pub s: [f64; 2],
    pub a_upper: String,
    pub delta_upper: String,
    pub m_upper: String,
    pub chain: Vec<ChainStep>,
    #[serde(skip)]
    pub s_lower_exact: BigRational,
    #[serde(skip)]
    pub s_upper_exact: BigRational,
    #[serde(skip)]
    pub m_exact: BigRational,
}

impl BoundChainReport {
    /// The last bound that the chain proved.
    pub fn final_bound(&self) -> &BigRational {
        self.chain
            .iter()
            .map(|s| &s.n_exact)
            .chain(std::iter::once(&self.m_exact))
            .min()
            .expect("non-empty")
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `M = (5 * A_{t,u} * Delta_{t,u})^(2(t+u) / (t+u-12))`, rounded upwards.
///
/// `r(t,u)` and `S_{t,u}` run over the primes in `(2^t, 2^(t+u)]`, `A_{t,u}` over the
/// primes below `2^t`.
pub fn initial_bound(t: &BigRational, u: &BigRational, prec: u32) -> Result<BoundChainReport> {
    let s = t + u;
    if s <= rat(12) {
        return Err(Error::InvalidInput(format!("need t + u > 12 (t + u = {s})")));
    }
    if !t.is_positive() || !u.is_positive() {
        return Err(Error::InvalidInput("t and u must be positive".into()));
    }
    let lo = RealBound::pow2(t.clone());
    let hi = RealBound::pow2(s.clone());
    let mid = primes_in_range(&lo, &hi);
    let small: Vec<u64> = primes_in_range(&RealBound::integer(1), &lo)
        .into_iter()
        .filter(|&p| lo.cmp_integer(&BigUint::from(p)) == Ordering::Greater)
        .collect();

    let one = BigInt::one() << prec as usize;
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    for &p in &mid {
        let p = BigInt::from(p);
        s_lo += &one / &p;
        s_hi += (&one + &p - 1u32) / &p;
    }
    let s_iv = Interval::raw(s_lo, s_hi, prec);
    if !s_iv.upper_lt(&BigRational::one()) {
        return Err(Error::InvalidInput(format!(
            "S_(t,u) is not certified below 1 (upper bound {:.6})",
            s_iv.upper().to_f64().unwrap_or(f64::NAN)
        )));
    }

    let iv = |r: &BigRational| Interval::from_rational(r, prec);
    let r_count = mid.len() as i64;
    let delta = iv(&rat(r_count - 1))
        .div(&Interval::from_int(1, prec).sub(&s_iv))?
        .add(&Interval::from_int(2, prec));

    let ln2 = Interval::ln2(prec);
    let prod: BigInt = small.iter().map(|&p| BigInt::from(p)).product();
    let ln_prod = iv(&BigRational::from_integer(prod)).ln()?;
    let ln_a = ln2
        .mul_int(small.len() as i64)
        .sub(&ln_prod.mul(&iv(&(BigRational::one() / &s))));
    let log_base = iv(&rat(5)).ln()?.add(&ln_a).add(&delta.ln()?);
    let exponent = iv(&(&s * rat(2) / (&s - rat(12))));
    let m = log_base.mul(&exponent).exp();

    let m_exact = m.upper();
    Ok(BoundChainReport {
        t: t.clone(),
        u: u.clone(),
        precision: prec,
        r_count: mid.len(),
        s: [
            s_iv.lower().to_f64().unwrap_or(f64::NAN),
            s_iv.upper().to_f64().unwrap_or(f64::NAN),
        ],
        a_upper: sci_upper(&ln_a.exp().upper(), 6),
        delta_upper: sci_upper(&delta.upper(), 6),
        m_upper: sci_upper(&m_exact, 6),
        chain: Vec::new(),
        s_lower_exact: s_iv.lower(),
        s_upper_exact: s_iv.upper(),
        m_exact,
    })
}

/// `min_r (2^(u - r) * Delta_{u,r})` over the `r` with `S_{u,r} < 1`; the
/// sieving primes are the `r` primes ending at the `u`-th prime.
fn inner_min(primes: &[u64], u: usize) -> BigRational {
    let two = rat(2);
    let mut best = BigRational::from_integer(BigInt::one() << u);
    let mut sum = BigRational::zero();
    for r in 1..=u {
        sum += BigRational::new(BigInt::one(), BigInt::from(primes[u - r]));
        if sum >= BigRational::one() {
            break;
        }
        let delta = rat(r as i64 - 1) / (BigRational::one() - &sum) + &two;
        let v = BigRational::from_integer(BigInt::one() << (u - r)) * delta;
        if v < best {
            best = v;
        }
    }
    best
}

pub fn refine_bound(m: &BigRational) -> Result<Refinement> {
    if *m <= BigRational::one() {
        return Err(Error::InvalidInput(format!("need M > 1 (got {m})")));
    }
    let limit = m.pow(6) - BigRational::one();
    let mut count = 64;
    let omega_max = loop {
        let primes = first_primes(count);
        let mut prod = BigUint::one();
        let mut omega = 0;
        for &p in &primes {
            let next = &prod * p;
            if BigRational::from_integer(BigInt::from(next.clone())) > limit {
                break;
            }
            prod = next;
            omega += 1;
        }
        if omega < count {
            break omega;
        }
        count *= 2;
    };
    let primes = first_primes(omega_max.max(1));
    let best = (1..=omega_max)
        .into_par_iter()
        .map(|u| inner_min(&primes, u))
        .max()
        .unwrap_or_else(BigRational::zero);
    Ok(Refinement { omega_max, n: &best * &best * rat(25) })
}

/// Refines from `m0` until `N` stops decreasing.
pub fn bound_chain_with(mut report: BoundChainReport) -> Result<BoundChainReport> {
    let mut m = report.m_exact.clone();
    loop {
        let step = refine_bound(&m)?;
        let improved = step.n < m;
        report.chain.push(ChainStep {
            m: sci_upper(&m, 6),
            omega_max: step.omega_max,
            n: sci_upper(&step.n, 6),
            m_exact: m.clone(),
            n_exact: step.n.clone(),
        });
        if !improved {
            break;
        }
        m = step.n;
    }
    Ok(report)
}

pub fn bound_chain(t: &BigRational, u: &BigRational, prec: u32) -> Result<BoundChainReport> {
    bound_chain_with(initial_bound(t, u, prec)?)
}
