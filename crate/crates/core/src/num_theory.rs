//! Integer-side number theory: certified factorization, totients, square-free
//! divisor counts, multiplicative orders and prime enumeration.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Miller-Rabin with the first thirteen prime bases is deterministic below this value.
pub const MR_CERTIFIED_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const TRIAL_BOUND: u32 = 1000;

/// A positive integer together with its prime factorization.
///
/// Primes are strictly increasing and each one was certified by a deterministic
/// primality test at construction time.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    value: BigUint,
    factors: Vec<(u128, u32)>,
}

impl FactoredInt {
    pub fn one() -> Self {
        FactoredInt {
            value: BigUint::one(),
            factors: Vec::new(),
        }
    }

    /// Builds a factorization from (prime, exponent) pairs, merging repeats and
    /// certifying every prime.
    pub fn from_factors<I: IntoIterator<Item = (u128, u32)>>(factors: I) -> Result<Self> {
        let merged = merge_factors(factors);
        for &(p, _) in &merged {
            if !is_prime(p)? {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
        }
        Ok(Self::from_sorted_unchecked(merged))
    }

    fn from_sorted_unchecked(factors: Vec<(u128, u32)>) -> Self {
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e));
        FactoredInt { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `W(n) = 2^omega(n)`, the number of square-free divisors.
    pub fn num_squarefree_divisors(&self) -> BigUint {
        BigUint::one() << self.factors.len()
    }

    pub fn euler_phi(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &(p, e)| {
            acc * BigUint::from(p).pow(e - 1) * BigUint::from(p - 1)
        })
    }

    pub fn radical(&self) -> BigUint {
        self.primes().fold(BigUint::one(), |acc, p| acc * BigUint::from(p))
    }

    /// Factorization of the product `self * other`.
    pub fn product(&self, other: &FactoredInt) -> FactoredInt {
        let merged = merge_factors(self.factors.iter().chain(other.factors.iter()).copied());
        Self::from_sorted_unchecked(merged)
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}=", self.value)?;
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

fn merge_factors<I: IntoIterator<Item = (u128, u32)>>(factors: I) -> Vec<(u128, u32)> {
    let mut v: Vec<(u128, u32)> = factors.into_iter().filter(|&(_, e)| e > 0).collect();
    v.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::with_capacity(v.len());
    for (p, e) in v {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => out.push((p, e)),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Modular arithmetic on u128

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b, mut r) = (a % m, b, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    r
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Strong probable-prime test to base `a`. `n` must be odd and > `a`.
fn strong_probable_prime(n: u128, a: u128) -> bool {
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn mr_all_bases(n: u128) -> bool {
    MR_BASES.iter().all(|&a| strong_probable_prime(n, a))
}

/// Deterministic primality test; errors when `n` is a probable prime above
/// [`MR_CERTIFIED_LIMIT`] and so cannot be certified.
pub fn is_prime(n: u128) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    for &p in &MR_BASES {
        if n == p {
            return Ok(true);
        }
        if n % p == 0 {
            return Ok(false);
        }
    }
    let probable = mr_all_bases(n);
    if probable && n >= MR_CERTIFIED_LIMIT {
        return Err(Error::Factorization(n.to_string()));
    }
    Ok(probable)
}

/// Brent's variant of Pollard rho with polynomial `x^2 + c` and seed 2.
fn rho_brent(n: u128, c: u128) -> Option<u128> {
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
    let mut g = 1u128;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_cofactor(n: u128, out: &mut Vec<(u128, u32)>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if n < MR_CERTIFIED_LIMIT {
        if is_prime(n)? {
            out.push((n, 1));
            return Ok(());
        }
    } else if mr_all_bases(n) {
        return Err(Error::Factorization(n.to_string()));
    }
    if let Some(r) = integer_sqrt_exact(n) {
        split_cofactor(r, out)?;
        return split_cofactor(r, out);
    }
    for c in 1..64 {
        if let Some(d) = rho_brent(n, c) {
            split_cofactor(d, out)?;
            return split_cofactor(n / d, out);
        }
    }
    Err(Error::Factorization(n.to_string()))
}

fn integer_sqrt_exact(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Factors a positive integer: trial division by the primes below 1000, then
/// Pollard rho on the remaining cofactor with a fixed polynomial schedule.
pub fn factor(n: u128) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut out = Vec::new();
    for p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    split_cofactor(rest, &mut out)?;
    Ok(FactoredInt::from_sorted_unchecked(merge_factors(out)))
}

fn small_primes() -> impl Iterator<Item = u32> {
    static PRIMES: std::sync::OnceLock<Vec<u32>> = std::sync::OnceLock::new();
    PRIMES
        .get_or_init(|| {
            primes_up_to(TRIAL_BOUND as u64)
                .into_iter()
                .map(|p| p as u32)
                .collect()
        })
        .iter()
        .copied()
}

/// Smallest `e >= 1` with `a^e = 1 (mod modulus)`, found by dividing down the
/// factored totient of the modulus.
pub fn mult_order(a: &BigUint, modulus: &FactoredInt) -> Result<BigUint> {
    let m = modulus.value();
    if *m < BigUint::from(2u32) {
        return Err(Error::InvalidInput("modulus must be at least 2".into()));
    }
    if !a.gcd(m).is_one() {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            modulus: m.to_string(),
        });
    }
    let mut phi = FactoredInt::one();
    for &(p, e) in modulus.factors() {
        if e > 1 {
            phi = phi.product(&FactoredInt::from_sorted_unchecked(vec![(p, e - 1)]));
        }
        phi = phi.product(&factor(p - 1)?);
    }
    let mut order = phi.value().clone();
    for &(l, _) in phi.factors() {
        let l = BigUint::from(l);
        while (&order % &l).is_zero() {
            let candidate = &order / &l;
            if a.modpow(&candidate, m).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Coefficients (low degree first) of the integer cyclotomic polynomial `Phi_d`.
pub fn cyclotomic_coeffs(d: u32) -> Vec<i64> {
    assert!(d >= 1);
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d % e == 0 {
            num = div_monic_int(&num, &cyclotomic_coeffs(e));
        }
    }
    num
}

fn div_monic_int(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Factorizer with an optional read-only cache of known factorizations.
#[derive(Clone, Debug, Default)]
pub struct Factorizer {
    cache: Option<Arc<FactorCache>>,
}

impl Factorizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: FactorCache) -> Self {
        Factorizer {
            cache: Some(Arc::new(cache)),
        }
    }

    pub fn factor(&self, n: u128) -> Result<FactoredInt> {
        if let Some(hit) = self.lookup(&BigUint::from(n)) {
            return Ok(hit);
        }
        factor(n)
    }

    fn lookup(&self, n: &BigUint) -> Option<FactoredInt> {
        self.cache.as_ref().and_then(|c| c.get(n).cloned())
    }

    /// Factors `q^n - 1` through its split into cyclotomic values
    /// `prod_{d | n} Phi_d(q)`; for `n = 6` that is `(q-1)(q+1)(q^2+q+1)(q^2-q+1)`.
    pub fn factor_q_pow_minus_one(&self, q: u64, n: u32) -> Result<FactoredInt> {
        if q < 2 || n == 0 {
            return Err(Error::InvalidInput(format!("q^n - 1 with q = {q}, n = {n}")));
        }
        let full = BigUint::from(q).pow(n) - 1u32;
        if let Some(hit) = self.lookup(&full) {
            return Ok(hit);
        }
        let mut acc = FactoredInt::one();
        for d in (1..=n).filter(|d| n % d == 0) {
            let value = eval_int_poly(&cyclotomic_coeffs(d), q);
            let value = value
                .to_u128()
                .ok_or_else(|| Error::Factorization(value.to_string()))?;
            acc = acc.product(&self.factor(value)?);
        }
        debug_assert_eq!(acc.value(), &full);
        Ok(acc)
    }
}

fn eval_int_poly(coeffs: &[i64], x: u64) -> BigUint {
    let x = BigInt::from(x);
    let v = coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c));
    v.to_biguint().expect("cyclotomic values at q >= 2 are positive")
}

/// Read-only factorization cache, one entry per line: `value=p1^e1*p2^e2*...`.
///
/// Blank lines and lines starting with `#` are skipped. Every entry is checked on
/// load: the product must equal the value and every prime must be certified.
#[derive(Clone, Debug, Default)]
pub struct FactorCache {
    entries: HashMap<BigUint, FactoredInt>,
}

impl FactorCache {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |why: &str| Error::Parse(format!("cache line {}: {why}", lineno + 1));
            let (value, rhs) = line.split_once('=').ok_or_else(|| bad("missing '='"))?;
            let value: BigUint = value.trim().parse().map_err(|_| bad("bad value"))?;
            let mut factors = Vec::new();
            for term in rhs.split('*').map(str::trim).filter(|t| !t.is_empty()) {
                let (p, e) = match term.split_once('^') {
                    Some((p, e)) => (p, e),
                    None => (term, "1"),
                };
                let p: u128 = p.trim().parse().map_err(|_| bad("bad prime"))?;
                let e: u32 = e.trim().parse().map_err(|_| bad("bad exponent"))?;
                factors.push((p, e));
            }
            let f = FactoredInt::from_factors(factors)?;
            if f.value() != &value {
                return Err(bad("factor product does not match value"));
            }
            entries.insert(value, f);
        }
        Ok(FactorCache { entries })
    }

    pub fn get(&self, n: &BigUint) -> Option<&FactoredInt> {
        self.entries.get(n)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Prime enumeration

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 64u64;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

/// A real endpoint that can be compared exactly with integers: either a rational
/// number or a rational power of two.
#[derive(Clone, Debug, PartialEq)]
pub enum RealBound {
    Rational(BigRational),
    PowerOfTwo(BigRational),
}

impl RealBound {
    pub fn integer(n: u64) -> Self {
        RealBound::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn pow2(exponent: BigRational) -> Self {
        RealBound::PowerOfTwo(exponent)
    }

    /// Exact comparison of the bound against a non-negative integer.
    pub fn cmp_integer(&self, n: &BigUint) -> Ordering {
        match self {
            RealBound::Rational(r) => r.cmp(&BigRational::from_integer(BigInt::from(n.clone()))),
            RealBound::PowerOfTwo(e) => {
                if n.is_zero() {
                    return Ordering::Greater;
                }
                // 2^(a/b) vs n  <=>  2^a vs n^b
                let a = e.numer();
                let b = e.denom().to_u32().expect("exponent denominator fits u32");
                let nb = n.pow(b);
                let shift = a.abs().to_u64().expect("exponent numerator fits u64");
                if a.is_negative() {
                    BigUint::one().cmp(&(nb << shift))
                } else {
                    (BigUint::one() << shift).cmp(&nb)
                }
            }
        }
    }

    /// Largest integer not exceeding the bound (the bound must be non-negative).
    pub fn floor(&self) -> BigUint {
        match self {
            RealBound::Rational(r) => r.floor().to_integer().to_biguint().unwrap_or_default(),
            RealBound::PowerOfTwo(e) => {
                let approx = 2f64.powf(e.numer().to_f64().unwrap() / e.denom().to_f64().unwrap());
                let mut f = BigUint::from(approx.floor().max(0.0) as u128);
                while self.cmp_integer(&(&f + 1u32)) != Ordering::Less {
                    f += 1u32;
                }
                while !f.is_zero() && self.cmp_integer(&f) == Ordering::Less {
                    f -= 1u32;
                }
                f
            }
        }
    }
}

/// All primes `p` with `lo < p <= hi`, in increasing order.
pub fn primes_in_range(lo: &RealBound, hi: &RealBound) -> Vec<u64> {
    let top = hi.floor();
    let Some(top) = top.to_u64() else {
        panic!("prime range upper bound too large to sieve");
    };
    primes_up_to(top)
        .into_iter()
        .filter(|&p| lo.cmp_integer(&BigUint::from(p)) == Ordering::Less)
        .collect()
}

/// Parses a decimal literal such as `6.48`, `-3`, or `1.58e11` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let digits = digits / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * ten.pow(scale as u32))
    } else {
        BigRational::new(digits, ten.pow((-scale) as u32))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}
