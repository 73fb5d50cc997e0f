//! Fixed-point interval arithmetic with outward rounding.
//!
//! A value is a pair of integers `lo, hi` read as `lo / 2^P <= x <= hi / 2^P`.
//! Every operation rounds `lo` down and `hi` up, so the enclosure is always valid.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn one_at(prec: u32) -> BigInt {
    BigInt::one() << prec as usize
}

impl Interval {
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r.numer() << prec as usize;
        Interval {
            lo: floor_div(&scaled, r.denom()),
            hi: ceil_div(&scaled, r.denom()),
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        let v = BigInt::from(n) << prec as usize;
        Interval { lo: v.clone(), hi: v, prec }
    }

    /// `[lo, hi] / 2^P` from integer numerators already at this precision.
    pub(crate) fn raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), one_at(self.prec))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), one_at(self.prec))
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    /// Midpoint as a float, for display.
    pub fn approx(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, one_at(self.prec + 1));
        mid.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn upper_lt(&self, r: &BigRational) -> bool {
        self.upper() < *r
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::raw(&self.lo + &o.lo, &self.hi + &o.hi, self.prec)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::raw(&self.lo - &o.hi, &self.hi - &o.lo, self.prec)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let prods = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        let den = one_at(self.prec);
        Interval::raw(floor_div(min, &den), ceil_div(max, &den), self.prec)
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if !o.lo.is_positive() {
            return Err(Error::InvalidInput("interval division by a non-positive interval".into()));
        }
        let p = self.prec as usize;
        let quots_lo = [floor_div(&(&self.lo << p), &o.lo), floor_div(&(&self.lo << p), &o.hi)];
        let quots_hi = [ceil_div(&(&self.hi << p), &o.lo), ceil_div(&(&self.hi << p), &o.hi)];
        let lo = quots_lo.into_iter().min().unwrap();
        let hi = quots_hi.into_iter().max().unwrap();
        Ok(Interval::raw(lo, hi, self.prec))
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        let k = BigInt::from(k);
        let (a, b) = (&self.lo * &k, &self.hi * &k);
        if k.is_negative() {
            Interval::raw(b, a, self.prec)
        } else {
            Interval::raw(a, b, self.prec)
        }
    }

    /// `ln 2 = 2 atanh(1/3)`.
    pub fn ln2(prec: u32) -> Interval {
        let (lo, hi) = atanh_bounds(&BigInt::one(), &BigInt::from(3), prec);
        Interval::raw(lo * 2, hi * 2, prec)
    }

    pub fn ln(&self) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidInput("logarithm of a non-positive interval".into()));
        }
        let ln2 = Interval::ln2(self.prec);
        let lo = ln_point(&self.lo, self.prec, &ln2).lo;
        let hi = ln_point(&self.hi, self.prec, &ln2).hi;
        Ok(Interval::raw(lo, hi, self.prec))
    }

    pub fn exp(&self) -> Interval {
        let lo = exp_point(&self.lo, self.prec).0;
        let hi = exp_point(&self.hi, self.prec).1;
        Interval::raw(lo, hi, self.prec)
    }
}

/// Bounds on `atanh(z) * 2^P` for `z = num / den` in `[0, 1/3]`.
fn atanh_bounds(num: &BigInt, den: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let p = prec as usize;
    let one = one_at(prec);
    let zl = floor_div(&(num << p), den);
    let zh = ceil_div(&(num << p), den);
    let z2l = floor_div(&(&zl * &zl), &one);
    let z2h = ceil_div(&(&zh * &zh), &one);

    let mut lo = BigInt::zero();
    let mut pow = zl;
    let mut j = 0u64;
    while pow.is_positive() {
        lo += floor_div(&pow, &BigInt::from(2 * j + 1));
        pow = floor_div(&(&pow * &z2l), &one);
        j += 1;
    }

    let mut hi = BigInt::zero();
    let mut pow = zh;
    let mut j = 0u64;
    while pow > BigInt::one() {
        hi += ceil_div(&pow, &BigInt::from(2 * j + 1));
        pow = ceil_div(&(&pow * &z2h), &one);
        j += 1;
    }
    // tail: sum_{i >= j} z^(2i+1)/(2i+1) <= z^(2j+1) / ((2j+1)(1 - z^2)), z^2 <= 1/9
    hi += ceil_div(&(pow * 9), &BigInt::from(8 * (2 * j + 1))) + 1;
    (lo, hi)
}

/// Enclosure of `ln(v / 2^P)` for a positive integer `v`.
fn ln_point(v: &BigInt, prec: u32, ln2: &Interval) -> Interval {
    // v / 2^P = 2^k * y with y in [1, 2)
    let bits = v.bits() as i64;
    let k = bits - 1 - prec as i64;
    let base = BigInt::one() << (bits - 1) as usize;
    let (lo, hi) = atanh_bounds(&(v - &base), &(v + &base), prec);
    let atanh2 = Interval::raw(lo * 2, hi * 2, prec);
    ln2.mul_int(k).add(&atanh2)
}

/// Bounds on `exp(v / 2^P) * 2^P`.
fn exp_point(v: &BigInt, prec: u32) -> (BigInt, BigInt) {
    let one = one_at(prec);
    if v.sign() == Sign::Minus {
        let (lo, hi) = exp_point(&-v, prec);
        let sq = &one * &one;
        return (floor_div(&sq, &hi), ceil_div(&sq, &lo));
    }
    // exp(x) = exp(x / 2^j)^(2^j) with x / 2^j <= 1
    let j = (v.bits() as i64 - prec as i64).max(0) as usize;
    let yl = floor_div(v, &(BigInt::one() << j));
    let yh = ceil_div(v, &(BigInt::one() << j));

    let mut lo = BigInt::zero();
    let mut term = one.clone();
    let mut i = 1u64;
    while term.is_positive() {
        lo += &term;
        term = floor_div(&(&term * &yl), &(&one * i));
        i += 1;
    }

    let mut hi = BigInt::zero();
    let mut term = one.clone();
    let mut i = 1u64;
    while term > BigInt::one() {
        hi += &term;
        term = ceil_div(&(&term * &yh), &(&one * i));
        i += 1;
    }
    // remaining terms shrink by at least half once i >= 2 and y <= 1
    hi += term * 2 + 1;

    for _ in 0..j {
        lo = floor_div(&(&lo * &lo), &one);
        hi = ceil_div(&(&hi * &hi), &one);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn contains(iv: &Interval, x: f64) -> bool {
        let eps = 1e-12 * x.abs().max(1.0);
        iv.lower().to_f64().unwrap() <= x + eps && x - eps <= iv.upper().to_f64().unwrap()
    }

    #[test]
    fn constants_are_enclosed_tightly() {
        let ln2 = Interval::ln2(256);
        assert!(contains(&ln2, std::f64::consts::LN_2));
        assert!(ln2.width() < rat(1, 1 << 40) * rat(1, 1 << 20) * rat(1, 1 << 20));
        let e = Interval::from_int(1, 256).exp();
        assert!(contains(&e, std::f64::consts::E));
    }

    #[test]
    fn ln_and_exp_are_inverse() {
        for (n, d) in [(5i64, 1i64), (3, 7), (1771, 100), (123456789, 1000)] {
            let x = Interval::from_rational(&rat(n, d), 200);
            let back = x.ln().unwrap().exp();
            assert!(back.lower() <= x.lower() && x.upper() <= back.upper());
            assert!(contains(&x.ln().unwrap(), (n as f64 / d as f64).ln()));
        }
        let big = Interval::from_int(170, 256).exp();
        assert!(contains(&big, 170f64.exp()));
        let small = Interval::from_int(-3, 256).exp();
        assert!(contains(&small, (-3f64).exp()));
    }

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::from_rational(&rat(1, 3), 64);
        let b = Interval::from_rational(&rat(-2, 7), 64);
        let p = a.mul(&b);
        assert!(p.lower() <= rat(-2, 21) && rat(-2, 21) <= p.upper());
        let q = a.div(&Interval::from_rational(&rat(5, 11), 64)).unwrap();
        assert!(q.lower() <= rat(11, 15) && rat(11, 15) <= q.upper());
        assert!(a.div(&b).is_err());
        assert!(b.ln().is_err());
    }
}
