//! Finite fields: the base field `F_q` (prime or a tower over `F_p`), the
//! extension `F_{q^n}`, and dense polynomials over either.

mod base;
mod ext;
mod factor;
mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num_theory;

pub use base::Fq;
pub use ext::{FieldCtx, FieldElement};
pub use factor::{
    enumerate_monic_divisors, first_irreducible, is_irreducible, num_squarefree_poly_divisors,
    poly_factor, scan_cmp,
};
pub use poly::{Poly, PolyRing};
pub(crate) use factor::seed_of;

/// Arithmetic of a finite field whose elements are plain values.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of the integer `n` in the prime subfield.
    fn from_int(&self, n: u64) -> Self::Elem;
    fn characteristic(&self) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A prime power `q = p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    m: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let f = num_theory::factor(q as u128)?;
        match f.factors() {
            [(p, m)] => Ok(PrimePower { p: *p as u64, m: *m, q }),
            _ => Err(Error::NotPrimePower(q)),
        }
    }

    pub fn from_parts(p: u64, m: u32) -> Result<Self> {
        if m == 0 || !num_theory::is_prime(p as u128)? {
            return Err(Error::InvalidInput(format!("{p}^{m} is not a prime power")));
        }
        let q = p
            .checked_pow(m)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{m} overflows u64")))?;
        Ok(PrimePower { p, m, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Whether `F_{q^6}` has primitive 3-normal elements: `q` odd, or a power of 2
    /// with an even exponent.
    pub fn admissible_n6(&self) -> bool {
        self.p != 2 || self.m % 2 == 0
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Every prime power in `[lo, hi]`, ascending.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<PrimePower> {
    if lo > hi || hi < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for p in num_theory::primes_up_to(hi) {
        let mut q = p;
        let mut m = 1;
        loop {
            if q >= lo {
                out.push(PrimePower { p, m, q });
            }
            match q.checked_mul(p) {
                Some(next) if next <= hi => {
                    q = next;
                    m += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable_by_key(|pp| pp.q);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        let q = PrimePower::new(9).unwrap();
        assert_eq!((q.p(), q.m()), (3, 2));
        assert!(PrimePower::new(6).is_err());
        assert!(PrimePower::new(1).is_err());
        assert!(PrimePower::new(8).unwrap().m() == 3);
        assert!(!PrimePower::new(8).unwrap().admissible_n6());
        assert!(PrimePower::new(4).unwrap().admissible_n6());
        assert!(PrimePower::new(9).unwrap().admissible_n6());
    }

    #[test]
    fn prime_powers_listing() {
        let qs: Vec<u64> = prime_powers_in(2, 10).iter().map(|p| p.q()).collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 7, 8, 9]);
        assert!(prime_powers_in(10, 2).is_empty());
        assert_eq!(prime_powers_in(1, 2).len(), 1);
    }
}
