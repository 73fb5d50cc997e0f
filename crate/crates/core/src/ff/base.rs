use std::sync::Arc;

use num_bigint::BigUint;

use super::factor::first_irreducible_over;
use super::{Field, Poly, PolyRing, PrimePower};
use crate::error::{Error, Result};
use crate::num_theory;

const MAX_DIGITS: usize = 32;
const LOG_TABLE_LIMIT: u64 = 1 << 22;

/// The base field `F_q`, `q = p^m`.
///
/// Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
/// encoding are the coefficients (constant term first) of the element in the
/// power basis of `F_p[y]/(h)`, where `h` is the base modulus. For `m = 1` the
/// encoding is the residue itself.
#[derive(Clone, Debug)]
pub struct Fq {
    pp: PrimePower,
    /// Monic degree-`m` modulus over `F_p`, constant term first.
    modulus: Vec<u64>,
    tables: Option<Arc<LogTables>>,
}

#[derive(Debug)]
struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl Fq {
    /// `F_q` with the default modulus: the first irreducible monic polynomial of
    /// degree `m` over `F_p` in scan order.
    pub fn new(pp: PrimePower) -> Result<Self> {
        check_size(pp)?;
        let prime = Fq::prime_field(pp.p());
        let modulus = first_irreducible_over(&prime, pp.m() as usize);
        Self::assemble(pp, modulus.into_coeffs())
    }

    /// `F_q` with an explicit base modulus (coefficients over `F_p`, constant term first).
    pub fn with_modulus(pp: PrimePower, modulus: Vec<u64>) -> Result<Self> {
        check_size(pp)?;
        let prime = Fq::prime_field(pp.p());
        let m = pp.m() as usize;
        if modulus.len() != m + 1 || modulus[m] != 1 || modulus.iter().any(|&c| c >= pp.p()) {
            return Err(Error::InvalidInput(format!(
                "base modulus must be a monic degree-{m} polynomial over F_{}",
                pp.p()
            )));
        }
        if !super::is_irreducible(&prime, &Poly::from_u64s(modulus.clone())) {
            return Err(Error::InvalidInput("base modulus is reducible".into()));
        }
        Self::assemble(pp, modulus)
    }

    fn prime_field(p: u64) -> Fq {
        Fq {
            pp: PrimePower::from_parts(p, 1).expect("p is prime"),
            modulus: vec![p - 1, 1],
            tables: None,
        }
    }

    fn assemble(pp: PrimePower, modulus: Vec<u64>) -> Result<Self> {
        let mut f = Fq {
            pp,
            modulus,
            tables: None,
        };
        if pp.m() > 1 && pp.q() <= LOG_TABLE_LIMIT {
            f.tables = Some(Arc::new(f.build_tables()?));
        }
        Ok(f)
    }

    fn build_tables(&self) -> Result<LogTables> {
        let q = self.q();
        let g = self.find_generator()?;
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for i in 0..(q - 1) as usize {
            exp[i] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_digits(x, g);
        }
        if x != 1 {
            return Err(Error::Internal("log table generator has wrong order".into()));
        }
        let (lo, hi) = exp.split_at_mut(q as usize - 1);
        hi.copy_from_slice(lo);
        Ok(LogTables { log, exp })
    }

    fn find_generator(&self) -> Result<u64> {
        let order = self.q() - 1;
        let f = num_theory::factor(order as u128)?;
        'scan: for g in 2..self.q() {
            for p in f.primes() {
                if self.pow_digits(g, order / p as u64) == 1 {
                    continue 'scan;
                }
            }
            return Ok(g);
        }
        Ok(1)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn p(&self) -> u64 {
        self.pp.p()
    }

    pub fn m(&self) -> u32 {
        self.pp.m()
    }

    pub fn q(&self) -> u64 {
        self.pp.q()
    }

    pub fn is_prime_field(&self) -> bool {
        self.pp.m() == 1
    }

    /// Base modulus over `F_p`, constant term first (`x - 1` when `m = 1`).
    pub fn base_modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Coefficients over `F_p` of an element, length `m`.
    pub fn digits(&self, a: u64) -> Vec<u64> {
        let p = self.p();
        let mut a = a;
        (0..self.m())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<u64> {
        if digits.len() != self.m() as usize || digits.iter().any(|&d| d >= self.p()) {
            return Err(Error::InvalidInput(format!(
                "expected {} digits below {}",
                self.m(),
                self.p()
            )));
        }
        Ok(digits.iter().rev().fold(0, |acc, &d| acc * self.p() + d))
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q()
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: u64, e: &BigUint) -> u64 {
        let mut acc = 1;
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, &a);
            }
        }
        acc
    }

    /// The unique `p`-th root, `a^(p^(m-1))`.
    pub fn pth_root(&self, a: u64) -> u64 {
        (1..self.m()).fold(a, |acc, _| self.pow(acc, self.p()))
    }

    fn unpack(&self, a: u64) -> [u64; MAX_DIGITS] {
        let p = self.p();
        let mut out = [0u64; MAX_DIGITS];
        let mut a = a;
        for d in out.iter_mut().take(self.m() as usize) {
            *d = a % p;
            a /= p;
        }
        out
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d[..self.m() as usize]
            .iter()
            .rev()
            .fold(0, |acc, &x| acc * self.p() + x)
    }

    fn mul_digits(&self, a: u64, b: u64) -> u64 {
        let p = self.p();
        let m = self.m() as usize;
        let (x, y) = (self.unpack(a), self.unpack(b));
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..m {
                prod[i - m + j] = (prod[i - m + j] + c * (p - self.modulus[j])) % p;
            }
        }
        self.pack(&prod)
    }

    fn pow_digits(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_digits(acc, base);
            }
            base = self.mul_digits(base, base);
            e >>= 1;
        }
        acc
    }
}

fn check_size(pp: PrimePower) -> Result<()> {
    if pp.q() >= 1 << 32 {
        return Err(Error::InvalidInput(format!(
            "q = {} is too large (fields are limited to q < 2^32)",
            pp.q()
        )));
    }
    Ok(())
}

impl Field for Fq {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let p = self.p();
        if self.is_prime_field() {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut x, y) = (self.unpack(*a), self.unpack(*b));
        for (xi, yi) in x.iter_mut().zip(y.iter()).take(self.m() as usize) {
            *xi = (*xi + yi) % p;
        }
        self.pack(&x)
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &u64) -> u64 {
        let p = self.p();
        if self.is_prime_field() {
            return if *a == 0 { 0 } else { p - a };
        }
        if p == 2 {
            return *a;
        }
        let mut x = self.unpack(*a);
        for xi in x.iter_mut().take(self.m() as usize) {
            *xi = (p - *xi) % p;
        }
        self.pack(&x)
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.is_prime_field() {
            return a * b % self.p();
        }
        if *a == 0 || *b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize] as u64,
            None => self.mul_digits(*a, *b),
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        if self.is_prime_field() {
            return Some(inv_mod_prime(*a, self.p()));
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[*a as usize] as usize;
                let n = self.q() as usize - 1;
                Some(t.exp[(n - l) % n] as u64)
            }
            None => Some(self.pow_digits(*a, self.q() - 2)),
        }
    }

    fn from_int(&self, n: u64) -> u64 {
        n % self.p()
    }

    fn characteristic(&self) -> u64 {
        self.p()
    }
}

fn inv_mod_prime(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

/// Convenience: the polynomial ring over this base field.
impl Fq {
    pub fn poly_ring(&self) -> PolyRing<'_, Fq> {
        PolyRing::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Fq {
        Fq::new(PrimePower::new(q).unwrap()).unwrap()
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = field(7);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.neg(&2), 5);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn f4_default_modulus() {
        let f = field(4);
        // y^2 + y + 1
        assert_eq!(f.base_modulus(), &[1, 1, 1]);
        // y * y = y + 1
        assert_eq!(f.mul(&2, &2), 3);
        assert_eq!(f.add(&2, &3), 1);
    }

    #[test]
    fn tables_agree_with_digit_multiplication() {
        for q in [4u64, 8, 9, 25, 27, 49, 64, 81, 125] {
            let f = field(q);
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(&a, &b), f.mul_digits(a, b), "q={q} {a}*{b}");
                }
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        for q in [8u64, 9, 27, 25] {
            let f = field(q);
            for a in 0..q {
                assert_eq!(f.pth_root(f.pow(a, f.p())), a);
            }
        }
    }

    #[test]
    fn explicit_base_modulus_is_checked() {
        let pp = PrimePower::new(9).unwrap();
        assert!(Fq::with_modulus(pp, vec![1, 0, 1]).is_ok()); // y^2 + 1
        assert!(Fq::with_modulus(pp, vec![2, 0, 1]).is_err()); // y^2 - 1
        assert!(Fq::with_modulus(pp, vec![1, 0]).is_err());
    }
}
