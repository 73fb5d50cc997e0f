use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::factor::{first_irreducible, is_irreducible};
use super::{Field, Fq, Poly, PolyRing, PrimePower};
use crate::error::{Error, Result};
use crate::num_theory::{FactoredInt, Factorizer};

/// Element of `F_{q^n}`: `n` base-field coefficients in the power basis of the
/// context modulus, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement(Vec<u64>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// The base-field value when the element lies in `F_q`.
    pub fn as_base(&self) -> Option<u64> {
        self.0[1..].iter().all(|&c| c == 0).then_some(self.0[0])
    }
}

/// The extension `F_{q^n} = F_q[x]/(modulus)` with the factorization of `q^n - 1`.
///
/// Immutable once built.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    base: Fq,
    n: usize,
    modulus: Poly<u64>,
    order: FactoredInt,
    group_order: BigUint,
    /// `(x^j)^q` for `j < n`; the Frobenius map is linear over `F_q`.
    frob: Vec<FieldElement>,
}

impl FieldCtx {
    /// `F_{q^n}` with the default base modulus and the first irreducible
    /// degree-`n` modulus in scan order.
    pub fn build(q: PrimePower, n: usize) -> Result<Self> {
        Self::build_with(q, n, &Factorizer::new())
    }

    pub fn build_with(q: PrimePower, n: usize, factorizer: &Factorizer) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        let base = Fq::new(q)?;
        let modulus = first_irreducible(&base, n);
        Self::assemble(base, modulus, factorizer)
    }

    /// `F_{q^n}` over a given base field with an explicit monic irreducible modulus.
    pub fn with_modulus(base: Fq, modulus: Poly<u64>, factorizer: &Factorizer) -> Result<Self> {
        let ring = base.poly_ring();
        if !ring.is_monic(&modulus) || modulus.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput("modulus must be monic of degree >= 1".into()));
        }
        if modulus.coeffs().iter().any(|&c| c >= base.q()) {
            return Err(Error::InvalidInput("modulus coefficient outside F_q".into()));
        }
        if !is_irreducible(&base, &modulus) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        Self::assemble(base, modulus, factorizer)
    }

    fn assemble(base: Fq, modulus: Poly<u64>, factorizer: &Factorizer) -> Result<Self> {
        let n = modulus.degree().unwrap();
        let order = factorizer.factor_q_pow_minus_one(base.q(), n as u32)?;
        let group_order = BigUint::from(base.q()).pow(n as u32) - 1u32;
        let mut ctx = FieldCtx {
            base,
            n,
            modulus,
            order,
            group_order,
            frob: Vec::new(),
        };
        let xq = ctx.pow(&ctx.generator(), &BigUint::from(ctx.base.q()));
        let mut frob = Vec::with_capacity(n);
        let mut acc = ctx.one();
        for _ in 0..n {
            frob.push(acc.clone());
            acc = ctx.mul(&acc, &xq);
        }
        ctx.frob = frob;
        Ok(ctx)
    }

    pub fn base(&self) -> &Fq {
        &self.base
    }

    pub fn prime_power(&self) -> PrimePower {
        self.base.prime_power()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Poly<u64> {
        &self.modulus
    }

    /// Factorization of `q^n - 1`.
    pub fn order_factored(&self) -> &FactoredInt {
        &self.order
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }

    /// `q^n` when it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        (&self.group_order + 1u32).to_u128()
    }

    /// Class of `x`, a root of the modulus.
    pub fn generator(&self) -> FieldElement {
        if self.n == 1 {
            return FieldElement(vec![self.base.neg(&self.modulus.coeffs()[0])]);
        }
        let mut c = vec![0; self.n];
        c[1] = 1;
        FieldElement(c)
    }

    pub fn from_base(&self, c: u64) -> FieldElement {
        let mut v = vec![0; self.n];
        v[0] = c;
        FieldElement(v)
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.n || coeffs.iter().any(|&c| c >= self.q()) {
            return Err(Error::InvalidInput(format!(
                "an element of F_{{q^{}}} needs {} coefficients below {}",
                self.n,
                self.n,
                self.q()
            )));
        }
        Ok(FieldElement(coeffs))
    }

    /// Element with scan index `i = sum c_j q^j` (constant term fastest).
    pub fn element_from_index(&self, mut i: u128) -> FieldElement {
        let q = self.q() as u128;
        FieldElement(
            (0..self.n)
                .map(|_| {
                    let c = (i % q) as u64;
                    i /= q;
                    c
                })
                .collect(),
        )
    }

    pub fn index_of(&self, a: &FieldElement) -> u128 {
        a.0.iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.q() as u128 + c as u128)
    }

    /// `a^q`.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        let mut out = vec![0u64; self.n];
        if self.base.is_prime_field() {
            let p = self.base.p() as u128;
            let mut acc = vec![0u128; self.n];
            for (j, &aj) in a.0.iter().enumerate() {
                if aj == 0 {
                    continue;
                }
                for (k, &fk) in self.frob[j].0.iter().enumerate() {
                    acc[k] += aj as u128 * fk as u128;
                }
            }
            for (o, v) in out.iter_mut().zip(acc) {
                *o = (v % p) as u64;
            }
            return FieldElement(out);
        }
        for (j, aj) in a.0.iter().enumerate() {
            if *aj == 0 {
                continue;
            }
            for (k, fk) in self.frob[j].0.iter().enumerate() {
                out[k] = self.base.add(&out[k], &self.base.mul(aj, fk));
            }
        }
        FieldElement(out)
    }

    /// The conjugates `a, a^q, ..., a^(q^(n-1))`.
    pub fn conjugates(&self, a: &FieldElement) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.n);
        let mut c = a.clone();
        for _ in 0..self.n {
            let next = self.frobenius(&c);
            out.push(c);
            c = next;
        }
        out
    }

    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow(a, &BigUint::from(e))
    }

    /// Multiplicative order, found by dividing `q^n - 1` down along its factorization.
    pub fn element_order(&self, a: &FieldElement) -> Result<BigUint> {
        if self.is_zero(a) {
            return Err(Error::InvalidInput("the zero element has no multiplicative order".into()));
        }
        let mut order = self.group_order.clone();
        for &(l, _) in self.order.factors() {
            let l = BigUint::from(l);
            while (&order % &l).is_zero() {
                let candidate = &order / &l;
                if self.is_one(&self.pow(a, &candidate)) {
                    order = candidate;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    pub fn is_primitive(&self, a: &FieldElement) -> bool {
        if self.is_zero(a) {
            return false;
        }
        self.order
            .primes()
            .all(|l| !self.is_one(&self.pow(a, &(&self.group_order / BigUint::from(l)))))
    }

    /// First element in scan order whose multiplicative order is `q^n - 1`.
    pub fn find_primitive(&self) -> FieldElement {
        // for n >= 2 the constants (indices below q) lie in F_q and cannot generate
        let start = if self.n >= 2 { self.q() as u128 } else { 1 };
        (start..)
            .map(|i| self.element_from_index(i))
            .find(|a| self.is_primitive(a))
            .expect("a primitive element exists")
    }

    pub fn poly_ring(&self) -> PolyRing<'_, FieldCtx> {
        PolyRing::new(self)
    }

    /// Base-field coefficients of a polynomial over `F_{q^n}` whose coefficients
    /// all lie in `F_q`.
    pub fn descend_poly(&self, f: &Poly<FieldElement>) -> Option<Poly<u64>> {
        let coeffs: Option<Vec<u64>> = f.coeffs().iter().map(FieldElement::as_base).collect();
        coeffs.map(Poly::from_u64s)
    }

    pub fn lift_poly(&self, f: &Poly<u64>) -> Poly<FieldElement> {
        self.poly_ring()
            .from_coeffs(f.coeffs().iter().map(|&c| self.from_base(c)).collect())
    }

    fn mul_prime(&self, a: &[u64], b: &[u64]) -> FieldElement {
        let n = self.n;
        let p = self.base.p() as u128;
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x as u128 * y as u128;
            }
        }
        let m = self.modulus.coeffs();
        for i in (n..2 * n - 1).rev() {
            let c = prod[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[i - n + j] += c * (p - m[j] as u128);
            }
        }
        FieldElement(prod[..n].iter().map(|&v| (v % p) as u64).collect())
    }

    fn mul_generic(&self, a: &[u64], b: &[u64]) -> FieldElement {
        let n = self.n;
        let f = &self.base;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        let m = self.modulus.coeffs();
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[i - n + j] = f.sub(&prod[i - n + j], &f.mul(&c, &m[j]));
            }
        }
        prod.truncate(n);
        FieldElement(prod)
    }
}

impl Field for FieldCtx {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.n])
    }

    fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if self.base.is_prime_field() {
            self.mul_prime(&a.0, &b.0)
        } else {
            self.mul_generic(&a.0, &b.0)
        }
    }

    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, &(&self.group_order - BigUint::one())))
    }

    fn from_int(&self, n: u64) -> FieldElement {
        self.from_base(self.base.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.base.p()
    }
}
