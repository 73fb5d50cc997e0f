//! Degree-k divisors `g` of `x^n - 1` (`n = 2k`) with `g != x^k - 1` and
//! `(x - 1) | g`. Such a `g` is what makes the translate construction work; when
//! none exists, every k-normal element lies in a proper subgroup and none is primitive.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{enumerate_monic_divisors, poly_factor, Field, FieldCtx, FieldElement, Fq, Poly, PrimePower};
use crate::num_theory::{factor, mult_order};

/// Whether `g` is a monic degree-`k` divisor of `x^(2k) - 1`, different from
/// `x^k - 1` and divisible by `x - 1`.
pub fn satisfies_property_a(fq: &Fq, g: &Poly<u64>, k: usize) -> bool {
    let ring = fq.poly_ring();
    g.degree() == Some(k)
        && ring.is_monic(g)
        && ring.divides(g, &ring.x_pow_minus_one(2 * k))
        && *g != ring.x_pow_minus_one(k)
        && ring.divides(&ring.from_coeffs(vec![fq.neg(&1), 1]), g)
}

/// All polynomials with the property, in scan order.
pub fn property_a_witnesses(fq: &Fq, k: usize) -> Vec<Poly<u64>> {
    let xn1 = fq.poly_ring().x_pow_minus_one(2 * k);
    let factors = poly_factor(fq, &xn1);
    enumerate_monic_divisors(fq, &factors, k)
        .into_iter()
        .filter(|g| satisfies_property_a(fq, g, k))
        .collect()
}

/// First witness in scan order, found by enumerating the degree-k divisors.
pub fn property_a_exhaustive(q: PrimePower, k: usize) -> Result<Option<Poly<u64>>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let fq = Fq::new(q)?;
    Ok(property_a_witnesses(&fq, k).into_iter().next())
}

/// Which case of the closed-form classification decided the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `q = 2^m`, `t` prime, `ord_t(q) = t - 1`, `t <= 2^s + 1`.
    EvenA,
    /// `q = 2^m`, `t` prime, `ord_t(q) < t - 1`.
    EvenB,
    /// `q = 2^m`, `t` has two distinct prime factors.
    EvenC,
    /// `q = 2^m`, `t = r^l`, `ord_t(q) < phi(t)`.
    EvenD,
    /// `q = 2^m`, `t = r^l`, `ord_t(q) = phi(t)`, `r <= 2^s + 1`.
    EvenE,
    EvenNone,
    /// odd `q`, `t > 1`.
    #[serde(rename = "odd-i")]
    OddI,
    /// odd `q = p^m`, `t = 1`, `m` even.
    #[serde(rename = "odd-ii")]
    OddII,
    /// odd `q = p^m`, `t = 1`, `m` odd, `ord_{2^(s+1)}(p) < 2^s`.
    #[serde(rename = "odd-iii")]
    OddIII,
    OddNone,
    /// `k = 1`: decided by enumeration.
    Exhaustive,
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::EvenA => "even-a",
            Rule::EvenB => "even-b",
            Rule::EvenC => "even-c",
            Rule::EvenD => "even-d",
            Rule::EvenE => "even-e",
            Rule::EvenNone => "even-none",
            Rule::OddI => "odd-i",
            Rule::OddII => "odd-ii",
            Rule::OddIII => "odd-iii",
            Rule::OddNone => "odd-none",
            Rule::Exhaustive => "exhaustive",
        }
    }

    pub fn exists(&self) -> bool {
        !matches!(self, Rule::EvenNone | Rule::OddNone)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyAClassification {
    pub q: u64,
    pub k: usize,
    pub exists: bool,
    pub rule: Rule,
    /// `k = 2^s t` with `t` odd.
    pub s: u32,
    pub t: u64,
    /// `ord_t(q)` in characteristic 2 (when `t > 1`), `ord_{2^(s+1)}(p)` in odd
    /// characteristic (when `t = 1`).
    pub order: Option<u64>,
}

fn order_of(a: u64, modulus: u64) -> Result<u64> {
    let o = mult_order(&BigUint::from(a % modulus), &factor(modulus as u128)?)?;
    Ok(o.try_into().expect("order below modulus"))
}

/// Closed-form decision for `k >= 2`.
pub fn property_a_classify(q: PrimePower, k: usize) -> Result<PropertyAClassification> {
    if k < 2 {
        return Err(Error::InvalidInput(format!(
            "the closed-form classification needs k >= 2 (got k = {k})"
        )));
    }
    let s = k.trailing_zeros();
    let t = (k >> s) as u64;
    let two_s = 1u64 << s;
    let (rule, order) = if q.p() == 2 {
        if t == 1 {
            (Rule::EvenNone, None)
        } else {
            let d = order_of(q.q(), t)?;
            let tf = factor(t as u128)?;
            let rule = match tf.factors() {
                [(r, 1)] => {
                    let r = *r as u64;
                    if d == r - 1 {
                        if r <= two_s + 1 {
                            Rule::EvenA
                        } else {
                            Rule::EvenNone
                        }
                    } else {
                        Rule::EvenB
                    }
                }
                [(r, l)] => {
                    let r = *r as u64;
                    let phi = r.pow(*l) - r.pow(*l - 1);
                    if d < phi {
                        Rule::EvenD
                    } else if r <= two_s + 1 {
                        Rule::EvenE
                    } else {
                        Rule::EvenNone
                    }
                }
                _ => Rule::EvenC,
            };
            (rule, Some(d))
        }
    } else if t > 1 {
        (Rule::OddI, None)
    } else if q.m() % 2 == 0 {
        (Rule::OddII, None)
    } else {
        let o = order_of(q.p(), 2 * two_s)?;
        (if o < two_s { Rule::OddIII } else { Rule::OddNone }, Some(o))
    };
    Ok(PropertyAClassification {
        q: q.q(),
        k,
        exists: rule.exists(),
        rule,
        s,
        t,
        order,
    })
}

/// [`property_a_classify`], falling back to enumeration for `k = 1`.
pub fn classify_or_enumerate(q: PrimePower, k: usize) -> Result<PropertyAClassification> {
    if k == 1 {
        return Ok(PropertyAClassification {
            q: q.q(),
            k,
            exists: property_a_exhaustive(q, 1)?.is_some(),
            rule: Rule::Exhaustive,
            s: 0,
            t: 1,
            order: None,
        });
    }
    property_a_classify(q, k)
}

/// The cubic `f` used for `n = 6`, `k = 3`, so that `(x^6 - 1) / f` has the property.
///
/// When `3 | q - 1` (`q = 4^m` or `q = 1 mod 6`), `f = x^3 + (b+1)x^2 + (b+1)x + b`
/// with `b = a^((q^6-1)/3)` of order 3; otherwise `f = x^3 + 2x^2 + 2x + 1`.
/// `ctx` must be `F_{q^6}` and `a` primitive in it.
pub fn canonical_f_with(ctx: &FieldCtx, a: &FieldElement) -> Result<Poly<u64>> {
    let pp = ctx.prime_power();
    if !pp.admissible_n6() {
        return Err(Error::Inadmissible(pp.q()));
    }
    if ctx.n() != 6 {
        return Err(Error::InvalidInput("canonical f is defined for n = 6".into()));
    }
    let fq = ctx.base();
    let q = pp.q();
    if q % 3 == 1 {
        let b = ctx
            .pow(a, &(ctx.group_order() / 3u32))
            .as_base()
            .ok_or_else(|| Error::Internal("order-3 element not in F_q".into()))?;
        let b1 = fq.add(&b, &1);
        Ok(Poly::from_u64s(vec![b, b1, b1, 1]))
    } else {
        Ok(Poly::from_u64s(vec![1, fq.from_int(2), fq.from_int(2), 1]))
    }
}

pub fn canonical_f(q: PrimePower) -> Result<Poly<u64>> {
    if !q.admissible_n6() {
        return Err(Error::Inadmissible(q.q()));
    }
    let ctx = FieldCtx::build(q, 6)?;
    let a = ctx.find_primitive();
    canonical_f_with(&ctx, &a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_serializes_as_label() {
        use Rule::*;
        for r in [EvenA, EvenB, EvenC, EvenD, EvenE, EvenNone, OddI, OddII, OddIII, OddNone, Exhaustive] {
            assert_eq!(serde_json::to_value(r).unwrap(), r.label());
        }
    }

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(property_a_exhaustive(pp(2), 3).unwrap(), None);
        let fq = Fq::new(pp(3)).unwrap();
        let ring = fq.poly_ring();
        let xm = Poly::from_u64s(vec![2, 1]);
        let xp = Poly::from_u64s(vec![1, 1]);
        assert_eq!(
            property_a_exhaustive(pp(3), 3).unwrap(),
            Some(ring.mul(&xm, &ring.pow(&xp, 2)))
        );
        let g7 = property_a_exhaustive(pp(7), 3).unwrap().unwrap();
        assert!(satisfies_property_a(&Fq::new(pp(7)).unwrap(), &g7, 3));
    }

    #[test]
    fn classification_examples() {
        let c = property_a_classify(pp(2), 3).unwrap();
        assert_eq!((c.rule, c.exists, c.s, c.t, c.order), (Rule::EvenNone, false, 0, 3, Some(2)));
        let c = property_a_classify(pp(4), 3).unwrap();
        assert_eq!((c.rule, c.exists, c.order), (Rule::EvenB, true, Some(1)));
        let c = property_a_classify(pp(3), 2).unwrap();
        assert_eq!((c.rule, c.exists, c.order), (Rule::OddNone, false, Some(2)));
        assert!(property_a_classify(pp(3), 1).is_err());
        assert_eq!(classify_or_enumerate(pp(3), 1).unwrap().rule, Rule::Exhaustive);
    }

    #[test]
    fn canonical_choices() {
        assert_eq!(canonical_f(pp(5)).unwrap().coeffs(), &[1, 2, 2, 1]);
        assert_eq!(canonical_f(pp(3)).unwrap().coeffs(), &[1, 2, 2, 1]);
        let f7 = canonical_f(pp(7)).unwrap();
        // b is 2 or 4, the two elements of order 3 in F_7
        assert!(f7.coeffs() == [2, 3, 3, 1] || f7.coeffs() == [4, 5, 5, 1]);
        assert!(matches!(canonical_f(pp(8)), Err(Error::Inadmissible(8))));
        for q in [3u64, 4, 5, 7, 9, 11, 13, 16, 25, 27, 64] {
            let fq = Fq::new(pp(q)).unwrap();
            let ring = fq.poly_ring();
            let f = canonical_f(pp(q)).unwrap();
            let g = ring.div_exact(&ring.x_pow_minus_one(6), &f).expect("f | x^6 - 1");
            assert!(satisfies_property_a(&fq, &g, 3), "q = {q}");
        }
    }
}
