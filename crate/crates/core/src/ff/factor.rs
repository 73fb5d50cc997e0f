//! Irreducibility, factorization and divisor enumeration for polynomials over `F_q`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Field, Fq, Poly};

/// Scan order on polynomials: by degree, then by the integer
/// `sum c_i q^i` (constant term fastest, so the top coefficient is most significant).
pub fn scan_cmp(a: &Poly<u64>, b: &Poly<u64>) -> Ordering {
    a.coeffs()
        .len()
        .cmp(&b.coeffs().len())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Ben-Or test: `f` is irreducible iff `gcd(x^(q^i) - x, f) = 1` for `1 <= i <= deg f / 2`.
pub fn is_irreducible(fq: &Fq, f: &Poly<u64>) -> bool {
    let ring = fq.poly_ring();
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f.coeffs()[0] == 0 {
        return false;
    }
    let f = ring.monic(f);
    let x = ring.x();
    let q = BigUint::from(fq.q());
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = ring.pow_mod(&h, &q, &f);
        let g = ring.gcd(&ring.sub(&h, &x), &f);
        if !ring.is_one(&g) {
            return false;
        }
    }
    true
}

/// Candidates tried in scan order before switching to a seeded random stream.
pub const SCAN_BUDGET: usize = 4096;

/// First monic irreducible polynomial of the given degree in scan order, among the
/// first [`SCAN_BUDGET`] candidates; past that, the first irreducible from a ChaCha
/// stream seeded by `(p, m, degree)`. In characteristic 2 and 3 whole blocks of the
/// scan can be reducible (every `x^6 + ax + b` over `F_729`, for instance).
/// Degree 1 uses `x - 1` by convention, so the field generator is a unit.
pub fn first_irreducible(fq: &Fq, degree: usize) -> Poly<u64> {
    first_irreducible_over(fq, degree)
}

pub(crate) fn first_irreducible_over(fq: &Fq, degree: usize) -> Poly<u64> {
    assert!(degree >= 1);
    let ring = fq.poly_ring();
    if degree == 1 {
        return ring.from_coeffs(vec![fq.neg(&1), 1]);
    }
    let q = fq.q();
    let mut coeffs = vec![0u64; degree + 1];
    coeffs[degree] = 1;
    for _ in 0..SCAN_BUDGET {
        // odometer over c_0..c_{n-1}, constant term fastest
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            if i == degree {
                // every candidate was tried
                panic!("no irreducible polynomial of degree {degree} over F_{q}");
            }
        }
        let f = Poly::from_u64s(coeffs.clone());
        if is_irreducible(fq, &f) {
            return f;
        }
    }
    let seed = seed_of(&Poly::from_u64s(vec![fq.p(), fq.m() as u64, degree as u64]));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        for c in coeffs.iter_mut().take(degree) {
            *c = rng.gen_range(0..q);
        }
        let f = Poly::from_u64s(coeffs.clone());
        if is_irreducible(fq, &f) {
            return f;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicity, sorted by
/// [`scan_cmp`]. The leading coefficient is dropped.
pub fn poly_factor(fq: &Fq, f: &Poly<u64>) -> Vec<(Poly<u64>, u32)> {
    let ring = fq.poly_ring();
    assert!(f.degree().is_some_and(|d| d >= 1), "poly_factor needs deg f >= 1");
    let f = ring.monic(f);
    let mut out: Vec<(Poly<u64>, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(fq, &f) {
        for (deg, chunk) in distinct_degree(fq, &part) {
            for factor in equal_degree(fq, &chunk, deg) {
                match out.iter_mut().find(|(g, _)| *g == factor) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((factor, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| scan_cmp(&a.0, &b.0));
    out
}

/// Monic square-free parts `(g_i, i)` with `f = prod g_i^i`.
fn squarefree_decomposition(fq: &Fq, f: &Poly<u64>) -> Vec<(Poly<u64>, u32)> {
    let ring = fq.poly_ring();
    let p = fq.p() as u32;
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return out;
    }
    let df = ring.derivative(f);
    if df.is_zero() {
        for (g, e) in squarefree_decomposition(fq, &pth_root_poly(fq, f)) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = ring.gcd(f, &df);
    let mut w = ring.div_exact(f, &c).unwrap();
    let mut i = 1;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let z = ring.div_exact(&w, &y).unwrap();
        if !ring.is_one(&z) {
            out.push((z, i));
        }
        i += 1;
        c = ring.div_exact(&c, &y).unwrap();
        w = y;
    }
    if !ring.is_one(&c) {
        for (g, e) in squarefree_decomposition(fq, &pth_root_poly(fq, &c)) {
            out.push((g, e * p));
        }
    }
    out
}

/// `g` with `g(x)^p = f(x)`, for `f` with zero derivative.
fn pth_root_poly(fq: &Fq, f: &Poly<u64>) -> Poly<u64> {
    let p = fq.p() as usize;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| fq.pth_root(c))
        .collect();
    Poly::from_u64s(coeffs)
}

/// Splits a monic square-free polynomial into products of irreducibles of equal degree.
fn distinct_degree(fq: &Fq, f: &Poly<u64>) -> Vec<(usize, Poly<u64>)> {
    let ring = fq.poly_ring();
    let q = BigUint::from(fq.q());
    let x = ring.x();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().is_some_and(|n| n >= 2 * d) {
        h = ring.pow_mod(&h, &q, &rest);
        let g = ring.gcd(&ring.sub(&h, &x), &rest);
        if !ring.is_one(&g) {
            rest = ring.div_exact(&rest, &g).unwrap();
            h = ring.rem(&h, &rest);
            out.push((d, g));
        }
        d += 1;
    }
    if let Some(n) = rest.degree().filter(|&n| n >= 1) {
        out.push((n, rest));
    }
    out
}

pub(crate) fn seed_of(f: &Poly<u64>) -> u64 {
    f.coeffs().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &c| {
        (h ^ c).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn equal_degree(fq: &Fq, f: &Poly<u64>, d: usize) -> Vec<Poly<u64>> {
    let ring = fq.poly_ring();
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(f));
    let q = fq.q();
    let half_exp = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let a = ring.from_coeffs((0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.degree().is_none_or(|k| k == 0) {
            continue;
        }
        let b = if fq.p() == 2 {
            // absolute trace to F_2: a + a^2 + ... + a^(2^(m d - 1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..(fq.m() as usize * d) {
                t = ring.mul_mod(&t, &t, f);
                acc = ring.add(&acc, &t);
            }
            acc
        } else {
            ring.sub(&ring.pow_mod(&a, &half_exp, f), &ring.one())
        };
        let g = ring.gcd(&b, f);
        if let Some(k) = g.degree() {
            if k > 0 && k < n {
                let h = ring.div_exact(f, &g).unwrap();
                let mut out = equal_degree(fq, &g, d);
                out.extend(equal_degree(fq, &h, d));
                return out;
            }
        }
    }
}

/// Every monic divisor of `prod factors` of the given degree, each once, in scan order.
pub fn enumerate_monic_divisors(
    fq: &Fq,
    factors: &[(Poly<u64>, u32)],
    degree: usize,
) -> Vec<Poly<u64>> {
    let ring = fq.poly_ring();
    let mut out = Vec::new();
    let mut exps = vec![0u32; factors.len()];
    loop {
        let deg: usize = exps
            .iter()
            .zip(factors)
            .map(|(&e, (g, _))| e as usize * g.degree().unwrap())
            .sum();
        if deg == degree {
            let d = exps
                .iter()
                .zip(factors)
                .fold(ring.one(), |acc, (&e, (g, _))| ring.mul(&acc, &ring.pow(g, e)));
            out.push(d);
        }
        // odometer over exponent tuples
        let mut i = 0;
        loop {
            if i == factors.len() {
                out.sort_by(scan_cmp);
                return out;
            }
            if exps[i] < factors[i].1 {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// `W(f)`: `2^(number of distinct monic irreducible factors)`.
pub fn num_squarefree_poly_divisors(fq: &Fq, f: &Poly<u64>) -> u64 {
    1u64 << poly_factor(fq, f).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimePower;

    fn x_pow_minus_one(fq: &Fq, n: usize) -> Poly<u64> {
        fq.poly_ring().x_pow_minus_one(n)
    }

    fn field(q: u64) -> Fq {
        Fq::new(PrimePower::new(q).unwrap()).unwrap()
    }

    fn p(c: &[u64]) -> Poly<u64> {
        Poly::from_u64s(c.to_vec())
    }

    #[test]
    fn x6_minus_1_over_f7() {
        let fq = field(7);
        let fs = poly_factor(&fq, &x_pow_minus_one(&fq, 6));
        // x+1, x+2, ..., x+6 in scan order, each once
        let expected: Vec<_> = (1..7).map(|c| (p(&[c, 1]), 1)).collect();
        assert_eq!(fs, expected);
    }

    #[test]
    fn x6_minus_1_small_characteristic() {
        let f2 = field(2);
        assert_eq!(
            poly_factor(&f2, &x_pow_minus_one(&f2, 6)),
            vec![(p(&[1, 1]), 2), (p(&[1, 1, 1]), 2)]
        );
        let f3 = field(3);
        assert_eq!(
            poly_factor(&f3, &x_pow_minus_one(&f3, 6)),
            vec![(p(&[1, 1]), 3), (p(&[2, 1]), 3)]
        );
    }

    #[test]
    fn factorization_over_extension_base() {
        let f4 = field(4);
        // x^3 - 1 splits over F_4
        let fs = poly_factor(&f4, &x_pow_minus_one(&f4, 3));
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(g, e)| g.degree() == Some(1) && *e == 1));
        let f9 = field(9);
        let fs = poly_factor(&f9, &x_pow_minus_one(&f9, 8));
        assert_eq!(fs.len(), 8);
    }

    #[test]
    fn divisor_enumeration() {
        let f2 = field(2);
        let fs = poly_factor(&f2, &x_pow_minus_one(&f2, 6));
        assert_eq!(enumerate_monic_divisors(&f2, &fs, 3), vec![p(&[1, 0, 0, 1])]);
        assert_eq!(enumerate_monic_divisors(&f2, &fs, 0), vec![p(&[1])]);

        let f3 = field(3);
        let fs = poly_factor(&f3, &x_pow_minus_one(&f3, 6));
        let ring = f3.poly_ring();
        let xm = p(&[2, 1]);
        let xp = p(&[1, 1]);
        let mut expected = vec![
            ring.pow(&xm, 3),
            ring.mul(&ring.pow(&xm, 2), &xp),
            ring.mul(&xm, &ring.pow(&xp, 2)),
            ring.pow(&xp, 3),
        ];
        expected.sort_by(scan_cmp);
        assert_eq!(enumerate_monic_divisors(&f3, &fs, 3), expected);
    }

    #[test]
    fn squarefree_divisor_counts() {
        assert_eq!(num_squarefree_poly_divisors(&field(2), &x_pow_minus_one(&field(2), 6)), 4);
        assert_eq!(num_squarefree_poly_divisors(&field(7), &x_pow_minus_one(&field(7), 6)), 64);
        assert_eq!(num_squarefree_poly_divisors(&field(5), &p(&[4, 1])), 2);
    }

    #[test]
    fn first_irreducibles() {
        assert_eq!(first_irreducible(&field(2), 2), p(&[1, 1, 1]));
        assert_eq!(first_irreducible(&field(2), 3), p(&[1, 1, 0, 1]));
        assert_eq!(first_irreducible(&field(2), 1), p(&[1, 1]));
        assert_eq!(first_irreducible(&field(7), 1), p(&[6, 1]));
        // x^2 + 1 is irreducible over F_3
        assert_eq!(first_irreducible(&field(3), 2), p(&[1, 0, 1]));
    }
}
