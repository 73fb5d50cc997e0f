//! Linearized q-associates, the `F_q`-order of an element, and k-normality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{seed_of, Field, FieldCtx, FieldElement, Poly};

/// `L_f(beta) = sum a_i beta^(q^i)` for `f = sum a_i x^i` over `F_q`.
pub fn linearized_eval(ctx: &FieldCtx, f: &Poly<u64>, beta: &FieldElement) -> FieldElement {
    let base = ctx.base();
    let mut acc = ctx.zero();
    let mut conj = beta.clone();
    for (i, &a) in f.coeffs().iter().enumerate() {
        if i > 0 {
            conj = ctx.frobenius(&conj);
        }
        if a != 0 {
            let term: Vec<u64> = conj.coeffs().iter().map(|c| base.mul(&a, c)).collect();
            acc = ctx.add(&acc, &ctx.from_coeffs(term).expect("coefficients stay in F_q"));
        }
    }
    acc
}

/// The `F_q`-order: the monic `g | x^n - 1` of least degree with `L_g(beta) = 0`.
///
/// Computed as `(x^n - 1) / gcd(sum_i beta^(q^i) x^(n-1-i), x^n - 1)` with the gcd
/// taken over `F_{q^n}`. The gcd is invariant under Frobenius, so the quotient
/// must descend to `F_q`; a quotient that does not is reported as an internal error.
pub fn fq_order(ctx: &FieldCtx, beta: &FieldElement) -> Result<Poly<u64>> {
    let n = ctx.n();
    let ring = ctx.poly_ring();
    let mut coeffs = ctx.conjugates(beta);
    coeffs.reverse();
    let c = ring.from_coeffs(coeffs);
    let xn1 = ring.x_pow_minus_one(n);
    let g = ring.gcd(&c, &xn1);
    let quotient = ring
        .div_exact(&xn1, &g)
        .ok_or_else(|| Error::Internal("gcd does not divide x^n - 1".into()))?;
    ctx.descend_poly(&quotient)
        .ok_or_else(|| Error::Internal("F_q-order has coefficients outside F_q".into()))
}

/// `n - deg Ord(beta)`; zero means normal.
pub fn k_normality(ctx: &FieldCtx, beta: &FieldElement) -> Result<usize> {
    let ord = fq_order(ctx, beta)?;
    Ok(ctx.n() - ord.degree().expect("order polynomial is nonzero"))
}

pub fn is_normal(ctx: &FieldCtx, beta: &FieldElement) -> Result<bool> {
    Ok(k_normality(ctx, beta)? == 0)
}

/// Normal elements drawn from a ChaCha stream seeded by the modulus, so the
/// sequence is fixed for a given field. Scan order is unusable here: for a
/// binomial modulus every coordinate of a normal element must be nonzero.
pub fn normal_elements(ctx: &FieldCtx) -> impl Iterator<Item = FieldElement> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(ctx.modulus()) ^ ctx.q());
    let q = ctx.q();
    std::iter::repeat_with(move || {
        let coeffs = (0..ctx.n()).map(|_| rng.gen_range(0..q)).collect();
        ctx.from_coeffs(coeffs).expect("coefficients below q")
    })
    .filter(move |a| is_normal(ctx, a).expect("order computation is total"))
}

/// First element of [`normal_elements`].
pub fn find_normal(ctx: &FieldCtx) -> FieldElement {
    normal_elements(ctx).next().expect("normal elements exist")
}

/// Translates `u in F_q` for which `Ord(beta + u) != g`.
///
/// Requires `Ord(beta) = g`, `(x - 1) | g`, `n = 2k` and `deg g = k`. At most one
/// translate is exceptional; when `(x - 1)^2 | g` there are none.
pub fn translate_order_profile(
    ctx: &FieldCtx,
    beta: &FieldElement,
    g: &Poly<u64>,
) -> Result<Vec<u64>> {
    let n = ctx.n();
    let ring = ctx.base().poly_ring();
    if n % 2 != 0 || g.degree() != Some(n / 2) {
        return Err(Error::InvalidInput(format!(
            "need n = 2k and deg g = k (n = {n}, deg g = {:?})",
            g.degree()
        )));
    }
    let x_minus_1 = ring.from_coeffs(vec![ctx.base().neg(&1), 1]);
    if !ring.divides(&x_minus_1, g) {
        return Err(Error::InvalidInput("x - 1 does not divide g".into()));
    }
    if fq_order(ctx, beta)? != *g {
        return Err(Error::InvalidInput("Ord(beta) differs from g".into()));
    }
    let mut out = Vec::new();
    for u in ctx.base().elements() {
        let shifted = ctx.add(beta, &ctx.from_base(u));
        if fq_order(ctx, &shifted)? != *g {
            out.push(u);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{enumerate_monic_divisors, poly_factor, Fq, PrimePower};
    use crate::num_theory::Factorizer;

    fn ctx(q: u64, n: usize) -> FieldCtx {
        FieldCtx::build(PrimePower::new(q).unwrap(), n).unwrap()
    }

    fn seven_field() -> FieldCtx {
        let base = Fq::new(PrimePower::new(7).unwrap()).unwrap();
        let m = Poly::from_u64s(vec![2, 2, 4, 3, 2, 2, 1]);
        FieldCtx::with_modulus(base, m, &Factorizer::new()).unwrap()
    }

    #[test]
    fn frobenius_and_annihilation() {
        let f = ctx(5, 4);
        let x = Poly::from_u64s(vec![0, 1]);
        let xn1 = f.base().poly_ring().x_pow_minus_one(4);
        for i in [3u128, 77, 400] {
            let b = f.element_from_index(i);
            assert_eq!(linearized_eval(&f, &x, &b), f.pow_u64(&b, 5));
            assert!(f.is_zero(&linearized_eval(&f, &xn1, &b)));
        }
    }

    #[test]
    fn product_polynomial_expansion() {
        let f = seven_field();
        let alpha = f.generator();
        let ring = f.base().poly_ring();
        let lin = |c: u64| Poly::from_u64s(vec![7 - c, 1]);
        let poly = ring.mul(&ring.mul(&lin(2), &lin(3)), &lin(4));
        assert_eq!(poly.coeffs(), &[4, 5, 5, 1]);
        let expected = [343u64, 49, 7, 1]
            .iter()
            .zip([1u64, 5, 5, 4])
            .fold(f.zero(), |acc, (&e, c)| {
                f.add(&acc, &f.mul(&f.from_base(c), &f.pow_u64(&alpha, e)))
            });
        assert_eq!(linearized_eval(&f, &poly, &alpha), expected);
    }

    #[test]
    fn order_examples() {
        let f = ctx(7, 6);
        assert_eq!(fq_order(&f, &f.zero()).unwrap().coeffs(), &[1]);
        assert_eq!(k_normality(&f, &f.zero()).unwrap(), 6);
        assert_eq!(fq_order(&f, &f.from_base(3)).unwrap().coeffs(), &[6, 1]);
        let p = seven_field();
        assert_eq!(fq_order(&p, &p.generator()).unwrap().coeffs(), &[6, 0, 0, 0, 0, 0, 1]);
        assert_eq!(k_normality(&p, &p.generator()).unwrap(), 0);
    }

    #[test]
    fn normal_search() {
        let f4 = ctx(2, 2);
        assert_eq!(find_normal(&f4), find_normal(&f4));
        assert_eq!(k_normality(&f4, &find_normal(&f4)).unwrap(), 0);
        let f13 = ctx(13, 6);
        assert_eq!(f13.modulus().coeffs()[1..6], [0, 0, 0, 0, 0]);
        assert!(normal_elements(&f13).take(5).all(|a| k_normality(&f13, &a).unwrap() == 0));
        let f = ctx(7, 6);
        let a = find_normal(&f);
        assert_eq!(k_normality(&f, &a).unwrap(), 0);
    }

    #[test]
    fn translate_profiles() {
        // q = 3, g = (x - 1)(x + 1)^2
        let f = ctx(3, 6);
        let ring = f.base().poly_ring();
        let xm = Poly::from_u64s(vec![2, 1]);
        let xp = Poly::from_u64s(vec![1, 1]);
        let g = ring.mul(&xm, &ring.pow(&xp, 2));
        let cof = ring.div_exact(&ring.x_pow_minus_one(6), &g).unwrap();
        let beta = linearized_eval(&f, &cof, &find_normal(&f));
        assert!(translate_order_profile(&f, &beta, &g).unwrap().len() <= 1);

        // (x - 1)^2 | g gives no exceptional translate
        let g2 = ring.mul(&ring.pow(&xm, 2), &xp);
        let cof2 = ring.div_exact(&ring.x_pow_minus_one(6), &g2).unwrap();
        let beta2 = linearized_eval(&f, &cof2, &find_normal(&f));
        assert!(translate_order_profile(&f, &beta2, &g2).unwrap().is_empty());

        // q = 7, g = (x^6 - 1) / ((x - 2)(x - 3)(x - 4))
        let f7 = ctx(7, 6);
        let r7 = f7.base().poly_ring();
        let lin = |c: u64| Poly::from_u64s(vec![7 - c, 1]);
        let fpoly = r7.mul(&r7.mul(&lin(2), &lin(3)), &lin(4));
        let g7 = r7.div_exact(&r7.x_pow_minus_one(6), &fpoly).unwrap();
        let beta7 = linearized_eval(&f7, &fpoly, &find_normal(&f7));
        assert!(translate_order_profile(&f7, &beta7, &g7).unwrap().len() <= 1);

        // precondition violations
        assert!(translate_order_profile(&f7, &beta7, &fpoly).is_err());
        let f5 = ctx(2, 5);
        let all = poly_factor(f5.base(), &f5.base().poly_ring().x_pow_minus_one(5));
        let some = enumerate_monic_divisors(f5.base(), &all, 2);
        assert!(some.is_empty() || translate_order_profile(&f5, &f5.zero(), &some[0]).is_err());
    }
}
