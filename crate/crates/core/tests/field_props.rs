use num_bigint::BigUint;
use proptest::prelude::*;

use knormal::ff::{enumerate_monic_divisors, is_irreducible, poly_factor, scan_cmp, Field, FieldCtx, FieldElement, Fq, Poly, PrimePower};
use knormal::linearized::{find_normal, fq_order, k_normality, linearized_eval, translate_order_profile};

fn pp(q: u64) -> PrimePower {
    PrimePower::new(q).unwrap()
}

fn element(ctx: &FieldCtx, raw: &[u64]) -> FieldElement {
    let q = ctx.q();
    ctx.from_coeffs((0..ctx.n()).map(|i| raw.get(i).copied().unwrap_or(0) % q).collect())
        .unwrap()
}

fn poly(q: u64, raw: &[u64]) -> Poly<u64> {
    Poly::from_u64s(raw.iter().map(|c| c % q).collect())
}

/// Monic polynomial of the given degree with index `i` in base-`q` digits.
fn monic_from_index(q: u64, degree: usize, mut i: u64) -> Poly<u64> {
    let mut c = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        c.push(i % q);
        i /= q;
    }
    c.push(1);
    Poly::from_u64s(c)
}

fn all_divisors(fq: &Fq, n: usize) -> Vec<Poly<u64>> {
    let factors = poly_factor(fq, &fq.poly_ring().x_pow_minus_one(n));
    (0..=n).flat_map(|d| enumerate_monic_divisors(fq, &factors, d)).collect()
}

const SMALL_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearized_is_a_ring_map(
        qi in 0..SMALL_Q.len(),
        n in 2usize..=6,
        a in prop::collection::vec(any::<u64>(), 6),
        f in prop::collection::vec(any::<u64>(), 0..8),
        g in prop::collection::vec(any::<u64>(), 0..8),
    ) {
        let q = SMALL_Q[qi];
        let ctx = FieldCtx::build(pp(q), n).unwrap();
        let ring = ctx.base().poly_ring();
        let alpha = element(&ctx, &a);
        let (f, g) = (poly(q, &f), poly(q, &g));
        let lf = linearized_eval(&ctx, &f, &alpha);
        let lg = linearized_eval(&ctx, &g, &alpha);
        prop_assert_eq!(linearized_eval(&ctx, &ring.add(&f, &g), &alpha), ctx.add(&lf, &lg));
        prop_assert_eq!(linearized_eval(&ctx, &ring.mul(&f, &g), &alpha), linearized_eval(&ctx, &f, &lg));
        // L_{x^n - 1} vanishes everywhere
        prop_assert!(ctx.is_zero(&linearized_eval(&ctx, &ring.x_pow_minus_one(n), &alpha)));
    }

    #[test]
    fn poly_factor_remultiplies(qi in 0..SMALL_Q.len(), raw in prop::collection::vec(any::<u64>(), 1..11)) {
        let q = SMALL_Q[qi];
        let fq = Fq::new(pp(q)).unwrap();
        let ring = fq.poly_ring();
        let mut c: Vec<u64> = raw.iter().map(|x| x % q).collect();
        c.push(1);
        let f = Poly::from_u64s(c);
        let factors = poly_factor(&fq, &f);
        let product = factors.iter().fold(ring.one(), |acc, (g, e)| ring.mul(&acc, &ring.pow(g, *e)));
        prop_assert_eq!(product, f);
        for w in factors.windows(2) {
            prop_assert!(w[0].0 != w[1].0);
        }
        for (g, _) in &factors {
            prop_assert!(ring.is_monic(g) && is_irreducible(&fq, g));
        }
    }

    #[test]
    fn fq_order_matches_definition(qi in 0..SMALL_Q.len(), n in 1usize..=6, a in prop::collection::vec(any::<u64>(), 6)) {
        let q = SMALL_Q[qi];
        prop_assume!((q as u128).pow(n as u32) <= 1 << 12);
        let ctx = FieldCtx::build(pp(q), n).unwrap();
        let alpha = element(&ctx, &a);
        // least-degree monic divisor of x^n - 1 whose associate kills alpha
        let expected = all_divisors(ctx.base(), n)
            .into_iter()
            .find(|d| ctx.is_zero(&linearized_eval(&ctx, d, &alpha)))
            .unwrap();
        prop_assert_eq!(fq_order(&ctx, &alpha).unwrap(), expected);
    }

    #[test]
    fn conjugate_power_identity(qi in 0..SMALL_Q.len(), k in 1usize..=3, a in prop::collection::vec(any::<u64>(), 6)) {
        // beta = alpha^(q^k) +- alpha satisfies beta^(q^k) = +-beta, so beta^(2(q^k - 1)) = 1
        let q = SMALL_Q[qi];
        let ctx = FieldCtx::build(pp(q), 2 * k).unwrap();
        let alpha = element(&ctx, &a);
        let mut shifted = alpha.clone();
        for _ in 0..k {
            shifted = ctx.frobenius(&shifted);
        }
        let e = BigUint::from(2 * (q.pow(k as u32) - 1));
        for beta in [ctx.add(&shifted, &alpha), ctx.sub(&shifted, &alpha)] {
            prop_assert!(ctx.is_zero(&beta) || ctx.is_one(&ctx.pow(&beta, &e)));
        }
    }
}

#[test]
fn divisor_enumeration_matches_trial_division() {
    for q in SMALL_Q {
        let fq = Fq::new(pp(q)).unwrap();
        let ring = fq.poly_ring();
        for n in 1..=6usize {
            let xn1 = ring.x_pow_minus_one(n);
            let factors = poly_factor(&fq, &xn1);
            for d in 0..=n {
                let count = q.pow(d as u32);
                if count > 50_000 {
                    continue;
                }
                let mut trial: Vec<Poly<u64>> = (0..count)
                    .map(|i| monic_from_index(q, d, i))
                    .filter(|g| ring.divides(g, &xn1))
                    .collect();
                trial.sort_by(scan_cmp);
                assert_eq!(enumerate_monic_divisors(&fq, &factors, d), trial, "q = {q}, n = {n}, d = {d}");
            }
        }
    }
}

#[test]
fn translates_change_order_at_most_once() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let ctx = FieldCtx::build(pp(q), 6).unwrap();
        let fq = ctx.base();
        let ring = fq.poly_ring();
        let xn1 = ring.x_pow_minus_one(6);
        let x_minus_1 = ring.from_coeffs(vec![fq.neg(&1), 1]);
        let alpha = find_normal(&ctx);
        let factors = poly_factor(fq, &xn1);
        for g in enumerate_monic_divisors(fq, &factors, 3) {
            if !ring.divides(&x_minus_1, &g) {
                continue;
            }
            let h = ring.div_exact(&xn1, &g).unwrap();
            let beta = linearized_eval(&ctx, &h, &alpha);
            assert_eq!(k_normality(&ctx, &beta).unwrap(), 3);
            let profile = translate_order_profile(&ctx, &beta, &g).unwrap();
            assert!(profile.len() <= 1, "q = {q}, g = {g:?}: {profile:?}");
            if ring.divides(&ring.mul(&x_minus_1, &x_minus_1), &g) {
                assert!(profile.is_empty(), "q = {q}, g = {g:?}");
            }
        }
    }
}
