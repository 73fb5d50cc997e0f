use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

use knormal::num_theory::{factor, is_prime, FactorCache, Factorizer};

/// Smallest-prime-factor table up to `limit`.
fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn oracle_factor(spf: &[u32], mut n: usize) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        n /= p;
        match out.last_mut() {
            Some((q, e)) if *q == p as u128 => *e += 1,
            _ => out.push((p as u128, 1)),
        }
    }
    out
}

const LIMIT: usize = 1 << 20;

#[test]
fn factor_matches_sieve_below_2_20() {
    let spf = spf_table(LIMIT);
    for n in (1..=LIMIT).step_by(97).chain(LIMIT - 500..=LIMIT) {
        assert_eq!(factor(n as u128).unwrap().factors(), oracle_factor(&spf, n).as_slice(), "n = {n}");
    }
}

fn trial_phi(n: u64) -> u64 {
    (1..=n).filter(|i| i.gcd(&n) == 1).count() as u64
}

proptest! {
    #[test]
    fn factor_roundtrip(n in 1u128..u64::MAX as u128 * 1000) {
        let f = factor(n).unwrap();
        prop_assert_eq!(f.value(), &BigUint::from(n));
        for w in f.factors().windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        for &(p, e) in f.factors() {
            prop_assert!(is_prime(p).unwrap());
            prop_assert!(e >= 1);
        }
    }

    #[test]
    fn multiplicative_functions(a in 1u64..200_000, b in 1u64..200_000) {
        prop_assume!(a.gcd(&b) == 1);
        let (fa, fb) = (factor(a as u128).unwrap(), factor(b as u128).unwrap());
        let fab = factor(a as u128 * b as u128).unwrap();
        prop_assert_eq!(fab.euler_phi(), fa.euler_phi() * fb.euler_phi());
        prop_assert_eq!(fab.num_squarefree_divisors(), fa.num_squarefree_divisors() * fb.num_squarefree_divisors());
        prop_assert_eq!(fab.radical(), fa.radical() * fb.radical());
        prop_assert_eq!(fa.product(&fb), fab);
    }

    #[test]
    fn phi_and_w_by_definition(n in 1u64..3000) {
        let f = factor(n as u128).unwrap();
        prop_assert_eq!(f.euler_phi(), BigUint::from(trial_phi(n)));
        let squarefree = (1..=n).filter(|d| n % d == 0 && factor(*d as u128).unwrap().factors().iter().all(|x| x.1 == 1)).count();
        prop_assert_eq!(f.num_squarefree_divisors(), BigUint::from(squarefree));
    }

    #[test]
    fn cyclotomic_split_matches_direct(q in 2u64..5000, n in 1u32..=6) {
        let fz = Factorizer::new();
        let direct = factor((q as u128).pow(n) - 1);
        let split = fz.factor_q_pow_minus_one(q, n);
        if let (Ok(d), Ok(s)) = (direct, split) {
            prop_assert_eq!(d, s);
        }
    }
}

#[test]
fn cache_entries_are_checked() {
    let cache = FactorCache::parse("# comment\n728=2^3*7*13\n").unwrap();
    let fz = Factorizer::with_cache(cache);
    assert_eq!(fz.factor(728).unwrap().factors(), &[(2, 3), (7, 1), (13, 1)]);
    assert!(FactorCache::parse("728=2^3*7*11\n").is_err());
    assert!(FactorCache::parse("15=15\n").is_err());
}
