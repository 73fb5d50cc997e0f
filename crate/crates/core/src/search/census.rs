use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ff::{poly_factor, Field, FieldCtx, FieldElement, Fq, PrimePower};
use crate::num_theory::Factorizer;

/// Largest `q^n` enumerated unless the caller raises the guard.
pub const DEFAULT_CENSUS_GUARD: u128 = 1 << 24;

/// Rank over `F_q` of the `n x n` matrix whose rows are the given vectors.
fn rank(fq: &Fq, mut rows: Vec<Vec<u64>>) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = fq.inv(&rows[rank][col]).expect("pivot is nonzero");
        let pivot_row: Vec<u64> = rows[rank].iter().map(|c| fq.mul(c, &inv)).collect();
        for r in rank + 1..rows.len() {
            let factor = rows[r][col];
            if factor != 0 {
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = fq.sub(x, &fq.mul(&factor, y));
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// `n - dim span{a, a^q, ..., a^(q^(n-1))}`, by Gaussian elimination.
fn k_normality_by_rank(ctx: &FieldCtx, a: &FieldElement) -> usize {
    let rows = ctx.conjugates(a).into_iter().map(|c| c.coeffs().to_vec()).collect();
    ctx.n() - rank(ctx.base(), rows)
}

fn checked_size(q: PrimePower, n: usize, guard: u128) -> Result<u128> {
    let size = (q.q() as u128).checked_pow(n as u32);
    match size {
        Some(s) if s <= guard => Ok(s),
        _ => Err(Error::EnumerationGuard {
            size: format!("{}^{}", q.q(), n),
            guard: guard.to_string(),
        }),
    }
}

/// Counts of elements of `F_{q^n}` by k-normality, `k = 0..=n`, by full enumeration.
/// With `primitive`, only generators of the multiplicative group are counted.
pub fn census_by_k(q: PrimePower, n: usize, primitive: bool, guard: u128) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let size = checked_size(q, n, guard)? as usize;
    let ctx = FieldCtx::build_with(q, n, &Factorizer::new())?;
    let mask = if primitive {
        // generators are g^i with gcd(i, q^n - 1) = 1
        let g = ctx.find_primitive();
        let order = size - 1;
        let mut mask = vec![false; size];
        let mut x = ctx.one();
        for i in 0..order {
            if i.gcd(&order) == 1 {
                mask[ctx.index_of(&x) as usize] = true;
            }
            x = ctx.mul(&x, &g);
        }
        Some(mask)
    } else {
        None
    };
    let mut counts = vec![0u64; n + 1];
    for i in 0..size {
        if mask.as_ref().is_some_and(|m| !m[i]) {
            continue;
        }
        let a = ctx.element_from_index(i as u128);
        counts[k_normality_by_rank(&ctx, &a)] += 1;
    }
    Ok(counts)
}

pub fn brute_force_census(q: PrimePower, n: usize, k: usize, primitive: bool, guard: u128) -> Result<u64> {
    if k > n {
        return Err(Error::InvalidInput(format!("need k <= n (n = {n}, k = {k})")));
    }
    Ok(census_by_k(q, n, primitive, guard)?[k])
}

/// `sum Phi_q(h)` over monic `h | x^n - 1` with `deg h = n - k`, where
/// `Phi_q(P^e) = q^(d(e-1)) (q^d - 1)` for irreducible `P` of degree `d`.
pub fn knormal_count_formula(q: PrimePower, n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k > n {
        return Err(Error::InvalidInput(format!("need 0 <= k <= n, n >= 1 (n = {n}, k = {k})")));
    }
    let fq = Fq::new(q)?;
    let factors: Vec<(usize, u32)> = poly_factor(&fq, &fq.poly_ring().x_pow_minus_one(n))
        .into_iter()
        .map(|(p, e)| (p.degree().expect("nonzero factor"), e))
        .collect();
    let qb = BigUint::from(q.q());

    // dp[d] = sum of Phi over partial divisors of degree d
    let target = n - k;
    let mut dp = vec![BigUint::zero(); target + 1];
    dp[0] = BigUint::one();
    for (d, e) in factors {
        let mut next = dp.clone();
        for (deg, acc) in dp.iter().enumerate() {
            if acc.is_zero() {
                continue;
            }
            for j in 1..=e as usize {
                let nd = deg + j * d;
                if nd > target {
                    break;
                }
                let phi = qb.pow((d * (j - 1)) as u32) * (qb.pow(d as u32) - 1u32);
                next[nd] += acc * phi;
            }
        }
        dp = next;
    }
    Ok(dp[target].clone())
}
