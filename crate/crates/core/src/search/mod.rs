//! Explicit primitive 3-normal elements of `F_{q^6}`, their certificates, and
//! brute-force counts used to cross-check the theory on small fields.

mod census;
mod scan;

pub use census::{brute_force_census, census_by_k, knormal_count_formula, DEFAULT_CENSUS_GUARD};
pub use scan::{scan, scan_each, ScanOptions, ScanRecord, ScanSummary};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldCtx, FieldElement, Fq, Poly, PrimePower};
use crate::linearized::{is_normal, k_normality, linearized_eval, normal_elements};
use crate::num_theory::Factorizer;
use crate::property_a::{canonical_f_with, property_a_witnesses};

/// How many normal seeds the fallback ladder tries before giving up.
pub const LADDER_SEEDS: usize = 64;

/// Witness `element = L_f(normal_seed) + translate` in `F_{q^6}`.
///
/// Elements of `F_q` are written as their `m` base-`p` digits (constant first), so
/// every number in the serialized form is an integer below `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    /// Modulus of `F_q` over `F_p`, coefficients low to high.
    pub base_modulus: Vec<u64>,
    /// Modulus of `F_{q^6}` over `F_q`, coefficients low to high.
    pub modulus: Vec<Vec<u64>>,
    pub normal_seed: Vec<Vec<u64>>,
    pub f: Vec<Vec<u64>>,
    pub translate: Vec<u64>,
    pub element: Vec<Vec<u64>>,
}

/// Which stage of the search produced the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Canonical `f`, translate `0` or `u^j`.
    Canonical,
    /// The fixed `q = 7` construction.
    SevenFallback,
    /// Another property-(A) cofactor or a later normal seed.
    Ladder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub route: Route,
    pub certificate: Certificate,
}

fn encode_base(fq: &Fq, a: u64) -> Vec<u64> {
    fq.digits(a)
}

fn encode_poly(fq: &Fq, f: &Poly<u64>) -> Vec<Vec<u64>> {
    f.coeffs().iter().map(|&c| encode_base(fq, c)).collect()
}

fn encode_elem(fq: &Fq, a: &FieldElement) -> Vec<Vec<u64>> {
    a.coeffs().iter().map(|&c| encode_base(fq, c)).collect()
}

fn certificate(ctx: &FieldCtx, seed: &FieldElement, f: &Poly<u64>, translate: u64, element: &FieldElement) -> Certificate {
    let fq = ctx.base();
    Certificate {
        q: fq.q(),
        p: fq.p(),
        m: fq.m(),
        base_modulus: fq.base_modulus().to_vec(),
        modulus: encode_poly(fq, ctx.modulus()),
        normal_seed: encode_elem(fq, seed),
        f: encode_poly(fq, f),
        translate: encode_base(fq, translate),
        element: encode_elem(fq, element),
    }
}

fn is_witness(ctx: &FieldCtx, gamma: &FieldElement) -> Result<bool> {
    Ok(ctx.is_primitive(gamma) && k_normality(ctx, gamma)? == ctx.n() / 2)
}

/// `beta = L_f(alpha)`, then `beta + u^j` for `j = 0..q-2`.
fn translate_loop(ctx: &FieldCtx, f: &Poly<u64>, alpha: &FieldElement, u: u64) -> Result<Option<(u64, FieldElement)>> {
    let fq = ctx.base();
    let beta = linearized_eval(ctx, f, alpha);
    if is_witness(ctx, &beta)? {
        return Ok(Some((0, beta)));
    }
    let mut uj = fq.one();
    for _ in 0..fq.q() - 1 {
        let gamma = ctx.add(&beta, &ctx.from_base(uj));
        if is_witness(ctx, &gamma)? {
            return Ok(Some((uj, gamma)));
        }
        uj = fq.mul(&uj, &u);
    }
    Ok(None)
}

const SEVEN_MODULUS: [u64; 7] = [2, 2, 4, 3, 2, 2, 1];
const SEVEN_F: [u64; 4] = [4, 5, 5, 1];

fn seven_fallback(factorizer: &Factorizer) -> Result<Option<SearchResult>> {
    let base = Fq::new(PrimePower::new(7)?)?;
    let ctx = FieldCtx::with_modulus(base, Poly::from_u64s(SEVEN_MODULUS.to_vec()), factorizer)?;
    let alpha = ctx.generator();
    let f = Poly::from_u64s(SEVEN_F.to_vec());
    let gamma = ctx.add(&linearized_eval(&ctx, &f, &alpha), &ctx.one());
    if !is_normal(&ctx, &alpha)? || !is_witness(&ctx, &gamma)? {
        return Ok(None);
    }
    Ok(Some(SearchResult {
        route: Route::SevenFallback,
        certificate: certificate(&ctx, &alpha, &f, 1, &gamma),
    }))
}

/// A primitive 3-normal element of `F_{q^6}` over `F_q`.
///
/// Uses the first primitive `a` in scan order, the first of [`normal_elements`], the
/// canonical `f`, and translates by powers of `u = a^((q^6-1)/(q-1))`. If that
/// fails, `q = 7` uses its fixed construction; after that every property-(A)
/// cofactor is tried, for successive normal seeds.
pub fn explicit_element(q: PrimePower, factorizer: &Factorizer) -> Result<SearchResult> {
    if !q.admissible_n6() {
        return Err(Error::Inadmissible(q.q()));
    }
    let ctx = FieldCtx::build_with(q, 6, factorizer)?;
    let fq = ctx.base();
    let a = ctx.find_primitive();
    let alpha = normal_elements(&ctx).next().expect("normal elements exist");
    let u = ctx
        .pow(&a, &(ctx.group_order() / (q.q() - 1)))
        .as_base()
        .ok_or_else(|| Error::Internal("norm of a primitive element not in F_q".into()))?;

    let f = canonical_f_with(&ctx, &a)?;
    if let Some((t, gamma)) = translate_loop(&ctx, &f, &alpha, u)? {
        return Ok(SearchResult {
            route: Route::Canonical,
            certificate: certificate(&ctx, &alpha, &f, t, &gamma),
        });
    }

    if q.q() == 7 {
        if let Some(found) = seven_fallback(factorizer)? {
            return Ok(found);
        }
    }

    let ring = fq.poly_ring();
    let xn1 = ring.x_pow_minus_one(6);
    let cofactors: Vec<Poly<u64>> = property_a_witnesses(fq, 3)
        .iter()
        .map(|g| ring.div_exact(&xn1, g).expect("g divides x^6 - 1"))
        .collect();
    for seed in normal_elements(&ctx).take(LADDER_SEEDS) {
        for f in &cofactors {
            if let Some((t, gamma)) = translate_loop(&ctx, f, &seed, u)? {
                return Ok(SearchResult {
                    route: Route::Ladder,
                    certificate: certificate(&ctx, &seed, f, t, &gamma),
                });
            }
        }
    }
    Err(Error::SearchExhausted(q.q()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    /// Multiplicative order of the recomputed element, in decimal.
    pub order: String,
    pub k_normality: usize,
    pub diagnostics: Vec<String>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

fn decode_base(fq: &Fq, digits: &[u64], what: &str) -> Result<u64> {
    if digits.len() != fq.m() as usize {
        return Err(malformed(format!("{what}: expected {} digits, got {}", fq.m(), digits.len())));
    }
    fq.from_digits(digits).map_err(|e| malformed(format!("{what}: {e}")))
}

fn decode_list(fq: &Fq, v: &[Vec<u64>], what: &str) -> Result<Vec<u64>> {
    v.iter().map(|d| decode_base(fq, d, what)).collect()
}

/// Rebuilds the fields from the certificate and re-checks the witness.
///
/// Structural problems are errors; failed mathematical checks come back as
/// `valid = false` with diagnostics.
pub fn verify_certificate(c: &Certificate, factorizer: &Factorizer) -> Result<Verification> {
    let pp = PrimePower::from_parts(c.p, c.m).map_err(|e| malformed(e.to_string()))?;
    if pp.q() != c.q {
        return Err(malformed(format!("q = {} is not {}^{}", c.q, c.p, c.m)));
    }
    let fq = Fq::with_modulus(pp, c.base_modulus.clone()).map_err(|e| malformed(e.to_string()))?;
    let modulus = Poly::from_u64s(decode_list(&fq, &c.modulus, "modulus")?);
    let n = modulus.degree().unwrap_or(0);
    if n < 2 || n % 2 != 0 {
        return Err(malformed(format!("modulus degree {n} is not an even number >= 2")));
    }
    let ctx = FieldCtx::with_modulus(fq, modulus, factorizer).map_err(|e| malformed(e.to_string()))?;
    let fq = ctx.base();
    let elem = |v: &[Vec<u64>], what: &str| -> Result<FieldElement> {
        if v.len() != n {
            return Err(malformed(format!("{what}: expected {n} coefficients, got {}", v.len())));
        }
        ctx.from_coeffs(decode_list(fq, v, what)?)
    };
    let seed = elem(&c.normal_seed, "normal_seed")?;
    let claimed = elem(&c.element, "element")?;
    let f = Poly::from_u64s(decode_list(fq, &c.f, "f")?);
    let translate = decode_base(fq, &c.translate, "translate")?;

    let mut diagnostics = Vec::new();
    if !is_normal(&ctx, &seed)? {
        diagnostics.push("seed not normal".to_string());
    }
    let gamma = ctx.add(&linearized_eval(&ctx, &f, &seed), &ctx.from_base(translate));
    if gamma != claimed {
        diagnostics.push("element differs from L_f(normal_seed) + translate".to_string());
    }
    let order = ctx.element_order(&gamma)?;
    if order != *ctx.group_order() {
        diagnostics.push(format!("element not primitive: order {order} < {}", ctx.group_order()));
    }
    let k = k_normality(&ctx, &gamma)?;
    if k != n / 2 {
        diagnostics.push(format!("element is {k}-normal, expected {}-normal", n / 2));
    }
    Ok(Verification {
        valid: diagnostics.is_empty(),
        order: order.to_string(),
        k_normality: k,
        diagnostics,
    })
}
