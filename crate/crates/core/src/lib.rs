//! Primitive k-normal elements of `F_{q^n}` over `F_q` at the critical value `n = 2k`.
//!
//! The crate is organised bottom-up:
//!
//! * [`num_theory`]: factorization, totients, square-free divisor counts and
//!   multiplicative orders over the integers.
//! * [`ff`]: prime and extension fields, polynomials over them, factorization of
//!   polynomials and primitive elements.
//! * [`linearized`]: linearized q-associates, the `F_q`-order of an element and
//!   k-normality.
//! * [`property_a`]: existence of the degree-k divisors of `x^n - 1` that drive the
//!   translate construction, by enumeration and by closed-form classification.
//! * [`existence`]: the numerical existence bounds and the sieve, in exact or
//!   rigorously rounded arithmetic.
//! * [`search`]: explicit witnesses, certificates, brute-force censuses and range scans.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod existence;
pub mod ff;
pub mod linearized;
pub mod num_theory;
pub mod property_a;
pub mod search;

pub use error::{Error, Result};
pub use ff::{FieldCtx, FieldElement, Fq, Poly, PrimePower};
pub use num_theory::FactoredInt;
