use rayon::prelude::*;
use serde::Serialize;

use super::{explicit_element, verify_certificate, Certificate, Route};
use crate::error::{Error, Result};
use crate::existence::sieve;
use crate::ff::{prime_powers_in, PrimePower};
use crate::num_theory::Factorizer;

/// Prime powers handed to the pool at a time; records are emitted per chunk, in order.
const CHUNK: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Attach a verified certificate to admissible `q`.
    pub witness: bool,
    /// Only search (and emit) admissible `q` for which the sieve fails.
    pub sieve_failures_only: bool,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { witness: false, sieve_failures_only: false, jobs: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub q: u64,
    pub admissible: bool,
    /// `None` for inadmissible `q`, where the sieve does not apply.
    pub sieve: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<Route>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub prime_powers: u64,
    pub admissible: u64,
    pub sieve_passed: u64,
    pub sieve_failed: u64,
    pub certificates: u64,
    pub verification_failures: u64,
    pub errors: u64,
}

impl ScanSummary {
    fn add(&mut self, r: &ScanRecord) {
        self.prime_powers += 1;
        self.admissible += r.admissible as u64;
        match r.sieve {
            Some(true) => self.sieve_passed += 1,
            Some(false) => self.sieve_failed += 1,
            None => {}
        }
        self.certificates += r.certificate.is_some() as u64;
        self.verification_failures += (r.verified == Some(false)) as u64;
        self.errors += r.error.is_some() as u64;
    }
}

fn scan_one(q: PrimePower, opts: &ScanOptions, factorizer: &Factorizer) -> ScanRecord {
    let mut rec = ScanRecord {
        q: q.q(),
        admissible: q.admissible_n6(),
        sieve: None,
        route: None,
        certificate: None,
        verified: None,
        error: None,
    };
    if !rec.admissible {
        return rec;
    }
    let mut run = || -> Result<()> {
        rec.sieve = Some(sieve(q, factorizer)?.passed);
        let wanted = opts.witness && !(opts.sieve_failures_only && rec.sieve == Some(true));
        if wanted {
            let found = explicit_element(q, factorizer)?;
            rec.verified = Some(verify_certificate(&found.certificate, factorizer)?.valid);
            rec.route = Some(found.route);
            rec.certificate = Some(found.certificate);
        }
        Ok(())
    };
    if let Err(e) = run() {
        rec.error = Some(e.to_string());
    }
    rec
}

fn keep(r: &ScanRecord, opts: &ScanOptions) -> bool {
    !opts.sieve_failures_only || (r.admissible && r.sieve != Some(true))
}

/// Runs every prime power in `[lo, hi]` through admissibility, the sieve and
/// (optionally) the explicit search, calling `sink` on each kept record in
/// increasing order of `q`. The output does not depend on `opts.jobs`.
pub fn scan_each(
    lo: u64,
    hi: u64,
    opts: &ScanOptions,
    factorizer: &Factorizer,
    mut sink: impl FnMut(&ScanRecord) -> Result<()>,
) -> Result<ScanSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let qs = prime_powers_in(lo, hi);
    let mut summary = ScanSummary::default();
    for chunk in qs.chunks(CHUNK) {
        let records: Vec<ScanRecord> =
            pool.install(|| chunk.par_iter().map(|&q| scan_one(q, opts, factorizer)).collect());
        for r in &records {
            summary.add(r);
            if keep(r, opts) {
                sink(r)?;
            }
        }
    }
    Ok(summary)
}

/// [`scan_each`], collecting the kept records.
pub fn scan(lo: u64, hi: u64, opts: &ScanOptions, factorizer: &Factorizer) -> Result<(Vec<ScanRecord>, ScanSummary)> {
    let mut out = Vec::new();
    let summary = scan_each(lo, hi, opts, factorizer, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok((out, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range() {
        let f = Factorizer::new();
        let opts = ScanOptions { witness: true, ..Default::default() };
        let (recs, summary) = scan(2, 10, &opts, &f).unwrap();
        let adm: Vec<u64> = recs.iter().filter(|r| r.admissible).map(|r| r.q).collect();
        let inadm: Vec<u64> = recs.iter().filter(|r| !r.admissible).map(|r| r.q).collect();
        assert_eq!(adm, vec![3, 4, 5, 7, 9]);
        assert_eq!(inadm, vec![2, 8]);
        assert!(recs.iter().filter(|r| r.admissible).all(|r| r.verified == Some(true)));
        assert_eq!(summary.certificates, 5);
        assert!(scan(10, 2, &opts, &f).unwrap().0.is_empty());
    }
}
