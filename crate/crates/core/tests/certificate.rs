use proptest::prelude::*;

use knormal::ff::prime_powers_in;
use knormal::num_theory::Factorizer;
use knormal::search::{explicit_element, verify_certificate, Certificate};
use knormal::Error;

fn certificates() -> Vec<Certificate> {
    let f = Factorizer::new();
    prime_powers_in(3, 60)
        .into_iter()
        .filter(|q| q.admissible_n6())
        .map(|q| explicit_element(q, &f).unwrap().certificate)
        .collect()
}

#[test]
fn json_roundtrip() {
    let f = Factorizer::new();
    for cert in certificates() {
        let text = serde_json::to_string(&cert).unwrap();
        assert!(!text.contains('.'), "integers only: {text}");
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&back, &f).unwrap().valid);
    }
}

#[test]
fn structural_damage_is_malformed() {
    let f = Factorizer::new();
    let cert = explicit_element(knormal::PrimePower::new(9).unwrap(), &f).unwrap().certificate;
    let mut short = cert.clone();
    short.element.pop();
    assert!(matches!(verify_certificate(&short, &f), Err(Error::MalformedCertificate(_))));
    let mut digit = cert.clone();
    digit.element[0][0] = 3;
    assert!(matches!(verify_certificate(&digit, &f), Err(Error::MalformedCertificate(_))));
    let mut reducible = cert;
    reducible.modulus[0] = vec![0, 0];
    assert!(matches!(verify_certificate(&reducible, &f), Err(Error::MalformedCertificate(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Changing any one coordinate of the element breaks the certificate.
    #[test]
    fn tampering_is_detected(which in 0usize..9, coord in 0usize..6, delta in 1u64..100) {
        let f = Factorizer::new();
        let certs = certificates();
        let mut cert = certs[which % certs.len()].clone();
        let digits = &mut cert.element[coord];
        digits[0] = (digits[0] + delta % (cert.p - 1) + 1) % cert.p;
        match verify_certificate(&cert, &f) {
            Ok(v) => prop_assert!(!v.valid),
            Err(e) => prop_assert!(matches!(e, Error::MalformedCertificate(_))),
        }
    }
}
