use szpiro_core::certifier::{certify, recheck_k, CertifierConfig, MPrimes, SOUNDNESS_TOL};
use szpiro_core::io::{ingest_curves, CurveRecord};

fn corpus() -> Vec<CurveRecord> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus.tsv");
    ingest_curves(&path).unwrap()
}

#[test]
fn corpus_certificates() {
    for r in corpus() {
        let p = r.generator.unwrap();
        let cert = certify(&r.label, &r.model, &p, &CertifierConfig::default()).unwrap();
        let c = &cert.chain;
        assert!(cert.k.within_pigeonhole);
        assert!(c.positive && c.sound, "{}", r.label);
        assert!(cert.lower_bound.0 <= cert.h_hat.0 + SOUNDNESS_TOL);
        assert!(c.local_estimates.iter().all(|e| e.holds));
        assert!(c.split_consistent);
        assert!(c.j_integrality.as_ref().unwrap().holds);
        assert!(recheck_k(&r.model, &p, &cert).unwrap());

        assert!(c.all_hold(), "{}: {c:?}", r.label);
    }
}

#[test]
fn split_only_m_can_exceed_the_jensen_bound() {
    // D1 = 7^2 * 23 with 7 split and 23 not.
    let r = corpus().into_iter().find(|r| r.label == "[0,-1,0,2,-7]").unwrap();
    let p = r.generator.unwrap();
    let split = CertifierConfig { m_primes: MPrimes::SplitMultiplicative, ..CertifierConfig::default() };
    let cert = certify(&r.label, &r.model, &p, &split).unwrap();
    assert_eq!(cert.m, 7);
    assert!(!cert.chain.jensen_holds);
    assert!(cert.chain.positive && cert.chain.sound);
    let cert = certify(&r.label, &r.model, &p, &CertifierConfig::default()).unwrap();
    assert_eq!(cert.m, 3);
    assert!(cert.chain.all_hold());
}

#[test]
fn every_place_recovers_the_height() {
    let r = &corpus()[0];
    let config = CertifierConfig { include_good_places: true, ..CertifierConfig::default() };
    let cert = certify(&r.label, &r.model, r.generator.as_ref().unwrap(), &config).unwrap();
    assert!((cert.lower_bound.0 - cert.h_hat.0).abs() < 1e-9);
}
