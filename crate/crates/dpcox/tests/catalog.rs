//! Loading and verifying the bundled catalog, and rejecting corrupted cases.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

use dpcox::catalog::{
    bundled_catalog, load_catalog, verify_all, verify_case, verify_toric, CatalogCase,
};
use dpcox::coxdegrees::{count_combinations, euler_char, Classifier};
use dpcox::piclattice::anticanonical;
use dpcox::Error;

const BUNDLED: &str = include_str!("../data/catalog.json");

fn case(id: &str) -> CatalogCase {
    bundled_catalog().unwrap().case(id).unwrap().clone()
}

#[test]
fn ids_are_unique_and_counts_match() {
    let cat = bundled_catalog().unwrap();
    assert_eq!(cat.cases.len(), 36);
    assert_eq!(cat.toric.len(), 16);
    let ids: BTreeSet<_> = cat.cases.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids.len(), cat.cases.len());
    let degrees: Vec<u8> = cat.cases.iter().map(|c| c.degree).collect();
    assert!(degrees.windows(2).all(|w| w[0] >= w[1]));
    let parameterized = cat.cases.iter().filter(|c| c.lambda.is_some()).count();
    assert_eq!(parameterized, 10);
}

#[test]
fn every_case_passes_every_check() {
    let cat = bundled_catalog().unwrap();
    for r in verify_all(&cat.cases) {
        assert_eq!(r.checks.len(), 10, "{}", r.id);
        assert!(r.passed(), "{} failed {:?}", r.id, r.failed_checks());
    }
}

#[test]
fn both_parameter_values_pass() {
    let cat = bundled_catalog().unwrap();
    for c in cat.cases.iter().filter(|c| c.lambda.is_some()) {
        let suffix = format!("-l{}", c.lambda.unwrap());
        assert!(c.id.ends_with(&suffix), "{}", c.id);
        assert!(verify_case(c).passed(), "{}", c.id);
    }
}

#[test]
fn toric_entries_pass() {
    let cat = bundled_catalog().unwrap();
    let classifier = Classifier::default();
    for t in &cat.toric {
        let r = verify_toric(t, &classifier);
        assert!(r.passed, "{} {:?}", r.label, r.detail);
    }
}

#[test]
fn e6_cubic_and_e7_double_plane_pass_all_checks() {
    for id in ["d3-E6", "d2-E7"] {
        let r = verify_case(&case(id));
        assert_eq!(r.failed_checks(), Vec::<u8>::new(), "{id}");
    }
}

#[test]
fn swapped_relations_are_rejected() {
    let mut first = case("d3-D4-1");
    let mut second = case("d3-D4-2");
    assert_ne!(first.relation, second.relation);
    std::mem::swap(&mut first.relation, &mut second.relation);
    assert!(verify_case(&first).failed_checks().contains(&5));
    assert!(verify_case(&second).failed_checks().contains(&5));
}

#[test]
fn changed_coefficient_is_rejected() {
    let mut c = case("d3-E6");
    let mut terms: Vec<_> = c
        .relation
        .terms()
        .map(|(m, k)| (k.clone(), m.0.clone()))
        .collect();
    terms[0].0 += BigRational::one() + BigRational::one();
    c.relation = dpcox::Poly::from_terms(c.relation.arity(), terms).unwrap();
    assert!(verify_case(&c).failed_checks().contains(&5));
}

#[test]
fn anticanonical_monomials_count_sections_plus_relation_multiples() {
    for c in bundled_catalog().unwrap().cases {
        let gens = c.generator_classes();
        let k = anticanonical(c.relation_degree.context());
        let monomials = count_combinations(&k, &gens).unwrap() as i64;
        let multiples = count_combinations(&(&k - &c.relation_degree), &gens).unwrap() as i64;
        assert_eq!(monomials, euler_char(&k).unwrap() + multiples, "{}", c.id);
    }
}

#[test]
fn truncated_document_is_rejected() {
    let cut = &BUNDLED.as_bytes()[..BUNDLED.len() / 2];
    assert!(matches!(load_catalog(cut), Err(Error::Catalog { .. })));
    assert!(matches!(load_catalog(b""), Err(Error::Catalog { .. })));
}

#[test]
fn unknown_fields_are_reported_with_their_path() {
    let doc = BUNDLED.replacen("\"cycle\"", "\"cycel\"", 1);
    match load_catalog(doc.as_bytes()) {
        Err(Error::Catalog { path, message }) => {
            assert!(path.starts_with("toric[0]"), "{path}");
            assert!(message.contains("cycel"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
    let doc = BUNDLED.replacen("\"schema\": 1", "\"schema\": 2", 1);
    assert!(
        matches!(load_catalog(doc.as_bytes()), Err(Error::Catalog { path, .. }) if path == "schema")
    );
    let doc = BUNDLED.replacen("\"degree\": 9", "\"degree\": 12", 1);
    assert!(load_catalog(doc.as_bytes()).is_err());
}

#[test]
fn empty_catalog_loads() {
    let cat = load_catalog(br#"{"schema": 1, "toric": [], "cases": []}"#).unwrap();
    assert!(cat.cases.is_empty() && cat.toric.is_empty());
}
