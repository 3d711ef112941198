//! Polynomial arithmetic, principal-ideal division, ideal membership, gradings
//! and birational maps, checked on small hand examples and catalog data.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use dpcox::catalog::bundled_catalog;
use dpcox::piclattice::{DivisorClass, LatticeContext};
use dpcox::polyverify::{
    exact_divide, graded_degree, groebner_reduce, roundtrip_check, AmbientSpace, GradedRing,
    MultiPoly, RationalMap,
};
use dpcox::{Error, Poly};

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn poly(arity: usize, terms: &[(i64, &[u32])]) -> Poly {
    Poly::from_terms(arity, terms.iter().map(|(c, e)| (q(*c), e.to_vec()))).unwrap()
}

/// Integer polynomials as exponent-to-coefficient maps, with schoolbook
/// multiplication. Used as an independent oracle.
type Naive = BTreeMap<Vec<u32>, i64>;

fn naive_mul(a: &Naive, b: &Naive) -> Naive {
    let mut out = Naive::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn naive_pow(a: &Naive, n: u32, arity: usize) -> Naive {
    let mut out = Naive::from([(vec![0; arity], 1)]);
    for _ in 0..n {
        out = naive_mul(&out, a);
    }
    out
}

/// Substitutes `images` for the variables of `f`.
fn naive_substitute(f: &Naive, images: &[Naive], arity: usize) -> Naive {
    let mut out = Naive::new();
    for (e, c) in f {
        let mut term = Naive::from([(vec![0; arity], *c)]);
        for (i, &k) in e.iter().enumerate() {
            term = naive_mul(&term, &naive_pow(&images[i], k, arity));
        }
        for (m, x) in term {
            *out.entry(m).or_insert(0) += x;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn to_naive(p: &Poly) -> Naive {
    p.terms()
        .map(|(m, c)| {
            assert!(c.is_integer());
            (m.0.clone(), i64::try_from(c.to_integer()).unwrap())
        })
        .collect()
}

#[test]
fn small_divisions() {
    let x2_y2 = poly(2, &[(1, &[2, 0]), (-1, &[0, 2])]);
    let x_plus_y = poly(2, &[(1, &[1, 0]), (1, &[0, 1])]);
    let x_minus_y = poly(2, &[(1, &[1, 0]), (-1, &[0, 1])]);
    assert_eq!(exact_divide(&x2_y2, &x_plus_y).unwrap(), x_minus_y);

    let x_plus_1 = poly(1, &[(1, &[1]), (1, &[0])]);
    let x = poly(1, &[(1, &[1])]);
    assert_eq!(exact_divide(&x_plus_1, &x), Err(Error::NotDivisible));
    assert!(matches!(
        exact_divide(&x, &Poly::zero(1)),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        exact_divide(&x, &x2_y2),
        Err(Error::ArityMismatch { .. })
    ));
}

#[test]
fn small_reductions() {
    let x = poly(2, &[(1, &[1, 0])]);
    let y = poly(2, &[(1, &[0, 1])]);
    let x2 = poly(2, &[(1, &[2, 0])]);
    assert!(groebner_reduce(&x2, std::slice::from_ref(&x))
        .unwrap()
        .is_zero());
    assert_eq!(groebner_reduce(&y, std::slice::from_ref(&x)).unwrap(), y);
}

#[test]
fn cubic_with_e6_point_pulls_back_to_a_monomial_multiple() {
    let cat = bundled_catalog().unwrap();
    let case = cat.case("d3-E6").unwrap();
    let f = &case.equations[0];
    let pulled = f.substitute(&case.pullback).unwrap();
    let quotient = exact_divide(&pulled, &case.relation).unwrap();

    // Oracle: expand the pullback and the candidate product independently.
    let expected = [4u32, 6, 8, 6, 9, 12, 3, 0, 0, 0];
    let arity = case.pullback[0].arity();
    let images: Vec<Naive> = case.pullback.iter().map(to_naive).collect();
    let lhs = naive_substitute(&to_naive(f), &images, arity);
    let rhs = naive_mul(
        &to_naive(&case.relation),
        &Naive::from([(expected.to_vec(), 1)]),
    );
    assert_eq!(lhs, rhs);

    assert!(quotient.is_monomial());
    assert_eq!(quotient, poly(arity, &[(1, &expected)]));
}

#[test]
fn line_locus_contains_the_quartic_del_pezzo_surface() {
    // Equations x0 x1 - x2^2 and x3^2 + x0 x4 + x1 x2, line x0 = x2 = x3 = 0.
    let eqs = [
        poly(5, &[(1, &[1, 1, 0, 0, 0]), (-1, &[0, 0, 2, 0, 0])]),
        poly(
            5,
            &[
                (1, &[0, 0, 0, 2, 0]),
                (1, &[1, 0, 0, 0, 1]),
                (1, &[0, 1, 1, 0, 0]),
            ],
        ),
    ];
    let line = [
        poly(5, &[(1, &[1, 0, 0, 0, 0])]),
        poly(5, &[(1, &[0, 0, 1, 0, 0])]),
        poly(5, &[(1, &[0, 0, 0, 1, 0])]),
    ];
    for f in &eqs {
        assert!(groebner_reduce(f, &line).unwrap().is_zero());
    }
    // The same equations as in the catalog entry, whose sixth generator has this locus.
    let cat = bundled_catalog().unwrap();
    let case = cat.case("d4-D5").unwrap();
    assert_eq!(case.equations, eqs.to_vec());
    assert_eq!(case.generators[5].locus.as_deref(), Some(&line[..]));
    // A point off the line is not contained: x1 does not vanish on it.
    assert!(!groebner_reduce(&poly(5, &[(1, &[0, 1, 0, 0, 0])]), &line)
        .unwrap()
        .is_zero());
}

#[test]
fn inverse_of_the_e7_double_plane() {
    let psi_components = vec![
        poly(3, &[(1, &[1, 5, 0])]),
        poly(3, &[(1, &[0, 3, 0])]),
        poly(3, &[(1, &[0, 2, 1])]),
        poly(3, &[(-1, &[2, 1, 0]), (-1, &[0, 0, 3])]),
    ];
    let f = poly(
        4,
        &[(1, &[2, 0, 0, 0]), (1, &[0, 1, 3, 0]), (1, &[0, 3, 0, 1])],
    );
    assert!(f.substitute(&psi_components).unwrap().is_zero());

    let space = AmbientSpace::for_degree(2).unwrap();
    let phi_components = vec![
        poly(4, &[(1, &[1, 0, 0, 0])]),
        poly(4, &[(1, &[0, 2, 0, 0])]),
        poly(4, &[(1, &[0, 1, 1, 0])]),
    ];
    let phi = RationalMap::new(space.clone(), AmbientSpace::plane(), phi_components).unwrap();
    let psi = RationalMap::new(AmbientSpace::plane(), space, psi_components).unwrap();
    assert_eq!(
        roundtrip_check(std::slice::from_ref(&f), &phi, &psi).unwrap(),
        None
    );

    let comp = phi.compose(&psi).unwrap();
    let y1_5 = poly(3, &[(1, &[0, 5, 0])]);
    for (i, c) in comp.iter().enumerate() {
        let yi = MultiPoly::var(3, i);
        assert_eq!(*c, &y1_5 * &yi);
    }

    let cat = bundled_catalog().unwrap();
    let case = cat.case("d2-E7").unwrap();
    assert_eq!(case.equations, vec![f]);
    assert_eq!(case.inverse.as_ref().unwrap(), &psi.components);
}

#[test]
fn identity_of_the_plane_round_trips() {
    let id: Vec<Poly> = (0..3).map(|i| MultiPoly::var(3, i)).collect();
    let map = RationalMap::new(AmbientSpace::plane(), AmbientSpace::plane(), id).unwrap();
    assert_eq!(roundtrip_check(&[], &map, &map).unwrap(), None);
}

fn a1_ring() -> GradedRing {
    let ctx = LatticeContext::new(6).unwrap();
    let degrees = [
        [1, -1, -1, -1],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, -1, 0, 0],
        [1, 0, -1, 0],
        [1, 0, 0, -1],
    ]
    .iter()
    .map(|c| DivisorClass::new(6, c.to_vec()).unwrap())
    .collect();
    GradedRing::new(ctx, degrees).unwrap()
}

#[test]
fn graded_degrees() {
    let ring = a1_ring();
    let l0 = DivisorClass::new(6, vec![1, 0, 0, 0]).unwrap();
    assert_eq!(
        graded_degree(&poly(7, &[(1, &[0, 1, 0, 0, 1, 0, 0])]), &ring).unwrap(),
        l0
    );
    let rel = poly(
        7,
        &[
            (1, &[0, 1, 0, 0, 1, 0, 0]),
            (1, &[0, 0, 1, 0, 0, 1, 0]),
            (1, &[0, 0, 0, 1, 0, 0, 1]),
        ],
    );
    assert_eq!(graded_degree(&rel, &ring).unwrap(), l0);
    assert!(graded_degree(&poly(7, &[(3, &[0; 7])]), &ring)
        .unwrap()
        .is_zero());
    let mixed = poly(
        7,
        &[(1, &[0, 1, 0, 0, 1, 0, 0]), (1, &[0, 1, 0, 0, 0, 0, 0])],
    );
    assert!(matches!(
        graded_degree(&mixed, &ring),
        Err(Error::NotHomogeneous(_))
    ));
    assert!(matches!(
        graded_degree(&poly(3, &[(1, &[1, 0, 0])]), &ring),
        Err(Error::ArityMismatch { .. })
    ));
}

#[test]
fn arithmetic_over_floating_point() {
    let p = MultiPoly::<f64>::from_terms(2, [(1.0, vec![2, 0]), (-1.0, vec![0, 2])]).unwrap();
    let r = MultiPoly::<f64>::from_terms(2, [(1.0, vec![1, 0]), (-1.0, vec![0, 1])]).unwrap();
    let quo = exact_divide(&p, &r).unwrap();
    assert_eq!(
        quo,
        MultiPoly::from_terms(2, [(1.0, vec![1, 0]), (1.0, vec![0, 1])]).unwrap()
    );
}

fn arb_poly(arity: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (-6i64..=6, prop::collection::vec(0..=max_deg, arity)),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let terms = terms.into_iter().map(|(c, mut e)| {
            // Keep total degree within the bound.
            while e.iter().sum::<u32>() > max_deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            (q(c), e)
        });
        Poly::from_terms(arity, terms).unwrap()
    })
}

fn arb_pair() -> impl Strategy<Value = (Poly, Poly)> {
    (1usize..=6).prop_flat_map(|n| (arb_poly(n, 4, 4), arb_poly(n, 3, 4)))
}

fn arb_homogeneous() -> impl Strategy<Value = (Poly, Poly)> {
    // Monomials of the A1 ring; sums of them are homogeneous only by luck, so
    // single terms times a common random monomial are used.
    let mono = prop::collection::vec(0u32..=3, 7);
    (mono.clone(), mono, -5i64..=5, -5i64..=5).prop_map(|(a, b, ca, cb)| {
        let ca = if ca == 0 { 1 } else { ca };
        let cb = if cb == 0 { 1 } else { cb };
        (poly(7, &[(ca, &a)]), poly(7, &[(cb, &b)]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn division_round_trips((quot, div) in arb_pair()) {
        prop_assume!(!div.is_zero());
        let prod = &quot * &div;
        prop_assert_eq!(exact_divide(&prod, &div).unwrap(), quot);
    }

    #[test]
    fn division_agrees_with_reduction((f, div) in arb_pair()) {
        prop_assume!(!div.is_zero());
        let member = groebner_reduce(&f, std::slice::from_ref(&div)).unwrap().is_zero();
        prop_assert_eq!(exact_divide(&f, &div).is_ok(), member);
    }

    #[test]
    fn graded_degree_is_additive((a, b) in arb_homogeneous()) {
        let ring = a1_ring();
        let da = graded_degree(&a, &ring).unwrap();
        let db = graded_degree(&b, &ring).unwrap();
        prop_assert_eq!(graded_degree(&(&a * &b), &ring).unwrap(), &da + &db);
    }
}
