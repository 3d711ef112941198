//! Type enumeration, extended Dynkin diagrams and contraction sequences.

use std::collections::BTreeSet;

use dpcox::ade::{identify_ade, AdeLabel};
use dpcox::piclattice::{intersect, neg1_curves, DivisorClass};
use dpcox::typeenum::{
    blowdown_step, build_ext_dynkin, contract_type, contraction_sequence, enumerate_types,
    find_type, gram, verify_sequence, SurfaceType,
};

fn class(d: u8, c: &[i64]) -> DivisorClass {
    DivisorClass::new(d, c.to_vec()).unwrap()
}

fn label(s: &str) -> AdeLabel {
    s.parse().unwrap()
}

#[test]
fn type_counts_per_degree() {
    let expected = [
        (7u8, 2usize),
        (6, 6),
        (5, 7),
        (4, 16),
        (3, 21),
        (2, 46),
        (1, 74),
    ];
    for (d, n) in expected {
        assert_eq!(enumerate_types(d).unwrap().len(), n, "degree {d}");
    }
    assert!(enumerate_types(8).is_err());
    assert!(enumerate_types(0).is_err());
}

#[test]
fn invariants_are_complete_and_consistent() {
    for d in 1..=7u8 {
        let types = enumerate_types(d).unwrap();
        let keys: BTreeSet<_> = types.iter().map(SurfaceType::key).collect();
        assert_eq!(
            keys.len(),
            types.len(),
            "degree {d} has repeated invariants"
        );
        for t in &types {
            assert_eq!(identify_ade(&gram(&t.simple_twos)).as_ref(), Some(&t.ade));
            assert_eq!(t.num_lines, t.minus_ones.len());
            let ones = neg1_curves(t.context(), &t.simple_twos).unwrap();
            assert_eq!(ones.len(), t.num_lines);
            for (i, a) in t.simple_twos.iter().enumerate() {
                assert_eq!(a.self_int(), -2);
                for b in &t.simple_twos[i + 1..] {
                    assert!(matches!(intersect(a, b).unwrap(), 0 | 1));
                }
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    assert_eq!(enumerate_types(3).unwrap(), enumerate_types(3).unwrap());
    assert_eq!(enumerate_types(2).unwrap(), enumerate_types(2).unwrap());
}

#[test]
fn ambiguous_labels_need_line_counts() {
    let types = enumerate_types(4).unwrap();
    assert!(find_type(&types, &label("A3"), None).is_err());
    assert_eq!(
        find_type(&types, &label("A3"), Some(5)).unwrap().num_lines,
        5
    );
    assert_eq!(
        find_type(&types, &label("A3"), Some(4)).unwrap().num_lines,
        4
    );
    assert!(find_type(&types, &label("A3"), Some(3)).is_err());
    assert_eq!(find_type(&types, &label("D5"), None).unwrap().num_lines, 1);
}

#[test]
fn diagram_of_a1_with_three_lines() {
    let t = SurfaceType::from_twos(6, vec![class(6, &[1, -1, -1, -1])]).unwrap();
    assert_eq!(t.num_lines, 3);
    let diag = build_ext_dynkin(&t);
    assert_eq!(diag.vertices.len(), 4);
    assert_eq!(diag.vertices[0], (class(6, &[1, -1, -1, -1]), -2));
    for v in 1..4 {
        assert_eq!(diag.vertices[v].1, -1);
        assert_eq!(diag.edges[0][v], 1);
        for w in 1..4 {
            assert_eq!(diag.edges[v][w], 0);
        }
    }
}

#[test]
fn diagrams_match_intersections_everywhere() {
    for d in 1..=7u8 {
        for t in enumerate_types(d).unwrap() {
            let diag = build_ext_dynkin(&t);
            for (i, (c, s)) in diag.vertices.iter().enumerate() {
                assert_eq!(*s, c.self_int());
                for (j, (e, _)) in diag.vertices.iter().enumerate() {
                    let want = if i == j { 0 } else { c.dot(e) };
                    assert_eq!(diag.edges[i][j], want);
                }
            }
        }
    }
}

#[test]
fn ordinary_types_have_no_minus_two_vertices() {
    for d in 1..=7u8 {
        let t = &enumerate_types(d).unwrap()[0];
        assert!(t.ade.is_empty());
        assert!(build_ext_dynkin(t).vertices.iter().all(|v| v.1 == -1));
    }
}

#[test]
fn a4_in_degree_five_has_one_line_on_an_inner_vertex() {
    let types = enumerate_types(5).unwrap();
    let t = find_type(&types, &label("A4"), None).unwrap();
    let diag = build_ext_dynkin(&t);
    assert_eq!(diag.vertices.len(), 5);
    let degree = |v: usize| diag.edges[v].iter().filter(|&&m| m != 0).count();
    let line = 4;
    assert_eq!(diag.vertices[line].1, -1);
    assert_eq!(degree(line), 1);
    assert!(diag.edges.iter().flatten().all(|&m| m == 0 || m == 1));
    // The (-2)-curves form a chain and the line meets one of its two inner
    // vertices, as in the case data of the catalog.
    let chain_ends = (0..4)
        .filter(|&v| diag.edges[v][..4].iter().filter(|&&m| m != 0).count() == 1)
        .count();
    assert_eq!(chain_ends, 2);
    let neighbour = (0..4).find(|&v| diag.edges[line][v] == 1).unwrap();
    assert_eq!(
        diag.edges[neighbour][..4]
            .iter()
            .filter(|&&m| m != 0)
            .count(),
        2
    );
}

#[test]
fn blowdown_rules() {
    let t = SurfaceType::from_twos(6, vec![class(6, &[1, -1, -1, -1])]).unwrap();
    let diag = build_ext_dynkin(&t);
    let l3 = diag
        .vertices
        .iter()
        .position(|v| v.0 == class(6, &[0, 0, 0, 1]))
        .unwrap();
    let once = blowdown_step(&diag, l3).unwrap();
    assert_eq!(once.vertices[0].1, -1);
    let l2 = once
        .vertices
        .iter()
        .position(|v| v.0 == class(6, &[0, 0, 1, 0]))
        .unwrap();
    let twice = blowdown_step(&once, l2).unwrap();
    let l1 = twice
        .vertices
        .iter()
        .position(|v| v.0 == class(6, &[0, 1, 0, 0]))
        .unwrap();
    let thrice = blowdown_step(&twice, l1).unwrap();
    assert_eq!(thrice.vertices, vec![(class(6, &[1, -1, -1, -1]), 1)]);
    // A (-2)-vertex cannot be contracted.
    assert!(blowdown_step(&diag, 0).is_err());
    assert!(blowdown_step(&diag, 9).is_err());
}

#[test]
fn isolated_vertex_contraction_changes_nothing_else() {
    let t = SurfaceType::from_twos(7, vec![]).unwrap();
    let diag = build_ext_dynkin(&t);
    // In degree 7 the lines l1 and l2 are disjoint; the third meets both.
    let l1 = diag
        .vertices
        .iter()
        .position(|v| v.0 == class(7, &[0, 1, 0]))
        .unwrap();
    let l2 = diag
        .vertices
        .iter()
        .position(|v| v.0 == class(7, &[0, 0, 1]))
        .unwrap();
    assert_eq!(diag.edges[l1][l2], 0);
    let after = blowdown_step(&diag, l1).unwrap();
    let l2_after = after
        .vertices
        .iter()
        .find(|v| v.0 == class(7, &[0, 0, 1]))
        .unwrap();
    assert_eq!(l2_after.1, -1);
}

#[test]
fn blowdown_matches_lattice_of_contracted_type() {
    // After contracting a (-1)-curve, the diagram on the surviving negative
    // curves equals the diagram computed from the contracted type's classes.
    for d in 2..=6u8 {
        for t in enumerate_types(d).unwrap() {
            let diag = build_ext_dynkin(&t);
            let first_one = t.simple_twos.len();
            for e in first_one..diag.vertices.len() {
                let (target, _) = contract_type(&t, e).unwrap();
                let after = blowdown_step(&diag, e).unwrap();
                let mut selfs: Vec<i64> = after
                    .vertices
                    .iter()
                    .map(|v| v.1)
                    .filter(|&s| s < 0)
                    .collect();
                let mut want: Vec<i64> = target
                    .negative_curves()
                    .iter()
                    .map(|c| c.self_int())
                    .collect();
                selfs.sort();
                want.sort();
                assert_eq!(
                    selfs,
                    want,
                    "degree {d} type {} contracting {e}",
                    t.label(true)
                );
            }
        }
    }
}

#[test]
fn contraction_sequences_round_trip() {
    for d in 1..=7u8 {
        for t in enumerate_types(d).unwrap() {
            let seq = contraction_sequence(&t).unwrap();
            assert_eq!(seq.order.len(), 9 - d as usize);
            verify_sequence(&t, &seq).unwrap();
            for c in t.negative_curves() {
                assert_eq!(seq.from_new_basis(&seq.to_new_basis(&c)), c);
            }
        }
    }
}

#[test]
fn a1_with_three_lines_contracts_its_lines() {
    let t = SurfaceType::from_twos(6, vec![class(6, &[1, -1, -1, -1])]).unwrap();
    let seq = contraction_sequence(&t).unwrap();
    let diag = build_ext_dynkin(&t);
    let contracted: BTreeSet<_> = seq
        .order
        .iter()
        .map(|&v| diag.vertices[v].0.clone())
        .collect();
    let lines: BTreeSet<_> = t.minus_ones.iter().cloned().collect();
    assert_eq!(contracted, lines);
    // The (-2)-curve becomes a line of the plane through three contracted points.
    assert_eq!(seq.to_new_basis(&t.simple_twos[0])[0], 1);
}

#[test]
fn contracting_d6_in_degree_two_reaches_a5_in_degree_three() {
    let types = enumerate_types(2).unwrap();
    let t = find_type(&types, &label("D6"), None).unwrap();
    let targets: BTreeSet<String> = (t.simple_twos.len()..t.negative_curves().len())
        .map(|e| contract_type(&t, e).unwrap().0.label(true))
        .collect();
    assert!(targets.contains("A5:3"), "{targets:?}");
}
