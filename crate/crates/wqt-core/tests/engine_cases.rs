mod common;

use std::collections::BTreeSet;

use common::{eval_qt, interpolating_middle, lambda1, lambda2, lambda3, m, rd, run, EXAMPLE1_START};
use wqt_core::cartan::RootData;
use wqt_core::coeff::{rat, Rat};
use wqt_core::engine::{
    expand, CapKind, Defect, EngineError, ExpansionConfig, FieldExpansion, Status,
};
use wqt_core::monomial::{Monomial, Spectral};

#[test]
fn sl2_fundamental_field() {
    let fe = run("A1", "Y[1](q^0 t^0)");
    assert_eq!(fe.status(), Status::Completed);
    assert_eq!(fe.len(), 2);
    let set: BTreeSet<Monomial> = fe.monomials().cloned().collect();
    let expected: BTreeSet<Monomial> = [m("Y[1](q^0 t^0)"), m("Y[1](q^-2 t^2)^-1")]
        .into_iter()
        .collect();
    assert_eq!(set, expected);
    assert!(fe.entries().iter().all(|e| e.coeff.is_one()));
    assert_eq!(fe.edges().len(), 1);
    let e = fe.edges()[0];
    assert_eq!((e.from, e.to, e.node), (0, 1, 1));
    assert_eq!(e.color, Spectral::new(0, -1, 1));
}

#[test]
fn interpolating_field_has_three_monomials() {
    let fe = run("A1", "Y[1](q^0 t^0) * Y[1](q^-2 t^0)");
    assert_eq!(fe.status(), Status::Completed);
    assert_eq!(fe.len(), 3);
    assert_eq!(fe.edges().len(), 2);

    let middle = fe.get(&m("Y[1](q^0 t^0) * Y[1](q^-4 t^2)^-1")).unwrap();
    assert_eq!(middle.height, 1);
    assert!(middle.coeff.equals(&interpolating_middle(), 0));

    let last = fe.get(&m("Y[1](q^-2 t^2)^-1 * Y[1](q^-4 t^2)^-1")).unwrap();
    assert_eq!(last.height, 2);
    assert!(last.monomial.is_antidominant());
    assert!(last.coeff.is_one());
}

#[test]
fn three_variable_field_matches_closed_forms() {
    let fe = run("A1", EXAMPLE1_START);
    assert_eq!(fe.status(), Status::Completed);
    assert_eq!(fe.len(), 5);

    let mut values: Vec<Rat> = fe
        .entries()
        .iter()
        .map(|e| eval_qt(&e.coeff, (2, 1), (3, 1)))
        .collect();
    values.sort();
    let mut expected = vec![
        rat(1, 1),
        rat(1, 1),
        rat(-143, 49),
        rat(323, 539),
        rat(-1250, 539),
    ];
    expected.sort();
    assert_eq!(values, expected);

    let coeff_of = |text: &str| fe.get(&m(text)).expect(text).coeff.clone();
    assert!(coeff_of(EXAMPLE1_START).is_one());
    // the q^4 t^2 binomial pairs with the q-side move, the q^2 t^4 one
    // with the t-side move
    assert!(coeff_of("Y[1](q^0 t^0) * Y[1](q^-2 t^0) * Y[1](q^-2 t^4)^-1")
        .equals(&lambda2(), 0));
    assert!(coeff_of("Y[1](q^0 t^0) * Y[1](q^-4 t^2)^-1 * Y[1](q^0 t^2)")
        .equals(&lambda1(), 0));
    assert!(coeff_of("Y[1](q^0 t^0) * Y[1](q^-4 t^2)^-1 * Y[1](q^-2 t^4)^-1")
        .equals(&lambda3(), 0));

    let anti = m("Y[1](q^-2 t^2)^-1 * Y[1](q^-4 t^2)^-1 * Y[1](q^-2 t^4)^-1");
    assert!(anti.is_antidominant());
    assert!(coeff_of(&anti.to_string()).is_one());
}

#[test]
fn d4_from_the_fork_node_fails_with_exact_witnesses() {
    let fe = run("D4", "Y[2](q^0 t^0)");
    assert_eq!(fe.status(), Status::Failed);
    assert_eq!(fe.len(), 12);
    assert_eq!(fe.edges().len(), 16);

    let witnesses: BTreeSet<(Monomial, Defect)> = fe.witnesses().iter().cloned().collect();
    let expected: BTreeSet<(Monomial, Defect)> = [
        (
            m("Y[1](q^-1 t^1) * Y[1](q^-3 t^3) * Y[2](q^-4 t^4)^-1"),
            Defect::NonRegular,
        ),
        (
            m("Y[2](q^-4 t^4)^-1 * Y[3](q^-1 t^1) * Y[3](q^-3 t^3)"),
            Defect::NonRegular,
        ),
        (
            m("Y[2](q^-4 t^4)^-1 * Y[4](q^-1 t^1) * Y[4](q^-3 t^3)"),
            Defect::NonRegular,
        ),
        (
            m("Y[1](q^-3 t^3)^-1 * Y[2](q^-2 t^2)^2 * Y[3](q^-3 t^3)^-1 * Y[4](q^-3 t^3)^-1"),
            Defect::NonGeneric,
        ),
    ]
    .into_iter()
    .collect();
    assert_eq!(witnesses, expected);

    // every witness sits at the failing level, which is kept in the table
    for (w, _) in fe.witnesses() {
        assert_eq!(fe.get(w).unwrap().height, 4);
    }
}

#[test]
fn a_chain_rank4_runs_down_the_diagram() {
    let fe = run("A4", "Y[1](q^0 t^0)");
    assert_eq!(fe.status(), Status::Completed);
    let set: BTreeSet<Monomial> = fe.monomials().cloned().collect();
    let expected: BTreeSet<Monomial> = [
        "Y[1](q^0 t^0)",
        "Y[1](q^-2 t^2)^-1 * Y[2](q^-1 t^1)",
        "Y[2](q^-3 t^3)^-1 * Y[3](q^-2 t^2)",
        "Y[3](q^-4 t^4)^-1 * Y[4](q^-3 t^3)",
        "Y[4](q^-5 t^5)^-1",
    ]
    .into_iter()
    .map(m)
    .collect();
    assert_eq!(set, expected);
    assert_eq!(fe.edges().len(), 4);
    assert!(fe.entries().iter().all(|e| e.coeff.is_one()));
    let heights: Vec<u32> = fe.entries().iter().map(|e| e.height).collect();
    assert_eq!(heights, vec![0, 1, 2, 3, 4]);
}

#[test]
fn diamond_field_joins_two_paths() {
    let fe = run("A1", "Y[1](q^0 t^0) * Y[1](q^-2 t^5)");
    assert_eq!(fe.status(), Status::Completed);
    assert_eq!(fe.len(), 4);
    assert_eq!(fe.edges().len(), 4);

    let mut colors: Vec<(usize, Spectral)> =
        fe.edges().iter().map(|e| (e.node, e.color)).collect();
    colors.sort();
    assert_eq!(
        colors,
        vec![
            (1, Spectral::new(0, -3, 6)),
            (1, Spectral::new(0, -3, 6)),
            (1, Spectral::new(0, -1, 1)),
            (1, Spectral::new(0, -1, 1)),
        ]
    );

    let bottom = m("Y[1](q^-2 t^2)^-1 * Y[1](q^-4 t^7)^-1");
    let pos = fe.position(&bottom).unwrap();
    let parents = fe.edges().iter().filter(|e| e.to == pos).count();
    assert_eq!(parents, 2);
}

#[test]
fn orbits_stay_independent_and_mix_in_coefficients() {
    let fe = run("A1", "Y[1](q^0 t^0) * Y[1](q^0 t^0, u_1)");
    assert_eq!(fe.status(), Status::Completed);
    assert_eq!(fe.len(), 4);

    // cross-orbit steps pick up u-dependent binomials
    let carries_orbit = |e: &wqt_core::engine::TableEntry| {
        !e.coeff.orbit_pref().is_empty()
            || e.coeff
                .num_factors()
                .iter()
                .chain(e.coeff.den_factors())
                .any(|f| !f.kappa.is_empty())
    };
    assert!(fe.entries().iter().any(carries_orbit));

    let report = wqt_core::verifier::verify_cancellation(&fe, 0).unwrap();
    assert!(report.is_certified());
}

#[test]
fn preconditions_are_enforced() {
    let rd_a1 = rd("A1");
    let cfg = ExpansionConfig::default();

    let not_dominant = m("Y[1](q^0 t^0)^-1");
    assert!(matches!(
        expand(&rd_a1, &not_dominant, &cfg),
        Err(EngineError::Precondition(_))
    ));

    let not_generic = m("Y[1](q^0 t^0)^2");
    assert!(matches!(
        expand(&rd_a1, &not_generic, &cfg),
        Err(EngineError::Precondition(_))
    ));

    // dominant and generic, but the diagonal square condition fails
    let not_regular = m("Y[1](q^0 t^0) * Y[1](q^-2 t^2)");
    assert!(!not_regular.is_regular(&rd_a1));
    assert!(matches!(
        expand(&rd_a1, &not_regular, &cfg),
        Err(EngineError::Precondition(_))
    ));

    let out_of_range = m("Y[3](q^0 t^0)");
    assert!(matches!(
        expand(&rd_a1, &out_of_range, &cfg),
        Err(EngineError::Precondition(_))
    ));
}

#[test]
fn caps_convert_long_runs_into_truncation() {
    let rd_a1 = rd("A1");
    let start = m("Y[1](q^0 t^0) * Y[1](q^-2 t^0)");

    let capped_height = ExpansionConfig {
        max_height: 1,
        ..ExpansionConfig::default()
    };
    let fe = expand(&rd_a1, &start, &capped_height).unwrap();
    assert_eq!(fe.status(), Status::Truncated(CapKind::Height));
    assert_eq!(fe.len(), 2);

    let capped_size = ExpansionConfig {
        max_monomials: 2,
        ..ExpansionConfig::default()
    };
    let fe = expand(&rd_a1, &start, &capped_size).unwrap();
    assert_eq!(fe.status(), Status::Truncated(CapKind::Monomials));
    assert_eq!(fe.len(), 2);
}

fn criterion_suite() -> Vec<(String, String)> {
    let mut cases: Vec<(String, String)> = Vec::new();
    let fundamental = |token: &str, node: usize| {
        (token.to_string(), format!("Y[{}](q^0 t^0)", node))
    };
    for l in 1..=4usize {
        for i in 1..=l {
            cases.push(fundamental(&format!("A{}", l), i));
        }
    }
    for l in 2..=3usize {
        for i in 1..=l {
            cases.push(fundamental(&format!("B{}", l), i));
            cases.push(fundamental(&format!("C{}", l), i));
        }
    }
    for i in [1, 3, 4] {
        cases.push(fundamental("D4", i));
    }
    for i in [1, 2] {
        cases.push(fundamental("G2", i));
    }
    cases.push(("A1".into(), EXAMPLE1_START.into()));
    cases.push(("A1".into(), "Y[1](q^0 t^0) * Y[1](q^-2 t^0)".into()));
    cases.push(("A1".into(), "Y[1](q^0 t^0) * Y[1](q^-2 t^5)".into()));
    cases.push(("A1".into(), "Y[1](q^0 t^0) * Y[1](q^0 t^0, u_1)".into()));
    cases
}

fn check_height_stratification(fe: &FieldExpansion) {
    for e in fe.edges() {
        assert_eq!(
            fe.entries()[e.to].height,
            fe.entries()[e.from].height + 1,
            "edge {} -> {} skips a level",
            e.from,
            e.to
        );
    }
}

fn check_sinks(rd: &RootData, fe: &FieldExpansion, fundamental: bool) {
    let mut outdeg = vec![0usize; fe.len()];
    for e in fe.edges() {
        outdeg[e.from] += 1;
    }
    let mut sinks = 0;
    for (k, entry) in fe.entries().iter().enumerate() {
        let movable = !entry.monomial.admissible_variables(rd).is_empty();
        assert_eq!(outdeg[k] > 0, movable, "sink mismatch at {}", entry.monomial);
        if outdeg[k] == 0 {
            sinks += 1;
            assert!(
                entry.monomial.is_antidominant(),
                "sink {} is not antidominant",
                entry.monomial
            );
        }
    }
    if fundamental {
        assert_eq!(sinks, 1);
    }
}

fn check_reverse_edges(rd: &RootData, fe: &FieldExpansion) {
    for (k, entry) in fe.entries().iter().enumerate() {
        let x = &entry.monomial;
        for (i, a, e) in x.entries() {
            if e != -1 {
                continue;
            }
            let s = 2 * rd.r_of(i);
            if x.degree(i, a.shifted(s, 0)) == -1 || x.degree(i, a.shifted(0, -2)) == -1 {
                continue;
            }
            let color = a.shifted(rd.r_of(i), -1);
            assert!(
                fe.edges()
                    .iter()
                    .any(|ed| ed.to == k && ed.node == i && ed.color == color),
                "no incoming edge into {} colored ({}, {})",
                x,
                i,
                color
            );
        }
    }
}

fn check_regularity_equivalence(rd: &RootData, fe: &FieldExpansion) {
    for entry in fe.entries() {
        assert!(entry.monomial.is_generic());
        assert!(entry.monomial.is_regular(rd));
        assert!(entry.monomial.condition_r(rd));
    }
}

#[test]
fn completed_runs_satisfy_the_graph_invariants() {
    for (token, start) in criterion_suite() {
        let rd = rd(&token);
        let fe = expand(&rd, &m(&start), &ExpansionConfig::default()).unwrap();
        assert_eq!(fe.status(), Status::Completed, "{} from {}", token, start);
        let fundamental = m(&start).len() == 1;
        check_height_stratification(&fe);
        check_sinks(&rd, &fe, fundamental);
        check_reverse_edges(&rd, &fe);
        check_regularity_equivalence(&rd, &fe);
    }
}

#[test]
fn defect_witnesses_fail_the_square_condition_too() {
    let rd_d4 = rd("D4");
    let fe = run("D4", "Y[2](q^0 t^0)");
    for (w, defect) in fe.witnesses() {
        match defect {
            Defect::NonRegular => {
                assert!(w.is_generic());
                assert!(!w.is_regular(&rd_d4));
                assert!(!w.condition_r(&rd_d4));
            }
            Defect::NonGeneric => assert!(!w.is_generic()),
        }
    }
}

#[test]
fn reruns_are_deterministic() {
    let first = run("A4", "Y[1](q^0 t^0) * Y[2](q^-9 t^3)");
    let second = run("A4", "Y[1](q^0 t^0) * Y[2](q^-9 t^3)");
    assert_eq!(first.status(), second.status());
    assert_eq!(first.entries(), second.entries());
    assert_eq!(first.edges(), second.edges());
}

#[test]
fn exceptional_one_column_nodes_complete() {
    // large minuscule and short-node cases; generous caps, still fast
    for (token, node) in [("E6", 1), ("E6", 6), ("F4", 4)] {
        let fe = run(token, &format!("Y[{}](q^0 t^0)", node));
        assert_eq!(fe.status(), Status::Completed, "{} node {}", token, node);
    }
}
