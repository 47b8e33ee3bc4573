use num_bigint::BigInt;
use proptest::prelude::*;
use pvcoh::abelian::{GroupPresentation, LimitStatus};
use pvcoh::approximants::build_proper_sequence;
use pvcoh::koszul::{
    build_koszul_complex, chain_isomorphism, koszul_cohomology, torus_covariant_complex, CantorZdSystem,
};
use pvcoh::pv::pv_cohomology_hull;
use pvcoh::tiling::{cut_and_project_sample, substitution_sample, AlgebraicNumber, SubstitutionRule};
use pvcoh::Error;

mod common;

use common::kunneth;

fn fibonacci() -> CantorZdSystem {
    let s = substitution_sample(&SubstitutionRule::fibonacci(), 'a', 16, true).unwrap();
    CantorZdSystem::from_word(s.letters)
}

fn periodic(word: &str) -> CantorZdSystem {
    CantorZdSystem::from_word(word.repeat(400 / word.len() + 1).chars().collect())
}

fn groups(gs: &[GroupPresentation]) -> Vec<String> {
    gs.iter().map(|g| g.to_string()).collect()
}

#[test]
fn point_in_the_plane_is_a_torus() {
    let sys = CantorZdSystem::point(2);
    let k = build_koszul_complex(&sys, 2).unwrap();
    assert_eq!(k.ranks, vec![1, 2, 1]);
    let h = koszul_cohomology(&sys, 3).unwrap();
    assert_eq!(groups(&h.groups()), ["Z", "Z^2", "Z"]);
    assert!(h.degrees.iter().all(|d| d.status == LimitStatus::Stabilized));
}

#[test]
fn fibonacci_line_differential_is_shift_minus_identity() {
    let k = build_koszul_complex(&fibonacci(), 2).unwrap();
    // cylinders on words of length 3 and 4
    assert_eq!(k.ranks, vec![4, 5]);
    let d = &k.differentials[0];
    for r in 0..d.rows() {
        let row: BigInt = (0..d.cols()).map(|c| d[(r, c)].clone()).sum();
        assert_eq!(row, BigInt::from(0));
    }
    assert_eq!(groups(&k.cohomology().unwrap()), ["Z", "Z^2"]);
}

#[test]
fn fibonacci_line_agrees_with_the_pv_route() {
    let h = koszul_cohomology(&fibonacci(), 5).unwrap();
    assert_eq!(groups(&h.groups()), ["Z", "Z^2"]);
    assert!(h.degrees.iter().all(|d| d.status == LimitStatus::Stabilized));
    let seq = build_proper_sequence(&cut_and_project_sample(&AlgebraicNumber::golden(), 6000).unwrap(), 4).unwrap();
    let pv = pv_cohomology_hull(&seq).unwrap();
    assert_eq!(h.groups(), pv.groups());
}

#[test]
fn periodic_line_is_a_circle() {
    for w in ["a", "ab", "aab"] {
        let h = koszul_cohomology(&periodic(w), 4).unwrap();
        assert_eq!(groups(&h.groups()), ["Z", "Z"], "word {w}");
    }
}

#[test]
fn product_of_fibonacci_lines_matches_kunneth() {
    let line = fibonacci();
    let plane = CantorZdSystem::product(vec![line.clone(), line.clone()]);
    let h1 = koszul_cohomology(&line, 5).unwrap();
    let h2 = koszul_cohomology(&plane, 5).unwrap();
    for r in 2..=5 {
        assert_eq!(h2.level_groups[r], kunneth(&h1.level_groups[r], &h1.level_groups[r]), "resolution {r}");
    }
    assert_eq!(groups(&h2.groups()), ["Z", "Z^4", "Z^4"]);
}

#[test]
fn product_with_a_periodic_line() {
    let sys = CantorZdSystem::product(vec![fibonacci(), periodic("ab")]);
    let h = koszul_cohomology(&sys, 3).unwrap();
    assert_eq!(groups(&h.groups()), ["Z", "Z^3", "Z^2"]);
}

#[test]
fn torus_form_is_isomorphic() {
    for sys in [
        CantorZdSystem::point(3),
        fibonacci(),
        CantorZdSystem::product(vec![fibonacci(), periodic("aab"), fibonacci()]),
    ] {
        for r in 0..3 {
            let k = build_koszul_complex(&sys, r).unwrap();
            let t = torus_covariant_complex(&sys, r).unwrap();
            let p = chain_isomorphism(&k, &t).unwrap();
            for m in &p {
                assert_eq!(m.determinant().unwrap().magnitude(), &num_bigint::BigUint::from(1u32));
            }
            assert_eq!(k.cohomology().unwrap(), t.cohomology().unwrap());
        }
    }
}

fn checkerboard(side: usize) -> Vec<Vec<String>> {
    (0..2)
        .map(|phase| {
            (0..side)
                .map(|i| (0..side).map(|j| if (i + j + phase) % 2 == 0 { 'x' } else { 'o' }).collect())
                .collect()
        })
        .collect()
}

#[test]
fn explicit_checkerboard_is_a_torus() {
    let allowed: serde_json::Map<String, serde_json::Value> =
        (1..=5).map(|s| (s.to_string(), serde_json::json!(checkerboard(s)))).collect();
    let text = serde_json::json!({"d": 2, "alphabet": ["x", "o"], "allowed_patterns": allowed}).to_string();
    let sys = CantorZdSystem::parse(&text).unwrap();
    let h = koszul_cohomology(&sys, 3).unwrap();
    assert_eq!(groups(&h.groups()), ["Z", "Z^2", "Z"]);
    assert!(matches!(koszul_cohomology(&sys, 4), Err(Error::ResolutionUnavailable(_))));
}

#[test]
fn tiling_system_file() {
    let text = r#"{"from_tiling": {"type": "substitution", "rules": {"a": "ab", "b": "a"}, "seed": "a", "iterations": 14}, "d": 1}"#;
    match CantorZdSystem::parse(text) {
        Ok(sys) => assert_eq!(groups(&koszul_cohomology(&sys, 3).unwrap().groups()), ["Z", "Z^2"]),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn malformed_system_files() {
    for text in [
        "[]",
        r#"{"d": 1}"#,
        r#"{"d": 1, "alphabet": ["a"], "allowed_patterns": {"2": ["a"]}}"#,
        r#"{"d": 1, "alphabet": ["a", "b"], "allowed_patterns": {"2": ["ab"]}}"#,
        r#"{"d": 1, "alphabet": ["a"], "allowed_patterns": {"1": ["b"]}}"#,
        r#"{"d": 2, "alphabet": ["a"], "allowed_patterns": {"2": ["aa", "aa"]}}"#,
    ] {
        assert!(CantorZdSystem::parse(text).is_err(), "{text}");
    }
    assert!(koszul_cohomology(&CantorZdSystem::point(1), 1).is_err());
}

fn line_system() -> impl Strategy<Value = CantorZdSystem> {
    prop_oneof![
        "[ab]{1,5}".prop_map(|w| periodic(&w)),
        proptest::collection::vec(1i64..4, 2..12).prop_map(|digits| {
            let mut cf = vec![0];
            cf.extend(digits.iter().cycle().take(30));
            let s = cut_and_project_sample(&AlgebraicNumber::cf_prefix(&cf), 500).unwrap();
            CantorZdSystem::from_word(s.letters)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn differential_squares_to_zero(lines in proptest::collection::vec(line_system(), 1..=3), r in 0usize..2) {
        let sys = CantorZdSystem::product(lines);
        let k = build_koszul_complex(&sys, r).unwrap();
        k.check_square_zero().unwrap();
        for w in k.differentials.windows(2) {
            prop_assert!(w[1].mul(&w[0]).unwrap().is_zero());
        }
    }
}
