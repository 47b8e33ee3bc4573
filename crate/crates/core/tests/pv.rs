use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use pvcoh::abelian::{IntMatrix, LimitStatus};
use pvcoh::approximants::{build_prototile_space, build_proper_sequence, projection_map};
use pvcoh::delta_complex::{simplicial_cohomology, CellularMap, DeltaComplex};
use pvcoh::pv::{
    cantor_circle_h1_rank, cantor_circle_normal_form, check_pv_square_zero, check_rho_chain_map,
    check_theta_partial_isometries, check_theta_ranges, discrete_transversal, frequency_module,
    pv_cohomology_hull, pv_cohomology_level, pv_differential, theta_matrix, CantorCircleFunction,
    DiscreteTransversal,
};
use pvcoh::tiling::{
    cut_and_project_sample, enumerate_patterns, substitution_sample, AlgebraicNumber, SubstitutionRule,
};
use pvcoh::Error;

fn names(gs: &[pvcoh::abelian::GroupPresentation]) -> Vec<String> {
    gs.iter().map(|g| g.to_string()).collect()
}

#[test]
fn base_over_itself_has_one_atom_per_simplex() {
    let k = DeltaComplex::wedge_of_circles(2);
    let dt = discrete_transversal(&k, &k, Some(&CellularMap::identity(&k))).unwrap();
    assert_eq!(dt.atom_counts(), vec![1, 2]);
    for sigma in 0..2 {
        for i in 0..2 {
            let t = theta_matrix(&dt, 1, sigma, i).unwrap().matrix;
            assert_eq!(t, IntMatrix::identity(1));
            assert_eq!(t.mul(&t.transpose()).unwrap(), IntMatrix::identity(1));
        }
    }
    assert!(pv_differential(&dt, 1).unwrap().is_zero());
    assert_eq!(names(&pv_cohomology_level(&dt).unwrap()), ["Z", "Z^2"]);
}

#[test]
fn missing_map_and_bad_faces() {
    let k = DeltaComplex::wedge_of_circles(1);
    assert_eq!(discrete_transversal(&k, &k, None).unwrap_err(), Error::MissingConnectingMap);
    let dt = discrete_transversal(&k, &k, Some(&CellularMap::identity(&k))).unwrap();
    assert!(matches!(theta_matrix(&dt, 1, 0, 2), Err(Error::FaceOutOfRange { .. })));
    assert!(matches!(pv_differential(&dt, 2), Err(Error::DegreeOutOfRange { .. })));
}

#[test]
fn collared_fibonacci_transversal() {
    let s = substitution_sample(&SubstitutionRule::fibonacci(), 'a', 16, true).unwrap();
    let b0 = build_prototile_space(&s, false).unwrap();
    let b1 = build_prototile_space(&s, true).unwrap();
    let f = projection_map(&b1, &b0).unwrap();
    let dt = discrete_transversal(&b1.complex, &b0.complex, Some(&f)).unwrap();
    assert_eq!(dt.atom_counts()[1], enumerate_patterns(&s, 1, true).unwrap().len());
    assert_eq!(dt.atom_counts(), b1.complex.counts());
    check_theta_ranges(&dt).unwrap();
    check_rho_chain_map(&dt).unwrap();
    check_pv_square_zero(&dt).unwrap();
    assert_eq!(pv_cohomology_level(&dt).unwrap(), simplicial_cohomology(&b1.complex).unwrap());
}

#[test]
fn periodic_level_is_a_circle() {
    let k = DeltaComplex::wedge_of_circles(1);
    let dt = discrete_transversal(&k, &k, Some(&CellularMap::identity(&k))).unwrap();
    assert_eq!(names(&pv_cohomology_level(&dt).unwrap()), ["Z", "Z"]);
}

#[test]
fn golden_and_silver_hulls() {
    for alpha in [AlgebraicNumber::golden(), AlgebraicNumber::silver()] {
        let s = cut_and_project_sample(&alpha, 6000).unwrap();
        let seq = build_proper_sequence(&s, 4).unwrap();
        for l in 0..seq.len() {
            let dt = DiscreteTransversal::of_sequence(&seq, l).unwrap();
            check_theta_ranges(&dt).unwrap();
            check_rho_chain_map(&dt).unwrap();
            check_pv_square_zero(&dt).unwrap();
            assert_eq!(
                pv_cohomology_level(&dt).unwrap(),
                simplicial_cohomology(&seq.levels[l].complex).unwrap()
            );
            if l > 0 {
                let coarse = DiscreteTransversal::of_sequence(&seq, l - 1).unwrap();
                check_theta_partial_isometries(&coarse, &dt, &seq.connecting_maps[l - 1]).unwrap();
            }
        }
        let hull = pv_cohomology_hull(&seq).unwrap();
        assert_eq!(names(&hull.groups()), ["Z", "Z^2"], "alpha {alpha}");
        assert_eq!(hull.degrees[1].status, LimitStatus::Stabilized);
        assert!(hull.certificates.all_pass(), "{:?}", hull.certificates);
    }
}

#[test]
fn normal_form_examples() {
    let g = AlgebraicNumber::golden();
    let nf = |f: &CantorCircleFunction| cantor_circle_normal_form(f, &g).unwrap();
    let one = BigInt::from(1);
    let zero = BigInt::from(0);
    assert_eq!(nf(&CantorCircleFunction::constant(1)), (zero.clone(), one.clone()));
    assert_eq!(nf(&CantorCircleFunction::arc(1, 0, 1)), (one.clone(), zero.clone()));
    assert_eq!(nf(&CantorCircleFunction::arc(1, 0, 1).rotated()), (one, zero));
}

#[test]
fn normal_form_needs_a_certified_alpha() {
    let short = AlgebraicNumber::cf_prefix(&[0, 1, 1]);
    assert!(matches!(
        cantor_circle_normal_form(&CantorCircleFunction::arc(1, 0, 40), &short),
        Err(Error::UncertifiedComparison(_))
    ));
}

#[test]
fn frequency_modules() {
    let g = frequency_module(&AlgebraicNumber::golden()).unwrap().alpha_prime.unwrap();
    assert_eq!((g.a.clone(), g.b.clone()), (BigRational::new(3.into(), 2.into()), BigRational::new((-1).into(), 2.into())));
    assert!((g.to_f64() - 0.3819660113).abs() < 1e-10);
    let s = frequency_module(&AlgebraicNumber::silver()).unwrap().alpha_prime.unwrap();
    // 1 - 1/sqrt(2) = 1 - sqrt(2)/2
    assert_eq!((s.a, s.b, s.n), (BigRational::from(BigInt::from(1)), BigRational::new((-1).into(), 2.into()), BigInt::from(2)));
}

#[test]
fn both_routes_give_rank_two() {
    let prefix = AlgebraicNumber::cf_prefix(&[0; 1].iter().chain([2; 30].iter()).copied().collect::<Vec<_>>());
    for alpha in [AlgebraicNumber::golden(), AlgebraicNumber::silver(), prefix] {
        assert_eq!(cantor_circle_h1_rank(&alpha, 20).unwrap(), 2);
        let s = cut_and_project_sample(&alpha, 4000).unwrap();
        let seq = build_proper_sequence(&s, 3).unwrap();
        let hull = pv_cohomology_hull(&seq).unwrap();
        assert_eq!(hull.groups()[1].rank, 2);
    }
}

fn function(terms: &[(i64, i64, i64)], constant: i64) -> CantorCircleFunction {
    let mut f = CantorCircleFunction::constant(constant);
    for &(c, l, m) in terms {
        f = f.add(&CantorCircleFunction::arc(c, l, m));
    }
    f
}

/// Integral computed in floating point from the arc lengths.
fn float_integral(f: &CantorCircleFunction, ap: f64) -> f64 {
    f.terms
        .iter()
        .map(|(c, a)| {
            let c = c.to_f64().unwrap();
            match a {
                pvcoh::pv::Arc::Circle => c,
                pvcoh::pv::Arc::Interval { l, m } => {
                    let frac = |k: &BigInt| (k.to_f64().unwrap() * ap).rem_euclid(1.0);
                    c * (frac(m) - frac(l)).rem_euclid(1.0)
                }
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn normal_form_is_invariant_under_coboundaries(
        f_terms in prop::collection::vec((-5i64..6, -30i64..30, -30i64..30), 0..6),
        g_terms in prop::collection::vec((-5i64..6, -30i64..30, -30i64..30), 0..6),
        fc in -3i64..4,
        gc in -3i64..4,
    ) {
        let alpha = AlgebraicNumber::golden();
        let f = function(&f_terms, fc);
        let g = function(&g_terms, gc);
        let shifted = f.add(&g.coboundary());
        prop_assert_eq!(
            cantor_circle_normal_form(&f, &alpha).unwrap(),
            cantor_circle_normal_form(&shifted, &alpha).unwrap()
        );
        // integral m_f + n_f alpha' against the arc lengths
        let (n, m) = cantor_circle_normal_form(&f, &alpha).unwrap();
        let ap = frequency_module(&alpha).unwrap().alpha_prime.unwrap().to_f64();
        let expected = m.to_f64().unwrap() + n.to_f64().unwrap() * ap;
        prop_assert!((float_integral(&f, ap) - expected).abs() < 1e-6);
    }
}
