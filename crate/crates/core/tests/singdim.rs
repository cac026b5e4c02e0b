mod common;

use common::fe;
use proptest::prelude::*;
use rigfol::exactalg::Poly;
use rigfol::foliation::omega_from_fields;
use rigfol::liecoh::builtin::default_diagonal_weights;
use rigfol::liecoh::{builtin_algebra, diagonal_algebra};
use rigfol::multical::PForm;
use rigfol::singdim::{
    build_infinito_matrix, build_infinito_matrix_with, codim_report, coefficient_ideal, lambda, selected_minor, slice_codim_certificate, IdealSpec,
    LambdaSign, SingError, SliceOptions, SliceVerdict,
};
use serde_json::json;

#[test]
fn printed_matrix_layout() {
    let m = build_infinito_matrix(3).unwrap();
    assert_eq!(m.rows(), 2);
    for j in 0..4 {
        assert_eq!(m.entries[0][j], Poly::var(4, j).scale(&fe(4 * (3 - 2 * j as i64) - 2)));
        let y1 = if j < 3 { Poly::var(4, j + 1) } else { Poly::zero(4) };
        assert_eq!(m.entries[1][j], y1);
    }
    assert!(matches!(build_infinito_matrix(2), Err(SingError::TooSmall(2))));
}

#[test]
fn containment_minors_are_pure_powers() {
    for sign in [LambdaSign::Printed, LambdaSign::Derived] {
        for n in 3..=7 {
            let m = build_infinito_matrix_with(n, sign).unwrap();
            for (var, minor) in common::containment_minors(&m) {
                let c = common::pure_power(&minor, var, n as u32 - 1);
                assert!(c.is_some_and(|c| !c.is_zero()), "{sign:?} n={n} z{var}: {minor}");
            }
        }
    }
}

#[test]
fn minors_match_the_permutation_expansion() {
    for n in 3..=6 {
        let m = build_infinito_matrix(n).unwrap();
        let cols: Vec<usize> = (0..n - 1).map(|i| (i * 2) % (n + 1)).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        if cols.len() != n - 1 {
            continue;
        }
        let sub: Vec<Vec<Poly>> = m.entries.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        assert_eq!(selected_minor(&m, &cols).unwrap(), common::leibniz(&sub));
    }
}

/// Coefficient of `dz_a ∧ dz_b` in `dω` against the minor on the other columns.
fn minors_are_coefficients(n: usize, sign: LambdaSign) -> bool {
    let g = builtin_algebra("infinito", &json!({ "n": n })).unwrap();
    let dw = omega_from_fields(&g.fields()).unwrap().omega.d();
    let m = build_infinito_matrix_with(n, sign).unwrap();
    rigfol::multical::tuples(n + 1, 2).iter().all(|ab| {
        let rest: Vec<usize> = (0..=n).filter(|c| !ab.contains(c)).collect();
        let minor = selected_minor(&m, &rest).unwrap();
        let c = dw.coeff(ab);
        c == minor || c == -&minor
    })
}

#[test]
fn derived_lambdas_give_the_derivative() {
    for n in 3..=6 {
        assert!(minors_are_coefficients(n, LambdaSign::Derived), "n={n}");
        assert!(!minors_are_coefficients(n, LambdaSign::Printed), "n={n}");
    }
}

#[test]
fn coefficient_ideal_of_rotation() {
    let x = |i| Poly::var(2, i);
    let w = PForm::from_entries(2, 1, [(vec![1], x(0)), (vec![0], -&x(1))]);
    let i = coefficient_ideal("rot", &w).unwrap();
    assert_eq!(i.generators.len(), 2);
    assert!(i.generators.iter().all(|g| *g == x(0) || *g == -&x(1)));
    assert!(matches!(coefficient_ideal("zero", &PForm::zero(2, 1)), Err(SingError::ZeroForm)));
}

#[test]
fn coordinate_ideals() {
    let opts = SliceOptions::default();
    for k in 1..=4 {
        let i = IdealSpec::coordinate(6, k);
        assert!(slice_codim_certificate(&i, k, &opts).unwrap().certified(), "k={k}");
        let r = slice_codim_certificate(&i, k + 1, &opts).unwrap();
        assert_eq!(r.verdict, SliceVerdict::Refuted, "k={k}");
        assert!(r.tallies.iter().all(|t| t.hits == r.trials));
        assert!(r.witnesses.iter().all(|w| w.point[..k].iter().all(|&x| x == 0)));
    }
}

#[test]
fn diagonal_singular_set_has_codim_three() {
    let g = diagonal_algebra(&default_diagonal_weights(3, 1)).unwrap();
    let dw = omega_from_fields(&g.fields()).unwrap().omega.d();
    let ideal = coefficient_ideal("diag3", &dw).unwrap();
    assert!(ideal.generators.iter().all(|f| f.num_terms() == 1 && f.homogeneous_degree() == Some(2)));
    assert!(slice_codim_certificate(&ideal, 3, &SliceOptions::default()).unwrap().certified());
}

#[test]
fn codim_one_on_binary_quartics_is_refuted() {
    let g = builtin_algebra("sl2_sym", &json!({"r": 4})).unwrap();
    let d = omega_from_fields(&g.fields()).unwrap();
    let r = codim_report(&d, &SliceOptions::default()).unwrap();
    assert_eq!(r.q, 1);
    assert_eq!(r.split_hypothesis.verdict, SliceVerdict::Refuted);
    assert!(r.split_hypothesis.tallies.iter().all(|t| t.hits > 0));
    let dw = d.omega.d();
    for w in &r.split_hypothesis.witnesses {
        let ctx = rigfol::exactalg::PrimeContext::new(w.prime, None).unwrap();
        assert!(dw.coefficients().iter().all(|f| ctx.reduce_poly(f).unwrap().eval(&w.point) == 0));
    }
}

#[test]
fn higher_codim_examples_certify_sing_omega() {
    for (name, params) in [("sl2_sym", json!({"r": 5})), ("aff_sym", json!({"r": 4}))] {
        let g = builtin_algebra(name, &params).unwrap();
        let d = omega_from_fields(&g.fields()).unwrap();
        assert_eq!(d.q, 2, "{name}");
        let r = codim_report(&d, &SliceOptions::default()).unwrap();
        assert!(r.certified(), "{name}: {r:?}");
    }
}

#[test]
fn certificates_are_reproducible() {
    let g = builtin_algebra("sl2_sym", &json!({"r": 4})).unwrap();
    let ideal = coefficient_ideal("q4", &omega_from_fields(&g.fields()).unwrap().omega.d()).unwrap();
    let opts = SliceOptions { seed: 42, ..SliceOptions::default() };
    let a = serde_json::to_string(&slice_codim_certificate(&ideal, 3, &opts).unwrap()).unwrap();
    let b = serde_json::to_string(&slice_codim_certificate(&ideal, 3, &opts).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"seed\":42"));
}

#[test]
fn printed_lambdas_do_not_vanish_at_the_end() {
    for n in 3..=20 {
        assert!((n - 2..=n).all(|j| lambda(n, j) != 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn poly_minors_match_oracle(seed in any::<u64>(), k in 3usize..5) {
        let mut r = common::rng(seed);
        let entries: Vec<Vec<Poly>> = (0..k).map(|_| (0..k).map(|_| common::poly(&mut r, 3, 1, 2)).collect()).collect();
        let m = rigfol::singdim::MinorMatrix { n: k + 1, entries };
        let cols: Vec<usize> = (0..k).collect();
        prop_assert_eq!(selected_minor(&m, &cols).unwrap(), common::leibniz(&m.entries));
    }
}
