mod common;

use common::fe;
use rigfol::exactalg::Matrix;
use rigfol::liecoh::{
    builtin_algebra, cohomology_dim, parse_algebra_json, quotient_module, sl_basis, sl_coords, sl_dim, sl_from_coords, structure_constants,
    vf_bracket, ComplementChoice, LieError,
};
use rigfol::multical::VField;
use serde_json::json;

fn h1(name: &str, params: serde_json::Value, c: ComplementChoice) -> usize {
    let g = builtin_algebra(name, &params).unwrap();
    let m = quotient_module(&g, c).unwrap();
    let r = cohomology_dim(&m, 1).unwrap();
    assert!(r.modular_agrees, "{name}");
    r.dim
}

#[test]
fn field_bracket_matches_the_differential_bracket() {
    let mut r = common::rng(5);
    for _ in 0..10 {
        let a = Matrix::from_rows((0..4).map(|_| (0..4).map(|_| fe(rand::Rng::gen_range(&mut r, -3..=3))).collect()).collect());
        let b = Matrix::from_rows((0..4).map(|_| (0..4).map(|_| fe(rand::Rng::gen_range(&mut r, -3..=3))).collect()).collect());
        let want = VField::linear(&a).bracket(&VField::linear(&b)).unwrap();
        assert_eq!(VField::linear(&vf_bracket(&a, &b)), want);
    }
}

#[test]
fn sl_coordinates_round_trip() {
    for size in 2..=5 {
        let basis = sl_basis(size);
        assert_eq!(basis.len(), sl_dim(size));
        for (i, m) in basis.iter().enumerate() {
            let c = sl_coords(m);
            assert!(c.iter().enumerate().all(|(j, x)| *x == fe(i64::from(i == j))));
            assert_eq!(&sl_from_coords(size, &c), m);
        }
    }
}

#[test]
fn chain_brackets() {
    let g = builtin_algebra("infinito", &json!({"n": 5})).unwrap();
    for k in 1..g.dim() {
        let mut want = vec![fe(0); g.dim()];
        want[k] = fe(-2 * k as i64);
        assert_eq!(g.structure(0, k), &want[..]);
    }
    assert!(g.jacobi_violation().is_none());
}

#[test]
fn complement_choice_does_not_change_h1() {
    let choices = [ComplementChoice::Standard, ComplementChoice::Graded(0), ComplementChoice::Random(3), ComplementChoice::Random(99)];
    let dims: Vec<usize> = choices.iter().map(|&c| h1("infinito", json!({"n": 4}), c)).collect();
    assert!(dims.iter().all(|&d| d == dims[0]), "{dims:?}");
    assert_eq!(dims[0], 0);
}

#[test]
fn h1_vanishes_on_the_chain_family() {
    for n in 3..=6 {
        assert_eq!(h1("infinito", json!({"n": n}), ComplementChoice::Graded(0)), 0, "n={n}");
    }
}

#[test]
fn h1_vanishes_for_binary_forms() {
    for r in [5, 6] {
        assert_eq!(h1("sl2_sym", json!({"r": r}), ComplementChoice::Graded(0)), 0, "r={r}");
    }
}

#[test]
fn h0_of_an_abelian_algebra_counts_invariants() {
    // weights (1, 1, −1, −1): E_01, E_10, E_23, E_32 are invariant; the
    // diagonal part contributes 3 − 1.
    let g = builtin_algebra("diagonal", &json!({"n": 3, "q": 2, "weights": [["1", "1", "-1", "-1"]]})).unwrap();
    let m = quotient_module(&g, ComplementChoice::Standard).unwrap();
    assert_eq!(cohomology_dim(&m, 0).unwrap().dim, 4 + 2);
}

#[test]
fn explicit_generators_round_trip() {
    let g = builtin_algebra("aff_sym", &json!({"r": 3})).unwrap();
    let flat: Vec<Vec<String>> = g
        .basis()
        .iter()
        .map(|m| (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| m.get(i, j).to_string()).collect())
        .collect();
    let parsed = parse_algebra_json(&json!({"n": 3, "generators": flat})).unwrap();
    assert_eq!(parsed.basis(), g.basis());
    let via_builtin = parse_algebra_json(&json!({"builtin": "aff_sym", "params": {"r": 3}})).unwrap();
    assert_eq!(via_builtin.basis(), g.basis());
}

#[test]
fn errors_are_reported() {
    assert!(matches!(builtin_algebra("nope", &json!({})), Err(LieError::UnknownBuiltin(_))));
    assert!(matches!(builtin_algebra("infinito", &json!({"n": 2})), Err(LieError::InvalidParams(_))));
    assert!(matches!(parse_algebra_json(&json!({"n": 1, "generators": [["1", "0", "0"]]})), Err(LieError::Spec(_))));
    let trace = Matrix::identity(3);
    assert!(matches!(structure_constants(vec![trace], None), Err(LieError::NonzeroTrace(0))));
}
