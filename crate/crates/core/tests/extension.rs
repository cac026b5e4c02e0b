mod common;

use common::fe;
use rigfol::exactalg::{FieldElem, Matrix, Q};
use rigfol::extsearch::{build_extension_system, candidate_basis, closed_form, lie_closure_verdict, solve_extension_system, t_operator};
use rigfol::liecoh::builtin::{g6_values, g7_values};
use rigfol::liecoh::{structure_constants, LieError};
use rigfol::multical::VField;

fn quad(a: (i64, i64), b: (i64, i64), d: i64) -> FieldElem {
    FieldElem::quadratic(Q::new(a.0, a.1), Q::new(b.0, b.1), d).unwrap()
}

fn solutions(n: usize) -> Vec<rigfol::extsearch::ExtensionSolution> {
    solve_extension_system(&build_extension_system(n).unwrap()).unwrap()
}

/// `[Y_a, Y_b] = c·Y_{a+b}` via the differential bracket of the fields; `None` if not a multiple.
fn bracket_multiple(n: usize, values: &[FieldElem], a: usize, b: usize) -> Option<FieldElem> {
    let basis = candidate_basis(n, values).unwrap();
    let field = |k: usize| VField::linear(&basis[k]);
    let br = field(a).bracket(&field(b)).unwrap();
    let target = field(a + b);
    let (i, t) = target.components().iter().enumerate().find(|(_, p)| !p.is_zero())?;
    let (e, c) = t.terms().next()?;
    let s = br.component(i).coeff(e).checked_div(c).ok()?;
    (br == target.scale(&s)).then_some(s)
}

#[test]
fn recurrence_matches_closed_form() {
    for n in 5..=10 {
        let sys = build_extension_system(n).unwrap();
        assert_eq!(sys.num_unknowns(), n - 4);
        for k in 3..=n - 2 {
            for i in 0..=k {
                assert_eq!(sys.table[n - k][i], closed_form(n, k, i), "n={n} k={k} i={i}");
            }
        }
    }
}

#[test]
fn table_respects_the_defining_relations() {
    // ad(X) Y_k = −2k Y_k and ad(Y_1) Y_k = −Y_{k+1} on symbolic values
    for n in 6..=8 {
        let vals: Vec<FieldElem> = (0..n - 4).map(|i| fe(i as i64 * 3 - 2)).collect();
        let basis = candidate_basis(n, &vals).unwrap();
        let f: Vec<VField> = basis.iter().map(VField::linear).collect();
        for k in 1..=n - 2 {
            assert_eq!(f[0].bracket(&f[k]).unwrap(), f[k].scale(&fe(-2 * k as i64)));
            if k + 1 <= n - 3 && k >= 2 {
                assert_eq!(f[1].bracket(&f[k]).unwrap(), f[k + 1].scale(&fe(-1)));
            }
        }
    }
}

#[test]
fn five_has_no_solutions() {
    assert!(solutions(5).is_empty());
}

#[test]
fn six_has_one_closed_solution() {
    let s = solutions(6);
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].values, g6_values());
    assert!(s[0].closed);
    let basis = candidate_basis(6, &s[0].values).unwrap();
    assert!(VField::linear(&basis[2]).bracket(&VField::linear(&basis[3])).unwrap().is_zero());
}

#[test]
fn seven_has_the_root_three_pair() {
    let s = solutions(7);
    assert_eq!(s.len(), 2);
    let rep = g7_values();
    assert_eq!(rep, vec![quad((0, 1), (1, 2), 3), quad((1, 1), (-1, 1), 3), quad((-3, 2), (1, 2), 3)]);
    let conj: Vec<FieldElem> = rep.iter().map(FieldElem::conj).collect();
    assert!(s.iter().any(|x| x.values == rep));
    assert!(s.iter().any(|x| x.values == conj));
    for x in &s {
        assert!(x.closed);
        assert_eq!(x.radicand, Some(3));
        assert_eq!(bracket_multiple(7, &x.values, 2, 3), Some(FieldElem::rational(5, 2)));
    }
}

#[test]
fn eight_has_four_solutions() {
    let s = solutions(8);
    assert_eq!(s.len(), 4);
    let rational_closed = [(vec![0, -5, 5, -3], -5), (vec![0, 0, -1, 0], 5)];
    for (v, c) in rational_closed {
        let v: Vec<FieldElem> = v.into_iter().map(fe).collect();
        let sol = s.iter().find(|x| x.values == v).expect("rational solution present");
        assert!(sol.closed);
        assert_eq!(bracket_multiple(8, &v, 2, 3), Some(fe(c)));
    }
    for sign in [1, -1] {
        let v = vec![
            quad((45, 256), (15 * sign, 256), 265),
            quad((-15, 64), (-5 * sign, 64), 265),
            quad((35, 32), (sign, 32), 265),
            FieldElem::rational(-3, 2),
        ];
        let sol = s.iter().find(|x| x.values == v).expect("√265 solution present");
        assert!(!sol.closed);
        assert_eq!(sol.failing, Some(("Y2".to_string(), "Y3".to_string())));
        assert_eq!(bracket_multiple(8, &v, 2, 3), None);
    }
}

#[test]
fn printed_root_265_tuple_is_not_a_solution() {
    let printed = [quad((45, 256), (15, 256), 265), quad((-15, 64), (5, 64), 265), quad((35, 32), (-1, 32), 265), FieldElem::rational(-3, 2)];
    let sys = build_extension_system(8).unwrap();
    assert!(sys.equations.iter().any(|e| !e.poly.eval(&printed).is_zero()));
}

#[test]
fn solutions_satisfy_every_equation() {
    for n in 6..=8 {
        let sys = build_extension_system(n).unwrap();
        for sol in solve_extension_system(&sys).unwrap() {
            for e in &sys.equations {
                assert!(e.poly.eval(&sol.values).is_zero());
            }
            let v = lie_closure_verdict(n, &sol.values).unwrap();
            assert_eq!(v, sol);
        }
    }
}

#[test]
fn grading_spectrum_on_closed_solutions() {
    for (n, vals) in [(6, g6_values()), (7, g7_values())] {
        let basis = candidate_basis(n, &vals).unwrap();
        let g = structure_constants(basis, None).unwrap();
        let ad = g.ad(0);
        for k in 0..g.dim() {
            assert_eq!(ad.get(k, k), &fe(-2 * k as i64));
        }
    }
}

#[test]
fn alternate_listing_is_isomorphic_by_negation() {
    let basis = candidate_basis(7, &g7_values()).unwrap();
    let relabel = |sign: &dyn Fn(usize) -> i64| -> Vec<Matrix> {
        basis.iter().enumerate().map(|(k, m)| if k == 0 { m.clone() } else { m.scale(&fe(sign(k))) }).collect()
    };
    let neg = structure_constants(relabel(&|_| -1), None).unwrap();
    for j in 2..=4 {
        let mut want = vec![fe(0); 6];
        want[j + 1] = fe(1);
        assert_eq!(neg.structure(1, j), &want[..]);
    }
    let mut want = vec![fe(0); 6];
    want[5] = FieldElem::rational(-5, 2);
    assert_eq!(neg.structure(2, 3), &want[..]);

    let alt = structure_constants(relabel(&|k| if k % 2 == 0 { 1 } else { -1 }), None).unwrap();
    assert_eq!(alt.structure(1, 2)[3], fe(-1));
}

#[test]
fn a_wrong_value_breaks_closure() {
    let mut v = g6_values();
    v[0] = fe(1);
    let r = lie_closure_verdict(6, &v).unwrap();
    assert!(!r.closed);
    assert!(matches!(structure_constants(candidate_basis(6, &v).unwrap(), None), Err(LieError::NotClosed { .. })));
}

fn laplace(m: &Matrix) -> FieldElem {
    let k = m.rows();
    if k == 0 {
        return fe(1);
    }
    let mut acc = fe(0);
    for j in 0..k {
        let a = m.get(0, j);
        if a.is_zero() {
            continue;
        }
        let minor = Matrix::from_rows((1..k).map(|r| (0..k).filter(|&c| c != j).map(|c| m.get(r, c).clone()).collect()).collect());
        let term = a * &laplace(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[test]
fn t_operator_cases() {
    let w = [3i64, 1, -1, -3];
    let x = VField::linear(&Matrix::diag(&w.iter().map(|&v| fe(v)).collect::<Vec<_>>()));
    let t = t_operator(&x, 3);
    for (i, a) in t.monomials.iter().enumerate() {
        let expect: i64 = a.iter().zip(&w).map(|(&e, &wi)| e as i64 * wi).sum::<i64>() - 1;
        assert_eq!(t.matrix.get(i, i), &fe(expect));
    }
    let g = rigfol::liecoh::builtin_algebra("aff_sym", &serde_json::json!({"r": 3})).unwrap();
    let f = g.fields();
    let mixed = f[0].add(&f[1].scale(&fe(2)));
    let t = t_operator(&mixed, 3);
    assert_eq!(t.determinant, laplace(&t.matrix));
    assert_eq!(t.invertible, !t.determinant.is_zero());
}
