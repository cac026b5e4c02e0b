mod common;

use proptest::prelude::*;
use rigfol::exactalg::{FieldElem, Poly};
use rigfol::multical::{contract_volume, PForm, VField};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_hold(seed in any::<u64>()) {
        for (name, ok) in common::calculus_instance(seed) {
            prop_assert!(ok, "{} failed for seed {}", name, seed);
        }
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let n = 5;
        let a = common::form(&mut r, n, 2, 1);
        let b = common::form(&mut r, n, 1, 2);
        let c = common::form(&mut r, n, 1, 0);
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert!(b.wedge(&c).unwrap().add(&c.wedge(&b).unwrap()).is_zero());
    }

    #[test]
    fn contraction_is_alternating(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let fields: Vec<VField> = (0..3).map(|_| common::field(&mut r, 4, 1)).collect();
        let w = contract_volume(&fields).unwrap();
        let swapped = contract_volume(&[fields[1].clone(), fields[0].clone(), fields[2].clone()]).unwrap();
        prop_assert_eq!(w.neg(), swapped);
        let repeated = contract_volume(&[fields[0].clone(), fields[2].clone(), fields[0].clone()]).unwrap();
        prop_assert!(repeated.is_zero());
        let x = &fields[0];
        let f = common::form(&mut r, 4, 2, 1);
        prop_assert!(f.interior(x).unwrap().interior(x).unwrap().is_zero());
    }

    #[test]
    fn divergence_of_linear_is_trace(entries in prop::collection::vec(-4i64..5, 16)) {
        let m = rigfol::exactalg::Matrix::from_rows(entries.chunks(4).map(|r| r.iter().map(|&v| FieldElem::from_int(v)).collect()).collect());
        let x = VField::linear(&m);
        prop_assert_eq!(x.divergence(), Poly::constant(4, m.trace()));
    }
}

#[test]
fn volume_lie_derivative_is_divergence() {
    let mut r = common::rng(7);
    for _ in 0..10 {
        let x = common::field(&mut r, 4, 2);
        let vol = PForm::volume(4);
        assert_eq!(vol.lie_derivative(&x).unwrap(), vol.mul_poly(&x.divergence()));
    }
    let rad = VField::radial(4);
    assert_eq!(PForm::volume(4).lie_derivative(&rad).unwrap(), PForm::volume(4).scale(&FieldElem::from_int(4)));
}

#[test]
fn radial_contraction_by_expansion() {
    // i_R Ω = x0 dx1∧dx2 − x1 dx0∧dx2 + x2 dx0∧dx1; i_{∂1} of that is
    // x0 dx2 − x2 dx0, and i_{∂0} leaves −x2.
    let n = 3;
    let fields = [VField::coordinate(n, 0), VField::coordinate(n, 1), VField::radial(n)];
    let w = contract_volume(&fields).unwrap();
    assert_eq!(w, PForm::function(-&Poly::var(n, 2)));
}
