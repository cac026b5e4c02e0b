//! Interior/exterior calculus on polynomial vector fields and forms.

pub mod form;
pub mod vfield;

use thiserror::Error;

pub use form::{sort_with_sign, tuples, PForm, Tuple};
pub use vfield::VField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("variable count mismatch: {0} vs {1}")]
    NumVarsMismatch(usize, usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("interior product of a 0-form")]
    ArityZero,
    #[error("wedge of arity {arity} exceeds {nvars} variables")]
    ArityOverflow { arity: usize, nvars: usize },
    #[error("{fields} fields cannot be contracted into a volume form on {nvars} variables")]
    TooManyFields { fields: usize, nvars: usize },
    #[error("empty field list")]
    NoFields,
    #[error("cannot parse form: {0}")]
    Parse(String),
}

/// `i_{X_1} ⋯ i_{X_k} Ω`; the last field is contracted first.
pub fn contract_volume(fields: &[VField]) -> Result<PForm, CalcError> {
    let nvars = fields.first().ok_or(CalcError::NoFields)?.nvars();
    if fields.len() > nvars {
        return Err(CalcError::TooManyFields { fields: fields.len(), nvars });
    }
    let mut w = PForm::volume(nvars);
    for x in fields.iter().rev() {
        w = w.interior(x)?;
    }
    Ok(w)
}

/// [`contract_volume`] for a possibly empty list on a given variable count.
pub fn contract_volume_in(nvars: usize, fields: &[VField]) -> Result<PForm, CalcError> {
    if fields.is_empty() {
        Ok(PForm::volume(nvars))
    } else {
        contract_volume(fields)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{FieldElem, Matrix, Poly};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn interior_examples() {
        let one = PForm::dx(2, 0).interior(&VField::coordinate(2, 0)).unwrap();
        assert_eq!(one, PForm::function(Poly::one(2)));
        let w = PForm::volume(2).interior(&VField::radial(2)).unwrap();
        let expect = PForm::from_entries(2, 1, [(vec![1], x(2, 0)), (vec![0], -&x(2, 1))]);
        assert_eq!(w, expect);
        assert_eq!(PForm::function(Poly::one(2)).interior(&VField::radial(2)), Err(CalcError::ArityZero));
    }

    #[test]
    fn wedge_examples() {
        let w = PForm::dx(2, 0).wedge(&PForm::dx(2, 1)).unwrap();
        assert_eq!(w, PForm::volume(2));
        assert!(PForm::dx(2, 0).wedge(&PForm::dx(2, 0)).unwrap().is_zero());
        assert!(matches!(PForm::volume(2).wedge(&PForm::dx(2, 0)), Err(CalcError::ArityOverflow { .. })));
    }

    #[test]
    fn derivative_examples() {
        let w = PForm::from_entries(2, 1, [(vec![1], x(2, 0))]);
        assert_eq!(w.d(), PForm::volume(2));
        // ω = x1 dx0 − x0 dx1 has i_R dω = 2ω
        let w = PForm::from_entries(2, 1, [(vec![0], x(2, 1)), (vec![1], -&x(2, 0))]);
        assert_eq!(w.d().interior(&VField::radial(2)).unwrap(), w.scale(&2.into()));
    }

    #[test]
    fn bracket_examples() {
        let d0 = VField::coordinate(1, 0);
        let x0d0 = VField::new(vec![x(1, 0)]).unwrap();
        assert_eq!(d0.bracket(&x0d0).unwrap(), d0);
        let f = VField::new(vec![Poly::zero(2), x(2, 0).pow(2)]).unwrap();
        assert_eq!(f.bracket(&VField::radial(2)).unwrap(), f.scale(&(-1).into()));
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(VField::radial(4).divergence(), Poly::constant(4, 4.into()));
        assert!(VField::new(vec![x(2, 1), Poly::zero(2)]).unwrap().divergence().is_zero());
        let a = Matrix::from_ints(&[&[1, 2, 0], &[0, 5, 1], &[3, 0, -2]]);
        let x = VField::linear(&a);
        assert_eq!(x.divergence(), Poly::constant(3, a.trace()));
        assert_eq!(x.to_matrix().unwrap(), a);
    }

    #[test]
    fn volume_contractions() {
        let n = 4;
        let all: Vec<VField> = (0..n).map(|i| VField::coordinate(n, i)).collect();
        let c = contract_volume(&all).unwrap();
        assert_eq!(c.arity(), 0);
        let v = c.coeff(&[]);
        assert!(v == Poly::one(n) || v == -&Poly::one(n));
        let mut swapped = all.clone();
        swapped.swap(1, 2);
        assert_eq!(contract_volume(&swapped).unwrap(), contract_volume(&all).unwrap().neg());
        let mut five = all.clone();
        five.push(VField::radial(n));
        assert!(matches!(contract_volume(&five), Err(CalcError::TooManyFields { .. })));
        let dup = vec![VField::radial(n), VField::radial(n)];
        assert!(contract_volume(&dup).unwrap().is_zero());
    }

    #[test]
    fn three_variable_contraction_by_hand() {
        // i_R Ω = x0 dx1∧dx2 − x1 dx0∧dx2 + x2 dx0∧dx1; then i_{∂1} and i_{∂0}
        let n = 3;
        let ir = PForm::from_entries(
            n,
            2,
            [(vec![1, 2], x(n, 0)), (vec![0, 2], -&x(n, 1)), (vec![0, 1], x(n, 2))],
        );
        assert_eq!(PForm::volume(n).interior(&VField::radial(n)).unwrap(), ir);
        // i_{∂1}: from −x1 dx0∧dx2 nothing (slot 1 absent); x0 dx1∧dx2 → x0 dx2; x2 dx0∧dx1 → −x2 dx0
        let step = PForm::from_entries(n, 1, [(vec![2], x(n, 0)), (vec![0], -&x(n, 2))]);
        assert_eq!(ir.interior(&VField::coordinate(n, 1)).unwrap(), step);
        let fin = PForm::function(-&x(n, 2));
        let fields = [VField::coordinate(n, 0), VField::coordinate(n, 1), VField::radial(n)];
        assert_eq!(contract_volume(&fields).unwrap(), fin);
    }

    #[test]
    fn text_round_trip() {
        let r = FieldElem::sqrt_of(3).unwrap();
        let w = PForm::from_entries(3, 2, [(vec![0, 2], x(3, 1).scale(&r)), (vec![1, 2], x(3, 0))]);
        let s = w.to_string();
        assert!(s.starts_with("form vars=3 arity=2\n"));
        assert_eq!(PForm::parse(&s).unwrap(), w);
        let f = PForm::function(x(2, 0));
        assert_eq!(PForm::parse(&f.to_string()).unwrap(), f);
    }
}
