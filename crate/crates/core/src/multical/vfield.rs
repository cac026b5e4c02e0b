use std::fmt;

use crate::exactalg::{FieldElem, Matrix, Poly};

use super::CalcError;

/// Polynomial vector field `Σ X^i ∂/∂x_i` on `C^{nvars}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VField {
    comps: Vec<Poly>,
}

impl VField {
    pub fn new(comps: Vec<Poly>) -> Result<VField, CalcError> {
        let n = comps.len();
        if let Some(bad) = comps.iter().find(|c| c.nvars() != n) {
            return Err(CalcError::NumVarsMismatch(bad.nvars(), n));
        }
        Ok(VField { comps })
    }

    pub fn zero(nvars: usize) -> VField {
        VField { comps: vec![Poly::zero(nvars); nvars] }
    }

    /// Euler field `R = Σ x_i ∂_i`.
    pub fn radial(nvars: usize) -> VField {
        VField { comps: (0..nvars).map(|i| Poly::var(nvars, i)).collect() }
    }

    /// Constant field `∂_i`.
    pub fn coordinate(nvars: usize, i: usize) -> VField {
        let mut v = VField::zero(nvars);
        v.comps[i] = Poly::one(nvars);
        v
    }

    /// Linear field `X_A = Σ_i (A z)_i ∂_i`.
    pub fn linear(a: &Matrix) -> VField {
        let n = a.rows();
        assert_eq!(a.cols(), n, "square matrix required");
        let comps = (0..n)
            .map(|i| Poly::from_terms(n, (0..n).map(|j| (unit(n, j), a.get(i, j).clone()))))
            .collect();
        VField { comps }
    }

    /// Inverse of [`VField::linear`]; `None` unless every component is linear.
    pub fn to_matrix(&self) -> Option<Matrix> {
        let n = self.nvars();
        let mut m = Matrix::zeros(n, n);
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_homogeneous_of(1) {
                return None;
            }
            for j in 0..n {
                m.set(i, j, c.coeff(&unit(n, j)));
            }
        }
        Some(m)
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Common degree of the nonzero components; `None` for the zero field or
    /// mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut d = None;
        for c in self.comps.iter().filter(|c| !c.is_zero()) {
            let k = c.homogeneous_degree()?;
            match d {
                None => d = Some(k),
                Some(e) if e != k => return None,
                _ => {}
            }
        }
        d
    }

    fn check(&self, o: &VField) -> Result<(), CalcError> {
        if self.nvars() != o.nvars() {
            Err(CalcError::NumVarsMismatch(self.nvars(), o.nvars()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &VField) -> VField {
        VField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &VField) -> VField {
        VField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &FieldElem) -> VField {
        VField { comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn mul_poly(&self, f: &Poly) -> VField {
        VField { comps: self.comps.iter().map(|c| c * f).collect() }
    }

    /// `X(f) = Σ X^i ∂f/∂x_i`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(self.nvars());
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                let df = f.d(i);
                if !df.is_zero() {
                    acc = &acc + &(c * &df);
                }
            }
        }
        acc
    }

    /// `[X,Y]^k = X(Y^k) − Y(X^k)`.
    pub fn bracket(&self, o: &VField) -> Result<VField, CalcError> {
        self.check(o)?;
        Ok(VField {
            comps: (0..self.nvars()).map(|k| &self.apply(&o.comps[k]) - &o.apply(&self.comps[k])).collect(),
        })
    }

    /// `Σ ∂X^i/∂x_i`.
    pub fn divergence(&self) -> Poly {
        self.comps
            .iter()
            .enumerate()
            .fold(Poly::zero(self.nvars()), |acc, (i, c)| &acc + &c.d(i))
    }

    /// The same field read in `nvars + extra` variables, with zero components
    /// in the new directions.
    pub fn extend_vars(&self, extra: usize) -> VField {
        let n = self.nvars() + extra;
        let mut comps: Vec<Poly> = self.comps.iter().map(|c| c.extend_vars(extra)).collect();
        comps.resize(n, Poly::zero(n));
        VField { comps }
    }

    pub fn radicand(&self) -> Option<i64> {
        self.comps.iter().find_map(|c| c.radicand())
    }
}

fn unit(n: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[j] = 1;
    e
}

impl fmt::Debug for VField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}
