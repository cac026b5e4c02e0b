use crate::exactalg::{FieldElem, Matrix};
use crate::multical::VField;

use super::LieError;

/// Bracket of linear fields in matrix form: `[X_A, X_B] = X_{BA − AB}`.
///
/// This is the vector-field bracket, under which the chain algebras satisfy
/// `[X, Y_k] = −2k Y_k`.
pub fn vf_bracket(a: &Matrix, b: &Matrix) -> Matrix {
    b.mul(a).sub(&a.mul(b))
}

fn flatten(m: &Matrix) -> Vec<FieldElem> {
    m.entries().to_vec()
}

/// Coordinates with respect to a fixed linearly independent family.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    vectors: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
    inv: Matrix,
}

impl SpanSolver {
    pub fn new(vectors: Vec<Vec<FieldElem>>) -> Option<SpanSolver> {
        let k = vectors.len();
        if k == 0 {
            return Some(SpanSolver { vectors, pivots: Vec::new(), inv: Matrix::zeros(0, 0) });
        }
        let m = Matrix::from_rows(vectors.clone());
        let (_, pivots) = m.rref();
        if pivots.len() < k {
            return None;
        }
        let sub = Matrix::from_rows(vectors.iter().map(|v| pivots.iter().map(|&p| v[p].clone()).collect()).collect());
        let inv = sub.inverse()?;
        Some(SpanSolver { vectors, pivots, inv })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `c` with `Σ c_i v_i = w`, or `None` when `w` is outside the span.
    pub fn coords(&self, w: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let k = self.vectors.len();
        if k == 0 {
            return w.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let wp: Vec<FieldElem> = self.pivots.iter().map(|&p| w[p].clone()).collect();
        // c · sub = wp  ⇒  c = wp · inv
        let c: Vec<FieldElem> = (0..k)
            .map(|j| {
                (0..k).fold(FieldElem::zero(), |acc, i| {
                    let a = &wp[i];
                    if a.is_zero() {
                        acc
                    } else {
                        &acc + &(a * self.inv.get(i, j))
                    }
                })
            })
            .collect();
        for (idx, wi) in w.iter().enumerate() {
            let s = c
                .iter()
                .zip(&self.vectors)
                .filter(|(ci, v)| !ci.is_zero() && !v[idx].is_zero())
                .fold(FieldElem::zero(), |acc, (ci, v)| &acc + &(ci * &v[idx]));
            if &s != wi {
                return None;
            }
        }
        Some(c)
    }
}

/// A Lie subalgebra of `sl(n+1)` with a chosen basis.
#[derive(Debug, Clone)]
pub struct LieAlgebraData {
    n: usize,
    basis: Vec<Matrix>,
    names: Vec<String>,
    /// `c[i][j][k]`: coefficient of `b_k` in `[b_i, b_j]`.
    structure: Vec<Vec<Vec<FieldElem>>>,
    solver: SpanSolver,
}

/// Validates `basis` (traceless, independent, closed) and computes its
/// structure constants.
pub fn structure_constants(basis: Vec<Matrix>, names: Option<Vec<String>>) -> Result<LieAlgebraData, LieError> {
    let first = basis.first().ok_or(LieError::Empty)?;
    let size = first.rows();
    if size < 2 {
        return Err(LieError::BadShape("matrices must be at least 2×2".into()));
    }
    for (i, b) in basis.iter().enumerate() {
        if b.rows() != size || b.cols() != size {
            return Err(LieError::BadShape(format!("generator {i} is not {size}×{size}")));
        }
        if !b.trace().is_zero() {
            return Err(LieError::NonzeroTrace(i));
        }
    }
    let rads: Vec<i64> = basis.iter().filter_map(|b| b.radicand()).collect();
    if rads.windows(2).any(|w| w[0] != w[1]) {
        return Err(LieError::BadShape("generators use different radicands".into()));
    }
    let names = names.unwrap_or_else(|| (0..basis.len()).map(|i| format!("g{i}")).collect());
    let solver = SpanSolver::new(basis.iter().map(flatten).collect()).ok_or(LieError::Dependent)?;
    let k = basis.len();
    let mut structure = vec![vec![vec![FieldElem::zero(); k]; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let br = vf_bracket(&basis[i], &basis[j]);
            let c = solver.coords(&flatten(&br)).ok_or_else(|| LieError::NotClosed {
                left: names[i].clone(),
                right: names[j].clone(),
            })?;
            structure[j][i] = c.iter().map(|x| -x).collect();
            structure[i][j] = c;
        }
    }
    Ok(LieAlgebraData { n: size - 1, basis, names, structure, solver })
}

impl LieAlgebraData {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure(&self, i: usize, j: usize) -> &[FieldElem] {
        &self.structure[i][j]
    }

    pub fn radicand(&self) -> Option<i64> {
        self.basis.iter().find_map(|b| b.radicand())
    }

    /// Coordinates of a matrix in the basis, `None` outside the algebra.
    pub fn coords(&self, m: &Matrix) -> Option<Vec<FieldElem>> {
        self.solver.coords(&flatten(m))
    }

    pub fn bracket(&self, a: &Matrix, b: &Matrix) -> Matrix {
        vf_bracket(a, b)
    }

    /// Linear vector fields of the basis, in basis order.
    pub fn fields(&self) -> Vec<VField> {
        self.basis.iter().map(VField::linear).collect()
    }

    /// `ad(b_i)` on the algebra, in basis coordinates (column `j` is `[b_i, b_j]`).
    pub fn ad(&self, i: usize) -> Matrix {
        let k = self.dim();
        let mut m = Matrix::zeros(k, k);
        for j in 0..k {
            for (r, v) in self.structure[i][j].iter().enumerate() {
                m.set(r, j, v.clone());
            }
        }
        m
    }

    /// First basis triple violating the Jacobi identity, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let k = self.dim();
        let br = |a: &[FieldElem], j: usize| -> Vec<FieldElem> {
            // [Σ a_i b_i, b_j]
            let mut out = vec![FieldElem::zero(); k];
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (t, c) in self.structure[i][j].iter().enumerate() {
                    out[t] = &out[t] + &(ai * c);
                }
            }
            out
        };
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    // [[i,j],l] + [[j,l],i] + [[l,i],j]
                    let a = br(&self.structure[i][j], l);
                    let b = br(&self.structure[j][l], i);
                    let c = br(&self.structure[l][i], j);
                    if (0..k).any(|t| !(&(&a[t] + &b[t]) + &c[t]).is_zero()) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    /// Brackets `[b_i, b_j]` as a readable relation list, nonzero only.
    pub fn relations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let terms: Vec<String> = self.structure[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(t, c)| format!("({c}) {}", self.names[t]))
                    .collect();
                if !terms.is_empty() {
                    out.push(format!("[{}, {}] = {}", self.names[i], self.names[j], terms.join(" + ")));
                }
            }
        }
        out
    }
}

/// Dimension of `sl(m)`.
pub fn sl_dim(size: usize) -> usize {
    size * size - 1
}

/// Standard basis of `sl(size)`: `E_ij` for `i ≠ j` in row-major order, then
/// `H_i = E_ii − E_{i+1,i+1}`.
pub fn sl_basis(size: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(sl_dim(size));
    for i in 0..size {
        for j in 0..size {
            if i != j {
                let mut m = Matrix::zeros(size, size);
                m.set(i, j, FieldElem::one());
                out.push(m);
            }
        }
    }
    for i in 0..size - 1 {
        let mut m = Matrix::zeros(size, size);
        m.set(i, i, FieldElem::one());
        m.set(i + 1, i + 1, FieldElem::from_int(-1));
        out.push(m);
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`].
pub fn sl_coords(m: &Matrix) -> Vec<FieldElem> {
    let size = m.rows();
    let mut out = Vec::with_capacity(sl_dim(size));
    for i in 0..size {
        for j in 0..size {
            if i != j {
                out.push(m.get(i, j).clone());
            }
        }
    }
    // diag(a) = Σ c_i H_i with c_i = a_0 + … + a_i
    let mut acc = FieldElem::zero();
    for i in 0..size - 1 {
        acc = &acc + m.get(i, i);
        out.push(acc.clone());
    }
    out
}

pub fn sl_from_coords(size: usize, c: &[FieldElem]) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    let mut k = 0;
    for i in 0..size {
        for j in 0..size {
            if i != j {
                m.set(i, j, c[k].clone());
                k += 1;
            }
        }
    }
    for i in 0..size - 1 {
        let v = &c[k + i];
        let a = m.get(i, i) + v;
        m.set(i, i, a);
        let b = m.get(i + 1, i + 1) - v;
        m.set(i + 1, i + 1, b);
    }
    m
}
