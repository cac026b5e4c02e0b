use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{FieldElem, Matrix, Q, UPoly};

use super::algebra::{sl_basis, sl_coords, sl_dim, sl_from_coords, vf_bracket, SpanSolver};
use super::{LieAlgebraData, LieError};

/// How the complement `M̄` with `sl(n+1) = M̄ ⊕ 𝔤` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementChoice {
    /// Greedy from the standard basis of `sl(n+1)`.
    Standard,
    /// Sum of complements inside the eigenspaces of `ad(b_i)`.
    Graded(usize),
    /// Greedy from seeded random small-integer combinations.
    Random(u64),
}

/// `sl(n+1)/𝔤` with a chosen complement and the induced action.
#[derive(Debug, Clone)]
pub struct QuotientModule {
    algebra: LieAlgebraData,
    complement: Vec<Matrix>,
    action: Vec<Matrix>,
    grading: Option<Vec<FieldElem>>,
    solver: SpanSolver,
}

/// Incremental echelon basis used for greedy independence tests.
struct Echelon {
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        v
    }

    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, v: &[FieldElem]) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inv();
        let v: Vec<FieldElem> = v.iter().map(|x| x * &inv).collect();
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Minimal polynomial of a square matrix, as the lcm of the minimal
/// polynomials of the standard basis vectors.
pub fn minimal_polynomial(a: &Matrix) -> UPoly {
    let n = a.rows();
    let mut acc = UPoly::constant(FieldElem::one());
    for j in 0..n {
        let mut v = vec![FieldElem::zero(); n];
        v[j] = FieldElem::one();
        if acc.degree().map_or(false, |d| d > 0) && apply_poly(a, &acc, &v).iter().all(FieldElem::is_zero) {
            continue;
        }
        let mut seq = vec![v];
        loop {
            let next = a.mul_vec(seq.last().unwrap());
            let solver = SpanSolver::new(seq.clone()).expect("Krylov sequence is independent until it stops");
            if let Some(c) = solver.coords(&next) {
                // next = Σ c_i A^i v
                let mut coeffs: Vec<FieldElem> = c.iter().map(|x| -x).collect();
                coeffs.push(FieldElem::one());
                acc = acc.lcm(&UPoly::new(coeffs));
                break;
            }
            seq.push(next);
        }
    }
    acc
}

fn apply_poly(a: &Matrix, p: &UPoly, v: &[FieldElem]) -> Vec<FieldElem> {
    // Horner
    let mut out = vec![FieldElem::zero(); v.len()];
    for c in p.coeffs().iter().rev() {
        out = a.mul_vec(&out);
        for (o, x) in out.iter_mut().zip(v) {
            *o = &*o + &(c * x);
        }
    }
    out
}

/// Rational eigenvalues of a semisimple operator, or why it is not one.
fn semisimple_spectrum(a: &Matrix) -> Result<Vec<Q>, LieError> {
    let m = minimal_polynomial(a);
    if !m.is_squarefree() {
        return Err(LieError::NotSemisimple("minimal polynomial has a repeated factor".into()));
    }
    let roots = m
        .rational_roots()
        .ok_or_else(|| LieError::NotSemisimple("minimal polynomial has irrational coefficients".into()))?;
    if roots.len() != m.degree().unwrap_or(0) {
        return Err(LieError::NotSemisimple("eigenvalues outside the rationals".into()));
    }
    Ok(roots)
}

fn shifted(a: &Matrix, lambda: &FieldElem) -> Matrix {
    let mut m = a.clone();
    for i in 0..m.rows() {
        let v = m.get(i, i) - lambda;
        m.set(i, i, v);
    }
    m
}

fn algebra_vectors(g: &LieAlgebraData) -> Vec<Vec<FieldElem>> {
    g.basis().iter().map(sl_coords).collect()
}

fn greedy(g: &LieAlgebraData, candidates: impl Iterator<Item = Vec<FieldElem>>) -> Vec<Vec<FieldElem>> {
    let mut ech = Echelon::new();
    for v in algebra_vectors(g) {
        ech.insert(&v);
    }
    let target = sl_dim(g.n() + 1) - g.dim();
    let mut out = Vec::with_capacity(target);
    for c in candidates {
        if out.len() == target {
            break;
        }
        if ech.insert(&c) {
            out.push(c);
        }
    }
    out
}

fn graded_complement(g: &LieAlgebraData, x: usize) -> Result<(Vec<Vec<FieldElem>>, Vec<FieldElem>), LieError> {
    let size = g.n() + 1;
    let xm = &g.basis()[x];
    let std = sl_basis(size);
    let cols: Vec<Vec<FieldElem>> = std.iter().map(|s| sl_coords(&vf_bracket(xm, s))).collect();
    let ad = Matrix::from_rows(cols).transpose();
    let spectrum = semisimple_spectrum(&ad)?;
    let ad_g = g.ad(x);
    let mut vecs = Vec::new();
    let mut grades = Vec::new();
    for lam in spectrum {
        let lam = FieldElem::from_q(lam);
        let eig = shifted(&ad, &lam).nullspace();
        let mut ech = Echelon::new();
        for c in shifted(&ad_g, &lam).nullspace() {
            let m = c.iter().zip(g.basis()).fold(Matrix::zeros(size, size), |acc, (ci, b)| acc.add(&b.scale(ci)));
            ech.insert(&sl_coords(&m));
        }
        for e in eig {
            if ech.insert(&e) {
                vecs.push(e);
                grades.push(lam.clone());
            }
        }
    }
    Ok((vecs, grades))
}

/// Builds `sl(n+1)/𝔤` with the requested complement.
pub fn quotient_module(g: &LieAlgebraData, choice: ComplementChoice) -> Result<QuotientModule, LieError> {
    let size = g.n() + 1;
    let (vecs, grading) = match choice {
        ComplementChoice::Standard => (greedy(g, sl_basis(size).iter().map(sl_coords)), None),
        ComplementChoice::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = sl_dim(size);
            let cands = std::iter::repeat_with(move || (0..n).map(|_| FieldElem::from_int(rng.gen_range(-3..=3))).collect());
            (greedy(g, cands), None)
        }
        ComplementChoice::Graded(x) => {
            if x >= g.dim() {
                return Err(LieError::InvalidParams(format!("grading element {x} out of range")));
            }
            let (v, gr) = graded_complement(g, x)?;
            (v, Some(gr))
        }
    };
    if vecs.len() + g.dim() != sl_dim(size) {
        return Err(LieError::Dependent);
    }
    let complement: Vec<Matrix> = vecs.iter().map(|c| sl_from_coords(size, c)).collect();
    let mut all = algebra_vectors(g);
    all.extend(vecs);
    let solver = SpanSolver::new(all).ok_or(LieError::Dependent)?;
    let k = g.dim();
    let dm = complement.len();
    let action = g
        .basis()
        .iter()
        .map(|x| {
            let mut a = Matrix::zeros(dm, dm);
            for (j, m) in complement.iter().enumerate() {
                let c = solver.coords(&sl_coords(&vf_bracket(x, m))).expect("complement spans");
                for (i, v) in c[k..].iter().enumerate() {
                    a.set(i, j, v.clone());
                }
            }
            a
        })
        .collect();
    Ok(QuotientModule { algebra: g.clone(), complement, action, grading, solver })
}

impl QuotientModule {
    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn complement(&self) -> &[Matrix] {
        &self.complement
    }

    /// Operator of basis element `a` on complement coordinates.
    pub fn action(&self, a: usize) -> &Matrix {
        &self.action[a]
    }

    /// `ad`-eigenvalue of each complement vector for a graded complement.
    pub fn grading(&self) -> Option<&[FieldElem]> {
        self.grading.as_deref()
    }

    /// Coordinates of the class of a traceless matrix.
    pub fn project(&self, m: &Matrix) -> Vec<FieldElem> {
        let c = self.solver.coords(&sl_coords(m)).expect("traceless matrix");
        c[self.algebra.dim()..].to_vec()
    }

    /// First basis pair where `ρ([x,y]) ≠ ρ(x)ρ(y) − ρ(y)ρ(x)`.
    pub fn representation_violation(&self) -> Option<(usize, usize)> {
        let k = self.algebra.dim();
        for i in 0..k {
            for j in i + 1..k {
                let lhs = self.algebra.structure(i, j).iter().enumerate().fold(
                    Matrix::zeros(self.dim(), self.dim()),
                    |acc, (t, c)| if c.is_zero() { acc } else { acc.add(&self.action[t].scale(c)) },
                );
                let rhs = self.action[i].mul(&self.action[j]).sub(&self.action[j].mul(&self.action[i]));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liecoh::{chain_algebra, diagonal_algebra, sl2_sym};

    #[test]
    fn all_choices_are_representations() {
        let g = chain_algebra(4, 2).unwrap();
        for c in [ComplementChoice::Standard, ComplementChoice::Graded(0), ComplementChoice::Random(7)] {
            let m = quotient_module(&g, c).unwrap();
            assert_eq!(m.dim(), 24 - 3);
            assert_eq!(m.representation_violation(), None, "{c:?}");
        }
    }

    #[test]
    fn infinito_grading_is_even_and_bounded() {
        for n in 3..=5 {
            let g = chain_algebra(n, 2).unwrap();
            let m = quotient_module(&g, ComplementChoice::Graded(0)).unwrap();
            for l in m.grading().unwrap() {
                let q = l.as_rational().unwrap();
                assert!(q.is_integer());
                let v: i64 = q.numer().try_into().unwrap();
                assert!(v % 2 == 0 && v.abs() <= 2 * n as i64, "{v}");
            }
        }
    }

    #[test]
    fn diagonal_action_is_diagonal_on_root_vectors() {
        let w = vec![
            vec![1, 2, -3].into_iter().map(FieldElem::from_int).collect::<Vec<_>>(),
        ];
        let g = diagonal_algebra(&w).unwrap();
        let m = quotient_module(&g, ComplementChoice::Standard).unwrap();
        let a = m.action(0);
        // the first six complement vectors are E_ij in row-major order
        let roots = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        let lam = [1, 2, -3];
        for (k, (i, j)) in roots.iter().enumerate() {
            for r in 0..m.dim() {
                let expect = if r == k { FieldElem::from_int(lam[*j] - lam[*i]) } else { FieldElem::zero() };
                assert_eq!(a.get(r, k), &expect);
            }
        }
    }

    #[test]
    fn nilpotent_grading_rejected() {
        let g = chain_algebra(3, 1).unwrap();
        assert!(matches!(quotient_module(&g, ComplementChoice::Graded(1)), Err(LieError::NotSemisimple(_))));
        let s = sl2_sym(3).unwrap();
        assert!(quotient_module(&s, ComplementChoice::Graded(0)).is_ok());
    }
}
