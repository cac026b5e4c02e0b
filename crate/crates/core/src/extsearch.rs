//! Extensions of `⟨X, Y_1, Y_{n−2}⟩` by `Y_2, …, Y_{n−3}` with
//! `ad(X) Y_k = −2k Y_k` and `ad(Y_1) Y_k = −Y_{k+1}`, and the affine
//! operator `f ↦ X(f) − f`.

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::upoly::RootError;
use crate::exactalg::{poly_det, FieldElem, Matrix, Poly, UPoly};
use crate::liecoh::{structure_constants, LieError};
use crate::multical::VField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("extension system needs n ≥ 5, got {0}")]
    TooSmall(usize),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("elimination stalled: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("solution fails re-verification at equation {0}")]
    Verification(usize),
}

/// One scalar equation: entry `(row, row+left+right)` of `[Y_left, Y_right]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub left: usize,
    pub right: usize,
    pub row: usize,
    pub poly: Poly,
}

/// Unknowns `b_0^{(k)}`, `k = 2..n−3`, are the variables `k − 2`.
#[derive(Debug, Clone)]
pub struct ExtensionSystem {
    pub n: usize,
    /// `table[k][i] = b_i^{(k)}` for `1 ≤ k ≤ n−2`; `table[0]` is empty.
    pub table: Vec<Vec<Poly>>,
    pub equations: Vec<Equation>,
}

impl ExtensionSystem {
    pub fn num_unknowns(&self) -> usize {
        self.n - 4
    }

    pub fn unknown_names(&self) -> Vec<String> {
        (2..self.n - 2).map(|k| format!("b0^({k})")).collect()
    }
}

fn coefficient_table(n: usize) -> Vec<Vec<Poly>> {
    let nv = n - 4;
    let mut table = vec![Vec::new(); n - 1];
    table[1] = vec![Poly::one(nv); n];
    table[n - 2] = vec![Poly::one(nv); 3];
    for k in (2..n - 2).rev() {
        let mut col = vec![Poly::var(nv, k - 2)];
        for i in 0..n - k {
            let next = &col[i] + &table[k + 1][i];
            col.push(next);
        }
        table[k] = col;
    }
    table
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j as i64 + 1))
}

/// `b_i^{(n−k)} = Σ_{l=0}^{k−2} C(i,l) b_0^{(n−k+l)}` for `3 ≤ k ≤ n−2`,
/// with `b_0^{(n−2)} = 1`.
pub fn closed_form(n: usize, k: usize, i: usize) -> Poly {
    let nv = n - 4;
    let b0 = |m: usize| if m == n - 2 { Poly::one(nv) } else { Poly::var(nv, m - 2) };
    (0..=k - 2).fold(Poly::zero(nv), |acc, l| &acc + &b0(n - k + l).scale(&FieldElem::from_int(binom(i, l))))
}

/// Entry `(i, i+a+b)` of the field bracket `[Y_a, Y_b]`.
fn bracket_entry(table: &[Vec<Poly>], a: usize, b: usize, i: usize) -> Poly {
    let (al, be) = (&table[a], &table[b]);
    &(&be[i] * &al[i + b]) - &(&al[i] * &be[i + a])
}

pub fn build_extension_system(n: usize) -> Result<ExtensionSystem, ExtError> {
    if n < 5 {
        return Err(ExtError::TooSmall(n));
    }
    let table = coefficient_table(n);
    for k in 3..=n - 2 {
        for i in 0..=k {
            assert_eq!(table[n - k][i], closed_form(n, k, i), "recurrence disagrees with closed form");
        }
    }
    let mut equations = Vec::new();
    for a in 1..=n - 2 {
        for b in a + 1..=n - 2 {
            if a + b != n - 1 && a + b != n {
                continue;
            }
            for row in 0..=n - a - b {
                let poly = bracket_entry(&table, a, b, row);
                if !poly.is_zero() {
                    equations.push(Equation { left: a, right: b, row, poly });
                }
            }
        }
    }
    Ok(ExtensionSystem { n, table, equations })
}

/// `[X, Y_1, …, Y_{n−2}]` for the given unknown values.
pub fn candidate_basis(n: usize, values: &[FieldElem]) -> Result<Vec<Matrix>, ExtError> {
    if n < 5 {
        return Err(ExtError::TooSmall(n));
    }
    if values.len() != n - 4 {
        return Err(ExtError::Arity { expected: n - 4, got: values.len() });
    }
    let table = coefficient_table(n);
    let x = Matrix::diag(&(0..=n as i64).map(|i| FieldElem::from_int(n as i64 - 2 * i)).collect::<Vec<_>>());
    let mut out = vec![x];
    for (k, col) in table.iter().enumerate().skip(1) {
        let mut m = Matrix::zeros(n + 1, n + 1);
        for (i, b) in col.iter().enumerate() {
            m.set(i, i + k, b.eval(values));
        }
        out.push(m);
    }
    Ok(out)
}

/// Replaces `x_var` by the polynomial `p`.
fn compose(f: &Poly, var: usize, p: &Poly) -> Poly {
    let nv = f.nvars();
    let mut out = Poly::zero(nv);
    let mut pows = vec![Poly::one(nv)];
    for (e, c) in f.terms() {
        let k = e[var] as usize;
        while pows.len() <= k {
            let next = pows.last().unwrap() * p;
            pows.push(next);
        }
        let mut e2 = e.clone();
        e2[var] = 0;
        out = &out + &(&Poly::monomial(nv, e2, c.clone()) * &pows[k]);
    }
    out
}

fn involves(f: &Poly, var: usize) -> bool {
    f.degree_in(var).map_or(false, |d| d > 0)
}

fn vars_of(f: &Poly) -> Vec<usize> {
    (0..f.nvars()).filter(|&v| involves(f, v)).collect()
}

/// Resultant in `var` via the Sylvester determinant.
pub fn resultant(f: &Poly, g: &Poly, var: usize) -> Poly {
    let a = f.coefficients_in(var);
    let b = g.coefficients_in(var);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let nv = f.nvars();
    if size == 0 {
        return Poly::one(nv);
    }
    let mut s = vec![vec![Poly::zero(nv); size]; size];
    for r in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            s[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            s[n + r][r + j] = c.clone();
        }
    }
    poly_det(&s)
}

fn to_upoly(f: &Poly, var: usize) -> UPoly {
    UPoly::new(f.coefficients_in(var).iter().map(Poly::constant_term).collect())
}

/// Finds a variable and a nonzero univariate polynomial its value must satisfy.
fn eliminate(eqs: &[Poly]) -> Result<(usize, UPoly), ExtError> {
    let mut cur: Vec<Poly> = eqs.iter().filter(|f| !f.is_zero()).cloned().collect();
    loop {
        if let Some(f) = cur.iter().find(|f| vars_of(f).len() == 1) {
            let v = vars_of(f)[0];
            return Ok((v, to_upoly(f, v)));
        }
        let Some(y) = cur.iter().flat_map(vars_of).max() else {
            return Err(ExtError::Unsupported("no variables left to eliminate".into()));
        };
        let (with, without): (Vec<Poly>, Vec<Poly>) = cur.into_iter().partition(|f| involves(f, y));
        let pivot = with.iter().min_by_key(|f| (f.degree_in(y), f.num_terms())).unwrap().clone();
        let mut next = without;
        for g in with.iter().filter(|g| **g != pivot) {
            let r = resultant(&pivot, g, y);
            if !r.is_zero() {
                next.push(r.monic());
            }
        }
        if next.is_empty() {
            return Err(ExtError::Unsupported(format!("all resultants in variable {y} vanish")));
        }
        if next.iter().any(|f| f.is_constant()) {
            // a nonzero constant: inconsistent
            return Ok((y, UPoly::constant(FieldElem::one())));
        }
        cur = next;
    }
}

/// All common zeros of `eqs` over `Q` or one quadratic extension, as full
/// assignments of the first `nvars` variables.
pub fn solve_system(eqs: &[Poly], nvars: usize) -> Result<Vec<Vec<FieldElem>>, ExtError> {
    let mut out = solve_rec(eqs.to_vec(), vec![None; nvars])?;
    out.sort_by_key(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    out.dedup();
    for sol in &out {
        if let Some(i) = eqs.iter().position(|f| !f.eval(sol).is_zero()) {
            return Err(ExtError::Verification(i));
        }
    }
    Ok(out)
}

fn solve_rec(eqs: Vec<Poly>, assigned: Vec<Option<FieldElem>>) -> Result<Vec<Vec<FieldElem>>, ExtError> {
    let eqs: Vec<Poly> = eqs.into_iter().filter(|f| !f.is_zero()).collect();
    if eqs.iter().any(Poly::is_constant) {
        return Ok(Vec::new());
    }
    let free: Vec<usize> = (0..assigned.len()).filter(|&v| assigned[v].is_none()).collect();
    if eqs.is_empty() {
        if free.is_empty() {
            return Ok(vec![assigned.into_iter().map(Option::unwrap).collect()]);
        }
        return Err(ExtError::Unsupported(format!("positive-dimensional solution set in {} variables", free.len())));
    }
    // linear substitution x = −g/c when some equation is c·x + g with c constant
    for f in &eqs {
        for &v in &free {
            let cs = f.coefficients_in(v);
            if cs.len() == 2 && cs[1].is_constant() && !cs[1].is_zero() {
                let sub = cs[0].scale(&-&cs[1].constant_term().inv());
                let rest: Vec<Poly> = eqs.iter().filter(|g| *g != f).map(|g| compose(g, v, &sub)).collect();
                let mut a = assigned.clone();
                a[v] = Some(FieldElem::zero());
                let sols = solve_rec(rest, a)?;
                return Ok(sols
                    .into_iter()
                    .map(|mut s| {
                        s[v] = sub.eval(&s);
                        s
                    })
                    .collect());
            }
        }
    }
    let (v, u) = eliminate(&eqs)?;
    let mut out = Vec::new();
    for r in u.roots_quadratic_closure()? {
        let rest: Vec<Poly> = eqs.iter().map(|g| g.substitute(v, &r)).collect();
        let mut a = assigned.clone();
        a[v] = Some(r);
        out.extend(solve_rec(rest, a)?);
    }
    Ok(out)
}

/// A verified solution with its Lie closure verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionSolution {
    #[serde(serialize_with = "ser_elems")]
    pub values: Vec<FieldElem>,
    pub radicand: Option<i64>,
    pub closed: bool,
    /// First bracket leaving the span, when not closed.
    pub failing: Option<(String, String)>,
    /// Nonzero brackets, when closed.
    pub relations: Vec<String>,
}

fn ser_elems<S: serde::Serializer>(v: &[FieldElem], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Lie closure of `span{X, Y_1, …, Y_{n−2}}` for given unknown values.
pub fn lie_closure_verdict(n: usize, values: &[FieldElem]) -> Result<ExtensionSolution, ExtError> {
    let basis = candidate_basis(n, values)?;
    let names = std::iter::once("X".to_string()).chain((1..=n - 2).map(|k| format!("Y{k}"))).collect();
    let radicand = values.iter().find_map(FieldElem::radicand);
    let (closed, failing, relations) = match structure_constants(basis, Some(names)) {
        Ok(g) => (true, None, g.relations()),
        Err(LieError::NotClosed { left, right }) => (false, Some((left, right)), Vec::new()),
        Err(e) => return Err(ExtError::Unsupported(e.to_string())),
    };
    Ok(ExtensionSolution { values: values.to_vec(), radicand, closed, failing, relations })
}

/// Solves the system for `n` and attaches a closure verdict to each solution.
pub fn solve_extension_system(sys: &ExtensionSystem) -> Result<Vec<ExtensionSolution>, ExtError> {
    let eqs: Vec<Poly> = sys.equations.iter().map(|e| e.poly.clone()).collect();
    solve_system(&eqs, sys.num_unknowns())?
        .iter()
        .map(|v| lie_closure_verdict(sys.n, v))
        .collect()
}

/// `T(f) = X(f) − f` on homogeneous polynomials of degree `e − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TOperator {
    pub monomials: Vec<Vec<u32>>,
    pub matrix: Matrix,
    pub determinant: FieldElem,
    pub invertible: bool,
}

pub fn t_operator(x: &VField, e: u32) -> TOperator {
    assert!(e >= 1, "degree must be positive");
    let nv = x.nvars();
    let monomials = crate::exactalg::poly::monomials_of_degree(nv, e - 1);
    let k = monomials.len();
    let mut matrix = Matrix::zeros(k, k);
    for (j, m) in monomials.iter().enumerate() {
        let f = Poly::monomial(nv, m.clone(), FieldElem::one());
        let t = &x.apply(&f) - &f;
        for (i, mi) in monomials.iter().enumerate() {
            matrix.set(i, j, t.coeff(mi));
        }
    }
    let determinant = matrix.det();
    let invertible = !determinant.is_zero();
    TOperator { monomials, matrix, determinant, invertible }
}
