use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::exactalg::modp::select_primes;
use crate::exactalg::{FieldElem, SparseMatrix};
use crate::multical::{sort_with_sign, tuples, Tuple};

use super::{LieAlgebraData, LieError, QuotientModule};

/// Alternating `k`-cochain `𝔤^k → M`, stored on increasing basis tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    dim_g: usize,
    dim_m: usize,
    values: BTreeMap<Tuple, Vec<FieldElem>>,
}

impl Cochain {
    pub fn zero(degree: usize, dim_g: usize, dim_m: usize) -> Cochain {
        Cochain { degree, dim_g, dim_m, values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.iter().all(FieldElem::is_zero))
    }

    /// Sets `f(x_{idx})`; the index list may be in any order.
    pub fn set(&mut self, mut idx: Tuple, value: Vec<FieldElem>) {
        assert_eq!(idx.len(), self.degree);
        assert_eq!(value.len(), self.dim_m);
        let sign = sort_with_sign(&mut idx).expect("repeated index");
        let v = if sign < 0 { value.iter().map(|x| -x).collect() } else { value };
        self.values.insert(idx, v);
    }

    /// `f(x_{idx})` for any index list.
    pub fn get(&self, idx: &[usize]) -> Vec<FieldElem> {
        let mut t = idx.to_vec();
        let zero = || vec![FieldElem::zero(); self.dim_m];
        let Some(sign) = sort_with_sign(&mut t) else { return zero() };
        match self.values.get(&t) {
            None => zero(),
            Some(v) if sign < 0 => v.iter().map(|x| -x).collect(),
            Some(v) => v.clone(),
        }
    }

    /// Flat coordinates: tuple-major in lexicographic tuple order.
    pub fn to_vector(&self) -> Vec<FieldElem> {
        tuples(self.dim_g, self.degree).iter().flat_map(|t| self.get(t)).collect()
    }

    pub fn from_vector(degree: usize, dim_g: usize, dim_m: usize, v: &[FieldElem]) -> Cochain {
        let mut c = Cochain::zero(degree, dim_g, dim_m);
        for (t, chunk) in tuples(dim_g, degree).into_iter().zip(v.chunks(dim_m.max(1))) {
            c.set(t, chunk.to_vec());
        }
        c
    }
}

fn add_scaled(acc: &mut [FieldElem], s: &FieldElem, v: &[FieldElem]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(s * x);
        }
    }
}

fn sign(i: usize) -> FieldElem {
    FieldElem::from_int(if i % 2 == 0 { 1 } else { -1 })
}

/// `df(v_0,…,v_k) = Σ_i (−1)^i v_i·f(…v̂_i…) + Σ_{i<j} (−1)^{i+j} f([v_i,v_j], …v̂_i…v̂_j…)`.
pub fn ce_coboundary(f: &Cochain, m: &QuotientModule) -> Cochain {
    let g = m.algebra();
    let (dg, dm) = (g.dim(), m.dim());
    let mut out = Cochain::zero(f.degree + 1, dg, dm);
    for t in tuples(dg, f.degree + 1) {
        let mut val = vec![FieldElem::zero(); dm];
        for (i, &a) in t.iter().enumerate() {
            let mut rest = t.clone();
            rest.remove(i);
            let fv = f.get(&rest);
            add_scaled(&mut val, &sign(i), &m.action(a).mul_vec(&fv));
        }
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let rest: Vec<usize> = t.iter().enumerate().filter(|(p, _)| *p != i && *p != j).map(|(_, &x)| x).collect();
                let s = sign(i + j);
                for (c, coef) in g.structure(t[i], t[j]).iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut args = vec![c];
                    args.extend_from_slice(&rest);
                    add_scaled(&mut val, &(&s * coef), &f.get(&args));
                }
            }
        }
        out.set(t, val);
    }
    out
}

/// Matrix of `d^k : C^k → C^{k+1}` in the coordinates of [`Cochain::to_vector`].
pub fn coboundary_matrix(g: &LieAlgebraData, m: &QuotientModule, k: usize) -> SparseMatrix {
    let (dg, dm) = (g.dim(), m.dim());
    let cols: BTreeMap<Tuple, usize> = tuples(dg, k).into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut out = SparseMatrix::new(cols.len() * dm);
    for t in tuples(dg, k + 1) {
        let mut rows: Vec<Vec<(usize, FieldElem)>> = vec![Vec::new(); dm];
        for (i, &a) in t.iter().enumerate() {
            let mut rest = t.clone();
            rest.remove(i);
            let base = cols[&rest] * dm;
            let act = m.action(a);
            for (r, row) in rows.iter_mut().enumerate() {
                for s in 0..dm {
                    let v = act.get(r, s);
                    if !v.is_zero() {
                        row.push((base + s, &sign(i) * v));
                    }
                }
            }
        }
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let rest: Vec<usize> = t.iter().enumerate().filter(|(p, _)| *p != i && *p != j).map(|(_, &x)| x).collect();
                for (c, coef) in g.structure(t[i], t[j]).iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut args = vec![c];
                    args.extend_from_slice(&rest);
                    let Some(sg) = sort_with_sign(&mut args) else { continue };
                    let v = &(&sign(i + j) * coef) * &FieldElem::from_int(sg as i64);
                    let base = cols[&args] * dm;
                    for (r, row) in rows.iter_mut().enumerate() {
                        row.push((base + r, v.clone()));
                    }
                }
            }
        }
        for row in rows {
            out.push_row(row);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularRank {
    pub prime: u64,
    pub rank_out: usize,
    pub rank_in: usize,
}

/// `dim H^k = dim C^k − rank d^k − rank d^{k−1}` with the ranks behind it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub degree: usize,
    pub cochain_dim: usize,
    /// rank of `d^k`
    pub rank_out: usize,
    /// rank of `d^{k−1}`
    pub rank_in: usize,
    pub dim: usize,
    pub modular: Vec<ModularRank>,
    pub modular_agrees: bool,
}

fn matrix_denominator(m: &SparseMatrix) -> BigInt {
    let mut acc = BigInt::from(1);
    for r in m.rows() {
        for (_, v) in r {
            acc = acc.lcm(&v.rational_part().denom());
            acc = acc.lcm(&v.radical_part().denom());
        }
    }
    acc
}

/// First prime tried for the modular rank cross-check.
pub const CROSS_CHECK_PRIME: u64 = 1_000_000_007;

/// `H^k(𝔤, M)` for `k ≤ 2`, with exact ranks cross-checked at two primes.
pub fn cohomology_dim(m: &QuotientModule, k: usize) -> Result<CohomologyReport, LieError> {
    if k > 2 {
        return Err(LieError::Degree(k));
    }
    let g = m.algebra();
    let cochain_dim = tuples(g.dim(), k).len() * m.dim();
    let d_out = coboundary_matrix(g, m, k);
    let d_in = (k > 0).then(|| coboundary_matrix(g, m, k - 1));
    let (rank_out, rank_in) = rayon::join(|| d_out.rank(), || d_in.as_ref().map_or(0, SparseMatrix::rank));
    let den = matrix_denominator(&d_out).lcm(&d_in.as_ref().map_or(BigInt::from(1), matrix_denominator));
    let modular: Vec<ModularRank> = select_primes(CROSS_CHECK_PRIME, 2, &den, g.radicand())
        .iter()
        .map(|ctx| ModularRank {
            prime: ctx.prime(),
            rank_out: d_out.rank_mod(ctx).expect("prime avoids denominators"),
            rank_in: d_in.as_ref().map_or(0, |d| d.rank_mod(ctx).expect("prime avoids denominators")),
        })
        .collect();
    let modular_agrees = modular.iter().all(|r| r.rank_out == rank_out && r.rank_in == rank_in);
    Ok(CohomologyReport {
        degree: k,
        cochain_dim,
        rank_out,
        rank_in,
        dim: cochain_dim - rank_out - rank_in,
        modular,
        modular_agrees,
    })
}
