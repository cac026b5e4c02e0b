//! Singular sets of forms: coefficient ideals, the minor matrix of the chain
//! algebras, and finite-field slice certificates for lower bounds on
//! codimension.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::modp::{denominator_lcm_of, inv_mod, mul_mod, select_primes};
use crate::exactalg::{poly_det, FieldElem, FpPoly, ModError, Poly, PrimeContext};
use crate::foliation::Distribution;
use crate::multical::PForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingError {
    #[error("the form vanishes identically")]
    ZeroForm,
    #[error("expected {expected} columns, got {got}")]
    ColumnCount { expected: usize, got: usize },
    #[error("column index {0} out of range")]
    ColumnRange(usize),
    #[error("minor matrix needs n ≥ 3, got {0}")]
    TooSmall(usize),
    #[error("claimed codimension {codim} exceeds {nvars} variables")]
    CodimTooLarge { codim: usize, nvars: usize },
    #[error("ideal has no generators")]
    EmptyIdeal,
    #[error(transparent)]
    Modular(#[from] ModError),
}

/// Homogeneous ideal given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub id: String,
    pub nvars: usize,
    pub generators: Vec<Poly>,
}

impl IdealSpec {
    pub fn new(id: impl Into<String>, nvars: usize, generators: Vec<Poly>) -> Result<IdealSpec, SingError> {
        let generators: Vec<Poly> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            return Err(SingError::EmptyIdeal);
        }
        assert!(generators.iter().all(|g| g.nvars() == nvars && g.homogeneous_degree().is_some()));
        Ok(IdealSpec { id: id.into(), nvars, generators })
    }

    /// `(z_0, …, z_{k−1})`.
    pub fn coordinate(nvars: usize, k: usize) -> IdealSpec {
        IdealSpec::new(format!("coord{k}"), nvars, (0..k).map(|i| Poly::var(nvars, i)).collect()).unwrap()
    }

    pub fn radicand(&self) -> Option<i64> {
        self.generators.iter().find_map(Poly::radicand)
    }
}

/// The ideal of coefficients of `ω`.
pub fn coefficient_ideal(id: &str, omega: &PForm) -> Result<IdealSpec, SingError> {
    if omega.is_zero() {
        return Err(SingError::ZeroForm);
    }
    IdealSpec::new(id, omega.nvars(), omega.coefficients())
}

/// `(n−1) × (n+1)` matrix whose maximal minors cut out the singular set of
/// `dω` for the chain algebra with `r = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorMatrix {
    pub n: usize,
    pub entries: Vec<Vec<Poly>>,
}

/// Sign in front of the `(n−1)(n−2)` term of `λ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSign {
    /// `λ_j = (n+1)(n−2j) − (n−1)(n−2)`, the customary statement.
    #[default]
    Printed,
    /// `λ_j = (n+1)(n−2j) + (n−1)(n−2)`: the minors then equal the
    /// coefficients of `dω` up to one global sign.
    Derived,
}

pub fn lambda(n: usize, j: usize) -> i64 {
    lambda_with(n, j, LambdaSign::Printed)
}

pub fn lambda_with(n: usize, j: usize, sign: LambdaSign) -> i64 {
    let n = n as i64;
    let tail = (n - 1) * (n - 2);
    let head = (n + 1) * (n - 2 * j as i64);
    match sign {
        LambdaSign::Printed => head - tail,
        LambdaSign::Derived => head + tail,
    }
}

pub fn build_infinito_matrix(n: usize) -> Result<MinorMatrix, SingError> {
    build_infinito_matrix_with(n, LambdaSign::Printed)
}

/// First row `λ_j z_j`, row `k + 1` the components `z_{j+k}` of `Y_k`.
pub fn build_infinito_matrix_with(n: usize, sign: LambdaSign) -> Result<MinorMatrix, SingError> {
    if n < 3 {
        return Err(SingError::TooSmall(n));
    }
    let nv = n + 1;
    let mut entries = vec![(0..nv).map(|j| Poly::var(nv, j).scale(&FieldElem::from_int(lambda_with(n, j, sign)))).collect()];
    for k in 1..=n - 2 {
        entries.push((0..nv).map(|j| if j + k <= n { Poly::var(nv, j + k) } else { Poly::zero(nv) }).collect());
    }
    Ok(MinorMatrix { n, entries })
}

impl MinorMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    /// Replaces `z_var` by zero in every entry.
    pub fn specialize_zero(&self, var: usize) -> MinorMatrix {
        MinorMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|f| f.substitute(var, &FieldElem::zero())).collect())
                .collect(),
        }
    }
}

/// Determinant of the square submatrix on `cols` (in the given order).
pub fn selected_minor(m: &MinorMatrix, cols: &[usize]) -> Result<Poly, SingError> {
    if cols.len() != m.rows() {
        return Err(SingError::ColumnCount { expected: m.rows(), got: cols.len() });
    }
    let width = m.entries[0].len();
    if let Some(&c) = cols.iter().find(|&&c| c >= width) {
        return Err(SingError::ColumnRange(c));
    }
    let sub: Vec<Vec<Poly>> = m.entries.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
    Ok(poly_det(&sub))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceVerdict {
    CertifiedGeq,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeTally {
    pub prime: u64,
    /// Trials whose slice met the zero set away from the origin.
    pub hits: usize,
    pub supports: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub prime: u64,
    pub trial: usize,
    pub point: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceCertificate {
    pub ideal_id: String,
    pub claimed_codim: usize,
    pub primes: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    pub verdict: SliceVerdict,
    pub tallies: Vec<PrimeTally>,
    pub witnesses: Vec<Witness>,
}

impl SliceCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == SliceVerdict::CertifiedGeq
    }
}

/// Parameters for [`slice_codim_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceOptions {
    /// Explicit primes; when empty, `count` primes from 101 upwards are
    /// chosen to suit the ideal's denominators and radicand.
    pub primes: Vec<u64>,
    pub count: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions { primes: Vec::new(), count: 2, trials: 8, seed: 0 }
    }
}

/// First prime tried when none are given.
pub const DEFAULT_PRIME_START: u64 = 101;

pub fn prime_contexts(ideal: &IdealSpec, opts: &SliceOptions) -> Result<Vec<PrimeContext>, SingError> {
    let rad = ideal.radicand();
    if opts.primes.is_empty() {
        let den = denominator_lcm_of(&ideal.generators);
        return Ok(select_primes(DEFAULT_PRIME_START, opts.count, &den, rad));
    }
    opts.primes.iter().map(|&p| PrimeContext::new(p, rad).map_err(SingError::from)).collect()
}

fn independent_mod(vs: &[Vec<u64>], p: u64) -> bool {
    let mut rows = vs.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][c], p);
        for i in r + 1..rows.len() {
            let f = mul_mod(rows[i][c], inv, p);
            if f == 0 {
                continue;
            }
            for j in c..ncols {
                rows[i][j] = (rows[i][j] + p - mul_mod(f, rows[r][j], p)) % p;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r == rows.len()
}

/// Projective points of `P^{c−1}(F_p)`: first nonzero coordinate is 1.
/// `g(Σ_i t_i v_i)` as a polynomial in the slice coordinates `t`, keyed by
/// exponent vectors of length `c`.
fn restrict(g: &FpPoly, basis: &[Vec<u64>], p: u64) -> BTreeMap<Vec<u32>, u64> {
    let c = basis.len();
    type Sparse = BTreeMap<Vec<u32>, u64>;
    let mul = |a: &Sparse, b: &Sparse| -> Sparse {
        let mut out = Sparse::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let v = out.entry(e).or_insert(0);
                *v = (*v + mul_mod(*ca, *cb, p)) % p;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    };
    let one: Sparse = [(vec![0; c], 1 % p)].into_iter().collect();
    let nvars = g.nvars();
    // powers[j][k] = (Σ_i v_i[j] t_i)^k
    let maxdeg = g.max_degree() as usize;
    let powers: Vec<Vec<Sparse>> = (0..nvars)
        .map(|j| {
            let lin: Sparse = (0..c)
                .filter(|&i| basis[i][j] != 0)
                .map(|i| {
                    let mut e = vec![0; c];
                    e[i] = 1;
                    (e, basis[i][j])
                })
                .collect();
            let mut pw = vec![one.clone()];
            for k in 1..=maxdeg {
                let next = mul(&pw[k - 1], &lin);
                pw.push(next);
            }
            pw
        })
        .collect();
    let mut out = Sparse::new();
    for (e, coef) in g.terms() {
        let mut t: Sparse = [(vec![0; c], *coef)].into_iter().collect();
        for (j, &k) in e.iter().enumerate() {
            if k > 0 {
                t = mul(&t, &powers[j][k as usize]);
            }
        }
        for (m, v) in t {
            let slot = out.entry(m).or_insert(0);
            *slot = (*slot + v) % p;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Coefficients in the last slice coordinate once the others are fixed.
fn univariate(g: &BTreeMap<Vec<u32>, u64>, pows: &[Vec<u64>], deg: usize, p: u64) -> Vec<u64> {
    let last = pows.len();
    let mut out = vec![0u64; deg + 1];
    for (e, c) in g {
        let mut t = *c;
        for (i, &k) in e[..last].iter().enumerate() {
            if k > 0 {
                t = mul_mod(t, pows[i][k as usize], p);
            }
        }
        let slot = &mut out[e[last] as usize];
        *slot = (*slot + t) % p;
    }
    out
}

fn horner(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// First nonzero `t ∈ F_p^c`, one per projective point (leading nonzero
/// coordinate equal to 1, later coordinates in odometer order), at which
/// every restricted generator vanishes.
fn search_slice(gens: &[BTreeMap<Vec<u32>, u64>], c: usize, p: u64) -> Option<Vec<u64>> {
    let deg = gens.iter().flat_map(|g| g.keys().map(|e| e[c - 1] as usize)).max().unwrap_or(0);
    let maxdeg = gens.iter().flat_map(|g| g.keys().flat_map(|e| e.iter().copied())).max().unwrap_or(0) as usize;
    let mut t = vec![0u64; c];
    for lead in 0..c - 1 {
        t.iter_mut().for_each(|x| *x = 0);
        t[lead] = 1;
        loop {
            let pows: Vec<Vec<u64>> = t[..c - 1]
                .iter()
                .map(|&x| {
                    let mut v = vec![1 % p; maxdeg + 1];
                    for k in 1..=maxdeg {
                        v[k] = mul_mod(v[k - 1], x, p);
                    }
                    v
                })
                .collect();
            let polys: Vec<Vec<u64>> = gens.iter().map(|g| univariate(g, &pows, deg, p)).collect();
            for s in 0..p {
                if polys.iter().all(|u| horner(u, s, p) == 0) {
                    t[c - 1] = s;
                    return Some(t);
                }
            }
            // odometer on positions lead+1 .. c−2
            let mut i = c - 1;
            while i > lead + 1 {
                i -= 1;
                t[i] += 1;
                if t[i] < p {
                    break;
                }
                t[i] = 0;
            }
            if t[lead + 1..c - 1].iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    t.iter_mut().for_each(|x| *x = 0);
    t[c - 1] = 1;
    let mut zero = vec![0; maxdeg + 1];
    zero[0] = 1 % p;
    let pows = vec![zero; c - 1];
    gens.iter().all(|g| univariate(g, &pows, deg, p).iter().copied().fold(0, |a, b| (a + b) % p) == 0).then_some(t)
}

fn slice_trial(gens: &[FpPoly], nvars: usize, c: usize, p: u64, seed: u64, stream: u64) -> Option<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let basis = loop {
        let vs: Vec<Vec<u64>> = (0..c).map(|_| (0..nvars).map(|_| rng.gen_range(0..p)).collect()).collect();
        if independent_mod(&vs, p) {
            break vs;
        }
    };
    let restricted: Vec<_> = gens.iter().map(|g| restrict(g, &basis, p)).collect();
    let t = search_slice(&restricted, c, p)?;
    let point: Vec<u64> = (0..nvars).map(|j| t.iter().zip(&basis).fold(0, |acc, (ti, v)| (acc + mul_mod(*ti, v[j], p)) % p)).collect();
    debug_assert!(gens.iter().all(|g| g.eval(&point) == 0));
    Some(point)
}

/// Monte-Carlo lower bound `codim V(I) ≥ c` by random `c`-dimensional slices.
///
/// A prime supports the claim when fewer than half of its trials meet `V(I)`
/// away from the origin; the claim is certified when every prime supports
/// it. Every witness is an exact `F_p` zero of all generators.
pub fn slice_codim_certificate(ideal: &IdealSpec, c: usize, opts: &SliceOptions) -> Result<SliceCertificate, SingError> {
    if c == 0 || c > ideal.nvars {
        return Err(SingError::CodimTooLarge { codim: c, nvars: ideal.nvars });
    }
    let ctxs = prime_contexts(ideal, opts)?;
    let mut reduced = Vec::with_capacity(ctxs.len());
    for ctx in &ctxs {
        let mut g: Vec<FpPoly> = ideal.generators.iter().map(|f| ctx.reduce_poly(f)).collect::<Result<_, _>>()?;
        g.sort_by_key(|f| f.terms().len());
        reduced.push(g);
    }
    let jobs: Vec<(usize, usize)> = (0..ctxs.len()).flat_map(|i| (0..opts.trials).map(move |t| (i, t))).collect();
    let results: Vec<Option<Vec<u64>>> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let p = ctxs[i].prime();
            slice_trial(&reduced[i], ideal.nvars, c, p, opts.seed, (p << 20) | t as u64)
        })
        .collect();
    let mut tallies: Vec<PrimeTally> =
        ctxs.iter().map(|ctx| PrimeTally { prime: ctx.prime(), hits: 0, supports: true }).collect();
    let mut witnesses = Vec::new();
    for (&(i, t), r) in jobs.iter().zip(results) {
        if let Some(point) = r {
            tallies[i].hits += 1;
            witnesses.push(Witness { prime: ctxs[i].prime(), trial: t, point });
        }
    }
    for t in &mut tallies {
        t.supports = 2 * t.hits < opts.trials;
    }
    let verdict = if tallies.iter().all(|t| t.supports) { SliceVerdict::CertifiedGeq } else { SliceVerdict::Refuted };
    Ok(SliceCertificate {
        ideal_id: ideal.id.clone(),
        claimed_codim: c,
        primes: ctxs.iter().map(PrimeContext::prime).collect(),
        trials: opts.trials,
        seed: opts.seed,
        verdict,
        tallies,
        witnesses,
    })
}

/// Codimension hypotheses of a distribution: `sing(ω) ≥ 2` always, and
/// `sing(dω) ≥ 3` for `q = 1` or `sing(ω) ≥ 3` for `q ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodimReport {
    pub q: usize,
    pub omega_geq2: SliceCertificate,
    pub split_hypothesis: SliceCertificate,
}

impl CodimReport {
    pub fn certified(&self) -> bool {
        self.omega_geq2.certified() && self.split_hypothesis.certified()
    }
}

pub fn codim_report(d: &Distribution, opts: &SliceOptions) -> Result<CodimReport, SingError> {
    let omega = coefficient_ideal("sing(omega)", &d.omega)?;
    let omega_geq2 = slice_codim_certificate(&omega, 2, opts)?;
    let split_hypothesis = if d.q == 1 {
        let dw = coefficient_ideal("sing(d omega)", &d.omega.d())?;
        slice_codim_certificate(&dw, 3, opts)?
    } else {
        slice_codim_certificate(&omega, 3, opts)?
    };
    Ok(CodimReport { q: d.q, omega_geq2, split_hypothesis })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Projective points of `F_p^c` in search order, by brute force.
    fn projective_points(c: usize, p: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for lead in 0..c {
            let free = c - 1 - lead;
            for k in 0..p.pow(free as u32) {
                let mut t = vec![0; c];
                t[lead] = 1;
                let mut r = k;
                for i in (lead + 1..c).rev() {
                    t[i] = r % p;
                    r /= p;
                }
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn slice_search_matches_brute_force() {
        let p = 7;
        let ctx = PrimeContext::new(p, None).unwrap();
        let x = |i| Poly::var(3, i);
        let fe = |v| FieldElem::from_int(v);
        let systems = vec![
            vec![&(&x(0) * &x(1)) - &x(2).pow(2), &(&x(0) + &x(1).scale(&fe(2))) + &x(2).scale(&fe(3))],
            vec![&x(1).pow(2) - &x(2).pow(2), x(0).clone()],
            vec![&x(0).pow(3) + &x(2).pow(3)],
            vec![x(0), x(1), x(2)],
        ];
        let identity: Vec<Vec<u64>> = (0..3).map(|i| (0..3).map(|j| u64::from(i == j)).collect()).collect();
        let points = projective_points(3, p);
        assert_eq!(points.len() as u64, (p.pow(3) - 1) / (p - 1));
        for gens in systems {
            let red: Vec<FpPoly> = gens.iter().map(|g| ctx.reduce_poly(g).unwrap()).collect();
            let restricted: Vec<_> = red.iter().map(|g| restrict(g, &identity, p)).collect();
            let want = points.iter().find(|t| red.iter().all(|g| g.eval(t) == 0)).cloned();
            assert_eq!(search_slice(&restricted, 3, p), want);
        }
    }

    #[test]
    fn restriction_agrees_with_evaluation() {
        let p = 11;
        let ctx = PrimeContext::new(p, None).unwrap();
        let x = |i| Poly::var(4, i);
        let g = ctx.reduce_poly(&(&(&x(0) * &x(3)) - &(&x(1) * &x(2))).pow(2)).unwrap();
        let basis = vec![vec![1, 2, 3, 4], vec![5, 0, 7, 1], vec![0, 9, 2, 6]];
        let r = restrict(&g, &basis, p);
        for t in projective_points(3, p).iter().step_by(7) {
            let pt: Vec<u64> = (0..4).map(|j| (0..3).fold(0, |a, i| (a + t[i] * basis[i][j]) % p)).collect();
            let val = r.iter().fold(0, |a, (e, c)| {
                (a + e.iter().zip(t).fold(*c, |acc, (&k, &ti)| mul_mod(acc, crate::exactalg::modp::pow_mod(ti, k as u64, p), p))) % p
            });
            assert_eq!(val, g.eval(&pt));
        }
    }

    #[test]
    fn hyperplane() {
        let i = IdealSpec::coordinate(4, 1);
        let o = SliceOptions::default();
        assert!(slice_codim_certificate(&i, 1, &o).unwrap().certified());
        let r = slice_codim_certificate(&i, 2, &o).unwrap();
        assert_eq!(r.verdict, SliceVerdict::Refuted);
        assert!(r.witnesses.iter().all(|w| w.point[0] == 0 && w.point.iter().any(|&x| x != 0)));
    }

    #[test]
    fn lambdas_nonzero_at_the_end() {
        for n in 3..12 {
            for j in n - 2..=n {
                assert_ne!(lambda(n, j), 0, "n={n} j={j}");
            }
        }
        assert_eq!((0..4).map(|j| lambda(3, j)).collect::<Vec<_>>(), vec![10, 2, -6, -14]);
        let derived: Vec<i64> = (0..4).map(|j| lambda_with(3, j, LambdaSign::Derived)).collect();
        assert_eq!(derived, vec![14, 6, -2, -10]);
    }

    #[test]
    fn duplicate_columns_vanish() {
        let m = build_infinito_matrix(4).unwrap();
        assert!(selected_minor(&m, &[1, 1, 2]).unwrap().is_zero());
        assert!(matches!(selected_minor(&m, &[1, 2]), Err(SingError::ColumnCount { .. })));
    }
}
