//! Distributions given by twisted forms: construction from vector fields,
//! Plücker and integrability checks, normalisation of generators, tangent
//! conditions for deformations, and linear pull-backs.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::poly::monomials_of_degree;
use crate::exactalg::{Exponents, FieldElem, Matrix, Poly};
use crate::multical::{contract_volume, contract_volume_in, tuples, CalcError, PForm, Tuple, VField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoliationError {
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error("field {0} is not homogeneous")]
    InhomogeneousField(usize),
    #[error("the contracted form vanishes identically")]
    DegenerateOmega,
    #[error("normalisation constant vanishes")]
    ZeroConstant,
    #[error("residual of dη is not in the span of the correction forms")]
    NotInSpan,
    #[error("form does not descend: {0}")]
    NotDescending(DescendViolation),
}

/// A codimension-`q` distribution on `P^n` given by a twisted `q`-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub n: usize,
    pub q: usize,
    pub omega: PForm,
    /// Coefficient degree minus one.
    pub degree: i64,
    pub splitting_degrees: Option<Vec<i64>>,
}

/// `ω = i_{X_1} ⋯ i_{X_k} i_R Ω` with `k = n − q` homogeneous fields.
pub fn omega_from_fields(fields: &[VField]) -> Result<Distribution, FoliationError> {
    let nvars = fields.first().map(|f| f.nvars()).ok_or(CalcError::NoFields)?;
    let mut degs = Vec::with_capacity(fields.len());
    for (i, f) in fields.iter().enumerate() {
        if f.nvars() != nvars {
            return Err(CalcError::NumVarsMismatch(f.nvars(), nvars).into());
        }
        degs.push(f.degree().ok_or(FoliationError::InhomogeneousField(i))? as i64);
    }
    let mut all = fields.to_vec();
    all.push(VField::radial(nvars));
    let omega = contract_volume(&all)?;
    if omega.is_zero() {
        return Err(FoliationError::DegenerateOmega);
    }
    let coefdeg = omega.coefficient_degree().expect("contraction of homogeneous fields is homogeneous");
    let n = nvars - 1;
    Ok(Distribution {
        n,
        q: n - fields.len(),
        omega,
        degree: coefdeg as i64 - 1,
        splitting_degrees: Some(degs.iter().map(|d| 1 - d).collect()),
    })
}

impl Distribution {
    /// Wraps a form after checking that it descends to projective space.
    pub fn from_form(omega: PForm) -> Result<Distribution, FoliationError> {
        let degree = check_descends(&omega).map_err(FoliationError::NotDescending)?;
        let n = omega.nvars() - 1;
        Ok(Distribution { n, q: omega.arity(), omega, degree, splitting_degrees: None })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DescendViolation {
    ZeroForm,
    /// Entry whose coefficient degree differs from the first entry's.
    Inhomogeneous { tuple: Tuple },
    /// First nonzero entry of `i_R ω`.
    RadialContraction { tuple: Tuple, coefficient: String },
}

impl std::fmt::Display for DescendViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DescendViolation::ZeroForm => write!(f, "zero form"),
            DescendViolation::Inhomogeneous { tuple } => write!(f, "inhomogeneous entry at {tuple:?}"),
            DescendViolation::RadialContraction { tuple, coefficient } => {
                write!(f, "i_R ω has entry {coefficient} at {tuple:?}")
            }
        }
    }
}

/// Checks homogeneity and `i_R ω = 0`; returns the degree `coefdeg − 1`.
pub fn check_descends(omega: &PForm) -> Result<i64, DescendViolation> {
    let mut it = omega.terms();
    let (_, first) = it.next().ok_or(DescendViolation::ZeroForm)?;
    let deg = first.homogeneous_degree();
    for (t, f) in omega.terms() {
        if deg.is_none() || f.homogeneous_degree() != deg {
            return Err(DescendViolation::Inhomogeneous { tuple: t.clone() });
        }
    }
    if omega.arity() > 0 {
        let ir = omega.interior(&VField::radial(omega.nvars())).expect("arity checked");
        let first = ir.terms().next().map(|(t, f)| (t.clone(), f.to_string()));
        if let Some((tuple, coefficient)) = first {
            return Err(DescendViolation::RadialContraction { tuple, coefficient });
        }
    }
    Ok(deg.unwrap() as i64 - 1)
}

/// Outcome of a check quantified over basis multivectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckResult {
    Pass,
    /// The first basis multivector, in lexicographic order, that fails.
    Counterexample(Tuple),
}

impl CheckResult {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckResult::Pass)
    }
}

/// `i_v ω` for the constant multivector `v = e_{j_1} ∧ … ∧ e_{j_k}`.
pub fn contract_basis(omega: &PForm, v: &[usize]) -> PForm {
    let mut w = omega.clone();
    for &j in v {
        w = w.interior(&VField::coordinate(omega.nvars(), j)).expect("arity suffices");
    }
    w
}

fn first_failure(nvars: usize, k: usize, fails: impl Fn(&[usize]) -> bool + Sync) -> CheckResult {
    let basis = tuples(nvars, k);
    match basis.par_iter().position_first(|v| fails(v)) {
        None => CheckResult::Pass,
        Some(i) => CheckResult::Counterexample(basis[i].clone()),
    }
}

/// `(i_v ω) ∧ ω = 0` for every basis `v ∈ Λ^{q−1}`.
pub fn check_pluecker(omega: &PForm) -> CheckResult {
    let q = omega.arity();
    if q == 0 || q + 1 > omega.nvars() {
        return CheckResult::Pass;
    }
    first_failure(omega.nvars(), q - 1, |v| {
        !contract_basis(omega, v).wedge(omega).expect("arity checked").is_zero()
    })
}

/// `(i_v ω) ∧ dω = 0` for every basis `v ∈ Λ^{q−1}`.
pub fn check_integrability(omega: &PForm) -> CheckResult {
    let q = omega.arity();
    if q == 0 || q + 2 > omega.nvars() {
        return CheckResult::Pass;
    }
    let dw = omega.d();
    first_failure(omega.nvars(), q - 1, |v| {
        !contract_basis(omega, v).wedge(&dw).expect("arity checked").is_zero()
    })
}

/// Result of normalising generators so that `dη` is a pure contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prepared {
    pub fields: Vec<VField>,
    pub constant: FieldElem,
    /// Correction polynomials: `X̃_i = X_i + (λ_i / c) R`.
    pub lambdas: Vec<Poly>,
}

/// Given `η = i_{X_1} ⋯ i_{X_q} i_R Ω`, finds `X̃_i = X_i + (λ_i/c) R` with
/// `dη = c · i_{X̃_1} ⋯ i_{X̃_q} Ω`, `c = (−1)^q (n + 1 − q + Σ deg X_i)`.
///
/// The `λ_i` solve `dη − c·i_{X_1}⋯i_{X_q}Ω = Σ λ_i B_i`, where `B_i` is the
/// contraction with `R` in slot `i`. Both identities are re-verified.
pub fn prepara_normalize(fields: &[VField]) -> Result<Prepared, FoliationError> {
    let nvars = fields.first().map(|f| f.nvars()).ok_or(CalcError::NoFields)?;
    let n = nvars as i64 - 1;
    let q = fields.len() as i64;
    let mut degs = Vec::new();
    for (i, f) in fields.iter().enumerate() {
        degs.push(f.degree().ok_or(FoliationError::InhomogeneousField(i))? as i64);
    }
    let sign = if q % 2 == 0 { 1 } else { -1 };
    let c = FieldElem::from_int(sign * (n + 1 - q + degs.iter().sum::<i64>()));
    if c.is_zero() {
        return Err(FoliationError::ZeroConstant);
    }
    let r = VField::radial(nvars);
    let mut with_r = fields.to_vec();
    with_r.push(r.clone());
    let eta = contract_volume(&with_r)?;
    let residual = eta.d().sub(&contract_volume_in(nvars, fields)?.scale(&c));

    // unknown columns: (field index, monomial of degree deg X_i − 1)
    let mut cols: Vec<(usize, Exponents)> = Vec::new();
    let mut basis_terms: Vec<PForm> = Vec::new();
    for i in 0..fields.len() {
        if degs[i] == 0 {
            continue;
        }
        let mut slot = fields.to_vec();
        slot[i] = r.clone();
        let b = contract_volume(&slot)?;
        for m in monomials_of_degree(nvars, (degs[i] - 1) as u32) {
            basis_terms.push(b.mul_poly(&Poly::monomial(nvars, m.clone(), FieldElem::one())));
            cols.push((i, m));
        }
    }
    let mut lambdas: Vec<Poly> = vec![Poly::zero(nvars); fields.len()];
    if !residual.is_zero() {
        let mut rows: BTreeMap<(Tuple, Exponents), usize> = BTreeMap::new();
        let key = |t: &Tuple, e: &Exponents, rows: &mut BTreeMap<(Tuple, Exponents), usize>| {
            let k = rows.len();
            *rows.entry((t.clone(), e.clone())).or_insert(k)
        };
        let mut entries: Vec<(usize, usize, FieldElem)> = Vec::new();
        for (j, b) in basis_terms.iter().enumerate() {
            for (t, f) in b.terms() {
                for (e, v) in f.terms() {
                    entries.push((key(t, e, &mut rows), j, v.clone()));
                }
            }
        }
        let mut rhs_entries = Vec::new();
        for (t, f) in residual.terms() {
            for (e, v) in f.terms() {
                rhs_entries.push((key(t, e, &mut rows), v.clone()));
            }
        }
        let mut a = Matrix::zeros(rows.len(), cols.len());
        for (i, j, v) in entries {
            let s = a.get(i, j) + &v;
            a.set(i, j, s);
        }
        let mut rhs = vec![FieldElem::zero(); rows.len()];
        for (i, v) in rhs_entries {
            rhs[i] = &rhs[i] + &v;
        }
        let x = a.solve(&rhs).ok_or(FoliationError::NotInSpan)?;
        for ((i, m), v) in cols.iter().zip(x) {
            lambdas[*i].add_term(m.clone(), &v);
        }
    }
    let cinv = c.inv();
    let adjusted: Vec<VField> = fields
        .iter()
        .zip(&lambdas)
        .map(|(x, l)| x.add(&r.mul_poly(&l.scale(&cinv))))
        .collect();
    // post hoc verification of both identities
    let lhs = contract_volume_in(nvars, &adjusted)?.scale(&c);
    let mut adj_r = adjusted.clone();
    adj_r.push(r);
    if lhs != eta.d() || contract_volume(&adj_r)? != eta {
        return Err(FoliationError::NotInSpan);
    }
    Ok(Prepared { fields: adjusted, constant: c, lambdas })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TangentMode {
    Codim1,
    Grass,
}

/// Outcome of [`deformation_tangent_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub result: CheckResult,
    /// Codimension-one mode only: whether `dω ∧ dη = 0` gave the same answer.
    pub closed_form_agrees: Option<bool>,
}

/// First-order conditions for `η` to be tangent at `θ`.
///
/// `Codim1`: `θ ∧ dη + η ∧ dθ = 0`, cross-checked with `dθ ∧ dη = 0`
/// (equivalent when both forms descend). `Grass`:
/// `i_v η ∧ θ + i_v θ ∧ η = 0` for basis `v ∈ Λ^{q−1}`.
pub fn deformation_tangent_check(theta: &PForm, eta: &PForm, mode: TangentMode) -> Result<TangentReport, CalcError> {
    if theta.arity() != eta.arity() {
        return Err(CalcError::ArityMismatch(theta.arity(), eta.arity()));
    }
    if theta.nvars() != eta.nvars() {
        return Err(CalcError::NumVarsMismatch(theta.nvars(), eta.nvars()));
    }
    let nvars = theta.nvars();
    match mode {
        TangentMode::Codim1 => {
            let q = theta.arity();
            if 2 * q + 1 > nvars {
                return Ok(TangentReport { result: CheckResult::Pass, closed_form_agrees: None });
            }
            let lin = theta.wedge(&eta.d())?.add(&eta.wedge(&theta.d())?);
            let result = if lin.is_zero() { CheckResult::Pass } else { CheckResult::Counterexample(Vec::new()) };
            let agrees = if 2 * q + 2 <= nvars {
                Some(theta.d().wedge(&eta.d())?.is_zero() == lin.is_zero())
            } else {
                None
            };
            Ok(TangentReport { result, closed_form_agrees: agrees })
        }
        TangentMode::Grass => {
            let q = theta.arity();
            if q == 0 || q + 1 > nvars {
                return Ok(TangentReport { result: CheckResult::Pass, closed_form_agrees: None });
            }
            let result = first_failure(nvars, q - 1, |v| {
                let a = contract_basis(eta, v).wedge(theta).expect("arity checked");
                let b = contract_basis(theta, v).wedge(eta).expect("arity checked");
                !a.add(&b).is_zero()
            });
            Ok(TangentReport { result, closed_form_agrees: None })
        }
    }
}

/// Pull-back under the projection `(z_0, …, z_{n+m}) ↦ (z_0, …, z_n)`:
/// the same coefficients read in `m` more variables. Each new kernel
/// direction is a constant field, contributing a splitting degree `1`.
pub fn pullback_linear(d: &Distribution, m: usize) -> Distribution {
    assert!(m >= 1, "pull-back needs at least one extra dimension");
    Distribution {
        n: d.n + m,
        q: d.q,
        omega: d.omega.extend_vars(m),
        degree: d.degree,
        splitting_degrees: d.splitting_degrees.as_ref().map(|e| {
            let mut e = e.clone();
            e.extend(std::iter::repeat(1).take(m));
            e
        }),
    }
}
