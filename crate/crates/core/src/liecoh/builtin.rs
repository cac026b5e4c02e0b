use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::exactalg::{FieldElem, Matrix, Q};
use crate::exactalg::modp::is_prime;
use crate::extsearch;
use crate::multical::tuples;

use super::{structure_constants, LieAlgebraData, LieError};

fn ints_diag(d: impl IntoIterator<Item = i64>) -> Matrix {
    Matrix::diag(&d.into_iter().map(FieldElem::from_int).collect::<Vec<_>>())
}

/// `X = diag(n − 2i)`.
pub fn grading_element(n: usize) -> Matrix {
    ints_diag((0..=n as i64).map(|i| n as i64 - 2 * i))
}

/// `Y_k = Σ z_{i+k} ∂_i`, i.e. ones on the `k`-th superdiagonal.
pub fn shift(n: usize, k: usize) -> Matrix {
    let mut m = Matrix::zeros(n + 1, n + 1);
    for i in 0..=n.saturating_sub(k) {
        if i + k <= n {
            m.set(i, i + k, FieldElem::one());
        }
    }
    m
}

/// Chain algebra spanned by `X` and `Y_1, …, Y_{n−r}`.
pub fn chain_algebra(n: usize, r: usize) -> Result<LieAlgebraData, LieError> {
    if n < 2 || r < 1 || r >= n {
        return Err(LieError::InvalidParams(format!("chain needs 1 ≤ r < n, got n={n}, r={r}")));
    }
    let mut basis = vec![grading_element(n)];
    let mut names = vec!["X".to_string()];
    for k in 1..=n - r {
        basis.push(shift(n, k));
        names.push(format!("Y{k}"));
    }
    structure_constants(basis, Some(names))
}

/// Abelian algebra of traceless diagonal matrices, one per row of `weights`.
pub fn diagonal_algebra(weights: &[Vec<FieldElem>]) -> Result<LieAlgebraData, LieError> {
    let basis = weights.iter().map(|w| Matrix::diag(w)).collect();
    let names = (0..weights.len()).map(|i| format!("X{}", i + 1)).collect();
    structure_constants(basis, Some(names))
}

/// A fixed generic choice of `n − q` traceless integer weight rows on
/// `n + 1` coordinates: every maximal minor of the weights, with and without
/// the all-ones row appended, is nonzero and prime to every p in 100..1000.
pub fn default_diagonal_weights(n: usize, q: usize) -> Vec<Vec<FieldElem>> {
    let rows = n - q;
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1a9);
    loop {
        let w: Vec<Vec<i64>> = (0..rows)
            .map(|_| {
                let mut r: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
                r.push(-r.iter().sum::<i64>());
                r
            })
            .collect();
        if generic_weights(&w) {
            return w.into_iter().map(|r| r.into_iter().map(FieldElem::from_int).collect()).collect();
        }
    }
}

fn generic_weights(w: &[Vec<i64>]) -> bool {
    let width = w[0].len();
    let mut with_ones = w.to_vec();
    with_ones.push(vec![1; width]);
    [w.to_vec(), with_ones].iter().all(|m| {
        tuples(width, m.len()).iter().all(|cols| {
            let sub = Matrix::from_rows(m.iter().map(|r| cols.iter().map(|&c| FieldElem::from_int(r[c])).collect()).collect());
            let det = sub.det();
            let Some(d) = det.as_rational().filter(|d| !d.is_zero()) else { return false };
            let d = d.numer();
            (100u32..1000).all(|p| !is_prime(p as u64) || !(&d % p).is_zero())
        })
    })
}

/// Image of `sl(2)` acting on binary forms of degree `r`, basis `z_i = x^{r−i} y^i`.
pub fn sl2_sym(r: usize) -> Result<LieAlgebraData, LieError> {
    if r < 1 {
        return Err(LieError::InvalidParams("sl2_sym needs r ≥ 1".into()));
    }
    let h = grading_element(r);
    let mut y = Matrix::zeros(r + 1, r + 1);
    let mut f = Matrix::zeros(r + 1, r + 1);
    for i in 0..r {
        y.set(i, i + 1, FieldElem::from_int((r - i) as i64));
        f.set(i + 1, i, FieldElem::from_int(i as i64 + 1));
    }
    structure_constants(vec![h, y, f], Some(vec!["X".into(), "Y".into(), "F".into()]))
}

/// `X, Y_1, …, Y_{n−2}` built from an assignment of the extension unknowns.
pub fn extension_algebra(n: usize, values: &[FieldElem]) -> Result<LieAlgebraData, LieError> {
    let basis = extsearch::candidate_basis(n, values).map_err(|e| LieError::InvalidParams(e.to_string()))?;
    let names = std::iter::once("X".to_string()).chain((1..=n - 2).map(|k| format!("Y{k}"))).collect();
    structure_constants(basis, Some(names))
}

pub fn g6_values() -> Vec<FieldElem> {
    vec![FieldElem::rational(9, 8), FieldElem::rational(-3, 2)]
}

pub fn g7_values() -> Vec<FieldElem> {
    let s = |a: (i64, i64), b: (i64, i64)| FieldElem::quadratic(Q::new(a.0, a.1), Q::new(b.0, b.1), 3).unwrap();
    vec![s((0, 1), (1, 2)), s((1, 1), (-1, 1)), s((-3, 2), (1, 2))]
}

fn param_usize(p: &Value, key: &str) -> Result<usize, LieError> {
    p.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| LieError::InvalidParams(format!("missing integer parameter `{key}`")))
}

fn parse_entry(v: &Value, radicand: Option<i64>) -> Result<FieldElem, LieError> {
    match v {
        Value::String(s) => FieldElem::parse_compact(s, radicand).map_err(|e| LieError::Spec(e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(FieldElem::from_int)
            .ok_or_else(|| LieError::Spec(format!("non-integer number {n}; use a \"p/q\" string"))),
        other => Err(LieError::Spec(format!("bad matrix entry {other}"))),
    }
}

fn parse_rows(v: &Value, len: usize, radicand: Option<i64>, what: &str) -> Result<Vec<Vec<FieldElem>>, LieError> {
    let rows = v.as_array().ok_or_else(|| LieError::Spec(format!("`{what}` must be an array")))?;
    rows.iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| LieError::Spec(format!("`{what}` rows must be arrays")))?;
            if row.len() != len {
                return Err(LieError::Spec(format!("`{what}` row has {} entries, expected {len}", row.len())));
            }
            row.iter().map(|x| parse_entry(x, radicand)).collect()
        })
        .collect()
}

/// Named example algebras. `params` is a JSON object (ignored where unused).
pub fn builtin_algebra(name: &str, params: &Value) -> Result<LieAlgebraData, LieError> {
    match name {
        "chain" => chain_algebra(param_usize(params, "n")?, param_usize(params, "r")?),
        "infinito" => {
            let n = param_usize(params, "n")?;
            if n < 3 {
                return Err(LieError::InvalidParams("infinito needs n ≥ 3".into()));
            }
            chain_algebra(n, 2)
        }
        "aff_sym" => {
            let r = param_usize(params, "r")?;
            if r < 3 {
                return Err(LieError::InvalidParams("aff_sym needs r ≥ 3".into()));
            }
            chain_algebra(r, r - 1)
        }
        "sl2_sym" => sl2_sym(param_usize(params, "r")?),
        "diagonal" => {
            let n = param_usize(params, "n")?;
            let q = params.get("q").and_then(Value::as_u64).unwrap_or(1) as usize;
            if q == 0 || q >= n {
                return Err(LieError::InvalidParams(format!("diagonal needs 1 ≤ q < n, got q={q}")));
            }
            let w = match params.get("weights") {
                Some(v) => parse_rows(v, n + 1, None, "weights")?,
                None => default_diagonal_weights(n, q),
            };
            if w.len() != n - q {
                return Err(LieError::InvalidParams(format!("diagonal needs {} weight rows", n - q)));
            }
            diagonal_algebra(&w)
        }
        "g6" => extension_algebra(6, &g6_values()),
        "g7" => extension_algebra(7, &g7_values()),
        other => Err(LieError::UnknownBuiltin(other.to_string())),
    }
}

/// Reads either `{ "builtin": name, "params": {...} }` or
/// `{ "n": int, "radicand": int|null, "generators": [[entries]] }` with each
/// generator a row-major list of `(n+1)²` entries.
pub fn parse_algebra_json(v: &Value) -> Result<LieAlgebraData, LieError> {
    if let Some(name) = v.get("builtin") {
        let name = name.as_str().ok_or_else(|| LieError::Spec("`builtin` must be a string".into()))?;
        let empty = Value::Object(Default::default());
        return builtin_algebra(name, v.get("params").unwrap_or(&empty));
    }
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| LieError::Spec("missing `n`".into()))? as usize;
    let radicand = match v.get("radicand") {
        None | Some(Value::Null) => None,
        Some(r) => Some(r.as_i64().ok_or_else(|| LieError::Spec("`radicand` must be an integer".into()))?),
    };
    let gens = v.get("generators").ok_or_else(|| LieError::Spec("missing `generators`".into()))?;
    let size = n + 1;
    let flat = parse_rows(gens, size * size, radicand, "generators")?;
    let basis = flat
        .into_iter()
        .map(|e| Matrix::from_rows(e.chunks(size).map(<[FieldElem]>::to_vec).collect()))
        .collect();
    structure_constants(basis, None)
}
