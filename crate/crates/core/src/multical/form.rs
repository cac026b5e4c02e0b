use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::{FieldElem, Poly};

use super::vfield::VField;
use super::CalcError;

/// Index tuple `(i_1 < … < i_p)` labelling `dx_{i_1} ∧ … ∧ dx_{i_p}`.
pub type Tuple = Vec<usize>;

/// Alternating polynomial `p`-form `Σ f_I dx_I` on `C^{nvars}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PForm {
    nvars: usize,
    arity: usize,
    terms: BTreeMap<Tuple, Poly>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(sign)
}

/// All strictly increasing `k`-tuples from `0..n`, lexicographic.
pub fn tuples(n: usize, k: usize) -> Vec<Tuple> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Tuple, out: &mut Vec<Tuple>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

impl PForm {
    pub fn zero(nvars: usize, arity: usize) -> PForm {
        PForm { nvars, arity, terms: BTreeMap::new() }
    }

    pub fn function(f: Poly) -> PForm {
        let mut w = PForm::zero(f.nvars(), 0);
        w.add_entry(Vec::new(), f);
        w
    }

    pub fn dx(nvars: usize, i: usize) -> PForm {
        let mut w = PForm::zero(nvars, 1);
        w.add_entry(vec![i], Poly::one(nvars));
        w
    }

    /// `Ω = dx_0 ∧ … ∧ dx_{n}`.
    pub fn volume(nvars: usize) -> PForm {
        let mut w = PForm::zero(nvars, nvars);
        w.add_entry((0..nvars).collect(), Poly::one(nvars));
        w
    }

    /// Adds `f dx_{idx}` for an index list in any order.
    pub fn add_entry(&mut self, mut idx: Tuple, f: Poly) {
        assert_eq!(idx.len(), self.arity, "tuple length must equal the arity");
        assert_eq!(f.nvars(), self.nvars, "coefficient variable count");
        assert!(idx.iter().all(|&i| i < self.nvars), "index out of range");
        if f.is_zero() {
            return;
        }
        let Some(sign) = sort_with_sign(&mut idx) else { return };
        let f = if sign < 0 { -&f } else { f };
        match self.terms.remove(&idx) {
            None => {
                self.terms.insert(idx, f);
            }
            Some(g) => {
                let s = &g + &f;
                if !s.is_zero() {
                    self.terms.insert(idx, s);
                }
            }
        }
    }

    pub fn from_entries(nvars: usize, arity: usize, entries: impl IntoIterator<Item = (Tuple, Poly)>) -> PForm {
        let mut w = PForm::zero(nvars, arity);
        for (i, f) in entries {
            w.add_entry(i, f);
        }
        w
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: &[usize]) -> Poly {
        self.terms.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient polynomials in tuple order.
    pub fn coefficients(&self) -> Vec<Poly> {
        self.terms.values().cloned().collect()
    }

    /// Common degree of all coefficients; `None` for zero or mixed degrees.
    pub fn coefficient_degree(&self) -> Option<u32> {
        let mut d = None;
        for f in self.terms.values() {
            let k = f.homogeneous_degree()?;
            match d {
                None => d = Some(k),
                Some(e) if e != k => return None,
                _ => {}
            }
        }
        d
    }

    pub fn radicand(&self) -> Option<i64> {
        self.terms.values().find_map(|f| f.radicand())
    }

    fn check_same(&self, o: &PForm) -> Result<(), CalcError> {
        if self.nvars != o.nvars {
            return Err(CalcError::NumVarsMismatch(self.nvars, o.nvars));
        }
        if self.arity != o.arity {
            return Err(CalcError::ArityMismatch(self.arity, o.arity));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &PForm) -> Result<PForm, CalcError> {
        self.check_same(o)?;
        let mut r = self.clone();
        for (i, f) in &o.terms {
            r.add_entry(i.clone(), f.clone());
        }
        Ok(r)
    }

    pub fn add(&self, o: &PForm) -> PForm {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, o: &PForm) -> PForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PForm {
        PForm {
            nvars: self.nvars,
            arity: self.arity,
            terms: self.terms.iter().map(|(i, f)| (i.clone(), -f)).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElem) -> PForm {
        if s.is_zero() {
            return PForm::zero(self.nvars, self.arity);
        }
        PForm {
            nvars: self.nvars,
            arity: self.arity,
            terms: self.terms.iter().map(|(i, f)| (i.clone(), f.scale(s))).collect(),
        }
    }

    pub fn mul_poly(&self, g: &Poly) -> PForm {
        PForm::from_entries(self.nvars, self.arity, self.terms.iter().map(|(i, f)| (i.clone(), f * g)))
    }

    /// `i_X ω`; slot `j` (0-based) of the sorted tuple contributes `(−1)^j`.
    pub fn interior(&self, x: &VField) -> Result<PForm, CalcError> {
        if self.arity == 0 {
            return Err(CalcError::ArityZero);
        }
        if x.nvars() != self.nvars {
            return Err(CalcError::NumVarsMismatch(x.nvars(), self.nvars));
        }
        let mut r = PForm::zero(self.nvars, self.arity - 1);
        for (idx, f) in &self.terms {
            for (j, &i) in idx.iter().enumerate() {
                let c = x.component(i);
                if c.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(j);
                let t = c * f;
                r.add_entry(rest, if j % 2 == 0 { t } else { -&t });
            }
        }
        Ok(r)
    }

    pub fn wedge(&self, o: &PForm) -> Result<PForm, CalcError> {
        if self.nvars != o.nvars {
            return Err(CalcError::NumVarsMismatch(self.nvars, o.nvars));
        }
        let arity = self.arity + o.arity;
        if arity > self.nvars {
            return Err(CalcError::ArityOverflow { arity, nvars: self.nvars });
        }
        let mut r = PForm::zero(self.nvars, arity);
        for (i, f) in &self.terms {
            for (j, g) in &o.terms {
                if i.iter().any(|a| j.contains(a)) {
                    continue;
                }
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                r.add_entry(idx, f * g);
            }
        }
        Ok(r)
    }

    /// Exterior derivative.
    pub fn d(&self) -> PForm {
        if self.arity == self.nvars {
            return PForm::zero(self.nvars, self.arity + 1);
        }
        let mut r = PForm::zero(self.nvars, self.arity + 1);
        for (idx, f) in &self.terms {
            for k in 0..self.nvars {
                if idx.contains(&k) {
                    continue;
                }
                let df = f.d(k);
                if df.is_zero() {
                    continue;
                }
                let mut t = vec![k];
                t.extend_from_slice(idx);
                r.add_entry(t, df);
            }
        }
        r
    }

    /// `L_X ω` by the Cartan formula `i_X d + d i_X`.
    pub fn lie_derivative(&self, x: &VField) -> Result<PForm, CalcError> {
        if x.nvars() != self.nvars {
            return Err(CalcError::NumVarsMismatch(x.nvars(), self.nvars));
        }
        let a = if self.arity < self.nvars {
            self.d().interior(x)?
        } else {
            PForm::zero(self.nvars, self.arity)
        };
        if self.arity == 0 {
            return Ok(a);
        }
        Ok(a.add(&self.interior(x)?.d()))
    }

    /// `L_X ω` from the derivation rule
    /// `L_X(f dx_I) = X(f) dx_I + f Σ_j dx_{i_1} ∧ … ∧ d(X^{i_j}) ∧ … ∧ dx_{i_p}`.
    pub fn lie_derivative_direct(&self, x: &VField) -> Result<PForm, CalcError> {
        if x.nvars() != self.nvars {
            return Err(CalcError::NumVarsMismatch(x.nvars(), self.nvars));
        }
        let mut r = PForm::zero(self.nvars, self.arity);
        for (idx, f) in &self.terms {
            r.add_entry(idx.clone(), x.apply(f));
            for (j, &i) in idx.iter().enumerate() {
                for m in 0..self.nvars {
                    let dm = x.component(i).d(m);
                    if dm.is_zero() {
                        continue;
                    }
                    let mut t = idx.clone();
                    t[j] = m;
                    r.add_entry(t, f * &dm);
                }
            }
        }
        Ok(r)
    }

    /// The same form read in `nvars + extra` variables.
    pub fn extend_vars(&self, extra: usize) -> PForm {
        PForm {
            nvars: self.nvars + extra,
            arity: self.arity,
            terms: self.terms.iter().map(|(i, f)| (i.clone(), f.extend_vars(extra))).collect(),
        }
    }

    /// Parses the text form written by `Display`.
    pub fn parse(s: &str) -> Result<PForm, CalcError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let err = |m: &str| CalcError::Parse(m.to_string());
        let head = lines.next().ok_or_else(|| err("empty input"))?;
        let mut nvars = None;
        let mut arity = None;
        let mut words = head.split_whitespace();
        if words.next() != Some("form") {
            return Err(err("header must start with `form`"));
        }
        for w in words {
            if let Some(v) = w.strip_prefix("vars=") {
                nvars = v.parse().ok();
            } else if let Some(v) = w.strip_prefix("arity=") {
                arity = v.parse().ok();
            }
        }
        let (nvars, arity): (usize, usize) = (
            nvars.ok_or_else(|| err("missing vars="))?,
            arity.ok_or_else(|| err("missing arity="))?,
        );
        let mut w = PForm::zero(nvars, arity);
        for line in lines {
            let (poly, tail) = line.rsplit_once(" * ").ok_or_else(|| err(line))?;
            let poly = poly
                .trim()
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| err(line))?;
            let f = Poly::parse(poly, nvars).map_err(|e| CalcError::Parse(e.to_string()))?;
            let idx: Tuple = if tail.trim() == "1" {
                Vec::new()
            } else {
                tail.split('^')
                    .map(|t| t.trim().strip_prefix("dx_").and_then(|v| v.parse().ok()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| err(line))?
            };
            if idx.len() != arity || idx.windows(2).any(|p| p[0] >= p[1]) || idx.iter().any(|&i| i >= nvars) {
                return Err(err(line));
            }
            w.add_entry(idx, f);
        }
        Ok(w)
    }
}

impl fmt::Display for PForm {
    /// Header `form vars=N arity=p`, then one `(<poly>) * dx_i^dx_j` line
    /// per nonzero entry in tuple order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "form vars={} arity={}", self.nvars, self.arity)?;
        for (idx, p) in &self.terms {
            write!(f, "({p}) * ")?;
            if idx.is_empty() {
                writeln!(f, "1")?;
            } else {
                let s: Vec<String> = idx.iter().map(|i| format!("dx_{i}")).collect();
                writeln!(f, "{}", s.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
