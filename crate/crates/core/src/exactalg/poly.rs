//! Sparse multivariate polynomials over [`FieldElem`].

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use super::field::{ArithError, FieldElem};

/// Exponent vector; its length is always the polynomial's variable count.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    NumVarsMismatch(usize, usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Terms live in a sorted map keyed by exponent vector (lexicographic), so
/// iteration order and text output are deterministic. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, FieldElem>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElem) -> Poly {
        Poly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, FieldElem::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Poly {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(nvars, e, FieldElem::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: FieldElem) -> Poly {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, FieldElem)>) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// Adds `c·x^e` in place.
    pub fn add_term(&mut self, e: Exponents, c: &FieldElem) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElem {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree when every term has the same total degree; `None` for zero or
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        if it.all(|x| x == d) {
            Some(d)
        } else {
            None
        }
    }

    /// True when every term has total degree `d` (vacuously for zero).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Radicand of any coefficient, if one carries a radical part.
    pub fn radicand(&self) -> Option<i64> {
        self.terms.values().find_map(|c| c.radicand())
    }

    fn check(&self, o: &Poly) -> Result<(), PolyError> {
        if self.nvars != o.nvars {
            Err(PolyError::NumVarsMismatch(self.nvars, o.nvars))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly, PolyError> {
        self.check(o)?;
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly, PolyError> {
        self.check(o)?;
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), &-c);
        }
        Ok(r)
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly, PolyError> {
        self.check(o)?;
        let mut r = Poly::zero(self.nvars);
        if self.is_zero() || o.is_zero() {
            return Ok(r);
        }
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, &c1.checked_mul(c2)?);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, s: &FieldElem) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂f/∂x_i`.
    pub fn partial(&self, i: usize) -> Result<Poly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VarOutOfRange { index: i, nvars: self.nvars });
        }
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            r.add_term(e2, &c.scale_q(&(e[i] as i64).into()));
        }
        Ok(r)
    }

    /// Panicking form of [`Poly::partial`] for internal use with known-valid indices.
    pub fn d(&self, i: usize) -> Poly {
        self.partial(i).expect("variable index in range")
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars);
        let mut acc = FieldElem::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Replaces `x_var` by the constant `value`; the variable count is kept.
    pub fn substitute(&self, var: usize, value: &FieldElem) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0);
            r.add_term(e2, &(c * &value.pow(k)));
        }
        r
    }

    /// Same polynomial read in `nvars + extra` variables.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        Poly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.resize(self.nvars + extra, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Splits by powers of `var`: entry `k` is the coefficient of `x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::replace(&mut e2[var], 0) as usize;
            out[k].add_term(e2, c);
        }
        out
    }

    /// Rescales so the lexicographically largest term has coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Parses the text form written by `Display`. `nvars` is required to
    /// interpret the zero polynomial and is checked against every term.
    pub fn parse(s: &str, nvars: usize) -> Result<Poly, PolyError> {
        let t = s.trim();
        let err = |m: &str| PolyError::Parse(format!("{m} in `{s}`"));
        let mut p = Poly::zero(nvars);
        if t == "0" {
            return Ok(p);
        }
        for term in split_terms(t) {
            let (coef, mono) = term.split_once(" * ").ok_or_else(|| err("missing ` * `"))?;
            let coef = coef.trim();
            let coef = coef
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .unwrap_or(coef);
            let c: FieldElem = coef.parse()?;
            let mut e = vec![0u32; nvars];
            let mut seen = 0;
            for (i, f) in mono.split_whitespace().enumerate() {
                let (v, k) = f.split_once('^').ok_or_else(|| err("missing `^`"))?;
                let idx: usize = v
                    .strip_prefix('x')
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| err("bad variable"))?;
                if idx != i || idx >= nvars {
                    return Err(err("variables must be x0..xn in order"));
                }
                e[idx] = k.parse().map_err(|_| err("bad exponent"))?;
                seen += 1;
            }
            if seen != nvars {
                return Err(PolyError::NumVarsMismatch(seen, nvars));
            }
            if p.terms.contains_key(&e) {
                return Err(err("repeated monomial"));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

// Terms are joined by " + " but radical coefficients are parenthesised,
// so only split outside parentheses.
fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b' ' if depth == 0 && s[i..].starts_with(" + ") => {
                out.push(&s[start..i]);
                start = i + 3;
                i += 3;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for Poly {
    /// `coeff * x0^a0 ... xn^an` terms joined by ` + `, sorted by exponent
    /// vector; radical coefficients are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_rational() {
                write!(f, "{c} *")?;
            } else {
                write!(f, "({c}) *")?;
            }
            for (i, x) in e.iter().enumerate() {
                write!(f, " x{i}^{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

/// All exponent vectors of total degree `deg` in `nvars` variables, in
/// increasing lexicographic order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Exponents> {
    fn rec(nvars: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(nvars, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}
