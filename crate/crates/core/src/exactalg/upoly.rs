//! Dense univariate polynomials over [`FieldElem`], with root finding up to
//! quadratic closure.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{ArithError, FieldElem};
use super::rational::Q;

/// Coefficients low to high; the leading coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    c: Vec<FieldElem>,
}

impl UPoly {
    pub fn new(mut c: Vec<FieldElem>) -> UPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> UPoly {
        UPoly { c: Vec::new() }
    }

    pub fn constant(x: FieldElem) -> UPoly {
        UPoly::new(vec![x])
    }

    /// `x - r`.
    pub fn linear_root(r: &FieldElem) -> UPoly {
        UPoly::new(vec![-r, FieldElem::one()])
    }

    pub fn from_ints(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| FieldElem::from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&FieldElem> {
        self.c.last()
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(|x| x.is_rational())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![FieldElem::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, s: &FieldElem) -> UPoly {
        UPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.c.iter().rev().fold(FieldElem::zero(), |acc, a| &(&acc * x) + a)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.scale_q(&Q::from_int(k as i64)))
                .collect(),
        )
    }

    pub fn monic(&self) -> UPoly {
        match self.lead() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.inv()),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dl = d.lead().expect("division by zero polynomial").inv();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![FieldElem::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &dl;
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&t * dj);
            }
            q[k] = t;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let g = self.gcd(o);
        self.mul(o).divrem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Integer coefficients of a rational polynomial after clearing
    /// denominators and removing the content.
    fn primitive_integer(&self) -> Option<Vec<BigInt>> {
        let qs: Vec<&Q> = self.c.iter().map(|x| x.as_rational()).collect::<Option<_>>()?;
        let l = super::rational::denominator_lcm(qs.iter().copied());
        let ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if g.is_zero() {
            return Some(ints);
        }
        Some(ints.into_iter().map(|v| v / &g).collect())
    }

    /// Distinct rational roots of a rational polynomial, ascending.
    /// `None` if a coefficient has a radical part.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        let mut out = Vec::new();
        let mut f = self.squarefree_part();
        if f.degree().unwrap_or(0) == 0 {
            return Some(out);
        }
        if f.coeff(0).is_zero() {
            out.push(Q::zero());
            f = f.divrem(&UPoly::from_ints(&[0, 1])).0;
        }
        let ints = f.primitive_integer()?;
        if ints.len() <= 1 {
            return Some(out);
        }
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let ps = divisors(&a0);
        let qs = divisors(&an);
        for p in &ps {
            for q in &qs {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for s in [1, -1] {
                    let num = p * BigInt::from(s);
                    // Σ a_i num^i q^{deg-i}
                    let deg = ints.len() - 1;
                    let mut acc = BigInt::zero();
                    let mut qpow = BigInt::one();
                    let mut terms = vec![BigInt::zero(); ints.len()];
                    for i in (0..=deg).rev() {
                        terms[i] = qpow.clone();
                        qpow *= q;
                    }
                    let mut npow = BigInt::one();
                    for i in 0..=deg {
                        acc += &ints[i] * &npow * &terms[i];
                        npow *= &num;
                    }
                    if acc.is_zero() {
                        out.push(Q::from_big(num_rational::BigRational::new(num, q.clone())));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Some(out)
    }

    /// All roots of `self` lying in `Q` or in one quadratic extension
    /// `Q(√d)`. Rational roots are split off first; whatever remains must be
    /// of degree at most 2. Returned without multiplicity.
    pub fn roots_quadratic_closure(&self) -> Result<Vec<FieldElem>, RootError> {
        let mut f = self.squarefree_part();
        let mut roots: Vec<FieldElem> = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return Ok(roots);
        }
        // rational candidates, from the rational norm polynomial when needed
        let norm = if f.is_rational() { f.clone() } else { f.mul(&f.conj()) };
        if let Some(rr) = norm.rational_roots() {
            for r in rr {
                let x = FieldElem::from_q(r);
                if f.eval(&x).is_zero() {
                    f = f.divrem(&UPoly::linear_root(&x)).0;
                    roots.push(x);
                }
            }
        }
        match f.degree() {
            None | Some(0) => {}
            Some(1) => roots.push(-&(&f.coeff(0) / &f.coeff(1))),
            Some(2) => {
                let (a, b, c) = (f.coeff(2), f.coeff(1), f.coeff(0));
                let disc = &(&b * &b) - &(&FieldElem::from_int(4) * &(&a * &c));
                let s = sqrt_in_quadratic_closure(&disc)?;
                let two_a = &FieldElem::from_int(2) * &a;
                for sg in [&s, &-&s] {
                    roots.push(&(&-&b + sg) / &two_a);
                }
            }
            Some(k) => return Err(RootError::DegreeTooHigh(k)),
        }
        roots.sort_by(|x, y| x.to_string().cmp(&y.to_string()));
        roots.dedup();
        for r in &roots {
            debug_assert!(self.eval(r).is_zero());
        }
        Ok(roots)
    }

    fn conj(&self) -> UPoly {
        UPoly::new(self.c.iter().map(|x| x.conj()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("irreducible factor of degree {0} is not supported")]
    DegreeTooHigh(usize),
    #[error("square root of {0} leaves the quadratic closure")]
    NestedRadical(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `n = s² · f` with `f` square-free; returns `(s, f)`, sign carried by `f`.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut f = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut k = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        for _ in 0..k / 2 {
            s *= &p;
        }
        if k % 2 == 1 {
            f *= &p;
        }
        p += 1;
        if p > BigInt::from(10_000_000u64) {
            break;
        }
    }
    // leftover cofactor: a square, or taken as square-free
    if let Some(r) = isqrt_exact(&m) {
        s *= r;
    } else {
        f *= m;
    }
    (s, f)
}

/// Square root of a rational in `Q` or `Q(√f)` with `f` square-free.
pub fn sqrt_rational(q: &Q) -> Result<FieldElem, RootError> {
    if q.is_zero() {
        return Ok(FieldElem::zero());
    }
    // √(a/b) = √(ab)/b
    let ab = q.numer() * q.denom();
    let (s, f) = squarefree_decompose(&ab);
    let coef = Q::from_big(num_rational::BigRational::new(s, q.denom()));
    if f.is_one() {
        return Ok(FieldElem::from_q(coef));
    }
    let d = f.to_i64().ok_or_else(|| RootError::NestedRadical(q.to_string()))?;
    Ok(FieldElem::quadratic(Q::zero(), coef, d)?)
}

/// Square root of `x ∈ Q(√d)` when it stays in `Q(√d)` (or `x` rational).
fn sqrt_in_quadratic_closure(x: &FieldElem) -> Result<FieldElem, RootError> {
    if let Some(q) = x.as_rational() {
        return sqrt_rational(q);
    }
    // (u + v√d)² = a + b√d with u² + d v² = a, 2uv = b:
    // u² = (a ± √(a² − d b²)) / 2
    let d = x.radicand().unwrap();
    let (a, b) = (x.rational_part(), x.radical_part());
    let nested = || RootError::NestedRadical(x.to_string());
    let n = sqrt_rational(&x.norm())?;
    let n = n.as_rational().ok_or_else(nested)?.clone();
    for sg in [1, -1] {
        let u2 = &(a + &(&n * &Q::from_int(sg))) / &Q::from_int(2);
        if let Ok(u) = sqrt_rational(&u2) {
            if let Some(u) = u.as_rational() {
                if u.is_zero() {
                    continue;
                }
                let v = b / &(&Q::from_int(2) * u);
                let r = FieldElem::quadratic(u.clone(), v, d)?;
                if &(&r * &r) == x {
                    return Ok(r);
                }
            }
        }
    }
    Err(nested())
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut m = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= m && p < BigInt::from(10_000_000u64) {
        let mut k = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            k += 1;
        }
        if k > 0 {
            primes.push((p.clone(), k));
        }
        p += 1;
    }
    if !m.is_one() {
        primes.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, k) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
