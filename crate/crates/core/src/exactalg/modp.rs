//! Reduction of exact data to prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::field::FieldElem;
use super::poly::{Exponents, Poly};
use super::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} divides a denominator")]
    DenominatorDivisible(u64),
    #[error("radicand {d} is not a square modulo {p}")]
    NonResidue { d: i64, p: u64 },
    #[error("value has a radical part but the context carries no square root")]
    MissingRoot,
    #[error("radicand {found} does not match context radicand {expected}")]
    RadicandMismatch { expected: i64, found: i64 },
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse by Fermat; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    // deterministic Miller-Rabin for 64-bit inputs
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn residue_of(d: i64, p: u64) -> u64 {
    d.rem_euclid(p as i64) as u64
}

/// Square root of `a` mod odd prime `p` by Tonelli-Shanks; returns the
/// smaller of the two roots.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// A prime together with the image of `√d` when a radicand is in play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    radicand: Option<i64>,
    root: Option<u64>,
}

impl PrimeContext {
    pub fn new(p: u64, radicand: Option<i64>) -> Result<PrimeContext, ModError> {
        if !is_prime(p) || p < 3 {
            return Err(ModError::NotPrime(p));
        }
        let root = match radicand {
            None => None,
            Some(d) => {
                let r = residue_of(d, p);
                if r == 0 {
                    return Err(ModError::NonResidue { d, p });
                }
                Some(sqrt_mod(r, p).ok_or(ModError::NonResidue { d, p })?)
            }
        };
        Ok(PrimeContext { p, radicand, root })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn radicand(&self) -> Option<i64> {
        self.radicand
    }

    /// Chosen image of `√d`.
    pub fn root(&self) -> Option<u64> {
        self.root
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u64().expect("residue fits")
    }

    pub fn reduce_q(&self, q: &Q) -> Result<u64, ModError> {
        let den = self.reduce_int(&q.denom());
        if den == 0 {
            return Err(ModError::DenominatorDivisible(self.p));
        }
        Ok(mul_mod(self.reduce_int(&q.numer()), inv_mod(den, self.p), self.p))
    }

    pub fn reduce_elem(&self, x: &FieldElem) -> Result<u64, ModError> {
        let a = self.reduce_q(x.rational_part())?;
        match x.radicand() {
            None => Ok(a),
            Some(d) => {
                match self.radicand {
                    Some(e) if e != d => return Err(ModError::RadicandMismatch { expected: e, found: d }),
                    None => return Err(ModError::MissingRoot),
                    _ => {}
                }
                let b = self.reduce_q(x.radical_part())?;
                let r = self.root.ok_or(ModError::MissingRoot)?;
                Ok((a + mul_mod(b, r, self.p)) % self.p)
            }
        }
    }

    pub fn reduce_poly(&self, f: &Poly) -> Result<FpPoly, ModError> {
        let mut terms = Vec::with_capacity(f.num_terms());
        for (e, c) in f.terms() {
            let v = self.reduce_elem(c)?;
            if v != 0 {
                terms.push((e.clone(), v));
            }
        }
        Ok(FpPoly { nvars: f.nvars(), p: self.p, terms })
    }
}

/// Polynomial over F_p; terms sorted by exponent vector, no zeros stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    nvars: usize,
    p: u64,
    terms: Vec<(Exponents, u64)>,
}

impl FpPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(Exponents, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = mul_mod(t, pow_mod(*x, k as u64, p), p);
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }

    /// Evaluation against a precomputed power table `pows[i][k] = x_i^k`.
    pub fn eval_with_powers(&self, pows: &[Vec<u64>]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = mul_mod(t, pows[i][k as usize], p);
                    if t == 0 {
                        break;
                    }
                }
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        assert_eq!(self.nvars, o.nvars);
        assert_eq!(self.p, o.p);
        let mut m: std::collections::BTreeMap<Exponents, u64> = Default::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let s = m.entry(e).or_insert(0);
                *s = (*s + mul_mod(*c1, *c2, self.p)) % self.p;
            }
        }
        FpPoly {
            nvars: self.nvars,
            p: self.p,
            terms: m.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }
}

/// Least common multiple of every coefficient denominator in `polys`.
pub fn denominator_lcm_of<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> BigInt {
    let mut acc = BigInt::from(1);
    for f in polys {
        for (_, c) in f.terms() {
            acc = acc.lcm(&c.rational_part().denom());
            acc = acc.lcm(&c.radical_part().denom());
        }
    }
    acc
}

/// First `count` primes `≥ start` that divide neither `den` nor the radicand
/// and in which the radicand (if any) is a nonzero square.
pub fn select_primes(start: u64, count: usize, den: &BigInt, radicand: Option<i64>) -> Vec<PrimeContext> {
    let mut out = Vec::with_capacity(count);
    let mut p = start.max(3);
    while out.len() < count {
        if is_prime(p) && !(den.abs() % BigInt::from(p)).is_zero() {
            if let Ok(ctx) = PrimeContext::new(p, radicand) {
                out.push(ctx);
            }
        }
        p += 1;
    }
    out
}
