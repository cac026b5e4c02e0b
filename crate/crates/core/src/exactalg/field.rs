//! Elements of Q and of quadratic extensions Q(√d).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use thiserror::Error;

use super::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible radicands {0} and {1}")]
    MixedRadicands(i64, i64),
    #[error("radicand {0} is not a square-free integer other than 0 and 1")]
    InvalidRadicand(i64),
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

/// `a + b·√d` with `a, b` rational and `d` square-free.
///
/// A pure rational carries no radicand; any operation whose radical part
/// cancels drops back to the pure rational form, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    a: Q,
    b: Q,
    d: Option<i64>,
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

pub fn check_radicand(d: i64) -> Result<(), ArithError> {
    if d == 1 || !is_squarefree(d) {
        Err(ArithError::InvalidRadicand(d))
    } else {
        Ok(())
    }
}

fn join(x: Option<i64>, y: Option<i64>) -> Result<Option<i64>, ArithError> {
    match (x, y) {
        (Some(p), Some(q)) if p != q => Err(ArithError::MixedRadicands(p, q)),
        (Some(p), _) | (_, Some(p)) => Ok(Some(p)),
        _ => Ok(None),
    }
}

impl FieldElem {
    fn build(a: Q, b: Q, d: Option<i64>) -> FieldElem {
        if b.is_zero() {
            FieldElem { a, b, d: None }
        } else {
            FieldElem { a, b, d }
        }
    }

    pub fn zero() -> FieldElem {
        FieldElem::from_q(Q::zero())
    }

    pub fn one() -> FieldElem {
        FieldElem::from_q(Q::one())
    }

    pub fn from_q(a: Q) -> FieldElem {
        FieldElem { a, b: Q::zero(), d: None }
    }

    pub fn from_int(n: i64) -> FieldElem {
        FieldElem::from_q(Q::from_int(n))
    }

    pub fn rational(num: i64, den: i64) -> FieldElem {
        FieldElem::from_q(Q::new(num, den))
    }

    /// `a + b·√d`.
    pub fn quadratic(a: Q, b: Q, d: i64) -> Result<FieldElem, ArithError> {
        check_radicand(d)?;
        Ok(FieldElem::build(a, b, Some(d)))
    }

    /// `√d` itself.
    pub fn sqrt_of(d: i64) -> Result<FieldElem, ArithError> {
        FieldElem::quadratic(Q::zero(), Q::one(), d)
    }

    pub fn rational_part(&self) -> &Q {
        &self.a
    }

    pub fn radical_part(&self) -> &Q {
        &self.b
    }

    pub fn radicand(&self) -> Option<i64> {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_none()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        if self.d.is_none() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_none() && self.a.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.d.is_none() && self.a.is_one()
    }

    pub fn checked_add(&self, o: &FieldElem) -> Result<FieldElem, ArithError> {
        let d = join(self.d, o.d)?;
        Ok(FieldElem::build(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn checked_sub(&self, o: &FieldElem) -> Result<FieldElem, ArithError> {
        let d = join(self.d, o.d)?;
        Ok(FieldElem::build(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn checked_mul(&self, o: &FieldElem) -> Result<FieldElem, ArithError> {
        let d = join(self.d, o.d)?;
        if self.d.is_none() && o.d.is_none() {
            return Ok(FieldElem::from_q(&self.a * &o.a));
        }
        let dq = Q::from_int(d.expect("radicand present"));
        let a = &(&self.a * &o.a) + &(&(&self.b * &o.b) * &dq);
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        Ok(FieldElem::build(a, b, d))
    }

    /// Conjugate `a − b√d`.
    pub fn conj(&self) -> FieldElem {
        FieldElem::build(self.a.clone(), -&self.b, self.d)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Q {
        match self.d {
            None => &self.a * &self.a,
            Some(d) => &(&self.a * &self.a) - &(&(&self.b * &self.b) * &Q::from_int(d)),
        }
    }

    /// `(a + b√d)⁻¹ = (a − b√d)/(a² − d·b²)`.
    pub fn checked_inv(&self) -> Result<FieldElem, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm().inv().ok_or(ArithError::DivisionByZero)?;
        let c = self.conj();
        Ok(FieldElem::build(&c.a * &n, &c.b * &n, c.d))
    }

    pub fn checked_div(&self, o: &FieldElem) -> Result<FieldElem, ArithError> {
        self.checked_mul(&o.checked_inv()?)
    }

    pub fn inv(&self) -> FieldElem {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn pow(&self, e: u32) -> FieldElem {
        let mut acc = FieldElem::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_q(&self, s: &Q) -> FieldElem {
        FieldElem::build(&self.a * s, &self.b * s, self.d)
    }

    /// Parses the compact spec-file form `p/q` or `p/q+r/s√` (also `p/q-r/s√`),
    /// with the radicand supplied by the enclosing file.
    pub fn parse_compact(s: &str, radicand: Option<i64>) -> Result<FieldElem, ArithError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ArithError::Parse(s.to_string());
        if let Some(body) = t.strip_suffix('√') {
            let d = radicand.ok_or_else(err)?;
            // split at the last +/- that is not a leading sign
            let cut = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(i, _)| i)
                .last();
            let (ra, rb) = match cut {
                Some(i) => (&body[..i], &body[i..]),
                None => ("0", body),
            };
            let rb = rb.strip_prefix('+').unwrap_or(rb);
            let rb = if rb.is_empty() || rb == "-" { format!("{}1", rb) } else { rb.to_string() };
            let a: Q = ra.parse().map_err(|_| err())?;
            let b: Q = rb.parse().map_err(|_| err())?;
            FieldElem::quadratic(a, b, d)
        } else {
            let a: Q = t.parse().map_err(|_| err())?;
            Ok(FieldElem::from_q(a))
        }
    }
}

impl Default for FieldElem {
    fn default() -> Self {
        FieldElem::zero()
    }
}

impl From<Q> for FieldElem {
    fn from(q: Q) -> Self {
        FieldElem::from_q(q)
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

// Operator impls panic on incompatible radicands; within one computation
// context the radicand is fixed, so the checked forms are only needed at
// boundaries where inputs come from different sources.
impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        self.checked_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self.checked_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        self.checked_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        self.checked_div(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::build(-&self.a, -&self.b, self.d)
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &'a FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for FieldElem {
    /// `p/q` or `p/q + r/s*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            None => write!(f, "{}", self.a),
            Some(d) => write!(f, "{} + {}*sqrt({})", self.a, self.b, d),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FieldElem {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<FieldElem, ArithError> {
        let err = || ArithError::Parse(s.to_string());
        let t = s.trim();
        match t.split_once(" + ") {
            None => Ok(FieldElem::from_q(t.parse().map_err(|_| err())?)),
            Some((a, rest)) => {
                let (b, d) = rest.split_once("*sqrt(").ok_or_else(err)?;
                let d = d.strip_suffix(')').ok_or_else(err)?;
                let a: Q = a.parse().map_err(|_| err())?;
                let b: Q = b.parse().map_err(|_| err())?;
                let d: i64 = d.trim().parse().map_err(|_| err())?;
                FieldElem::quadratic(a, b, d)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s3(a: (i64, i64), b: (i64, i64)) -> FieldElem {
        FieldElem::quadratic(Q::new(a.0, a.1), Q::new(b.0, b.1), 3).unwrap()
    }

    #[test]
    fn conjugate_product() {
        let x = s3((1, 1), (1, 1));
        let y = s3((1, 1), (-1, 1));
        assert_eq!(&x * &y, FieldElem::from_int(-2));
        assert!((&x * &y).is_rational());
    }

    #[test]
    fn inverse_and_half_root_three() {
        assert_eq!(FieldElem::rational(1, 2).inv(), FieldElem::from_int(2));
        let h = s3((0, 1), (1, 2));
        assert_eq!(&h * &h, FieldElem::rational(3, 4));
        assert_eq!(FieldElem::zero().checked_inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn mixed_radicands_rejected() {
        let a = FieldElem::sqrt_of(3).unwrap();
        let b = FieldElem::sqrt_of(5).unwrap();
        assert_eq!(a.checked_add(&b), Err(ArithError::MixedRadicands(3, 5)));
        assert!(FieldElem::sqrt_of(12).is_err());
        assert!(FieldElem::sqrt_of(1).is_err());
        assert!(FieldElem::sqrt_of(-1).is_ok());
    }

    #[test]
    fn text_forms() {
        let x = s3((-3, 2), (1, 2));
        assert_eq!(x.to_string(), "-3/2 + 1/2*sqrt(3)");
        assert_eq!(x.to_string().parse::<FieldElem>().unwrap(), x);
        assert_eq!(FieldElem::parse_compact("-3/2+1/2√", Some(3)).unwrap(), x);
        assert_eq!(FieldElem::parse_compact("1-1√", Some(3)).unwrap(), s3((1, 1), (-1, 1)));
        assert_eq!(FieldElem::parse_compact("√", Some(3)).unwrap(), s3((0, 1), (1, 1)));
        assert_eq!(FieldElem::parse_compact("-7/3", None).unwrap(), FieldElem::rational(-7, 3));
        assert!(FieldElem::parse_compact("1+1√", None).is_err());
    }

    fn elem() -> impl Strategy<Value = FieldElem> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9, prop::bool::ANY).prop_map(|(a, b, c, d, rad)| {
            if rad {
                FieldElem::quadratic(Q::new(a, b), Q::new(c, d), 5).unwrap()
            } else {
                FieldElem::rational(a, b)
            }
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in elem(), y in elem(), z in elem()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv(), FieldElem::one());
            }
        }
    }
}
