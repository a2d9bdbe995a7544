//! Exact fields: the rationals, prime fields F_p and extension fields GF(p^k).
//!
//! A [`FieldSpec`] is the plain description of a field. A [`Field`] is a
//! cheaply clonable shared handle to one, and every [`Scalar`] carries the
//! handle of the field it lives in.
//!
//! Textual descriptors:
//!
//! * `q` for the rationals,
//! * `gf(p)` for the prime field F_p,
//! * `gf(p,k;c0,c1,...,ck)` for GF(p^k) with the monic irreducible modulus
//!   `c0 + c1 x + ... + ck x^k` (constant term first, `ck = 1`).

mod poly;
mod scalar;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
pub use scalar::{ArithOp, Scalar};
use scalar::Value;

/// Default half-width of the integer range used to sample rational entries.
pub const DEFAULT_RATIONAL_BOUND: i64 = 9;

/// Largest prime accepted for a prime field (products must fit in `u64`).
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// Largest characteristic and degree accepted for extension fields.
pub const MAX_EXTENSION_PRIME: u64 = 97;
pub const MAX_EXTENSION_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
    Extension { p: u64, k: usize, modulus: Vec<u64> },
}

impl FieldSpec {
    /// Parses and validates a textual descriptor.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.to_ascii_lowercase();
        let bad = |reason: &str| Error::InvalidDescriptor {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if t == "q" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = t
            .strip_prefix("gf(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| bad("expected `q`, `gf(p)` or `gf(p,k;c0,...,ck)`"))?;
        let (head, modulus) = match inner.split_once(';') {
            Some((h, m)) => (h, Some(m)),
            None => (inner, None),
        };
        let nums: Vec<&str> = head.split(',').collect();
        let parse_u64 = |s: &str| s.parse::<u64>().map_err(|_| bad("not a non-negative integer"));
        let p = parse_u64(nums[0])?;
        match (nums.len(), modulus) {
            (1, None) => Self::prime(p),
            (2, Some(m)) => {
                let k = parse_u64(nums[1])? as usize;
                let coeffs = m.split(',').map(parse_u64).collect::<Result<Vec<_>>>()?;
                Self::extension(p, k, coeffs)
            }
            (2, None) => Err(bad("extension fields need an explicit modulus")),
            _ => Err(bad("wrong number of parameters")),
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::Unsupported(format!("prime {p} exceeds {MAX_PRIME}")));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn extension(p: u64, k: usize, modulus: Vec<u64>) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_EXTENSION_PRIME || !(2..=MAX_EXTENSION_DEGREE).contains(&k) {
            return Err(Error::Unsupported(format!(
                "GF({p}^{k}): need p <= {MAX_EXTENSION_PRIME} and 2 <= k <= {MAX_EXTENSION_DEGREE}"
            )));
        }
        if modulus.len() != k + 1 {
            return Err(Error::Unsupported(format!(
                "modulus of degree {k} needs {} coefficients, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) || modulus[k] != 1 {
            return Err(Error::Unsupported(format!(
                "modulus {modulus:?} must be monic with coefficients below {p}"
            )));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { modulus, p });
        }
        Ok(FieldSpec::Extension { p, k, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { p } | FieldSpec::Extension { p, .. } => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some(*p),
            FieldSpec::Extension { p, k, .. } => Some(p.pow(*k as u32)),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            FieldSpec::Rationals => "q".to_string(),
            FieldSpec::Prime { p } => format!("gf({p})"),
            FieldSpec::Extension { p, k, modulus } => {
                let m: Vec<String> = modulus.iter().map(u64::to_string).collect();
                format!("gf({p},{k};{})", m.join(","))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FieldSpec::parse(s)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        FieldSpec::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Shared handle to a validated field.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<FieldSpec> for Field {
    fn from(spec: FieldSpec) -> Self {
        Field(Arc::new(spec))
    }
}

impl Field {
    /// `field_create`: parse a descriptor into a field handle.
    pub fn parse(text: &str) -> Result<Self> {
        FieldSpec::parse(text).map(Field::from)
    }

    pub fn rationals() -> Self {
        Field::from(FieldSpec::Rationals)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic()
    }

    pub fn descriptor(&self) -> String {
        self.0.descriptor()
    }

    pub(crate) fn make(&self, value: Value) -> Scalar {
        Scalar::from_parts(self.clone(), value)
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    /// Image of an integer under the canonical ring map Z -> F.
    pub fn from_int(&self, v: i64) -> Scalar {
        match self.spec() {
            FieldSpec::Rationals => self.make(Value::Rational(BigRational::from_integer(v.into()))),
            FieldSpec::Prime { p } => self.make(Value::Residue(reduce_i64(v, *p))),
            FieldSpec::Extension { p, k, .. } => {
                let mut c = vec![0; *k];
                c[0] = reduce_i64(v, *p);
                self.make(Value::Poly(c))
            }
        }
    }

    pub fn rational(&self, numer: i64, denom: i64) -> Result<Scalar> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_int(numer).try_div(&self.from_int(denom))
    }

    /// Extension-field element from coefficients (constant term first).
    /// Shorter inputs are zero-padded; on prime fields and the rationals only
    /// the constant coefficient may be nonzero.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Scalar> {
        match self.spec() {
            FieldSpec::Extension { p, k, .. } => {
                if coeffs.len() > *k {
                    return Err(self.invalid(&format!("{coeffs:?}")));
                }
                let mut c = vec![0; *k];
                for (slot, &v) in c.iter_mut().zip(coeffs) {
                    *slot = reduce_i64(v, *p);
                }
                Ok(self.make(Value::Poly(c)))
            }
            _ => match coeffs {
                [] => Ok(self.zero()),
                [c] => Ok(self.from_int(*c)),
                _ => Err(self.invalid(&format!("{coeffs:?}"))),
            },
        }
    }

    fn invalid(&self, text: &str) -> Error {
        Error::InvalidScalar { text: text.to_string(), field: self.descriptor() }
    }

    /// Parses a scalar written as text: `a` or `a/b` for the rationals, an
    /// integer for F_p, colon-separated coefficients `c0:c1:...` for GF(p^k).
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        match self.spec() {
            FieldSpec::Rationals => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (t, "1"),
                };
                let n: BigInt = n.trim().parse().map_err(|_| self.invalid(text))?;
                let d: BigInt = d.trim().parse().map_err(|_| self.invalid(text))?;
                if d == BigInt::from(0) {
                    return Err(Error::DivisionByZero);
                }
                Ok(self.make(Value::Rational(BigRational::new(n, d))))
            }
            FieldSpec::Prime { .. } => {
                let v: i64 = t.parse().map_err(|_| self.invalid(text))?;
                Ok(self.from_int(v))
            }
            FieldSpec::Extension { .. } => {
                let coeffs = t
                    .split(':')
                    .map(|c| c.trim().parse::<i64>().map_err(|_| self.invalid(text)))
                    .collect::<Result<Vec<_>>>()?;
                self.from_coeffs(&coeffs)
            }
        }
    }

    /// Parses the JSON form produced by [`Scalar::to_json`]. Plain JSON
    /// integers are also accepted.
    pub fn scalar_from_json(&self, v: &serde_json::Value) -> Result<Scalar> {
        use serde_json::Value as J;
        match (self.spec(), v) {
            (_, J::Number(num)) => {
                let i = num.as_i64().ok_or_else(|| self.invalid(&v.to_string()))?;
                Ok(self.from_int(i))
            }
            (FieldSpec::Extension { .. }, J::Array(items)) => {
                let coeffs = items
                    .iter()
                    .map(|c| match c {
                        J::String(s) => s.trim().parse::<i64>().ok(),
                        J::Number(n) => n.as_i64(),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| self.invalid(&v.to_string()))?;
                self.from_coeffs(&coeffs)
            }
            (FieldSpec::Extension { .. }, J::String(s)) => self.parse_scalar(s),
            (_, J::String(s)) => self.parse_scalar(s),
            _ => Err(self.invalid(&v.to_string())),
        }
    }

    /// Uniform sample: integers in `[-bound, bound]` for the rationals,
    /// uniform field elements otherwise.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        match self.spec() {
            FieldSpec::Rationals => self.from_int(rng.random_range(-bound..=bound)),
            FieldSpec::Prime { p } => self.make(Value::Residue(rng.random_range(0..*p))),
            FieldSpec::Extension { p, k, .. } => {
                let c = (0..*k).map(|_| rng.random_range(0..*p)).collect();
                self.make(Value::Poly(c))
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        loop {
            let s = self.random(rng, bound.max(1));
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// All elements of a finite field in a fixed order; `None` for the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self.spec() {
            FieldSpec::Rationals => None,
            FieldSpec::Prime { p } => Some((0..*p).map(|v| self.make(Value::Residue(v))).collect()),
            FieldSpec::Extension { p, k, .. } => {
                let order = p.pow(*k as u32);
                Some(
                    (0..order)
                        .map(|mut code| {
                            let c = (0..*k)
                                .map(|_| {
                                    let d = code % p;
                                    code /= p;
                                    d
                                })
                                .collect();
                            self.make(Value::Poly(c))
                        })
                        .collect(),
                )
            }
        }
    }
}

fn reduce_i64(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}
