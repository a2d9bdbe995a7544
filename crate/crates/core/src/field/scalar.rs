use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{poly, Field, FieldSpec};
use crate::error::{Error, Result};

/// Canonical value of a field element. Rationals are always reduced with a
/// positive denominator, residues lie in `[0, p)`, and extension elements
/// carry exactly `k` coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    Rational(BigRational),
    Residue(u64),
    Poly(Vec<u64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// An element of a [`Field`].
///
/// The binary operators (`+`, `-`, `*`, `/`) panic on a field mismatch or a
/// zero divisor; the `try_*` methods report those as errors instead.
#[derive(Clone, Debug)]
pub struct Scalar {
    field: Field,
    value: Value,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub(crate) fn from_parts(field: Field, value: Value) -> Self {
        Scalar { field, value }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(v) => *v == 0,
            Value::Poly(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Rebuilds the canonical representation from scratch.
    pub fn canonicalize(&self) -> Scalar {
        let value = match (&self.value, self.field.spec()) {
            (Value::Rational(r), _) => {
                Value::Rational(BigRational::new(r.numer().clone(), r.denom().clone()))
            }
            (Value::Residue(v), FieldSpec::Prime { p }) => Value::Residue(v % p),
            (Value::Poly(c), FieldSpec::Extension { p, .. }) => {
                Value::Poly(c.iter().map(|x| x % p).collect())
            }
            (v, _) => v.clone(),
        };
        Scalar::from_parts(self.field.clone(), value)
    }

    fn check_field(&self, other: &Scalar) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.descriptor(), other.field.descriptor()))
        }
    }

    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        self.check_field(other)?;
        let value = match (&self.value, &other.value, self.field.spec()) {
            (Value::Rational(a), Value::Rational(b), _) => Value::Rational(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
            }),
            (Value::Residue(a), Value::Residue(b), FieldSpec::Prime { p }) => {
                Value::Residue(match op {
                    ArithOp::Add => (a + b) % p,
                    ArithOp::Sub => (a + p - b) % p,
                    ArithOp::Mul => (a * b) % p,
                })
            }
            (Value::Poly(a), Value::Poly(b), FieldSpec::Extension { p, modulus, .. }) => {
                Value::Poly(match op {
                    ArithOp::Add => poly::add(a, b, *p),
                    ArithOp::Sub => poly::sub(a, b, *p),
                    ArithOp::Mul => poly::mul_mod(a, b, modulus, *p),
                })
            }
            _ => unreachable!("value representation does not match its field"),
        };
        Ok(Scalar::from_parts(self.field.clone(), value))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.arith(other, ArithOp::Add)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_field(other)?;
        self.try_mul(&other.invert()?)
    }

    pub fn invert(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = match (&self.value, self.field.spec()) {
            (Value::Rational(r), _) => Value::Rational(r.recip()),
            (Value::Residue(v), FieldSpec::Prime { p }) => Value::Residue(pow_mod(*v, p - 2, *p)),
            (Value::Poly(_), FieldSpec::Extension { p, k, .. }) => {
                // a^(q-2) = a^(-1) in the multiplicative group of order q-1
                let order = p.pow(*k as u32);
                return Ok(self.pow(order - 2));
            }
            _ => unreachable!("value representation does not match its field"),
        };
        Ok(Scalar::from_parts(self.field.clone(), value))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// JSON form: `"a/b"` (or `"a"`) for rationals, a decimal string for
    /// F_p, an array of decimal strings (constant term first) for GF(p^k).
    pub fn to_json(&self) -> serde_json::Value {
        match &self.value {
            Value::Rational(_) | Value::Residue(_) => serde_json::Value::String(self.to_string()),
            Value::Poly(c) => serde_json::Value::Array(
                c.iter().map(|x| serde_json::Value::String(x.to_string())).collect(),
            ),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Value::Residue(v) => write!(f, "{v}"),
            Value::Poly(c) => {
                let parts: Vec<String> = c.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(":"))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.arith(rhs, $op).expect("scalar operands from different fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.try_div(rhs).expect("scalar division failed")
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let value = match (&self.value, self.field.spec()) {
            (Value::Rational(r), _) => Value::Rational(-r),
            (Value::Residue(v), FieldSpec::Prime { p }) => Value::Residue((p - v) % p),
            (Value::Poly(c), FieldSpec::Extension { p, .. }) => {
                Value::Poly(c.iter().map(|x| (p - x) % p).collect())
            }
            _ => unreachable!("value representation does not match its field"),
        };
        Scalar::from_parts(self.field.clone(), value)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
