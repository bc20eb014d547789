//! Coefficient fields: exact rationals, prime fields F_p, and machine doubles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("operation requires an exact field, got ApproxReal")]
    ApproxNotAllowed,
    #[error("operation is undefined over a prime field")]
    PrimeFieldNotAllowed,
    #[error("scalars belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
}

/// Which coefficient field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
    ApproxReal,
}

impl FieldSpec {
    /// Prime fields are validated on construction.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FieldSpec::ApproxReal)
    }

    /// Field cardinality if finite.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::PrimeField(p) => Some(*p as u64),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Mod { value: 0, modulus: *p },
            FieldSpec::ApproxReal => Scalar::Approx(0.0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Mod { value: 1, modulus: *p },
            FieldSpec::ApproxReal => Scalar::Approx(1.0),
        }
    }

    /// Image of a signed integer in this field.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => {
                let m = *p as i64;
                Scalar::Mod { value: v.rem_euclid(m) as u64, modulus: *p }
            }
            FieldSpec::ApproxReal => Scalar::Approx(v as f64),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
            FieldSpec::ApproxReal => write!(f, "R~"),
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    let n64 = n as u64;
    while d * d <= n64 {
        if n64 % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A field element. Rationals are kept in lowest terms with positive
/// denominator (num-rational maintains that); prime-field values lie in [0, p).
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, modulus: u32 },
    Approx(f64),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::PrimeField(*modulus),
            Scalar::Approx(_) => FieldSpec::ApproxReal,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Approx(x) => *x == 0.0,
        }
    }

    pub fn from_rational(num: i64, den: i64) -> Scalar {
        assert!(den != 0);
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar::Mod { value: (a + b) % (*p as u64), modulus: *p }
            }
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a + b),
            _ => panic!("scalar field mismatch in add"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => {
                let p = *modulus as u64;
                Scalar::Mod { value: (p - value) % p, modulus: *modulus }
            }
            Scalar::Approx(a) => Scalar::Approx(-a),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                assert_eq!(p, q, "mixed prime fields");
                // p < 2^31 so the product fits in u64
                Scalar::Mod { value: (a * b) % (*p as u64), modulus: *p }
            }
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a * b),
            _ => panic!("scalar field mismatch in mul"),
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: mod_inverse(*value, *modulus as u64),
                modulus: *modulus,
            },
            Scalar::Approx(a) => Scalar::Approx(1.0 / a),
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Nearest double; exact for prime-field representatives.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rat(r) => r.to_f64().unwrap_or_else(|| {
                // fall back to separate conversion for huge numerators
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                n / d
            }),
            Scalar::Mod { value, .. } => *value as f64,
            Scalar::Approx(x) => *x,
        }
    }

    /// Rational payload, when the scalar is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }
}

// The canonical textual form used in JSON reports: `n` or `n/d` for
// rationals, the least nonnegative representative for F_p, shortest
// round-trip form for doubles.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime, 0 < a < p
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse of non-unit");
    old_s.rem_euclid(p as i128) as u64
}

/// Signed representative of smallest magnitude, used for pretty-printing F_p
/// coefficients recovered from generic computations.
pub fn balanced_residue(value: u64, p: u32) -> i64 {
    let p = p as u64;
    if value > p / 2 {
        value as i64 - p as i64
    } else {
        value as i64
    }
}
