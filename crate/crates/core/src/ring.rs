use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Coefficient ring for homology and chain maps: the integers, the
/// rationals, or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl Ring {
    /// Builds a prime-field ring, rejecting composite moduli by trial division.
    pub fn prime_field(p: u64) -> Result<Ring, Error> {
        if !is_prime(p) {
            return Err(Error::UnsupportedRing(format!("{p} is not prime")));
        }
        Ok(Ring::PrimeField(p))
    }

    /// Parses the CLI spellings `Z`, `Q`, `F2`, `F3`, ...
    pub fn parse(s: &str) -> Result<Ring, Error> {
        match s {
            "Z" | "z" => Ok(Ring::Integers),
            "Q" | "q" => Ok(Ring::Rationals),
            _ => {
                let p = s
                    .strip_prefix('F')
                    .or_else(|| s.strip_prefix('f'))
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| Error::UnsupportedRing(s.to_string()))?;
                Ring::prime_field(p)
            }
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn zero(self) -> Scalar {
        match self {
            Ring::Integers => Scalar::Int(BigInt::zero()),
            Ring::Rationals => Scalar::Rat(BigRational::zero()),
            Ring::PrimeField(p) => Scalar::Mod(p, 0),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            Ring::Integers => Scalar::Int(BigInt::one()),
            Ring::Rationals => Scalar::Rat(BigRational::one()),
            Ring::PrimeField(p) => Scalar::Mod(p, 1 % p),
        }
    }

    /// Embeds an integer into the ring.
    pub fn from_int(self, n: &BigInt) -> Scalar {
        match self {
            Ring::Integers => Scalar::Int(n.clone()),
            Ring::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            Ring::PrimeField(p) => {
                let m = n.mod_floor_u64(p);
                Scalar::Mod(p, m)
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar of one of the supported rings. Prime-field values are
/// stored reduced together with their modulus; rationals in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64, u64),
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integers,
            Scalar::Rat(_) => Ring::Rationals,
            Scalar::Mod(p, _) => Ring::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(a) => a.is_zero(),
            Scalar::Rat(a) => a.is_zero(),
            Scalar::Mod(_, a) => *a == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(p, a), Scalar::Mod(q, b)) if p == q => Scalar::Mod(*p, (a + b) % p),
            _ => panic!("scalar ring mismatch in add"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(p, a) => Scalar::Mod(*p, if *a == 0 { 0 } else { p - a }),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(p, a), Scalar::Mod(q, b)) if p == q => {
                Scalar::Mod(*p, ((*a as u128 * *b as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar ring mismatch in mul"),
        }
    }

    /// Multiplicative inverse; `None` for non-units.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(a) => {
                if a.is_one() || (-a).is_one() {
                    Some(Scalar::Int(a.clone()))
                } else {
                    None
                }
            }
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Mod(p, a) => mod_inverse(*a, *p).map(|i| Scalar::Mod(*p, i)),
        }
    }

    /// True division; `None` when the quotient does not exist in the ring.
    pub fn div_exact(&self, other: &Scalar) -> Option<Scalar> {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                if b.is_zero() {
                    None
                } else if (a % b).is_zero() {
                    Some(Scalar::Int(a / b))
                } else {
                    None
                }
            }
            _ => other.inv().map(|i| self.mul(&i)),
        }
    }

    /// Signed magnitude used for display and pivot heuristics.
    pub fn abs_int(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(a) => Some(a.abs()),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(a) => write!(f, "{a}"),
            Scalar::Rat(a) => write!(f, "{a}"),
            Scalar::Mod(_, a) => write!(f, "{a}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // extended Euclid on (a, p)
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        match digits.as_slice() {
            [] => 0,
            [d] => *d,
            _ => unreachable!("value already reduced mod p"),
        }
    }
}
