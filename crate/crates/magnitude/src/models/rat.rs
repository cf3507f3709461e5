use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::space::{Certified, ExactMagnitude, Magnitude, ModelDescriptor, ModelId, Ordering3};
use crate::{MagnitudeError, Nat, Result};

/// A strictly positive rational in lowest terms; the symmetric model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosRat(BigRational);

fn big(n: &Nat) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.as_biguint().clone())
}

fn to_nat(n: &BigInt) -> Nat {
    Nat::new(n.magnitude().clone()).expect("positive rational parts are nonzero")
}

impl PosRat {
    pub fn one() -> Self {
        PosRat(BigRational::one())
    }

    pub fn from_nat(n: &Nat) -> Self {
        PosRat(BigRational::from_integer(big(n)))
    }

    pub fn from_u64(num: u64, den: u64) -> Self {
        rat_make(&Nat::from_u64(num), &Nat::from_u64(den))
    }

    /// `None` unless `value > 0`.
    pub fn from_big(value: BigRational) -> Option<Self> {
        value.is_positive().then_some(PosRat(value))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> Nat {
        to_nat(self.0.numer())
    }

    pub fn denom(&self) -> Nat {
        to_nat(self.0.denom())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn add(&self, other: &PosRat) -> PosRat {
        PosRat(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &PosRat) -> PosRat {
        PosRat(&self.0 * &other.0)
    }

    pub fn div(&self, other: &PosRat) -> PosRat {
        PosRat(&self.0 / &other.0)
    }

    pub fn mul_nat(&self, n: &Nat) -> PosRat {
        PosRat(&self.0 * big(n))
    }

    pub fn div_nat(&self, n: &Nat) -> PosRat {
        PosRat(&self.0 / big(n))
    }

    pub fn recip(&self) -> PosRat {
        PosRat(self.0.recip())
    }

    pub fn checked_sub(&self, other: &PosRat) -> Option<PosRat> {
        PosRat::from_big(&self.0 - &other.0)
    }

    pub fn pow(&self, n: &Nat) -> PosRat {
        let e = n.as_biguint();
        PosRat(BigRational::new_raw(
            num_traits::pow::Pow::pow(self.0.numer(), e),
            num_traits::pow::Pow::pow(self.0.denom(), e),
        ))
    }

    /// Smallest integer `k >= self`.
    pub fn ceil_nat(&self) -> Nat {
        to_nat(&self.0.ceil().to_integer())
    }

    /// Number of bits needed to bound the value from above: `self <= 2^bits`.
    pub fn bound_bits(&self) -> u32 {
        let c = self.ceil_nat();
        let b = c.as_biguint().bits() as u32;
        if c.as_biguint().count_ones() == 1 {
            b - 1
        } else {
            b
        }
    }

    /// Decimal rendering rounded to `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2u32))).floor().to_integer();
        let int_part = &rounded / &scale;
        if digits == 0 {
            return int_part.to_string();
        }
        let frac = (&rounded % &scale).to_string();
        format!("{int_part}.{}{frac}", "0".repeat(digits as usize - frac.len()))
    }
}

/// Build `num/den` in lowest terms.
pub fn rat_make(num: &Nat, den: &Nat) -> PosRat {
    PosRat(BigRational::new(big(num), big(den)))
}

pub(crate) fn dyadic_floor(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * &scale).floor().to_integer(), scale)
}

pub(crate) fn dyadic_ceil(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * &scale).ceil().to_integer(), scale)
}

pub(crate) fn pow2_neg(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

impl FromStr for PosRat {
    type Err = MagnitudeError;

    /// Accepts `n`, `n/d` and finite decimals such as `1.25`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: Nat = n.trim().parse()?;
            let d: Nat = d.trim().parse()?;
            return Ok(rat_make(&n, &d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
            if int.is_empty() && frac.is_empty() || !digits_ok(int) || !digits_ok(frac) {
                return Err(MagnitudeError::Parse(format!("`{s}` is not a positive rational")));
            }
            let joined: BigUint = format!("{int}{frac}")
                .parse()
                .map_err(|_| MagnitudeError::Parse(s.to_string()))?;
            let den = BigUint::from(10u32).pow(frac.len() as u32);
            let value = BigRational::new(BigInt::from(joined), BigInt::from(den));
            return PosRat::from_big(value).ok_or_else(|| MagnitudeError::Parse("zero is not a magnitude".into()));
        }
        let n: Nat = s.parse()?;
        Ok(PosRat::from_nat(&n))
    }
}

impl fmt::Display for PosRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for PosRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Magnitude for PosRat {
    const MODEL: ModelId = ModelId::Rat;

    fn descriptor() -> ModelDescriptor<Self> {
        ModelDescriptor {
            model_id: ModelId::Rat,
            discrete: false,
            symmetric: true,
            continuous_at_oracle: false,
            exact_order: true,
            unit: Some(PosRat::one()),
            smallest: None,
        }
    }

    fn combine(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn certified_cmp(&self, other: &Self, _precision: u32) -> Result<Certified> {
        Ok(Certified::from_ordering(self.cmp(other)))
    }

    /// `a / (n + 1)`.
    fn shrink_below(&self, n: &Nat) -> Result<Self> {
        Ok(self.div_nat(&n.successor()))
    }

    fn to_rational(&self) -> Option<PosRat> {
        Some(self.clone())
    }
}

impl ExactMagnitude for PosRat {
    fn compare(&self, other: &Self) -> Ordering3<Self> {
        match self.0.cmp(&other.0) {
            Ordering::Less => Ordering3::LessBy(PosRat(&other.0 - &self.0)),
            Ordering::Equal => Ordering3::Equal,
            Ordering::Greater => Ordering3::GreaterBy(PosRat(&self.0 - &other.0)),
        }
    }
}
