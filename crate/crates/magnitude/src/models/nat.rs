use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::space::{Certified, ExactMagnitude, Magnitude, ModelDescriptor, ModelId, Ordering3};
use crate::{MagnitudeError, PosRat, Result};

/// A positive natural number of arbitrary size; the well-ordered model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(BigUint);

impl Nat {
    pub fn one() -> Self {
        Nat(BigUint::one())
    }

    pub fn new(value: BigUint) -> Option<Self> {
        (!value.is_zero()).then_some(Nat(value))
    }

    /// Panics on zero.
    pub fn from_u64(n: u64) -> Self {
        assert!(n >= 1, "magnitude spaces have no zero");
        Nat(BigUint::from(n))
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn add(&self, other: &Nat) -> Nat {
        Nat(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &Nat) -> Nat {
        Nat(&self.0 * &other.0)
    }

    pub fn checked_sub(&self, other: &Nat) -> Option<Nat> {
        (self.0 > other.0).then(|| Nat(&self.0 - &other.0))
    }

    /// `floor(self / 2)`, absent for `1`.
    pub fn half_floor(&self) -> Option<Nat> {
        Nat::new(&self.0 >> 1u32)
    }

    pub fn successor(&self) -> Nat {
        Nat(&self.0 + 1u32)
    }
}

/// Parse a positive decimal integer; zero, signs and non-digits are rejected.
pub fn nat_make(text: &str) -> Result<Nat> {
    text.parse()
}

impl FromStr for Nat {
    type Err = MagnitudeError;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(MagnitudeError::Parse(format!("`{s}` is not a positive decimal integer")));
        }
        let value: BigUint = s.parse().map_err(|_| MagnitudeError::Parse(s.to_string()))?;
        Nat::new(value).ok_or_else(|| MagnitudeError::Parse("zero is not a magnitude".into()))
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Magnitude for Nat {
    const MODEL: ModelId = ModelId::Nat;

    fn descriptor() -> ModelDescriptor<Self> {
        ModelDescriptor {
            model_id: ModelId::Nat,
            discrete: true,
            symmetric: false,
            continuous_at_oracle: false,
            exact_order: true,
            unit: Some(Nat::one()),
            smallest: Some(Nat::one()),
        }
    }

    fn combine(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn certified_cmp(&self, other: &Self, _precision: u32) -> Result<Certified> {
        Ok(Certified::from_ordering(self.cmp(other)))
    }

    fn shrink_below(&self, _n: &Nat) -> Result<Self> {
        Err(MagnitudeError::DiscreteModel)
    }

    fn to_rational(&self) -> Option<PosRat> {
        Some(PosRat::from_nat(self))
    }
}

impl ExactMagnitude for Nat {
    fn compare(&self, other: &Self) -> Ordering3<Self> {
        match self.0.cmp(&other.0) {
            std::cmp::Ordering::Less => Ordering3::LessBy(Nat(&other.0 - &self.0)),
            std::cmp::Ordering::Equal => Ordering3::Equal,
            std::cmp::Ordering::Greater => Ordering3::GreaterBy(Nat(&self.0 - &other.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_positive_decimals() {
        assert_eq!(nat_make("17").unwrap(), Nat::from_u64(17));
        assert!(matches!(nat_make("0"), Err(MagnitudeError::Parse(_))));
        assert!(matches!(nat_make("000"), Err(MagnitudeError::Parse(_))));
        assert!(matches!(nat_make("-3"), Err(MagnitudeError::Parse(_))));
        assert!(matches!(nat_make("+3"), Err(MagnitudeError::Parse(_))));
        assert!(matches!(nat_make("1x"), Err(MagnitudeError::Parse(_))));
        assert!(matches!(nat_make(""), Err(MagnitudeError::Parse(_))));
    }

    #[test]
    fn arbitrary_precision() {
        let n = nat_make("340282366920938463463374607431768211456").unwrap();
        assert_eq!(*n.as_biguint(), BigUint::one() << 128u32);
    }

    #[test]
    fn descriptor_is_discrete_with_smallest_one() {
        let d = Nat::descriptor();
        assert!(d.discrete);
        assert_eq!(d.smallest, Some(Nat::one()));
        assert!(!d.continuous_at_oracle);
    }

    #[test]
    fn no_element_between_n_and_successor() {
        for n in [1u64, 2, 17, 1 << 40] {
            let n = Nat::from_u64(n);
            let next = n.successor();
            // anything strictly above n is at least n + 1
            for c in [n.successor(), n.add(&Nat::from_u64(2))] {
                assert!(c >= next);
            }
            assert_eq!(n.compare(&next), Ordering3::LessBy(Nat::one()));
        }
    }
}
