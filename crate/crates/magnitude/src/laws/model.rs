//! What the law suite needs from a model beyond the `Magnitude` trait.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::models::real::{format_mid, real_mul, real_root, real_sub};
use crate::models::real_from_rat;
use crate::space::{self, ApproxPolicy, Certified, ExactMagnitude, Magnitude, Ordering3};
use crate::{Element, MagnitudeError, Nat, PosRat, PosRealValue, Result};

pub trait LawModel: Magnitude {
    fn sample(rng: &mut ChaCha8Rng) -> Self;
    fn unit() -> Self;
    /// Product with the model's unit as `1`.
    fn times(&self, other: &Self) -> Self;
    /// Equality for exact models, interval intersection at `p` otherwise.
    fn agrees(&self, other: &Self, p: u32) -> Result<bool>;
    /// Trichotomy with difference witness; on reals, overlap at the policy
    /// cap reads as equality within tolerance.
    fn compare3(&self, other: &Self, policy: &ApproxPolicy) -> Result<Ordering3<Self>>;
    fn to_element(&self) -> Element;
    fn render(&self) -> String;
    /// Strictly simpler values, for shrinking.
    fn simpler(&self) -> Vec<Self>;
    /// A nearby element with an exact value, usable as an anchor point.
    fn exact_near(&self) -> Self {
        self.clone()
    }
}

fn ranged_u64(rng: &mut ChaCha8Rng, max_bits: u32) -> u64 {
    let bits = rng.gen_range(0..=max_bits);
    rng.gen_range(1..=(1u64 << bits))
}

fn sample_rat(rng: &mut ChaCha8Rng, max_bits: u32) -> PosRat {
    let num = ranged_u64(rng, max_bits);
    let den = ranged_u64(rng, max_bits);
    PosRat::from_u64(num, den)
}

impl LawModel for Nat {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        Nat::from_u64(ranged_u64(rng, 32))
    }

    fn unit() -> Self {
        Nat::one()
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn agrees(&self, other: &Self, _p: u32) -> Result<bool> {
        Ok(self == other)
    }

    fn compare3(&self, other: &Self, _policy: &ApproxPolicy) -> Result<Ordering3<Self>> {
        Ok(self.compare(other))
    }

    fn to_element(&self) -> Element {
        Element::Nat(self.clone())
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn simpler(&self) -> Vec<Self> {
        let n = self.as_biguint();
        let mut out = Vec::new();
        for c in [BigUint::from(1u32), n >> 1, n - 1u32] {
            if let Some(c) = Nat::new(c) {
                if &c < self && !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

impl LawModel for PosRat {
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        sample_rat(rng, 16)
    }

    fn unit() -> Self {
        PosRat::one()
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn agrees(&self, other: &Self, _p: u32) -> Result<bool> {
        Ok(self == other)
    }

    fn compare3(&self, other: &Self, _policy: &ApproxPolicy) -> Result<Ordering3<Self>> {
        Ok(self.compare(other))
    }

    fn to_element(&self) -> Element {
        Element::Rat(self.clone())
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn simpler(&self) -> Vec<Self> {
        let (num, den) = (self.numer(), self.denom());
        let mut out = Vec::new();
        let mut push = |n: Option<Nat>, d: Option<Nat>| {
            if let (Some(n), Some(d)) = (n, d) {
                let c = crate::models::rat_make(&n, &d);
                let simpler = c.numer() <= num && c.denom() <= den && c != *self;
                if simpler && !out.contains(&c) {
                    out.push(c);
                }
            }
        };
        push(Some(Nat::one()), Some(Nat::one()));
        push(Some(num.clone()), Some(Nat::one()));
        push(Some(Nat::one()), Some(den.clone()));
        push(Nat::new(num.as_biguint() >> 1), Some(den.clone()));
        push(Some(num.clone()), Nat::new(den.as_biguint() >> 1));
        out
    }
}

impl LawModel for PosRealValue {
    /// `r · sqrt(s)` with `r` in `2^-8 .. 2^8` and `1 < s < 4`.
    fn sample(rng: &mut ChaCha8Rng) -> Self {
        let r = sample_rat(rng, 8);
        let den = rng.gen_range(1..=16u64);
        let s = PosRat::from_u64(rng.gen_range(den + 1..4 * den), den);
        let label = format!("{r}*sqrt({s})");
        real_mul(&real_from_rat(&r), &real_root(&real_from_rat(&s), 2)).with_label(label)
    }

    fn unit() -> Self {
        real_from_rat(&PosRat::one())
    }

    fn times(&self, other: &Self) -> Self {
        real_mul(self, other)
    }

    fn agrees(&self, other: &Self, p: u32) -> Result<bool> {
        Ok(self.approx(p)?.intersects(&other.approx(p)?))
    }

    fn compare3(&self, other: &Self, policy: &ApproxPolicy) -> Result<Ordering3<Self>> {
        Ok(match space::certified_compare(self, other, policy)? {
            Certified::Less => Ordering3::LessBy(real_sub(other, self, policy)?),
            Certified::Greater => Ordering3::GreaterBy(real_sub(self, other, policy)?),
            Certified::Equal | Certified::Overlap => Ordering3::Equal,
        })
    }

    fn to_element(&self) -> Element {
        Element::Real(self.clone())
    }

    fn render(&self) -> String {
        match (self.exact(), self.label()) {
            (Some(q), _) => q.to_string(),
            (None, Some(label)) => label,
            (None, None) => format_mid(self, 30).unwrap_or_else(|e| e.to_string()),
        }
    }

    fn simpler(&self) -> Vec<Self> {
        if self.exact() == Some(&PosRat::one()) {
            Vec::new()
        } else {
            vec![Self::unit()]
        }
    }

    fn exact_near(&self) -> Self {
        match self.approx(8) {
            Ok(i) => real_from_rat(i.lo()),
            Err(_) => Self::unit(),
        }
    }
}

/// `self - smaller`, as the suite sees it.
pub(crate) fn law_subtract<M: LawModel>(big: &M, small: &M, policy: &ApproxPolicy) -> Result<M> {
    match small.compare3(big, policy)? {
        Ordering3::LessBy(d) => Ok(d),
        _ => Err(MagnitudeError::NotGreater),
    }
}
