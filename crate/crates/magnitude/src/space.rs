//! The magnitude-space abstraction shared by every model.
//!
//! A magnitude space is a set with an associative, commutative `combine`
//! satisfying trichotomy: for any `a`, `b` exactly one of `a = b + d`,
//! `a = b`, `b = a + d` holds. There is no zero, so subtraction is partial.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::models::{Nat, PosRat};
use crate::{MagnitudeError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelId {
    Nat,
    Rat,
    Real,
}

impl ModelId {
    pub const ALL: [ModelId; 3] = [ModelId::Nat, ModelId::Rat, ModelId::Real];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Nat => "nat",
            ModelId::Rat => "rat",
            ModelId::Real => "real",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelId {
    type Err = MagnitudeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" => Ok(ModelId::Nat),
            "rat" => Ok(ModelId::Rat),
            "real" => Ok(ModelId::Real),
            other => Err(MagnitudeError::Parse(format!("unknown model `{other}`"))),
        }
    }
}

/// Structural facts about a model.
///
/// `discrete` holds exactly when `smallest` is present, and a model that is
/// continuous at the oracle level is never discrete.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDescriptor<T> {
    pub model_id: ModelId,
    pub discrete: bool,
    pub symmetric: bool,
    pub continuous_at_oracle: bool,
    pub exact_order: bool,
    pub unit: Option<T>,
    pub smallest: Option<T>,
}

impl<T> ModelDescriptor<T> {
    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> ModelDescriptor<U> {
        ModelDescriptor {
            model_id: self.model_id,
            discrete: self.discrete,
            symmetric: self.symmetric,
            continuous_at_oracle: self.continuous_at_oracle,
            exact_order: self.exact_order,
            unit: self.unit.map(&mut f),
            smallest: self.smallest.map(&mut f),
        }
    }
}

/// Trichotomy outcome carrying the difference witness.
///
/// `LessBy(d)` for `(a, b)` means `a + d = b`; `GreaterBy(d)` means `b + d = a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ordering3<T> {
    LessBy(T),
    Equal,
    GreaterBy(T),
}

impl<T> Ordering3<T> {
    pub fn tag(&self) -> Ordering {
        match self {
            Ordering3::LessBy(_) => Ordering::Less,
            Ordering3::Equal => Ordering::Equal,
            Ordering3::GreaterBy(_) => Ordering::Greater,
        }
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            Ordering3::LessBy(d) | Ordering3::GreaterBy(d) => Some(d),
            Ordering3::Equal => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Ordering3<U> {
        match self {
            Ordering3::LessBy(d) => Ordering3::LessBy(f(d)),
            Ordering3::Equal => Ordering3::Equal,
            Ordering3::GreaterBy(d) => Ordering3::GreaterBy(f(d)),
        }
    }
}

/// Outcome of a comparison at a given precision.
///
/// Exact models never report `Overlap`; the real model never reports `Equal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certified {
    Less,
    Equal,
    Greater,
    Overlap,
}

impl Certified {
    pub fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Certified::Less,
            Ordering::Equal => Certified::Equal,
            Ordering::Greater => Certified::Greater,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Certified::Less => Certified::Greater,
            Certified::Greater => Certified::Less,
            other => other,
        }
    }
}

/// Precision bookkeeping for anything that touches the real model.
///
/// `precision` is the width target `2^-precision` for outputs; comparisons
/// escalate through `4, 8, 16, ...` up to `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxPolicy {
    pub precision: u32,
    pub cap: u32,
}

impl ApproxPolicy {
    pub const DEFAULT_CAP: u32 = 256;

    pub fn new(precision: u32) -> Self {
        Self { precision, cap: Self::DEFAULT_CAP.max(precision) }
    }

    pub fn with_cap(precision: u32, cap: u32) -> Self {
        Self { precision, cap: cap.max(1) }
    }

    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        let mut next = Some(4.min(cap));
        std::iter::from_fn(move || {
            let p = next?;
            next = if p >= cap { None } else { Some(p.saturating_mul(2).min(cap)) };
            Some(p)
        })
    }
}

impl Default for ApproxPolicy {
    fn default() -> Self {
        Self::new(30)
    }
}

pub trait Magnitude: Clone + fmt::Debug + Send + Sync + Sized + 'static {
    const MODEL: ModelId;

    fn descriptor() -> ModelDescriptor<Self>;

    fn combine(&self, other: &Self) -> Self;

    /// Comparison at precision `2^-precision`; exact models ignore it.
    fn certified_cmp(&self, other: &Self, precision: u32) -> Result<Certified>;

    /// Some `b` with `n * b < self`.
    fn shrink_below(&self, n: &Nat) -> Result<Self>;

    /// The exact rational value, when the model (or this element) has one.
    fn to_rational(&self) -> Option<PosRat> {
        None
    }

    /// A model-specific `n * self`, when it beats double-and-add.
    fn scaled(&self, _n: &Nat) -> Option<Self> {
        None
    }
}

/// Models whose order is decidable without precision parameters.
pub trait ExactMagnitude: Magnitude {
    fn compare(&self, other: &Self) -> Ordering3<Self>;
}

pub fn combine<M: Magnitude>(a: &M, b: &M) -> M {
    a.combine(b)
}

pub fn compare<M: ExactMagnitude>(a: &M, b: &M) -> Ordering3<M> {
    a.compare(b)
}

/// `b - a`, the unique `d` with `a + d = b`.
pub fn subtract<M: ExactMagnitude>(b: &M, a: &M) -> Result<M> {
    match a.compare(b) {
        Ordering3::LessBy(d) => Ok(d),
        _ => Err(MagnitudeError::NotGreater),
    }
}

/// `n * a` by double-and-add, `O(log n)` combines.
pub fn multiple<M: Magnitude>(n: &Nat, a: &M) -> M {
    if let Some(x) = a.scaled(n) {
        return x;
    }
    let bits = n.as_biguint().bits();
    let mut acc = a.clone();
    for i in (0..bits - 1).rev() {
        acc = acc.combine(&acc);
        if n.as_biguint().bit(i) {
            acc = acc.combine(a);
        }
    }
    acc
}

pub const NAIVE_GUARD: u64 = 1 << 16;

/// `n * a` by literal repeated addition; a test oracle for [`multiple`].
pub fn multiple_naive<M: Magnitude>(n: &Nat, a: &M) -> Result<M> {
    let n = n
        .to_u64()
        .filter(|&n| n <= NAIVE_GUARD)
        .ok_or_else(|| MagnitudeError::GuardExceeded(format!("naive multiple needs n <= {NAIVE_GUARD}")))?;
    let mut acc = a.clone();
    for _ in 1..n {
        acc = acc.combine(a);
    }
    Ok(acc)
}

/// Compare two elements, escalating precision along the policy's schedule
/// until a certificate appears.
pub fn certified_compare<M: Magnitude>(a: &M, b: &M, policy: &ApproxPolicy) -> Result<Certified> {
    let mut last = Certified::Overlap;
    for p in policy.schedule() {
        last = a.certified_cmp(b, p)?;
        if last != Certified::Overlap {
            break;
        }
    }
    Ok(last)
}

/// Least `n` with `n * a > b`: doubling, then binary search.
///
/// On the real model "greater" means certified within `policy`, so the
/// result is the least `n` whose excess is certifiable.
pub fn find_multiple_exceeding<M: Magnitude>(a: &M, b: &M, policy: &ApproxPolicy) -> Result<Nat> {
    let exceeds = |n: &Nat| -> Result<bool> {
        Ok(certified_compare(&multiple(n, a), b, policy)? == Certified::Greater)
    };
    let one = Nat::one();
    if exceeds(&one)? {
        return Ok(one);
    }
    // invariant: !exceeds(lo) && exceeds(hi)
    let mut lo = one;
    let mut hi = Nat::from_u64(2);
    while !exceeds(&hi)? {
        lo = hi.clone();
        hi = hi.add(&hi);
    }
    loop {
        let gap = hi.checked_sub(&lo).expect("hi > lo");
        if gap.is_one() {
            return Ok(hi);
        }
        let mid = lo.add(&gap.half_floor().expect("gap >= 2"));
        if exceeds(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Some `b` with `n * b < a`; fails on discrete models.
pub fn shrink_below<M: Magnitude>(a: &M, n: &Nat) -> Result<M> {
    a.shrink_below(n)
}
