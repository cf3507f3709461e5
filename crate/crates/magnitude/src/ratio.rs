//! Eudoxus ratios: witnesses, exact same-ratio decisions and a
//! Stern–Brocot search for separating fractions.
//!
//! `a:b > a':b'` is certified by a pair `(m, n)` with `m a > n b` and
//! `m a' <= n b'`, i.e. a fraction `n/m` lying in `[a'/b', a/b)`. The engine
//! walks the Stern–Brocot tree looking for such a fraction, using only
//! multiples and comparisons inside each model.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::space::{self, ApproxPolicy, Certified, ExactMagnitude, Magnitude, ModelId};
use crate::{Element, MagnitudeError, Nat, PosRat, Result};

#[derive(Debug, Clone)]
pub struct Ratio<M> {
    pub antecedent: M,
    pub consequent: M,
}

impl<M: Magnitude> Ratio<M> {
    pub fn new(antecedent: M, consequent: M) -> Self {
        Ratio { antecedent, consequent }
    }

    pub fn model_id(&self) -> ModelId {
        M::MODEL
    }
}

/// Multiplier pair `(m, n)` certifying a strict ratio inequality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub m: Nat,
    pub n: Nat,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={}", self.m, self.n)
    }
}

impl std::str::FromStr for Witness {
    type Err = MagnitudeError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || MagnitudeError::Parse(format!("expected `m=<nat> n=<nat>`, got `{s}`"));
        let (m, n) = s.trim().split_once(' ').ok_or_else(bad)?;
        let m = m.strip_prefix("m=").ok_or_else(bad)?.parse()?;
        let n = n.trim().strip_prefix("n=").ok_or_else(bad)?.parse()?;
        Ok(Witness { m, n })
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioRel {
    Equal,
    Greater(Witness),
    Less(Witness),
    /// Equal, or closer than the fuel could resolve.
    Unknown { fuel_spent: u64 },
}

impl fmt::Display for RatioRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioRel::Equal => f.write_str("equal"),
            RatioRel::Greater(w) => write!(f, "greater (witness {w})"),
            RatioRel::Less(w) => write!(f, "less (witness {w})"),
            RatioRel::Unknown { fuel_spent } => write!(f, "unknown (fuel spent {fuel_spent})"),
        }
    }
}

impl RatioRel {
    /// The relation with the two pairs swapped.
    pub fn reverse(self) -> RatioRel {
        match self {
            RatioRel::Greater(w) => RatioRel::Less(w),
            RatioRel::Less(w) => RatioRel::Greater(w),
            other => other,
        }
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, RatioRel::Greater(_) | RatioRel::Less(_))
    }
}

/// Least `(m, n)` with `m a > b` and `n b > a`.
pub fn have_ratio_witness<M: Magnitude>(a: &M, b: &M) -> Result<(Nat, Nat)> {
    let policy = ApproxPolicy::default();
    Ok((space::find_multiple_exceeding(a, b, &policy)?, space::find_multiple_exceeding(b, a, &policy)?))
}

/// `a/b` as a reduced fraction; refused for the real model.
pub fn ratio_value_exact<M: Magnitude>(r: &Ratio<M>) -> Result<PosRat> {
    if M::MODEL == ModelId::Real {
        return Err(MagnitudeError::InexactModel(ModelId::Real));
    }
    let a = r.antecedent.to_rational().ok_or(MagnitudeError::InexactModel(M::MODEL))?;
    let b = r.consequent.to_rational().ok_or(MagnitudeError::InexactModel(M::MODEL))?;
    Ok(a.div(&b))
}

/// Precision cap used by the engine for a given fuel.
pub fn precision_cap(fuel: u64) -> u32 {
    fuel.saturating_mul(8).clamp(16, 1024) as u32
}

fn policy_for(fuel: u64) -> ApproxPolicy {
    ApproxPolicy::with_cap(0, precision_cap(fuel))
}

/// Where the fraction `n/m` sits relative to the ratio `a:b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// `m a > n b`: the fraction is below the ratio.
    Below,
    Equal,
    Above,
    /// Undecided at the precision cap.
    Near,
}

fn side_of<M: Magnitude>(m: &Nat, n: &Nat, a: &M, b: &M, policy: &ApproxPolicy) -> Result<Side> {
    Ok(match space::certified_compare(&space::multiple(m, a), &space::multiple(n, b), policy)? {
        Certified::Greater => Side::Below,
        Certified::Equal => Side::Equal,
        Certified::Less => Side::Above,
        Certified::Overlap => Side::Near,
    })
}

/// Check a witness for `a:b > a2:b2`.
///
/// On the real model `m a > n b` must be certified; `m a2 <= n b2` is
/// accepted unless `m a2 > n b2` is certifiable within the default schedule.
pub fn verify_witness<M: Magnitude, N: Magnitude>(w: &Witness, a: &M, b: &M, a2: &N, b2: &N) -> bool {
    verify_witness_with(w, a, b, a2, b2, &policy_for(64))
}

fn verify_witness_with<M: Magnitude, N: Magnitude>(
    w: &Witness,
    a: &M,
    b: &M,
    a2: &N,
    b2: &N,
    policy: &ApproxPolicy,
) -> bool {
    let first = side_of(&w.m, &w.n, a, b, policy);
    let second = side_of(&w.m, &w.n, a2, b2, policy);
    matches!((first, second), (Ok(Side::Below), Ok(Side::Equal | Side::Above | Side::Near)))
}

/// A fraction `num/den` of the Stern–Brocot tree; `1/0` is the root's
/// right bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Frac {
    pub num: BigUint,
    pub den: BigUint,
}

impl Frac {
    fn zero() -> Self {
        Frac { num: BigUint::zero(), den: BigUint::one() }
    }

    fn infinity() -> Self {
        Frac { num: BigUint::one(), den: BigUint::zero() }
    }

    /// `self + k * other` in the mediant sense.
    fn plus_times(&self, k: &BigUint, other: &Frac) -> Frac {
        Frac { num: &self.num + k * &other.num, den: &self.den + k * &other.den }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (!self.den.is_zero()).then(|| BigRational::new(self.num.clone().into(), self.den.clone().into()))
    }

    /// `(m, n) = (den, num)` for a fraction strictly inside the tree.
    fn multipliers(&self) -> (Nat, Nat) {
        (
            Nat::new(self.den.clone()).expect("interior fraction"),
            Nat::new(self.num.clone()).expect("interior fraction"),
        )
    }
}

pub(crate) enum Step<T> {
    Right,
    Left,
    Stop(T),
}

pub(crate) enum Descent<T> {
    Done(T),
    OutOfFuel(u64),
}

/// Walk the Stern–Brocot tree. `classify` is called once per visited
/// fraction (one unit of fuel) and says whether the target lies to the
/// right or left of it, or ends the walk. Runs of equal direction are
/// crossed by galloping, so a partial quotient `q` costs `O(log q)` steps.
/// `settle` is consulted after every run with the current bracket.
pub(crate) fn descend<T>(
    fuel: u64,
    mut classify: impl FnMut(&Frac) -> Result<Step<T>>,
    mut settle: impl FnMut(&Frac, &Frac) -> Option<T>,
) -> Result<Descent<T>> {
    let mut left = Frac::zero();
    let mut right = Frac::infinity();
    let mut spent = 0u64;
    macro_rules! visit {
        ($f:expr) => {{
            if spent >= fuel {
                return Ok(Descent::OutOfFuel(spent));
            }
            spent += 1;
            classify($f)?
        }};
    }
    let one = BigUint::one();
    loop {
        if let Some(t) = settle(&left, &right) {
            return Ok(Descent::Done(t));
        }
        let mediant = left.plus_times(&one, &right);
        let going_right = match visit!(&mediant) {
            Step::Stop(t) => return Ok(Descent::Done(t)),
            Step::Right => true,
            Step::Left => false,
        };
        // candidates along the run: from + k * toward, k >= 1
        let (from, toward) = if going_right { (&left, &right) } else { (&right, &left) };
        let candidate = |k: &BigUint| from.plus_times(k, toward);
        let same = |s: &Step<T>| matches!((s, going_right), (Step::Right, true) | (Step::Left, false));
        let mut good = BigUint::one();
        let mut bad: Option<BigUint> = None;
        while bad.is_none() {
            let k = &good << 1u32;
            let step = visit!(&candidate(&k));
            if let Step::Stop(t) = step {
                return Ok(Descent::Done(t));
            }
            if same(&step) {
                good = k;
            } else {
                bad = Some(k);
            }
        }
        let mut bad = bad.expect("loop exits with a bound");
        while &bad - &good > one {
            let mid = (&good + &bad) >> 1u32;
            let step = visit!(&candidate(&mid));
            if let Step::Stop(t) = step {
                return Ok(Descent::Done(t));
            }
            if same(&step) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        let next = candidate(&good);
        if going_right {
            left = next;
        } else {
            right = next;
        }
    }
}

enum Verdict {
    Greater(Witness),
    Less(Witness),
    Equal,
    Stuck,
}

fn classify_pair(s1: Side, s2: Side, frac: &Frac) -> Step<Verdict> {
    use Side::*;
    let witness = || {
        let (m, n) = frac.multipliers();
        Witness { m, n }
    };
    match (s1, s2) {
        (Below, Equal | Above) => Step::Stop(Verdict::Greater(witness())),
        (Equal | Above, Below) => Step::Stop(Verdict::Less(witness())),
        (Equal, Equal) => Step::Stop(Verdict::Equal),
        (Below, Below) | (Near, Below) | (Below, Near) => Step::Right,
        (Above, Above) | (Above, Equal) | (Equal, Above) | (Near, Above) | (Above, Near) => Step::Left,
        (Near, Equal) | (Equal, Near) | (Near, Near) => Step::Stop(Verdict::Stuck),
    }
}

/// Fractions visited by one engine run, with the outcome.
#[derive(Debug, Clone)]
pub struct Trace {
    pub visited: Vec<(Nat, Nat)>,
    pub relation: RatioRel,
}

/// Compare `a:b` (in `M`) with `a2:b2` (in `N`).
///
/// When all four elements have exact values the verdict is decided by
/// comparing `a/b` with `a2/b2` and a witness is then searched without a
/// fuel limit. Otherwise the Stern–Brocot walk runs with `fuel` steps and
/// certified comparisons; running out gives `Unknown`, never a wrong verdict.
pub fn ratio_compare<M: Magnitude, N: Magnitude>(a: &M, b: &M, a2: &N, b2: &N, fuel: u64) -> Result<RatioRel> {
    ratio_compare_traced(a, b, a2, b2, fuel).map(|t| t.relation)
}

pub fn ratio_compare_traced<M: Magnitude, N: Magnitude>(
    a: &M,
    b: &M,
    a2: &N,
    b2: &N,
    fuel: u64,
) -> Result<Trace> {
    if fuel == 0 {
        return Err(MagnitudeError::ZeroFuel);
    }
    let exact = match (a.to_rational(), b.to_rational(), a2.to_rational(), b2.to_rational()) {
        (Some(a), Some(b), Some(a2), Some(b2)) => Some(a.div(&b).cmp(&a2.div(&b2))),
        _ => None,
    };
    if exact == Some(Ordering::Equal) {
        return Ok(Trace { visited: Vec::new(), relation: RatioRel::Equal });
    }
    let budget = if exact.is_some() { u64::MAX } else { fuel };
    let policy = policy_for(fuel);
    let mut visited = Vec::new();
    let outcome = descend(
        budget,
        |frac| {
            let (m, n) = frac.multipliers();
            let s1 = side_of(&m, &n, a, b, &policy)?;
            let s2 = side_of(&m, &n, a2, b2, &policy)?;
            visited.push((m, n));
            Ok(classify_pair(s1, s2, frac))
        },
        |_, _| None,
    )?;
    let relation = match outcome {
        Descent::Done(Verdict::Greater(w)) => RatioRel::Greater(w),
        Descent::Done(Verdict::Less(w)) => RatioRel::Less(w),
        Descent::Done(Verdict::Equal) => RatioRel::Equal,
        Descent::Done(Verdict::Stuck) => RatioRel::Unknown { fuel_spent: visited.len() as u64 },
        Descent::OutOfFuel(spent) => RatioRel::Unknown { fuel_spent: spent },
    };
    Ok(Trace { visited, relation })
}

/// [`ratio_compare_traced`] on elements, dispatched on the models of each pair.
pub fn compare_elements(a: &Element, b: &Element, a2: &Element, b2: &Element, fuel: u64) -> Result<Trace> {
    macro_rules! second {
        ($x:expr, $y:expr) => {
            match (a2, b2) {
                (Element::Nat(p), Element::Nat(q)) => ratio_compare_traced($x, $y, p, q, fuel),
                (Element::Rat(p), Element::Rat(q)) => ratio_compare_traced($x, $y, p, q, fuel),
                (Element::Real(p), Element::Real(q)) => ratio_compare_traced($x, $y, p, q, fuel),
                _ => Err(MagnitudeError::ModelMismatch { left: a2.model(), right: b2.model() }),
            }
        };
    }
    match (a, b) {
        (Element::Nat(x), Element::Nat(y)) => second!(x, y),
        (Element::Rat(x), Element::Rat(y)) => second!(x, y),
        (Element::Real(x), Element::Real(y)) => second!(x, y),
        _ => Err(MagnitudeError::ModelMismatch { left: a.model(), right: b.model() }),
    }
}

/// Rational bounds on `b:a` for an exact model, found with multiples only.
#[derive(Debug, Clone, PartialEq)]
pub enum RatioBounds {
    Exact(PosRat),
    Between(PosRat, PosRat),
}

/// Bracket `b:a` between fractions `lo < b/a < hi` with `hi - lo <= 2^-bits`,
/// or return its exact value if the walk lands on it.
pub fn ratio_bounds<M: ExactMagnitude>(b: &M, a: &M, bits: u32) -> Result<RatioBounds> {
    let target = crate::models::pow2_neg(bits);
    let outcome = descend(
        u64::MAX,
        |frac| {
            let (m, n) = frac.multipliers();
            // compare m b with n a: is n/m below b/a?
            Ok(match space::multiple(&m, b).compare(&space::multiple(&n, a)) {
                crate::Ordering3::GreaterBy(_) => Step::Right,
                crate::Ordering3::LessBy(_) => Step::Left,
                crate::Ordering3::Equal => Step::Stop(RatioBounds::Exact(
                    PosRat::from_big(frac.to_rational().expect("interior")).expect("positive"),
                )),
            })
        },
        |left, right| {
            let lo = PosRat::from_big(left.to_rational()?)?;
            let hi = PosRat::from_big(right.to_rational()?)?;
            (hi.as_big() - lo.as_big() <= target).then_some(RatioBounds::Between(lo, hi))
        },
    )?;
    match outcome {
        Descent::Done(bounds) => Ok(bounds),
        Descent::OutOfFuel(_) => unreachable!("unbounded descent"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{real_from_rat, PosRealValue};

    fn rat(s: &str) -> PosRat {
        s.parse().unwrap()
    }

    fn nat(n: u64) -> Nat {
        Nat::from_u64(n)
    }

    /// All `(m, n)` up to `limit` certifying `a:b > a2:b2`, by enumeration.
    fn brute_force_witnesses(a: &PosRat, b: &PosRat, a2: &PosRat, b2: &PosRat, limit: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for m in 1..=limit {
            for n in 1..=limit {
                let (m_, n_) = (PosRat::from_u64(m, 1), PosRat::from_u64(n, 1));
                if m_.mul(a) > n_.mul(b) && m_.mul(a2) <= n_.mul(b2) {
                    out.push((m, n));
                }
            }
        }
        out
    }

    #[test]
    fn have_ratio_witness_examples() {
        assert_eq!(have_ratio_witness(&rat("1/2"), &rat("5")).unwrap(), (nat(11), nat(1)));
        assert_eq!(have_ratio_witness(&rat("3"), &rat("3")).unwrap(), (nat(2), nat(2)));
        assert_eq!(have_ratio_witness(&nat(1), &nat(4)).unwrap(), (nat(5), nat(1)));
    }

    #[test]
    fn ratio_value_examples() {
        assert_eq!(ratio_value_exact(&Ratio::new(nat(2), nat(3))).unwrap(), rat("2/3"));
        assert_eq!(ratio_value_exact(&Ratio::new(rat("3/2"), rat("4/3"))).unwrap(), rat("9/8"));
        assert_eq!(
            ratio_value_exact(&Ratio::new(nat(4), nat(6))).unwrap(),
            ratio_value_exact(&Ratio::new(nat(2), nat(3))).unwrap()
        );
        let r = Ratio::new(real_from_rat(&rat("1")), real_from_rat(&rat("2")));
        assert_eq!(ratio_value_exact(&r), Err(MagnitudeError::InexactModel(ModelId::Real)));
    }

    #[test]
    fn witness_from_engine_is_among_brute_force_witnesses() {
        let (a, b, a2, b2) = (rat("3"), rat("2"), rat("4"), rat("3"));
        let all = brute_force_witnesses(&a, &b, &a2, &b2, 6);
        assert!(all.contains(&(3, 4)));
        assert!(!all.contains(&(1, 1)));
        let rel = ratio_compare(&a, &b, &a2, &b2, 64).unwrap();
        assert_eq!(rel, RatioRel::Greater(Witness { m: nat(3), n: nat(4) }));
    }

    #[test]
    fn equal_nat_ratios() {
        assert_eq!(ratio_compare(&nat(2), &nat(3), &nat(4), &nat(6), 64).unwrap(), RatioRel::Equal);
    }

    #[test]
    fn real_vs_rat_finds_certified_witness() {
        let sqrt2 = crate::models::real::real_root(&real_from_rat(&rat("2")), 2);
        let one = real_from_rat(&PosRat::one());
        let rel = ratio_compare(&sqrt2, &one, &rat("3"), &rat("2"), 64).unwrap();
        let RatioRel::Less(w) = rel else { panic!("expected less, got {rel:?}") };
        assert!(verify_witness(&w, &rat("3"), &rat("2"), &sqrt2, &one));
        // independent check: sqrt(2) <= n/m < 3/2 using n^2 >= 2 m^2
        let (m, n) = (w.m.to_u64().unwrap() as u128, w.n.to_u64().unwrap() as u128);
        assert!(n * n >= 2 * m * m && 2 * n < 3 * m, "witness {w}");
    }

    #[test]
    fn equal_real_ratios_run_out_of_fuel() {
        let sqrt2 = crate::models::real::real_root(&real_from_rat(&rat("2")), 2);
        let twice = space::multiple(&nat(2), &sqrt2);
        let rel = ratio_compare(&sqrt2, &real_from_rat(&rat("1")), &twice, &real_from_rat(&rat("2")), 12).unwrap();
        assert!(matches!(rel, RatioRel::Unknown { fuel_spent } if fuel_spent <= 12));
    }

    #[test]
    fn verify_witness_examples() {
        let w = Witness { m: nat(3), n: nat(4) };
        assert!(verify_witness(&w, &rat("3"), &rat("2"), &rat("4"), &rat("3")));
        let w11 = Witness { m: nat(1), n: nat(1) };
        assert!(!verify_witness(&w11, &rat("3"), &rat("2"), &rat("4"), &rat("3")));
        for (m, n) in [(1, 1), (2, 3), (3, 2), (7, 5)] {
            let w = Witness { m: nat(m), n: nat(n) };
            assert!(!verify_witness(&w, &rat("3/2"), &rat("5/7"), &rat("3/2"), &rat("5/7")));
        }
    }

    #[test]
    fn antisymmetry_and_zero_fuel() {
        let fwd = ratio_compare(&rat("5/3"), &rat("2"), &rat("1"), &rat("7/5"), 64).unwrap();
        let back = ratio_compare(&rat("1"), &rat("7/5"), &rat("5/3"), &rat("2"), 64).unwrap();
        assert_eq!(fwd.clone().reverse(), back);
        assert!(fwd.is_strict());
        assert_eq!(ratio_compare(&rat("1"), &rat("2"), &rat("1"), &rat("2"), 0), Err(MagnitudeError::ZeroFuel));
    }

    #[test]
    fn large_partial_quotients_are_cheap() {
        let rel = ratio_compare(&nat(1_000_000_007), &nat(1), &nat(1_000_000_008), &nat(1), 64).unwrap();
        let RatioRel::Less(w) = rel else { panic!() };
        assert!(verify_witness(&w, &nat(1_000_000_008), &nat(1), &nat(1_000_000_007), &nat(1)));
        let trace = ratio_compare_traced(&nat(1_000_000_007), &nat(1), &nat(1_000_000_008), &nat(1), 64).unwrap();
        assert!(trace.visited.len() < 80);
    }

    #[test]
    fn ratio_bounds_bracket_or_hit() {
        assert_eq!(ratio_bounds(&rat("3"), &rat("2"), 10).unwrap(), RatioBounds::Exact(rat("3/2")));
        let b = ratio_bounds(&nat(1), &nat(1), 4).unwrap();
        assert_eq!(b, RatioBounds::Exact(rat("1")));
        // 355/113 is hit exactly eventually; a coarse request settles first
        match ratio_bounds(&nat(355), &nat(113), 3).unwrap() {
            RatioBounds::Between(lo, hi) => {
                assert!(lo < rat("355/113") && rat("355/113") < hi);
                assert!(hi.as_big() - lo.as_big() <= crate::models::pow2_neg(3));
            }
            RatioBounds::Exact(q) => assert_eq!(q, rat("355/113")),
        }
    }

    #[test]
    fn witness_text_roundtrip() {
        let w = Witness { m: nat(3), n: nat(4) };
        assert_eq!(w.to_string(), "m=3 n=4");
        assert_eq!("m=3 n=4".parse::<Witness>().unwrap(), w);
        assert!("m=3".parse::<Witness>().is_err());
    }

    #[test]
    fn real_model_witnesses_use_real_values() {
        let x: PosRealValue = real_from_rat(&rat("3"));
        let y = real_from_rat(&rat("2"));
        let rel = ratio_compare(&x, &y, &rat("4"), &rat("3"), 64).unwrap();
        assert_eq!(rel, RatioRel::Greater(Witness { m: nat(3), n: nat(4) }));
    }
}
