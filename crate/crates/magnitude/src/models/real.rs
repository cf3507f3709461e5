//! Positive reals as precision-indexed refinement oracles.
//!
//! A [`PosRealValue`] answers `approx(p)` with an exact rational interval of
//! width at most `2^-p` that contains the value. Answers are memoized, so a
//! value queried twice at the same precision returns the identical interval.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use super::rat::{dyadic_ceil, dyadic_floor, pow2_neg};
use crate::space::{ApproxPolicy, Certified, Magnitude, ModelDescriptor, ModelId};
use crate::{MagnitudeError, Nat, PosRat, Result};

/// A closed interval `[lo, hi]` with `0 < lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: PosRat,
    hi: PosRat,
}

impl Interval {
    pub fn new(lo: PosRat, hi: PosRat) -> Result<Self> {
        if lo > hi {
            return Err(MagnitudeError::OracleFailure(format!("inverted interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(q: PosRat) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    fn from_big(lo: BigRational, hi: BigRational) -> Result<Self> {
        let lo = PosRat::from_big(lo)
            .ok_or_else(|| MagnitudeError::OracleFailure("non-positive lower endpoint".into()))?;
        let hi = PosRat::from_big(hi)
            .ok_or_else(|| MagnitudeError::OracleFailure("non-positive upper endpoint".into()))?;
        Interval::new(lo, hi)
    }

    pub fn lo(&self) -> &PosRat {
        &self.lo
    }

    pub fn hi(&self) -> &PosRat {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        self.hi.as_big() - self.lo.as_big()
    }

    pub fn width_at_most(&self, p: u32) -> bool {
        self.width() <= pow2_neg(p)
    }

    pub fn contains(&self, q: &PosRat) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Intersection of two enclosures of the same value.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn midpoint(&self) -> PosRat {
        self.lo.add(&self.hi).div_nat(&Nat::from_u64(2))
    }

    /// Widen outward onto the dyadic grid `2^-bits`, keeping `lo > 0`.
    fn round_outward(self, bits: u32) -> Interval {
        let lo = PosRat::from_big(dyadic_floor(self.lo.as_big(), bits)).unwrap_or(self.lo);
        let hi = PosRat::from_big(dyadic_ceil(self.hi.as_big(), bits)).expect("ceil of a positive value");
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type Oracle = Box<dyn Fn(u32) -> Result<Interval> + Send + Sync>;

struct RealInner {
    oracle: Oracle,
    exact: Option<PosRat>,
    cache: Mutex<BTreeMap<u32, Interval>>,
}

/// A computable positive real.
#[derive(Clone)]
pub struct PosRealValue {
    inner: Arc<RealInner>,
    label: Option<Arc<str>>,
}

impl PosRealValue {
    /// Wrap a refinement procedure. Every answer is checked against the
    /// width contract; violations surface as `OracleFailure`.
    pub fn from_oracle<F>(oracle: F) -> Self
    where
        F: Fn(u32) -> Result<Interval> + Send + Sync + 'static,
    {
        Self::build(Box::new(oracle), None)
    }

    fn build(oracle: Oracle, exact: Option<PosRat>) -> Self {
        PosRealValue {
            inner: Arc::new(RealInner { oracle, exact, cache: Mutex::new(BTreeMap::new()) }),
            label: None,
        }
    }

    /// Attach a text form (used when serializing embeddings).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(Arc::from(label.into()));
        self
    }

    pub fn label(&self) -> Option<String> {
        match (&self.label, &self.inner.exact) {
            (Some(l), _) => Some(l.to_string()),
            (None, Some(q)) => Some(q.to_string()),
            (None, None) => None,
        }
    }

    /// The exact rational value when this real was built from one.
    pub fn exact(&self) -> Option<&PosRat> {
        self.inner.exact.as_ref()
    }

    pub fn approx(&self, p: u32) -> Result<Interval> {
        if let Some(q) = &self.inner.exact {
            return Ok(Interval::point(q.clone()));
        }
        let mut cache = self.inner.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(hit) = cache.get(&p) {
            return Ok(hit.clone());
        }
        if let Some((_, finer)) = cache.range(p..).next() {
            let finer = finer.clone();
            cache.insert(p, finer.clone());
            return Ok(finer);
        }
        let interval = (self.inner.oracle)(p)?;
        if !interval.width_at_most(p) {
            return Err(MagnitudeError::OracleFailure(format!(
                "interval {interval} wider than 2^-{p}"
            )));
        }
        cache.insert(p, interval.clone());
        Ok(interval)
    }

    /// `approx(p)` intersected with the coarse `approx(0)` enclosure.
    fn tight(&self, p: u32) -> Result<Interval> {
        let fine = self.approx(p)?;
        let coarse = self.approx(0)?;
        fine.intersect(&coarse)
            .ok_or_else(|| MagnitudeError::OracleFailure("inconsistent refinements".into()))
    }

    /// `n` with `self <= 2^n`.
    fn upper_bits(&self) -> Result<u32> {
        Ok(self.approx(0)?.hi().bound_bits())
    }
}

impl fmt::Debug for PosRealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => write!(f, "real({l})"),
            None => f.write_str("real(<oracle>)"),
        }
    }
}

pub fn real_from_rat(q: &PosRat) -> PosRealValue {
    let point = q.clone();
    PosRealValue::build(Box::new(move |_| Ok(Interval::point(point.clone()))), Some(q.clone()))
}

pub fn real_approx(x: &PosRealValue, p: u32) -> Result<Interval> {
    x.approx(p)
}

/// `x + y`; the result queries both inputs at `p + 1`.
pub fn real_add(x: &PosRealValue, y: &PosRealValue) -> PosRealValue {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return real_from_rat(&a.add(b));
    }
    let (x, y) = (x.clone(), y.clone());
    PosRealValue::from_oracle(move |p| {
        let a = x.approx(p + 1)?;
        let b = y.approx(p + 1)?;
        Ok(Interval { lo: a.lo.add(&b.lo), hi: a.hi.add(&b.hi) })
    })
}

/// `c * x` for a positive rational `c`.
pub fn real_scale(x: &PosRealValue, c: &PosRat) -> PosRealValue {
    if let Some(a) = x.exact() {
        return real_from_rat(&a.mul(c));
    }
    let (x, c) = (x.clone(), c.clone());
    let extra = c.bound_bits();
    PosRealValue::from_oracle(move |p| {
        let a = x.approx(p + 1 + extra)?;
        Ok(Interval { lo: a.lo.mul(&c), hi: a.hi.mul(&c) }.round_outward(p + 2))
    })
}

/// `x * y` by endpoint products.
pub fn real_mul(x: &PosRealValue, y: &PosRealValue) -> PosRealValue {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return real_from_rat(&a.mul(b));
    }
    if let Some(c) = x.exact() {
        return real_scale(y, c);
    }
    if let Some(c) = y.exact() {
        return real_scale(x, c);
    }
    let (x, y) = (x.clone(), y.clone());
    PosRealValue::from_oracle(move |p| {
        // width <= (sup x + sup y) 2^-q
        let bits = x.upper_bits()?.max(y.upper_bits()?) + 1;
        let q = p + 1 + bits;
        let a = x.tight(q)?;
        let b = y.tight(q)?;
        Ok(Interval { lo: a.lo.mul(&b.lo), hi: a.hi.mul(&b.hi) }.round_outward(p + 2))
    })
}

/// `x / y` by endpoint division.
pub fn real_div(x: &PosRealValue, y: &PosRealValue) -> PosRealValue {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return real_from_rat(&a.div(b));
    }
    let (x, y) = (x.clone(), y.clone());
    PosRealValue::from_oracle(move |p| {
        let floor_y = y.approx(0)?.lo().clone();
        // width <= (sup x + sup y) 2^-q / inf(y)^2
        let inv_sq = floor_y.mul(&floor_y).recip();
        let bits = x.upper_bits()?.max(y.upper_bits()?) + 1 + inv_sq.bound_bits();
        let q = p + 1 + bits;
        let a = x.tight(q)?;
        let b = y.tight(q)?;
        Ok(Interval { lo: a.lo.div(&b.hi), hi: a.hi.div(&b.lo) }.round_outward(p + 2))
    })
}

/// `x - y`, provided `x > y` is certified within `policy`.
pub fn real_sub(x: &PosRealValue, y: &PosRealValue, policy: &ApproxPolicy) -> Result<PosRealValue> {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return a.checked_sub(b).map(|d| real_from_rat(&d)).ok_or(MagnitudeError::NotGreater);
    }
    let mut certificate = None;
    for p in policy.schedule() {
        match real_compare(x, y, p)? {
            RealOrdering::GreaterCertified => {
                certificate = Some(p);
                break;
            }
            RealOrdering::LessCertified => return Err(MagnitudeError::NotGreater),
            RealOrdering::OverlapAt(_) => {}
        }
    }
    let c = certificate.ok_or(MagnitudeError::Undecided(policy.cap))?;
    let xc = x.approx(c)?;
    let yc = y.approx(c)?;
    let floor = xc.lo.as_big() - yc.hi.as_big();
    let ceiling = xc.hi.as_big() - yc.lo.as_big();
    let (x, y) = (x.clone(), y.clone());
    Ok(PosRealValue::from_oracle(move |p| {
        let a = x.approx(p + 1)?;
        let b = y.approx(p + 1)?;
        let lo = (a.lo.as_big() - b.hi.as_big()).max(floor.clone());
        let hi = (a.hi.as_big() - b.lo.as_big()).min(ceiling.clone());
        Interval::from_big(lo, hi)
    }))
}

/// Dyadic bounds `k/2^bits` of the real `n`-th root of a rational `c`:
/// the largest below (`upper = false`) or smallest above (`upper = true`).
pub(crate) fn dyadic_root_bound(c: &BigRational, n: u32, bits: u32, upper: bool) -> BigRational {
    let shift = BigInt::one() << (bits as usize * n as usize);
    let scaled = c * BigRational::from_integer(shift);
    let target: BigUint = if upper {
        scaled.ceil().to_integer().to_biguint().unwrap_or_default()
    } else {
        scaled.floor().to_integer().to_biguint().unwrap_or_default()
    };
    let mut k = target.nth_root(n);
    if upper && num_traits::pow::Pow::pow(&k, n) < target {
        k += 1u32;
    }
    BigRational::new(BigInt::from(k), BigInt::one() << bits)
}

/// `x^(1/n)` for `x >= 1`, `n >= 1`.
pub(crate) fn real_root(x: &PosRealValue, n: u32) -> PosRealValue {
    assert!(n >= 1);
    if n == 1 {
        return x.clone();
    }
    if let Some(q) = x.exact() {
        let lo = dyadic_root_bound(q.as_big(), n, 0, false);
        let hi = dyadic_root_bound(q.as_big(), n, 0, true);
        if lo == hi {
            return real_from_rat(&PosRat::from_big(lo).expect("root of a positive integer"));
        }
        // rational perfect powers
        let rn = dyadic_root_bound(&BigRational::from_integer(q.as_big().numer().clone()), n, 0, false);
        let rd = dyadic_root_bound(&BigRational::from_integer(q.as_big().denom().clone()), n, 0, false);
        if let (Some(rn), Some(rd)) = (PosRat::from_big(rn), PosRat::from_big(rd)) {
            let candidate = rn.div(&rd);
            if candidate.pow(&Nat::from_u64(n as u64)) == *q {
                return real_from_rat(&candidate);
            }
        }
    }
    let x = x.clone();
    PosRealValue::from_oracle(move |p| {
        let a = x.approx(p + 1)?;
        let one = BigRational::one();
        let lo_src = a.lo.as_big().clone().max(one.clone());
        let hi_src = a.hi.as_big().clone().max(one);
        let lo = dyadic_root_bound(&lo_src, n, p + 2, false);
        let hi = dyadic_root_bound(&hi_src, n, p + 2, true);
        Interval::from_big(lo, hi)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealOrdering {
    LessCertified,
    GreaterCertified,
    OverlapAt(u32),
}

/// Certified comparison at precision `p`: a verdict only when the two
/// `p`-intervals are disjoint.
pub fn real_compare(x: &PosRealValue, y: &PosRealValue, p: u32) -> Result<RealOrdering> {
    let a = x.approx(p)?;
    let b = y.approx(p)?;
    Ok(if a.hi < b.lo {
        RealOrdering::LessCertified
    } else if a.lo > b.hi {
        RealOrdering::GreaterCertified
    } else {
        RealOrdering::OverlapAt(p)
    })
}

impl Magnitude for PosRealValue {
    const MODEL: ModelId = ModelId::Real;

    fn descriptor() -> ModelDescriptor<Self> {
        ModelDescriptor {
            model_id: ModelId::Real,
            discrete: false,
            symmetric: true,
            continuous_at_oracle: true,
            exact_order: false,
            unit: Some(real_from_rat(&PosRat::one())),
            smallest: None,
        }
    }

    fn combine(&self, other: &Self) -> Self {
        real_add(self, other)
    }

    fn certified_cmp(&self, other: &Self, precision: u32) -> Result<Certified> {
        Ok(match real_compare(self, other, precision)? {
            RealOrdering::LessCertified => Certified::Less,
            RealOrdering::GreaterCertified => Certified::Greater,
            RealOrdering::OverlapAt(_) => Certified::Overlap,
        })
    }

    fn shrink_below(&self, n: &Nat) -> Result<Self> {
        Ok(real_scale(self, &PosRat::from_nat(&n.successor()).recip()))
    }

    /// One scaling node instead of a chain of `2 log n` lazy sums.
    fn scaled(&self, n: &Nat) -> Option<Self> {
        Some(real_scale(self, &PosRat::from_nat(n)))
    }

    fn to_rational(&self) -> Option<PosRat> {
        self.exact().cloned()
    }
}

/// Renders `mid ± 2^-p`, with `floor(p log10 2)` decimals.
pub fn format_mid(x: &PosRealValue, p: u32) -> Result<String> {
    let interval = x.approx(p)?;
    let digits = (p as u64 * 30103 / 100000) as u32;
    Ok(format!("{} ± 2^-{p}", interval.midpoint().to_decimal(digits)))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> PosRat {
        s.parse().unwrap()
    }

    /// sqrt(2) by plain bisection on dyadic rationals, independent of the
    /// integer-root path.
    fn sqrt2_bisection(bits: u32) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(2.into());
        let (mut lo, mut hi) = (BigRational::one(), two.clone());
        for _ in 0..bits {
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if &mid * &mid <= two {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    #[test]
    fn exact_point_has_zero_width() {
        let x = real_from_rat(&rat("1/3"));
        assert_eq!(x.approx(10).unwrap(), Interval::point(rat("1/3")));
        let two = real_from_rat(&rat("2"));
        for p in [0, 5, 50] {
            assert!(two.approx(p).unwrap().contains(&rat("2")));
        }
    }

    #[test]
    fn sum_of_points() {
        let s = real_add(&real_from_rat(&rat("1/3")), &real_from_rat(&rat("2/3")));
        for p in [0, 3, 40] {
            assert!(s.approx(p).unwrap().contains(&PosRat::one()));
        }
    }

    #[test]
    fn sqrt2_refines() {
        let r = real_root(&real_from_rat(&rat("2")), 2);
        assert!(r.exact().is_none());
        let (lo, hi) = sqrt2_bisection(60);
        for p in [2, 4, 20, 53] {
            let i = r.approx(p).unwrap();
            assert!(i.width_at_most(p));
            assert!(i.lo().as_big() <= &lo && &hi <= i.hi().as_big(), "p={p} {i}");
        }
    }

    #[test]
    fn root_of_perfect_powers_is_exact() {
        assert_eq!(real_root(&real_from_rat(&rat("8")), 3).exact(), Some(&rat("2")));
        assert_eq!(real_root(&real_from_rat(&rat("9/4")), 2).exact(), Some(&rat("3/2")));
    }

    #[test]
    fn sqrt2_plus_sqrt2() {
        let r = real_root(&real_from_rat(&rat("2")), 2);
        let s = real_add(&r, &r);
        let i = s.approx(20).unwrap();
        let (lo, hi) = sqrt2_bisection(64);
        let two = BigRational::from_integer(2.into());
        assert!(i.width_at_most(20));
        assert!(i.lo().as_big() <= &(&lo * &two) && &(&hi * &two) <= i.hi().as_big());
    }

    #[test]
    fn width_bound_of_sum_from_inputs() {
        let r = real_root(&real_from_rat(&rat("3")), 2);
        let s = real_add(&r, &real_root(&real_from_rat(&rat("5")), 2));
        for p in 0..30 {
            assert!(s.approx(p).unwrap().width_at_most(p));
        }
    }

    #[test]
    fn compare_examples() {
        let third = real_from_rat(&rat("1/3"));
        let half = real_from_rat(&rat("1/2"));
        assert_eq!(real_compare(&third, &half, 4).unwrap(), RealOrdering::LessCertified);
        let r = real_root(&real_from_rat(&rat("2")), 2);
        assert_eq!(real_compare(&r, &real_from_rat(&rat("3/2")), 8).unwrap(), RealOrdering::LessCertified);
        for p in [0, 7, 30] {
            assert_eq!(real_compare(&r, &r, p).unwrap(), RealOrdering::OverlapAt(p));
            assert_eq!(real_compare(&half, &half, p).unwrap(), RealOrdering::OverlapAt(p));
        }
    }

    #[test]
    fn memoized_refinement_is_idempotent() {
        let r = real_root(&real_from_rat(&rat("7")), 3);
        let a = r.approx(17).unwrap();
        let _ = r.approx(30).unwrap();
        assert_eq!(r.approx(17).unwrap(), a);
    }

    #[test]
    fn concurrent_refinements_agree() {
        let r = real_mul(&real_root(&real_from_rat(&rat("2")), 2), &real_root(&real_from_rat(&rat("3")), 2));
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let r = r.clone();
                std::thread::spawn(move || r.approx(40).unwrap())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn misbehaving_oracle_is_rejected() {
        let bad = PosRealValue::from_oracle(|_| Interval::new(rat("1"), rat("2")));
        assert!(matches!(bad.approx(3), Err(MagnitudeError::OracleFailure(_))));
        assert!(bad.approx(0).is_ok());
    }

    #[test]
    fn mul_div_sub_contain_truth() {
        let r2 = real_root(&real_from_rat(&rat("2")), 2);
        let prod = real_mul(&r2, &r2);
        let quot = real_div(&real_from_rat(&rat("2")), &r2);
        let diff = real_sub(&real_from_rat(&rat("3/2")), &r2, &ApproxPolicy::default()).unwrap();
        let (lo, hi) = sqrt2_bisection(80);
        for p in [0, 10, 30] {
            assert!(prod.approx(p).unwrap().contains(&rat("2")));
            let q = quot.approx(p).unwrap();
            assert!(q.width_at_most(p) && q.lo().as_big() <= &lo && &hi <= q.hi().as_big());
            let d = diff.approx(p).unwrap();
            let three_halves = BigRational::new(3.into(), 2.into());
            assert!(d.width_at_most(p));
            assert!(d.lo().as_big() <= &(&three_halves - &lo) && &(&three_halves - &hi) <= d.hi().as_big());
        }
        assert_eq!(
            real_sub(&r2, &real_from_rat(&rat("3/2")), &ApproxPolicy::default()).unwrap_err(),
            MagnitudeError::NotGreater
        );
        assert_eq!(real_sub(&r2, &r2, &ApproxPolicy::with_cap(10, 32)).unwrap_err(), MagnitudeError::Undecided(32));
    }

    #[test]
    fn shrink_below_on_reals() {
        let r2 = real_root(&real_from_rat(&rat("2")), 2);
        let n = Nat::from_u64(5);
        let b = r2.shrink_below(&n).unwrap();
        let nb = crate::space::multiple(&n, &b);
        assert_eq!(real_compare(&nb, &r2, 16).unwrap(), RealOrdering::LessCertified);
    }

    #[test]
    fn mid_rendering() {
        let r = real_root(&real_from_rat(&rat("2")), 2);
        assert_eq!(format_mid(&r, 40).unwrap(), "1.414213562373 ± 2^-40");
    }
}
