//! Reals above one under multiplication.
//!
//! `(ℝ>1, ·)` is itself a continuous magnitude space, so its `n`-th
//! multiple is the power `x^n` and dividing into `n` equal parts is the
//! `n`-th root. Rational exponents follow; real exponents are squeezed
//! between dyadic ones, using that `y ↦ x^y` is increasing.

use num_rational::BigRational;
use num_traits::Zero;

use crate::models::real::{real_mul, real_root};
use crate::models::{dyadic_ceil, dyadic_floor, real_from_rat, Interval};
use crate::space::{multiple, ApproxPolicy, Certified, Magnitude, ModelDescriptor, ModelId};
use crate::{MagnitudeError, Nat, PosRat, PosRealValue, Result};

/// A real together with a precision at which it is certified `> 1`.
#[derive(Debug, Clone)]
pub struct MulReal {
    value: PosRealValue,
    certified_above_one_at: u32,
}

/// Largest precision tried when a value is known to exceed one.
const CERTIFY_LIMIT: u32 = 1 << 14;

impl MulReal {
    pub fn value(&self) -> &PosRealValue {
        &self.value
    }

    pub fn certified_above_one_at(&self) -> u32 {
        self.certified_above_one_at
    }

    pub fn approx(&self, p: u32) -> Result<Interval> {
        self.value.approx(p)
    }

    /// Certify a value already known (mathematically) to exceed one.
    fn known_above_one(value: PosRealValue, floor: Option<&PosRat>) -> Result<MulReal> {
        // lo(q) >= x - 2^-q > 1 once 2^-q < floor - 1
        let start = floor
            .and_then(|f| f.checked_sub(&PosRat::one()))
            .map(|gap| gap.recip().bound_bits() + 1)
            .unwrap_or(0);
        let mut p = start.min(CERTIFY_LIMIT);
        loop {
            if above_one(&value, p)? {
                return Ok(MulReal { value, certified_above_one_at: p });
            }
            if p >= CERTIFY_LIMIT {
                return Err(MagnitudeError::NotAboveOne(CERTIFY_LIMIT));
            }
            p = (p * 2).max(p + 1).min(CERTIFY_LIMIT);
        }
    }

    fn floor(&self) -> Result<PosRat> {
        Ok(self.value.approx(self.certified_above_one_at)?.lo().clone())
    }
}

fn above_one(x: &PosRealValue, p: u32) -> Result<bool> {
    Ok(x.approx(p)?.lo() > &PosRat::one())
}

/// Certify `x > 1` by refining along `0, 1, 2, 4, 8, …` up to the policy cap.
pub fn into_mul(x: &PosRealValue, policy: &ApproxPolicy) -> Result<MulReal> {
    if let Some(q) = x.exact() {
        return if q > &PosRat::one() {
            Ok(MulReal { value: x.clone(), certified_above_one_at: 0 })
        } else {
            Err(MagnitudeError::NotAboveOne(policy.cap))
        };
    }
    let mut p = 0;
    loop {
        let i = x.approx(p)?;
        if i.lo() > &PosRat::one() {
            return Ok(MulReal { value: x.clone(), certified_above_one_at: p });
        }
        if i.hi() <= &PosRat::one() || p >= policy.cap {
            return Err(MagnitudeError::NotAboveOne(p));
        }
        p = (p * 2).max(1).min(policy.cap);
    }
}

/// `x · y`; the group operation.
pub fn mul_combine(x: &MulReal, y: &MulReal) -> MulReal {
    let value = real_mul(&x.value, &y.value);
    let floor = x.floor().and_then(|a| Ok(a.mul(&y.floor()?)));
    MulReal::known_above_one(value, floor.ok().as_ref()).expect("a product of reals above one exceeds one")
}

/// `x^n` by square-and-multiply.
pub fn mul_multiple(n: &Nat, x: &MulReal) -> MulReal {
    multiple(n, x)
}

/// The `n`-th root: the `b` with `b^n = x`. Powers of two in `n` are taken
/// as repeated square roots.
pub fn nth_root(x: &MulReal, n: &Nat) -> Result<MulReal> {
    let big = n.as_biguint();
    let twos = big.trailing_zeros().unwrap_or(0);
    let odd: u32 = (big >> twos)
        .try_into()
        .map_err(|_| MagnitudeError::InvalidArgument(format!("root index {n} too large")))?;
    let mut value = x.value.clone();
    for _ in 0..twos {
        value = real_root(&value, 2);
    }
    value = real_root(&value, odd);
    MulReal::known_above_one(value, None)
}

#[derive(Debug, Clone)]
pub enum Exponent {
    Rat(PosRat),
    Real(PosRealValue),
}

impl Exponent {
    fn exact(&self) -> Option<PosRat> {
        match self {
            Exponent::Rat(q) => Some(q.clone()),
            Exponent::Real(y) => y.exact().cloned(),
        }
    }
}

/// `x^y` for a positive exponent.
pub fn pow(x: &MulReal, y: &Exponent) -> Result<MulReal> {
    if let Some(q) = y.exact() {
        return pow_rat(x, &q);
    }
    let Exponent::Real(y) = y else { unreachable!() };
    let (base, exponent) = (x.clone(), y.clone());
    let value = PosRealValue::from_oracle(move |p| pow_real_at(&base, &exponent, p));
    MulReal::known_above_one(value, None)
}

/// One interval of `x^y` of width at most `2^-p`.
pub fn pow_at(x: &MulReal, y: &Exponent, p: u32) -> Result<Interval> {
    pow(x, y)?.approx(p)
}

fn pow_rat(x: &MulReal, y: &PosRat) -> Result<MulReal> {
    Ok(mul_multiple(&y.numer(), &nth_root(x, &y.denom())?))
}

/// `x^(k/2^q)` for an integer `k >= 0`; `x^0 = 1`.
fn pow_dyadic(x: &MulReal, y: &BigRational) -> Result<PosRealValue> {
    if y.is_zero() {
        return Ok(real_from_rat(&PosRat::one()));
    }
    let y = PosRat::from_big(y.clone()).expect("positive exponent");
    Ok(pow_rat(x, &y)?.value)
}

fn pow_real_at(x: &MulReal, y: &PosRealValue, p: u32) -> Result<Interval> {
    let mut q = p + 4;
    while q <= p + 512 {
        let yi = y.approx(q)?;
        let yl = dyadic_floor(yi.lo().as_big(), q).max(BigRational::zero());
        let yh = dyadic_ceil(yi.hi().as_big(), q);
        let lower = pow_dyadic(x, &yl)?.approx(p + 2)?;
        let upper = pow_dyadic(x, &yh)?.approx(p + 2)?;
        let bracket = Interval::new(lower.lo().clone(), upper.hi().clone())?;
        if bracket.width_at_most(p) {
            return Ok(bracket);
        }
        q += 8;
    }
    Err(MagnitudeError::OracleFailure(format!("power bracket did not close at precision {p}")))
}

impl Magnitude for MulReal {
    const MODEL: ModelId = ModelId::Real;

    fn descriptor() -> ModelDescriptor<Self> {
        ModelDescriptor {
            model_id: ModelId::Real,
            discrete: false,
            symmetric: false,
            continuous_at_oracle: true,
            exact_order: false,
            unit: None,
            smallest: None,
        }
    }

    fn combine(&self, other: &Self) -> Self {
        mul_combine(self, other)
    }

    fn certified_cmp(&self, other: &Self, precision: u32) -> Result<Certified> {
        self.value.certified_cmp(&other.value, precision)
    }

    fn shrink_below(&self, n: &Nat) -> Result<Self> {
        nth_root(self, &n.successor())
    }
}

/// Helper for building exponents and bases from text.
pub fn exponent_from_element(e: &crate::Element) -> Result<Exponent> {
    match e {
        crate::Element::Nat(n) => Ok(Exponent::Rat(PosRat::from_nat(n))),
        crate::Element::Rat(q) => Ok(Exponent::Rat(q.clone())),
        crate::Element::Real(r) => Ok(Exponent::Real(r.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::real::format_mid;
    use crate::Element;
    use num_bigint::BigInt;
    use num_traits::One;

    fn q(s: &str) -> PosRat {
        s.parse().unwrap()
    }

    fn mul(s: &str) -> MulReal {
        let x = Element::parse(ModelId::Real, s).unwrap();
        into_mul(x.as_real().unwrap(), &ApproxPolicy::default()).unwrap()
    }

    /// Bisection for `c^(1/n)` on exact rationals: an oracle independent of
    /// the integer-root code.
    fn root_bisection(c: &BigRational, n: u32, bits: u32) -> (BigRational, BigRational) {
        let (mut lo, mut hi) = (BigRational::one(), c.clone().max(BigRational::one()) + BigRational::one());
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
        while &hi - &lo > eps {
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if num_traits::pow(mid.clone(), n as usize) <= *c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    #[test]
    fn into_mul_examples() {
        let x = mul("3/2");
        assert!(x.approx(x.certified_above_one_at()).unwrap().lo() > &PosRat::one());
        let one = real_from_rat(&PosRat::one());
        assert!(matches!(into_mul(&one, &ApproxPolicy::default()), Err(MagnitudeError::NotAboveOne(_))));
        let s = mul("sqrt(2)");
        let c = s.certified_above_one_at();
        assert!(c <= 4 && s.approx(c).unwrap().lo() > &PosRat::one());
    }

    #[test]
    fn mul_multiple_examples() {
        let x = mul("3/2");
        let cube = mul_multiple(&Nat::from_u64(3), &x);
        assert_eq!(cube.value().exact(), Some(&q("27/8")));
        let ten = mul_multiple(&Nat::from_u64(10), &x);
        assert_eq!(ten.value().exact(), Some(&q("59049/1024")));
        let s = mul_multiple(&Nat::from_u64(2), &mul("sqrt(2)"));
        let i = s.approx(40).unwrap();
        assert!(i.contains(&q("2")) && i.width_at_most(40));
    }

    #[test]
    fn nth_root_examples() {
        let r = nth_root(&mul("2"), &Nat::from_u64(2)).unwrap();
        let i = r.approx(40).unwrap();
        let (lo, hi) = root_bisection(&BigRational::from_integer(2.into()), 2, 60);
        assert!(i.lo().as_big() <= &hi && &lo <= i.hi().as_big() && i.width_at_most(40));
        assert_eq!(nth_root(&mul("8"), &Nat::from_u64(3)).unwrap().value().exact(), Some(&q("2")));
        let r12 = nth_root(&mul("5"), &Nat::from_u64(12)).unwrap();
        let (lo, hi) = root_bisection(&BigRational::from_integer(5.into()), 12, 60);
        let i = r12.approx(40).unwrap();
        assert!(i.lo().as_big() <= &hi && &lo <= i.hi().as_big());
    }

    #[test]
    fn pow_examples() {
        let r = pow(&mul("2"), &Exponent::Rat(q("1/2"))).unwrap();
        assert_eq!(format_mid(r.value(), 40).unwrap(), "1.414213562373 ± 2^-40");
        let r = pow(&mul("4"), &Exponent::Rat(q("3/2"))).unwrap();
        assert_eq!(r.value().exact(), Some(&q("8")));
    }

    #[test]
    fn pow_real_exponent() {
        // 2^sqrt(2) ≈ 2.665144142690225
        let y = Element::parse(ModelId::Real, "sqrt(2)").unwrap();
        let r = pow(&mul("2"), &Exponent::Real(y.as_real().unwrap().clone())).unwrap();
        let i = r.approx(30).unwrap();
        assert!(i.width_at_most(30));
        assert!(i.contains(&q("2.6651441426")) || i.intersects(&Interval::new(q("2.66514414268"), q("2.66514414270")).unwrap()));
        // monotone in the exponent
        let lo = pow(&mul("2"), &Exponent::Rat(q("1.414"))).unwrap().approx(30).unwrap();
        let hi = pow(&mul("2"), &Exponent::Rat(q("1.415"))).unwrap().approx(30).unwrap();
        assert!(lo.hi() < i.lo() && i.hi() < hi.lo());
    }

    #[test]
    fn exponent_laws_hold_on_a_grid() {
        let xs = ["3/2", "2", "5/2"];
        let ys = ["1/3", "1/2", "1", "7/4"];
        for x in xs {
            for y in ys {
                let y = Exponent::Rat(q(y));
                for x2 in xs {
                    let lhs = pow(&mul_combine(&mul(x), &mul(x2)), &y).unwrap().approx(40).unwrap();
                    let rhs = mul_combine(&pow(&mul(x), &y).unwrap(), &pow(&mul(x2), &y).unwrap())
                        .approx(40)
                        .unwrap();
                    assert!(lhs.intersects(&rhs), "base law at {x} {x2}");
                }
            }
            for (y1, y2) in [("1/3", "7/4"), ("1/2", "1/2"), ("1", "1/3")] {
                let sum = Exponent::Rat(q(y1).add(&q(y2)));
                let lhs = pow(&mul(x), &sum).unwrap().approx(40).unwrap();
                let rhs = mul_combine(
                    &pow(&mul(x), &Exponent::Rat(q(y1))).unwrap(),
                    &pow(&mul(x), &Exponent::Rat(q(y2))).unwrap(),
                )
                .approx(40)
                .unwrap();
                assert!(lhs.intersects(&rhs), "exponent law at {x}^({y1}+{y2})");
            }
        }
    }
}
