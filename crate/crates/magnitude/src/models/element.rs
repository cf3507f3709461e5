use std::fmt;

use crate::models::real::{real_root, real_sub};
use crate::space::{self, ApproxPolicy, Certified, ExactMagnitude, Magnitude, ModelDescriptor, ModelId, Ordering3};
use crate::{MagnitudeError, Nat, PosRat, PosRealValue, Result};

/// An element of any shipped model, tagged at runtime.
///
/// Used where the model is only known from user input: the CLI, the JSON
/// embedding form and the embedding evaluator.
#[derive(Clone, Debug)]
pub enum Element {
    Nat(Nat),
    Rat(PosRat),
    Real(PosRealValue),
}

impl Element {
    pub fn model(&self) -> ModelId {
        match self {
            Element::Nat(_) => ModelId::Nat,
            Element::Rat(_) => ModelId::Rat,
            Element::Real(_) => ModelId::Real,
        }
    }

    /// Parse the text form of an element of `model`.
    ///
    /// Reals accept a rational (`3/2`, `1.5`), `sqrt(x)` or `root(n, x)`
    /// with rational `x >= 1`.
    pub fn parse(model: ModelId, text: &str) -> Result<Element> {
        let text = text.trim();
        match model {
            ModelId::Nat => Ok(Element::Nat(text.parse()?)),
            ModelId::Rat => Ok(Element::Rat(text.parse()?)),
            ModelId::Real => parse_real(text).map(Element::Real),
        }
    }

    pub fn unit(model: ModelId) -> Element {
        match model {
            ModelId::Nat => Element::Nat(Nat::one()),
            ModelId::Rat => Element::Rat(PosRat::one()),
            ModelId::Real => Element::Real(crate::models::real_from_rat(&PosRat::one())),
        }
    }

    pub fn descriptor(model: ModelId) -> ModelDescriptor<Element> {
        match model {
            ModelId::Nat => Nat::descriptor().map(Element::Nat),
            ModelId::Rat => PosRat::descriptor().map(Element::Rat),
            ModelId::Real => PosRealValue::descriptor().map(Element::Real),
        }
    }

    /// Exact rational value for `nat`, `rat` and exact-point reals.
    pub fn to_rational(&self) -> Option<PosRat> {
        match self {
            Element::Nat(n) => Some(PosRat::from_nat(n)),
            Element::Rat(q) => Some(q.clone()),
            Element::Real(x) => x.exact().cloned(),
        }
    }

    /// View this element in the real model.
    pub fn to_real(&self) -> PosRealValue {
        match self {
            Element::Real(x) => x.clone(),
            other => crate::models::real_from_rat(&other.to_rational().expect("exact model")),
        }
    }

    fn mismatch(&self, other: &Element) -> MagnitudeError {
        MagnitudeError::ModelMismatch { left: self.model(), right: other.model() }
    }

    pub fn combine(&self, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Nat(a), Element::Nat(b)) => Ok(Element::Nat(a.combine(b))),
            (Element::Rat(a), Element::Rat(b)) => Ok(Element::Rat(a.combine(b))),
            (Element::Real(a), Element::Real(b)) => Ok(Element::Real(a.combine(b))),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Exact trichotomy; the real model is refused (use [`Element::certified_compare`]).
    pub fn compare(&self, other: &Element) -> Result<Ordering3<Element>> {
        match (self, other) {
            (Element::Nat(a), Element::Nat(b)) => Ok(a.compare(b).map(Element::Nat)),
            (Element::Rat(a), Element::Rat(b)) => Ok(a.compare(b).map(Element::Rat)),
            (Element::Real(_), Element::Real(_)) => Err(MagnitudeError::InexactModel(ModelId::Real)),
            _ => Err(self.mismatch(other)),
        }
    }

    /// Comparison escalating along `policy`; exact models answer immediately.
    pub fn certified_compare(&self, other: &Element, policy: &ApproxPolicy) -> Result<Certified> {
        match (self, other) {
            (Element::Nat(a), Element::Nat(b)) => space::certified_compare(a, b, policy),
            (Element::Rat(a), Element::Rat(b)) => space::certified_compare(a, b, policy),
            (Element::Real(a), Element::Real(b)) => {
                if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
                    return Ok(Certified::from_ordering(x.cmp(y)));
                }
                space::certified_compare(a, b, policy)
            }
            _ => Err(self.mismatch(other)),
        }
    }

    /// `self - other`; on reals the difference must be certifiable.
    pub fn subtract(&self, other: &Element, policy: &ApproxPolicy) -> Result<Element> {
        match (self, other) {
            (Element::Nat(a), Element::Nat(b)) => space::subtract(a, b).map(Element::Nat),
            (Element::Rat(a), Element::Rat(b)) => space::subtract(a, b).map(Element::Rat),
            (Element::Real(a), Element::Real(b)) => real_sub(a, b, policy).map(Element::Real),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn multiple(&self, n: &Nat) -> Element {
        match self {
            Element::Nat(a) => Element::Nat(space::multiple(n, a)),
            Element::Rat(a) => Element::Rat(space::multiple(n, a)),
            Element::Real(a) => Element::Real(space::multiple(n, a)),
        }
    }

    /// Does `self` lie in (or, for reals, overlap) `other` at precision `p`?
    pub fn agrees_with(&self, other: &Element, p: u32) -> Result<bool> {
        match (self, other) {
            (Element::Real(_), _) | (_, Element::Real(_)) => {
                Ok(self.to_real().approx(p)?.intersects(&other.to_real().approx(p)?))
            }
            _ => Ok(self.compare(other)?.tag() == std::cmp::Ordering::Equal),
        }
    }

    pub fn as_nat(&self) -> Option<&Nat> {
        match self {
            Element::Nat(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&PosRat> {
        match self {
            Element::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&PosRealValue> {
        match self {
            Element::Real(x) => Some(x),
            _ => None,
        }
    }

    /// Canonical text form; `None` for unlabelled reals.
    pub fn text(&self) -> Option<String> {
        match self {
            Element::Nat(n) => Some(n.to_string()),
            Element::Rat(q) => Some(q.to_string()),
            Element::Real(x) => x.label(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Rat(q) => write!(f, "{q}"),
            Element::Real(x) => match x.label() {
                Some(l) => f.write_str(&l),
                None => f.write_str("<real>"),
            },
        }
    }
}

fn parse_real(text: &str) -> Result<PosRealValue> {
    let call = |name: &str| {
        text.strip_prefix(name)
            .and_then(|rest| rest.trim_start().strip_prefix('('))
            .and_then(|rest| rest.strip_suffix(')'))
    };
    let root_of = |n: u32, arg: &str| -> Result<PosRealValue> {
        let x: PosRat = arg.trim().parse()?;
        if x < PosRat::one() {
            return Err(MagnitudeError::Parse(format!("root argument `{arg}` must be at least 1")));
        }
        Ok(real_root(&crate::models::real_from_rat(&x), n).with_label(text.to_string()))
    };
    if let Some(arg) = call("sqrt") {
        return root_of(2, arg);
    }
    if let Some(args) = call("root") {
        let (n, x) = args
            .split_once(',')
            .ok_or_else(|| MagnitudeError::Parse(format!("expected root(n, x), got `{text}`")))?;
        let n: Nat = n.trim().parse()?;
        let n = n
            .to_u64()
            .filter(|&n| n <= 1 << 12)
            .ok_or_else(|| MagnitudeError::Parse("root index too large".into()))?;
        return root_of(n as u32, x);
    }
    let q: PosRat = text.parse()?;
    Ok(crate::models::real_from_rat(&q))
}
