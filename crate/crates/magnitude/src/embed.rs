//! Embeddings as data.
//!
//! An [`Embedding`] is a representation tree plus its domain and codomain
//! models. The evaluator is pure; equality of two embeddings is decided at
//! a single probe, since an embedding between Archimedean spaces is fixed
//! by its value at one point.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::models::real::{real_mul, real_scale};
use crate::models::{real_from_rat, Interval};
use crate::ratio::{ratio_bounds, RatioBounds};
pub use crate::space::ApproxPolicy;
use crate::space::{Certified, ExactMagnitude, ModelDescriptor, ModelId};
use crate::{Element, MagnitudeError, Nat, PosRat, PosRealValue, Result};

#[derive(Debug, Clone)]
pub enum EmbeddingRepr {
    /// Domain `nat`: `n ↦ n · image`.
    UnitMultiple { image: Element },
    /// `b ↦` the fourth proportional to `(a, b, image)`.
    Anchor { a: Element, image: Element },
    Identity,
    Sum(Box<EmbeddingRepr>, Box<EmbeddingRepr>),
    Compose { outer: Box<EmbeddingRepr>, inner: Box<EmbeddingRepr> },
    /// Pointwise `left - right`; only meaningful where `left > right`.
    Difference(Box<EmbeddingRepr>, Box<EmbeddingRepr>),
}

/// A representation together with its (validated) signature.
#[derive(Debug, Clone)]
pub struct Embedding {
    repr: EmbeddingRepr,
    domain: ModelId,
    codomain: ModelId,
}

/// Codomain of `repr` applied to `domain`, checking every node.
fn infer(repr: &EmbeddingRepr, domain: ModelId) -> Result<ModelId> {
    match repr {
        EmbeddingRepr::UnitMultiple { image } => {
            if domain != ModelId::Nat {
                return Err(MagnitudeError::SignatureMismatch(format!(
                    "unit multiple needs a nat domain, got {domain}"
                )));
            }
            Ok(image.model())
        }
        EmbeddingRepr::Anchor { a, image } => {
            if a.model() != domain {
                return Err(MagnitudeError::ModelMismatch { left: a.model(), right: domain });
            }
            check_anchor(a, image)?;
            Ok(image.model())
        }
        EmbeddingRepr::Identity => Ok(domain),
        EmbeddingRepr::Sum(l, r) | EmbeddingRepr::Difference(l, r) => {
            let (cl, cr) = (infer(l, domain)?, infer(r, domain)?);
            if cl != cr {
                return Err(MagnitudeError::SignatureMismatch(format!("{cl} vs {cr}")));
            }
            Ok(cl)
        }
        EmbeddingRepr::Compose { outer, inner } => infer(outer, infer(inner, domain)?),
    }
}

fn unsupported(msg: impl Into<String>) -> MagnitudeError {
    MagnitudeError::UnsupportedCodomain(msg.into())
}

fn check_anchor(a: &Element, image: &Element) -> Result<()> {
    let exact_a = a
        .to_rational()
        .ok_or_else(|| unsupported("anchor point must have an exact value"))?;
    match (a.model(), image.model()) {
        (ModelId::Real, ModelId::Real) => Ok(()),
        (ModelId::Real, _) => Err(unsupported("a real domain embeds only into the real model")),
        (ModelId::Nat, ModelId::Nat) => {
            let image = image.as_nat().expect("nat image");
            let per_unit = PosRat::from_nat(image).div(&exact_a);
            if per_unit.is_integer() {
                Ok(())
            } else {
                Err(unsupported(format!("{image} is not a multiple of {a} in nat")))
            }
        }
        (_, ModelId::Nat) => Err(unsupported("a non-discrete domain cannot embed into nat")),
        _ => Ok(()),
    }
}

impl Embedding {
    pub fn new(repr: EmbeddingRepr, domain: ModelId) -> Result<Self> {
        let codomain = infer(&repr, domain)?;
        Ok(Embedding { repr, domain, codomain })
    }

    pub fn repr(&self) -> &EmbeddingRepr {
        &self.repr
    }

    pub fn domain(&self) -> ModelId {
        self.domain
    }

    pub fn codomain(&self) -> ModelId {
        self.codomain
    }

    pub fn domain_descriptor(&self) -> ModelDescriptor<Element> {
        Element::descriptor(self.domain)
    }

    pub fn codomain_descriptor(&self) -> ModelDescriptor<Element> {
        Element::descriptor(self.codomain)
    }

    pub fn eval(&self, b: &Element) -> Result<Element> {
        eval(self, b)
    }
}

/// The unique embedding of `nat` sending `1` to `image`.
pub fn nat_embedding(image: Element) -> Embedding {
    let codomain = image.model();
    Embedding { repr: EmbeddingRepr::UnitMultiple { image }, domain: ModelId::Nat, codomain }
}

/// The embedding sending `a` to `image`.
pub fn anchor_embedding(a: Element, image: Element) -> Result<Embedding> {
    let domain = a.model();
    Embedding::new(EmbeddingRepr::Anchor { a, image }, domain)
}

pub fn identity_embedding(model: ModelId) -> Embedding {
    Embedding { repr: EmbeddingRepr::Identity, domain: model, codomain: model }
}

fn same_signature(phi: &Embedding, chi: &Embedding) -> Result<()> {
    if phi.domain != chi.domain || phi.codomain != chi.codomain {
        return Err(MagnitudeError::SignatureMismatch(format!(
            "{}→{} vs {}→{}",
            phi.domain, phi.codomain, chi.domain, chi.codomain
        )));
    }
    Ok(())
}

pub fn sum_embedding(phi: &Embedding, chi: &Embedding) -> Result<Embedding> {
    same_signature(phi, chi)?;
    Ok(Embedding {
        repr: EmbeddingRepr::Sum(Box::new(phi.repr.clone()), Box::new(chi.repr.clone())),
        domain: phi.domain,
        codomain: phi.codomain,
    })
}

pub fn difference_embedding(phi: &Embedding, chi: &Embedding) -> Result<Embedding> {
    same_signature(phi, chi)?;
    Ok(Embedding {
        repr: EmbeddingRepr::Difference(Box::new(phi.repr.clone()), Box::new(chi.repr.clone())),
        domain: phi.domain,
        codomain: phi.codomain,
    })
}

/// `outer ∘ inner`.
pub fn compose_embedding(outer: &Embedding, inner: &Embedding) -> Result<Embedding> {
    if inner.codomain != outer.domain {
        return Err(MagnitudeError::SignatureMismatch(format!(
            "cannot compose {}→{} after {}→{}",
            outer.domain, outer.codomain, inner.domain, inner.codomain
        )));
    }
    Ok(Embedding {
        repr: EmbeddingRepr::Compose { outer: Box::new(outer.repr.clone()), inner: Box::new(inner.repr.clone()) },
        domain: inner.domain,
        codomain: outer.codomain,
    })
}

/// Evaluate `phi` at `b`. Real results are lazy oracles.
pub fn eval(phi: &Embedding, b: &Element) -> Result<Element> {
    if b.model() != phi.domain {
        return Err(MagnitudeError::ModelMismatch { left: b.model(), right: phi.domain });
    }
    eval_repr(&phi.repr, b)
}

fn eval_repr(repr: &EmbeddingRepr, b: &Element) -> Result<Element> {
    match repr {
        EmbeddingRepr::UnitMultiple { image } => {
            let n = b.as_nat().ok_or(MagnitudeError::ModelMismatch { left: b.model(), right: ModelId::Nat })?;
            Ok(image.multiple(n))
        }
        EmbeddingRepr::Anchor { a, image } => eval_anchor(a, image, b),
        EmbeddingRepr::Identity => Ok(b.clone()),
        EmbeddingRepr::Sum(l, r) => eval_repr(l, b)?.combine(&eval_repr(r, b)?),
        EmbeddingRepr::Compose { outer, inner } => eval_repr(outer, &eval_repr(inner, b)?),
        EmbeddingRepr::Difference(l, r) => eval_repr(l, b)?.subtract(&eval_repr(r, b)?, &ApproxPolicy::default()),
    }
}

fn eval_anchor(a: &Element, image: &Element, b: &Element) -> Result<Element> {
    let exact_a = a.to_rational().ok_or_else(|| unsupported("anchor point must have an exact value"))?;
    if b.to_rational().as_ref() == Some(&exact_a) {
        return Ok(image.clone());
    }
    match (b, image) {
        (Element::Real(x), Element::Real(img)) => {
            // b:a bounded by the oracle of b itself
            Ok(Element::Real(real_scale(&real_mul(x, img), &exact_a.recip())))
        }
        (Element::Real(_), _) => Err(unsupported("a real domain embeds only into the real model")),
        (_, Element::Real(img)) => match (a, b) {
            (Element::Nat(a), Element::Nat(b)) => Ok(Element::Real(fourth_proportional(a, b, img))),
            (Element::Rat(a), Element::Rat(b)) => Ok(Element::Real(fourth_proportional(a, b, img))),
            _ => Err(MagnitudeError::ModelMismatch { left: a.model(), right: b.model() }),
        },
        (_, Element::Rat(img)) => {
            let ratio = b.to_rational().expect("exact domain").div(&exact_a);
            Ok(Element::Rat(img.mul(&ratio)))
        }
        (_, Element::Nat(img)) => {
            let value = PosRat::from_nat(img).mul(&b.to_rational().expect("exact domain")).div(&exact_a);
            if !value.is_integer() {
                return Err(unsupported(format!("{value} is not a natural number")));
            }
            Ok(Element::Nat(value.numer()))
        }
    }
}

/// Literal recursion `φ(n) = φ(n - 1) + φ(1)` for unit-multiple embeddings.
pub fn eval_naive(phi: &Embedding, n: &Nat) -> Result<Element> {
    let EmbeddingRepr::UnitMultiple { image } = &phi.repr else {
        return Err(MagnitudeError::InvalidArgument("eval_naive needs a unit-multiple embedding".into()));
    };
    let steps = n
        .to_u64()
        .filter(|&n| n <= crate::space::NAIVE_GUARD)
        .ok_or_else(|| MagnitudeError::GuardExceeded("eval_naive needs n <= 2^16".into()))?;
    let mut acc = image.clone();
    for _ in 1..steps {
        acc = acc.combine(image)?;
    }
    Ok(acc)
}

/// The `b'` with `a:b = a':b'`, for an exact domain and a real `a'`.
///
/// At precision `p` the ratio `b:a` is bracketed by Stern–Brocot fractions
/// `lo <= b/a <= hi` found from multiples of `a` and `b`, and the result is
/// `[lo · inf a', hi · sup a']`.
pub fn fourth_proportional<M: ExactMagnitude>(a: &M, b: &M, a_prime: &PosRealValue) -> PosRealValue {
    if matches!(a.compare(b), crate::Ordering3::Equal) {
        return a_prime.clone();
    }
    let (a, b, x) = (a.clone(), b.clone(), a_prime.clone());
    let coarse = std::sync::OnceLock::new();
    PosRealValue::from_oracle(move |p| {
        let ratio_bits = *coarse.get_or_init(|| match ratio_bounds(&b, &a, 0) {
            Ok(RatioBounds::Exact(q)) => q.bound_bits(),
            Ok(RatioBounds::Between(_, hi)) => hi.bound_bits(),
            Err(_) => 0,
        });
        let image_bits = x.approx(0)?.hi().bound_bits();
        let xi = x.approx(p + 1 + ratio_bits)?.intersect(&x.approx(0)?).ok_or_else(|| {
            MagnitudeError::OracleFailure("inconsistent refinements".into())
        })?;
        match ratio_bounds(&b, &a, p + 1 + image_bits)? {
            RatioBounds::Exact(q) => Interval::new(xi.lo().mul(&q), xi.hi().mul(&q)),
            RatioBounds::Between(lo, hi) => Interval::new(xi.lo().mul(&lo), xi.hi().mul(&hi)),
        }
    })
}

/// One interval of the fourth proportional.
pub fn fourth_proportional_at<M: ExactMagnitude>(a: &M, b: &M, a_prime: &PosRealValue, p: u32) -> Result<Interval> {
    fourth_proportional(a, b, a_prime).approx(p)
}

/// Anything that maps elements of one model into another; embeddings and
/// test doubles alike.
pub trait ElementMap {
    fn domain(&self) -> ModelId;
    fn codomain(&self) -> ModelId;
    fn apply(&self, b: &Element) -> Result<Element>;
}

impl ElementMap for Embedding {
    fn domain(&self) -> ModelId {
        self.domain
    }

    fn codomain(&self) -> ModelId {
        self.codomain
    }

    fn apply(&self, b: &Element) -> Result<Element> {
        eval(self, b)
    }
}

/// A closure viewed as a map between models.
pub struct FnMap<F> {
    pub domain: ModelId,
    pub codomain: ModelId,
    pub f: F,
}

impl<F: Fn(&Element) -> Result<Element>> ElementMap for FnMap<F> {
    fn domain(&self) -> ModelId {
        self.domain
    }

    fn codomain(&self) -> ModelId {
        self.codomain
    }

    fn apply(&self, b: &Element) -> Result<Element> {
        (self.f)(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCheckReport {
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Random element of `model` with magnitude roughly in `2^-8 .. 2^8`.
pub(crate) fn sample_element(model: ModelId, rng: &mut impl Rng) -> Element {
    let rat = |rng: &mut dyn rand::RngCore| {
        let (nb, db) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
        let num = rng.gen_range(1..=1u64 << nb);
        let den = rng.gen_range(1..=1u64 << db);
        PosRat::from_u64(num, den)
    };
    match model {
        ModelId::Nat => {
            let bits = rng.gen_range(0..=16);
            Element::Nat(Nat::from_u64(rng.gen_range(1..=1u64 << bits)))
        }
        ModelId::Rat => Element::Rat(rat(rng)),
        ModelId::Real => Element::Real(real_from_rat(&rat(rng))),
    }
}

/// Test additivity and order preservation of `map` on `samples` pairs. The
/// first pair is always `(1, 1)`; the rest are drawn from `seed`.
pub fn check_homomorphism(map: &impl ElementMap, samples: usize, seed: u64) -> Result<HomCheckReport> {
    if samples == 0 {
        return Err(MagnitudeError::InvalidArgument("samples must be at least 1".into()));
    }
    let policy = ApproxPolicy::new(40);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Element::unit(map.domain());
    let mut fail = None;
    for i in 0..samples {
        let (b, c) = if i == 0 {
            (unit.clone(), unit.clone())
        } else {
            (sample_element(map.domain(), &mut rng), sample_element(map.domain(), &mut rng))
        };
        if let Some(msg) = check_pair(map, &b, &c, &policy)? {
            fail = Some(msg);
            break;
        }
    }
    Ok(HomCheckReport { samples, seed, passed: fail.is_none(), counterexample: fail })
}

fn check_pair(map: &impl ElementMap, b: &Element, c: &Element, policy: &ApproxPolicy) -> Result<Option<String>> {
    let image_sum = map.apply(&b.combine(c)?)?;
    let (fb, fc) = (map.apply(b)?, map.apply(c)?);
    let sum_images = fb.combine(&fc)?;
    if image_sum.model() != map.codomain() {
        return Ok(Some(format!("image of {b}+{c} lies in {}, expected {}", image_sum.model(), map.codomain())));
    }
    if !image_sum.agrees_with(&sum_images, policy.precision)? {
        return Ok(Some(format!(
            "additivity fails at ({b}, {c}): image {} ≠ {}",
            describe(&image_sum, policy.precision),
            describe(&sum_images, policy.precision)
        )));
    }
    let before = b.certified_compare(c, policy)?;
    let after = fb.certified_compare(&fc, policy)?;
    let consistent = match (before, after) {
        (x, y) if x == y => true,
        // a real codomain never certifies equality
        (Certified::Equal, Certified::Overlap) => true,
        _ => false,
    };
    if !consistent {
        return Ok(Some(format!("order not preserved at ({b}, {c}): {before:?} became {after:?}")));
    }
    Ok(None)
}

fn describe(x: &Element, p: u32) -> String {
    match x {
        Element::Real(r) => r.approx(p).map(|i| i.to_string()).unwrap_or_else(|e| e.to_string()),
        other => other.to_string(),
    }
}

/// Compare `phi` and `chi` by their values at `probe`.
pub fn embeddings_compare(phi: &Embedding, chi: &Embedding, probe: &Element, policy: &ApproxPolicy) -> Result<Ordering> {
    same_signature(phi, chi)?;
    match eval(phi, probe)?.certified_compare(&eval(chi, probe)?, policy)? {
        Certified::Less => Ok(Ordering::Less),
        Certified::Equal => Ok(Ordering::Equal),
        Certified::Greater => Ok(Ordering::Greater),
        Certified::Overlap => Err(MagnitudeError::Undecided(policy.cap)),
    }
}

// JSON form: {"domain": "nat", "codomain": "rat", "repr": {"kind": "unit_multiple", ...}}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub model: ModelId,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReprJson {
    UnitMultiple { image: ElementJson },
    Anchor { a: ElementJson, image: ElementJson },
    Identity,
    Sum { left: Box<ReprJson>, right: Box<ReprJson> },
    Compose { outer: Box<ReprJson>, inner: Box<ReprJson> },
    Difference { left: Box<ReprJson>, right: Box<ReprJson> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub domain: ModelId,
    pub codomain: ModelId,
    pub repr: ReprJson,
}

fn element_json(e: &Element) -> Result<ElementJson> {
    let value = e
        .text()
        .ok_or_else(|| MagnitudeError::InvalidArgument("real element has no text form".into()))?;
    Ok(ElementJson { model: e.model(), value })
}

fn repr_json(repr: &EmbeddingRepr) -> Result<ReprJson> {
    Ok(match repr {
        EmbeddingRepr::UnitMultiple { image } => ReprJson::UnitMultiple { image: element_json(image)? },
        EmbeddingRepr::Anchor { a, image } => ReprJson::Anchor { a: element_json(a)?, image: element_json(image)? },
        EmbeddingRepr::Identity => ReprJson::Identity,
        EmbeddingRepr::Sum(l, r) => ReprJson::Sum { left: Box::new(repr_json(l)?), right: Box::new(repr_json(r)?) },
        EmbeddingRepr::Compose { outer, inner } => {
            ReprJson::Compose { outer: Box::new(repr_json(outer)?), inner: Box::new(repr_json(inner)?) }
        }
        EmbeddingRepr::Difference(l, r) => {
            ReprJson::Difference { left: Box::new(repr_json(l)?), right: Box::new(repr_json(r)?) }
        }
    })
}

fn repr_from_json(json: &ReprJson) -> Result<EmbeddingRepr> {
    let elem = |e: &ElementJson| Element::parse(e.model, &e.value);
    Ok(match json {
        ReprJson::UnitMultiple { image } => EmbeddingRepr::UnitMultiple { image: elem(image)? },
        ReprJson::Anchor { a, image } => EmbeddingRepr::Anchor { a: elem(a)?, image: elem(image)? },
        ReprJson::Identity => EmbeddingRepr::Identity,
        ReprJson::Sum { left, right } => {
            EmbeddingRepr::Sum(Box::new(repr_from_json(left)?), Box::new(repr_from_json(right)?))
        }
        ReprJson::Compose { outer, inner } => EmbeddingRepr::Compose {
            outer: Box::new(repr_from_json(outer)?),
            inner: Box::new(repr_from_json(inner)?),
        },
        ReprJson::Difference { left, right } => {
            EmbeddingRepr::Difference(Box::new(repr_from_json(left)?), Box::new(repr_from_json(right)?))
        }
    })
}

impl Embedding {
    pub fn to_json_value(&self) -> Result<EmbeddingJson> {
        Ok(EmbeddingJson { domain: self.domain, codomain: self.codomain, repr: repr_json(&self.repr)? })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&self.to_json_value()?).map_err(|e| MagnitudeError::InvalidArgument(e.to_string()))
    }

    pub fn from_json_value(json: &EmbeddingJson) -> Result<Embedding> {
        let e = Embedding::new(repr_from_json(&json.repr)?, json.domain)?;
        if e.codomain != json.codomain {
            return Err(MagnitudeError::SignatureMismatch(format!(
                "declared codomain {} but the representation maps into {}",
                json.codomain, e.codomain
            )));
        }
        Ok(e)
    }

    pub fn from_json(text: &str) -> Result<Embedding> {
        let json: EmbeddingJson =
            serde_json::from_str(text).map_err(|e| MagnitudeError::Parse(format!("embedding JSON: {e}")))?;
        Embedding::from_json_value(&json)
    }
}
