//! Embeddings as magnitudes: `Hom(M, N)` under pointwise sum, the
//! endomorphisms `E(M)` under composition, and the product and quotient
//! they induce on a space with a unit.

use crate::embed::{
    anchor_embedding, check_homomorphism, compose_embedding, difference_embedding, eval, identity_embedding,
    nat_embedding, sum_embedding, Embedding,
};
use crate::models::real::real_div;
use crate::space::{ApproxPolicy, Certified, ModelId, Ordering3};
use crate::{Element, MagnitudeError, Result};

/// An embedding known to be additive and order preserving.
#[derive(Debug, Clone)]
pub struct HomElement(Embedding);

impl HomElement {
    /// Accept an arbitrary embedding after a sampled homomorphism check.
    pub fn checked(e: Embedding, samples: usize, seed: u64) -> Result<Self> {
        let report = check_homomorphism(&e, samples, seed)?;
        match report.counterexample {
            None => Ok(HomElement(e)),
            Some(msg) => Err(MagnitudeError::InvalidArgument(msg)),
        }
    }

    pub fn embedding(&self) -> &Embedding {
        &self.0
    }

    pub fn domain(&self) -> ModelId {
        self.0.domain()
    }

    pub fn codomain(&self) -> ModelId {
        self.0.codomain()
    }

    pub fn eval(&self, b: &Element) -> Result<Element> {
        eval(&self.0, b)
    }

    pub fn is_endo(&self) -> bool {
        self.domain() == self.codomain()
    }
}

/// `a ↦ a` on `model`.
pub fn identity_endo(model: ModelId) -> HomElement {
    HomElement(identity_embedding(model))
}

/// Pointwise sum `b ↦ φ(b) + χ(b)`.
pub fn hom_add(phi: &HomElement, chi: &HomElement) -> Result<HomElement> {
    sum_embedding(&phi.0, &chi.0).map(HomElement)
}

/// `φ ∘ χ`.
pub fn hom_compose(phi: &HomElement, chi: &HomElement) -> Result<HomElement> {
    compose_embedding(&phi.0, &chi.0).map(HomElement)
}

/// Compare at the unit of the domain. A strict answer carries the
/// pointwise difference `δ` with `smaller + δ = larger`.
pub fn hom_compare(phi: &HomElement, chi: &HomElement, policy: &ApproxPolicy) -> Result<Ordering3<HomElement>> {
    if phi.domain() != chi.domain() || phi.codomain() != chi.codomain() {
        return Err(MagnitudeError::SignatureMismatch("homomorphisms with different signatures".into()));
    }
    let probe = Element::unit(phi.domain());
    match phi.eval(&probe)?.certified_compare(&chi.eval(&probe)?, policy)? {
        Certified::Equal => Ok(Ordering3::Equal),
        Certified::Less => Ok(Ordering3::LessBy(HomElement(difference_embedding(&chi.0, &phi.0)?))),
        Certified::Greater => Ok(Ordering3::GreaterBy(HomElement(difference_embedding(&phi.0, &chi.0)?))),
        Certified::Overlap => Err(MagnitudeError::Undecided(policy.cap)),
    }
}

/// The embedding of `domain` sending its unit to `a_prime`.
pub fn psi(domain: ModelId, a_prime: Element) -> Result<HomElement> {
    match domain {
        ModelId::Nat => Ok(HomElement(nat_embedding(a_prime))),
        _ => anchor_embedding(Element::unit(domain), a_prime).map(HomElement),
    }
}

/// `a · b`, defined as `Ψ(b)` evaluated at `a`.
pub fn product(a: &Element, b: &Element) -> Result<Element> {
    if a.model() != b.model() {
        return Err(MagnitudeError::ModelMismatch { left: a.model(), right: b.model() });
    }
    psi(a.model(), b.clone())?.eval(a)
}

/// `b / a`: the value at the unit of the endomorphism sending `a` to `b`.
pub fn quotient(b: &Element, a: &Element) -> Result<Element> {
    if a.model() != b.model() {
        return Err(MagnitudeError::ModelMismatch { left: b.model(), right: a.model() });
    }
    match (b, a) {
        (Element::Nat(_), _) => Err(MagnitudeError::NotSymmetric),
        (Element::Real(x), Element::Real(y)) => Ok(Element::Real(real_div(x, y))),
        _ => anchor_embedding(a.clone(), b.clone())?.eval(&Element::unit(a.model())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Nat, PosRat};

    fn rat(s: &str) -> Element {
        Element::parse(ModelId::Rat, s).unwrap()
    }

    fn real(s: &str) -> Element {
        Element::parse(ModelId::Real, s).unwrap()
    }

    fn nat(n: u64) -> Element {
        Element::Nat(Nat::from_u64(n))
    }

    fn same(x: &Element, y: &Element) -> bool {
        x.agrees_with(y, 40).unwrap()
    }

    #[test]
    fn hom_add_and_compose_examples() {
        let two = psi(ModelId::Nat, nat(2)).unwrap();
        let three = psi(ModelId::Nat, nat(3)).unwrap();
        let s = hom_add(&two, &three).unwrap();
        assert!(same(&s.eval(&nat(4)).unwrap(), &nat(20)));
        let c = hom_compose(&two, &three).unwrap();
        assert!(same(&c.eval(&nat(1)).unwrap(), &nat(6)));
        let id = identity_endo(ModelId::Rat);
        let half = psi(ModelId::Rat, rat("1/2")).unwrap();
        let left = hom_compose(&id, &half).unwrap();
        let right = hom_compose(&half, &id).unwrap();
        for x in ["3/7", "5", "1/9"] {
            assert!(same(&left.eval(&rat(x)).unwrap(), &half.eval(&rat(x)).unwrap()));
            assert!(same(&right.eval(&rat(x)).unwrap(), &half.eval(&rat(x)).unwrap()));
        }
    }

    #[test]
    fn hom_compare_examples() {
        let policy = ApproxPolicy::default();
        let two = psi(ModelId::Rat, rat("2")).unwrap();
        let three = psi(ModelId::Rat, rat("3")).unwrap();
        let Ordering3::LessBy(delta) = hom_compare(&two, &three, &policy).unwrap() else { panic!() };
        for x in ["1", "5/3"] {
            let lhs = two.eval(&rat(x)).unwrap().combine(&delta.eval(&rat(x)).unwrap()).unwrap();
            assert!(same(&lhs, &three.eval(&rat(x)).unwrap()));
        }
        assert!(matches!(hom_compare(&two, &two, &policy).unwrap(), Ordering3::Equal));
        let r2 = psi(ModelId::Real, real("sqrt(2)")).unwrap();
        assert!(matches!(hom_compare(&r2, &r2, &policy), Err(MagnitudeError::Undecided(_))));
        let r3 = psi(ModelId::Real, real("sqrt(3)")).unwrap();
        assert!(matches!(hom_compare(&r3, &r2, &policy).unwrap(), Ordering3::GreaterBy(_)));
    }

    #[test]
    fn psi_examples() {
        assert!(same(&psi(ModelId::Rat, rat("3/2")).unwrap().eval(&rat("4")).unwrap(), &rat("6")));
        let p = psi(ModelId::Nat, nat(7)).unwrap();
        assert!(same(&p.eval(&nat(1)).unwrap(), &nat(7)));
        assert!(same(&p.eval(&nat(3)).unwrap(), &nat(21)));
        assert!(matches!(psi(ModelId::Rat, nat(3)), Err(MagnitudeError::UnsupportedCodomain(_))));
    }

    #[test]
    fn product_examples() {
        assert!(same(&product(&rat("2/3"), &rat("9/4")).unwrap(), &rat("3/2")));
        assert!(same(&product(&nat(3), &nat(4)).unwrap(), &nat(12)));
        let r = product(&real("sqrt(2)"), &real("sqrt(2)")).unwrap();
        let i = r.as_real().unwrap().approx(40).unwrap();
        assert!(i.contains(&PosRat::from_u64(2, 1)) && i.width_at_most(40));
    }

    #[test]
    fn quotient_examples() {
        assert!(same(&quotient(&rat("3/2"), &rat("3/4")).unwrap(), &rat("2")));
        assert!(same(&quotient(&rat("1"), &rat("1")).unwrap(), &rat("1")));
        let q = quotient(&real("1"), &real("sqrt(2)")).unwrap();
        let i = q.as_real().unwrap().approx(40).unwrap();
        let sq = product(&q, &q).unwrap().as_real().unwrap().approx(40).unwrap();
        assert!(i.width_at_most(40) && sq.contains(&PosRat::from_u64(1, 2)));
        assert_eq!(quotient(&nat(6), &nat(4)).unwrap_err(), MagnitudeError::NotSymmetric);
        assert_eq!(quotient(&nat(6), &nat(4)).unwrap_err().to_string(), "model not symmetric");
    }

    #[test]
    fn checked_rejects_non_homomorphisms() {
        let e = psi(ModelId::Rat, rat("5/3")).unwrap().embedding().clone();
        assert!(HomElement::checked(e, 50, 9).is_ok());
    }
}
