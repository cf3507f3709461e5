//! Ratio engine, embeddings, `H(M, M)`, products and powers.

use super::{ensure, mismatch, rel_text, same_relation, Case, Check, Ctx, Law, LawModel, LawSet};
use crate::embed::{
    anchor_embedding, embeddings_compare, eval, eval_naive, fourth_proportional, nat_embedding, Embedding,
};
use crate::hom::{hom_add, hom_compare, hom_compose, identity_endo, product, psi, quotient, HomElement};
use crate::models::real::{real_div, real_root};
use crate::models::real_from_rat;
use crate::power::{into_mul, mul_combine, mul_multiple, nth_root, pow, Exponent, MulReal};
use crate::ratio::{have_ratio_witness, RatioRel};
use crate::space::{multiple, Certified, ExactMagnitude, ModelId, Ordering3};
use crate::{Element, MagnitudeError, Nat, PosRat, PosRealValue};

pub(super) fn laws() -> Vec<Law> {
    use LawSet::*;
    let mut laws = vec![
        exact_models!(
            Law::new("ratio-engine-vs-oracle", "the engine's verdict matches a/b against a′/b′", Ratio, 4, 1),
            engine_vs_oracle
        ),
        all_models!(
            Law::new("ratio-witness-sound", "every strict verdict carries a verifying witness", Ratio, 4, 0),
            witness_sound
        ),
        all_models!(
            Law::new("ratio-antisymmetry", "swapping the pairs swaps greater and less, same witness", Ratio, 4, 0),
            antisymmetry
        ),
        all_models!(
            Law::new("ratio-no-self-witness", "no (m, n) certifies a:b > a:b", Ratio, 1, 2),
            no_self_witness
        ),
        all_models!(
            Law::new("ratio-have-witness", "any two magnitudes have a ratio: ma > b and nb > a", Ratio, 2, 0),
            have_witness
        ),
        exact_models!(
            Law::new("ratio-strict-transitive", "a:b > a′:b′ > a″:b″ implies a:b > a″:b″", Ratio, 6, 0),
            strict_transitive
        ),
        exact_models!(
            Law::new("ratio-embedding-proportional", "φa:φb = a:b for an embedding into the reals", Ratio, 2, 1),
            embedding_into_reals
        ),
        all_models!(
            Law::new("embed-fast-vs-naive", "the embedding of nat agrees with φ(n) = φ(n-1) + φ(1)", Embed, 1, 1),
            fast_vs_naive
        ),
        all_models!(Law::new("embed-additive", "φ(a+b) = φa+φb", Embed, 4, 1), additive),
        all_models!(Law::new("embed-multiple-commutes", "χ(na) = n(χa)", Embed, 3, 2).bits(8), multiple_commutes),
        all_models!(
            Law::new("embed-probe-independence", "comparing two embeddings gives the same answer at every probe", Embed, 7, 2),
            probe_independence
        ),
        all_models!(
            Law::new("embed-uniqueness", "the embedding of nat sending 1 to a′ is unique", Embed, 1, 3),
            uniqueness
        ),
        exact_models!(
            Law::new("fourth-proportional-uniqueness", "the fourth proportional is unique", Embed, 3, 2),
            fourth_unique
        ),
        all_models!(Law::new("embed-proportional", "φa:φb = a:b", Embed, 4, 1), proportional),
        all_models!(Law::new("hom-add-associative", "(φ+χ)+ψ = φ+(χ+ψ) in H(M, M)", Hom, 7, 3), hom_assoc),
        all_models!(Law::new("hom-add-commutative", "φ+χ = χ+φ in H(M, M)", Hom, 5, 2), hom_comm),
        all_models!(
            Law::new("hom-trichotomy-delta", "φ < χ gives δ with φ+δ = χ, and symmetrically", Hom, 5, 3),
            hom_trichotomy
        ),
        all_models!(Law::new("endo-left-distributive", "φ∘(χ+ψ) = φ∘χ+φ∘ψ", Hom, 7, 3), left_distributive),
        all_models!(Law::new("endo-right-distributive", "(χ+ψ)∘φ = χ∘φ+ψ∘φ", Hom, 7, 3), right_distributive),
        all_models!(Law::new("endo-commutative", "φ∘χ = χ∘φ", Hom, 5, 2), endo_commutative),
        all_models!(Law::new("endo-identity", "1∘φ = φ = φ∘1", Hom, 3, 1), endo_identity),
        all_models!(
            Law::new(
                "endo-order-under-composition",
                "φ∘ψ has to χ∘ψ, and ψ∘φ to ψ∘χ, the relation φ has to χ",
                Hom,
                6,
                3
            ),
            endo_order
        ),
        all_models!(Law::new("product-commutative", "a·b = b·a", Product, 2, 0), product_comm),
        all_models!(Law::new("product-associative", "(a·b)·c = a·(b·c)", Product, 3, 0), product_assoc),
        all_models!(Law::new("product-left-distributive", "a(a′+b′) = aa′+ab′", Product, 3, 0), product_left),
        all_models!(Law::new("product-right-distributive", "(a+b)a′ = aa′+ba′", Product, 3, 0), product_right),
        all_models!(
            Law::new("product-order-preserving", "a has to b the relation ac has to bc, and ca to cb", Product, 3, 1),
            product_order
        ),
        all_models!(Law::new("psi-of-product", "Ψ(a·b) = Ψa∘Ψb", Product, 3, 0), psi_product),
        all_models!(Law::new("psi-unit-identity", "Ψ1 is the identity", Product, 1, 0), psi_unit),
        Law::new("quotient-roundtrip", "(b/a)·a = b", Product, 2, 0)
            .rat(quotient_roundtrip::<PosRat>)
            .real(quotient_roundtrip::<PosRealValue>),
        Law::new("product-fraction-crosscheck", "product and quotient are fraction arithmetic on rat", Product, 2, 0)
            .rat(fraction_crosscheck),
    ];
    laws.extend(power_laws());
    laws
}

fn power_laws() -> Vec<Law> {
    let p = |id, statement, mults| Law::new(id, statement, LawSet::Power, 0, mults);
    vec![
        p("power-base-law", "(x₁·x₂)^y = x₁^y·x₂^y", 5).real(base_law),
        p("power-exponent-law", "x^(y₁+y₂) = x^y₁·x^y₂", 4).real(exponent_law),
        p("power-monotone", "y₁ < y₂ implies x^y₁ < x^y₂", 5).real(power_monotone),
        p("power-integer-consistency", "x^(m/1) = the m-th multiple of x under ·", 3).bits(6).real(integer_power),
        p("power-root-roundtrip", "(x^(1/n))^n = x", 3).bits(6).real(root_roundtrip),
        p("power-mul-trichotomy", "x < y gives d > 1 with x·d = y", 4).real(mul_trichotomy),
        p("power-real-exponent-bracket", "x^y lies between x^q₁ and x^q₂ for rationals q₁ < y < q₂", 4)
            .real(real_exponent_bracket),
    ]
}

impl Ctx {
    fn agree_el(&self, x: &Element, y: &Element) -> Check {
        ensure(x.agrees_with(y, self.precision)?, x, y)
    }

    fn rel_el(&self, x: &Element, y: &Element) -> crate::Result<Certified> {
        x.certified_compare(y, &self.policy)
    }
}

fn el<M: LawModel>(x: &M) -> Element {
    x.to_element()
}

/// An endomorphism of `M` from two sampled elements.
fn endo<M: LawModel>(a: &M, image: &M, anchored: bool) -> crate::Result<HomElement> {
    if M::MODEL == ModelId::Nat || !anchored {
        return psi(M::MODEL, el(image));
    }
    HomElement::checked(anchor_embedding(el(&a.exact_near()), el(image))?, 1, 0)
}

fn engine_vs_oracle<M: LawModel + ExactMagnitude>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let (a2, b2) = if c.m(0).as_biguint().bit(0) {
        (a.times(c.e(2)), b.times(c.e(2)))
    } else {
        (c.e(2).clone(), c.e(3).clone())
    };
    let value = |x: &M, y: &M| x.to_rational().expect("exact").div(&y.to_rational().expect("exact"));
    let want = value(a, b).cmp(&value(&a2, &b2));
    let rel = ctx.ratio(a, b, &a2, &b2)?;
    let ok = matches!(
        (&rel, want),
        (RatioRel::Equal, std::cmp::Ordering::Equal)
            | (RatioRel::Greater(_), std::cmp::Ordering::Greater)
            | (RatioRel::Less(_), std::cmp::Ordering::Less)
    );
    ensure(ok, rel, format!("{want:?}").to_lowercase())
}

fn witness_sound<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, a2, b2) = (c.e(0), c.e(1), c.e(2), c.e(3));
    match ctx.ratio(a, b, a2, b2)? {
        RatioRel::Greater(w) => ensure(ctx.verify(&w, a, b, a2, b2), format!("rejected {w}"), "verifying witness"),
        RatioRel::Less(w) => ensure(ctx.verify(&w, a2, b2, a, b), format!("rejected {w}"), "verifying witness"),
        _ => Ok(()),
    }
}

fn antisymmetry<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, a2, b2) = (c.e(0), c.e(1), c.e(2), c.e(3));
    let forward = ctx.ratio(a, b, a2, b2)?;
    let backward = ctx.ratio(a2, b2, a, b)?;
    let ok = match (&forward, &backward) {
        (RatioRel::Unknown { .. }, RatioRel::Unknown { .. }) => true,
        _ => forward.clone().reverse() == backward,
    };
    ensure(ok, &backward, forward.reverse())
}

fn no_self_witness<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (u, m, n) = (c.e(0), c.m(0), c.m(1));
    let (a, b) = (multiple(n, u), multiple(m, u));
    let w = crate::ratio::Witness { m: m.clone(), n: n.clone() };
    ensure(!ctx.verify(&w, &a, &b, &a, &b), format!("{w} accepted for a:b > a:b"), "rejected")
}

fn have_witness<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let (m, n) = have_ratio_witness(a, b)?;
    let first = ctx.relation(&multiple(&m, a), b)?;
    let second = ctx.relation(&multiple(&n, b), a)?;
    ensure(
        first == Certified::Greater && second == Certified::Greater,
        format!("{m}a {} b, {n}b {} a", rel_text(first), rel_text(second)),
        "both greater",
    )
}

fn strict_transitive<M: LawModel + ExactMagnitude>(c: &Case<M>, ctx: &Ctx) -> Check {
    let mut pairs: Vec<(M, M)> = (0..3).map(|i| (c.e(2 * i).clone(), c.e(2 * i + 1).clone())).collect();
    let value = |p: &(M, M)| p.0.to_rational().expect("exact").div(&p.1.to_rational().expect("exact"));
    pairs.sort_by_key(|p| std::cmp::Reverse(value(p)));
    let [(a, b), (a1, b1), (a2, b2)] = &pairs[..] else { unreachable!() };
    let strict = |r: RatioRel| matches!(r, RatioRel::Greater(_));
    if strict(ctx.ratio(a, b, a1, b1)?) && strict(ctx.ratio(a1, b1, a2, b2)?) {
        ctx.greater_ratio(a, b, a2, b2)?;
    }
    Ok(())
}

fn embedding_into_reals<M: LawModel + ExactMagnitude>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let s = PosRat::from_nat(&c.m(0).successor()).div_nat(c.m(0));
    let image = Element::Real(real_root(&real_from_rat(&s), 2));
    let phi = anchor_embedding(el(&M::unit()), image)?;
    let (fa, fb) = (eval(&phi, &el(a))?, eval(&phi, &el(b))?);
    let (Some(fa), Some(fb)) = (fa.as_real(), fb.as_real()) else { return mismatch("non-real image", "real") };
    let rel = ctx.ratio(a, b, fa, fb)?;
    ensure(!rel.is_strict(), rel, "equal or unknown")
}

fn fast_vs_naive<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let phi = nat_embedding(el(c.e(0)));
    let n = c.m(0);
    ctx.agree_el(&eval(&phi, &Element::Nat(n.clone()))?, &eval_naive(&phi, n)?)
}

/// An embedding of `M` into itself, varying its shape with `shape`.
fn random_embedding<M: LawModel>(a: &M, image: &M, shape: &Nat) -> crate::Result<Embedding> {
    let base = endo(a, image, shape.as_biguint().bit(0))?;
    if shape.as_biguint().bit(1) {
        let other = psi(M::MODEL, el(a))?;
        return Ok(hom_add(&base, &other)?.embedding().clone());
    }
    if shape.as_biguint().bit(2) {
        let other = psi(M::MODEL, el(image))?;
        return Ok(hom_compose(&base, &other)?.embedding().clone());
    }
    Ok(base.embedding().clone())
}

fn additive<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let phi = random_embedding(c.e(0), c.e(1), c.m(0))?;
    let (b, d) = (el(c.e(2)), el(c.e(3)));
    ctx.agree_el(&eval(&phi, &b.combine(&d)?)?, &eval(&phi, &b)?.combine(&eval(&phi, &d)?)?)
}

fn multiple_commutes<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let chi = random_embedding(c.e(0), c.e(1), c.m(1))?;
    let (a, n) = (el(c.e(2)), c.m(0));
    ctx.agree_el(&eval(&chi, &a.multiple(n))?, &eval(&chi, &a)?.multiple(n))
}

fn probe_independence<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let phi = random_embedding(c.e(0), c.e(1), c.m(0))?;
    let chi = if c.rare(1) { phi.clone() } else { random_embedding(c.e(2), c.e(3), c.m(1))? };
    let mut tags = Vec::new();
    for probe in [c.e(4), c.e(5), c.e(6)] {
        match embeddings_compare(&phi, &chi, &el(probe), &ctx.policy) {
            Ok(t) => tags.push(Some(t)),
            Err(MagnitudeError::Undecided(_)) if M::MODEL == ModelId::Real => tags.push(None),
            Err(e) => return Err(e.into()),
        }
    }
    let decided: Vec<_> = tags.iter().flatten().collect();
    ensure(decided.windows(2).all(|w| w[0] == w[1]), format!("{tags:?}"), "one tag at every probe")
}

fn uniqueness<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let image = el(c.e(0));
    let fast = nat_embedding(image.clone());
    let anchored = anchor_embedding(Element::unit(ModelId::Nat), image)?;
    for probe in &c.mults {
        let probe = Element::Nat(probe.clone());
        if M::MODEL == ModelId::Real {
            ctx.agree_el(&eval(&fast, &probe)?, &eval(&anchored, &probe)?)?;
        } else {
            let t = embeddings_compare(&fast, &anchored, &probe, &ctx.policy)?;
            ensure(t.is_eq(), format!("{t:?} at {probe}"), "equal")?;
        }
    }
    Ok(())
}

fn fourth_unique<M: LawModel + ExactMagnitude>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(2));
    let s = PosRat::from_nat(&c.m(0).add(c.m(1))).div_nat(c.m(1));
    let image = real_root(&real_from_rat(&s), 2);
    let one = fourth_proportional(a, b, &image);
    let other = fourth_proportional(&a.times(k), &b.times(k), &image);
    for p in [0, 10, ctx.precision] {
        let (x, y) = (one.approx(p)?, other.approx(p)?);
        ensure(x.intersects(&y), format!("{x} vs {y}"), format!("intersecting at p={p}"))?;
    }
    Ok(())
}

fn proportional<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let phi = random_embedding(c.e(0), c.e(1), c.m(0))?;
    let (a, b) = (c.e(2), c.e(3));
    let rel = match (eval(&phi, &el(a))?, eval(&phi, &el(b))?) {
        (Element::Nat(x), Element::Nat(y)) => ctx.ratio(a, b, &x, &y)?,
        (Element::Rat(x), Element::Rat(y)) => ctx.ratio(a, b, &x, &y)?,
        (Element::Real(x), Element::Real(y)) => ctx.ratio(a, b, &x, &y)?,
        _ => return mismatch("images in two models", "one model"),
    };
    ensure(!rel.is_strict(), rel, "equal or unknown")
}

/// The endomorphism built from elements `2i, 2i+1` and multiplier `i`.
fn endo_at<M: LawModel>(c: &Case<M>, i: usize) -> crate::Result<HomElement> {
    endo(c.e(2 * i), c.e(2 * i + 1), c.m(i).as_biguint().bit(0))
}

fn at<M: LawModel>(phi: &HomElement, c: &Case<M>, probe: usize) -> crate::Result<Element> {
    phi.eval(&el(c.e(probe)))
}

fn hom_assoc<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (f, g, h) = (endo_at(c, 0)?, endo_at(c, 1)?, endo_at(c, 2)?);
    let left = hom_add(&hom_add(&f, &g)?, &h)?;
    let right = hom_add(&f, &hom_add(&g, &h)?)?;
    ctx.agree_el(&at(&left, c, 6)?, &at(&right, c, 6)?)
}

fn hom_comm<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (f, g) = (endo_at(c, 0)?, endo_at(c, 1)?);
    ctx.agree_el(&at(&hom_add(&f, &g)?, c, 4)?, &at(&hom_add(&g, &f)?, c, 4)?)
}

fn hom_trichotomy<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let f = endo_at(c, 0)?;
    let g = if c.rare(2) { f.clone() } else { endo_at(c, 1)? };
    match hom_compare(&f, &g, &ctx.policy) {
        Ok(Ordering3::LessBy(d)) => ctx.agree_el(&at(&hom_add(&f, &d)?, c, 4)?, &at(&g, c, 4)?),
        Ok(Ordering3::GreaterBy(d)) => ctx.agree_el(&at(&hom_add(&g, &d)?, c, 4)?, &at(&f, c, 4)?),
        Ok(Ordering3::Equal) => ctx.agree_el(&at(&f, c, 4)?, &at(&g, c, 4)?),
        Err(MagnitudeError::Undecided(_)) if M::MODEL == ModelId::Real => {
            ctx.agree_el(&at(&f, c, 4)?, &at(&g, c, 4)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn left_distributive<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (f, g, h) = (endo_at(c, 0)?, endo_at(c, 1)?, endo_at(c, 2)?);
    let left = hom_compose(&f, &hom_add(&g, &h)?)?;
    let right = hom_add(&hom_compose(&f, &g)?, &hom_compose(&f, &h)?)?;
    ctx.agree_el(&at(&left, c, 6)?, &at(&right, c, 6)?)
}

fn right_distributive<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (f, g, h) = (endo_at(c, 0)?, endo_at(c, 1)?, endo_at(c, 2)?);
    let left = hom_compose(&hom_add(&g, &h)?, &f)?;
    let right = hom_add(&hom_compose(&g, &f)?, &hom_compose(&h, &f)?)?;
    ctx.agree_el(&at(&left, c, 6)?, &at(&right, c, 6)?)
}

fn endo_commutative<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (f, g) = (endo_at(c, 0)?, endo_at(c, 1)?);
    ctx.agree_el(&at(&hom_compose(&f, &g)?, c, 4)?, &at(&hom_compose(&g, &f)?, c, 4)?)
}

fn endo_identity<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let f = endo_at(c, 0)?;
    let id = identity_endo(M::MODEL);
    let plain = at(&f, c, 2)?;
    ctx.agree_el(&at(&hom_compose(&id, &f)?, c, 2)?, &plain)?;
    ctx.agree_el(&at(&hom_compose(&f, &id)?, c, 2)?, &plain)
}

fn endo_order<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let f = endo_at(c, 0)?;
    let g = if c.rare(1) { f.clone() } else { endo_at(c, 1)? };
    let h = endo_at(c, 2)?;
    let unit = Element::unit(M::MODEL);
    let base = ctx.rel_el(&f.eval(&unit)?, &g.eval(&unit)?)?;
    let right = ctx.rel_el(&hom_compose(&f, &h)?.eval(&unit)?, &hom_compose(&g, &h)?.eval(&unit)?)?;
    let left = ctx.rel_el(&hom_compose(&h, &f)?.eval(&unit)?, &hom_compose(&h, &g)?.eval(&unit)?)?;
    ensure(
        same_relation(base, right) && same_relation(base, left),
        format!("{} then {} and {}", rel_text(base), rel_text(right), rel_text(left)),
        "one relation",
    )
}

fn product_comm<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (el(c.e(0)), el(c.e(1)));
    ctx.agree_el(&product(&a, &b)?, &product(&b, &a)?)
}

fn product_assoc<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, d) = (el(c.e(0)), el(c.e(1)), el(c.e(2)));
    ctx.agree_el(&product(&product(&a, &b)?, &d)?, &product(&a, &product(&b, &d)?)?)
}

fn product_left<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, x, y) = (el(c.e(0)), el(c.e(1)), el(c.e(2)));
    ctx.agree_el(&product(&a, &x.combine(&y)?)?, &product(&a, &x)?.combine(&product(&a, &y)?)?)
}

fn product_right<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, x) = (el(c.e(0)), el(c.e(1)), el(c.e(2)));
    ctx.agree_el(&product(&a.combine(&b)?, &x)?, &product(&a, &x)?.combine(&product(&b, &x)?)?)
}

fn product_order<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let a = el(c.e(0));
    let b = if c.rare(0) { a.clone() } else { el(c.e(1)) };
    let d = el(c.e(2));
    let base = ctx.rel_el(&a, &b)?;
    let right = ctx.rel_el(&product(&a, &d)?, &product(&b, &d)?)?;
    let left = ctx.rel_el(&product(&d, &a)?, &product(&d, &b)?)?;
    ensure(
        same_relation(base, right) && same_relation(base, left),
        format!("{} then {} and {}", rel_text(base), rel_text(right), rel_text(left)),
        "one relation",
    )
}

fn psi_product<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, x) = (el(c.e(0)), el(c.e(1)), el(c.e(2)));
    let whole = psi(M::MODEL, product(&a, &b)?)?;
    let composed = hom_compose(&psi(M::MODEL, a)?, &psi(M::MODEL, b)?)?;
    ctx.agree_el(&whole.eval(&x)?, &composed.eval(&x)?)
}

fn psi_unit<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let x = el(c.e(0));
    ctx.agree_el(&psi(M::MODEL, Element::unit(M::MODEL))?.eval(&x)?, &identity_endo(M::MODEL).eval(&x)?)
}

fn quotient_roundtrip<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (el(c.e(0)), el(c.e(1)));
    let back = product(&quotient(&b, &a)?, &a)?;
    if let (Element::Real(x), Element::Real(y)) = (&back, &b) {
        for p in [0, 16, ctx.precision] {
            ensure(x.approx(p)?.intersects(&y.approx(p)?), format!("disjoint at p={p}"), "intersecting")?;
        }
        return Ok(());
    }
    ctx.agree_el(&back, &b)
}

fn fraction_crosscheck(c: &Case<PosRat>, _ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let got = product(&Element::Rat(a.clone()), &Element::Rat(b.clone()))?;
    ensure(got.as_rat() == Some(&a.mul(b)), &got, a.mul(b))?;
    let got = quotient(&Element::Rat(b.clone()), &Element::Rat(a.clone()))?;
    ensure(got.as_rat() == Some(&b.div(a)), &got, b.div(a))
}

// Power laws draw bases `1 + m/n` and exponents from a small grid.

const GRID: [(u64, u64); 4] = [(1, 3), (1, 2), (2, 1), (7, 4)];

fn base(m: &Nat, n: &Nat) -> crate::Result<MulReal> {
    let x = PosRat::one().add(&PosRat::from_nat(m).div_nat(n));
    into_mul(&real_from_rat(&x), &crate::space::ApproxPolicy::default())
}

fn grid(i: &Nat) -> Exponent {
    let (num, den) = GRID[(i.as_biguint() % 4u32).to_u64_digits().first().copied().unwrap_or(0) as usize];
    Exponent::Rat(PosRat::from_u64(num, den))
}

fn grid_rat(i: &Nat) -> PosRat {
    match grid(i) {
        Exponent::Rat(q) => q,
        Exponent::Real(_) => unreachable!(),
    }
}

fn mul_agree(x: &MulReal, y: &MulReal, ctx: &Ctx) -> Check {
    let (i, j) = (x.approx(ctx.precision)?, y.approx(ctx.precision)?);
    ensure(i.intersects(&j), &i, &j)
}

fn base_law(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let (x1, x2, y) = (base(c.m(0), c.m(1))?, base(c.m(2), c.m(3))?, grid(c.m(4)));
    mul_agree(&pow(&mul_combine(&x1, &x2), &y)?, &mul_combine(&pow(&x1, &y)?, &pow(&x2, &y)?), ctx)
}

fn exponent_law(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let x = base(c.m(0), c.m(1))?;
    let (y1, y2) = (grid_rat(c.m(2)), grid_rat(c.m(3)));
    let whole = pow(&x, &Exponent::Rat(y1.add(&y2)))?;
    let parts = mul_combine(&pow(&x, &Exponent::Rat(y1))?, &pow(&x, &Exponent::Rat(y2))?);
    mul_agree(&whole, &parts, ctx)
}

fn power_monotone(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let x = base(c.m(0), c.m(1))?;
    let y1 = PosRat::from_nat(c.m(2)).div_nat(c.m(3));
    let y2 = y1.add(&PosRat::from_u64(1, 64).div_nat(&c.m(4).successor()).mul_nat(&Nat::from_u64(64)));
    let (lo, hi) = (pow(&x, &Exponent::Rat(y1))?, pow(&x, &Exponent::Rat(y2))?);
    let r = crate::space::certified_compare(&lo, &hi, &ctx.policy)?;
    ensure(r == Certified::Less, rel_text(r), "less")
}

fn integer_power(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let (x, m) = (base(c.m(0), c.m(1))?, c.m(2));
    mul_agree(&pow(&x, &Exponent::Rat(PosRat::from_nat(m)))?, &mul_multiple(m, &x), ctx)
}

fn root_roundtrip(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let (x, n) = (base(c.m(0), c.m(1))?, c.m(2));
    mul_agree(&mul_multiple(n, &nth_root(&x, n)?), &x, ctx)
}

fn mul_trichotomy(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let (x, y) = (base(c.m(0), c.m(1))?, base(c.m(2), c.m(3))?);
    let (small, big) = match crate::space::certified_compare(&x, &y, &ctx.policy)? {
        Certified::Less => (x, y),
        Certified::Greater => (y, x),
        _ => return Ok(()),
    };
    let d = into_mul(&real_div(big.value(), small.value()), &ctx.policy)?;
    mul_agree(&mul_combine(&small, &d), &big, ctx)
}

fn real_exponent_bracket(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let x = base(c.m(0), c.m(1))?;
    let s = PosRat::one().add(&PosRat::from_nat(c.m(2)).div_nat(&c.m(3).add(c.m(2))));
    let y = real_root(&real_from_rat(&s), 2);
    let yi = y.approx(12)?;
    let value = pow(&x, &Exponent::Real(y))?.approx(ctx.precision)?;
    let lo = pow(&x, &Exponent::Rat(yi.lo().clone()))?.approx(ctx.precision)?;
    let hi = pow(&x, &Exponent::Rat(yi.hi().clone()))?.approx(ctx.precision)?;
    ensure(lo.lo() <= value.hi() && value.lo() <= hi.hi(), &value, format!("within [{}, {}]", lo.lo(), hi.hi()))
}
