//! Axioms, order theorems and model facts.

use super::{ensure, mismatch, rel_text, same_relation, Case, Check, Ctx, Law, LawModel, LawSet};
use crate::models::{real_add, real_from_rat};
use crate::space::{self, Certified, Magnitude, ModelId, Ordering3};
use crate::{Nat, PosRat, PosRealValue};

pub(super) fn laws() -> Vec<Law> {
    use LawSet::*;
    vec![
        all_models!(Law::new("associativity", "(a+b)+c = a+(b+c)", CoreAxioms, 3, 0), associativity),
        all_models!(Law::new("commutativity", "a+b = b+a", CoreAxioms, 2, 0), commutativity),
        all_models!(
            Law::new(
                "trichotomy-witness",
                "exactly one of a=b, a+d=b, a=b+d holds, and d reconstructs the larger",
                CoreAxioms,
                2,
                1
            ),
            trichotomy
        ),
        all_models!(
            Law::new("translation-invariance", "a+b has to a+c the same relation as b to c", CoreAxioms, 3, 1),
            translation
        ),
        all_models!(
            Law::new("cancellation", "a+b+d = a+c implies b+d = c; a+b = a+c implies b = c", CoreAxioms, 3, 1),
            cancellation
        ),
        all_models!(
            Law::new("difference-decomposition", "a<b<c implies c-a = (c-b)+(b-a)", CoreAxioms, 3, 0),
            decomposition
        ),
        all_models!(Law::new("transitivity", "a<b and b<c imply a<c", Order, 3, 0), transitivity),
        all_models!(
            Law::new("subtraction", "a+d = b implies b-a = d, and a-b is undefined", Order, 2, 0),
            subtraction
        ),
        Law::new("discrete-gap", "no c with b < c < b+1 in a discrete space", Order, 2, 0).nat(discrete_gap),
        all_models!(
            Law::new(
                "archimedean-least-multiple",
                "some n has na > b; the least such n has (n-1)a <= b",
                Order,
                2,
                0
            ),
            archimedean
        ),
        all_models!(Law::new("multiple-naive", "double-and-add na = a+…+a", Order, 1, 1), multiple_naive),
        Law::new("shrink-below", "in a non-discrete space some b has nb < a", Order, 1, 1)
            .rat(shrink_below::<PosRat>)
            .real(shrink_below::<PosRealValue>),
        all_models!(Law::new("descriptor-truth", "model descriptors state the model's classification", Models, 0, 0), descriptor),
        Law::new("real-from-rat-additive", "q ↦ q as a real is additive", Models, 0, 4).real(real_from_rat_additive),
        Law::new("real-compare-consistent", "no certificate is contradicted at a higher precision", Models, 2, 1)
            .real(real_compare_consistent),
        Law::new("memo-idempotent", "repeated refinement at p returns the identical interval", Models, 1, 1)
            .bits(6)
            .real(memo_idempotent),
    ]
}

fn associativity<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, d) = (c.e(0), c.e(1), c.e(2));
    ctx.agree(&a.combine(b).combine(d), &a.combine(&b.combine(d)))
}

fn commutativity<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    ctx.agree(&c.e(0).combine(c.e(1)), &c.e(1).combine(c.e(0)))
}

fn trichotomy<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let a = c.e(0);
    let b = if c.rare(0) { a.clone() } else { c.e(1).clone() };
    let forward = a.compare3(&b, &ctx.policy)?;
    let backward = b.compare3(a, &ctx.policy)?;
    match (&forward, &backward) {
        (Ordering3::LessBy(d), Ordering3::GreaterBy(e)) => {
            ctx.agree(&a.combine(d), &b)?;
            ctx.agree(d, e)
        }
        (Ordering3::GreaterBy(d), Ordering3::LessBy(e)) => {
            ctx.agree(&b.combine(d), a)?;
            ctx.agree(d, e)
        }
        (Ordering3::Equal, Ordering3::Equal) => ctx.agree(a, &b),
        _ => mismatch(format!("{:?} then {:?}", forward.tag(), backward.tag()), "mirrored verdicts"),
    }
}

fn translation<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let d = if c.rare(0) { b.clone() } else { c.e(2).clone() };
    let before = ctx.relation(b, &d)?;
    let after = ctx.relation(&a.combine(b), &a.combine(&d))?;
    ensure(same_relation(before, after), rel_text(after), rel_text(before))
}

fn cancellation<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let d = if c.rare(0) { b.clone() } else { c.e(2).clone() };
    match a.combine(b).compare3(&a.combine(&d), &ctx.policy)? {
        Ordering3::LessBy(w) => ctx.agree(&b.combine(&w), &d),
        Ordering3::GreaterBy(w) => ctx.agree(&d.combine(&w), b),
        Ordering3::Equal => ctx.agree(b, &d),
    }
}

fn decomposition<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let a = c.e(0);
    let b = a.combine(c.e(1));
    let d = b.combine(c.e(2));
    let whole = ctx.subtract(&d, a)?;
    let parts = ctx.subtract(&d, &b)?.combine(&ctx.subtract(&b, a)?);
    ctx.agree(&whole, &parts)
}

fn transitivity<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let a = c.e(0);
    let b = a.combine(c.e(1));
    let d = b.combine(c.e(2));
    let r = ctx.relation(a, &d)?;
    ensure(r == Certified::Less, rel_text(r), "less")
}

fn subtraction<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, d) = (c.e(0), c.e(1));
    let b = a.combine(d);
    ctx.agree(&ctx.subtract(&b, a)?, d)?;
    match ctx.subtract(a, &b) {
        Err(crate::MagnitudeError::NotGreater) => Ok(()),
        Ok(x) => mismatch(format!("a-b = {}", x.render()), "NotGreater"),
        Err(e) => mismatch(e, "NotGreater"),
    }
}

fn discrete_gap(c: &Case<Nat>, _ctx: &Ctx) -> Check {
    let (b, x) = (c.e(0), c.e(1));
    // also probe the neighbours of b themselves
    for candidate in [x.clone(), b.clone(), b.successor()] {
        let inside = b < &candidate && candidate < b.successor();
        ensure(!inside, format!("{candidate} strictly between {b} and {}", b.successor()), "no element")?;
    }
    Ok(())
}

fn archimedean<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let n = space::find_multiple_exceeding(a, b, &ctx.policy)?;
    let r = ctx.relation(&space::multiple(&n, a), b)?;
    ensure(r == Certified::Greater, format!("{n}a is {} b", rel_text(r)), "na > b")?;
    if let Some(prev) = n.checked_sub(&Nat::one()) {
        let r = ctx.relation(&space::multiple(&prev, a), b)?;
        ensure(r != Certified::Greater, format!("{prev}a > b"), format!("{n} least"))?;
    }
    Ok(())
}

fn multiple_naive<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, n) = (c.e(0), c.m(0));
    ctx.agree(&space::multiple(n, a), &space::multiple_naive(n, a)?)
}

fn shrink_below<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, n) = (c.e(0), c.m(0));
    let b = space::shrink_below(a, n)?;
    let r = ctx.relation(&space::multiple(n, &b), a)?;
    ensure(r == Certified::Less, rel_text(r), "less")
}

fn descriptor<M: LawModel>(_c: &Case<M>, _ctx: &Ctx) -> Check {
    let d = M::descriptor();
    let ok = d.model_id == M::MODEL
        && match M::MODEL {
            ModelId::Nat => d.discrete && d.smallest.as_ref().map(LawModel::render).as_deref() == Some("1"),
            ModelId::Rat => d.symmetric && !d.discrete && d.smallest.is_none(),
            ModelId::Real => d.continuous_at_oracle && !d.discrete && !d.exact_order,
        };
    ensure(ok, format!("descriptor of {}", M::MODEL), "the model's classification")
}

fn real_from_rat_additive(c: &Case<PosRealValue>, ctx: &Ctx) -> Check {
    let a = PosRat::from_nat(c.m(0)).div_nat(c.m(1));
    let b = PosRat::from_nat(c.m(2)).div_nat(c.m(3));
    let lhs = real_from_rat(&a.add(&b));
    // force the oracle path by hiding the exact values
    let hide = |x: PosRealValue| PosRealValue::from_oracle(move |p| x.approx(p));
    let rhs = real_add(&hide(real_from_rat(&a)), &hide(real_from_rat(&b)));
    for p in [0, 7, ctx.precision] {
        ensure(lhs.approx(p)?.intersects(&rhs.approx(p)?), format!("disjoint at p={p}"), "intersecting")?;
    }
    Ok(())
}

fn real_compare_consistent(c: &Case<PosRealValue>, _ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let b = if c.rare(0) { a.clone() } else { b.clone() };
    let mut seen: Option<Certified> = None;
    for p in (0..=48).step_by(4) {
        let r = a.certified_cmp(&b, p)?;
        if r == Certified::Overlap {
            continue;
        }
        if let Some(s) = seen {
            ensure(s == r, format!("{} then {} at p={p}", rel_text(s), rel_text(r)), "stable certificate")?;
        }
        seen = Some(r);
    }
    Ok(())
}

fn memo_idempotent(c: &Case<PosRealValue>, _ctx: &Ctx) -> Check {
    let p = c.m(0).to_u64().unwrap_or(0) as u32;
    let x = c.e(0);
    let first = x.approx(p)?;
    let _ = x.approx(p + 3)?;
    let second = x.approx(p)?;
    ensure(first == second, &second, &first)
}
