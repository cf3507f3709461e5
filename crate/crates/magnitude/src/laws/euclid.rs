//! Euclid, Elements Book V, Propositions 1 to 24.
//!
//! Proportional pairs are built as `(a, b)` and `(a·k, b·k)`; the perturbed
//! propositions use `a' = kuv, b' = kuw, c' = kvw` against `(u, v, w)`.

use super::{ensure, rel_text, same_relation, Case, Check, Ctx, Law, LawModel, LawSet};
use crate::ratio::RatioRel;
use crate::space::{multiple, Certified};
use crate::{Nat, PosRat, PosRealValue};

pub(super) fn laws() -> Vec<Law> {
    let v = |id, statement, elems, mults| Law::new(id, statement, LawSet::EuclidV, elems, mults);
    vec![
        all_models!(v("V.1-multiple-of-sum", "n(a+b) = na+nb", 2, 1), v1),
        all_models!(v("V.2-sum-of-multipliers", "(m+n)a = ma+na", 1, 2), v2),
        all_models!(v("V.3-product-of-multipliers", "(mn)a = m(na)", 1, 2), v3),
        all_models!(v("V.4-multiples-of-proportionals", "a:b=a′:b′ implies ja:kb=ja′:kb′", 3, 2), v4),
        all_models!(v("V.5-multiples-preserve-order", "a>b implies na>nb and na-nb=n(a-b)", 2, 1), v5),
        all_models!(v("V.6-multipliers-preserve-order", "m>n implies ma>na and ma-na=(m-n)a", 1, 2), v6),
        all_models!(v("V.7-equals-have-same-ratio", "a=b implies a:c=b:c and c:a=c:b", 3, 0), v7),
        all_models!(v("V.8-greater-has-greater-ratio", "a>b implies a:c>b:c and c:b>c:a", 3, 0), v8),
        all_models!(v("V.9-same-ratio-equal", "a:c=b:c implies a=b; c:a=c:b implies a=b", 3, 1), v9),
        all_models!(v("V.10-greater-ratio-greater", "a:c>b:c implies a>b; c:a>c:b implies b>a", 3, 0), v10),
        all_models!(
            v("V.11-transitivity-of-same-ratio", "a:b=a′:b′ and a″:b″=a′:b′ imply a:b=a″:b″", 4, 0),
            v11
        ),
        all_models!(v("V.12-sum-of-proportionals", "a:b=c:d implies a:b=(a+c):(b+d)", 3, 0), v12),
        all_models!(
            v("V.13-equal-then-greater", "a:b=a′:b′ and a′:b′>a″:b″ imply a:b>a″:b″", 4, 0),
            v13
        ),
        all_models!(
            v("V.14-same-relation", "a:b=c:d implies a has to c the relation b has to d", 3, 1),
            v14
        ),
        all_models!(v("V.15-equimultiples", "a:b = ka:kb", 2, 1), v15),
        all_models!(v("V.16-alternation", "a:b=c:d implies a:c=b:d", 3, 0), v16),
        all_models!(v("V.17-separation", "(a+b):b=(a′+b′):b′ implies a:b=a′:b′", 3, 0), v17),
        all_models!(v("V.18-composition", "a:b=a′:b′ implies (a+b):b=(a′+b′):b′", 3, 0), v18),
        all_models!(v("V.19-remainder", "(a+b):(c+d)=a:c implies b:d=a:c", 3, 0), v19),
        all_models!(
            v(
                "V.20-ex-aequali-order",
                "a:b=a′:b′ and b:c=b′:c′ imply a has to c the relation a′ has to c′",
                4,
                1
            ),
            v20
        ),
        all_models!(
            v(
                "V.21-perturbed-order",
                "a:b=b′:c′ and b:c=a′:b′ imply a has to c the relation a′ has to c′",
                4,
                1
            ),
            v21
        ),
        all_models!(v("V.22-ex-aequali", "a:b=a′:b′ and b:c=b′:c′ imply a:c=a′:c′", 4, 0), v22),
        all_models!(v("V.23-perturbed-ex-aequali", "a:b=b′:c′ and b:c=a′:b′ imply a:c=a′:c′", 4, 0), v23),
        all_models!(v("V.24-sum-of-antecedents", "a:b=c:d and e:b=f:d imply (a+e):b=(c+f):d", 4, 0), v24),
    ]
}

fn v1<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, n) = (c.e(0), c.e(1), c.m(0));
    ctx.agree(&multiple(n, &a.combine(b)), &multiple(n, a).combine(&multiple(n, b)))
}

fn v2<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, m, n) = (c.e(0), c.m(0), c.m(1));
    ctx.agree(&multiple(&m.add(n), a), &multiple(m, a).combine(&multiple(n, a)))
}

fn v3<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, m, n) = (c.e(0), c.m(0), c.m(1));
    ctx.agree(&multiple(&m.mul(n), a), &multiple(m, &multiple(n, a)))
}

fn v4<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(2));
    let (a2, b2) = (a.times(k), b.times(k));
    let (j, l) = (c.m(0), c.m(1));
    ctx.equal_ratio(&multiple(j, a), &multiple(l, b), &multiple(j, &a2), &multiple(l, &b2))
}

fn v5<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (b, n) = (c.e(0), c.m(0));
    let a = b.combine(c.e(1));
    let (na, nb) = (multiple(n, &a), multiple(n, b));
    let r = ctx.relation(&na, &nb)?;
    ensure(r == Certified::Greater, rel_text(r), "greater")?;
    ctx.agree(&ctx.subtract(&na, &nb)?, &multiple(n, &ctx.subtract(&a, b)?))
}

fn v6<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, n) = (c.e(0), c.m(0));
    let m = n.add(c.m(1));
    let (ma, na) = (multiple(&m, a), multiple(n, a));
    let r = ctx.relation(&ma, &na)?;
    ensure(r == Certified::Greater, rel_text(r), "greater")?;
    let diff = m.checked_sub(n).expect("m > n by construction");
    ctx.agree(&ctx.subtract(&ma, &na)?, &multiple(&diff, a))
}

fn v7<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (x, y, d) = (c.e(0), c.e(1), c.e(2));
    let (a, b) = (x.combine(y), y.combine(x));
    ctx.equal_ratio(&a, d, &b, d)?;
    ctx.equal_ratio(d, &a, d, &b)
}

fn v8<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (b, d) = (c.e(0), c.e(2));
    let a = b.combine(c.e(1));
    ctx.greater_ratio(&a, d, b, d)?;
    ctx.greater_ratio(d, b, d, &a)
}

fn v9<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, d) = (c.e(0), c.e(2));
    let b = if c.m(0).as_biguint().bit(0) { a.clone() } else { c.e(1).clone() };
    for rel in [ctx.ratio(a, d, &b, d)?, ctx.ratio(d, a, d, &b)?] {
        if rel == RatioRel::Equal {
            ctx.agree(a, &b)?;
        }
    }
    Ok(())
}

fn v10<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, d) = (c.e(0), c.e(1), c.e(2));
    let expect = |rel: RatioRel, x: &M, y: &M| -> Check {
        let want = match rel {
            RatioRel::Greater(_) => Certified::Greater,
            RatioRel::Less(_) => Certified::Less,
            _ => return Ok(()),
        };
        let got = ctx.relation(x, y)?;
        ensure(got == want, rel_text(got), rel_text(want))
    };
    expect(ctx.ratio(a, d, b, d)?, a, b)?;
    expect(ctx.ratio(d, a, d, b)?, b, a)
}

fn v11<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k1, k2) = (c.e(0), c.e(1), c.e(2), c.e(3));
    let (a1, b1) = (a.times(k1), b.times(k1));
    let (a2, b2) = (a1.times(k2), b1.times(k2));
    ctx.equal_ratio(&a2, &b2, &a1, &b1)?;
    ctx.equal_ratio(a, b, &a2, &b2)
}

fn v12<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(2));
    let (d, e) = (a.times(k), b.times(k));
    ctx.equal_ratio(a, b, &a.combine(&d), &b.combine(&e))
}

fn v13<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k, e) = (c.e(0), c.e(1), c.e(2), c.e(3));
    let (a1, b1) = (a.times(k), b.times(k));
    ctx.greater_ratio(a, b, &a1, &b1.combine(e))?;
    ctx.greater_ratio(&a1.combine(e), &b1, a, b)
}

fn v14<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b) = (c.e(0), c.e(1));
    let k = if c.rare(0) { M::unit() } else { c.e(2).clone() };
    let (d, e) = (a.times(&k), b.times(&k));
    let (left, right) = (ctx.relation(a, &d)?, ctx.relation(b, &e)?);
    ensure(same_relation(left, right), rel_text(right), rel_text(left))
}

fn v15<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.m(0));
    ctx.equal_ratio(a, b, &multiple(k, a), &multiple(k, b))
}

fn v16<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(2));
    let (d, e) = (a.times(k), b.times(k));
    ctx.equal_ratio(a, &d, b, &e)
}

fn v17<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (b, k) = (c.e(1), c.e(2));
    let whole = c.e(0).combine(b);
    let (whole2, b2) = (whole.times(k), b.times(k));
    let a = ctx.subtract(&whole, b)?;
    let a2 = ctx.subtract(&whole2, &b2)?;
    ctx.equal_ratio(&a, b, &a2, &b2)
}

fn v18<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(2));
    let (a2, b2) = (a.times(k), b.times(k));
    ctx.equal_ratio(&a.combine(b), b, &a2.combine(&b2), &b2)
}

fn v19<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, d, k) = (c.e(0), c.e(1), c.e(2));
    let whole = a.combine(&a.times(k));
    let whole2 = d.combine(&d.times(k));
    let b = ctx.subtract(&whole, a)?;
    let e = ctx.subtract(&whole2, d)?;
    ctx.equal_ratio(&b, &e, a, d)
}

fn v20<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(3));
    let d = if c.rare(0) { a.clone() } else { c.e(2).clone() };
    let (a2, b2, d2) = (a.times(k), b.times(k), d.times(k));
    ctx.equal_ratio(b, &d, &b2, &d2)?;
    let (left, right) = (ctx.relation(a, &d)?, ctx.relation(&a2, &d2)?);
    ensure(same_relation(left, right), rel_text(right), rel_text(left))
}

/// `(a', b', c')` with `a:b = b':c'` and `b:c = a':b'`.
fn perturbed<M: LawModel>(u: &M, v: &M, w: &M, k: &M) -> (M, M, M) {
    (k.times(u).times(v), k.times(u).times(w), k.times(v).times(w))
}

fn v21<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, k) = (c.e(0), c.e(1), c.e(3));
    let d = if c.rare(0) { a.clone() } else { c.e(2).clone() };
    let (a2, b2, d2) = perturbed(a, b, &d, k);
    ctx.equal_ratio(a, b, &b2, &d2)?;
    ctx.equal_ratio(b, &d, &a2, &b2)?;
    let (left, right) = (ctx.relation(a, &d)?, ctx.relation(&a2, &d2)?);
    ensure(same_relation(left, right), rel_text(right), rel_text(left))
}

fn v22<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, d, k) = (c.e(0), c.e(1), c.e(2), c.e(3));
    let (a2, b2, d2) = (a.times(k), b.times(k), d.times(k));
    ctx.equal_ratio(b, d, &b2, &d2)?;
    ctx.equal_ratio(a, d, &a2, &d2)
}

fn v23<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, d, k) = (c.e(0), c.e(1), c.e(2), c.e(3));
    let (a2, _, d2) = perturbed(a, b, d, k);
    ctx.equal_ratio(a, d, &a2, &d2)
}

fn v24<M: LawModel>(c: &Case<M>, ctx: &Ctx) -> Check {
    let (a, b, e, k) = (c.e(0), c.e(1), c.e(2), c.e(3));
    let (d, f, g) = (a.times(k), b.times(k), e.times(k));
    ctx.equal_ratio(&a.combine(e), b, &d.combine(&g), &f)
}
