//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Criteria run one after another so their time limits mean
//! something; oracles here are computed with plain `num` arithmetic,
//! independent of the library's own code paths.

use std::time::{Duration, Instant};

use magnitude::embed::{anchor_embedding, embeddings_compare, eval, fourth_proportional_at, nat_embedding, sum_embedding, compose_embedding, Embedding};
use magnitude::hom::{product, quotient};
use magnitude::laws::{run_suite, run_suite_mutated, LawReport, LawSet, Mutation, Tolerance};
use magnitude::models::real::{real_scale, Interval};
use magnitude::power::{into_mul, mul_combine, pow, Exponent, MulReal};
use magnitude::ratio::{ratio_compare, verify_witness, RatioRel};
use magnitude::space::{multiple, multiple_naive, ApproxPolicy};
use magnitude::{Element, ModelId, Nat, PosRat, PosRealValue};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: u64, d: u64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pos(x: &BigRational) -> PosRat {
    PosRat::from_big(x.clone()).expect("positive")
}

fn big(x: &PosRat) -> BigRational {
    x.as_big().clone()
}

fn rand_rat(rng: &mut ChaCha8Rng, max_bits: u32) -> BigRational {
    let side = |rng: &mut ChaCha8Rng| {
        let bits = rng.gen_range(0..=max_bits);
        rng.gen_range(1..=1u64 << bits)
    };
    let n = side(rng);
    let d = side(rng);
    q(n, d)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn all_pass(reports: &[LawReport]) -> Result<(), String> {
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(format!("{} on {} failed: {:?}", r.law_id, r.model, r.failures[0])),
    }
}

fn axioms() -> Outcome {
    let start = Instant::now();
    let mut laws = 0;
    for (model, seed) in [(ModelId::Nat, 7), (ModelId::Rat, 7)] {
        let reports = run_suite(model, Some(LawSet::CoreAxioms), 1000, seed, Tolerance::Exact).map_err(|e| e.to_string())?;
        ensure(reports.len() == 6, || format!("{} axiom laws on {model}", reports.len()))?;
        all_pass(&reports)?;
        laws += reports.len();
    }
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!("{laws} law runs x 1000 trials on nat and rat in {took:.2?}"))
}

fn euclid() -> Outcome {
    let start = Instant::now();
    let reports = run_suite(ModelId::Rat, Some(LawSet::EuclidV), 1000, 42, Tolerance::Exact).map_err(|e| e.to_string())?;
    ensure(reports.len() == 24, || format!("{} V-laws", reports.len()))?;
    all_pass(&reports)?;
    let took = within(start, Duration::from_secs(60))?;
    Ok(format!("V.1-V.24 x 1000 trials on rat in {took:.2?}"))
}

/// `m a > n b` and `m a2 <= n b2`, by cross-multiplication.
fn witness_holds(m: &BigUint, n: &BigUint, a: &BigRational, b: &BigRational, a2: &BigRational, b2: &BigRational) -> bool {
    let (m, n) = (BigRational::from_integer(BigInt::from(m.clone())), BigRational::from_integer(BigInt::from(n.clone())));
    &m * a > &n * b && &m * a2 <= &n * b2
}

fn ratio_engine() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut strict, mut equal) = (0, 0);
    for i in 0..10_000 {
        let (a, b) = (rand_rat(&mut rng, 16), rand_rat(&mut rng, 16));
        let (a2, b2) = if rng.gen_ratio(1, 5) {
            let k = rand_rat(&mut rng, 16);
            (&a * &k, &b * &k)
        } else {
            (rand_rat(&mut rng, 16), rand_rat(&mut rng, 16))
        };
        // a:b vs a2:b2  <=>  a*b2 vs a2*b
        let want = (&a * &b2).cmp(&(&a2 * &b));
        let rel = ratio_compare(&pos(&a), &pos(&b), &pos(&a2), &pos(&b2), 64).map_err(|e| e.to_string())?;
        let ctx = || format!("pair {i}: {a}:{b} vs {a2}:{b2} gave {rel}");
        match (&rel, want) {
            (RatioRel::Equal, std::cmp::Ordering::Equal) => equal += 1,
            (RatioRel::Greater(w), std::cmp::Ordering::Greater) => {
                ensure(verify_witness(w, &pos(&a), &pos(&b), &pos(&a2), &pos(&b2)), ctx)?;
                ensure(witness_holds(w.m.as_biguint(), w.n.as_biguint(), &a, &b, &a2, &b2), ctx)?;
                strict += 1;
            }
            (RatioRel::Less(w), std::cmp::Ordering::Less) => {
                ensure(verify_witness(w, &pos(&a2), &pos(&b2), &pos(&a), &pos(&b)), ctx)?;
                ensure(witness_holds(w.m.as_biguint(), w.n.as_biguint(), &a2, &b2, &a, &b), ctx)?;
                strict += 1;
            }
            _ => return Err(ctx()),
        }
    }
    Ok(format!("10000 pairs agree with cross-multiplication ({strict} strict with witnesses, {equal} equal, 0 unknown)"))
}

fn multiples() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let a = rand_rat(&mut rng, 16);
        let pa = pos(&a);
        let mut naive = pa.clone();
        for n in 1..=1024u64 {
            let nn = Nat::from_u64(n);
            if n > 1 {
                naive = naive.add(&pa);
            }
            let fast = multiple(&nn, &pa);
            let reference = multiple_naive(&nn, &pa).map_err(|e| e.to_string())?;
            ensure(fast == reference && fast == naive, || format!("{n} * {a}: {fast} vs {reference}"))?;
            ensure(big(&fast) == &a * BigRational::from_integer(n.into()), || format!("{n} * {a} = {fast}"))?;
        }
    }
    Ok("multiple = multiple_naive for n = 1..1024 on 100 rationals".into())
}

fn contains(i: &Interval, x: &BigRational) -> bool {
    &big(i.lo()) <= x && x <= &big(i.hi())
}

fn width_ok(i: &Interval, p: u32) -> bool {
    big(i.hi()) - big(i.lo()) <= BigRational::new(BigInt::one(), BigInt::one() << p)
}

fn hidden(x: &BigRational) -> PosRealValue {
    let v = magnitude::models::real_from_rat(&pos(x));
    PosRealValue::from_oracle(move |p| v.approx(p))
}

fn fourth() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..200 {
        let (a, b, c) = (rand_rat(&mut rng, 16), rand_rat(&mut rng, 16), rand_rat(&mut rng, 16));
        let want = &c * &b / &a;
        for a_prime in [magnitude::models::real_from_rat(&pos(&c)), hidden(&c)] {
            let got = fourth_proportional_at(&pos(&a), &pos(&b), &a_prime, 53).map_err(|e| e.to_string())?;
            ensure(contains(&got, &want) && width_ok(&got, 53), || format!("case {i}: {a}, {b}, {c}: {got} vs {want}"))?;
        }
    }
    Ok("200 cases contain c*b/a at width <= 2^-53 (exact and oracle-backed a')".into())
}

/// `r * sqrt(s)` as a real, with its exact description.
struct Surd {
    value: PosRealValue,
    r: BigRational,
    s: BigRational,
}

impl Surd {
    fn sample(rng: &mut ChaCha8Rng) -> Surd {
        let r = rand_rat(rng, 7);
        let den = rng.gen_range(1..=32u64);
        let s = q(rng.gen_range(den + 1..4 * den), den);
        let root = Element::parse(ModelId::Real, &format!("sqrt({s})")).unwrap().to_real();
        Surd { value: real_scale(&root, &pos(&r)), r, s }
    }
}

/// Does `[lo, hi]` contain `r * sqrt(s)`?  Squares both sides.
fn contains_surd(i: &Interval, r: &BigRational, s: &BigRational) -> bool {
    let sq = |x: BigRational| &x * &x;
    sq(big(i.lo()) / r) <= *s && *s <= sq(big(i.hi()) / r)
}

fn approx53(e: &Element) -> Result<Interval, String> {
    e.to_real().approx(53).map_err(|e| e.to_string())
}

fn product_quotient() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let low = q(1, 256);
    let high = q(256, 1);
    for i in 0..200 {
        let (x, y, z) = (Surd::sample(&mut rng), Surd::sample(&mut rng), Surd::sample(&mut rng));
        let (ex, ey, ez) = (Element::Real(x.value.clone()), Element::Real(y.value.clone()), Element::Real(z.value.clone()));
        for s in [&x, &y, &z] {
            let iv = s.value.approx(53).map_err(|e| e.to_string())?;
            ensure(big(iv.hi()) >= low && big(iv.lo()) <= high, || format!("case {i}: input out of range"))?;
        }
        let ctx = |what: &str| format!("case {i}: {what} with {}*sqrt({}), {}*sqrt({})", x.r, x.s, y.r, y.s);
        let err = |e: magnitude::MagnitudeError| e.to_string();
        let xy = approx53(&product(&ex, &ey).map_err(err)?)?;
        let yx = approx53(&product(&ey, &ex).map_err(err)?)?;
        ensure(xy.intersects(&yx), || ctx("commutativity"))?;
        ensure(width_ok(&xy, 53) && contains_surd(&xy, &(&x.r * &y.r), &(&x.s * &y.s)), || ctx("product oracle"))?;
        let left = product(&product(&ex, &ey).map_err(err)?, &ez).map_err(err)?;
        let right = product(&ex, &product(&ey, &ez).map_err(err)?).map_err(err)?;
        ensure(approx53(&left)?.intersects(&approx53(&right)?), || ctx("associativity"))?;
        let yx_quot = quotient(&ey, &ex).map_err(err)?;
        ensure(contains_surd(&approx53(&yx_quot)?, &(&y.r / &x.r), &(&y.s / &x.s)), || ctx("quotient oracle"))?;
        let back = product(&yx_quot, &ex).map_err(err)?;
        ensure(approx53(&back)?.intersects(&y.value.approx(53).map_err(|e| e.to_string())?), || ctx("round trip"))?;
    }
    for i in 0..10_000 {
        let (a, b) = (rand_rat(&mut rng, 16), rand_rat(&mut rng, 16));
        let (ea, eb) = (Element::Rat(pos(&a)), Element::Rat(pos(&b)));
        let prod = product(&ea, &eb).map_err(|e| e.to_string())?;
        let quot = quotient(&eb, &ea).map_err(|e| e.to_string())?;
        ensure(prod.as_rat().map(big) == Some(&a * &b), || format!("rat pair {i}: {a} * {b} = {prod}"))?;
        ensure(quot.as_rat().map(big) == Some(&b / &a), || format!("rat pair {i}: {b} / {a} = {quot}"))?;
    }
    Ok("200 real instances at p=53 (commutative, associative, round trip, surd oracle); 10000 rat pairs exact".into())
}

fn mul_real(x: &BigRational) -> Result<MulReal, String> {
    into_mul(&magnitude::models::real_from_rat(&pos(x)), &ApproxPolicy::default()).map_err(|e| e.to_string())
}

fn pow40(x: &MulReal, y: &BigRational) -> Result<(MulReal, Interval), String> {
    let r = pow(x, &Exponent::Rat(pos(y))).map_err(|e| e.to_string())?;
    let i = r.approx(40).map_err(|e| e.to_string())?;
    Ok((r, i))
}

/// `lo^den <= x^num <= hi^den`: the interval contains `x^(num/den)`.
fn contains_power(i: &Interval, x: &BigRational, y: &BigRational) -> bool {
    let to_u32 = |v: &BigInt| u32::try_from(v).expect("small exponent");
    let (num, den) = (to_u32(y.numer()), to_u32(y.denom()));
    let target = Pow::pow(x, num);
    Pow::pow(big(i.lo()), den) <= target && target <= Pow::pow(big(i.hi()), den)
}

fn power() -> Outcome {
    let start = Instant::now();
    // sqrt(2) against floor(sqrt(2 * 4^k))
    let (_, root2) = pow40(&mul_real(&q(2, 1))?, &q(1, 2))?;
    let k = 96u32;
    let s = (BigUint::from(2u32) << (2 * k)).sqrt();
    let scale = BigRational::from_integer(BigInt::one() << k);
    let oracle_lo = BigRational::from_integer(s.clone().into()) / &scale;
    let oracle_hi = BigRational::from_integer((s + 1u32).into()) / &scale;
    ensure(width_ok(&root2, 40), || format!("width of {root2}"))?;
    ensure(big(root2.lo()) <= oracle_lo && oracle_hi <= big(root2.hi()), || format!("{root2} misses isqrt bracket"))?;

    let law_check = |x1: &BigRational, x2: &BigRational, y1: &BigRational, y2: &BigRational| -> Result<(), String> {
        let (m1, m2) = (mul_real(x1)?, mul_real(x2)?);
        let ctx = || format!("x1={x1} x2={x2} y1={y1} y2={y2}");
        // base law: (x1 x2)^y = x1^y x2^y
        let (_, lhs) = pow40(&mul_combine(&m1, &m2), y1)?;
        let (p1, i1) = pow40(&m1, y1)?;
        let (p2, _) = pow40(&m2, y1)?;
        let rhs = mul_combine(&p1, &p2).approx(40).map_err(|e| e.to_string())?;
        ensure(lhs.intersects(&rhs), || format!("base law: {}", ctx()))?;
        ensure(contains_power(&i1, x1, y1), || format!("power oracle: {}", ctx()))?;
        // exponent law: x^(y1+y2) = x^y1 x^y2
        let (_, lhs) = pow40(&m1, &(y1 + y2))?;
        let (p3, _) = pow40(&m1, y2)?;
        let rhs = mul_combine(&p1, &p3).approx(40).map_err(|e| e.to_string())?;
        ensure(lhs.intersects(&rhs), || format!("exponent law: {}", ctx()))?;
        ensure(contains_power(&lhs, x1, &(y1 + y2)), || format!("power oracle: {}", ctx()))
    };
    let xs = [q(3, 2), q(2, 1), q(5, 2)];
    let ys = [q(1, 3), q(1, 2), q(1, 1), q(7, 4)];
    let mut grid = 0;
    for x1 in &xs {
        for x2 in &xs {
            for y1 in &ys {
                for y2 in &ys {
                    law_check(x1, x2, y1, y2)?;
                    grid += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let base = |rng: &mut ChaCha8Rng| BigRational::one() + q(rng.gen_range(1..=256), rng.gen_range(1..=256));
    let exponent = |rng: &mut ChaCha8Rng| q(rng.gen_range(1..=16), rng.gen_range(1..=16));
    for _ in 0..100 {
        let (x1, x2) = (base(&mut rng), base(&mut rng));
        let (y1, y2) = (exponent(&mut rng), exponent(&mut rng));
        law_check(&x1, &x2, &y1, &y2)?;
    }
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("sqrt(2) within 2^-40 contains isqrt bracket; {grid} grid + 100 random law cases in {took:.2?}"))
}

fn random_rat_embedding(rng: &mut ChaCha8Rng) -> Result<(Embedding, BigRational), String> {
    // an anchored embedding and its slope image/a
    let anchored = |rng: &mut ChaCha8Rng| -> Result<(Embedding, BigRational), String> {
        let (a, image) = (rand_rat(rng, 8), rand_rat(rng, 8));
        let e = anchor_embedding(Element::Rat(pos(&a)), Element::Rat(pos(&image))).map_err(|e| e.to_string())?;
        Ok((e, image / a))
    };
    let (phi, s) = anchored(rng)?;
    Ok(match rng.gen_range(0..3) {
        0 => (phi, s),
        1 => {
            let (chi, t) = anchored(rng)?;
            (sum_embedding(&phi, &chi).map_err(|e| e.to_string())?, s + t)
        }
        _ => {
            let (chi, t) = anchored(rng)?;
            (compose_embedding(&phi, &chi).map_err(|e| e.to_string())?, s * t)
        }
    })
}

fn embedding_uniqueness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let policy = ApproxPolicy::default();
    for i in 0..100 {
        let image = Element::Rat(pos(&rand_rat(&mut rng, 16)));
        let fast = nat_embedding(image.clone());
        let anchored = anchor_embedding(Element::Nat(Nat::one()), image.clone()).map_err(|e| e.to_string())?;
        let probes = [1u64, 7, rng.gen_range(8..=1u64 << 20)];
        for p in probes {
            let probe = Element::Nat(Nat::from_u64(p));
            let ord = embeddings_compare(&fast, &anchored, &probe, &policy).map_err(|e| e.to_string())?;
            ensure(ord == std::cmp::Ordering::Equal, || format!("case {i}: image {image} probe {p}: {ord:?}"))?;
        }
    }
    for i in 0..1000 {
        let (chi, slope) = random_rat_embedding(&mut rng)?;
        let a = rand_rat(&mut rng, 16);
        let n = Nat::from_u64(rng.gen_range(1..=256));
        let ea = Element::Rat(pos(&a));
        let lhs = eval(&chi, &ea.multiple(&n)).map_err(|e| e.to_string())?;
        let rhs = eval(&chi, &ea).map_err(|e| e.to_string())?.multiple(&n);
        let want = &slope * &a * BigRational::from_integer(BigInt::from(n.as_biguint().clone()));
        ensure(lhs.as_rat().map(big) == Some(want.clone()) && rhs.as_rat().map(big) == Some(want), || {
            format!("case {i}: chi({n} a) = {lhs}, {n} chi(a) = {rhs}")
        })?;
    }
    Ok("nat_embedding = anchor(1, a') at 3 probes for 100 cases; chi(na) = n chi(a) on 1000 cases".into())
}

fn hom_laws() -> Outcome {
    let reports = run_suite(ModelId::Rat, Some(LawSet::Hom), 1000, 11, Tolerance::Exact).map_err(|e| e.to_string())?;
    all_pass(&reports)?;
    let ids: Vec<&str> = reports.iter().map(|r| r.law_id.as_str()).collect();
    for needed in ["endo-left-distributive", "endo-right-distributive", "endo-commutative", "endo-identity", "endo-order-under-composition"] {
        ensure(ids.contains(&needed), || format!("{needed} not run"))?;
    }
    Ok(format!("{} E(M) laws x 1000 trials on rat", reports.len()))
}

fn mutation_smoke() -> Outcome {
    let mut caught = Vec::new();
    for (mutation, set, must_fail) in [
        (Mutation::BrokenSubtract, LawSet::EuclidV, Some("V.17-separation")),
        (Mutation::BrokenWitnessVerification, LawSet::Ratio, None),
    ] {
        let reports = run_suite_mutated(ModelId::Rat, Some(set), 200, 42, Tolerance::Exact, mutation).map_err(|e| e.to_string())?;
        let failed: Vec<&LawReport> = reports.iter().filter(|r| !r.passed()).collect();
        ensure(!failed.is_empty(), || format!("{mutation:?} went unnoticed"))?;
        let report = match must_fail {
            Some(id) => failed.iter().find(|r| r.law_id == id).ok_or_else(|| format!("{mutation:?}: {id} did not fail"))?,
            None => failed[0],
        };
        let f = &report.failures[0];
        ensure(!f.inputs.is_empty(), || format!("{}: no counterexample", report.law_id))?;
        caught.push(format!(
            "{mutation:?} -> {} laws fail, {} on ({}) after {} shrink steps",
            failed.len(),
            report.law_id,
            f.inputs.join(", "),
            f.shrink_steps
        ));
    }
    Ok(caught.join("; "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom suite", axioms),
        ("euclid suite", euclid),
        ("ratio engine vs cross-multiplication", ratio_engine),
        ("multiple fast path", multiples),
        ("fourth proportional", fourth),
        ("product and quotient", product_quotient),
        ("power laws", power),
        ("embedding uniqueness", embedding_uniqueness),
        ("hom and E(M) laws", hom_laws),
        ("mutation smoke test", mutation_smoke),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
