//! The theorems as seeded, shrinking property checks.
//!
//! Every law is a generic check over a [`LawModel`], run against random
//! cases whose hypotheses hold by construction (proportional quadruples are
//! built as `a, b, k·a, k·b`, ordered pairs as `b, b + d`, and so on). A
//! failing case is shrunk greedily before it is reported.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ratio::{ratio_compare, verify_witness, RatioRel, Witness};
use crate::space::{self, ApproxPolicy, Certified, Magnitude, ModelId};
use crate::{MagnitudeError, Nat, PosRat, PosRealValue, Result};

pub use model::LawModel;

macro_rules! all_models {
    ($law:expr, $f:ident) => {
        $law.nat($f::<Nat>).rat($f::<PosRat>).real($f::<PosRealValue>)
    };
}

macro_rules! exact_models {
    ($law:expr, $f:ident) => {
        $law.nat($f::<Nat>).rat($f::<PosRat>)
    };
}

mod core;
mod euclid;
mod model;
mod structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawSet {
    CoreAxioms,
    Order,
    EuclidV,
    Ratio,
    Embed,
    Hom,
    Product,
    Power,
    Models,
}

impl LawSet {
    pub const ALL: [LawSet; 9] = [
        LawSet::CoreAxioms,
        LawSet::Order,
        LawSet::EuclidV,
        LawSet::Ratio,
        LawSet::Embed,
        LawSet::Hom,
        LawSet::Product,
        LawSet::Power,
        LawSet::Models,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LawSet::CoreAxioms => "core_axioms",
            LawSet::Order => "order",
            LawSet::EuclidV => "euclid_v",
            LawSet::Ratio => "ratio",
            LawSet::Embed => "embed",
            LawSet::Hom => "hom",
            LawSet::Product => "product",
            LawSet::Power => "power",
            LawSet::Models => "models",
        }
    }
}

impl fmt::Display for LawSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LawSet {
    type Err = MagnitudeError;

    fn from_str(s: &str) -> Result<Self> {
        LawSet::ALL
            .into_iter()
            .find(|set| set.as_str() == s)
            .ok_or_else(|| MagnitudeError::UnknownLaw(format!("no law set `{s}`")))
    }
}

/// Deliberate defects, used to show that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// `b - a` comes back one unit too large.
    BrokenSubtract,
    /// Witness checks accept `m a >= n b` on the first pair.
    BrokenWitnessVerification,
}

/// Comparison tolerance for a run: exact for `nat` and `rat`, an interval
/// precision for `real`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tolerance {
    Exact,
    Bits(u32),
}

impl Tolerance {
    fn precision(self) -> u32 {
        match self {
            Tolerance::Exact => 30,
            Tolerance::Bits(p) => p,
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Exact => f.write_str("exact"),
            Tolerance::Bits(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Tolerance {
    type Err = MagnitudeError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(Tolerance::Exact);
        }
        s.parse()
            .map(Tolerance::Bits)
            .map_err(|_| MagnitudeError::Parse(format!("tolerance must be `exact` or a precision, got `{s}`")))
    }
}

impl Serialize for Tolerance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tolerance::Exact => s.serialize_str("exact"),
            Tolerance::Bits(p) => s.serialize_u32(*p),
        }
    }
}

impl<'de> Deserialize<'de> for Tolerance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bits(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Bits(p) => Ok(Tolerance::Bits(p)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub inputs: Vec<String>,
    pub observed: String,
    pub expected: String,
    pub shrink_steps: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LawReport {
    pub law_id: String,
    pub model: ModelId,
    pub trials: u64,
    pub seed: u64,
    pub tolerance: Tolerance,
    pub failures: Vec<Failure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Raw random inputs of one trial.
#[derive(Debug, Clone)]
pub struct Case<M> {
    pub elems: Vec<M>,
    pub mults: Vec<Nat>,
}

impl<M> Case<M> {
    pub(crate) fn e(&self, i: usize) -> &M {
        &self.elems[i]
    }

    pub(crate) fn m(&self, i: usize) -> &Nat {
        &self.mults[i]
    }

    /// A coin derived from a multiplier: true for one value in eight.
    pub(crate) fn rare(&self, i: usize) -> bool {
        self.mults[i].as_biguint().bit(0) && self.mults[i].as_biguint().bit(1) && self.mults[i].as_biguint().bit(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub observed: String,
    pub expected: String,
}

impl From<MagnitudeError> for Mismatch {
    fn from(e: MagnitudeError) -> Self {
        Mismatch { observed: format!("error: {e}"), expected: "no error".into() }
    }
}

pub type Check = std::result::Result<(), Mismatch>;

pub(crate) fn mismatch(observed: impl fmt::Display, expected: impl fmt::Display) -> Check {
    Err(Mismatch { observed: observed.to_string(), expected: expected.to_string() })
}

pub(crate) fn ensure(ok: bool, observed: impl fmt::Display, expected: impl fmt::Display) -> Check {
    if ok {
        Ok(())
    } else {
        mismatch(observed, expected)
    }
}

type CheckFn<M> = fn(&Case<M>, &Ctx) -> Check;

pub struct Law {
    pub id: &'static str,
    /// The statement being checked, with its source.
    pub statement: &'static str,
    pub set: LawSet,
    elems: usize,
    mults: usize,
    mult_bits: u32,
    nat: Option<CheckFn<Nat>>,
    rat: Option<CheckFn<PosRat>>,
    real: Option<CheckFn<PosRealValue>>,
}

impl Law {
    pub(crate) fn new(id: &'static str, statement: &'static str, set: LawSet, elems: usize, mults: usize) -> Law {
        Law { id, statement, set, elems, mults, mult_bits: 10, nat: None, rat: None, real: None }
    }

    pub(crate) fn bits(mut self, mult_bits: u32) -> Law {
        self.mult_bits = mult_bits;
        self
    }

    pub(crate) fn nat(mut self, f: CheckFn<Nat>) -> Law {
        self.nat = Some(f);
        self
    }

    pub(crate) fn rat(mut self, f: CheckFn<PosRat>) -> Law {
        self.rat = Some(f);
        self
    }

    pub(crate) fn real(mut self, f: CheckFn<PosRealValue>) -> Law {
        self.real = Some(f);
        self
    }

    pub fn models(&self) -> Vec<ModelId> {
        let mut out = Vec::new();
        if self.nat.is_some() {
            out.push(ModelId::Nat);
        }
        if self.rat.is_some() {
            out.push(ModelId::Rat);
        }
        if self.real.is_some() {
            out.push(ModelId::Real);
        }
        out
    }

    pub fn applies_to(&self, model: ModelId) -> bool {
        self.models().contains(&model)
    }
}

/// Everything a check may consult besides its case.
pub struct Ctx {
    pub precision: u32,
    pub policy: ApproxPolicy,
    pub fuel: u64,
    pub mutation: Mutation,
}

impl Ctx {
    pub fn new(tolerance: Tolerance, mutation: Mutation) -> Ctx {
        let precision = tolerance.precision();
        Ctx { precision, policy: ApproxPolicy::new(precision), fuel: 256, mutation }
    }

    pub(crate) fn subtract<M: LawModel>(&self, big: &M, small: &M) -> Result<M> {
        let d = model::law_subtract(big, small, &self.policy)?;
        Ok(match self.mutation {
            Mutation::BrokenSubtract => d.combine(&M::unit()),
            _ => d,
        })
    }

    pub(crate) fn verify<M: Magnitude, N: Magnitude>(&self, w: &Witness, a: &M, b: &M, a2: &N, b2: &N) -> bool {
        if self.mutation != Mutation::BrokenWitnessVerification {
            return verify_witness(w, a, b, a2, b2);
        }
        let first = space::certified_compare(&space::multiple(&w.m, a), &space::multiple(&w.n, b), &self.policy);
        let second = space::certified_compare(&space::multiple(&w.m, a2), &space::multiple(&w.n, b2), &self.policy);
        matches!(first, Ok(Certified::Greater | Certified::Equal)) && !matches!(second, Ok(Certified::Greater))
    }

    pub(crate) fn relation<M: Magnitude>(&self, a: &M, b: &M) -> Result<Certified> {
        space::certified_compare(a, b, &self.policy)
    }

    pub(crate) fn ratio<M: Magnitude, N: Magnitude>(&self, a: &M, b: &M, a2: &N, b2: &N) -> Result<RatioRel> {
        ratio_compare(a, b, a2, b2, self.fuel)
    }

    /// `a:b = a2:b2`. An inexact side may leave it `Unknown`; a strict
    /// verdict is always a failure.
    pub(crate) fn equal_ratio<M: Magnitude, N: Magnitude>(&self, a: &M, b: &M, a2: &N, b2: &N) -> Check {
        let rel = self.ratio(a, b, a2, b2)?;
        let inexact = M::MODEL == ModelId::Real || N::MODEL == ModelId::Real;
        match rel {
            RatioRel::Equal => Ok(()),
            RatioRel::Unknown { .. } if inexact => Ok(()),
            other => mismatch(other, "equal"),
        }
    }

    /// `a:b > a2:b2`, with a witness that verifies.
    pub(crate) fn greater_ratio<M: Magnitude, N: Magnitude>(&self, a: &M, b: &M, a2: &N, b2: &N) -> Check {
        match self.ratio(a, b, a2, b2)? {
            RatioRel::Greater(w) if self.verify(&w, a, b, a2, b2) => Ok(()),
            RatioRel::Greater(w) => mismatch(format!("greater with rejected witness {w}"), "verified witness"),
            other => mismatch(other, "greater"),
        }
    }

    pub(crate) fn agree<M: LawModel>(&self, x: &M, y: &M) -> Check {
        ensure(x.agrees(y, self.precision)?, x.render(), y.render())
    }
}

/// Do two certified relations agree, reading overlap as "equal within
/// tolerance"?
pub(crate) fn same_relation(x: Certified, y: Certified) -> bool {
    x == y || matches!((x, y), (Certified::Overlap, Certified::Equal | Certified::Overlap) | (Certified::Equal, Certified::Overlap))
}

pub(crate) fn rel_text(c: Certified) -> &'static str {
    match c {
        Certified::Less => "less",
        Certified::Equal => "equal",
        Certified::Greater => "greater",
        Certified::Overlap => "overlap",
    }
}

fn registry() -> &'static [Law] {
    static LAWS: OnceLock<Vec<Law>> = OnceLock::new();
    LAWS.get_or_init(|| {
        let mut laws = core::laws();
        laws.extend(euclid::laws());
        laws.extend(structure::laws());
        laws
    })
}

/// Every registered law, in a fixed order.
pub fn list_laws() -> &'static [Law] {
    registry()
}

pub fn find_law(id: &str) -> Result<&'static Law> {
    registry()
        .iter()
        .find(|law| law.id == id)
        .ok_or_else(|| MagnitudeError::UnknownLaw(id.to_string()))
}

/// FNV-1a; a stable per-law stream selector.
fn law_hash(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn random_nat(rng: &mut ChaCha8Rng, max_bits: u32) -> Nat {
    let bits = rng.gen_range(0..=max_bits);
    Nat::from_u64(rng.gen_range(1..=(1u64 << bits)))
}

fn generate<M: LawModel>(law: &Law, rng: &mut ChaCha8Rng) -> Case<M> {
    let elems = (0..law.elems).map(|_| M::sample(rng)).collect();
    let mults = (0..law.mults).map(|_| random_nat(rng, law.mult_bits)).collect();
    Case { elems, mults }
}

fn simpler_nats(n: &Nat) -> Vec<Nat> {
    LawModel::simpler(n)
}

fn shrink<M: LawModel>(mut case: Case<M>, mut found: Mismatch, f: CheckFn<M>, ctx: &Ctx) -> (Case<M>, Mismatch, u32) {
    let mut steps = 0;
    'outer: while steps < 256 {
        for i in 0..case.elems.len() {
            for c in case.elems[i].simpler() {
                let mut candidate = case.clone();
                candidate.elems[i] = c;
                if let Err(m) = f(&candidate, ctx) {
                    (case, found) = (candidate, m);
                    steps += 1;
                    continue 'outer;
                }
            }
        }
        for i in 0..case.mults.len() {
            for c in simpler_nats(&case.mults[i]) {
                let mut candidate = case.clone();
                candidate.mults[i] = c;
                if let Err(m) = f(&candidate, ctx) {
                    (case, found) = (candidate, m);
                    steps += 1;
                    continue 'outer;
                }
            }
        }
        break;
    }
    (case, found, steps)
}

fn run_typed<M: LawModel>(law: &Law, f: CheckFn<M>, trials: u64, seed: u64, ctx: &Ctx) -> Vec<Failure> {
    let base = seed ^ law_hash(law.id);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(base);
        rng.set_stream(trial);
        let case = generate::<M>(law, &mut rng);
        if let Err(found) = f(&case, ctx) {
            let (case, found, shrink_steps) = shrink(case, found, f, ctx);
            let mut inputs: Vec<String> = case.elems.iter().map(LawModel::render).collect();
            inputs.extend(case.mults.iter().map(|n| format!("#{n}")));
            return vec![Failure { trial, inputs, observed: found.observed, expected: found.expected, shrink_steps }];
        }
    }
    Vec::new()
}

/// Run one law on one model. Stops at the first failing trial and reports
/// it shrunk.
pub fn run_law(
    law: &Law,
    model: ModelId,
    trials: u64,
    seed: u64,
    tolerance: Tolerance,
    mutation: Mutation,
) -> Result<LawReport> {
    if trials == 0 {
        return Err(MagnitudeError::InvalidArgument("trials must be at least 1".into()));
    }
    let ctx = Ctx::new(tolerance, mutation);
    let missing = || MagnitudeError::UnknownLaw(format!("{} has no {model} variant", law.id));
    let failures = match model {
        ModelId::Nat => run_typed(law, law.nat.ok_or_else(missing)?, trials, seed, &ctx),
        ModelId::Rat => run_typed(law, law.rat.ok_or_else(missing)?, trials, seed, &ctx),
        ModelId::Real => run_typed(law, law.real.ok_or_else(missing)?, trials, seed, &ctx),
    };
    Ok(LawReport { law_id: law.id.to_string(), model, trials, seed, tolerance, failures })
}

/// Run every law of `set` (or of all sets) that applies to `model`.
pub fn run_suite(
    model: ModelId,
    set: Option<LawSet>,
    trials: u64,
    seed: u64,
    tolerance: Tolerance,
) -> Result<Vec<LawReport>> {
    run_suite_mutated(model, set, trials, seed, tolerance, Mutation::None)
}

pub fn run_suite_mutated(
    model: ModelId,
    set: Option<LawSet>,
    trials: u64,
    seed: u64,
    tolerance: Tolerance,
    mutation: Mutation,
) -> Result<Vec<LawReport>> {
    registry()
        .iter()
        .filter(|law| set.is_none_or(|s| law.set == s) && law.applies_to(model))
        .map(|law| run_law(law, model, trials, seed, tolerance, mutation))
        .collect()
}
