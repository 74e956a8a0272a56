//! Instance-level decision procedures for structural properties of creatures
//! and creating pairs: the bigness variants, omittory and halving laws,
//! monotonicity and spreading, singleton capture, additivity, and saturation
//! under d-sums. Every check evaluates the defining condition literally by
//! exhaustive search over the finite instance and returns replayable
//! evidence.
//!
//! A pair-level property quantifies over all of K; a check here certifies
//! the quantified clause on the supplied instance, so a holds-verdict is
//! exhaustive for that instance and a counterexample refutes globally.
//! Hypothesis-conditioned pair properties (r̄-bigness constrains only
//! creatures of norm above 1, say) hold vacuously on instances outside the
//! hypothesis, while properties of the creature itself (k-bigness) are
//! false there.

mod additivity;
mod bigness;
mod capture;
mod halving;
mod saturation;
mod structure;

pub use additivity::{additivity, Additivity};
pub use halving::{verify_halving, HalvingMode};

use creature_core::{
    basis, pos, CreatingPairInstance, FinSeq, IntFn2, NormError, NormValue, Token, WeakCreature,
    DEFAULT_POS_BUDGET,
};
use num::rational::BigRational;
use num::BigInt;
use prenorms::PreNorm;
use quasitree::TreeConditionPrefix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PropError {
    #[error("property does not apply: {0}")]
    KindInapplicable(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bad subject: {0}")]
    BadSubject(String),
    #[error("bad property parameters: {0}")]
    BadSpec(String),
    #[error("the pair exposes no half map")]
    NoHalfMap,
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// An integer function of the level, given either as a constant or as a
/// finite table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelFn {
    Const(u64),
    Table(BTreeMap<u64, u64>),
}

impl LevelFn {
    pub fn get(&self, level: u64) -> Option<u64> {
        match self {
            LevelFn::Const(c) => Some(*c),
            LevelFn::Table(m) => m.get(&level).copied(),
        }
    }
}

/// Which property to check, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertySpec {
    KBig { k: u64 },
    RbarBig { rbar: LevelFn },
    OmittoryBig { k: u64 },
    EssentiallyFBig { f: LevelFn },
    Reducible,
    HLimited { h: IntFn2 },
    TriviallyMeagering,
    TOmittory,
    Monotonic,
    StrictlyMonotonic,
    Spread,
    CapturesSingletonsBounded { depth: usize },
    GeneratesUltrafilterStep { k: u64 },
    Interesting,
    SaturatedWrt { h: PreNorm, bounds: u64 },
}

/// The finite instance a property kind quantifies over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subject", rename_all = "snake_case")]
pub enum Subject {
    Creature { t: WeakCreature },
    Tuple { ts: Vec<WeakCreature> },
    TreeSystem { system: TreeConditionPrefix },
}

/// Outcome of an instance-level check. Exactly one of witness and
/// counterexample is populated; `bounded` marks verdicts whose search was
/// truncated by an enumeration budget, scoping the evidence to the
/// enumerated fragment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(default)]
    pub bounded: bool,
}

impl Verdict {
    pub(crate) fn holds_with(witness: Value, bounded: bool) -> Self {
        Verdict {
            holds: true,
            witness: Some(witness),
            counterexample: None,
            bounded,
        }
    }

    pub(crate) fn fails_with(counterexample: Value, bounded: bool) -> Self {
        Verdict {
            holds: false,
            witness: None,
            counterexample: Some(counterexample),
            bounded,
        }
    }
}

pub fn check_property(
    pair: &dyn CreatingPairInstance,
    subject: &Subject,
    spec: &PropertySpec,
) -> Result<Verdict, PropError> {
    match spec {
        PropertySpec::KBig { k } => bigness::k_big(pair, one(subject, "k_big")?, *k),
        PropertySpec::RbarBig { rbar } => bigness::rbar_big(pair, one(subject, "rbar_big")?, rbar),
        PropertySpec::OmittoryBig { k } => {
            bigness::omittory_big(pair, one(subject, "omittory_big")?, *k)
        }
        PropertySpec::EssentiallyFBig { f } => {
            bigness::essentially_f_big(pair, one(subject, "essentially_f_big")?, f)
        }
        PropertySpec::Reducible => structure::reducible(pair, one(subject, "reducible")?),
        PropertySpec::HLimited { h } => structure::h_limited(pair, one(subject, "h_limited")?, h),
        PropertySpec::TriviallyMeagering => {
            structure::trivially_meagering(pair, one(subject, "trivially_meagering")?)
        }
        PropertySpec::TOmittory => capture::t_omittory(pair, tree(subject, "t_omittory")?),
        PropertySpec::Monotonic => structure::monotonic(pair, one(subject, "monotonic")?),
        PropertySpec::StrictlyMonotonic => {
            structure::strictly_monotonic(pair, many(subject, "strictly_monotonic")?)
        }
        PropertySpec::Spread => structure::spread(pair, one(subject, "spread")?),
        PropertySpec::CapturesSingletonsBounded { depth } => capture::captures_singletons(
            pair,
            many(subject, "captures_singletons_bounded")?,
            *depth,
        ),
        PropertySpec::GeneratesUltrafilterStep { k } => {
            bigness::ultrafilter_step(pair, one(subject, "generates_ultrafilter_step")?, *k)
        }
        PropertySpec::Interesting => bigness::interesting(pair, one(subject, "interesting")?),
        PropertySpec::SaturatedWrt { h, bounds } => {
            saturation::saturated_wrt(pair, many(subject, "saturated_wrt")?, h, *bounds)
        }
    }
}

fn one<'a>(s: &'a Subject, kind: &str) -> Result<&'a WeakCreature, PropError> {
    match s {
        Subject::Creature { t } => Ok(t),
        _ => Err(PropError::KindInapplicable(format!(
            "{kind} takes a single-creature subject"
        ))),
    }
}

fn many<'a>(s: &'a Subject, kind: &str) -> Result<&'a [WeakCreature], PropError> {
    match s {
        Subject::Tuple { ts } => Ok(ts),
        _ => Err(PropError::KindInapplicable(format!(
            "{kind} takes a tuple subject"
        ))),
    }
}

fn tree<'a>(s: &'a Subject, kind: &str) -> Result<&'a TreeConditionPrefix, PropError> {
    match s {
        Subject::TreeSystem { system } => Ok(system),
        _ => Err(PropError::KindInapplicable(format!(
            "{kind} takes a tree-system subject"
        ))),
    }
}

/// A sorted enumeration plus a completeness flag.
pub(crate) struct Fragment<T> {
    pub items: Vec<T>,
    pub complete: bool,
}

pub(crate) fn sigma_sorted(
    pair: &dyn CreatingPairInstance,
    ts: &[WeakCreature],
) -> Fragment<WeakCreature> {
    let r = pair.sigma(ts);
    let mut items = r.creatures;
    items.sort();
    items.dedup();
    Fragment {
        items,
        complete: r.complete,
    }
}

pub(crate) fn basis_sorted(pair: &dyn CreatingPairInstance, t: &WeakCreature) -> Fragment<FinSeq> {
    let r = basis(t, pair);
    Fragment {
        items: r.extensions.into_iter().collect(),
        complete: !r.sigma_exhausted && !r.budget_exceeded,
    }
}

pub(crate) fn pos_sorted(
    pair: &dyn CreatingPairInstance,
    u: &FinSeq,
    ts: &[WeakCreature],
) -> Fragment<FinSeq> {
    let r = pos(u, ts, pair, DEFAULT_POS_BUDGET);
    Fragment {
        items: r.extensions.into_iter().collect(),
        complete: !r.sigma_exhausted && !r.budget_exceeded,
    }
}

/// All functions from an n-element domain into r classes, in odometer order
/// with the most significant digit first; all-zeros comes first.
pub(crate) struct Colourings {
    r: u64,
    cur: Option<Vec<u64>>,
}

impl Colourings {
    pub fn new(n: usize, r: u64) -> Self {
        let cur = if r == 0 && n > 0 {
            None
        } else {
            Some(vec![0; n])
        };
        Colourings { r, cur }
    }
}

impl Iterator for Colourings {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.cur.clone()?;
        let digits = self.cur.as_mut().expect("present");
        let mut advanced = false;
        let mut i = digits.len();
        while i > 0 {
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.r {
                advanced = true;
                break;
            }
            digits[i] = 0;
        }
        if !advanced {
            self.cur = None;
        }
        Some(out)
    }
}

pub(crate) const SEARCH_CAP: u64 = 1 << 20;

pub(crate) fn guard_colourings(n: usize, r: u64, what: &str) -> Result<(), PropError> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(r.max(1));
        if total > SEARCH_CAP {
            return Err(PropError::BudgetExceeded(format!(
                "{what}: {r}^{n} colourings exceed the search cap"
            )));
        }
    }
    Ok(())
}

pub(crate) fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn nv_cmp(a: &NormValue, b: &NormValue) -> Result<Ordering, PropError> {
    a.try_cmp(b).map_err(PropError::from)
}

pub(crate) fn cmp_rat(v: &NormValue, q: &BigRational) -> Ordering {
    v.cmp_rational(q).expect("rational comparison is total")
}

pub(crate) fn nv_max(vals: &[NormValue]) -> Result<NormValue, PropError> {
    let mut it = vals.iter();
    let mut best = it
        .next()
        .ok_or_else(|| PropError::BadSubject("empty norm list".to_owned()))?
        .clone();
    for v in it {
        if nv_cmp(v, &best)? == Ordering::Greater {
            best = v.clone();
        }
    }
    Ok(best)
}

pub(crate) fn jv<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializes")
}

pub(crate) fn colouring_record(dom: &[FinSeq], digits: &[u64]) -> Value {
    Value::Array(
        dom.iter()
            .zip(digits)
            .map(|(v, c)| json!([jv(v), c]))
            .collect(),
    )
}

/// v extends u by the zero letter at every level it adds.
pub(crate) fn is_zero_extension(zero: &[Token], u: &FinSeq, v: &FinSeq) -> bool {
    u.is_prefix_of(v)
        && v.0[u.len()..]
            .iter()
            .enumerate()
            .all(|(j, tok)| zero.get(u.len() + j) == Some(tok))
}

/// (min dn length, max up length) of a weak creature's val.
pub(crate) fn span_of(t: &WeakCreature) -> Result<(usize, usize), PropError> {
    let dn = t.dn_lengths();
    let up = t.up_lengths();
    match (dn.iter().next(), up.iter().last()) {
        (Some(&a), Some(&b)) => Ok((a, b)),
        _ => Err(PropError::BadSubject("creature has empty val".to_owned())),
    }
}

/// The 2-element span of a creature whose val lengths are uniform.
pub(crate) fn uniform_span(t: &WeakCreature) -> Result<(usize, usize), PropError> {
    let dn = t.dn_lengths();
    let up = t.up_lengths();
    if dn.len() != 1 || up.len() != 1 {
        return Err(PropError::BadSubject(
            "tuple members must have uniform val spans".to_owned(),
        ));
    }
    Ok((
        *dn.iter().next().expect("nonempty"),
        *up.iter().next().expect("nonempty"),
    ))
}

/// Validate tight stacking of a tuple and return its overall span.
pub(crate) fn stacked_span(ts: &[WeakCreature]) -> Result<(usize, usize), PropError> {
    let mut spans = Vec::with_capacity(ts.len());
    for t in ts {
        spans.push(uniform_span(t)?);
    }
    for w in spans.windows(2) {
        if w[0].1 != w[1].0 {
            return Err(PropError::BadSubject(format!(
                "members must stack tightly: [{}, {}) then [{}, {})",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    Ok((spans[0].0, spans[spans.len() - 1].1))
}

/// Does the tuple stack tightly over exactly the given span?
pub(crate) fn restacks(ts: &[WeakCreature], span: (usize, usize)) -> bool {
    let mut at = span.0;
    for t in ts {
        let Ok((dn, up)) = uniform_span(t) else {
            return false;
        };
        if dn != at || up < dn {
            return false;
        }
        at = up;
    }
    at == span.1
}
