//! Finite candidates over a creating pair: validation of the candidate
//! clauses, the natural order between candidates, and the finite-prefix
//! approximation orders.

use creature_core::base::FinSeq;
use creature_core::cond::{CondError, IntFn2, NormConditionKind};
use creature_core::creature::{Creature, CreatureError, WeakCreature};
use creature_core::norm::{NormError, NormValue};
use creature_core::pair::CreatingPairInstance;
use creature_core::pos::{basis, pos, DEFAULT_POS_BUDGET};
use num::rational::BigRational;
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A finite candidate (w, t_0, …, t_n): a root sequence together with a
/// stacked list of creatures.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteCandidate {
    pub w: FinSeq,
    pub ts: Vec<Creature>,
}

impl FiniteCandidate {
    pub fn new(w: FinSeq, ts: Vec<Creature>) -> Self {
        FiniteCandidate { w, ts }
    }

    /// Builds the creatures from weak creatures, deriving their intervals.
    pub fn from_weak(
        w: FinSeq,
        ts: Vec<WeakCreature>,
        sys: &creature_core::base::BaseSystem,
    ) -> Result<Self, CreatureError> {
        let ts = ts
            .into_iter()
            .map(|wc| Creature::try_new(wc, sys))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteCandidate { w, ts })
    }

    /// The interval [m_dn of the first creature, m_up of the last).
    pub fn span(&self) -> Option<(usize, usize)> {
        Some((self.ts.first()?.m_dn, self.ts.last()?.m_up))
    }
}

/// Outcome of checking the candidate clauses. Clauses that a partial Σ
/// enumeration cannot certify either way are reported, not guessed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CandidateVerdict {
    Valid,
    Invalid { violations: Vec<String> },
    BudgetExceeded { unresolved: Vec<String> },
}

impl CandidateVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CandidateVerdict::Valid)
    }
}

/// Checks the defining clauses of a finite candidate: every creature is a
/// member of the pair, w lies in the basis of the first creature, consecutive
/// creatures stack with equal interval endpoints, and every possible
/// extension through an initial segment lies in the basis of the next
/// creature.
pub fn validate_candidate(
    pair: &dyn CreatingPairInstance,
    c: &FiniteCandidate,
) -> CandidateVerdict {
    let mut violations = Vec::new();
    let mut unresolved = Vec::new();
    if c.ts.is_empty() {
        return CandidateVerdict::Invalid {
            violations: vec!["candidate has no creatures".to_owned()],
        };
    }
    for (i, t) in c.ts.iter().enumerate() {
        if !pair.is_member(&t.wc) {
            violations.push(format!("creature {i} is not a member of the pair"));
        }
    }
    let b0 = basis(&c.ts[0].wc, pair);
    if !b0.extensions.contains(&c.w) {
        if b0.sigma_exhausted {
            unresolved.push(format!(
                "{} not found in a partial basis of creature 0",
                c.w
            ));
        } else {
            violations.push(format!("{} is not in the basis of creature 0", c.w));
        }
    }
    for i in 0..c.ts.len() - 1 {
        if c.ts[i].m_up != c.ts[i + 1].m_dn {
            violations.push(format!(
                "stacking gap: creature {i} ends at {} but creature {} starts at {}",
                c.ts[i].m_up,
                i + 1,
                c.ts[i + 1].m_dn
            ));
            continue;
        }
        let wcs: Vec<WeakCreature> = c.ts[..=i].iter().map(|t| t.wc.clone()).collect();
        let p = pos(&c.w, &wcs, pair, DEFAULT_POS_BUDGET);
        let b = basis(&c.ts[i + 1].wc, pair);
        let missing: Vec<&FinSeq> = p
            .extensions
            .iter()
            .filter(|u| !b.extensions.contains(*u))
            .collect();
        if let Some(u) = missing.first() {
            if b.sigma_exhausted {
                unresolved.push(format!(
                    "extension {u} through creatures 0..={i} not found in a partial basis of creature {}",
                    i + 1
                ));
            } else {
                violations.push(format!(
                    "{} extension(s) through creatures 0..={i} are not in the basis of creature {}, e.g. {u}",
                    missing.len(),
                    i + 1
                ));
            }
        } else if p.sigma_exhausted || p.budget_exceeded {
            unresolved.push(format!(
                "possible extensions through creatures 0..={i} were only partially enumerated"
            ));
        }
    }
    if !violations.is_empty() {
        CandidateVerdict::Invalid { violations }
    } else if !unresolved.is_empty() {
        CandidateVerdict::BudgetExceeded { unresolved }
    } else {
        CandidateVerdict::Valid
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrderError {
    #[error("candidate has no creatures")]
    EmptyCandidate,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("prefix too short to decide: {0}")]
    PrefixTooShort(String),
    #[error("the {0} norm condition has no approximation orders")]
    BadKind(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Cond(#[from] CondError),
}

/// Decides c1 ≤ c2: the upper root is a possible extension of the lower root
/// through an initial run of c1's creatures, and every creature of c2 comes
/// from Σ applied to a consecutive block of c1's creatures, the blocks
/// covering the rest of c1. Since creatures occupy nonempty intervals and
/// both candidates tile their spans contiguously, the block decomposition is
/// forced by interval alignment, so the search over decompositions reduces to
/// checking the unique aligned one. Candidates whose last creatures end at
/// different levels are incomparable here: a finite list leaves no room to
/// distribute leftover creatures.
pub fn leq_candidates(
    pair: &dyn CreatingPairInstance,
    c1: &FiniteCandidate,
    c2: &FiniteCandidate,
) -> Result<bool, OrderError> {
    if c1.ts.is_empty() || c2.ts.is_empty() {
        return Err(OrderError::EmptyCandidate);
    }
    let (a0, a_end) = c1.span().unwrap();
    let (b0, b_end) = c2.span().unwrap();
    if a_end != b_end || c1.w.len() != a0 || c2.w.len() != b0 {
        return Ok(false);
    }
    let mut j = 0usize;
    if b0 == a0 {
        if c2.w != c1.w {
            return Ok(false);
        }
    } else {
        while j < c1.ts.len() && c1.ts[j].m_up < b0 {
            j += 1;
        }
        if j >= c1.ts.len() || c1.ts[j].m_up != b0 {
            return Ok(false);
        }
        j += 1;
        let wcs: Vec<WeakCreature> = c1.ts[..j].iter().map(|t| t.wc.clone()).collect();
        let p = pos(&c1.w, &wcs, pair, DEFAULT_POS_BUDGET);
        if !p.extensions.contains(&c2.w) {
            if p.sigma_exhausted || p.budget_exceeded {
                return Err(OrderError::BudgetExceeded(format!(
                    "possible extensions through the first {j} lower creatures were only partially enumerated and do not show {}",
                    c2.w
                )));
            }
            return Ok(false);
        }
    }
    for (i, s) in c2.ts.iter().enumerate() {
        if j >= c1.ts.len() || c1.ts[j].m_dn != s.m_dn {
            return Ok(false);
        }
        let start = j;
        while j < c1.ts.len() && c1.ts[j].m_up < s.m_up {
            j += 1;
        }
        if j >= c1.ts.len() || c1.ts[j].m_up != s.m_up {
            return Ok(false);
        }
        j += 1;
        let mut block: Vec<WeakCreature> =
            c1.ts[start..j].iter().map(|t| t.wc.clone()).collect();
        block.sort();
        let sigma = pair.sigma(&block);
        if !sigma.creatures.contains(&s.wc) {
            if !sigma.complete {
                return Err(OrderError::BudgetExceeded(format!(
                    "Σ over lower creatures {start}..{j} was only partially enumerated and does not show upper creature {i}"
                )));
            }
            return Ok(false);
        }
    }
    debug_assert_eq!(j, c1.ts.len());
    Ok(true)
}

/// Per-creature norm threshold used by the frozen-initial-segment and
/// norm-membership clauses.
enum Thresh<'a> {
    Const(BigInt),
    Table { f: &'a IntFn2, k: u64 },
}

impl Thresh<'_> {
    fn bound_for(&self, t: &Creature) -> Result<BigInt, OrderError> {
        match self {
            Thresh::Const(b) => Ok(b.clone()),
            Thresh::Table { f, k } => {
                let l = t.m_dn as u64;
                f.get(*k, l)
                    .ok_or(OrderError::Cond(CondError::MissingTableEntry(*k, l)))
            }
        }
    }
}

fn exceeds(nor: &NormValue, bound: &BigInt) -> Result<bool, OrderError> {
    Ok(nor.cmp_rational(&BigRational::from_integer(bound.clone()))? == Ordering::Greater)
}

/// t^p_i = t^q_i for all i < lvl. Indices missing from both lists carry no
/// content; an index present on one side only cannot be compared.
fn frozen_below(p: &FiniteCandidate, q: &FiniteCandidate, lvl: usize) -> Option<bool> {
    for i in 0..lvl {
        match (p.ts.get(i), q.ts.get(i)) {
            (Some(tp), Some(tq)) => {
                if tp != tq {
                    return Some(false);
                }
            }
            (None, None) => return Some(true),
            _ => return None,
        }
    }
    Some(true)
}

/// t^p_j = t^q_j for all j up to and including the first index where the
/// norm of p's creature exceeds its threshold. While no creature has crossed
/// the threshold, every index so far is frozen.
fn frozen_to_first_crossing(
    p: &FiniteCandidate,
    q: &FiniteCandidate,
    th: &Thresh,
) -> Result<Option<bool>, OrderError> {
    let longer = p.ts.len().max(q.ts.len());
    for i in 0..longer {
        match (p.ts.get(i), q.ts.get(i)) {
            (Some(tp), Some(tq)) => {
                if tp != tq {
                    return Ok(Some(false));
                }
                if exceeds(&tp.wc.nor, &th.bound_for(tp)?)? {
                    return Ok(Some(true));
                }
            }
            _ => return Ok(None),
        }
    }
    // both lists exhausted together without a crossing: the lists agree
    // everywhere, so the frozen segment holds as far as it reaches
    Ok(Some(true))
}

/// Every creature of q whose norm does not exceed its threshold appears
/// among p's creatures. Read over the available lists.
fn membership(
    p: &FiniteCandidate,
    q: &FiniteCandidate,
    th: &Thresh,
) -> Result<bool, OrderError> {
    for s in &q.ts {
        if !exceeds(&s.wc.nor, &th.bound_for(s)?)? && !p.ts.contains(s) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn combine(frozen: Option<bool>, member: bool) -> Option<bool> {
    match (frozen, member) {
        (Some(false), _) | (_, false) => Some(false),
        (Some(true), true) => Some(true),
        (None, true) => None,
    }
}

/// Decides the n-th approximation order between candidate prefixes: the base
/// clause (c1 ≤ c2 with equal roots) plus the kind's clause at stage n+1.
/// A clause that needs a creature beyond one of the prefixes is reported as
/// `PrefixTooShort` rather than guessed, but a definite failure on the
/// available part always decides false.
pub fn leq_n(
    pair: &dyn CreatingPairInstance,
    kind: &NormConditionKind,
    n: u64,
    p: &FiniteCandidate,
    q: &FiniteCandidate,
) -> Result<bool, OrderError> {
    if p.ts.is_empty() || q.ts.is_empty() {
        return Err(OrderError::EmptyCandidate);
    }
    if p.w != q.w {
        return Ok(false);
    }
    let lvl = n + 1;
    let clause = match kind {
        NormConditionKind::Empty => return Err(OrderError::BadKind("empty".to_owned())),
        NormConditionKind::SInfty => frozen_below(p, q, lvl as usize),
        NormConditionKind::WInfty => {
            frozen_to_first_crossing(p, q, &Thresh::Const(BigInt::from(lvl)))?
        }
        NormConditionKind::Infty => {
            let th = Thresh::Const(BigInt::from(lvl));
            let frozen = frozen_to_first_crossing(p, q, &th)?;
            combine(frozen, membership(p, q, &th)?)
        }
        NormConditionKind::F { f, .. } => {
            let th = Thresh::Table { f, k: lvl };
            let frozen = frozen_to_first_crossing(p, q, &th)?;
            combine(frozen, membership(p, q, &th)?)
        }
    };
    if clause == Some(false) {
        return Ok(false);
    }
    if !leq_candidates(pair, p, q)? {
        return Ok(false);
    }
    match clause {
        Some(true) => Ok(true),
        None => Err(OrderError::PrefixTooShort(format!(
            "stage {lvl} clause needs creatures beyond the prefixes (lengths {} and {})",
            p.ts.len(),
            q.ts.len()
        ))),
        Some(false) => unreachable!(),
    }
}
