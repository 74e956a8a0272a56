//! The executable interface of a creating pair (K, Σ): membership, Σ
//! enumeration, norm evaluation, and an optional halving map.

use crate::base::BaseSystem;
use crate::creature::WeakCreature;
use crate::norm::NormValue;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PairError {
    #[error("creature is not a member of this pair: {0}")]
    NotMember(String),
    #[error("norm undefined: {0}")]
    NormUndefined(String),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
}

/// Result of enumerating Σ(S). `complete` is false when the instance could
/// not exhaust the enumeration (budget or representation limits); what is
/// returned is then a sound partial list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaResult {
    pub creatures: Vec<WeakCreature>,
    pub complete: bool,
}

impl SigmaResult {
    pub fn empty() -> Self {
        SigmaResult {
            creatures: Vec::new(),
            complete: true,
        }
    }

    pub fn complete(creatures: Vec<WeakCreature>) -> Self {
        SigmaResult {
            creatures,
            complete: true,
        }
    }
}

pub trait CreatingPairInstance {
    fn base(&self) -> &BaseSystem;

    fn is_member(&self, t: &WeakCreature) -> bool;

    /// Σ applied to a finite list of creatures. Σ(∅) = ∅. Implementations
    /// return each result creature once, in canonical order.
    fn sigma(&self, s: &[WeakCreature]) -> SigmaResult;

    fn norm(&self, t: &WeakCreature) -> Result<NormValue, PairError>;

    /// The halving map, where the pair has one.
    fn half(&self, _t: &WeakCreature) -> Option<WeakCreature> {
        None
    }
}

/// Norm assignment rules for the trivial pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormRule {
    /// nor = log2 of the number of offered pairs.
    Log2Pos,
    /// nor = the number of offered pairs.
    CardPos,
}

impl NormRule {
    pub fn apply(&self, count: usize) -> NormValue {
        match self {
            NormRule::Log2Pos => NormValue::log2_of_int(count.max(1) as u64),
            NormRule::CardPos => NormValue::from_int(count as i64),
        }
    }
}

/// The trivial creating pair over a base system: Σ on a single creature is
/// every nonempty val-subset (with the norm recomputed by the rule); Σ on
/// two or more creatures is empty.
pub struct TrivialPair {
    pub base: BaseSystem,
    pub rule: NormRule,
}

impl TrivialPair {
    pub fn new(base: BaseSystem, rule: NormRule) -> Self {
        TrivialPair { base, rule }
    }

    fn renorm(&self, val: BTreeSet<(crate::base::FinSeq, crate::base::FinSeq)>) -> WeakCreature {
        WeakCreature::new(self.rule.apply(val.len()), val)
    }
}

impl CreatingPairInstance for TrivialPair {
    fn base(&self) -> &BaseSystem {
        &self.base
    }

    fn is_member(&self, t: &WeakCreature) -> bool {
        let report = crate::creature::validate_weak_creature(t, &self.base);
        report.valid && t.nor == self.rule.apply(t.val.len()) && t.dis.is_null()
    }

    fn sigma(&self, s: &[WeakCreature]) -> SigmaResult {
        match s {
            [] => SigmaResult::empty(),
            [t] => {
                let pairs: Vec<_> = t.val.iter().cloned().collect();
                if pairs.len() > 20 {
                    // subset blow-up; report the identity as a sound partial list
                    return SigmaResult {
                        creatures: vec![t.clone()],
                        complete: false,
                    };
                }
                let mut out = BTreeSet::new();
                for mask in 1u64..(1 << pairs.len()) {
                    let subset: BTreeSet<_> = pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, p)| p.clone())
                        .collect();
                    out.insert(self.renorm(subset));
                }
                SigmaResult::complete(out.into_iter().collect())
            }
            _ => SigmaResult::empty(),
        }
    }

    fn norm(&self, t: &WeakCreature) -> Result<NormValue, PairError> {
        Ok(self.rule.apply(t.val.len()))
    }
}
