//! Weak creatures: a norm, a nonempty set of prefix-extension pairs over a
//! base system, and an opaque distinction payload.

use crate::base::{BaseSystem, FinSeq};
use crate::norm::NormValue;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakCreature {
    pub nor: NormValue,
    /// Pairs (u, v) with u a strict prefix of v.
    pub val: BTreeSet<(FinSeq, FinSeq)>,
    /// Opaque payload distinguishing otherwise equal creatures.
    #[serde(default)]
    pub dis: serde_json::Value,
}

impl WeakCreature {
    pub fn new(nor: NormValue, val: BTreeSet<(FinSeq, FinSeq)>) -> Self {
        WeakCreature {
            nor,
            val,
            dis: serde_json::Value::Null,
        }
    }

    pub fn with_dis(mut self, dis: serde_json::Value) -> Self {
        self.dis = dis;
        self
    }

    /// Canonical string form; doubles as a total order key. serde_json maps
    /// keep sorted keys, so equal creatures always print identically.
    pub fn canonical_key(&self) -> String {
        serde_json::to_string(self).expect("creature serializes")
    }

    /// Lengths of the first components of val.
    pub fn dn_lengths(&self) -> BTreeSet<usize> {
        self.val.iter().map(|(u, _)| u.len()).collect()
    }

    /// Lengths of the second components of val.
    pub fn up_lengths(&self) -> BTreeSet<usize> {
        self.val.iter().map(|(_, v)| v.len()).collect()
    }
}

impl PartialOrd for WeakCreature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeakCreature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

/// Outcome of validating a weak creature against a base system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
    /// True when all pairs share one dn-length and one up-length.
    pub is_creature: bool,
    pub m_dn: Option<usize>,
    pub m_up: Option<usize>,
    /// True when all first components are one common root.
    pub is_tree_creature: bool,
    pub root: Option<FinSeq>,
}

pub fn validate_weak_creature(wc: &WeakCreature, sys: &BaseSystem) -> ValidationReport {
    let mut violations = Vec::new();
    if wc.val.is_empty() {
        violations.push("val empty".to_owned());
    }
    for (u, v) in &wc.val {
        if !u.is_strict_prefix_of(v) {
            violations.push(format!("not a prefix pair: ({u}, {v})"));
        }
        for seq in [u, v] {
            if let Err(e) = sys.check_seq(seq) {
                violations.push(format!("sequence {seq} outside base system: {e}"));
            }
        }
    }
    let dn = wc.dn_lengths();
    let up = wc.up_lengths();
    let is_creature = !wc.val.is_empty() && dn.len() == 1 && up.len() == 1;
    let (m_dn, m_up) = if is_creature {
        (dn.iter().next().copied(), up.iter().next().copied())
    } else {
        (None, None)
    };
    let roots: BTreeSet<&FinSeq> = wc.val.iter().map(|(u, _)| u).collect();
    let branches: Vec<&FinSeq> = wc.val.iter().map(|(_, v)| v).collect();
    let antichain = branches.iter().enumerate().all(|(i, a)| {
        branches[i + 1..]
            .iter()
            .all(|b| a != b && !a.is_strict_prefix_of(b) && !b.is_strict_prefix_of(a))
    });
    let is_tree_creature = !wc.val.is_empty() && roots.len() == 1 && antichain;
    let root = if is_tree_creature {
        roots.iter().next().map(|r| (*r).clone())
    } else {
        None
    };
    ValidationReport {
        valid: violations.is_empty(),
        violations,
        is_creature,
        m_dn,
        m_up,
        is_tree_creature,
        root,
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CreatureError {
    #[error("not a creature: {0}")]
    NotCreature(String),
    #[error("not a tree creature: {0}")]
    NotTreeCreature(String),
}

/// A weak creature whose val pairs all run from length m_dn to length m_up.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Creature {
    pub wc: WeakCreature,
    pub m_dn: usize,
    pub m_up: usize,
}

impl Creature {
    pub fn try_new(wc: WeakCreature, sys: &BaseSystem) -> Result<Self, CreatureError> {
        let report = validate_weak_creature(&wc, sys);
        if !report.valid {
            return Err(CreatureError::NotCreature(report.violations.join("; ")));
        }
        if !report.is_creature {
            return Err(CreatureError::NotCreature(
                "val lengths are not uniform".to_owned(),
            ));
        }
        Ok(Creature {
            m_dn: report.m_dn.unwrap(),
            m_up: report.m_up.unwrap(),
            wc,
        })
    }
}

/// A weak creature whose val pairs share one root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeCreature {
    pub wc: WeakCreature,
    pub root: FinSeq,
}

impl TreeCreature {
    pub fn try_new(wc: WeakCreature, sys: &BaseSystem) -> Result<Self, CreatureError> {
        let report = validate_weak_creature(&wc, sys);
        if !report.valid {
            return Err(CreatureError::NotTreeCreature(
                report.violations.join("; "),
            ));
        }
        if !report.is_tree_creature {
            return Err(CreatureError::NotTreeCreature(
                "val roots are not one node".to_owned(),
            ));
        }
        Ok(TreeCreature {
            root: report.root.unwrap(),
            wc,
        })
    }

    /// The extensions offered above the root.
    pub fn branches(&self) -> BTreeSet<FinSeq> {
        self.wc.val.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Convenience constructor used all over the tests: a creature from norm,
/// pair list, and dis.
pub fn creature_from_pairs(
    nor: NormValue,
    pairs: impl IntoIterator<Item = (FinSeq, FinSeq)>,
    dis: serde_json::Value,
) -> WeakCreature {
    WeakCreature {
        nor,
        val: pairs.into_iter().collect(),
        dis,
    }
}
