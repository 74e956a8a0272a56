//! Norm-condition evaluation on finite prefixes of creature sequences.
//! The s-infinity and f-indexed conditions yield per-index verdicts; the
//! infinity and weak-infinity conditions are tail conditions, so a prefix
//! only ever yields evidence.

use crate::creature::WeakCreature;
use crate::norm::{NormError, NormValue};
use num::rational::BigRational;
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A two-argument integer function given by a finite table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntFn2 {
    /// entries [k, l, value]; value a decimal string to allow big integers
    pub entries: Vec<(u64, u64, String)>,
}

impl IntFn2 {
    pub fn from_fn(f: impl Fn(u64, u64) -> BigInt, k_max: u64, l_max: u64) -> Self {
        let mut entries = Vec::new();
        for k in 0..=k_max {
            for l in 0..=l_max {
                entries.push((k, l, f(k, l).to_string()));
            }
        }
        IntFn2 { entries }
    }

    pub fn get(&self, k: u64, l: u64) -> Option<BigInt> {
        self.entries
            .iter()
            .find(|(ek, el, _)| *ek == k && *el == l)
            .and_then(|(_, _, v)| v.parse().ok())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormConditionKind {
    SInfty,
    Infty,
    WInfty,
    F { f: IntFn2, k_max: u64 },
    Empty,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CondError {
    #[error("f-table has no entry at ({0}, {1})")]
    MissingTableEntry(u64, u64),
    #[error(transparent)]
    Norm(#[from] NormError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexVerdict {
    pub index: usize,
    pub holds: bool,
    pub threshold: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub kind: String,
    /// Some for decidable kinds; None for tail conditions on a prefix.
    pub verdict: Option<bool>,
    pub note: Option<String>,
    pub per_index: Vec<IndexVerdict>,
    /// f-kind: for each k, how many prefix indices fail nor > f(k, m_dn).
    pub failure_counts: BTreeMap<u64, u64>,
    pub min_nor: Option<NormValue>,
    pub max_nor: Option<NormValue>,
}

impl ConditionReport {
    fn new(kind: &str) -> Self {
        ConditionReport {
            kind: kind.to_owned(),
            verdict: None,
            note: None,
            per_index: Vec::new(),
            failure_counts: BTreeMap::new(),
            min_nor: None,
            max_nor: None,
        }
    }
}

fn m_dn_of(t: &WeakCreature) -> usize {
    t.dn_lengths().into_iter().next().unwrap_or(0)
}

pub fn norm_condition_check(
    kind: &NormConditionKind,
    prefix: &[WeakCreature],
) -> Result<ConditionReport, CondError> {
    match kind {
        NormConditionKind::Empty => {
            let mut r = ConditionReport::new("empty");
            r.verdict = Some(true);
            Ok(r)
        }
        NormConditionKind::SInfty => {
            let mut r = ConditionReport::new("sInfty");
            let mut all = true;
            for (i, t) in prefix.iter().enumerate() {
                let bound = i.max(m_dn_of(t));
                let holds = t
                    .nor
                    .cmp_rational(&BigRational::from_integer(BigInt::from(bound)))?
                    == Ordering::Greater;
                all &= holds;
                r.per_index.push(IndexVerdict {
                    index: i,
                    holds,
                    threshold: format!("max{{{i}, {}}} = {bound}", m_dn_of(t)),
                });
            }
            r.verdict = Some(all && !prefix.is_empty());
            if prefix.is_empty() {
                r.verdict = None;
                r.note = Some("empty prefix".to_owned());
            }
            Ok(r)
        }
        NormConditionKind::F { f, k_max } => {
            let mut r = ConditionReport::new("f");
            for k in 0..=*k_max {
                let mut failures = 0u64;
                for t in prefix {
                    let l = m_dn_of(t) as u64;
                    let bound = f
                        .get(k, l)
                        .ok_or(CondError::MissingTableEntry(k, l))?;
                    let holds = t
                        .nor
                        .cmp_rational(&BigRational::from_integer(bound))?
                        == Ordering::Greater;
                    if !holds {
                        failures += 1;
                    }
                }
                r.failure_counts.insert(k, failures);
            }
            r.note = Some(
                "tail condition: finite failure counts are prefix evidence, not a verdict"
                    .to_owned(),
            );
            Ok(r)
        }
        NormConditionKind::Infty | NormConditionKind::WInfty => {
            let name = if matches!(kind, NormConditionKind::Infty) {
                "infty"
            } else {
                "wInfty"
            };
            let mut r = ConditionReport::new(name);
            let mut min: Option<NormValue> = None;
            let mut max: Option<NormValue> = None;
            for t in prefix {
                min = Some(match min {
                    None => t.nor.clone(),
                    Some(m) => {
                        if t.nor.try_cmp(&m)? == Ordering::Less {
                            t.nor.clone()
                        } else {
                            m
                        }
                    }
                });
                max = Some(match max {
                    None => t.nor.clone(),
                    Some(m) => {
                        if t.nor.try_cmp(&m)? == Ordering::Greater {
                            t.nor.clone()
                        } else {
                            m
                        }
                    }
                });
            }
            r.min_nor = min;
            r.max_nor = max;
            r.note = Some("prefix evidence, not a verdict".to_owned());
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::creature::creature_from_pairs;

    fn creature(nor: i64, m_dn: usize) -> WeakCreature {
        let u: Vec<String> = (0..m_dn).map(|_| "0".to_owned()).collect();
        let mut v = u.clone();
        v.push("0".to_owned());
        creature_from_pairs(
            NormValue::from_int(nor),
            [(crate::base::FinSeq(u), crate::base::FinSeq(v))],
            serde_json::Value::Null,
        )
    }

    #[test]
    fn s_infty_per_index() {
        // index 0: nor 1 > max{0,0} holds
        let r = norm_condition_check(&NormConditionKind::SInfty, &[creature(1, 0)]).unwrap();
        assert_eq!(r.verdict, Some(true));
        assert!(r.per_index[0].holds);

        // index 2 with nor 2, m_dn 3 fails: 2 > max{2,3} is false
        let prefix = [creature(1, 0), creature(9, 1), creature(2, 3)];
        let r = norm_condition_check(&NormConditionKind::SInfty, &prefix).unwrap();
        assert_eq!(r.verdict, Some(false));
        assert!(r.per_index[0].holds && r.per_index[1].holds);
        assert!(!r.per_index[2].holds);
    }

    #[test]
    fn w_infty_reports_evidence_only() {
        let prefix = [creature(1, 1), creature(2, 2), creature(3, 3)];
        let r = norm_condition_check(&NormConditionKind::WInfty, &prefix).unwrap();
        assert_eq!(r.verdict, None);
        assert_eq!(r.max_nor, Some(NormValue::from_int(3)));
        assert_eq!(r.min_nor, Some(NormValue::from_int(1)));
        assert_eq!(r.note.as_deref(), Some("prefix evidence, not a verdict"));
    }

    #[test]
    fn f_condition_counts_failures() {
        let f = IntFn2::from_fn(|k, l| BigInt::from(k + l), 2, 4);
        let prefix = [creature(1, 0), creature(1, 1), creature(5, 2)];
        let kind = NormConditionKind::F { f, k_max: 2 };
        let r = norm_condition_check(&kind, &prefix).unwrap();
        assert_eq!(r.verdict, None);
        // k=0: bounds 0,1,2 vs nor 1,1,5 -> failures at index 1 (1>1 false)
        assert_eq!(r.failure_counts[&0], 1);
        // k=1: bounds 1,2,3 -> indices 0,1 fail
        assert_eq!(r.failure_counts[&1], 2);
        // k=2: bounds 2,3,4 -> indices 0,1 fail, 5>4 holds
        assert_eq!(r.failure_counts[&2], 2);
    }

    #[test]
    fn empty_kind_always_holds() {
        let r = norm_condition_check(&NormConditionKind::Empty, &[]).unwrap();
        assert_eq!(r.verdict, Some(true));
    }
}
