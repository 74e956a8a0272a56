//! The three set-family norms: cardinality, the split norm computed by
//! recursion over split sets, and the minimum-transversal norm, plus their
//! logarithmic rescalings.

use crate::oracle::{FamilyError, SetFam};
use creature_core::{NormError, NormValue};
use num::BigInt;
use std::collections::{BTreeSet, HashMap};

/// Canonical form of a family: members with the support relabeled to
/// 0..support_size in sorted order, members sorted and deduplicated.
pub fn canonical_family(family: &SetFam) -> Vec<Vec<usize>> {
    let support: Vec<u64> = family
        .iter()
        .flat_map(|a| a.iter().copied())
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    let index: HashMap<u64, usize> = support
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let mut members: Vec<Vec<usize>> = family
        .iter()
        .map(|a| a.iter().map(|e| index[e]).collect())
        .collect();
    members.sort();
    members.dedup();
    members
}

/// Memo store for the split norm, reusable across many families.
#[derive(Default)]
pub struct Dp1Cache {
    memo: HashMap<Vec<Vec<usize>>, u64>,
}

impl Dp1Cache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }
}

fn dp1_canonical(members: &[Vec<usize>], cache: &mut Dp1Cache) -> u64 {
    if members.is_empty() {
        return 0;
    }
    if let Some(&v) = cache.memo.get(members) {
        return v;
    }
    let support: BTreeSet<usize> = members.iter().flat_map(|a| a.iter().copied()).collect();
    let support: Vec<usize> = support.into_iter().collect();
    let n = support.len();
    // value = 1 + min over proper nonempty split sets X of
    //         max(value inside X, value disjoint from X);
    // X and its complement give mirrored pairs, so scan half the range.
    let mut best: Option<u64> = None;
    for mask in 1u64..(1 << (n - 1)) {
        let x: BTreeSet<usize> = support
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let inside: Vec<Vec<usize>> = members
            .iter()
            .filter(|a| a.iter().all(|e| x.contains(e)))
            .cloned()
            .collect();
        let outside: Vec<Vec<usize>> = members
            .iter()
            .filter(|a| a.iter().all(|e| !x.contains(e)))
            .cloned()
            .collect();
        let fam_of = |ms: Vec<Vec<usize>>| -> SetFam {
            ms.iter()
                .map(|a| a.iter().map(|&e| e as u64).collect())
                .collect()
        };
        let vi = dp1_canonical(&canonical_family(&fam_of(inside)), cache);
        let vo = dp1_canonical(&canonical_family(&fam_of(outside)), cache);
        let m = vi.max(vo);
        best = Some(match best {
            None => m,
            Some(b) => b.min(m),
        });
        if best == Some(0) {
            break;
        }
    }
    let v = 1 + best.expect("support of a nonempty family has a proper split");
    cache.memo.insert(members.to_vec(), v);
    v
}

/// Split norm: the largest value derivable from the inductive clauses
/// (0 always; 1 for nonempty; n+2 when every split set leaves one side of
/// the family at n+1).
pub fn dp1(family: &SetFam, cache: &mut Dp1Cache) -> Result<u64, FamilyError> {
    for a in family {
        if a.len() < 2 {
            return Err(FamilyError::MemberTooSmall(a.clone()));
        }
    }
    Ok(dp1_canonical(&canonical_family(family), cache))
}

/// Minimum transversal size, by branch and bound on the largest uncovered
/// member.
pub fn dp2(family: &SetFam) -> Result<u64, FamilyError> {
    if family.is_empty() {
        return Err(FamilyError::EmptyFamily);
    }
    for a in family {
        if a.is_empty() {
            return Err(FamilyError::EmptyMember);
        }
    }
    fn search(family: &[BTreeSet<u64>], picked: &mut BTreeSet<u64>, best: &mut u64) {
        if picked.len() as u64 >= *best {
            return;
        }
        match family
            .iter()
            .find(|a| a.is_disjoint(picked))
        {
            None => {
                *best = picked.len() as u64;
            }
            Some(uncovered) => {
                for &e in uncovered {
                    picked.insert(e);
                    search(family, picked, best);
                    picked.remove(&e);
                }
            }
        }
    }
    let mut best = family
        .iter()
        .flat_map(|a| a.iter())
        .collect::<BTreeSet<_>>()
        .len() as u64;
    let mut picked = BTreeSet::new();
    search(family, &mut picked, &mut best);
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DpError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("kind {0} is not one of 0, 1, 2")]
    BadKind(u8),
    #[error("empty set has no cardinality norm under the nonempty precondition")]
    EmptySet,
    #[error("logarithm of zero: the unshifted value is 0")]
    LogOfZero,
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// dp^i, optionally rescaled to log base 2+shift.
pub fn dp(kind: u8, family: &SetFam, shift: Option<u32>) -> Result<NormValue, DpError> {
    let raw: u64 = match kind {
        0 => {
            // the family stands for a plain set; its members are the points
            if family.is_empty() {
                return Err(DpError::EmptySet);
            }
            family.iter().collect::<BTreeSet<_>>().len() as u64
        }
        1 => dp1(family, &mut Dp1Cache::new())?,
        2 => dp2(family)?,
        k => return Err(DpError::BadKind(k)),
    };
    match shift {
        None => Ok(NormValue::from_int(raw as i64)),
        Some(n) => {
            if raw == 0 {
                return Err(DpError::LogOfZero);
            }
            Ok(NormValue::log_full(
                BigInt::from(raw),
                2 + n,
                num::rational::BigRational::from_integer(BigInt::from(1)),
                num::rational::BigRational::from_integer(BigInt::from(0)),
            )?)
        }
    }
}

/// dp^0 of a plain set of points, log-shifted: log_{2+shift}(|set|).
pub fn dp0_shifted(card: u64, shift: u32) -> Result<NormValue, DpError> {
    if card == 0 {
        return Err(DpError::LogOfZero);
    }
    Ok(NormValue::log(BigInt::from(card), 2 + shift))
}
