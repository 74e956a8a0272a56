//! Pre-norms as evaluable objects: a finite carrier plus a total valuation
//! of its subsets, with monotonicity, normalization, and niceness checks.

use crate::dp::{dp0_shifted, dp1, dp2, Dp1Cache, DpError};
use crate::hn::h_n;
use crate::oracle::SetFam;
use creature_core::{NormError, NormValue, Token};
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PreNormError {
    #[error("token {0:?} is not in the carrier")]
    UnknownToken(Token),
    #[error("table is missing an entry for subset {0:?}")]
    MissingTableEntry(Vec<Token>),
    #[error("truncation amount out of range: need 0 < r < H(carrier)")]
    TruncationOutOfRange,
    #[error("carrier of size {0} exceeds the scan budget {1}")]
    BudgetExceeded(usize, usize),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("h_N member equals the whole base set")]
    MemberEqualsBase,
}

/// A pre-norm: named carrier elements and a rule valuing each subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PreNorm {
    /// Explicit table: one value per subset, keyed by sorted token list.
    Table {
        carrier: Vec<Token>,
        values: Vec<(Vec<Token>, NormValue)>,
    },
    /// log_{2+shift} of the subset's cardinality.
    Dp0 { carrier: Vec<Token>, shift: u32 },
    /// Split norm of the named sets, optionally log-shifted.
    Dp1 {
        sets: BTreeMap<Token, BTreeSet<u64>>,
        shift: Option<u32>,
    },
    /// Minimum-transversal norm of the named sets, optionally log-shifted.
    Dp2 {
        sets: BTreeMap<Token, BTreeSet<u64>>,
        shift: Option<u32>,
    },
    /// Covering norm over a base set of size n: log2(1 + max k such that
    /// every k-subset of the base lies inside some named set).
    Hn {
        n: u64,
        sets: BTreeMap<Token, BTreeSet<u64>>,
    },
    /// max{0, inner(B) - r}.
    Truncate { r: NormValue, inner: Box<PreNorm> },
}

impl PreNorm {
    pub fn carrier(&self) -> Vec<Token> {
        match self {
            PreNorm::Table { carrier, .. } | PreNorm::Dp0 { carrier, .. } => carrier.clone(),
            PreNorm::Dp1 { sets, .. } | PreNorm::Dp2 { sets, .. } | PreNorm::Hn { sets, .. } => {
                sets.keys().cloned().collect()
            }
            PreNorm::Truncate { inner, .. } => inner.carrier(),
        }
    }

    pub fn eval(&self, subset: &BTreeSet<Token>) -> Result<NormValue, PreNormError> {
        let carrier: BTreeSet<Token> = self.carrier().into_iter().collect();
        for t in subset {
            if !carrier.contains(t) {
                return Err(PreNormError::UnknownToken(t.clone()));
            }
        }
        match self {
            PreNorm::Table { values, .. } => {
                let key: Vec<Token> = subset.iter().cloned().collect();
                values
                    .iter()
                    .find(|(k, _)| {
                        let mut k = k.clone();
                        k.sort();
                        k.dedup();
                        k == key
                    })
                    .map(|(_, v)| v.clone())
                    .ok_or(PreNormError::MissingTableEntry(key))
            }
            PreNorm::Dp0 { shift, .. } => {
                if subset.is_empty() {
                    // empty set valued 0 so the pre-norm is total
                    return Ok(NormValue::zero());
                }
                Ok(dp0_shifted(subset.len() as u64, *shift)?)
            }
            PreNorm::Dp1 { sets, shift } => {
                let fam: SetFam = subset.iter().map(|t| sets[t].clone()).collect();
                let raw = dp1(&fam, &mut Dp1Cache::new()).map_err(DpError::from)?;
                shifted_value(raw, *shift)
            }
            PreNorm::Dp2 { sets, shift } => {
                if subset.is_empty() {
                    return Ok(NormValue::zero());
                }
                let fam: SetFam = subset.iter().map(|t| sets[t].clone()).collect();
                let raw = dp2(&fam).map_err(DpError::from)?;
                shifted_value(raw, *shift)
            }
            PreNorm::Hn { n, sets } => {
                let fam: SetFam = subset.iter().map(|t| sets[t].clone()).collect();
                h_n(*n, &fam).map_err(|_| PreNormError::MemberEqualsBase)
            }
            PreNorm::Truncate { r, inner } => {
                let v = inner.eval(subset)?;
                Ok(truncated(&v, r))
            }
        }
    }
}

fn shifted_value(raw: u64, shift: Option<u32>) -> Result<NormValue, PreNormError> {
    match shift {
        None => Ok(NormValue::from_int(raw as i64)),
        Some(n) => {
            if raw == 0 {
                // max{0, log} convention keeps pre-norms total on subsets
                return Ok(NormValue::zero());
            }
            Ok(NormValue::log(BigInt::from(raw), 2 + n))
        }
    }
}

fn truncated(v: &NormValue, r: &NormValue) -> NormValue {
    match v.try_sub(r) {
        Some(d) => d.max_zero(),
        None => {
            // different log families: decide the sign exactly, then keep the
            // difference symbolic via interval refinement is not needed;
            // truncation only ever subtracts a rational in this workbench
            let r_exact = r
                .as_exact()
                .expect("truncation amounts are rational or same-family");
            v.sub_rat(r_exact).max_zero()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreNormViolation {
    pub clause: String,
    pub b: Vec<Token>,
    pub c: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreNormVerdict {
    pub holds: bool,
    pub mode: String,
    pub violation: Option<PreNormViolation>,
}

pub const CHECK_BUDGET_CARRIER: usize = 12;

/// Verify the pre-norm clauses over the whole power set of the carrier:
/// monotone, positive on the carrier, at most 1 on singletons; in nice mode
/// additionally the split clause: B ⊆ C with H(C) > 1 forces H(B) or
/// H(C∖B) to be at least H(C) − 1.
pub fn check_prenorm(h: &PreNorm, nice: bool) -> Result<PreNormVerdict, PreNormError> {
    let carrier = h.carrier();
    if carrier.len() > CHECK_BUDGET_CARRIER {
        return Err(PreNormError::BudgetExceeded(
            carrier.len(),
            CHECK_BUDGET_CARRIER,
        ));
    }
    let mode = if nice { "nice" } else { "plain" };
    let n = carrier.len();
    let subset_of = |mask: u64| -> BTreeSet<Token> {
        carrier
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| t.clone())
            .collect()
    };
    let mut values: Vec<NormValue> = Vec::with_capacity(1 << n);
    for mask in 0..(1u64 << n) {
        values.push(h.eval(&subset_of(mask))?);
    }
    let fail = |clause: &str, bm: u64, cm: u64| PreNormVerdict {
        holds: false,
        mode: mode.to_owned(),
        violation: Some(PreNormViolation {
            clause: clause.to_owned(),
            b: subset_of(bm).into_iter().collect(),
            c: subset_of(cm).into_iter().collect(),
        }),
    };
    let full = (1u64 << n) - 1;
    let one = BigRational::one();
    let zero = BigRational::zero();
    if values[full as usize].cmp_rational(&zero)? != Ordering::Greater {
        return Ok(fail("H(carrier) > 0", full, full));
    }
    for i in 0..n {
        let m = 1u64 << i;
        if values[m as usize].cmp_rational(&one)? == Ordering::Greater {
            return Ok(fail("H(singleton) <= 1", m, m));
        }
    }
    // scan all B ⊆ C pairs by iterating C and its submasks
    for cm in 0..=full {
        let hc = &values[cm as usize];
        let mut bm = cm;
        loop {
            let hb = &values[bm as usize];
            if hb.try_cmp(hc)? == Ordering::Greater {
                return Ok(fail("monotone", bm, cm));
            }
            if nice && hc.cmp_rational(&one)? == Ordering::Greater {
                let rest = &values[(cm & !bm) as usize];
                let floor_c = hc.sub_rat(&one);
                let b_ok = hb.try_cmp(&floor_c)? != Ordering::Less;
                let rest_ok = rest.try_cmp(&floor_c)? != Ordering::Less;
                if !b_ok && !rest_ok {
                    return Ok(fail("split: H(B) or H(C∖B) >= H(C)-1", bm, cm));
                }
            }
            if bm == 0 {
                break;
            }
            bm = (bm - 1) & cm;
        }
    }
    Ok(PreNormVerdict {
        holds: true,
        mode: mode.to_owned(),
        violation: None,
    })
}

/// H^r with eval(B) = max{0, H(B) − r}; requires 0 < r < H(carrier).
pub fn truncate(h: &PreNorm, r: NormValue) -> Result<PreNorm, PreNormError> {
    let full: BTreeSet<Token> = h.carrier().into_iter().collect();
    let top = h.eval(&full)?;
    let zero = BigRational::zero();
    let r_positive = r.cmp_rational(&zero)? == Ordering::Greater;
    let below_top = r.try_cmp(&top)? == Ordering::Less;
    if !r_positive || !below_top {
        return Err(PreNormError::TruncationOutOfRange);
    }
    Ok(PreNorm::Truncate {
        r,
        inner: Box::new(h.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(n: usize) -> Vec<Token> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn dp0_prenorm_is_nice() {
        let h = PreNorm::Dp0 {
            carrier: toks(4),
            shift: 0,
        };
        let v = check_prenorm(&h, true).unwrap();
        assert!(v.holds, "{:?}", v.violation);
    }

    #[test]
    fn oversized_singleton_fails_plain() {
        let h = PreNorm::Table {
            carrier: vec!["a".into()],
            values: vec![
                (vec![], NormValue::zero()),
                (vec!["a".into()], NormValue::from_int(2)),
            ],
        };
        let v = check_prenorm(&h, false).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violation.unwrap().clause, "H(singleton) <= 1");
    }

    #[test]
    fn truncated_dp0_is_nice_and_clamps() {
        let h = PreNorm::Dp0 {
            carrier: toks(8),
            shift: 0,
        };
        let hr = truncate(&h, NormValue::from_int(1)).unwrap();
        let full: BTreeSet<Token> = toks(8).into_iter().collect();
        assert_eq!(hr.eval(&full).unwrap(), NormValue::from_int(2));
        let small: BTreeSet<Token> = toks(2).into_iter().collect();
        // log2(2) - 1 = 0
        assert_eq!(hr.eval(&small).unwrap(), NormValue::zero());
        let v = check_prenorm(&hr, true).unwrap();
        assert!(v.holds, "{:?}", v.violation);
    }

    #[test]
    fn truncation_range_is_enforced() {
        let h = PreNorm::Dp0 {
            carrier: toks(8),
            shift: 0,
        };
        assert_eq!(
            truncate(&h, NormValue::zero()).unwrap_err(),
            PreNormError::TruncationOutOfRange
        );
        assert_eq!(
            truncate(&h, NormValue::from_int(3)).unwrap_err(),
            PreNormError::TruncationOutOfRange
        );
        assert!(truncate(&h, NormValue::Exact(BigRational::new(
            BigInt::from(1),
            BigInt::from(2)
        )))
        .is_ok());
    }

    #[test]
    fn dp1_prenorm_evaluates_named_families() {
        let mut sets = BTreeMap::new();
        for (name, pair) in [("p01", (0, 1)), ("p12", (1, 2)), ("p02", (0, 2))] {
            sets.insert(
                name.to_string(),
                [pair.0 as u64, pair.1 as u64].into_iter().collect(),
            );
        }
        let h = PreNorm::Dp1 { sets, shift: None };
        let all: BTreeSet<Token> = h.carrier().into_iter().collect();
        // triangle family has split norm 1: isolating vertex 0 leaves
        // {1,2} on one side
        assert_eq!(h.eval(&all).unwrap(), NormValue::from_int(1));
        assert_eq!(h.eval(&BTreeSet::new()).unwrap(), NormValue::zero());
    }

    #[test]
    fn budget_guard_trips() {
        let h = PreNorm::Dp0 {
            carrier: toks(13),
            shift: 0,
        };
        assert!(matches!(
            check_prenorm(&h, false),
            Err(PreNormError::BudgetExceeded(13, _))
        ));
    }
}
