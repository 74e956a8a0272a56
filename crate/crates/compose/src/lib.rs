//! Constructors for derived creatures: the interval shift, sums, indexed
//! sums with a norm-combining function, and tree-sums over a prefix system.
//! Every constructor tags the result's dis with a provenance term so the
//! originating operation and parameters can be read back.

use creature_core::{
    BaseError, BaseSystem, Creature, CreatureError, FinSeq, NormError, NormValue, Token,
    TreeCreature, WeakCreature,
};
use num::BigInt;
use prenorms::{PreNorm, PreNormError};
use quasitree::{TreeConditionPrefix, TreeError};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum ComposeError {
    #[error("the construction yields an empty val")]
    EmptyVal,
    #[error("bad interval [{m0},{m1}) for a creature on [{m_dn},{m_up})")]
    BadInterval {
        m0: usize,
        m1: usize,
        m_dn: usize,
        m_up: usize,
    },
    #[error("creature {i} does not stack onto the next: up {up} vs dn {dn} (tight: {tight})")]
    BadStacking {
        i: usize,
        up: usize,
        dn: usize,
        tight: bool,
    },
    #[error("no creatures given")]
    EmptyInput,
    #[error("bad norm-combining descriptor: {0}")]
    BadDescriptor(String),
    #[error("tree system rejected: {0}")]
    SystemInvalid(String),
    #[error("growth-function norm is unbounded (g vanishes beyond the norm range)")]
    UnboundedNorm,
    #[error(transparent)]
    Creature(#[from] CreatureError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    PreNorm(#[from] PreNormError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn is_zero_at(sys: &BaseSystem, i: usize, token: &Token) -> bool {
    sys.zero.get(i).is_some_and(|z| z == token)
}

/// Exact minimum of a nonempty list of norm values.
pub fn min_norm(values: &[NormValue]) -> Result<NormValue, ComposeError> {
    let mut best = values
        .first()
        .ok_or_else(|| ComposeError::BadDescriptor("minimum of no values".into()))?;
    for v in &values[1..] {
        if v.try_cmp(best)? == Ordering::Less {
            best = v;
        }
    }
    Ok(best.clone())
}

/// The interval shift t↾[m0,m1): same norm, val padded with zero letters
/// outside the original interval; pairs whose prefix part is nonzero on
/// [m0, m_dn) cannot survive and are dropped.
pub fn rsh(t: &Creature, m0: usize, m1: usize, sys: &BaseSystem) -> Result<Creature, ComposeError> {
    if m0 > t.m_dn || t.m_up > m1 {
        return Err(ComposeError::BadInterval {
            m0,
            m1,
            m_dn: t.m_dn,
            m_up: t.m_up,
        });
    }
    let mut val = BTreeSet::new();
    for (u, v) in &t.wc.val {
        if !(m0..t.m_dn).all(|i| is_zero_at(sys, i, &u.0[i])) {
            continue;
        }
        val.insert((u.restrict(m0), sys.zero_extend(v, m1)?));
    }
    if val.is_empty() {
        return Err(ComposeError::EmptyVal);
    }
    let wc = WeakCreature::new(t.wc.nor.clone(), val)
        .with_dis(json!([4, m0, m1, t.wc.dis]));
    Ok(Creature::try_new(wc, sys)?)
}

fn check_stacking(ts: &[Creature], tight: bool) -> Result<(), ComposeError> {
    if ts.is_empty() {
        return Err(ComposeError::EmptyInput);
    }
    for i in 0..ts.len() - 1 {
        let (up, dn) = (ts[i].m_up, ts[i + 1].m_dn);
        if up > dn || (tight && up != dn) {
            return Err(ComposeError::BadStacking { i, up, dn, tight });
        }
    }
    Ok(())
}

/// Concatenations of one val pair per creature, with zero letters filling
/// the gaps between consecutive intervals. `skip` marks creatures whose
/// whole block is forced to zero instead of a val pair.
fn chained_val(
    ts: &[Creature],
    skip: &dyn Fn(usize) -> bool,
    sys: &BaseSystem,
) -> Result<BTreeSet<(FinSeq, FinSeq)>, ComposeError> {
    // candidates carry the long component built so far; the short one is
    // its restriction at the end
    let mut cands: Vec<FinSeq> = if skip(0) {
        sys.all_seqs(ts[0].m_dn)?
            .into_iter()
            .map(|w| sys.zero_extend(&w, ts[0].m_up))
            .collect::<Result<_, _>>()?
    } else {
        ts[0].wc.val.iter().map(|(_, v)| v.clone()).collect()
    };
    for (i, t) in ts.iter().enumerate().skip(1) {
        let mut next = Vec::new();
        for prefix in &cands {
            let padded = sys.zero_extend(prefix, t.m_dn)?;
            if skip(i) {
                next.push(sys.zero_extend(&padded, t.m_up)?);
            } else {
                for (u, v) in &t.wc.val {
                    if *u == padded {
                        next.push(v.clone());
                    }
                }
            }
        }
        cands = next;
        if cands.is_empty() {
            break;
        }
    }
    Ok(cands
        .into_iter()
        .map(|h2| (h2.restrict(ts[0].m_dn), h2))
        .collect())
}

/// The sum of stacked creatures: val pairs are the compatible
/// concatenations, the norm is the exact minimum.
pub fn sum(ts: &[Creature], tight: bool, sys: &BaseSystem) -> Result<Creature, ComposeError> {
    check_stacking(ts, tight)?;
    let val = chained_val(ts, &|_| false, sys)?;
    if val.is_empty() {
        return Err(ComposeError::EmptyVal);
    }
    let norms: Vec<NormValue> = ts.iter().map(|t| t.wc.nor.clone()).collect();
    let nor = min_norm(&norms)?;
    let mut dis = vec![json!(0)];
    dis.extend(ts.iter().map(|t| t.wc.dis.clone()));
    let wc = WeakCreature::new(nor, val).with_dis(serde_json::Value::Array(dis));
    Ok(Creature::try_new(wc, sys)?)
}

/// A norm-combining function over an index set: plain minimum, or the
/// capped minimum generated by a pre-norm (the cap is the pre-norm's value
/// on the index set itself).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DFunction {
    Min {
        u: BTreeSet<usize>,
    },
    Capped {
        u: BTreeSet<usize>,
        h: PreNorm,
        cap: NormValue,
    },
}

impl DFunction {
    pub fn min(u: impl IntoIterator<Item = usize>) -> Self {
        DFunction::Min {
            u: u.into_iter().collect(),
        }
    }

    /// Build the capped minimum from a pre-norm: indices name carrier
    /// tokens by their decimal form, and the cap H(u) must be positive.
    pub fn from_prenorm(
        h: PreNorm,
        u: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ComposeError> {
        let u: BTreeSet<usize> = u.into_iter().collect();
        let tokens: BTreeSet<Token> = u.iter().map(|i| i.to_string()).collect();
        let cap = h.eval(&tokens)?;
        if !cap.is_positive_value() {
            return Err(ComposeError::BadDescriptor(format!(
                "pre-norm value on {u:?} is not positive"
            )));
        }
        Ok(DFunction::Capped { u, h, cap })
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        match self {
            DFunction::Min { u } | DFunction::Capped { u, .. } => u,
        }
    }

    /// Apply to the norm tuple of the summands (indexed by position).
    pub fn apply(&self, norms: &[NormValue]) -> Result<NormValue, ComposeError> {
        let u = self.indices();
        if let Some(&bad) = u.iter().find(|&&i| i >= norms.len()) {
            return Err(ComposeError::BadDescriptor(format!(
                "index {bad} outside the {} summands",
                norms.len()
            )));
        }
        let mut picked: Vec<NormValue> = u.iter().map(|&i| norms[i].clone()).collect();
        match self {
            DFunction::Min { .. } => min_norm(&picked),
            DFunction::Capped { cap, .. } => {
                picked.push(cap.clone());
                min_norm(&picked)
            }
        }
    }
}

/// The (d,u)-sum: like `sum`, but creatures outside u contribute a forced
/// zero block instead of a val pair, and the norm is d of the u-norms.
pub fn dsum(d: &DFunction, ts: &[Creature], sys: &BaseSystem) -> Result<Creature, ComposeError> {
    check_stacking(ts, false)?;
    if let Some(&bad) = d.indices().iter().find(|&&i| i >= ts.len()) {
        return Err(ComposeError::BadDescriptor(format!(
            "index {bad} outside the {} summands",
            ts.len()
        )));
    }
    let val = chained_val(ts, &|i| !d.indices().contains(&i), sys)?;
    if val.is_empty() {
        return Err(ComposeError::EmptyVal);
    }
    let norms: Vec<NormValue> = ts.iter().map(|t| t.wc.nor.clone()).collect();
    let nor = d.apply(&norms)?;
    let mut dis = vec![
        json!(1),
        serde_json::to_value(d).expect("descriptor serializes"),
        json!(d.indices().iter().collect::<Vec<_>>()),
    ];
    dis.extend(ts.iter().map(|t| t.wc.dis.clone()));
    let wc = WeakCreature::new(nor, val).with_dis(serde_json::Value::Array(dis));
    Ok(Creature::try_new(wc, sys)?)
}

/// Norm growth requirement for the special tree-sum: g(k) is read from the
/// table, and `default` beyond it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthFn {
    pub table: Vec<u64>,
    pub default: u64,
}

impl GrowthFn {
    pub fn constant(c: u64) -> Self {
        GrowthFn {
            table: Vec::new(),
            default: c,
        }
    }

    pub fn get(&self, k: u64) -> u64 {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.table.get(k).copied())
            .unwrap_or(self.default)
    }
}

/// The tree-sum of a prefix system: val jumps from the root of the carrier
/// tree straight to its maximal nodes. Without g the norm is the least
/// node norm among those >= 1 (0 if there is none); with g it is the
/// largest k such that every maximal branch passes through at least g(k)
/// interior nodes of norm >= k.
pub fn tsum(
    system: &TreeConditionPrefix,
    g: Option<&GrowthFn>,
    sys: &BaseSystem,
) -> Result<TreeCreature, ComposeError> {
    let root = system.tree.root()?.clone();
    let interior: BTreeMap<&FinSeq, &TreeCreature> =
        system.creatures.iter().map(|(k, v)| (k, v)).collect();
    if interior.is_empty() {
        return Err(ComposeError::SystemInvalid(
            "no interior nodes to sum over".into(),
        ));
    }
    let max_nodes = system.tree.max_nodes();
    let val: BTreeSet<(FinSeq, FinSeq)> = max_nodes
        .iter()
        .map(|eta| (root.clone(), eta.clone()))
        .collect();
    if val.is_empty() {
        return Err(ComposeError::EmptyVal);
    }
    let (nor, dis) = match g {
        None => {
            let mut big: Vec<NormValue> = Vec::new();
            for s in interior.values() {
                if s.wc.nor.try_cmp(&NormValue::from_int(1))? != Ordering::Less {
                    big.push(s.wc.nor.clone());
                }
            }
            let nor = if big.is_empty() {
                NormValue::zero()
            } else {
                min_norm(&big)?
            };
            let mut dis = vec![json!(2)];
            dis.extend(
                interior
                    .values()
                    .map(|s| serde_json::to_value(s).expect("creature serializes")),
            );
            (nor, serde_json::Value::Array(dis))
        }
        Some(g) => {
            // per-branch interior norms, as floors are not enough: compare
            // each norm against k exactly
            let branch_norms: Vec<Vec<&NormValue>> = max_nodes
                .iter()
                .map(|eta| {
                    (0..eta.len())
                        .filter_map(|l| interior.get(&eta.restrict(l)).map(|s| &s.wc.nor))
                        .collect()
                })
                .collect();
            // beyond both the norm range and the table, the requirement
            // reads "0 >= default": a zero default qualifies every large k
            // and the maximum does not exist
            if g.default == 0 {
                return Err(ComposeError::UnboundedNorm);
            }
            let mut ceiling: u64 = 0;
            for s in interior.values() {
                let f = s.wc.nor.floor_int().max(BigInt::from(0));
                let f = u64::try_from(f).map_err(|_| ComposeError::UnboundedNorm)?;
                ceiling = ceiling.max(f + 1);
            }
            let k_stop = ceiling.max(g.table.len() as u64) + 1;
            let mut nor = 0u64;
            for k in 0..=k_stop {
                let need = g.get(k);
                let ok = need == 0
                    || branch_norms.iter().all(|norms| {
                        let count = norms
                            .iter()
                            .filter(|v| {
                                matches!(
                                    v.try_cmp(&NormValue::from_int(k as i64)),
                                    Ok(Ordering::Greater) | Ok(Ordering::Equal)
                                )
                            })
                            .count() as u64;
                        count >= need
                    });
                if ok {
                    nor = k;
                }
            }
            let mut dis = vec![json!(3), serde_json::to_value(g).expect("table serializes")];
            dis.extend(interior.values().map(|s| s.wc.dis.clone()));
            (NormValue::from_int(nor as i64), serde_json::Value::Array(dis))
        }
    };
    let wc = WeakCreature::new(nor, val).with_dis(dis);
    Ok(TreeCreature::try_new(wc, sys)?)
}
