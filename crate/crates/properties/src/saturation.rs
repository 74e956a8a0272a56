//! Saturation with respect to a pre-norm H: every capped-minimum
//! descriptor named by the carrier must build a sum that Σ already
//! contains, and every positive-norm Σ-result of that sum must trade down
//! to a refined sum assembled from member Σ-results.

use crate::{jv, sigma_sorted, stacked_span, Fragment, PropError, Verdict};
use compose::{dsum, ComposeError, DFunction};
use creature_core::{BaseSystem, CreatingPairInstance, Creature, NormValue, Token, WeakCreature};
use prenorms::PreNorm;
use serde_json::json;
use std::collections::BTreeSet;

fn cap_of(h: &PreNorm, u: &[usize]) -> Option<NormValue> {
    let tokens: BTreeSet<Token> = u.iter().map(|i| i.to_string()).collect();
    h.eval(&tokens).ok().filter(|c| c.is_positive_value())
}

enum Search {
    Found(serde_json::Value),
    Exhausted,
    Truncated,
}

/// Look for a sub-descriptor u* of `u` and positive-norm member
/// Σ-results on u* whose sum lands inside val of `t`. Positions outside
/// u* only contribute a forced zero block, so the original members stand
/// in for them once their Σ is known to be nonempty.
#[allow(clippy::too_many_arguments)]
fn trade_down(
    h: &PreNorm,
    base: &BaseSystem,
    umask: u32,
    t: &WeakCreature,
    members: &[Creature],
    pools: &[Vec<Creature>],
    member_sig: &[Fragment<WeakCreature>],
    work: &mut u64,
    bounds: u64,
) -> Result<Search, PropError> {
    let n = members.len();
    for sub in 1..=umask {
        if sub & umask != sub {
            continue;
        }
        let u_star: Vec<usize> = (0..n).filter(|i| sub >> i & 1 == 1).collect();
        if cap_of(h, &u_star).is_none() {
            continue;
        }
        if u_star.iter().any(|&i| pools[i].is_empty()) {
            continue;
        }
        if (0..n)
            .filter(|i| sub >> i & 1 == 0)
            .any(|i| member_sig[i].items.is_empty())
        {
            continue;
        }
        let d_star = DFunction::from_prenorm(h.clone(), u_star.iter().copied())
            .map_err(|e| PropError::BadSpec(format!("descriptor on {u_star:?}: {e}")))?;
        let mut idx = vec![0usize; u_star.len()];
        loop {
            *work += 1;
            if *work > bounds {
                return Ok(Search::Truncated);
            }
            let mut tuple: Vec<Creature> = members.to_vec();
            for (slot, &i) in u_star.iter().enumerate() {
                tuple[i] = pools[i][idx[slot]].clone();
            }
            if let Ok(refined) = dsum(&d_star, &tuple, base) {
                if refined.wc.val.is_subset(&t.val) {
                    return Ok(Search::Found(json!({
                        "result": jv(t),
                        "u_star": u_star,
                        "parts": u_star
                            .iter()
                            .enumerate()
                            .map(|(slot, &i)| jv(&pools[i][idx[slot]].wc))
                            .collect::<Vec<_>>(),
                    })));
                }
            }
            let mut carried = false;
            for slot in (0..idx.len()).rev() {
                idx[slot] += 1;
                if idx[slot] < pools[u_star[slot]].len() {
                    carried = true;
                    break;
                }
                idx[slot] = 0;
            }
            if !carried {
                break;
            }
        }
    }
    Ok(Search::Exhausted)
}

/// Saturation of Σ on the tuple with respect to the pre-norm `h`.
/// Descriptors range over the index subsets the carrier names (decimal
/// tokens) with positive cap; positions they use must carry positive norm
/// for an obligation to arise. `bounds` caps the trade-down search.
pub(crate) fn saturated_wrt(
    pair: &dyn CreatingPairInstance,
    ts: &[WeakCreature],
    h: &PreNorm,
    bounds: u64,
) -> Result<Verdict, PropError> {
    if ts.is_empty() {
        return Err(PropError::BadSubject(
            "saturation needs a nonempty tuple".to_owned(),
        ));
    }
    let n = ts.len();
    if n >= 20 {
        return Err(PropError::BudgetExceeded(format!(
            "{n}-member tuples have too many descriptors"
        )));
    }
    stacked_span(ts)?;
    let base = pair.base();
    let mut members = Vec::with_capacity(n);
    for t in ts {
        members.push(Creature::try_new(t.clone(), base).map_err(|e| {
            PropError::BadSubject(format!("tuple member is not a creature: {e}"))
        })?);
    }
    let carrier: BTreeSet<Token> = h.carrier().into_iter().collect();
    let mut descriptors: Vec<(u32, Vec<usize>, DFunction)> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let u: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if u.iter().any(|i| !carrier.contains(&i.to_string())) {
            continue;
        }
        if cap_of(h, &u).is_none() {
            continue;
        }
        if u.iter().any(|&i| !ts[i].nor.is_positive_value()) {
            continue;
        }
        let d = DFunction::from_prenorm(h.clone(), u.iter().copied())
            .map_err(|e| PropError::BadSpec(format!("descriptor on {u:?}: {e}")))?;
        descriptors.push((mask, u, d));
    }
    let sig_ts = sigma_sorted(pair, ts);
    let mut bounded = !sig_ts.complete;
    let member_sig: Vec<Fragment<WeakCreature>> = ts
        .iter()
        .map(|t| sigma_sorted(pair, std::slice::from_ref(t)))
        .collect();
    let pools: Vec<Vec<Creature>> = member_sig
        .iter()
        .map(|frag| {
            frag.items
                .iter()
                .filter(|s| s.nor.is_positive_value())
                .filter_map(|s| Creature::try_new(s.clone(), base).ok())
                .collect()
        })
        .collect();
    let members_incomplete = member_sig.iter().any(|f| !f.complete);
    let mut work = 0u64;
    let mut obligations: Vec<serde_json::Value> = Vec::new();
    for (umask, u, d) in &descriptors {
        let sum = match dsum(d, &members, base) {
            Ok(c) => c,
            Err(ComposeError::EmptyVal) => {
                return Ok(Verdict::fails_with(
                    json!({
                        "property": "saturated_wrt",
                        "clause": "sum-defined",
                        "u": u,
                    }),
                    bounded,
                ));
            }
            Err(e) => {
                return Err(PropError::BadSubject(format!("sum on {u:?}: {e}")));
            }
        };
        if !sig_ts.items.iter().any(|s| *s == sum.wc) {
            return Ok(Verdict::fails_with(
                json!({
                    "property": "saturated_wrt",
                    "clause": "sum-membership",
                    "u": u,
                    "sum": jv(&sum.wc),
                }),
                bounded,
            ));
        }
        let results = sigma_sorted(pair, std::slice::from_ref(&sum.wc));
        bounded |= !results.complete;
        for t in &results.items {
            if !t.nor.is_positive_value() {
                continue;
            }
            let search = trade_down(
                h,
                base,
                *umask,
                t,
                &members,
                &pools,
                &member_sig,
                &mut work,
                bounds,
            )?;
            match search {
                Search::Found(mut witness) => {
                    witness["u"] = json!(u);
                    obligations.push(witness);
                }
                Search::Exhausted => {
                    return Ok(Verdict::fails_with(
                        json!({
                            "property": "saturated_wrt",
                            "clause": "trade-down",
                            "u": u,
                            "result": jv(t),
                        }),
                        bounded || members_incomplete,
                    ));
                }
                Search::Truncated => {
                    return Ok(Verdict::fails_with(
                        json!({
                            "property": "saturated_wrt",
                            "clause": "trade-down",
                            "u": u,
                            "result": jv(t),
                            "note": "no witness within the search budget",
                        }),
                        true,
                    ));
                }
            }
        }
    }
    Ok(Verdict::holds_with(
        json!({
            "property": "saturated_wrt",
            "descriptors": descriptors.len(),
            "obligations": obligations,
        }),
        bounded,
    ))
}
