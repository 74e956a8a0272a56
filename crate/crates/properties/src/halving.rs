//! The halving laws: the pair's half map must land in Σ(t) without losing
//! more than half the norm, and whatever survives Σ above the halves with
//! positive norm can be traded back for a Σ-result of the originals with
//! honest norm and no new extensions.

use crate::{
    basis_sorted, cmp_rat, jv, nv_cmp, pos_sorted, rat_int, sigma_sorted, PropError, Verdict,
};
use creature_core::{CreatingPairInstance, NormValue, WeakCreature};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::cmp::Ordering;
use std::slice::from_ref;

/// Which halving axioms to verify. Both modes check axiom (a) on every
/// member; `Weak` adds the single-creature trade-back clause per member,
/// `Full` adds the tuple clause over the whole subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalvingMode {
    Full,
    Weak,
}

struct TradeBack {
    label: &'static str,
    floor: NormValue,
}

/// For every Σ-result t above `halves` with positive norm, find s in
/// Σ(originals) with nor[s] at or above the floor and pos(u, s) inside
/// pos(u, t) for every u in basis(originals[0]).
fn trade_back(
    pair: &dyn CreatingPairInstance,
    originals: &[WeakCreature],
    halves: &[WeakCreature],
    spec: &TradeBack,
    bounded: &mut bool,
    obligations: &mut Vec<serde_json::Value>,
) -> Result<Option<serde_json::Value>, PropError> {
    let over_halves = sigma_sorted(pair, halves);
    *bounded |= !over_halves.complete;
    let over_originals = sigma_sorted(pair, originals);
    *bounded |= !over_originals.complete;
    let bas = basis_sorted(pair, &originals[0]);
    *bounded |= !bas.complete;
    for t in &over_halves.items {
        if !t.nor.is_positive_value() {
            continue;
        }
        let mut found = None;
        's: for s in &over_originals.items {
            if nv_cmp(&s.nor, &spec.floor)? == Ordering::Less {
                continue;
            }
            for u in &bas.items {
                let shrunk = pos_sorted(pair, u, from_ref(s));
                let target = pos_sorted(pair, u, from_ref(t));
                *bounded |= !shrunk.complete || !target.complete;
                if !shrunk.items.iter().all(|v| target.items.contains(v)) {
                    continue 's;
                }
            }
            found = Some(s);
            break;
        }
        match found {
            Some(s) => obligations.push(json!({
                "clause": spec.label,
                "t": jv(t),
                "s": jv(s),
            })),
            None => {
                return Ok(Some(json!({
                    "clause": spec.label,
                    "t": jv(t),
                    "norm_floor": spec.floor.to_json(),
                    "candidates": over_originals.items.len(),
                })))
            }
        }
    }
    Ok(None)
}

/// Check the halving axioms on a tuple of creatures. Axiom (a) runs on
/// every member unconditionally; the trade-back clauses only bind where
/// the relevant norms reach 2.
pub fn verify_halving(
    pair: &dyn CreatingPairInstance,
    ts: &[WeakCreature],
    mode: HalvingMode,
) -> Result<Verdict, PropError> {
    if ts.is_empty() {
        return Err(PropError::BadSubject(
            "halving needs at least one creature".to_owned(),
        ));
    }
    let mut bounded = false;
    let mut obligations = Vec::new();
    let mut halves = Vec::with_capacity(ts.len());
    for (i, t) in ts.iter().enumerate() {
        let half = pair.half(t).ok_or(PropError::NoHalfMap)?;
        let sigma = sigma_sorted(pair, from_ref(t));
        bounded |= !sigma.complete;
        if !sigma.items.contains(&half) {
            return Ok(Verdict::fails_with(
                json!({
                    "clause": "a-membership",
                    "member": i,
                    "half": jv(&half),
                }),
                bounded,
            ));
        }
        let floor = t.nor.halve();
        if nv_cmp(&half.nor, &floor)? == Ordering::Less {
            return Ok(Verdict::fails_with(
                json!({
                    "clause": "a-norm",
                    "member": i,
                    "half_norm": half.nor.to_json(),
                    "required": floor.to_json(),
                }),
                bounded,
            ));
        }
        obligations.push(json!({
            "clause": "a",
            "member": i,
            "half": jv(&half),
        }));
        halves.push(half);
    }
    match mode {
        HalvingMode::Weak => {
            for (i, t) in ts.iter().enumerate() {
                if cmp_rat(&t.nor, &rat_int(2)) == Ordering::Less {
                    obligations.push(json!({
                        "clause": "b_minus",
                        "member": i,
                        "note": "norm below 2: no obligation",
                    }));
                    continue;
                }
                let spec = TradeBack {
                    label: "b_minus",
                    floor: t.nor.halve(),
                };
                if let Some(cx) = trade_back(
                    pair,
                    from_ref(t),
                    from_ref(&halves[i]),
                    &spec,
                    &mut bounded,
                    &mut obligations,
                )? {
                    return Ok(Verdict::fails_with(cx, bounded));
                }
            }
        }
        HalvingMode::Full => {
            let below = ts
                .iter()
                .any(|t| cmp_rat(&t.nor, &rat_int(2)) == Ordering::Less);
            if below {
                obligations.push(json!({
                    "clause": "b",
                    "note": "some norm below 2: no obligation",
                }));
            } else {
                let mut floor = ts[0].nor.halve();
                for t in &ts[1..] {
                    let h = t.nor.halve();
                    if nv_cmp(&h, &floor)? == Ordering::Less {
                        floor = h;
                    }
                }
                let spec = TradeBack {
                    label: "b",
                    floor,
                };
                if let Some(cx) =
                    trade_back(pair, ts, &halves, &spec, &mut bounded, &mut obligations)?
                {
                    return Ok(Verdict::fails_with(cx, bounded));
                }
            }
        }
    }
    Ok(Verdict::holds_with(json!({ "obligations": obligations }), bounded))
}
