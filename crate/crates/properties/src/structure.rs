//! Order-theoretic laws on Σ: reducibility of large norms, cardinality
//! limits on possibility sets, meagering, monotonicity of val, and the
//! spread law that keeps any chosen extension alive at half the norm.

use crate::{
    basis_sorted, cmp_rat, jv, nv_cmp, pos_sorted, rat_int, sigma_sorted, Fragment, PropError,
    Verdict,
};
use creature_core::{CreatingPairInstance, IntFn2, WeakCreature};
use serde_json::json;
use std::cmp::Ordering;
use std::slice::from_ref;

/// A creature of norm above 3 admits a Σ-reduction into [nor/2, nor-1].
pub(crate) fn reducible(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
) -> Result<Verdict, PropError> {
    if cmp_rat(&t.nor, &rat_int(3)) != Ordering::Greater {
        return Ok(Verdict::holds_with(
            json!({
                "property": "reducible",
                "note": "norm not above 3: the instance carries no obligation",
            }),
            false,
        ));
    }
    let lo = t.nor.halve();
    let hi = t.nor.sub_rat(&rat_int(1));
    let sigma = sigma_sorted(pair, from_ref(t));
    let bounded = !sigma.complete;
    for s in &sigma.items {
        if nv_cmp(&s.nor, &lo)? != Ordering::Less && nv_cmp(&s.nor, &hi)? != Ordering::Greater {
            return Ok(Verdict::holds_with(
                json!({"property": "reducible", "s": jv(s)}),
                bounded,
            ));
        }
    }
    Ok(Verdict::fails_with(
        json!({
            "property": "reducible",
            "reason": "no Σ-result lands in the reduction window",
            "window": [lo.to_json(), hi.to_json()],
            "candidates": sigma.items.len(),
        }),
        bounded,
    ))
}

/// For every finite-table bound h(m0, m1): basis elements of length at most
/// m0 on creatures of norm at most m1 offer at most h(m0, m1) extensions.
pub(crate) fn h_limited(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    h: &IntFn2,
) -> Result<Verdict, PropError> {
    let mut bounded = false;
    let bas = basis_sorted(pair, t);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for (m0, m1, _) in &h.entries {
        if cmp_rat(&t.nor, &rat_int(*m1 as i64)) == Ordering::Greater {
            continue;
        }
        let cap = h
            .get(*m0, *m1)
            .ok_or_else(|| PropError::BadSpec(format!("h has no value at ({m0}, {m1})")))?;
        for u in &bas.items {
            if u.len() as u64 > *m0 {
                continue;
            }
            let dom = pos_sorted(pair, u, from_ref(t));
            bounded |= !dom.complete;
            let count = dom.items.len();
            if num::BigInt::from(count) > cap {
                return Ok(Verdict::fails_with(
                    json!({
                        "property": "h_limited",
                        "u": jv(u),
                        "m0": m0,
                        "m1": m1,
                        "pos_count": count,
                        "cap": cap.to_string(),
                    }),
                    bounded,
                ));
            }
            obligations.push(json!({
                "u": jv(u),
                "m0": m0,
                "m1": m1,
                "pos_count": count,
                "cap": cap.to_string(),
            }));
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "h_limited", "obligations": obligations}),
        bounded,
    ))
}

/// Any single extension can be dropped from the possibilities at the cost
/// of one norm unit, for creatures of norm above 1.
pub(crate) fn trivially_meagering(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
) -> Result<Verdict, PropError> {
    if cmp_rat(&t.nor, &rat_int(1)) != Ordering::Greater {
        return Ok(Verdict::holds_with(
            json!({
                "property": "trivially_meagering",
                "note": "norm not above 1: the instance carries no obligation",
            }),
            false,
        ));
    }
    let bound = t.nor.sub_rat(&rat_int(1));
    let mut bounded = false;
    let sigma = sigma_sorted(pair, from_ref(t));
    bounded |= !sigma.complete;
    let bas = basis_sorted(pair, t);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for u in &bas.items {
        let dom = pos_sorted(pair, u, from_ref(t));
        bounded |= !dom.complete;
        for v in &dom.items {
            let mut found = None;
            for s in &sigma.items {
                if nv_cmp(&s.nor, &bound)? == Ordering::Less {
                    continue;
                }
                let ps = pos_sorted(pair, u, from_ref(s));
                bounded |= !ps.complete;
                if !ps.complete {
                    continue;
                }
                if !ps.items.contains(v) {
                    found = Some(s);
                    break;
                }
            }
            match found {
                Some(s) => obligations.push(json!({"u": jv(u), "v": jv(v), "s": jv(s)})),
                None => {
                    return Ok(Verdict::fails_with(
                        json!({
                            "property": "trivially_meagering",
                            "u": jv(u),
                            "v": jv(v),
                        }),
                        bounded,
                    ))
                }
            }
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "trivially_meagering", "obligations": obligations}),
        bounded,
    ))
}

/// Every Σ-result keeps its val inside the parent's val.
pub(crate) fn monotonic(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
) -> Result<Verdict, PropError> {
    let sigma = sigma_sorted(pair, from_ref(t));
    let bounded = !sigma.complete;
    for s in &sigma.items {
        if let Some(extra) = s.val.iter().find(|p| !t.val.contains(p)) {
            return Ok(Verdict::fails_with(
                json!({
                    "property": "monotonic",
                    "s": jv(s),
                    "val_entry_outside_parent": jv(extra),
                }),
                bounded,
            ));
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "monotonic", "checked": sigma.items.len()}),
        bounded,
    ))
}

/// Monotonic on each member, and Σ-results of the tuple that lose a full
/// norm unit shrink every possibility set strictly.
pub(crate) fn strictly_monotonic(
    pair: &dyn CreatingPairInstance,
    ts: &[WeakCreature],
) -> Result<Verdict, PropError> {
    let t0 = ts
        .first()
        .ok_or_else(|| PropError::BadSubject("strict monotonicity needs a nonempty tuple".into()))?;
    let mut bounded = false;
    for t in ts {
        let mono = monotonic(pair, t)?;
        bounded |= mono.bounded;
        if !mono.holds {
            return Ok(Verdict::fails_with(
                json!({
                    "property": "strictly_monotonic",
                    "clause": "monotonic",
                    "member": mono.counterexample,
                }),
                bounded,
            ));
        }
    }
    let mut threshold = None;
    for t in ts {
        let m = t.nor.sub_rat(&rat_int(1));
        let bigger = match &threshold {
            None => true,
            Some(cur) => nv_cmp(&m, cur)? == Ordering::Greater,
        };
        if bigger {
            threshold = Some(m);
        }
    }
    let threshold = threshold.expect("nonempty tuple");
    let sigma = sigma_sorted(pair, ts);
    bounded |= !sigma.complete;
    let bas = basis_sorted(pair, t0);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for s in &sigma.items {
        if nv_cmp(&s.nor, &threshold)? == Ordering::Greater {
            continue;
        }
        for u in &bas.items {
            let small: Fragment<_> = pos_sorted(pair, u, from_ref(s));
            let large: Fragment<_> = pos_sorted(pair, u, ts);
            bounded |= !small.complete || !large.complete;
            let proper = small.items.iter().all(|v| large.items.contains(v))
                && small.items.len() < large.items.len();
            if !proper {
                return Ok(Verdict::fails_with(
                    json!({
                        "property": "strictly_monotonic",
                        "clause": "strict-shrink",
                        "s": jv(s),
                        "u": jv(u),
                        "pos_of_s": jv(&small.items),
                        "pos_of_tuple": jv(&large.items),
                    }),
                    bounded,
                ));
            }
            obligations.push(json!({
                "s": jv(s),
                "u": jv(u),
                "shrunk_to": small.items.len(),
                "from": large.items.len(),
            }));
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "strictly_monotonic", "obligations": obligations}),
        bounded,
    ))
}

/// Any chosen extension survives in some Σ-result of norm at most half the
/// parent's.
pub(crate) fn spread(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
) -> Result<Verdict, PropError> {
    let half = t.nor.halve();
    let mut bounded = false;
    let sigma = sigma_sorted(pair, from_ref(t));
    bounded |= !sigma.complete;
    let bas = basis_sorted(pair, t);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for u in &bas.items {
        let dom = pos_sorted(pair, u, from_ref(t));
        bounded |= !dom.complete;
        for v in &dom.items {
            let mut found = None;
            for s in &sigma.items {
                if nv_cmp(&s.nor, &half)? == Ordering::Greater {
                    continue;
                }
                let ps = pos_sorted(pair, u, from_ref(s));
                bounded |= !ps.complete;
                if ps.items.contains(v) {
                    found = Some(s);
                    break;
                }
            }
            match found {
                Some(s) => obligations.push(json!({"u": jv(u), "v": jv(v), "s": jv(s)})),
                None => {
                    return Ok(Verdict::fails_with(
                        json!({
                            "property": "spread",
                            "u": jv(u),
                            "v": jv(v),
                            "norm_cap": half.to_json(),
                        }),
                        bounded,
                    ))
                }
            }
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "spread", "obligations": obligations}),
        bounded,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use creature_core::{
        creature_from_pairs, BaseSystem, FinSeq, NormRule, NormValue, PairError, SigmaResult,
        TrivialPair,
    };
    use serde_json::Value;

    /// Σ returns only the creature itself; nothing can shrink.
    struct IdentityPair {
        base: BaseSystem,
    }

    impl CreatingPairInstance for IdentityPair {
        fn base(&self) -> &BaseSystem {
            &self.base
        }

        fn is_member(&self, _t: &WeakCreature) -> bool {
            true
        }

        fn sigma(&self, s: &[WeakCreature]) -> SigmaResult {
            match s {
                [t] => SigmaResult::complete(vec![t.clone()]),
                _ => SigmaResult::empty(),
            }
        }

        fn norm(&self, t: &WeakCreature) -> Result<NormValue, PairError> {
            Ok(t.nor.clone())
        }
    }

    fn flat(n: usize, rule: NormRule) -> (TrivialPair, WeakCreature) {
        let sys = BaseSystem::from_sizes(&[n]).unwrap();
        let val = (0..n).map(|i| (FinSeq::empty(), FinSeq(vec![i.to_string()])));
        let t = creature_from_pairs(rule.apply(n), val, Value::Null);
        (TrivialPair::new(sys, rule), t)
    }

    #[test]
    fn counting_norms_reduce_by_dropping_possibilities() {
        let (pair, t) = flat(6, NormRule::CardPos);
        let v = reducible(&pair, &t).unwrap();
        assert!(v.holds);
        let s: WeakCreature =
            serde_json::from_value(v.witness.unwrap()["s"].clone()).unwrap();
        assert_eq!(s.val.len(), 3);
    }

    #[test]
    fn reducibility_is_vacuous_at_small_norms() {
        let (pair, t) = flat(3, NormRule::CardPos);
        let v = reducible(&pair, &t).unwrap();
        assert!(v.holds);
        assert!(v.witness.unwrap()["note"].is_string());
    }

    #[test]
    fn an_identity_sigma_cannot_reduce() {
        let base = BaseSystem::from_sizes(&[6]).unwrap();
        let (_, t) = flat(6, NormRule::CardPos);
        let v = reducible(&IdentityPair { base }, &t).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn possibility_counts_respect_the_table() {
        let (pair, t) = flat(4, NormRule::Log2Pos);
        let ok = IntFn2 {
            entries: vec![(0, 2, "4".to_owned())],
        };
        assert!(h_limited(&pair, &t, &ok).unwrap().holds);
        let tight = IntFn2 {
            entries: vec![(0, 2, "3".to_owned())],
        };
        let v = h_limited(&pair, &t, &tight).unwrap();
        assert!(!v.holds);
        assert_eq!(v.counterexample.unwrap()["pos_count"], Value::from(4));
    }

    #[test]
    fn table_rows_outside_the_hypothesis_are_skipped() {
        let (pair, t) = flat(4, NormRule::Log2Pos);
        let inapplicable = IntFn2 {
            entries: vec![(0, 1, "1".to_owned())],
        };
        let v = h_limited(&pair, &t, &inapplicable).unwrap();
        assert!(v.holds);
        assert_eq!(
            v.witness.unwrap()["obligations"].as_array().unwrap().len(),
            0
        );
    }

    #[test]
    fn subset_sigma_drops_any_single_extension() {
        let (pair, t) = flat(4, NormRule::CardPos);
        let v = trivially_meagering(&pair, &t).unwrap();
        assert!(v.holds);
        assert_eq!(
            v.witness.unwrap()["obligations"].as_array().unwrap().len(),
            4
        );
    }

    #[test]
    fn identity_sigma_cannot_meager() {
        let base = BaseSystem::from_sizes(&[4]).unwrap();
        let (_, t) = flat(4, NormRule::CardPos);
        let v = trivially_meagering(&IdentityPair { base }, &t).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn subset_sigma_is_monotonic() {
        let (pair, t) = flat(3, NormRule::Log2Pos);
        assert!(monotonic(&pair, &t).unwrap().holds);
    }

    /// Σ rewrites the single val entry to a fresh one, breaking val
    /// containment.
    struct RenamingPair {
        base: BaseSystem,
    }

    impl CreatingPairInstance for RenamingPair {
        fn base(&self) -> &BaseSystem {
            &self.base
        }

        fn is_member(&self, _t: &WeakCreature) -> bool {
            true
        }

        fn sigma(&self, s: &[WeakCreature]) -> SigmaResult {
            match s {
                [t] => {
                    let renamed = creature_from_pairs(
                        t.nor.clone(),
                        [(FinSeq::empty(), vec!["1"].into())],
                        Value::Null,
                    );
                    SigmaResult::complete(vec![renamed])
                }
                _ => SigmaResult::empty(),
            }
        }

        fn norm(&self, t: &WeakCreature) -> Result<NormValue, PairError> {
            Ok(t.nor.clone())
        }
    }

    #[test]
    fn val_escape_refutes_monotonicity() {
        let base = BaseSystem::from_sizes(&[2]).unwrap();
        let t = creature_from_pairs(
            NormValue::from_int(1),
            [(FinSeq::empty(), vec!["0"].into())],
            Value::Null,
        );
        let v = monotonic(&RenamingPair { base }, &t).unwrap();
        assert!(!v.holds);
        assert!(v.counterexample.unwrap()["val_entry_outside_parent"].is_array());
    }

    #[test]
    fn subset_sigma_shrinks_strictly_below_the_norm_threshold() {
        let (pair, t) = flat(4, NormRule::CardPos);
        let v = strictly_monotonic(&pair, &[t]).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn no_strictness_demand_arises_below_the_norm_threshold() {
        let (pair, t) = flat(2, NormRule::CardPos);
        // singleton subsets have nor 1 <= max - 1 and pos of size 1 < 2
        assert!(strictly_monotonic(&pair, &[t]).unwrap().holds);

        let base = BaseSystem::from_sizes(&[2]).unwrap();
        let low = creature_from_pairs(
            NormValue::from_int(0),
            [
                (FinSeq::empty(), vec!["0"].into()),
                (FinSeq::empty(), vec!["1"].into()),
            ],
            Value::Null,
        );
        // the identity keeps pos intact, but nor = 0 <= -1 fails, so the
        // strict clause never fires
        let v = strictly_monotonic(&IdentityPair { base }, &[low]).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn equal_possibility_sets_refute_strictness() {
        let base = BaseSystem::from_sizes(&[2]).unwrap();
        let t = creature_from_pairs(
            NormValue::from_int(2),
            [
                (FinSeq::empty(), vec!["0"].into()),
                (FinSeq::empty(), vec!["1"].into()),
            ],
            Value::Null,
        );

        /// Σ lowers the norm by one but keeps val whole.
        struct NormDropPair {
            base: BaseSystem,
        }

        impl CreatingPairInstance for NormDropPair {
            fn base(&self) -> &BaseSystem {
                &self.base
            }

            fn is_member(&self, _t: &WeakCreature) -> bool {
                true
            }

            fn sigma(&self, s: &[WeakCreature]) -> SigmaResult {
                match s {
                    [t] => {
                        let mut dropped = t.clone();
                        dropped.nor = t.nor.sub_rat(&num::BigRational::from_integer(1.into()));
                        SigmaResult::complete(vec![dropped])
                    }
                    _ => SigmaResult::empty(),
                }
            }

            fn norm(&self, t: &WeakCreature) -> Result<NormValue, PairError> {
                Ok(t.nor.clone())
            }
        }

        let v = strictly_monotonic(&NormDropPair { base }, &[t]).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.counterexample.unwrap()["clause"],
            Value::String("strict-shrink".to_owned())
        );
    }

    #[test]
    fn subset_singletons_witness_spreading_under_the_log_norm() {
        let (pair, t) = flat(4, NormRule::Log2Pos);
        let v = spread(&pair, &t).unwrap();
        assert!(v.holds);
        let obs = v.witness.unwrap()["obligations"].clone();
        assert_eq!(obs.as_array().unwrap().len(), 4);
    }

    #[test]
    fn counting_norms_cannot_spread() {
        // keeping v costs at least norm 1, but half of 1 is below it
        let (pair, t) = flat(1, NormRule::CardPos);
        let v = spread(&pair, &t).unwrap();
        assert!(!v.holds);
    }
}
