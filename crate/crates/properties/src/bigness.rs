//! Bigness variants: every small colouring of a creature's possible
//! extensions must be constant on a sub-creature of almost-equal norm. The
//! shared engine quantifies over basis elements and colourings; the variants
//! differ in colour count, norm bound, and whether the all-zero extension is
//! exempt from constancy.

use crate::{
    basis_sorted, cmp_rat, colouring_record, guard_colourings, is_zero_extension, jv, nv_cmp,
    pos_sorted, rat_int, sigma_sorted, span_of, Colourings, LevelFn, PropError, Verdict,
};
use creature_core::{CreatingPairInstance, FinSeq, NormValue, WeakCreature};
use num::rational::BigRational;
use num::BigInt;
use serde_json::json;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::slice::from_ref;

/// For each u in basis(t) with parameters (r, bound) = params_for(u): every
/// c : pos(u,t) -> r admits s in Σ(t) with pos(u,s) nonempty, contained in
/// pos(u,t), nor[s] >= bound, and c constant on pos(u,s) (minus the all-zero
/// extension of u when exempt_zero is set). Witnesses take the first
/// satisfying s in canonical creature order.
fn bigness_engine(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    kind: &'static str,
    exempt_zero: bool,
    mut params_for: impl FnMut(&FinSeq) -> Result<Option<(u64, NormValue)>, PropError>,
) -> Result<Verdict, PropError> {
    let zero = pair.base().zero.clone();
    let mut bounded = false;
    let sigma = sigma_sorted(pair, from_ref(t));
    bounded |= !sigma.complete;
    let bas = basis_sorted(pair, t);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for u in &bas.items {
        let Some((colours, bound)) = params_for(u)? else {
            continue;
        };
        let dom = pos_sorted(pair, u, from_ref(t));
        bounded |= !dom.complete;
        guard_colourings(dom.items.len(), colours, kind)?;
        let dom_set: BTreeSet<&FinSeq> = dom.items.iter().collect();
        let index: BTreeMap<&FinSeq, usize> = dom
            .items
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut cands: Vec<(&WeakCreature, Vec<usize>)> = Vec::new();
        for s in &sigma.items {
            if nv_cmp(&s.nor, &bound)? == Ordering::Less {
                continue;
            }
            let ps = pos_sorted(pair, u, from_ref(s));
            bounded |= !ps.complete;
            if ps.items.is_empty() || !ps.items.iter().all(|v| dom_set.contains(v)) {
                continue;
            }
            let kept: Vec<usize> = ps
                .items
                .iter()
                .filter(|v| !(exempt_zero && is_zero_extension(&zero, u, v)))
                .map(|v| index[*v])
                .collect();
            cands.push((s, kept));
        }
        for digits in Colourings::new(dom.items.len(), colours) {
            let found = cands
                .iter()
                .find(|(_, kept)| kept.windows(2).all(|w| digits[w[0]] == digits[w[1]]));
            match found {
                Some((s, _)) => obligations.push(json!({
                    "u": jv(u),
                    "colouring": colouring_record(&dom.items, &digits),
                    "s": jv(*s),
                })),
                None => {
                    return Ok(Verdict::fails_with(
                        json!({
                            "property": kind,
                            "u": jv(u),
                            "colouring": colouring_record(&dom.items, &digits),
                            "candidates": cands.len(),
                        }),
                        bounded,
                    ))
                }
            }
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": kind, "obligations": obligations}),
        bounded,
    ))
}

/// k-bigness is a property of the creature itself: norm above 1, and every
/// k-colouring of the possibilities is constant on a sub-creature losing at
/// most 1 of the norm.
pub(crate) fn k_big(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    k: u64,
) -> Result<Verdict, PropError> {
    if cmp_rat(&t.nor, &rat_int(1)) != Ordering::Greater {
        return Ok(Verdict::fails_with(
            json!({
                "property": "k_big",
                "reason": "k-bigness requires norm above 1",
                "nor": t.nor.to_json(),
            }),
            false,
        ));
    }
    let bound = t.nor.sub_rat(&rat_int(1));
    bigness_engine(pair, t, "k_big", false, |_| Ok(Some((k, bound.clone()))))
}

/// The pair-level clause of r̄-bigness at one creature: vacuous below norm
/// 1, otherwise like k-bigness with r̄ evaluated at the creature's lower
/// level.
pub(crate) fn rbar_big(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    rbar: &LevelFn,
) -> Result<Verdict, PropError> {
    if cmp_rat(&t.nor, &rat_int(1)) != Ordering::Greater {
        return Ok(Verdict::holds_with(
            json!({
                "property": "rbar_big",
                "note": "norm not above 1: the instance carries no obligation",
            }),
            false,
        ));
    }
    let (m_dn, _) = span_of(t)?;
    let r = rbar.get(m_dn as u64).ok_or_else(|| {
        PropError::BadSpec(format!("r̄ has no value at level {m_dn}"))
    })?;
    if r < 2 {
        return Err(PropError::BadSpec(
            "r̄ entries must be integers of at least 2".to_owned(),
        ));
    }
    let bound = t.nor.sub_rat(&rat_int(1));
    bigness_engine(pair, t, "rbar_big", false, |_| Ok(Some((r, bound.clone()))))
}

/// The omittory form: 2-colourings need only be constant away from the
/// all-zero extension, and the surviving norm must reach the target k.
pub(crate) fn omittory_big(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    k: u64,
) -> Result<Verdict, PropError> {
    let bound = NormValue::from_int(k as i64);
    bigness_engine(pair, t, "omittory_big", true, |_| {
        Ok(Some((2, bound.clone())))
    })
}

/// Essential f-bigness at one creature: vacuous unless nor[t] > f(0); for u
/// of positive length, f(lh(u))-colourings must be constant on a
/// sub-creature whose norm drops by at most f(0)/lh(u), exactly.
pub(crate) fn essentially_f_big(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    f: &LevelFn,
) -> Result<Verdict, PropError> {
    let f0 = f
        .get(0)
        .ok_or_else(|| PropError::BadSpec("f is undefined at 0".to_owned()))?;
    if cmp_rat(&t.nor, &rat_int(f0 as i64)) != Ordering::Greater {
        return Ok(Verdict::holds_with(
            json!({
                "property": "essentially_f_big",
                "note": "norm not above f(0): the instance carries no obligation",
            }),
            false,
        ));
    }
    let nor = t.nor.clone();
    bigness_engine(pair, t, "essentially_f_big", false, move |u| {
        if u.is_empty() {
            return Ok(None);
        }
        let colours = f.get(u.len() as u64).ok_or_else(|| {
            PropError::BadSpec(format!("f is undefined at {}", u.len()))
        })?;
        let drop = BigRational::new(BigInt::from(f0), BigInt::from(u.len() as u64));
        Ok(Some((colours, nor.sub_rat(&drop))))
    })
}

fn nonzero_in_span(
    zero: &[creature_core::Token],
    v: &FinSeq,
    m_dn: usize,
    m_up: usize,
) -> bool {
    (m_dn..m_up.min(v.len())).any(|m| zero.get(m) != Some(&v.0[m]))
}

/// One k-step of the ultrafilter-generation law, plus its standing side
/// clause: positive-norm creatures offer a nonzero extension, and every 0/1
/// colouring of the creature's levels admits s in Σ(t) of norm at least k
/// all of whose extensions are nonzero only on one colour class.
pub(crate) fn ultrafilter_step(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    k: u64,
) -> Result<Verdict, PropError> {
    let (m_dn, m_up) = span_of(t)?;
    let zero = pair.base().zero.clone();
    let mut bounded = false;
    if t.nor.is_positive_value() {
        let bas = basis_sorted(pair, t);
        bounded |= !bas.complete;
        for u in &bas.items {
            let dom = pos_sorted(pair, u, from_ref(t));
            bounded |= !dom.complete;
            if !dom
                .items
                .iter()
                .any(|v| nonzero_in_span(&zero, v, m_dn, m_up))
            {
                return Ok(Verdict::fails_with(
                    json!({
                        "property": "generates_ultrafilter_step",
                        "clause": "nonzero-extension",
                        "u": jv(u),
                    }),
                    bounded,
                ));
            }
        }
    }
    let width = m_up - m_dn;
    guard_colourings(width, 2, "generates_ultrafilter_step")?;
    let sigma = sigma_sorted(pair, from_ref(t));
    bounded |= !sigma.complete;
    let bound = NormValue::from_int(k as i64);
    let mut cands: Vec<(&WeakCreature, BTreeSet<usize>)> = Vec::new();
    for s in &sigma.items {
        if nv_cmp(&s.nor, &bound)? == Ordering::Less {
            continue;
        }
        let bas_s = basis_sorted(pair, s);
        bounded |= !bas_s.complete;
        let mut cols = BTreeSet::new();
        for u in &bas_s.items {
            let ps = pos_sorted(pair, u, from_ref(s));
            bounded |= !ps.complete;
            for v in &ps.items {
                for m in m_dn..m_up.min(v.len()) {
                    if zero.get(m) != Some(&v.0[m]) {
                        cols.insert(m - m_dn);
                    }
                }
            }
        }
        cands.push((s, cols));
    }
    let columns: Vec<usize> = (m_dn..m_up).collect();
    let mut obligations = Vec::new();
    for digits in Colourings::new(width, 2) {
        let mut found = None;
        'search: for (s, cols) in &cands {
            for istar in 0..2u64 {
                if cols.iter().all(|&c| digits[c] == istar) {
                    found = Some((*s, istar));
                    break 'search;
                }
            }
        }
        let record = serde_json::Value::Array(
            columns
                .iter()
                .zip(&digits)
                .map(|(m, c)| json!([m, c]))
                .collect(),
        );
        match found {
            Some((s, istar)) => obligations.push(json!({
                "colouring": record,
                "s": jv(s),
                "class": istar,
            })),
            None => {
                return Ok(Verdict::fails_with(
                    json!({
                        "property": "generates_ultrafilter_step",
                        "colouring": record,
                        "candidates": cands.len(),
                    }),
                    bounded,
                ))
            }
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "generates_ultrafilter_step", "obligations": obligations}),
        bounded,
    ))
}

/// A positive-norm creature must offer nonzero letters in more than one
/// level, above every basis element.
pub(crate) fn interesting(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
) -> Result<Verdict, PropError> {
    if !t.nor.is_positive_value() {
        return Ok(Verdict::holds_with(
            json!({
                "property": "interesting",
                "note": "norm not positive: the instance carries no obligation",
            }),
            false,
        ));
    }
    let (m_dn, m_up) = span_of(t)?;
    let zero = pair.base().zero.clone();
    let mut bounded = false;
    let bas = basis_sorted(pair, t);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for u in &bas.items {
        let dom = pos_sorted(pair, u, from_ref(t));
        bounded |= !dom.complete;
        let mut cols: BTreeSet<usize> = BTreeSet::new();
        for v in &dom.items {
            for m in m_dn..m_up.min(v.len()) {
                if zero.get(m) != Some(&v.0[m]) {
                    cols.insert(m);
                }
            }
        }
        if cols.len() <= 1 {
            return Ok(Verdict::fails_with(
                json!({
                    "property": "interesting",
                    "u": jv(u),
                    "nonzero_levels": cols,
                }),
                bounded,
            ));
        }
        obligations.push(json!({"u": jv(u), "nonzero_levels": cols}));
    }
    Ok(Verdict::holds_with(
        json!({"property": "interesting", "obligations": obligations}),
        bounded,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use creature_core::{creature_from_pairs, BaseSystem, NormRule, TrivialPair};
    use serde_json::Value;

    fn seq(parts: &[&str]) -> FinSeq {
        FinSeq(parts.iter().map(|s| s.to_string()).collect())
    }

    /// One creature below the empty root offering the first n letters of a
    /// single level of width w.
    fn flat(n: usize, w: usize, rule: NormRule) -> (TrivialPair, WeakCreature) {
        let sys = BaseSystem::from_sizes(&[w]).unwrap();
        let val = (0..n).map(|i| (FinSeq::empty(), seq(&[&i.to_string()])));
        let nor = rule.apply(n);
        let t = creature_from_pairs(nor, val, Value::Null);
        (TrivialPair::new(sys, rule), t)
    }

    #[test]
    fn four_possibilities_are_two_big_under_the_log_norm() {
        let (pair, t) = flat(4, 4, NormRule::Log2Pos);
        let v = k_big(&pair, &t, 2).unwrap();
        assert!(v.holds && !v.bounded);
        let w = v.witness.unwrap();
        assert_eq!(w["obligations"].as_array().unwrap().len(), 16);
    }

    #[test]
    fn the_counting_norm_refutes_two_bigness_with_the_first_balanced_split() {
        let (pair, t) = flat(4, 4, NormRule::CardPos);
        let v = k_big(&pair, &t, 2).unwrap();
        assert!(!v.holds && !v.bounded);
        let c = v.counterexample.unwrap();
        let colouring = c["colouring"].as_array().unwrap();
        let classes: Vec<u64> = colouring
            .iter()
            .map(|p| p[1].as_u64().unwrap())
            .collect();
        assert_eq!(classes, vec![0, 0, 1, 1]);
    }

    #[test]
    fn low_norm_refutes_k_bigness_but_not_the_pair_clause() {
        let (pair, t) = flat(2, 4, NormRule::Log2Pos);
        let kv = k_big(&pair, &t, 2).unwrap();
        assert!(!kv.holds);
        let rv = rbar_big(&pair, &t, &LevelFn::Const(2)).unwrap();
        assert!(rv.holds);
        assert!(rv.witness.unwrap()["note"].is_string());
    }

    #[test]
    fn k_bigness_is_antitone_in_the_colour_count() {
        let (pair, t) = flat(4, 4, NormRule::Log2Pos);
        let at3 = k_big(&pair, &t, 3).unwrap();
        assert!(at3.holds);
        for k in 0..=3 {
            assert!(k_big(&pair, &t, k).unwrap().holds, "k = {k}");
        }
    }

    #[test]
    fn omittory_bigness_ignores_the_zero_extension() {
        let (pair, t) = flat(2, 2, NormRule::Log2Pos);
        let at1 = omittory_big(&pair, &t, 1).unwrap();
        assert!(at1.holds);
        let at2 = omittory_big(&pair, &t, 2).unwrap();
        assert!(!at2.holds);
    }

    #[test]
    fn plain_two_bigness_fails_where_the_omittory_form_survives() {
        let (pair, t) = flat(2, 2, NormRule::CardPos);
        let split = k_big(&pair, &t, 2).unwrap();
        assert!(!split.holds);
        let omit = omittory_big(&pair, &t, 2).unwrap();
        assert!(omit.holds);
    }

    fn deep(n: usize, rule: NormRule) -> (TrivialPair, WeakCreature) {
        let sys = BaseSystem::from_sizes(&[2, 2, n]).unwrap();
        let u = seq(&["0", "0"]);
        let val = (0..n).map(|i| (u.clone(), u.concat(&[i.to_string()])));
        let nor = rule.apply(n);
        let t = creature_from_pairs(nor, val, Value::Null);
        (TrivialPair::new(sys, rule), t)
    }

    #[test]
    fn essential_bigness_uses_the_exact_fractional_drop() {
        let (pair, t) = deep(8, NormRule::Log2Pos);
        let holds = essentially_f_big(&pair, &t, &LevelFn::Const(2)).unwrap();
        assert!(holds.holds);

        let mut table = BTreeMap::new();
        table.insert(0u64, 2u64);
        table.insert(2u64, 3u64);
        let fails = essentially_f_big(&pair, &t, &LevelFn::Table(table)).unwrap();
        assert!(!fails.holds);
    }

    #[test]
    fn essential_bigness_is_vacuous_at_or_below_f_zero() {
        let (pair, t) = deep(4, NormRule::Log2Pos);
        let v = essentially_f_big(&pair, &t, &LevelFn::Const(2)).unwrap();
        assert!(v.holds);
        assert!(v.witness.unwrap()["note"].is_string());
    }

    #[test]
    fn ultrafilter_step_finds_one_sided_refinements() {
        let (pair, t) = flat(3, 3, NormRule::Log2Pos);
        let at1 = ultrafilter_step(&pair, &t, 1).unwrap();
        assert!(at1.holds);
        assert_eq!(
            at1.witness.unwrap()["obligations"]
                .as_array()
                .unwrap()
                .len(),
            2
        );
        let at2 = ultrafilter_step(&pair, &t, 2).unwrap();
        assert!(!at2.holds);
    }

    #[test]
    fn zero_only_creatures_fail_the_nonzero_clause() {
        let sys = BaseSystem::from_sizes(&[2]).unwrap();
        let val = vec![(FinSeq::empty(), seq(&["0"])), (FinSeq::empty(), seq(&["1"]))];
        let t = creature_from_pairs(NormRule::CardPos.apply(2), val, Value::Null);
        let pair = TrivialPair::new(sys, NormRule::CardPos);
        let ok = ultrafilter_step(&pair, &t, 0).unwrap();
        assert!(ok.holds);

        let zonly = creature_from_pairs(
            NormRule::CardPos.apply(1),
            vec![(FinSeq::empty(), seq(&["0"]))],
            Value::Null,
        );
        let v = ultrafilter_step(&pair, &zonly, 0).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.counterexample.unwrap()["clause"],
            Value::String("nonzero-extension".to_owned())
        );
    }

    #[test]
    fn interesting_needs_nonzero_letters_on_two_levels() {
        let sys = BaseSystem::from_sizes(&[2, 2]).unwrap();
        let pair = TrivialPair::new(sys, NormRule::CardPos);
        let spreadout = creature_from_pairs(
            NormRule::CardPos.apply(2),
            vec![
                (FinSeq::empty(), seq(&["1", "0"])),
                (FinSeq::empty(), seq(&["0", "1"])),
            ],
            Value::Null,
        );
        assert!(interesting(&pair, &spreadout).unwrap().holds);

        let narrow = creature_from_pairs(
            NormRule::CardPos.apply(1),
            vec![(FinSeq::empty(), seq(&["1", "0"]))],
            Value::Null,
        );
        let v = interesting(&pair, &narrow).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn interesting_is_vacuous_at_norm_zero() {
        let sys = BaseSystem::from_sizes(&[2, 2]).unwrap();
        let pair = TrivialPair::new(sys, NormRule::Log2Pos);
        let single = creature_from_pairs(
            NormRule::Log2Pos.apply(1),
            vec![(FinSeq::empty(), seq(&["1", "0"]))],
            Value::Null,
        );
        assert!(interesting(&pair, &single).unwrap().holds);
    }
}
