//! Pinned behaviour of validation, pos, and condition checks on the small
//! worked examples.

use creature_core::*;
use std::collections::BTreeSet;

fn sys() -> BaseSystem {
    BaseSystem::from_sizes(&[2, 2, 2]).unwrap()
}

#[test]
fn minimal_creature_is_valid() {
    let wc = creature_from_pairs(
        NormValue::from_int(0),
        [(FinSeq::empty(), vec!["0"].into())],
        serde_json::Value::Null,
    );
    let r = validate_weak_creature(&wc, &sys());
    assert!(r.valid);
    assert!(r.is_creature);
    assert_eq!((r.m_dn, r.m_up), (Some(0), Some(1)));
    assert!(r.is_tree_creature);
    assert_eq!(r.root, Some(FinSeq::empty()));
}

#[test]
fn validation_is_idempotent_and_total() {
    let wc = creature_from_pairs(
        NormValue::from_int(0),
        [(vec!["0", "1"].into(), vec!["0"].into())],
        serde_json::Value::Null,
    );
    let r1 = validate_weak_creature(&wc, &sys());
    let r2 = validate_weak_creature(&wc, &sys());
    assert_eq!(r1, r2);
    assert!(!r1.valid);
}

#[test]
fn creature_json_round_trip() {
    let wc = creature_from_pairs(
        NormValue::log2_of_int(3),
        [
            (vec!["0"].into(), vec!["0", "0"].into()),
            (vec!["0"].into(), vec!["0", "1"].into()),
        ],
        serde_json::json!({"tag": [1, 2]}),
    );
    let s = serde_json::to_string(&wc).unwrap();
    let back: WeakCreature = serde_json::from_str(&s).unwrap();
    assert_eq!(back, wc);
}

#[test]
fn pos_agrees_with_val_on_trivial_pair() {
    let p = TrivialPair::new(sys(), NormRule::Log2Pos);
    let wc = creature_from_pairs(
        NormValue::from_int(2),
        [
            (vec!["0"].into(), vec!["0", "0", "0"].into()),
            (vec!["0"].into(), vec!["0", "1", "1"].into()),
            (vec!["1"].into(), vec!["1", "0", "0"].into()),
            (vec!["1"].into(), vec!["1", "1", "0"].into()),
        ],
        serde_json::Value::Null,
    );
    for w in basis(&wc, &p).extensions {
        let from_val: BTreeSet<FinSeq> = wc
            .val
            .iter()
            .filter(|(u, _)| *u == w)
            .map(|(_, v)| v.clone())
            .collect();
        let r = pos(&w, std::slice::from_ref(&wc), &p, DEFAULT_POS_BUDGET);
        assert_eq!(r.extensions, from_val);
        let star = pos_star(&w, std::slice::from_ref(&wc), &p);
        assert!(star.extensions.is_subset(&r.extensions));
    }
}

#[test]
fn base_system_json_matches_contract() {
    let sys = BaseSystem::new(
        vec![vec!["a".into(), "b".into()], vec!["a".into(), "c".into()]],
        vec!["a".into(), "a".into()],
    )
    .unwrap();
    let j = serde_json::to_value(&sys).unwrap();
    assert_eq!(
        j,
        serde_json::json!({"levels": [["a", "b"], ["a", "c"]], "zero": ["a", "a"]})
    );
    let back: BaseSystem = serde_json::from_value(j).unwrap();
    assert_eq!(back, sys);
}
