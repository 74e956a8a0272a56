//! Omitting and capturing: the tree-level law that any node whose
//! successors are all leaves can absorb the rest of the system, and the
//! candidate-level law that any single extension can be isolated by passing
//! to Σ-derived candidates.

use crate::{
    basis_sorted, jv, nv_cmp, pos_sorted, rat_int, restacks, sigma_sorted, stacked_span, PropError,
    Verdict, SEARCH_CAP,
};
use creature_core::{CreatingPairInstance, FinSeq, Token, WeakCreature};
use quasitree::TreeConditionPrefix;
use serde_json::json;
use std::cmp::Ordering;
use std::collections::BTreeSet;

fn branch_set(s: &WeakCreature) -> BTreeSet<&FinSeq> {
    s.val.iter().map(|(_, v)| v).collect()
}

/// For every node of the system whose successors are all maximal, some
/// Σ-result of the whole system concentrates there: norm within 1 of that
/// node's creature and extensions inside its successor set.
pub(crate) fn t_omittory(
    pair: &dyn CreatingPairInstance,
    system: &TreeConditionPrefix,
) -> Result<Verdict, PropError> {
    let max = system.tree.max_nodes();
    let members: Vec<WeakCreature> = system.creatures.values().map(|tc| tc.wc.clone()).collect();
    let sigma = sigma_sorted(pair, &members);
    let mut bounded = !sigma.complete;
    let mut obligations = Vec::new();
    for (nu0, tc) in &system.creatures {
        let succ = system.tree.suc(nu0);
        if !succ.iter().all(|node| max.contains(node)) {
            continue;
        }
        let bound = tc.wc.nor.sub_rat(&rat_int(1));
        let target: BTreeSet<&FinSeq> = succ.iter().collect();
        let mut found = None;
        for s in &sigma.items {
            if nv_cmp(&s.nor, &bound)? == Ordering::Less {
                continue;
            }
            if branch_set(s).iter().all(|v| target.contains(*v)) {
                found = Some(s);
                break;
            }
        }
        match found {
            Some(s) => obligations.push(json!({"nu0": jv(nu0), "s": jv(s)})),
            None => {
                return Ok(Verdict::fails_with(
                    json!({
                        "property": "t_omittory",
                        "nu0": jv(nu0),
                        "norm_floor": bound.to_json(),
                        "candidates": sigma.items.len(),
                    }),
                    bounded,
                ))
            }
        }
    }
    if obligations.is_empty() {
        bounded = false;
        return Ok(Verdict::holds_with(
            json!({
                "property": "t_omittory",
                "note": "no node has all successors maximal: the instance carries no obligation",
            }),
            bounded,
        ));
    }
    Ok(Verdict::holds_with(
        json!({"property": "t_omittory", "obligations": obligations}),
        bounded,
    ))
}

/// Enumerate the full products over the base levels below m_dn.
fn prefix_products(
    pair: &dyn CreatingPairInstance,
    m_dn: usize,
) -> Result<Vec<FinSeq>, PropError> {
    let levels = &pair.base().levels;
    if m_dn > levels.len() {
        return Err(PropError::BadSubject(format!(
            "creature spans level {m_dn} but the base defines {}",
            levels.len()
        )));
    }
    let mut out: Vec<Vec<Token>> = vec![Vec::new()];
    for lvl in &levels[..m_dn] {
        let mut next = Vec::with_capacity(out.len() * lvl.len());
        for stem in &out {
            for tok in lvl {
                let mut w = stem.clone();
                w.push(tok.clone());
                next.push(w);
            }
        }
        if next.len() as u64 > SEARCH_CAP {
            return Err(PropError::BudgetExceeded(
                "too many prefixes below the creature".to_owned(),
            ));
        }
        out = next;
    }
    Ok(out.into_iter().map(FinSeq).collect())
}

/// val is closed under replacing the prefix by any full-product prefix.
fn forgetful_on(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
) -> Result<Option<serde_json::Value>, PropError> {
    let (m_dn, m_up) = uniform_span(t)?;
    let prefixes = prefix_products(pair, m_dn)?;
    for (w, u) in &t.val {
        for w2 in &prefixes {
            let tail: Vec<Token> = u.0[m_dn..m_up.min(u.len())].to_vec();
            let moved = (w2.clone(), w2.concat(&tail));
            if !t.val.contains(&moved) {
                return Ok(Some(json!({
                    "clause": "forgetful",
                    "val_entry": jv(&(w, u)),
                    "missing": jv(&moved),
                })));
            }
        }
    }
    Ok(None)
}

/// One round of candidate derivation: split into consecutive blocks, apply
/// Σ to each block, and keep span-preserving results.
fn derive_round(
    pair: &dyn CreatingPairInstance,
    from: &BTreeSet<Vec<WeakCreature>>,
    span: (usize, usize),
    work: &mut u64,
) -> Result<(BTreeSet<Vec<WeakCreature>>, bool), PropError> {
    let mut out = BTreeSet::new();
    let mut complete = true;
    for tuple in from {
        let n = tuple.len();
        for cuts in 0u64..(1 << (n.saturating_sub(1))) {
            let mut blocks: Vec<Vec<WeakCreature>> = vec![Vec::new()];
            for (i, t) in tuple.iter().enumerate() {
                blocks.last_mut().expect("nonempty").push(t.clone());
                if i + 1 < n && cuts >> i & 1 == 1 {
                    blocks.push(Vec::new());
                }
            }
            let mut choices: Vec<Vec<WeakCreature>> = Vec::with_capacity(blocks.len());
            for block in &blocks {
                let sig = sigma_sorted(pair, block);
                complete &= sig.complete;
                choices.push(sig.items);
            }
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; choices.len()];
            loop {
                *work += 1;
                if *work > SEARCH_CAP {
                    return Err(PropError::BudgetExceeded(
                        "candidate derivation exceeded the search cap".to_owned(),
                    ));
                }
                let cand: Vec<WeakCreature> = idx
                    .iter()
                    .enumerate()
                    .map(|(b, &i)| choices[b][i].clone())
                    .collect();
                if restacks(&cand, span) {
                    out.insert(cand);
                }
                let mut carried = false;
                for b in (0..idx.len()).rev() {
                    idx[b] += 1;
                    if idx[b] < choices[b].len() {
                        carried = true;
                        break;
                    }
                    idx[b] = 0;
                }
                if !carried {
                    break;
                }
            }
        }
    }
    Ok((out, complete))
}

/// Bounded form of singleton capture on one candidate: the pair must be
/// forgetful on the members, and every extension v of every basis element u
/// must be isolated (pos becomes exactly {v}) by some candidate derived in
/// at most `depth` Σ-rounds, with the overall span preserved.
pub(crate) fn captures_singletons(
    pair: &dyn CreatingPairInstance,
    ts: &[WeakCreature],
    depth: usize,
) -> Result<Verdict, PropError> {
    if ts.is_empty() {
        return Err(PropError::BadSubject(
            "singleton capture needs a nonempty tuple".to_owned(),
        ));
    }
    let span = stacked_span(ts)?;
    let mut bounded = false;
    for t in ts {
        if let Some(cx) = forgetful_on(pair, t)? {
            return Ok(Verdict::fails_with(
                json!({"property": "captures_singletons_bounded", "counterexample": cx}),
                false,
            ));
        }
    }
    let mut reachable: BTreeSet<Vec<WeakCreature>> = BTreeSet::new();
    reachable.insert(ts.to_vec());
    let mut frontier = reachable.clone();
    let mut work = 0u64;
    let mut saturated_search = false;
    let mut rounds_complete = true;
    for _ in 0..depth {
        let (derived, complete) = derive_round(pair, &frontier, span, &mut work)?;
        rounds_complete &= complete;
        frontier = derived
            .into_iter()
            .filter(|c| !reachable.contains(c))
            .collect();
        if frontier.is_empty() {
            saturated_search = true;
            break;
        }
        reachable.extend(frontier.iter().cloned());
    }
    let exhausted = saturated_search && rounds_complete;
    let bas = basis_sorted(pair, &ts[0]);
    bounded |= !bas.complete;
    let mut obligations = Vec::new();
    for u in &bas.items {
        let dom = pos_sorted(pair, u, ts);
        bounded |= !dom.complete;
        for v in &dom.items {
            let mut found = None;
            for cand in &reachable {
                let ps = pos_sorted(pair, u, cand);
                if !ps.complete {
                    bounded = true;
                    continue;
                }
                if ps.items.len() == 1 && &ps.items[0] == v {
                    found = Some(cand);
                    break;
                }
            }
            match found {
                Some(cand) => obligations.push(json!({
                    "u": jv(u),
                    "v": jv(v),
                    "candidate": jv(cand),
                })),
                None => {
                    return Ok(Verdict::fails_with(
                        json!({
                            "property": "captures_singletons_bounded",
                            "u": jv(u),
                            "v": jv(v),
                            "candidates_searched": reachable.len(),
                            "rounds": depth,
                        }),
                        bounded || !exhausted,
                    ))
                }
            }
        }
    }
    Ok(Verdict::holds_with(
        json!({"property": "captures_singletons_bounded", "obligations": obligations}),
        bounded,
    ))
}
