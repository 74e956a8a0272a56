//! m-additivity of a weak creature: how many low-norm Σ-results can be
//! recombined under one Σ-result whose norm exceeds theirs by at most 1.

use crate::{nv_cmp, nv_max, rat_int, sigma_sorted, PropError, SEARCH_CAP};
use creature_core::{CreatingPairInstance, NormValue, WeakCreature};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::slice::from_ref;

/// The additivity level at the probed bound: either the exact supremum, or
/// a lower bound when no family up to `k_max` refuted it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Additivity {
    Exact(u64),
    AtLeast(u64),
}

fn combination_count(n: usize, k: usize) -> u64 {
    let mut out: u64 = 1;
    for i in 0..k {
        out = out.saturating_mul((n - i) as u64) / (i as u64 + 1);
        if out > SEARCH_CAP {
            return u64::MAX;
        }
    }
    out
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The largest k at most k_max such that every k-tuple from Σ(t) with norms
/// at most m sits jointly inside some s in Σ(t) with nor[s] at most
/// max-norm + 1. Tuples with repetitions collapse to their underlying sets,
/// so exact-size-k subsets are scanned for ascending k; a refuted k pins
/// the supremum at k - 1.
pub fn additivity(
    pair: &dyn CreatingPairInstance,
    t: &WeakCreature,
    m: &NormValue,
    k_max: u64,
) -> Result<Additivity, PropError> {
    let sigma = sigma_sorted(pair, from_ref(t));
    if !sigma.complete {
        return Err(PropError::BudgetExceeded(
            "additivity needs the full Σ(t) enumeration".to_owned(),
        ));
    }
    let mut small = Vec::new();
    for x in &sigma.items {
        if nv_cmp(&x.nor, m)? != Ordering::Greater {
            small.push(x.clone());
        }
    }
    // Σ-membership per candidate recombiner, by canonical key
    let mut inside: Vec<BTreeSet<String>> = Vec::with_capacity(sigma.items.len());
    let mut partial: Vec<bool> = Vec::with_capacity(sigma.items.len());
    for s in &sigma.items {
        let over = sigma_sorted(pair, from_ref(s));
        partial.push(!over.complete);
        inside.push(over.items.iter().map(|x| x.canonical_key()).collect());
    }
    let keys: Vec<String> = small.iter().map(|x| x.canonical_key()).collect();
    let one = rat_int(1);
    for k in 1..=k_max {
        let k_usize = k as usize;
        if k_usize > small.len() {
            // tuples repeat members; no family has more distinct creatures
            // than the low-norm pool, so nothing is left to refute
            return Ok(Additivity::AtLeast(k_max));
        }
        if combination_count(small.len(), k_usize) > SEARCH_CAP {
            return Err(PropError::BudgetExceeded(format!(
                "additivity family space at k = {k} exceeds the search cap"
            )));
        }
        let mut pick: Vec<usize> = (0..k_usize).collect();
        loop {
            let norms: Vec<NormValue> = pick.iter().map(|&i| small[i].nor.clone()).collect();
            let cap = nv_max(&norms)?.add_rat(&one);
            let mut found = false;
            let mut inconclusive = false;
            for (si, s) in sigma.items.iter().enumerate() {
                if nv_cmp(&s.nor, &cap)? == Ordering::Greater {
                    continue;
                }
                if pick.iter().all(|&i| inside[si].contains(&keys[i])) {
                    found = true;
                    break;
                }
                inconclusive |= partial[si];
            }
            if !found {
                if inconclusive {
                    return Err(PropError::BudgetExceeded(
                        "a candidate recombiner had an incomplete Σ enumeration".to_owned(),
                    ));
                }
                return Ok(Additivity::Exact(k - 1));
            }
            if !next_combination(&mut pick, small.len()) {
                break;
            }
        }
    }
    Ok(Additivity::AtLeast(k_max))
}
