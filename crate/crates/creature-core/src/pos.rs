//! Possible extensions: basis, one-step pos_star, and the full pos closure
//! over ordered decompositions of the creature set.

use crate::base::FinSeq;
use crate::creature::WeakCreature;
use crate::pair::CreatingPairInstance;
use std::collections::BTreeSet;

/// Default bound on |S| for the ordered-partition search in `pos`.
pub const DEFAULT_POS_BUDGET: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosResult {
    pub extensions: BTreeSet<FinSeq>,
    /// Some Σ enumeration returned an incomplete list.
    pub sigma_exhausted: bool,
    /// The partition search was truncated; extensions is a sound partial set.
    pub budget_exceeded: bool,
}

impl PosResult {
    fn new() -> Self {
        PosResult {
            extensions: BTreeSet::new(),
            sigma_exhausted: false,
            budget_exceeded: false,
        }
    }
}

/// {u : ∃ s ∈ Σ(S), (w, u) ∈ val[s]}.
pub fn pos_star(w: &FinSeq, s: &[WeakCreature], pair: &dyn CreatingPairInstance) -> PosResult {
    let sigma = pair.sigma(s);
    let mut result = PosResult::new();
    result.sigma_exhausted = !sigma.complete;
    for c in &sigma.creatures {
        for (u, v) in &c.val {
            if u == w {
                result.extensions.insert(v.clone());
            }
        }
    }
    result
}

/// {w : ∃ s ∈ Σ({t}), ∃ u, (w, u) ∈ val[s]}.
pub fn basis(t: &WeakCreature, pair: &dyn CreatingPairInstance) -> PosResult {
    let sigma = pair.sigma(std::slice::from_ref(t));
    let mut result = PosResult::new();
    result.sigma_exhausted = !sigma.complete;
    for c in &sigma.creatures {
        for (u, _) in &c.val {
            result.extensions.insert(u.clone());
        }
    }
    result
}

fn sorted_block(s: &[WeakCreature], idx: &[usize]) -> Vec<WeakCreature> {
    let mut block: Vec<WeakCreature> = idx.iter().map(|&i| s[i].clone()).collect();
    block.sort();
    block
}

/// Chain pos_star through the blocks of one ordered partition, starting at w.
fn chase(
    w: &FinSeq,
    blocks: &[Vec<WeakCreature>],
    pair: &dyn CreatingPairInstance,
    result: &mut PosResult,
) {
    let mut frontier: BTreeSet<FinSeq> = BTreeSet::new();
    frontier.insert(w.clone());
    for block in blocks {
        let sigma = pair.sigma(block);
        if !sigma.complete {
            result.sigma_exhausted = true;
        }
        let mut next = BTreeSet::new();
        for c in &sigma.creatures {
            for (u, v) in &c.val {
                if frontier.contains(u) {
                    next.insert(v.clone());
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            return;
        }
    }
    result.extensions.extend(frontier);
}

/// All ordered partitions of 0..n into m nonempty blocks, as label vectors.
fn ordered_partitions(n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let total = (m as u64).pow(n as u32);
    'outer: for code in 0..total {
        let mut labels = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            labels.push((c % m as u64) as usize);
            c /= m as u64;
        }
        let mut blocks = vec![Vec::new(); m];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(i);
        }
        for b in &blocks {
            if b.is_empty() {
                continue 'outer;
            }
        }
        out.push(blocks);
    }
    out
}

/// Closure of pos_star under ordered decompositions of S: the union over all
/// ordered partitions S = S₀ ∪ … ∪ S_{m-1} of the chained extensions.
pub fn pos(
    w: &FinSeq,
    s: &[WeakCreature],
    pair: &dyn CreatingPairInstance,
    budget: usize,
) -> PosResult {
    let mut result = PosResult::new();
    if s.is_empty() {
        return result;
    }
    let n = s.len();
    if n <= budget {
        for m in 1..=n {
            for blocks_idx in ordered_partitions(n, m) {
                let blocks: Vec<Vec<WeakCreature>> = blocks_idx
                    .iter()
                    .map(|idx| sorted_block(s, idx))
                    .collect();
                chase(w, &blocks, pair, &mut result);
            }
        }
        return result;
    }
    // Over budget: evaluate contiguous decompositions in the given order
    // (single block, all singletons, and every composition when feasible).
    result.budget_exceeded = true;
    if n <= 14 {
        for mask in 0u64..(1 << (n - 1)) {
            let mut blocks: Vec<Vec<WeakCreature>> = Vec::new();
            let mut start = 0usize;
            for cut in 0..n - 1 {
                if mask >> cut & 1 == 1 {
                    let idx: Vec<usize> = (start..=cut).collect();
                    blocks.push(sorted_block(s, &idx));
                    start = cut + 1;
                }
            }
            let idx: Vec<usize> = (start..n).collect();
            blocks.push(sorted_block(s, &idx));
            chase(w, &blocks, pair, &mut result);
        }
    } else {
        let whole: Vec<usize> = (0..n).collect();
        chase(w, &[sorted_block(s, &whole)], pair, &mut result);
        let singletons: Vec<Vec<WeakCreature>> = (0..n).map(|i| vec![s[i].clone()]).collect();
        chase(w, &singletons, pair, &mut result);
    }
    result
}
