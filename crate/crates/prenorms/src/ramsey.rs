//! Exhaustive Ramsey-number calculators: the hypergraph numbers on [N]^(<=n),
//! the polarized product variant, and the staircase heights built from the
//! latter. Values are exact, certified bounds, or injected from a trusted
//! table; never guessed.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Colouring-space cap for one exhaustive pass (number of colourings).
const FEASIBLE_COLOURINGS: f64 = 16_777_216.0; // 2^24

#[derive(Debug, Clone, Default)]
pub struct RamseyBudget {
    pub max_n: u64,
    /// (n, k, m) -> value for the plain numbers.
    pub injected_plain: BTreeMap<(u64, u64, u64), u64>,
    /// (i, colours, m) -> value for the polarized numbers; colours is 2.
    pub injected_pol: BTreeMap<(u64, u64, u64), u64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("bad injected-table key {0:?}: need \"a,b,c\" integers")]
    BadKey(String),
    #[error("injected table must be an object with R_plain / R_pol maps")]
    BadShape,
}

impl RamseyBudget {
    pub fn new(max_n: u64) -> Self {
        RamseyBudget {
            max_n,
            ..Default::default()
        }
    }

    pub fn with_table(mut self, table: &serde_json::Value) -> Result<Self, TableError> {
        let obj = table.as_object().ok_or(TableError::BadShape)?;
        let parse_key = |k: &str| -> Result<(u64, u64, u64), TableError> {
            let parts: Vec<u64> = k
                .split(',')
                .map(|p| p.trim().parse().map_err(|_| TableError::BadKey(k.into())))
                .collect::<Result<_, _>>()?;
            if parts.len() != 3 {
                return Err(TableError::BadKey(k.into()));
            }
            Ok((parts[0], parts[1], parts[2]))
        };
        for (field, target) in [("R_plain", 0usize), ("R_pol", 1)] {
            if let Some(map) = obj.get(field) {
                let map = map.as_object().ok_or(TableError::BadShape)?;
                for (k, v) in map {
                    let key = parse_key(k)?;
                    let value = v.as_u64().ok_or_else(|| TableError::BadKey(k.clone()))?;
                    if target == 0 {
                        self.injected_plain.insert(key, value);
                    } else {
                        self.injected_pol.insert(key, value);
                    }
                }
            }
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exhaustive,
    Injected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum RamseyOutcome {
    Exact {
        value: u64,
        method: Provenance,
    },
    /// Certified lower bound (every smaller N refuted exhaustively); the
    /// upper end is open.
    Bounds {
        lower: u64,
        upper: Option<u64>,
    },
}

fn subsets_of_size(n: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u64, n: u64, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..n {
            cur.push(e);
            rec(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Does every colouring of [N]^(1..=n) by k colours admit an m-set
/// homogeneous at every arity? None = colouring space too large to scan.
fn plain_level_decides(n: u64, k: u64, m: u64, big_n: u64) -> Option<bool> {
    if big_n < m {
        return Some(false);
    }
    // cells: all subsets of sizes 1..=n (size 0 carries no information)
    let mut cells: Vec<Vec<u64>> = Vec::new();
    for j in 1..=n {
        cells.extend(subsets_of_size(big_n, j as usize));
    }
    let d = cells.len() as u32;
    let total = (k as f64).powi(d as i32) / k as f64;
    if total > FEASIBLE_COLOURINGS {
        return None;
    }
    let cell_index: BTreeMap<&Vec<u64>, usize> =
        cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    // candidate m-sets with their per-arity cell index lists
    let candidates: Vec<Vec<Vec<usize>>> = subsets_of_size(big_n, m as usize)
        .iter()
        .map(|a| {
            (1..=n)
                .map(|j| {
                    subsets_vec(a, j as usize)
                        .iter()
                        .map(|x| cell_index[x])
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut colouring = vec![0u64; d as usize];
    loop {
        let admits = candidates.iter().any(|per_arity| {
            per_arity.iter().all(|idxs| {
                idxs.windows(2)
                    .all(|w| colouring[w[0]] == colouring[w[1]])
            })
        });
        if !admits {
            return Some(false);
        }
        // next colouring; cell 0 pinned to colour 0 by symmetry
        let mut i = 1usize;
        loop {
            if i >= d as usize {
                return Some(true);
            }
            colouring[i] += 1;
            if colouring[i] < k {
                break;
            }
            colouring[i] = 0;
            i += 1;
        }
    }
}

fn subsets_vec(a: &[u64], k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(a: &[u64], start: usize, k: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..a.len() {
            cur.push(a[i]);
            rec(a, i + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(a, 0, k, &mut cur, &mut out);
    out
}

/// Smallest N such that every k-colouring of the subsets of [N] of sizes
/// 1..=n has an m-element set homogeneous at each size.
pub fn ramsey_r(n: u64, k: u64, m: u64, budget: &RamseyBudget) -> RamseyOutcome {
    assert!(n >= 1 && k >= 1 && m >= 1);
    if let Some(&v) = budget.injected_plain.get(&(n, k, m)) {
        return RamseyOutcome::Exact {
            value: v,
            method: Provenance::Injected,
        };
    }
    let mut lower = 1u64;
    for big_n in 1..=budget.max_n {
        match plain_level_decides(n, k, m, big_n) {
            Some(true) => {
                return RamseyOutcome::Exact {
                    value: big_n,
                    method: Provenance::Exhaustive,
                }
            }
            Some(false) => lower = big_n + 1,
            None => break,
        }
    }
    RamseyOutcome::Bounds { lower, upper: None }
}

/// Does every 2-colouring of the i-fold products of pairs from [K] admit
/// a_0, ..., a_{i-1} in [K]^m with the colour constant on the product of
/// their pair sets? None = too large.
fn polarized_level_decides(i: u64, m: u64, big_k: u64) -> Option<bool> {
    if big_k < m {
        return Some(false);
    }
    let pairs = subsets_of_size(big_k, 2);
    let per_axis = pairs.len();
    let d = (per_axis as f64).powi(i as i32);
    if d > 60.0 {
        return None;
    }
    let d = per_axis.pow(i as u32);
    let total = 2f64.powi(d as i32) / 2.0;
    if total > FEASIBLE_COLOURINGS {
        return None;
    }
    let pair_index: BTreeMap<&Vec<u64>, usize> =
        pairs.iter().enumerate().map(|(idx, p)| (p, idx)).collect();
    // a candidate is an i-tuple of m-sets; its cells are products of pairs
    let msets = subsets_of_size(big_k, m as usize);
    let mset_pairs: Vec<Vec<usize>> = msets
        .iter()
        .map(|a| subsets_vec(a, 2).iter().map(|p| pair_index[p]).collect())
        .collect();
    // a product cell is addressed as sum over axes of pair_idx * per_axis^axis
    let mut tuple_cells: Vec<Vec<usize>> = Vec::new();
    for t in &cartesian_power(mset_pairs.len(), i as usize) {
        let mut work: Vec<usize> = vec![0];
        for (axis, &mi) in t.iter().enumerate() {
            let stride = per_axis.pow(axis as u32);
            let mut next = Vec::with_capacity(work.len() * mset_pairs[mi].len());
            for &base in &work {
                for &pi in &mset_pairs[mi] {
                    next.push(base + pi * stride);
                }
            }
            work = next;
        }
        tuple_cells.push(work);
    }
    let mut colouring = vec![0u8; d];
    loop {
        let admits = tuple_cells.iter().any(|cells| {
            cells.is_empty()
                || cells
                    .windows(2)
                    .all(|w| colouring[w[0]] == colouring[w[1]])
        });
        if !admits {
            return Some(false);
        }
        let mut idx = if d > 0 { 1 } else { 0 };
        loop {
            if idx >= d {
                return Some(true);
            }
            colouring[idx] += 1;
            if colouring[idx] < 2 {
                break;
            }
            colouring[idx] = 0;
            idx += 1;
        }
    }
}

fn cartesian_power(n: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..i {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for v in 0..n {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Minimal K such that every 2-colouring of i-fold pair products over [K]
/// admits m-sets with a product-constant colour.
pub fn polarized_r(i: u64, m: u64, budget: &RamseyBudget) -> RamseyOutcome {
    assert!(i >= 1 && m >= 1);
    if let Some(&v) = budget.injected_pol.get(&(i, 2, m)) {
        return RamseyOutcome::Exact {
            value: v,
            method: Provenance::Injected,
        };
    }
    let mut lower = 1u64;
    for big_k in 1..=budget.max_n {
        match polarized_level_decides(i, m, big_k) {
            Some(true) => {
                return RamseyOutcome::Exact {
                    value: big_k,
                    method: Provenance::Exhaustive,
                }
            }
            Some(false) => lower = big_k + 1,
            None => break,
        }
    }
    RamseyOutcome::Bounds { lower, upper: None }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZCell {
    pub k: u64,
    /// the m argument of the underlying polarized number
    pub m_arg: u64,
    pub value: u64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiValue {
    pub value: u64,
    pub z_used: Vec<ZCell>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HiError {
    #[error("budget exceeded without a table entry for polarized cell {needed}")]
    BudgetExceededWithoutTable {
        needed: String,
        /// exhaustively certified lower bound on the missing number, if any
        certified_lower: Option<u64>,
        partial: Vec<ZCell>,
    },
}

/// Staircase height: min k with x_size <= Z(k), where Z(0) is the polarized
/// number at m=4 and Z(k+1) doubles through it. Only exact Z values decide;
/// bounds never do.
pub fn h_i(i: u64, x_size: u64, budget: &RamseyBudget) -> Result<HiValue, HiError> {
    if x_size == 0 {
        return Ok(HiValue {
            value: 0,
            z_used: Vec::new(),
        });
    }
    let mut z_used = Vec::new();
    let mut m_arg = 4u64;
    for k in 0u64..64 {
        let outcome = polarized_r(i, m_arg, budget);
        match outcome {
            RamseyOutcome::Exact { value, method } => {
                z_used.push(ZCell {
                    k,
                    m_arg,
                    value,
                    provenance: method,
                });
                if x_size <= value {
                    return Ok(HiValue { value: k, z_used });
                }
                m_arg = 2 * value;
            }
            RamseyOutcome::Bounds { lower, .. } => {
                return Err(HiError::BudgetExceededWithoutTable {
                    needed: format!("{i},2,{m_arg}"),
                    certified_lower: Some(lower),
                    partial: z_used,
                });
            }
        }
    }
    unreachable!("x_size below u64::MAX is reached within 64 doublings");
}
