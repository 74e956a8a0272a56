//! Exhaustive checks of candidate validation and the orders over the trivial
//! pair on a two-level base. Every verdict is cross-checked against a direct
//! reading of the clauses in terms of val subsets, written without pos or Σ.

use conditions::{leq_candidates, leq_n, validate_candidate, FiniteCandidate};
use creature_core::base::{BaseSystem, FinSeq};
use creature_core::cond::{IntFn2, NormConditionKind};
use creature_core::creature::{Creature, WeakCreature};
use creature_core::pair::{NormRule, TrivialPair};
use num::BigInt;
use std::collections::BTreeSet;

fn base() -> BaseSystem {
    BaseSystem::from_sizes(&[2, 2]).unwrap()
}

/// Every creature living on [level, level+1): one per nonempty set of
/// possibility pairs, with the norm the rule assigns.
fn creatures_at(level: usize, rule: NormRule, sys: &BaseSystem) -> Vec<Creature> {
    let pool: Vec<(FinSeq, FinSeq)> = sys
        .all_seqs(level)
        .unwrap()
        .into_iter()
        .flat_map(|u| {
            sys.extensions(&u, level + 1)
                .unwrap()
                .into_iter()
                .map(move |v| (u.clone(), v))
        })
        .collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << pool.len()) {
        let val: BTreeSet<_> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        let wc = WeakCreature::new(rule.apply(val.len()), val);
        out.push(Creature::try_new(wc, sys).unwrap());
    }
    out
}

/// Extensions of w through the creatures in order, by val lookup only.
fn chase(w: &FinSeq, ts: &[Creature]) -> BTreeSet<FinSeq> {
    let mut front: BTreeSet<FinSeq> = [w.clone()].into();
    for t in ts {
        front = t
            .wc
            .val
            .iter()
            .filter(|(u, _)| front.contains(u))
            .map(|(_, v)| v.clone())
            .collect();
    }
    front
}

/// The candidate clauses read directly off the val sets. For the trivial
/// pair, taking Σ subsets never adds extensions or basis elements, so the
/// full val sets decide every clause.
fn oracle_valid(w: &FinSeq, ts: &[Creature]) -> bool {
    if ts.is_empty() || !ts[0].wc.val.iter().any(|(u, _)| u == w) {
        return false;
    }
    for i in 0..ts.len() - 1 {
        if ts[i].m_up != ts[i + 1].m_dn {
            return false;
        }
        let dom: BTreeSet<&FinSeq> = ts[i + 1].wc.val.iter().map(|(u, _)| u).collect();
        if !chase(w, &ts[..=i]).iter().all(|v| dom.contains(v)) {
            return false;
        }
    }
    true
}

/// The candidate order read directly: the upper root is reached by chasing
/// val pairs through an initial run of lower creatures, and every upper
/// creature is a renormed nonempty val subset of the aligned lower creature
/// (blocks of two or more lower creatures compose to nothing here).
fn oracle_leq(rule: NormRule, c1: &FiniteCandidate, c2: &FiniteCandidate) -> bool {
    let a0 = c1.ts[0].m_dn;
    let b0 = c2.ts[0].m_dn;
    if c1.ts.last().unwrap().m_up != c2.ts.last().unwrap().m_up {
        return false;
    }
    let j0 = if b0 == a0 {
        if c2.w != c1.w {
            return false;
        }
        0
    } else {
        let Some(j) = c1.ts.iter().position(|t| t.m_up == b0) else {
            return false;
        };
        if !chase(&c1.w, &c1.ts[..=j]).contains(&c2.w) {
            return false;
        }
        j + 1
    };
    if c2.ts.len() != c1.ts.len() - j0 {
        return false;
    }
    c2.ts.iter().zip(&c1.ts[j0..]).all(|(s, t)| {
        s.m_dn == t.m_dn
            && s.m_up == t.m_up
            && !s.wc.val.is_empty()
            && s.wc.val.is_subset(&t.wc.val)
            && s.wc.nor == rule.apply(s.wc.val.len())
            && s.wc.dis.is_null()
    })
}

/// All valid candidates over the two-level base, selected by the oracle.
fn candidate_pool(rule: NormRule, sys: &BaseSystem) -> Vec<FiniteCandidate> {
    let level0 = creatures_at(0, rule, sys);
    let level1 = creatures_at(1, rule, sys);
    let mut ws: Vec<FinSeq> = vec![FinSeq::empty()];
    ws.extend(sys.all_seqs(1).unwrap());
    ws.extend(sys.all_seqs(2).unwrap());

    let mut lists: Vec<Vec<Creature>> = Vec::new();
    for t in level0.iter().chain(level1.iter()) {
        lists.push(vec![t.clone()]);
    }
    for t0 in &level0 {
        for t1 in &level1 {
            lists.push(vec![t0.clone(), t1.clone()]);
        }
    }

    let mut pool = Vec::new();
    for w in &ws {
        for ts in &lists {
            if oracle_valid(w, ts) {
                pool.push(FiniteCandidate::new(w.clone(), ts.clone()));
            }
        }
    }
    pool
}

#[test]
fn validation_matches_the_direct_clause_reading() {
    let sys = base();
    for rule in [NormRule::Log2Pos, NormRule::CardPos] {
        let pair = TrivialPair::new(sys.clone(), rule);
        let level0 = creatures_at(0, rule, &sys);
        let level1 = creatures_at(1, rule, &sys);
        let mut ws: Vec<FinSeq> = vec![FinSeq::empty()];
        ws.extend(sys.all_seqs(1).unwrap());
        ws.extend(sys.all_seqs(2).unwrap());

        let mut lists: Vec<Vec<Creature>> = Vec::new();
        for t in level0.iter().chain(level1.iter()) {
            lists.push(vec![t.clone()]);
        }
        for t0 in &level0 {
            for t1 in &level1 {
                lists.push(vec![t0.clone(), t1.clone()]);
            }
        }
        // also some lists violating the stacking clause
        for t1 in level1.iter().take(3) {
            lists.push(vec![t1.clone(), t1.clone()]);
        }

        let mut checked = 0usize;
        let mut valid = 0usize;
        for w in &ws {
            for ts in &lists {
                let c = FiniteCandidate::new(w.clone(), ts.clone());
                let got = validate_candidate(&pair, &c).is_valid();
                assert_eq!(got, oracle_valid(w, ts), "rule {rule:?}, candidate {c:?}");
                checked += 1;
                valid += got as usize;
            }
        }
        assert!(checked > 400 && valid == 60, "checked {checked}, valid {valid}");
    }
}

#[test]
fn candidate_order_matches_the_subset_oracle() {
    let sys = base();
    for rule in [NormRule::Log2Pos, NormRule::CardPos] {
        let pair = TrivialPair::new(sys.clone(), rule);
        let pool = candidate_pool(rule, &sys);
        assert_eq!(pool.len(), 60);
        let mut trues = 0usize;
        for c1 in &pool {
            for c2 in &pool {
                let got = leq_candidates(&pair, c1, c2).unwrap();
                assert_eq!(got, oracle_leq(rule, c1, c2), "{c1:?} vs {c2:?}");
                trues += got as usize;
            }
        }
        // strictly more than the 60 reflexive pairs
        assert!(trues > 100, "only {trues} comparable pairs");
    }
}

#[test]
fn candidate_order_is_reflexive_and_transitive() {
    let sys = base();
    let pair = TrivialPair::new(sys.clone(), NormRule::Log2Pos);
    let pool = candidate_pool(NormRule::Log2Pos, &sys);
    let n = pool.len();
    let mut m = vec![vec![false; n]; n];
    for (a, c1) in pool.iter().enumerate() {
        for (b, c2) in pool.iter().enumerate() {
            m[a][b] = leq_candidates(&pair, c1, c2).unwrap();
        }
    }
    for (a, row) in m.iter().enumerate() {
        assert!(row[a], "not reflexive at {a}");
    }
    for a in 0..n {
        for b in 0..n {
            if !m[a][b] {
                continue;
            }
            for c in 0..n {
                if m[b][c] {
                    assert!(m[a][c], "transitivity fails through {a} ≤ {b} ≤ {c}");
                }
            }
        }
    }
}

fn card(t: &Creature) -> u64 {
    t.wc.val.len() as u64
}

/// The stage clause read directly off the creature lists, for the card norm
/// rule where nor equals the number of val pairs.
fn oracle_stage_clause(
    kind: &NormConditionKind,
    lvl: u64,
    p: &FiniteCandidate,
    q: &FiniteCandidate,
) -> bool {
    let crossing_bound: Box<dyn Fn(&Creature) -> u64> = match kind {
        NormConditionKind::F { .. } => Box::new(move |t| lvl + t.m_dn as u64),
        _ => Box::new(move |_| lvl),
    };
    let frozen_runs_out = |j: Option<usize>| match j {
        Some(j) => q.ts.len() > j && p.ts[..=j] == q.ts[..=j],
        None => p.ts == q.ts,
    };
    match kind {
        NormConditionKind::SInfty => {
            let k = (lvl as usize).min(p.ts.len().max(q.ts.len()));
            p.ts.iter().take(k).eq(q.ts.iter().take(k))
                && (lvl as usize <= p.ts.len().min(q.ts.len())
                    || p.ts.len() == q.ts.len())
        }
        NormConditionKind::WInfty => {
            frozen_runs_out(p.ts.iter().position(|t| card(t) > crossing_bound(t)))
        }
        NormConditionKind::Infty | NormConditionKind::F { .. } => {
            frozen_runs_out(p.ts.iter().position(|t| card(t) > crossing_bound(t)))
                && q.ts
                    .iter()
                    .all(|s| card(s) > crossing_bound(s) || p.ts.contains(s))
        }
        NormConditionKind::Empty => unreachable!(),
    }
}

#[test]
fn approximation_orders_match_the_direct_clause_reading() {
    let sys = base();
    let rule = NormRule::CardPos;
    let pair = TrivialPair::new(sys.clone(), rule);
    let pool = candidate_pool(rule, &sys);
    let n = pool.len();
    let mut leq = vec![vec![false; n]; n];
    for (a, c1) in pool.iter().enumerate() {
        for (b, c2) in pool.iter().enumerate() {
            leq[a][b] = leq_candidates(&pair, c1, c2).unwrap();
        }
    }
    let f = IntFn2::from_fn(|k, l| BigInt::from(k + l), 9, 4);
    let kinds = [
        NormConditionKind::SInfty,
        NormConditionKind::WInfty,
        NormConditionKind::Infty,
        NormConditionKind::F { f, k_max: 9 },
    ];
    let mut nontrivial = vec![0usize; kinds.len()];
    for (ki, kind) in kinds.iter().enumerate() {
        let mut prev: Option<Vec<Vec<bool>>> = None;
        for stage_n in 0..3u64 {
            let mut cur = vec![vec![false; n]; n];
            for (a, p) in pool.iter().enumerate() {
                for (b, q) in pool.iter().enumerate() {
                    let got = leq_n(&pair, kind, stage_n, p, q).unwrap();
                    let expect =
                        p.w == q.w && leq[a][b] && oracle_stage_clause(kind, stage_n + 1, p, q);
                    assert_eq!(got, expect, "kind {kind:?} n {stage_n} {p:?} vs {q:?}");
                    cur[a][b] = got;
                    if got && stage_n == 0 && a != b {
                        nontrivial[ki] += 1;
                    }
                }
            }
            if let Some(prev) = &prev {
                for a in 0..n {
                    for b in 0..n {
                        // each stage refines the one below it
                        assert!(!cur[a][b] || prev[a][b]);
                    }
                }
            }
            prev = Some(cur);
        }
    }
    assert!(
        nontrivial.iter().all(|&c| c > 0),
        "some kind only relates equal candidates: {nontrivial:?}"
    );
}

#[test]
fn fusion_diagonal_dominates_short_chains() {
    let sys = base();
    let rule = NormRule::CardPos;
    let pair = TrivialPair::new(sys.clone(), rule);
    let pool = candidate_pool(rule, &sys);
    let n = pool.len();
    let f = IntFn2::from_fn(|k, l| BigInt::from(k + l), 9, 4);
    let kinds = [
        NormConditionKind::SInfty,
        NormConditionKind::WInfty,
        NormConditionKind::Infty,
        NormConditionKind::F { f, k_max: 9 },
    ];
    for kind in &kinds {
        let mut stage: Vec<Vec<Vec<usize>>> = Vec::new();
        for stage_n in 0..3u64 {
            let mut adj = vec![Vec::new(); n];
            for (a, p) in pool.iter().enumerate() {
                for (b, q) in pool.iter().enumerate() {
                    if leq_n(&pair, kind, stage_n, p, q).unwrap() {
                        adj[a].push(b);
                    }
                }
            }
            stage.push(adj);
        }
        let mut chains = 0usize;
        let mut moving = 0usize;
        for p0 in 0..n {
            for &p1 in &stage[0][p0] {
                for &p2 in &stage[1][p1] {
                    for &p3 in &stage[2][p2] {
                        chains += 1;
                        if p0 != p3 {
                            moving += 1;
                        }
                        // the endpoint dominates every link at its stage
                        assert!(stage[0][p0].contains(&p3));
                        assert!(stage[1][p1].contains(&p3));
                        assert!(stage[2][p2].contains(&p3));
                    }
                }
            }
        }
        assert!(chains > 0 && moving > 0, "kind {kind:?}: {chains} chains, {moving} moving");
    }
}
