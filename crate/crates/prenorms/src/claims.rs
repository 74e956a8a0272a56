//! Checkers for the combinatorial bounds behind the dp-family pre-norms:
//! the half-split bound, the counting bound over index functions, and the
//! simultaneous split for families of high dp1 value. Each checker verifies
//! the stated hypothesis and then decides the conclusion exactly.

use crate::dp::Dp1Cache;
use crate::dp::dp1;
use crate::oracle::{FamilyError, SetFam};
use creature_core::NormValue;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClaimError {
    #[error("A must be a subset of M")]
    NotSubset,
    #[error("M must be nonempty")]
    EmptyGround,
    #[error("the density a must lie strictly between 0 and 1")]
    AlphaOutOfRange,
    #[error("index function value outside [0, N)")]
    RangeOverflow,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitBound {
    pub left: bool,
    pub right: bool,
}

impl SplitBound {
    pub fn holds(&self) -> bool {
        self.left || self.right
    }
}

/// log_{2+k}|side| >= log_{2+k}|M| - log_{2+k}2, decided by the exact
/// comparison of the shifted logarithms.
fn half_side(side_card: u64, m_card: u64, k: u32) -> bool {
    if side_card == 0 {
        return false;
    }
    let b = 2 + k;
    let lhs = NormValue::log(BigInt::from(2 * side_card), b);
    let rhs = NormValue::log(BigInt::from(m_card), b);
    lhs.try_cmp(&rhs).expect("same-base comparison is total") != Ordering::Less
}

/// For A ⊆ M: one of A, M∖A keeps dp0 value at least dp0(M) - log_{2+k}2.
pub fn split_bound(m: &BTreeSet<u64>, a: &BTreeSet<u64>, k: u32) -> Result<SplitBound, ClaimError> {
    if m.is_empty() {
        return Err(ClaimError::EmptyGround);
    }
    if !a.is_subset(m) {
        return Err(ClaimError::NotSubset);
    }
    let m_card = m.len() as u64;
    let a_card = a.len() as u64;
    Ok(SplitBound {
        left: half_side(a_card, m_card, k),
        right: half_side(m_card - a_card, m_card, k),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingBound {
    pub hypothesis_holds: bool,
    /// n < N with dp0_k of the fibre at least dp0_k(M) - 1
    pub good_indices: Vec<u64>,
    /// conclusion a*N <= |good|; None when the hypothesis fails
    pub holds: Option<bool>,
}

/// log_{2+k}|u| >= log_{2+k}(M) - 1, decided exactly.
pub fn fibre_is_large(u_card: u64, m_card: u64, k: u32) -> bool {
    if u_card == 0 {
        return false;
    }
    let b = 2 + k;
    let lhs = NormValue::log(BigInt::from(u_card), b).add_rat(&BigRational::one());
    let rhs = NormValue::log(BigInt::from(m_card), b);
    lhs.try_cmp(&rhs).expect("same-base comparison is total") != Ordering::Less
}

/// Counting bound: if every g(m) covers at least N(a(k+1)+1)/(k+2) indices,
/// then at least a*N indices n have a fibre {m : n in g(m)} of dp0 value
/// within 1 of dp0(M).
pub fn counting_bound(
    a: &BigRational,
    k: u32,
    big_n: u64,
    g: &[BTreeSet<u64>],
) -> Result<CountingBound, ClaimError> {
    if *a <= BigRational::zero() || *a >= BigRational::one() {
        return Err(ClaimError::AlphaOutOfRange);
    }
    if g.is_empty() {
        return Err(ClaimError::EmptyGround);
    }
    if g.iter().any(|s| s.iter().any(|&n| n >= big_n)) {
        return Err(ClaimError::RangeOverflow);
    }
    let m_card = g.len() as u64;
    let kk = BigRational::from_integer(BigInt::from(k));
    let need = BigRational::from_integer(BigInt::from(big_n))
        * (a * (&kk + BigRational::one()) + BigRational::one())
        / (&kk + BigRational::from_integer(BigInt::from(2)));
    let hypothesis_holds = g
        .iter()
        .all(|gm| BigRational::from_integer(BigInt::from(gm.len() as u64)) >= need);
    let good_indices: Vec<u64> = (0..big_n)
        .filter(|&n| {
            let u_card = g.iter().filter(|gm| gm.contains(&n)).count() as u64;
            fibre_is_large(u_card, m_card, k)
        })
        .collect();
    let holds = if hypothesis_holds {
        let got = BigRational::from_integer(BigInt::from(good_indices.len() as u64));
        Some(got >= a * BigRational::from_integer(BigInt::from(big_n)))
    } else {
        None
    };
    Ok(CountingBound {
        hypothesis_holds,
        good_indices,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneousSplit {
    pub hypothesis_holds: bool,
    pub loss: u64,
    pub witness: Option<BTreeSet<u64>>,
    /// None when the hypothesis fails
    pub holds: Option<bool>,
}

/// If dp1(A_i) >= m for each of k families and m > k(k+3)/2, some X splits
/// every family: the members inside X and the members avoiding X both keep
/// dp1 value at least m - k(k+3)/2.
pub fn simultaneous_split(
    families: &[SetFam],
    m: u64,
    cache: &mut Dp1Cache,
) -> Result<SimultaneousSplit, ClaimError> {
    let k = families.len() as u64;
    let loss = k * (k + 3) / 2;
    let mut hypothesis_holds = m > loss;
    for fam in families {
        if dp1(fam, cache)? < m {
            hypothesis_holds = false;
        }
    }
    if !hypothesis_holds {
        return Ok(SimultaneousSplit {
            hypothesis_holds,
            loss,
            witness: None,
            holds: None,
        });
    }
    let target = m - loss;
    let universe: Vec<u64> = families
        .iter()
        .flat_map(|fam| fam.iter().flatten().copied())
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    assert!(universe.len() <= 24, "split search is exponential in the support");
    let mut witness = None;
    'xs: for mask in 0u64..(1 << universe.len()) {
        let x: BTreeSet<u64> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        for fam in families {
            let inside: SetFam = fam.iter().filter(|a| a.is_subset(&x)).cloned().collect();
            let outside: SetFam = fam.iter().filter(|a| a.is_disjoint(&x)).cloned().collect();
            if dp1(&inside, cache)? < target || dp1(&outside, cache)? < target {
                continue 'xs;
            }
        }
        witness = Some(x);
        break;
    }
    let holds = Some(witness.is_some());
    Ok(SimultaneousSplit {
        hypothesis_holds,
        loss,
        witness,
        holds,
    })
}
