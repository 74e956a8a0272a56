//! The covering norm over a finite base set: log2 of 1 plus the largest k
//! such that every k-subset of the base lies inside some family member.

use crate::oracle::SetFam;
use creature_core::NormValue;
use num::BigInt;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("family member equals the whole base set")]
pub struct MemberEqualsBase;

fn k_subsets(n: u64, k: usize) -> Vec<BTreeSet<u64>> {
    let mut out = Vec::new();
    let mut current = BTreeSet::new();
    fn rec(start: u64, n: u64, k: usize, current: &mut BTreeSet<u64>, out: &mut Vec<BTreeSet<u64>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for e in start..n {
            current.insert(e);
            rec(e + 1, n, k, current, out);
            current.remove(&e);
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Largest k with every k-subset of [0,n) inside some member; 0 when the
/// family is empty (convention: the paper assumes a member exists).
pub fn h_n_raw(n: u64, family: &SetFam) -> Result<u64, MemberEqualsBase> {
    let base: BTreeSet<u64> = (0..n).collect();
    for a in family {
        if *a == base {
            return Err(MemberEqualsBase);
        }
    }
    if family.is_empty() {
        return Ok(0);
    }
    let mut best = 0;
    for k in 1..=n as usize {
        let covered = k_subsets(n, k)
            .iter()
            .all(|x| family.iter().any(|a| x.is_subset(a)));
        if covered {
            best = k as u64;
        } else {
            break;
        }
    }
    Ok(best)
}

/// log2(1 + h_n_raw).
pub fn h_n(n: u64, family: &SetFam) -> Result<NormValue, MemberEqualsBase> {
    let k = h_n_raw(n, family)?;
    Ok(NormValue::log(BigInt::from(1 + k), 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[u64]]) -> SetFam {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn two_point_base() {
        // k=1 holds, k=2 fails
        assert_eq!(h_n(2, &fam(&[&[0], &[1]])).unwrap(), NormValue::from_int(1));
    }

    #[test]
    fn all_pairs_of_three() {
        let v = h_n(3, &fam(&[&[0, 1], &[0, 2], &[1, 2]])).unwrap();
        assert_eq!(v, NormValue::log(BigInt::from(3), 2));
    }

    #[test]
    fn conventions_and_errors() {
        assert_eq!(h_n(3, &fam(&[])).unwrap(), NormValue::zero());
        assert_eq!(h_n(2, &fam(&[&[0, 1]])), Err(MemberEqualsBase));
    }

    #[test]
    fn three_way_niceness_up_to_four() {
        // for B ⊆ C ⊆ family with H(C) > 1:
        //   max(H(B), H(C∖B)) >= H(C) - 1, exhaustive over subfamilies
        use num::rational::BigRational;
        use num::One;
        use std::cmp::Ordering;
        for n in 2u64..=4 {
            // family: all proper nonempty subsets of [0,n)
            let mut members: Vec<BTreeSet<u64>> = Vec::new();
            for mask in 1u64..(1 << n) - 1 {
                members.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
            }
            let m = members.len();
            assert!(m <= 14);
            // raw k value per subfamily mask
            let raw: Vec<u64> = (0u64..(1 << m))
                .map(|mask| {
                    let fam: SetFam = members
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, s)| s.clone())
                        .collect();
                    h_n_raw(n, &fam).unwrap()
                })
                .collect();
            // exact log comparisons, tabulated over the few attained k's
            let kmax = *raw.iter().max().unwrap() as usize;
            let above_bound = |kb: u64, kc: u64| -> bool {
                let hb = NormValue::log(BigInt::from(1 + kb), 2);
                let bound = NormValue::log(BigInt::from(1 + kc), 2).sub_rat(&BigRational::one());
                hb.try_cmp(&bound).unwrap() != Ordering::Less
            };
            let mut table = vec![vec![false; kmax + 1]; kmax + 1];
            let mut exceeds_one = vec![false; kmax + 1];
            for kb in 0..=kmax {
                exceeds_one[kb] = NormValue::log(BigInt::from(1 + kb as u64), 2)
                    .cmp_rational(&BigRational::one())
                    .unwrap()
                    == Ordering::Greater;
                for kc in 0..=kmax {
                    table[kb][kc] = above_bound(kb as u64, kc as u64);
                }
            }
            for cmask in 0u64..(1 << m) {
                let kc = raw[cmask as usize] as usize;
                if !exceeds_one[kc] {
                    continue;
                }
                let mut bmask = cmask;
                loop {
                    let kb = raw[bmask as usize] as usize;
                    let kr = raw[(cmask & !bmask) as usize] as usize;
                    assert!(
                        table[kb][kc] || table[kr][kc],
                        "n={n} C mask {cmask:b} B mask {bmask:b}"
                    );
                    if bmask == 0 {
                        break;
                    }
                    bmask = (bmask - 1) & cmask;
                }
            }
        }
    }
}
