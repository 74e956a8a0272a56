//! Independent oracles for the split-norm and transversal-norm values.
//! These deliberately share no code with the recursive evaluators in `dp`;
//! tests cross-check the two routes against each other.

use std::collections::BTreeSet;

pub type SetFam = Vec<BTreeSet<u64>>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("family member {0:?} has fewer than two elements")]
    MemberTooSmall(BTreeSet<u64>),
    #[error("family member is empty")]
    EmptyMember,
    #[error("family is empty")]
    EmptyFamily,
}

/// All partitions of `universe` into at most `max_parts` nonempty blocks,
/// via restricted-growth labelings.
pub fn set_partitions(universe: &[u64], max_parts: usize) -> Vec<Vec<BTreeSet<u64>>> {
    let n = universe.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut labels = vec![0usize; n];
    loop {
        let parts = labels.iter().copied().max().unwrap() + 1;
        if parts <= max_parts {
            let mut blocks = vec![BTreeSet::new(); parts];
            for (i, &l) in labels.iter().enumerate() {
                blocks[l].insert(universe[i]);
            }
            out.push(blocks);
        }
        // next restricted-growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let cap = labels[..i].iter().copied().max().unwrap() + 1;
            if labels[i] < cap {
                labels[i] += 1;
                for l in labels.iter_mut().skip(i + 1) {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Split-norm value by the partition characterization: the largest k+2 such
/// that every partition of the universe into at most 2^(k+1) parts leaves
/// some member inside a single block; 0 for the empty family, at least 1
/// otherwise.
pub fn dp1_partition_oracle(family: &SetFam) -> Result<u64, FamilyError> {
    for a in family {
        if a.len() < 2 {
            return Err(FamilyError::MemberTooSmall(a.clone()));
        }
    }
    if family.is_empty() {
        return Ok(0);
    }
    let universe: Vec<u64> = family
        .iter()
        .flat_map(|a| a.iter().copied())
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    let mut value = 1u64;
    for k in 0u32.. {
        let max_parts = 1usize << (k + 1);
        let all_blocked = set_partitions(&universe, max_parts).iter().all(|blocks| {
            family
                .iter()
                .any(|a| blocks.iter().any(|b| a.is_subset(b)))
        });
        if all_blocked {
            value = k as u64 + 2;
        } else {
            break;
        }
        if max_parts >= universe.len() {
            // more parts than elements changes nothing further
            break;
        }
    }
    Ok(value)
}

/// Minimum transversal size by plain exhaustive subset search, smallest
/// first.
pub fn dp2_exhaustive_oracle(family: &SetFam) -> Result<u64, FamilyError> {
    if family.is_empty() {
        return Err(FamilyError::EmptyFamily);
    }
    for a in family {
        if a.is_empty() {
            return Err(FamilyError::EmptyMember);
        }
    }
    let universe: Vec<u64> = family
        .iter()
        .flat_map(|a| a.iter().copied())
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    let n = universe.len();
    assert!(n <= 30, "oracle is for small universes");
    for size in 0..=n {
        for mask in 0u64..(1 << n) {
            if (mask.count_ones() as usize) != size {
                continue;
            }
            let picked: BTreeSet<u64> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if family.iter().all(|a| !a.is_disjoint(&picked)) {
                return Ok(size as u64);
            }
        }
    }
    unreachable!("the whole universe is always a transversal")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[u64]]) -> SetFam {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn partition_counts() {
        let u: Vec<u64> = (0..4).collect();
        let all = set_partitions(&u, 4);
        assert_eq!(all.len(), 15); // Bell(4)
        let two = set_partitions(&u, 2);
        assert_eq!(two.len(), 8); // S(4,1)+S(4,2) = 1+7
    }

    #[test]
    fn oracle_base_cases() {
        assert_eq!(dp1_partition_oracle(&fam(&[])).unwrap(), 0);
        assert_eq!(dp1_partition_oracle(&fam(&[&[0, 1]])).unwrap(), 1);
        assert_eq!(
            dp1_partition_oracle(&fam(&[&[0]])),
            Err(FamilyError::MemberTooSmall([0].into_iter().collect()))
        );
    }

    #[test]
    fn oracle_on_complete_pair_families() {
        // all 2-subsets of a 4-element universe
        let mut pairs = Vec::new();
        for i in 0..4u64 {
            for j in i + 1..4 {
                pairs.push([i, j].into_iter().collect());
            }
        }
        assert_eq!(dp1_partition_oracle(&pairs).unwrap(), 2);
        // and of an 8-element universe
        let mut pairs8 = Vec::new();
        for i in 0..8u64 {
            for j in i + 1..8 {
                pairs8.push([i, j].into_iter().collect());
            }
        }
        assert_eq!(dp1_partition_oracle(&pairs8).unwrap(), 3);
    }

    #[test]
    fn transversal_oracle() {
        assert_eq!(dp2_exhaustive_oracle(&fam(&[&[0, 1], &[1, 2]])).unwrap(), 1);
        assert_eq!(dp2_exhaustive_oracle(&fam(&[&[0], &[1]])).unwrap(), 2);
        assert_eq!(
            dp2_exhaustive_oracle(&fam(&[&[0, 1], &[2, 3], &[4, 5]])).unwrap(),
            3
        );
        assert_eq!(dp2_exhaustive_oracle(&fam(&[])), Err(FamilyError::EmptyFamily));
    }
}
