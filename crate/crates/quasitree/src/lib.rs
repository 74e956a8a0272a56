//! Finite quasi trees: downward closures, successor structure, fronts, and
//! the norm-level antichains of tree-condition prefixes.

use creature_core::{FinSeq, TreeCreature};
use num::rational::BigRational;
use num::BigInt;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TreeError {
    #[error("no root: the node set has no least element under the prefix order")]
    NoRoot,
    #[error("node {0} is not in the tree")]
    NodeOutsideTree(FinSeq),
    #[error("interior node {0} carries no creature")]
    MissingCreature(FinSeq),
    #[error("frontier node {0} carries a creature")]
    CreatureAtFrontier(FinSeq),
    #[error("creature at {at} has root {root}")]
    WrongRoot { at: FinSeq, root: FinSeq },
    #[error("creature at {0} does not offer exactly the tree successors")]
    SuccessorMismatch(FinSeq),
}

/// A finite set of sequences with a least element under the prefix order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QuasiTree {
    nodes: BTreeSet<FinSeq>,
}

impl<'de> Deserialize<'de> for QuasiTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let nodes = BTreeSet::<FinSeq>::deserialize(d)?;
        QuasiTree::new(nodes).map_err(serde::de::Error::custom)
    }
}

impl QuasiTree {
    pub fn new(nodes: impl IntoIterator<Item = FinSeq>) -> Result<Self, TreeError> {
        let t = QuasiTree {
            nodes: nodes.into_iter().collect(),
        };
        t.root()?;
        Ok(t)
    }

    pub fn nodes(&self) -> &BTreeSet<FinSeq> {
        &self.nodes
    }

    pub fn contains(&self, node: &FinSeq) -> bool {
        self.nodes.contains(node)
    }

    pub fn root(&self) -> Result<&FinSeq, TreeError> {
        let mut shortest: Option<&FinSeq> = None;
        for n in &self.nodes {
            shortest = Some(match shortest {
                None => n,
                Some(s) => {
                    if n.len() < s.len() {
                        n
                    } else {
                        s
                    }
                }
            });
        }
        let root = shortest.ok_or(TreeError::NoRoot)?;
        for n in &self.nodes {
            if !root.is_prefix_of(n) {
                return Err(TreeError::NoRoot);
            }
        }
        Ok(root)
    }

    /// Prefix-minimal proper extensions of a node within the tree.
    pub fn suc(&self, node: &FinSeq) -> BTreeSet<FinSeq> {
        let above: Vec<&FinSeq> = self
            .nodes
            .iter()
            .filter(|n| node.is_strict_prefix_of(n))
            .collect();
        above
            .iter()
            .filter(|n| {
                !above
                    .iter()
                    .any(|m| m != *n && m.is_strict_prefix_of(n))
            })
            .map(|n| (*n).clone())
            .collect()
    }

    /// Nodes with no proper extension in the tree.
    pub fn max_nodes(&self) -> BTreeSet<FinSeq> {
        self.nodes
            .iter()
            .filter(|n| !self.nodes.iter().any(|m| n.is_strict_prefix_of(m)))
            .cloned()
            .collect()
    }

    /// Downward closure: all initial segments of members, the empty sequence
    /// included.
    pub fn dcl(&self) -> BTreeSet<FinSeq> {
        let mut out = BTreeSet::new();
        for n in &self.nodes {
            for l in 0..=n.len() {
                out.insert(n.restrict(l));
            }
        }
        out
    }
}

/// Well-foundedness of a finite tree is automatic; the report says so.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellFounded {
    pub holds: bool,
    pub finiteness_caveat: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedParts {
    pub root: FinSeq,
    pub dcl: BTreeSet<FinSeq>,
    pub suc: BTreeMap<FinSeq, BTreeSet<FinSeq>>,
    pub split: BTreeSet<FinSeq>,
    pub max: BTreeSet<FinSeq>,
    pub hat: BTreeSet<FinSeq>,
    pub is_tree: bool,
    pub is_well_founded: WellFounded,
}

pub fn derived_parts(t: &QuasiTree) -> Result<DerivedParts, TreeError> {
    let root = t.root()?.clone();
    let dcl = t.dcl();
    let mut suc = BTreeMap::new();
    let mut split = BTreeSet::new();
    for n in t.nodes() {
        let s = t.suc(n);
        if s.len() >= 2 {
            split.insert(n.clone());
        }
        suc.insert(n.clone(), s);
    }
    let max = t.max_nodes();
    let hat: BTreeSet<FinSeq> = t.nodes().difference(&max).cloned().collect();
    let is_tree = dcl == *t.nodes();
    Ok(DerivedParts {
        root,
        dcl,
        suc,
        split,
        max,
        hat,
        is_tree,
        is_well_founded: WellFounded {
            holds: true,
            finiteness_caveat: "finite tree: well-foundedness is automatic",
        },
    })
}

/// F is a front of T: a prefix-antichain meeting every maximal node's path.
pub fn is_front(t: &QuasiTree, f: &BTreeSet<FinSeq>) -> bool {
    if !f.iter().all(|n| t.contains(n)) {
        return false;
    }
    for a in f {
        for b in f {
            if a != b && a.is_prefix_of(b) {
                return false;
            }
        }
    }
    t.max_nodes()
        .iter()
        .all(|m| f.iter().any(|a| a.is_prefix_of(m)))
}

/// A finite tree condition prefix: a tree whose interior nodes each carry a
/// tree creature offering exactly the tree successors; frontier nodes are
/// open.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeConditionPrefix {
    pub tree: QuasiTree,
    pub creatures: BTreeMap<FinSeq, TreeCreature>,
}

impl TreeConditionPrefix {
    pub fn new(
        tree: QuasiTree,
        creatures: BTreeMap<FinSeq, TreeCreature>,
    ) -> Result<Self, TreeError> {
        tree.root()?;
        let max = tree.max_nodes();
        for (node, c) in &creatures {
            if !tree.contains(node) {
                return Err(TreeError::NodeOutsideTree(node.clone()));
            }
            if max.contains(node) {
                return Err(TreeError::CreatureAtFrontier(node.clone()));
            }
            if &c.root != node {
                return Err(TreeError::WrongRoot {
                    at: node.clone(),
                    root: c.root.clone(),
                });
            }
            if c.branches() != tree.suc(node) {
                return Err(TreeError::SuccessorMismatch(node.clone()));
            }
        }
        for node in tree.nodes() {
            if !max.contains(node) && !creatures.contains_key(node) {
                return Err(TreeError::MissingCreature(node.clone()));
            }
        }
        Ok(TreeConditionPrefix { tree, creatures })
    }

    pub fn interior(&self) -> impl Iterator<Item = &FinSeq> {
        self.creatures.keys()
    }

    fn nor_exceeds(&self, node: &FinSeq, n: i64) -> bool {
        let c = &self.creatures[node];
        c.wc
            .nor
            .cmp_rational(&BigRational::from_integer(BigInt::from(n)))
            .map(|o| o == Ordering::Greater)
            .unwrap_or(false)
    }
}

fn path_key(seq: &FinSeq) -> String {
    seq.0.join(",")
}

fn parse_path(s: &str) -> FinSeq {
    if s.is_empty() {
        FinSeq::empty()
    } else {
        FinSeq(s.split(',').map(str::to_owned).collect())
    }
}

impl Serialize for TreeConditionPrefix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("tree", &self.tree)?;
        let keyed: BTreeMap<String, &TreeCreature> = self
            .creatures
            .iter()
            .map(|(k, v)| (path_key(k), v))
            .collect();
        m.serialize_entry("creatures", &keyed)?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for TreeConditionPrefix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            tree: QuasiTree,
            creatures: BTreeMap<String, TreeCreature>,
        }
        let raw = Raw::deserialize(d)?;
        let creatures = raw
            .creatures
            .into_iter()
            .map(|(k, v)| (parse_path(&k), v))
            .collect();
        TreeConditionPrefix::new(raw.tree, creatures).map_err(serde::de::Error::custom)
    }
}

/// Norm-level antichains of a prefix, on the finite truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntichainLevels {
    pub b_n: BTreeSet<FinSeq>,
    pub f_n_m: BTreeSet<FinSeq>,
    pub b_n_is_front: bool,
    pub f_n_m_is_front: bool,
    /// Always true: sets are computed on a finite truncation, with the
    /// frontier standing in for the missing tail.
    pub truncation: bool,
}

/// B_n: prefix-minimal interior nodes all of whose interior extensions
/// (themselves included) have norm above n. F^m_n: interior nodes of norm
/// above n with exactly m strict predecessors of norm above n.
pub fn antichain_levels(p: &TreeConditionPrefix, n: i64, m: usize) -> AntichainLevels {
    let qualifying: BTreeSet<&FinSeq> = p
        .interior()
        .filter(|eta| {
            p.interior()
                .filter(|nu| eta.is_prefix_of(nu))
                .all(|nu| p.nor_exceeds(nu, n))
        })
        .collect();
    let b_n: BTreeSet<FinSeq> = qualifying
        .iter()
        .filter(|eta| {
            !qualifying
                .iter()
                .any(|other| other != *eta && other.is_strict_prefix_of(eta))
        })
        .map(|eta| (*eta).clone())
        .collect();
    let f_n_m: BTreeSet<FinSeq> = p
        .interior()
        .filter(|eta| p.nor_exceeds(eta, n))
        .filter(|eta| {
            let preds = p
                .interior()
                .filter(|nu| nu.is_strict_prefix_of(eta) && p.nor_exceeds(nu, n))
                .count();
            preds == m
        })
        .cloned()
        .collect();
    AntichainLevels {
        b_n_is_front: is_front(&p.tree, &b_n),
        f_n_m_is_front: is_front(&p.tree, &f_n_m),
        b_n,
        f_n_m,
        truncation: true,
    }
}
