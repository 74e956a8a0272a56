//! Core objects of the finite creature workbench: base systems and finite
//! sequences, weak creatures with exact norm values, the creating-pair
//! interface with basis/pos computation, growth checks for norm-condition
//! parameters, and norm-condition evaluation on finite prefixes.

pub mod base;
pub mod cond;
pub mod creature;
pub mod fast;
pub mod norm;
pub mod pair;
pub mod pos;

pub use base::{BaseError, BaseSystem, FinSeq, Token};
pub use cond::{norm_condition_check, CondError, ConditionReport, IntFn2, NormConditionKind};
pub use creature::{
    creature_from_pairs, validate_weak_creature, Creature, CreatureError, TreeCreature,
    ValidationReport, WeakCreature,
};
pub use fast::{check_fast, phi_h, FastCounterexample, FastError, FastMode, FastVerdict};
pub use norm::{NormError, NormValue, MAX_CMP_PRECISION};
pub use pair::{CreatingPairInstance, NormRule, PairError, SigmaResult, TrivialPair};
pub use pos::{basis, pos, pos_star, PosResult, DEFAULT_POS_BUDGET};
