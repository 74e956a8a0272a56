//! Pre-norms on finite carriers: the dp-family of set/family norms with two
//! independent reference oracles, the covering norm h_N, niceness checking,
//! truncation, Ramsey-number calculators, and the combinatorial bound
//! checkers that justify them.

pub mod claims;
pub mod dp;
pub mod hn;
pub mod oracle;
pub mod prenorm;
pub mod ramsey;

pub use claims::{
    counting_bound, fibre_is_large, simultaneous_split, split_bound, ClaimError, CountingBound,
    SimultaneousSplit, SplitBound,
};
pub use dp::{canonical_family, dp, dp0_shifted, dp1, dp2, Dp1Cache, DpError};
pub use hn::{h_n, h_n_raw, MemberEqualsBase};
pub use oracle::{dp1_partition_oracle, dp2_exhaustive_oracle, set_partitions, FamilyError, SetFam};
pub use prenorm::{
    check_prenorm, truncate, PreNorm, PreNormError, PreNormVerdict, PreNormViolation,
};
pub use ramsey::{
    h_i, polarized_r, ramsey_r, HiError, HiValue, Provenance, RamseyBudget, RamseyOutcome,
    TableError, ZCell,
};
