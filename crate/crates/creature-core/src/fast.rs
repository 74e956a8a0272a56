//! Growth-rate checkers for the two-argument functions that parameterize
//! norm conditions, verified cell-by-cell on a bounded grid.

use crate::base::{BaseError, BaseSystem};
use num::BigInt;
use num::One;
use serde::Serialize;

/// |H(0)| * ... * |H(l-1)|; the empty product is 1.
pub fn phi_h(sys: &BaseSystem, l: usize) -> Result<BigInt, BaseError> {
    if l > sys.num_levels() {
        return Err(BaseError::LevelOutOfRange(l, sys.num_levels()));
    }
    let mut p = BigInt::one();
    for i in 0..l {
        p *= BigInt::from(sys.levels[i].len());
    }
    Ok(p)
}

pub enum FastMode<'a> {
    /// monotone in l, and 2 f(k,l) < f(k+1,l)
    Fast,
    /// additionally 2^phi(l) (f(k,l) + phi(l) + 2) < f(k+1,l)
    HFast(&'a BaseSystem),
    /// additionally f(k+1,l) > f(k,l) + F(l) * phi(l) * l
    HFFast(&'a BaseSystem, &'a dyn Fn(usize) -> BigInt),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FastError {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error("phi(l) too large to exponentiate at l={0}")]
    PhiOverflow(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FastCounterexample {
    pub k: usize,
    pub l: usize,
    pub clause: String,
    /// True when the strict inequality fails with equality, i.e. the
    /// non-strict form still holds at this cell.
    pub equality_boundary: bool,
}

/// Grid-scoped verdict; holds says the clauses are satisfied for all
/// k < k_max, l < l_max, nothing beyond.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FastVerdict {
    pub holds: bool,
    pub k_max: usize,
    pub l_max: usize,
    pub counterexample: Option<FastCounterexample>,
}

pub fn check_fast(
    f: &dyn Fn(usize, usize) -> BigInt,
    mode: &FastMode,
    k_max: usize,
    l_max: usize,
) -> Result<FastVerdict, FastError> {
    let phi = |l: usize| -> Result<BigInt, BaseError> {
        match mode {
            FastMode::Fast => Ok(BigInt::one()),
            FastMode::HFast(sys) | FastMode::HFFast(sys, _) => phi_h(sys, l),
        }
    };
    let mut counterexample = None;
    'grid: for k in 0..k_max {
        for l in 0..l_max {
            let here = f(k, l);
            let up_l = f(k, l + 1);
            if here > up_l {
                counterexample = Some(FastCounterexample {
                    k,
                    l,
                    clause: "f(k,l) <= f(k,l+1)".to_owned(),
                    equality_boundary: false,
                });
                break 'grid;
            }
            let up_k = f(k + 1, l);
            let doubled = BigInt::from(2) * &here;
            if doubled >= up_k {
                counterexample = Some(FastCounterexample {
                    k,
                    l,
                    clause: "2 f(k,l) < f(k+1,l)".to_owned(),
                    equality_boundary: doubled == up_k,
                });
                break 'grid;
            }
            match mode {
                FastMode::Fast => {}
                FastMode::HFast(_) => {
                    let p = phi(l)?;
                    let shift =
                        u64::try_from(&p).map_err(|_| FastError::PhiOverflow(l))?;
                    let lhs = (&here + &p + BigInt::from(2)) << shift;
                    if lhs >= up_k {
                        counterexample = Some(FastCounterexample {
                            k,
                            l,
                            clause: "2^phi(l) (f(k,l)+phi(l)+2) < f(k+1,l)".to_owned(),
                            equality_boundary: lhs == up_k,
                        });
                        break 'grid;
                    }
                }
                FastMode::HFFast(_, big_f) => {
                    let p = phi(l)?;
                    let bound = &here + big_f(l) * &p * BigInt::from(l);
                    if up_k <= bound {
                        counterexample = Some(FastCounterexample {
                            k,
                            l,
                            clause: "f(k+1,l) > f(k,l) + F(l) phi(l) l".to_owned(),
                            equality_boundary: up_k == bound,
                        });
                        break 'grid;
                    }
                }
            }
        }
    }
    Ok(FastVerdict {
        holds: counterexample.is_none(),
        k_max,
        l_max,
        counterexample,
    })
}
