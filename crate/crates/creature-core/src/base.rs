//! Finite base systems: a sequence of finite alphabets, one per level, with
//! a distinguished zero letter at each level, and the finite sequences over
//! them.

use serde::{Deserialize, Serialize};
use std::fmt;

pub type Token = String;

/// A finite sequence whose i-th entry is drawn from level i of a base
/// system. Ordered lexicographically (entry-wise, shorter prefix first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSeq(pub Vec<Token>);

impl FinSeq {
    pub fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Strict prefix: self is an initial segment of other and shorter.
    pub fn is_strict_prefix_of(&self, other: &FinSeq) -> bool {
        self.0.len() < other.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn is_prefix_of(&self, other: &FinSeq) -> bool {
        self.0.len() <= other.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn concat(&self, tail: &[Token]) -> FinSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        FinSeq(v)
    }

    pub fn restrict(&self, len: usize) -> FinSeq {
        FinSeq(self.0[..len].to_vec())
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0.join(","))
    }
}

impl From<Vec<&str>> for FinSeq {
    fn from(v: Vec<&str>) -> Self {
        FinSeq(v.into_iter().map(str::to_owned).collect())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BaseError {
    #[error("level {0} has fewer than two letters")]
    LevelTooSmall(usize),
    #[error("zero letter at level {0} is not in that level")]
    ZeroNotInLevel(usize),
    #[error("zero sequence length {zeros} does not match level count {levels}")]
    ZeroLengthMismatch { zeros: usize, levels: usize },
    #[error("level {0} out of range (system has {1} levels)")]
    LevelOutOfRange(usize, usize),
    #[error("letter {letter:?} not in level {level}")]
    LetterNotInLevel { letter: Token, level: usize },
}

/// Finitely many levels of a base system, each a finite alphabet with at
/// least two letters, plus the distinguished zero letter per level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseSystem {
    pub levels: Vec<Vec<Token>>,
    pub zero: Vec<Token>,
}

impl BaseSystem {
    pub fn new(levels: Vec<Vec<Token>>, zero: Vec<Token>) -> Result<Self, BaseError> {
        let sys = BaseSystem { levels, zero };
        sys.validate()?;
        Ok(sys)
    }

    /// Levels from integer alphabet sizes, letters "0", "1", ..; the zero
    /// letter is "0" everywhere.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, BaseError> {
        let levels: Vec<Vec<Token>> = sizes
            .iter()
            .map(|&n| (0..n).map(|i| i.to_string()).collect())
            .collect();
        let zero = vec!["0".to_owned(); sizes.len()];
        Self::new(levels, zero)
    }

    pub fn validate(&self) -> Result<(), BaseError> {
        if self.zero.len() != self.levels.len() {
            return Err(BaseError::ZeroLengthMismatch {
                zeros: self.zero.len(),
                levels: self.levels.len(),
            });
        }
        for (i, level) in self.levels.iter().enumerate() {
            if level.len() < 2 {
                return Err(BaseError::LevelTooSmall(i));
            }
            if !level.contains(&self.zero[i]) {
                return Err(BaseError::ZeroNotInLevel(i));
            }
        }
        Ok(())
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> Result<&[Token], BaseError> {
        self.levels
            .get(i)
            .map(Vec::as_slice)
            .ok_or(BaseError::LevelOutOfRange(i, self.levels.len()))
    }

    /// Zero-filled sequence of the given length.
    pub fn zero_seq(&self, len: usize) -> Result<FinSeq, BaseError> {
        if len > self.zero.len() {
            return Err(BaseError::LevelOutOfRange(len, self.levels.len()));
        }
        Ok(FinSeq(self.zero[..len].to_vec()))
    }

    /// Extend a sequence with zero letters up to the given length.
    pub fn zero_extend(&self, seq: &FinSeq, len: usize) -> Result<FinSeq, BaseError> {
        if len > self.levels.len() {
            return Err(BaseError::LevelOutOfRange(len, self.levels.len()));
        }
        if len < seq.len() {
            return Ok(seq.clone());
        }
        let mut v = seq.0.clone();
        for i in seq.len()..len {
            v.push(self.zero[i].clone());
        }
        Ok(FinSeq(v))
    }

    /// Membership of seq in the product of levels [0, seq.len()).
    pub fn check_seq(&self, seq: &FinSeq) -> Result<(), BaseError> {
        if seq.len() > self.levels.len() {
            return Err(BaseError::LevelOutOfRange(seq.len(), self.levels.len()));
        }
        for (i, letter) in seq.0.iter().enumerate() {
            if !self.levels[i].contains(letter) {
                return Err(BaseError::LetterNotInLevel {
                    letter: letter.clone(),
                    level: i,
                });
            }
        }
        Ok(())
    }

    /// All sequences of the given length (lexicographic order in the level
    /// orders as listed).
    pub fn all_seqs(&self, len: usize) -> Result<Vec<FinSeq>, BaseError> {
        if len > self.levels.len() {
            return Err(BaseError::LevelOutOfRange(len, self.levels.len()));
        }
        let mut out = vec![FinSeq::empty()];
        for i in 0..len {
            let mut next = Vec::with_capacity(out.len() * self.levels[i].len());
            for seq in &out {
                for letter in &self.levels[i] {
                    next.push(seq.concat(std::slice::from_ref(letter)));
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// All extensions of `seq` to length `len`.
    pub fn extensions(&self, seq: &FinSeq, len: usize) -> Result<Vec<FinSeq>, BaseError> {
        if len > self.levels.len() {
            return Err(BaseError::LevelOutOfRange(len, self.levels.len()));
        }
        if len < seq.len() {
            return Ok(Vec::new());
        }
        let mut out = vec![seq.clone()];
        for i in seq.len()..len {
            let mut next = Vec::with_capacity(out.len() * self.levels[i].len());
            for s in &out {
                for letter in &self.levels[i] {
                    next.push(s.concat(std::slice::from_ref(letter)));
                }
            }
            out = next;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_levels() {
        assert!(BaseSystem::from_sizes(&[2, 3, 2]).is_ok());
        assert_eq!(
            BaseSystem::from_sizes(&[2, 1]),
            Err(BaseError::LevelTooSmall(1))
        );
        let bad = BaseSystem {
            levels: vec![vec!["a".into(), "b".into()]],
            zero: vec!["c".into()],
        };
        assert_eq!(bad.validate(), Err(BaseError::ZeroNotInLevel(0)));
    }

    #[test]
    fn seq_prefix_order() {
        let a: FinSeq = vec!["0", "1"].into();
        let b: FinSeq = vec!["0", "1", "2"].into();
        assert!(a.is_strict_prefix_of(&b));
        assert!(!b.is_strict_prefix_of(&a));
        assert!(a.is_prefix_of(&a));
        assert!(!a.is_strict_prefix_of(&a));
        assert!(a < b);
    }

    #[test]
    fn enumerates_extensions() {
        let sys = BaseSystem::from_sizes(&[2, 2, 3]).unwrap();
        let root: FinSeq = vec!["1"].into();
        let exts = sys.extensions(&root, 3).unwrap();
        assert_eq!(exts.len(), 6);
        assert!(exts.iter().all(|e| root.is_strict_prefix_of(e)));
        assert_eq!(sys.all_seqs(2).unwrap().len(), 4);
        assert!(sys.all_seqs(4).is_err());
    }

    #[test]
    fn zero_extension() {
        let sys = BaseSystem::from_sizes(&[2, 2, 2]).unwrap();
        let s: FinSeq = vec!["1"].into();
        assert_eq!(sys.zero_extend(&s, 3).unwrap(), vec!["1", "0", "0"].into());
        assert_eq!(sys.zero_seq(2).unwrap(), vec!["0", "0"].into());
    }
}
