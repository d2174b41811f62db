//! Full transformations of the chain `[n] = {1, ..., n}`.
//!
//! A [`ChainMap`] is stored as its image word: position `i` (1-indexed) holds
//! the image of `i`. Composition is left to right, so `a.then(&b)` applies `a`
//! first and `b` second.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest chain size a [`ChainMap`] can represent.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("chain size must be positive")]
    ZeroDegree,
    #[error("chain size {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("image word has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("entry at position {index} is {value}, outside 1..={n}")]
    OutOfRange { index: usize, value: i64, n: usize },
    #[error("cannot compose maps on chains of size {left} and {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("malformed image word {0:?}")]
    Malformed(String),
}

/// A full transformation of `[n]`.
///
/// Equality, hashing and ordering are by image word; maps of one degree sort
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MapRecord", into = "MapRecord")]
pub struct ChainMap {
    images: Box<[u8]>,
}

#[derive(Serialize, Deserialize)]
struct MapRecord {
    n: usize,
    img: Vec<i64>,
}

impl TryFrom<MapRecord> for ChainMap {
    type Error = MapError;

    fn try_from(record: MapRecord) -> Result<Self, MapError> {
        ChainMap::new(record.n, &record.img)
    }
}

impl From<ChainMap> for MapRecord {
    fn from(map: ChainMap) -> Self {
        MapRecord {
            n: map.degree(),
            img: map.images.iter().map(|&v| i64::from(v)).collect(),
        }
    }
}

impl ChainMap {
    /// Validates an image word for a map on `[n]`.
    pub fn new(n: usize, images: &[i64]) -> Result<Self, MapError> {
        if n == 0 {
            return Err(MapError::ZeroDegree);
        }
        if n > MAX_DEGREE {
            return Err(MapError::DegreeTooLarge(n));
        }
        if images.len() != n {
            return Err(MapError::LengthMismatch {
                expected: n,
                found: images.len(),
            });
        }
        let mut word = Vec::with_capacity(n);
        for (pos, &value) in images.iter().enumerate() {
            if value < 1 || value > n as i64 {
                return Err(MapError::OutOfRange {
                    index: pos + 1,
                    value,
                    n,
                });
            }
            word.push(value as u8);
        }
        Ok(ChainMap {
            images: word.into_boxed_slice(),
        })
    }

    /// Builds a map from a word already known to be valid.
    pub(crate) fn from_word_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(word.iter().all(|&v| v >= 1 && v as usize <= word.len()));
        ChainMap {
            images: word.into_boxed_slice(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_word_unchecked((1..=n as u8).collect())
    }

    pub fn constant(n: usize, value: usize) -> Self {
        assert!(value >= 1 && value <= n, "constant {value} outside [1, {n}]");
        Self::from_word_unchecked(vec![value as u8; n])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `x`, with `x` in `1..=n`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize
    }

    /// The image word, 1-indexed values.
    pub fn word(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&v| v as usize)
    }

    /// `self` followed by `other`: `x ↦ (x self) other`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap, MapError> {
        if self.degree() != other.degree() {
            return Err(MapError::SizeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &ChainMap) -> ChainMap {
        let word = self
            .images
            .iter()
            .map(|&v| other.images[v as usize - 1])
            .collect();
        ChainMap { images: word }
    }

    pub fn is_contraction(&self) -> bool {
        let w = &self.images;
        (0..w.len()).all(|x| (x + 1..w.len()).all(|y| w[x].abs_diff(w[y]) as usize <= y - x))
    }

    pub fn is_order_preserving(&self) -> bool {
        self.images.windows(2).all(|p| p[0] <= p[1])
    }

    pub fn is_order_reversing(&self) -> bool {
        self.images.windows(2).all(|p| p[0] >= p[1])
    }

    pub fn is_order_decreasing(&self) -> bool {
        self.word().enumerate().all(|(i, v)| v <= i + 1)
    }

    pub fn is_isometry(&self) -> bool {
        let w = &self.images;
        (0..w.len()).all(|x| (x + 1..w.len()).all(|y| w[x].abs_diff(w[y]) as usize == y - x))
    }

    /// Sorted image set.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = [false; MAX_DEGREE + 1];
        for &v in self.images.iter() {
            seen[v as usize] = true;
        }
        (1..=self.degree()).filter(|&v| seen[v]).collect()
    }

    pub fn height(&self) -> usize {
        self.image().len()
    }

    pub fn fix_points(&self) -> Vec<usize> {
        self.word()
            .enumerate()
            .filter(|&(i, v)| v == i + 1)
            .map(|(_, v)| v)
            .collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.then_unchecked(self) == *self
    }

    pub fn in_family(&self, family: FamilyTag) -> bool {
        family.contains(self)
    }
}

impl fmt::Display for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the bracketed word form `[1,2,2,3]`; the degree is the word length.
impl FromStr for ChainMap {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, MapError> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| MapError::Malformed(s.to_string()))?;
        let values = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| MapError::Malformed(s.to_string()))?;
        ChainMap::new(values.len(), &values)
    }
}

/// The ambient families of full maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    /// All full transformations.
    T,
    /// Contractions.
    CT,
    /// Order-preserving contractions.
    OCT,
    /// Order-preserving or order-reversing contractions.
    ORCT,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 4] = [FamilyTag::T, FamilyTag::CT, FamilyTag::OCT, FamilyTag::ORCT];
    pub const CONTRACTION: [FamilyTag; 3] = [FamilyTag::CT, FamilyTag::OCT, FamilyTag::ORCT];

    pub fn contains(self, map: &ChainMap) -> bool {
        match self {
            FamilyTag::T => true,
            FamilyTag::CT => map.is_contraction(),
            FamilyTag::OCT => map.is_order_preserving() && map.is_contraction(),
            FamilyTag::ORCT => {
                (map.is_order_preserving() || map.is_order_reversing()) && map.is_contraction()
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::T => "t",
            FamilyTag::CT => "ct",
            FamilyTag::OCT => "oct",
            FamilyTag::ORCT => "orct",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(FamilyTag::T),
            "ct" => Ok(FamilyTag::CT),
            "oct" => Ok(FamilyTag::OCT),
            "orct" => Ok(FamilyTag::ORCT),
            other => Err(format!("unknown family {other:?} (expected t, ct, oct or orct)")),
        }
    }
}

/// Every image word of length `n`, in lexicographic order.
pub fn all_maps(n: usize) -> impl Iterator<Item = ChainMap> {
    let mut word = vec![1u8; n];
    let mut done = n == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = ChainMap::from_word_unchecked(word.clone());
        // odometer step, last position fastest
        let mut i = n;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if (word[i] as usize) < n {
                word[i] += 1;
                break;
            }
            word[i] = 1;
        }
        Some(current)
    })
}
