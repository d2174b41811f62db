//! Green's relations and their starred variants.
//!
//! Ground truth comes from [`oracle`], which works on any [`Semigroup`] from
//! principal ideals and cancellation behaviour. [`characterized`] holds the
//! fast predicates on contraction maps, and [`abundance`] the class-level
//! verdicts built on top.
//!
//! [`Semigroup`]: crate::semigroup::Semigroup

pub mod abundance;
pub mod characterized;
pub mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::ChainMap;
use crate::partition::PartitionError;
use crate::semigroup::EngineError;

pub use abundance::{
    is_l_unipotent, is_left_abundant, is_r_unipotent, is_right_abundant, left_abundance_witness,
    right_abundance_witness, unipotence_witness, Side,
};
pub use characterized::{
    characterized_partition, d_char, l_char, l_char_with, r_char, regular_char_ct,
    regular_char_orct, starred_char,
};
pub use oracle::{green_oracle, lstar_oracle, rstar_oracle, GreenOracle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreenError {
    #[error("{0} is not a contraction")]
    NotContraction(ChainMap),
    #[error("{map} is not in family {family}")]
    FamilyMismatch { map: ChainMap, family: &'static str },
    #[error("maps of different degrees")]
    DegreeMismatch,
    #[error("relation {0} is not available with method {1}")]
    Unsupported(RelationKind, Method),
    #[error("oracle self-check failed: {0}")]
    OracleInconsistent(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    L,
    R,
    H,
    D,
    J,
    LStar,
    RStar,
    HStar,
    DStar,
}

impl RelationKind {
    pub const GREEN: [RelationKind; 5] = [
        RelationKind::L,
        RelationKind::R,
        RelationKind::H,
        RelationKind::D,
        RelationKind::J,
    ];
    pub const STARRED: [RelationKind; 4] = [
        RelationKind::LStar,
        RelationKind::RStar,
        RelationKind::HStar,
        RelationKind::DStar,
    ];

    pub fn is_starred(self) -> bool {
        Self::STARRED.contains(&self)
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::L => "l",
            RelationKind::R => "r",
            RelationKind::H => "h",
            RelationKind::D => "d",
            RelationKind::J => "j",
            RelationKind::LStar => "lstar",
            RelationKind::RStar => "rstar",
            RelationKind::HStar => "hstar",
            RelationKind::DStar => "dstar",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::GREEN
            .into_iter()
            .chain(Self::STARRED)
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown relation {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    #[serde(rename = "char")]
    Characterized,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::Characterized => "char",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "char" => Ok(Method::Characterized),
            other => Err(format!("unknown method {other:?} (expected oracle or char)")),
        }
    }
}

/// An equivalence on the elements `0..len`, classes ordered by their least
/// member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPartition {
    pub kind: RelationKind,
    pub method: Method,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl RelationPartition {
    /// Groups elements by equal label.
    pub fn from_labels<K: Hash + Eq>(kind: RelationKind, method: Method, labels: &[K]) -> Self {
        let mut first: HashMap<&K, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, k) in labels.iter().enumerate() {
            let c = *first.entry(k).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(i);
        }
        Self::from_classes(kind, method, classes, labels.len())
    }

    pub(crate) fn from_classes(
        kind: RelationKind,
        method: Method,
        mut classes: Vec<Vec<usize>>,
        len: usize,
    ) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![usize::MAX; len];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        debug_assert!(class_of.iter().all(|&c| c != usize::MAX));
        RelationPartition {
            kind,
            method,
            classes,
            class_of,
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_containing(&self, a: usize) -> &[usize] {
        &self.classes[self.class_of[a]]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of elements partitioned.
    pub fn order(&self) -> usize {
        self.class_of.len()
    }

    /// Every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &RelationPartition) -> bool {
        self.order() == coarser.order()
            && self
                .classes
                .iter()
                .all(|c| c.iter().all(|&x| coarser.related(x, c[0])))
    }

    pub fn same_classes(&self, other: &RelationPartition) -> bool {
        self.classes == other.classes
    }

    /// First pair on which the two partitions disagree.
    pub fn first_disagreement(&self, other: &RelationPartition) -> Option<(usize, usize)> {
        let n = self.order();
        (0..n).find_map(|a| {
            (a + 1..n)
                .find(|&b| self.related(a, b) != other.related(a, b))
                .map(|b| (a, b))
        })
    }
}

/// Union-find over `0..n`.
pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn labels(&mut self) -> Vec<usize> {
        (0..self.0.len()).map(|x| self.find(x)).collect()
    }
}

/// Join of two equivalences: the finest one containing both.
pub(crate) fn join(kind: RelationKind, method: Method, a: &RelationPartition, b: &RelationPartition) -> RelationPartition {
    let mut dsu = Dsu::new(a.order());
    for c in a.classes().iter().chain(b.classes()) {
        for &x in &c[1..] {
            dsu.union(c[0], x);
        }
    }
    RelationPartition::from_labels(kind, method, &dsu.labels())
}

/// Meet: elements related by both.
pub(crate) fn meet(kind: RelationKind, method: Method, a: &RelationPartition, b: &RelationPartition) -> RelationPartition {
    let labels: Vec<(usize, usize)> = (0..a.order())
        .map(|x| (a.class_of(x), b.class_of(x)))
        .collect();
    RelationPartition::from_labels(kind, method, &labels)
}
