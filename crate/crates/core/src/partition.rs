//! Kernel partitions, transversals and the refinement lattice.

use std::fmt;
use std::ops::RangeInclusive;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::ChainMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("invalid partition of [{n}]: {reason}")]
    Invalid { n: usize, reason: String },
    #[error("{0} is not a contraction")]
    NotContraction(ChainMap),
    #[error("transversal does not belong to the kernel of {0}")]
    TransversalMismatch(ChainMap),
    #[error("refinement scan limited to n <= {REFINEMENT_SCAN_LIMIT}, got n = {0}")]
    ScanLimit(usize),
}

/// Largest degree for which refinement searches are run.
pub const REFINEMENT_SCAN_LIMIT: usize = 7;

pub(crate) fn check_scan_limit(n: usize) -> Result<(), PartitionError> {
    if n > REFINEMENT_SCAN_LIMIT {
        return Err(PartitionError::ScanLimit(n));
    }
    Ok(())
}

/// An ordered partition of `[n]`, blocks sorted by their minimum element.
///
/// When derived from a map the image point of every block is kept alongside.
/// Equality and hashing look at the blocks only.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "PartitionRecord", into = "PartitionRecord")]
pub struct KernelPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_images: Option<Vec<usize>>,
    /// block index of each point, 0-based by point
    owner: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRecord {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRecord> for KernelPartition {
    type Error = PartitionError;

    fn try_from(r: PartitionRecord) -> Result<Self, PartitionError> {
        KernelPartition::from_blocks(r.n, r.blocks)
    }
}

impl From<KernelPartition> for PartitionRecord {
    fn from(k: KernelPartition) -> Self {
        PartitionRecord {
            n: k.n,
            blocks: k.blocks,
        }
    }
}

impl PartialEq for KernelPartition {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.blocks == other.blocks
    }
}

impl Eq for KernelPartition {}

impl std::hash::Hash for KernelPartition {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.blocks.hash(state);
    }
}

impl KernelPartition {
    /// Validates and canonicalizes a list of blocks covering `[n]`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let invalid = |reason: String| PartitionError::Invalid { n, reason };
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(invalid("empty block".into()));
            }
            for &x in block {
                if x == 0 || x > n {
                    return Err(invalid(format!("point {x} outside the chain")));
                }
                if owner[x - 1] != usize::MAX {
                    return Err(invalid(format!("point {x} appears twice")));
                }
                owner[x - 1] = b;
            }
        }
        if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(invalid(format!("point {} is not covered", x + 1)));
        }
        Ok(Self::canonical(n, blocks, None))
    }

    fn canonical(n: usize, blocks: Vec<Vec<usize>>, images: Option<Vec<usize>>) -> Self {
        let mut paired: Vec<(Vec<usize>, Option<usize>)> = match images {
            Some(img) => blocks.into_iter().zip(img.into_iter().map(Some)).collect(),
            None => blocks.into_iter().map(|b| (b, None)).collect(),
        };
        for (block, _) in &mut paired {
            block.sort_unstable();
        }
        paired.sort_by_key(|(block, _)| block[0]);
        let has_images = paired.first().is_some_and(|(_, i)| i.is_some());
        let mut owner = vec![0; n];
        for (b, (block, _)) in paired.iter().enumerate() {
            for &x in block {
                owner[x - 1] = b;
            }
        }
        let (blocks, images): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        KernelPartition {
            n,
            blocks,
            block_images: has_images.then(|| images.into_iter().flatten().collect()),
            owner,
        }
    }

    /// Fibres of `a`, each paired with its image point.
    pub fn kernel(a: &ChainMap) -> Self {
        let n = a.degree();
        let mut fibres: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (i, v) in a.word().enumerate() {
            fibres[v].push(i + 1);
        }
        let (images, blocks): (Vec<usize>, Vec<Vec<usize>>) = fibres
            .into_iter()
            .enumerate()
            .filter(|(_, f)| !f.is_empty())
            .unzip();
        Self::canonical(n, blocks, Some(images))
    }

    pub fn discrete(n: usize) -> Self {
        Self::canonical(n, (1..=n).map(|x| vec![x]).collect(), None)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_images(&self) -> Option<&[usize]> {
        self.block_images.as_deref()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.owner[x - 1]
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &KernelPartition) -> bool {
        self.n == coarser.n
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&x| coarser.block_of(x) == coarser.block_of(b[0])))
    }

    /// The meet: nonempty pairwise intersections of blocks.
    pub fn common_refinement(&self, other: &KernelPartition) -> KernelPartition {
        assert_eq!(self.n, other.n);
        let groups = (1..=self.n).into_group_map_by(|&x| (self.block_of(x), other.block_of(x)));
        Self::canonical(self.n, groups.into_values().collect(), None)
    }

    /// All transversals, lexicographic in the chosen representatives.
    pub fn transversals(&self) -> impl Iterator<Item = Transversal<'_>> + '_ {
        self.blocks
            .iter()
            .map(|b| b.iter().copied())
            .multi_cartesian_product()
            .map(move |reps| Transversal { parent: self, reps })
    }

    /// Convex windows `[l, l+p-1]` meeting each block exactly once.
    pub fn convex_windows(&self) -> Vec<RangeInclusive<usize>> {
        let p = self.len();
        (1..=self.n + 1 - p)
            .map(|l| l..=l + p - 1)
            .filter(|w| w.clone().map(|x| self.block_of(x)).all_unique())
            .collect()
    }

    pub fn convex_transversals(&self) -> Vec<Transversal<'_>> {
        self.convex_windows()
            .into_iter()
            .map(|w| {
                let mut reps = vec![0; self.len()];
                for x in w {
                    reps[self.block_of(x)] = x;
                }
                Transversal { parent: self, reps }
            })
            .collect()
    }

    pub fn has_convex_transversal(&self) -> bool {
        !self.convex_windows().is_empty()
    }

    /// Every partition whose blocks each sit inside a block of `self`,
    /// including `self` and the discrete partition.
    pub fn refinements(&self) -> Vec<KernelPartition> {
        self.blocks
            .iter()
            .map(|b| set_partitions(b))
            .multi_cartesian_product()
            .map(|parts| Self::canonical(self.n, parts.into_iter().flatten().collect(), None))
            .collect()
    }
}

/// All set partitions of `items`, via restricted growth strings.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let k = items.len();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    loop {
        let parts = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); parts];
        for (i, &r) in rgs.iter().enumerate() {
            blocks[r].push(items[i]);
        }
        out.push(blocks);
        // next restricted growth string
        let mut i = k;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in &mut rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
        }
    }
}

impl fmt::Display for KernelPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{{{}}}", block.iter().join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for KernelPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One representative per block; `reps[i]` lies in block `i` of the parent.
#[derive(Clone, PartialEq, Eq)]
pub struct Transversal<'a> {
    parent: &'a KernelPartition,
    reps: Vec<usize>,
}

impl<'a> Transversal<'a> {
    /// Checks that `points` meets every block of `parent` exactly once.
    pub fn new(parent: &'a KernelPartition, points: &[usize]) -> Option<Self> {
        if points.len() != parent.len() || points.iter().any(|&x| x == 0 || x > parent.n) {
            return None;
        }
        let mut reps = vec![0; parent.len()];
        for &x in points {
            let b = parent.block_of(x);
            if reps[b] != 0 {
                return None;
            }
            reps[b] = x;
        }
        Some(Transversal { parent, reps })
    }

    pub fn parent(&self) -> &'a KernelPartition {
        self.parent
    }

    /// Representatives in block order.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn points(&self) -> Vec<usize> {
        let mut p = self.reps.clone();
        p.sort_unstable();
        p
    }

    pub fn is_convex(&self) -> bool {
        let p = self.points();
        p[p.len() - 1] - p[0] + 1 == p.len()
    }

    /// No domain point strictly between two chosen points is left out. The
    /// domain of a full map is all of `[n]`.
    pub fn is_relatively_convex(&self) -> bool {
        let p = self.points();
        (p[0]..=p[p.len() - 1]).all(|z| p.binary_search(&z).is_ok())
    }

    /// Map collapsing every block onto its representative.
    pub fn collapse_map(&self) -> ChainMap {
        ChainMap::from_word_unchecked(
            (1..=self.parent.n)
                .map(|x| self.reps[self.parent.block_of(x)] as u8)
                .collect(),
        )
    }

    pub fn is_admissible(&self) -> bool {
        self.collapse_map().is_contraction()
    }

    /// Whether `t_i ↦ t_i a` preserves all pairwise distances.
    pub fn is_isometry_on(&self, a: &ChainMap) -> Result<bool, PartitionError> {
        if *self.parent != KernelPartition::kernel(a) {
            return Err(PartitionError::TransversalMismatch(a.clone()));
        }
        let r = &self.reps;
        Ok(r.iter().tuple_combinations().all(|(&x, &y)| {
            x.abs_diff(y) == a.apply(x).abs_diff(a.apply(y))
        }))
    }
}

impl fmt::Display for Transversal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.points().iter().join(","))
    }
}

impl fmt::Debug for Transversal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which refinements count as candidates for the maximum refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefinementReading {
    /// The refinement has some convex transversal.
    Convex,
    /// The refinement has a convex transversal whose collapse map is a contraction.
    Admissible,
}

impl RefinementReading {
    pub fn accepts(self, k: &KernelPartition) -> bool {
        match self {
            RefinementReading::Convex => k.has_convex_transversal(),
            RefinementReading::Admissible => {
                k.convex_transversals().iter().any(Transversal::is_admissible)
            }
        }
    }
}

/// Outcome of the maximum-refinement scan.
#[derive(Debug, Clone)]
pub struct MaxRefinement {
    pub partition: KernelPartition,
    /// The maximal candidates; more than one means the intersection rule applied.
    pub maximal: Vec<KernelPartition>,
}

impl MaxRefinement {
    pub fn is_tie(&self) -> bool {
        self.maximal.len() > 1
    }
}

/// Coarsest refinement of `Ker a` with a convex transversal. Ties between
/// several maximal candidates resolve to their common refinement.
pub fn max_refinement(a: &ChainMap, reading: RefinementReading) -> Result<MaxRefinement, PartitionError> {
    if !a.is_contraction() {
        return Err(PartitionError::NotContraction(a.clone()));
    }
    check_scan_limit(a.degree())?;
    let kernel = KernelPartition::kernel(a);
    if reading.accepts(&kernel) {
        return Ok(MaxRefinement {
            partition: kernel.clone(),
            maximal: vec![kernel],
        });
    }
    let candidates: Vec<_> = kernel
        .refinements()
        .into_iter()
        .filter(|k| reading.accepts(k))
        .collect();
    // the discrete partition always qualifies, so candidates is nonempty
    let maximal: Vec<KernelPartition> = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|d| d.len() < c.len() && c.refines(d))
        })
        .cloned()
        .collect();
    let partition = maximal[1..]
        .iter()
        .fold(maximal[0].clone(), |acc, m| acc.common_refinement(m));
    Ok(MaxRefinement { partition, maximal })
}

pub fn max_convex_refinement(a: &ChainMap) -> Result<KernelPartition, PartitionError> {
    max_refinement(a, RefinementReading::Convex).map(|m| m.partition)
}
