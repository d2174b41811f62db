//! Brute-force Green's and starred Green's relations.
//!
//! `S¹` is realized by adjoining a formal identity: every principal ideal
//! contains its generator, and every cancellation signature includes the
//! generator itself as the product with the identity.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::{join, meet, GreenError, Method, RelationKind, RelationPartition};
use crate::semigroup::Semigroup;

type Bits = Vec<u64>;

fn set(bits: &mut Bits, i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn members(bits: &Bits) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
    })
}

/// Relabels a sequence by first occurrence, so equal patterns compare equal.
fn canonical_pattern(values: impl Iterator<Item = usize>) -> Vec<u32> {
    let mut seen: HashMap<usize, u32> = HashMap::new();
    values
        .map(|v| {
            let next = seen.len() as u32;
            *seen.entry(v).or_insert(next)
        })
        .collect()
}

/// Principal ideals of every element, computed once and queried per kind.
pub struct GreenOracle<'a, S: Semigroup + ?Sized> {
    s: &'a S,
    left: Vec<Bits>,
    right: Vec<Bits>,
}

impl<'a, S: Semigroup + ?Sized> GreenOracle<'a, S> {
    pub fn new(s: &'a S) -> Self {
        let n = s.order();
        let words = n.div_ceil(64).max(1);
        let ideal = |a: usize, left: bool| {
            let mut bits = vec![0u64; words];
            set(&mut bits, a);
            for x in 0..n {
                set(&mut bits, if left { s.mul(x, a) } else { s.mul(a, x) });
            }
            bits
        };
        let left = (0..n).into_par_iter().map(|a| ideal(a, true)).collect();
        let right = (0..n).into_par_iter().map(|a| ideal(a, false)).collect();
        GreenOracle { s, left, right }
    }

    /// `S¹a`, as sorted indices.
    pub fn left_ideal(&self, a: usize) -> Vec<usize> {
        members(&self.left[a]).collect()
    }

    /// `aS¹`, as sorted indices.
    pub fn right_ideal(&self, a: usize) -> Vec<usize> {
        members(&self.right[a]).collect()
    }

    /// `S¹aS¹`, as the union of `cS¹` over `c` in `S¹a`.
    fn two_sided(&self, a: usize) -> Bits {
        let mut bits = vec![0u64; self.left[a].len()];
        for c in members(&self.left[a]) {
            for (w, r) in bits.iter_mut().zip(&self.right[c]) {
                *w |= r;
            }
        }
        bits
    }

    pub fn partition(&self, kind: RelationKind) -> Result<RelationPartition, GreenError> {
        let p = |labels: &[Bits]| RelationPartition::from_labels(kind, Method::Oracle, labels);
        Ok(match kind {
            RelationKind::L => p(&self.left),
            RelationKind::R => p(&self.right),
            RelationKind::J => {
                let j: Vec<Bits> = (0..self.s.order()).into_par_iter().map(|a| self.two_sided(a)).collect();
                p(&j)
            }
            RelationKind::H => meet(
                kind,
                Method::Oracle,
                &self.partition(RelationKind::L)?,
                &self.partition(RelationKind::R)?,
            ),
            RelationKind::D => self.d_partition()?,
            RelationKind::LStar => self.starred(kind, true),
            RelationKind::RStar => self.starred(kind, false),
            RelationKind::HStar => meet(
                kind,
                Method::Oracle,
                &self.starred(RelationKind::LStar, true),
                &self.starred(RelationKind::RStar, false),
            ),
            RelationKind::DStar => join(
                kind,
                Method::Oracle,
                &self.starred(RelationKind::LStar, true),
                &self.starred(RelationKind::RStar, false),
            ),
        })
    }

    /// `D` as the join of `L` and `R`, checked against the composite `L∘R`.
    fn d_partition(&self) -> Result<RelationPartition, GreenError> {
        let l = self.partition(RelationKind::L)?;
        let r = self.partition(RelationKind::R)?;
        let joined = join(RelationKind::D, Method::Oracle, &l, &r);
        // a (L∘R) b iff the L-class of a meets the R-class of b
        let meets: HashSet<(usize, usize)> = (0..self.s.order())
            .map(|c| (l.class_of(c), r.class_of(c)))
            .collect();
        let n = self.s.order();
        let bad = (0..n).into_par_iter().find_map_any(|a| {
            (0..n)
                .find(|&b| meets.contains(&(l.class_of(a), r.class_of(b))) != joined.related(a, b))
                .map(|b| (a, b))
        });
        if let Some((a, b)) = bad {
            return Err(GreenError::OracleInconsistent(format!(
                "L∘R differs from the join of L and R at ({}, {})",
                self.s.label(a),
                self.s.label(b)
            )));
        }
        Ok(joined)
    }

    /// `L*` groups by the pattern of `a·x` over `x ∈ S¹`; `R*` by `x·a`.
    fn starred(&self, kind: RelationKind, left: bool) -> RelationPartition {
        let n = self.s.order();
        let sigs: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let products = (0..n).map(|x| if left { self.s.mul(a, x) } else { self.s.mul(x, a) });
                canonical_pattern(products.chain(std::iter::once(a)))
            })
            .collect();
        RelationPartition::from_labels(kind, Method::Oracle, &sigs)
    }
}

/// Ideal- or cancellation-based partition for any relation kind.
pub fn green_oracle<S: Semigroup + ?Sized>(s: &S, kind: RelationKind) -> Result<RelationPartition, GreenError> {
    GreenOracle::new(s).partition(kind)
}

fn right_cancellation_agrees<S: Semigroup + ?Sized>(s: &S, a: usize, b: usize, left: bool) -> bool {
    let n = s.order();
    let prod = |e: usize, x: usize| if left { s.mul(e, x) } else { s.mul(x, e) };
    // index n stands for the formal identity
    let ext = |e: usize, x: usize| if x == n { e } else { prod(e, x) };
    (0..=n).all(|x| (0..=n).all(|y| (ext(a, x) == ext(a, y)) == (ext(b, x) == ext(b, y))))
}

/// `a L* b`: for all `x, y ∈ S¹`, `ax = ay ⟺ bx = by`.
pub fn lstar_oracle<S: Semigroup + ?Sized>(s: &S, a: usize, b: usize) -> bool {
    right_cancellation_agrees(s, a, b, true)
}

/// `a R* b`: for all `x, y ∈ S¹`, `xa = ya ⟺ xb = yb`.
pub fn rstar_oracle<S: Semigroup + ?Sized>(s: &S, a: usize, b: usize) -> bool {
    right_cancellation_agrees(s, a, b, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{ChainMap, FamilyTag};
    use crate::semigroup::{enumerate_family, CayleyTable};

    fn m(s: &str) -> ChainMap {
        s.parse().unwrap()
    }

    /// Direct set comparison of principal ideals, no bitsets.
    fn l_by_sets(s: &crate::semigroup::FiniteSemigroup, a: usize, b: usize) -> bool {
        let ideal = |x: usize| -> HashSet<usize> {
            (0..s.order()).map(|y| s.mul(y, x)).chain(std::iter::once(x)).collect()
        };
        ideal(a) == ideal(b)
    }

    #[test]
    fn worked_example_pair_is_l_related() {
        let s = enumerate_family(FamilyTag::CT, 6).unwrap();
        let a = s.index_of(&m("[1,2,2,3,4,3]")).unwrap();
        let b = s.index_of(&m("[4,3,2,2,1,2]")).unwrap();
        let l = green_oracle(&s, RelationKind::L).unwrap();
        assert!(l.related(a, b));
        assert!(l.related(a, a));
    }

    #[test]
    fn bitset_ideals_match_set_ideals() {
        let s = enumerate_family(FamilyTag::CT, 3).unwrap();
        let l = green_oracle(&s, RelationKind::L).unwrap();
        for a in 0..s.len() {
            for b in 0..s.len() {
                assert_eq!(l.related(a, b), l_by_sets(&s, a, b));
            }
        }
    }

    #[test]
    fn class_counts_ct4() {
        // frozen from the ideal-equality oracle
        let s = enumerate_family(FamilyTag::CT, 4).unwrap();
        let o = GreenOracle::new(&s);
        let counts: Vec<usize> = RelationKind::GREEN
            .iter()
            .map(|&k| o.partition(k).unwrap().len())
            .collect();
        let l = o.partition(RelationKind::L).unwrap();
        let r = o.partition(RelationKind::R).unwrap();
        let h = o.partition(RelationKind::H).unwrap();
        let d = o.partition(RelationKind::D).unwrap();
        let j = o.partition(RelationKind::J).unwrap();
        assert!(h.refines(&l) && h.refines(&r) && l.refines(&d) && r.refines(&d) && d.refines(&j));
        assert!(d.same_classes(&j));
        assert_eq!(counts[3], counts[4]);
        assert!(counts[0] >= counts[3] && counts[1] >= counts[3]);
    }

    #[test]
    fn starred_pairwise_matches_partition() {
        let s = enumerate_family(FamilyTag::CT, 3).unwrap();
        let o = GreenOracle::new(&s);
        let ls = o.partition(RelationKind::LStar).unwrap();
        let rs = o.partition(RelationKind::RStar).unwrap();
        for a in 0..s.len() {
            for b in 0..s.len() {
                assert_eq!(ls.related(a, b), lstar_oracle(&s, a, b));
                assert_eq!(rs.related(a, b), rstar_oracle(&s, a, b));
            }
        }
        // equal image in CT_3
        let a = s.index_of(&m("[1,2,2]")).unwrap();
        let b = s.index_of(&m("[2,1,1]")).unwrap();
        assert!(lstar_oracle(&s, a, b));
        assert!(!rstar_oracle(&s, a, b) || s.element(a).image() == s.element(b).image());
        let c = s.index_of(&m("[1,1,2]")).unwrap();
        assert!(!rstar_oracle(&s, a, c));
    }

    #[test]
    fn green_refines_starred() {
        let s = enumerate_family(FamilyTag::CT, 4).unwrap();
        let o = GreenOracle::new(&s);
        assert!(o.partition(RelationKind::L).unwrap().refines(&o.partition(RelationKind::LStar).unwrap()));
        assert!(o.partition(RelationKind::R).unwrap().refines(&o.partition(RelationKind::RStar).unwrap()));
    }

    #[test]
    fn abstract_table() {
        // left-zero band: everything R-related to itself only, L-universal
        let lz = CayleyTable::from_rows(&[vec![0, 0], vec![1, 1]]);
        let o = GreenOracle::new(&lz);
        assert_eq!(o.partition(RelationKind::L).unwrap().len(), 1);
        assert_eq!(o.partition(RelationKind::R).unwrap().len(), 2);
        assert_eq!(o.partition(RelationKind::D).unwrap().len(), 1);
        assert_eq!(o.left_ideal(0), vec![0, 1]);
        assert_eq!(o.right_ideal(0), vec![0]);
    }
}
