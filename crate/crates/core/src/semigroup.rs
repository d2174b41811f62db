//! Finite semigroups of chain maps and index-level structural queries.
//!
//! Everything downstream (Green's relations, Rees quotients) works on the
//! [`Semigroup`] trait: elements are indices `0..order()` and the product is
//! an index-valued function. [`FiniteSemigroup`] is the concrete carrier for
//! sets of [`ChainMap`]s; [`CayleyTable`] covers abstract ones.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::map::{all_maps, ChainMap, FamilyTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("n = {n} exceeds the enumeration guard {limit} for family {family}")]
    GuardExceeded { family: FamilyTag, n: usize, limit: usize },
    #[error("chain size must be positive")]
    ZeroDegree,
    #[error("set is not closed: {left} * {right} = {product} is missing")]
    NotClosed {
        left: String,
        right: String,
        product: String,
    },
    #[error("element index {0} out of range")]
    BadIndex(usize),
    #[error("empty subset")]
    EmptySubset,
    #[error("maps of degree {found} in a set of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("inverse criteria disagree: {0:?}")]
    InconsistentInverse(InverseCriteria),
}

/// A finite semigroup with elements `0..order()`.
pub trait Semigroup: Sync {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;

    /// Short human-readable label for element `a`.
    fn label(&self, a: usize) -> String {
        a.to_string()
    }
}

impl<S: Semigroup + ?Sized> Semigroup for &S {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        (**self).mul(a, b)
    }
    fn label(&self, a: usize) -> String {
        (**self).label(a)
    }
}

/// Whole-semigroup structural queries, available on every [`Semigroup`].
pub trait SemigroupExt: Semigroup {
    fn idempotents(&self) -> Vec<usize> {
        (0..self.order()).filter(|&e| self.mul(e, e) == e).collect()
    }

    fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    /// `a = a b a` for some `b` in this semigroup.
    fn is_regular_element(&self, a: usize) -> bool {
        (0..self.order()).any(|b| self.mul(self.mul(a, b), a) == a)
    }

    fn regular_elements(&self) -> Vec<usize> {
        (0..self.order())
            .into_par_iter()
            .filter(|&a| self.is_regular_element(a))
            .collect()
    }

    fn is_regular(&self) -> bool {
        (0..self.order()).into_par_iter().all(|a| self.is_regular_element(a))
    }

    /// Inverses `b` of `a`: `aba = a` and `bab = b`.
    fn inverses_of(&self, a: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&b| self.mul(self.mul(a, b), a) == a && self.mul(self.mul(b, a), b) == b)
            .collect()
    }

    fn idempotents_closed(&self) -> bool {
        let e = self.idempotents();
        e.iter()
            .all(|&x| e.iter().all(|&y| self.is_idempotent(self.mul(x, y))))
    }

    fn idempotents_commute(&self) -> bool {
        let e = self.idempotents();
        e.iter()
            .all(|&x| e.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Regular with idempotents closed under the product.
    fn is_orthodox(&self) -> bool {
        self.is_regular() && self.idempotents_closed()
    }

    fn has_unique_inverses(&self) -> bool {
        (0..self.order())
            .into_par_iter()
            .all(|a| self.inverses_of(a).len() == 1)
    }

    fn inverse_criteria(&self) -> InverseCriteria {
        InverseCriteria {
            regular: self.is_regular(),
            idempotents_commute: self.idempotents_commute(),
            unique_inverses: self.has_unique_inverses(),
        }
    }

    /// Inverse semigroup test; both classical criteria must agree.
    fn is_inverse(&self) -> Result<bool, EngineError> {
        self.inverse_criteria().verdict()
    }

    /// First triple violating associativity.
    fn associativity_counterexample(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        (0..n).into_par_iter().find_map_first(|a| {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }

    /// The subsemigroup generated by `gens`, as sorted indices.
    fn closure_of(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: HashSet<usize> = gens.iter().copied().collect();
        let mut members: Vec<usize> = seen.iter().copied().collect();
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            let mut fresh = Vec::new();
            for &y in &members {
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if seen.insert(z) {
                        fresh.push(z);
                    }
                }
            }
            for z in fresh {
                members.push(z);
                queue.push_back(z);
            }
        }
        members.sort_unstable();
        members
    }
}

impl<S: Semigroup + ?Sized> SemigroupExt for S {}

/// The three classical inverse-semigroup criteria, computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct InverseCriteria {
    pub regular: bool,
    pub idempotents_commute: bool,
    pub unique_inverses: bool,
}

impl InverseCriteria {
    pub fn verdict(self) -> Result<bool, EngineError> {
        let by_idempotents = self.regular && self.idempotents_commute;
        if by_idempotents == self.unique_inverses {
            Ok(by_idempotents)
        } else {
            Err(EngineError::InconsistentInverse(self))
        }
    }
}

/// An explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<u32>,
}

impl CayleyTable {
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize + Sync) -> Self {
        let table = (0..order * order)
            .into_par_iter()
            .map(|k| {
                let p = f(k / order, k % order);
                assert!(p < order, "product {p} outside 0..{order}");
                p as u32
            })
            .collect();
        CayleyTable { order, table }
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Self {
        let order = rows.len();
        Self::from_fn(order, |a, b| rows[a][b])
    }
}

impl Semigroup for CayleyTable {
    fn order(&self) -> usize {
        self.order
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }
}

/// A subset of a semigroup that is closed under the product, reindexed from 0.
pub struct SubsetView<'a, S: Semigroup + ?Sized> {
    parent: &'a S,
    members: Vec<usize>,
    local: HashMap<usize, usize>,
}

impl<'a, S: Semigroup + ?Sized> SubsetView<'a, S> {
    pub fn new(parent: &'a S, subset: &[usize]) -> Result<Self, EngineError> {
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(EngineError::EmptySubset);
        }
        if let Some(&bad) = members.iter().find(|&&x| x >= parent.order()) {
            return Err(EngineError::BadIndex(bad));
        }
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        for &x in &members {
            for &y in &members {
                let z = parent.mul(x, y);
                if !local.contains_key(&z) {
                    return Err(EngineError::NotClosed {
                        left: parent.label(x),
                        right: parent.label(y),
                        product: parent.label(z),
                    });
                }
            }
        }
        Ok(SubsetView {
            parent,
            members,
            local,
        })
    }

    /// Parent index of local element `i`.
    pub fn global(&self, i: usize) -> usize {
        self.members[i]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

impl<S: Semigroup + ?Sized> Semigroup for SubsetView<'_, S> {
    fn order(&self) -> usize {
        self.members.len()
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.local[&self.parent.mul(self.members[a], self.members[b])]
    }
    fn label(&self, a: usize) -> String {
        self.parent.label(self.members[a])
    }
}

/// Default product-table budget, in entries.
pub const DEFAULT_TABLE_BUDGET: usize = 64 * 1024 * 1024;

/// Maximum `n` accepted by [`enumerate_family_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationGuard {
    pub full: usize,
    pub contraction: usize,
}

impl EnumerationGuard {
    /// Hard ceilings no configuration may raise.
    pub const CEILING: EnumerationGuard = EnumerationGuard {
        full: 8,
        contraction: 8,
    };

    pub fn limit(&self, family: FamilyTag) -> usize {
        match family {
            FamilyTag::T => self.full,
            _ => self.contraction,
        }
    }

    /// Componentwise minimum with the hard ceilings.
    pub fn clamped(self) -> Self {
        EnumerationGuard {
            full: self.full.min(Self::CEILING.full),
            contraction: self.contraction.min(Self::CEILING.contraction),
        }
    }
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard {
            full: 8,
            contraction: 7,
        }
    }
}

/// A closed set of maps of one degree, sorted lexicographically.
pub struct FiniteSemigroup {
    degree: usize,
    family: Option<FamilyTag>,
    elements: Vec<ChainMap>,
    index: HashMap<ChainMap, usize>,
    table_budget: usize,
    table: OnceLock<Option<Vec<u32>>>,
}

impl std::fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteSemigroup")
            .field("degree", &self.degree)
            .field("family", &self.family)
            .field("order", &self.elements.len())
            .finish()
    }
}

impl FiniteSemigroup {
    /// Wraps `elements` (any order, duplicates dropped) after checking closure.
    pub fn from_elements(degree: usize, elements: Vec<ChainMap>) -> Result<Self, EngineError> {
        Self::build(degree, None, elements, DEFAULT_TABLE_BUDGET)
    }

    fn build(
        degree: usize,
        family: Option<FamilyTag>,
        mut elements: Vec<ChainMap>,
        table_budget: usize,
    ) -> Result<Self, EngineError> {
        if degree == 0 {
            return Err(EngineError::ZeroDegree);
        }
        if elements.is_empty() {
            return Err(EngineError::EmptySubset);
        }
        if let Some(bad) = elements.iter().find(|m| m.degree() != degree) {
            return Err(EngineError::DegreeMismatch {
                expected: degree,
                found: bad.degree(),
            });
        }
        elements.sort_unstable();
        elements.dedup();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let s = FiniteSemigroup {
            degree,
            family,
            elements,
            index,
            table_budget,
            table: OnceLock::new(),
        };
        s.check_closed()?;
        Ok(s)
    }

    fn check_closed(&self) -> Result<(), EngineError> {
        let els = &self.elements;
        let missing = (0..els.len()).into_par_iter().find_map_any(|a| {
            els.iter().find_map(|b| {
                let p = els[a].then_unchecked(b);
                (!self.index.contains_key(&p)).then(|| (els[a].clone(), b.clone(), p))
            })
        });
        match missing {
            Some((l, r, p)) => Err(EngineError::NotClosed {
                left: l.to_string(),
                right: r.to_string(),
                product: p.to_string(),
            }),
            None => Ok(()),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `None` for custom element sets.
    pub fn family(&self) -> Option<FamilyTag> {
        self.family
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ChainMap] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ChainMap {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &ChainMap) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn indices_of<'m>(&self, maps: impl IntoIterator<Item = &'m ChainMap>) -> Option<Vec<usize>> {
        maps.into_iter().map(|m| self.index_of(m)).collect()
    }

    pub fn maps_of(&self, indices: &[usize]) -> Vec<ChainMap> {
        indices.iter().map(|&i| self.elements[i].clone()).collect()
    }

    pub fn with_table_budget(mut self, entries: usize) -> Self {
        self.table_budget = entries;
        self.table = OnceLock::new();
        self
    }

    /// Product table, built on first use when it fits the budget.
    pub fn product_table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| {
                let n = self.elements.len();
                (n.checked_mul(n)? <= self.table_budget).then(|| {
                    (0..n * n)
                        .into_par_iter()
                        .map(|k| self.compose_lookup(k / n, k % n) as u32)
                        .collect()
                })
            })
            .as_deref()
    }

    fn compose_lookup(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].then_unchecked(&self.elements[b]);
        self.index[&p]
    }

    /// Closed subset as a semigroup in its own right.
    pub fn subsemigroup(&self, subset: &[usize]) -> Result<FiniteSemigroup, EngineError> {
        if let Some(&bad) = subset.iter().find(|&&x| x >= self.len()) {
            return Err(EngineError::BadIndex(bad));
        }
        Self::build(
            self.degree,
            None,
            subset.iter().map(|&i| self.elements[i].clone()).collect(),
            self.table_budget,
        )
    }

    /// `⟨gens⟩` as a semigroup in its own right.
    pub fn generated_subsemigroup(&self, gens: &[usize]) -> Result<FiniteSemigroup, EngineError> {
        if let Some(&bad) = gens.iter().find(|&&x| x >= self.len()) {
            return Err(EngineError::BadIndex(bad));
        }
        if gens.is_empty() {
            return Err(EngineError::EmptySubset);
        }
        self.subsemigroup(&self.closure_of(gens))
    }

    /// Index of the identity map, when present.
    pub fn identity(&self) -> Option<usize> {
        self.index_of(&ChainMap::identity(self.degree))
    }
}

impl Semigroup for FiniteSemigroup {
    fn order(&self) -> usize {
        self.elements.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match self.product_table() {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.compose_lookup(a, b),
        }
    }

    fn label(&self, a: usize) -> String {
        self.elements[a].to_string()
    }
}

/// All maps of `family` on `[n]`, filtered from the `n^n` image words.
pub fn enumerate_family(family: FamilyTag, n: usize) -> Result<FiniteSemigroup, EngineError> {
    enumerate_family_with(family, n, &EnumerationGuard::default())
}

pub fn enumerate_family_with(
    family: FamilyTag,
    n: usize,
    guard: &EnumerationGuard,
) -> Result<FiniteSemigroup, EngineError> {
    if n == 0 {
        return Err(EngineError::ZeroDegree);
    }
    let limit = guard.clamped().limit(family);
    if n > limit {
        return Err(EngineError::GuardExceeded { family, n, limit });
    }
    let elements: Vec<ChainMap> = all_maps(n).filter(|m| family.contains(m)).collect();
    FiniteSemigroup::build(n, Some(family), elements, DEFAULT_TABLE_BUDGET)
}

/// `Reg(S)` of a family, as a semigroup in its own right.
pub fn regular_part(family: FamilyTag, n: usize) -> Result<FiniteSemigroup, EngineError> {
    let s = enumerate_family(family, n)?;
    s.subsemigroup(&s.regular_elements())
}

pub fn idempotents(s: &FiniteSemigroup) -> Vec<usize> {
    s.idempotents()
}

/// Elements regular in the ambient semigroup: `a = aba` for some `b` in `s`.
pub fn regular_elements(s: &FiniteSemigroup) -> Vec<usize> {
    s.regular_elements()
}

pub fn is_subsemigroup<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> bool {
    SubsetView::new(s, subset).is_ok()
}

/// Regular within `subset` and with idempotents closed under the product.
pub fn is_orthodox<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> Result<bool, EngineError> {
    Ok(SubsetView::new(s, subset)?.is_orthodox())
}

pub fn idempotents_commute<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> Result<bool, EngineError> {
    Ok(SubsetView::new(s, subset)?.idempotents_commute())
}

pub fn is_inverse<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> Result<bool, EngineError> {
    SubsetView::new(s, subset)?.is_inverse()
}

/// Every element of `subset` regular inside `subset`.
pub fn is_regular_subsemigroup<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> Result<bool, EngineError> {
    Ok(SubsetView::new(s, subset)?.is_regular())
}
