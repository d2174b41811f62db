//! Height ideals of regular contraction semigroups and their Rees quotients.
//!
//! `K(n,p)` collects the elements of height at most `p`; the quotient
//! `K(n,p)/K(n,p−1)` keeps the height-`p` elements and collapses everything
//! lower onto a single zero.

use serde::Serialize;
use thiserror::Error;

use crate::green::{is_l_unipotent, is_r_unipotent, GreenError};
use crate::map::{ChainMap, FamilyTag};
use crate::semigroup::{
    regular_part, CayleyTable, EngineError, FiniteSemigroup, Semigroup, SemigroupExt,
};

/// Largest quotient for which associativity is checked triple by triple.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("height bound {p} outside {min}..={n}")]
    HeightOutOfRange { p: usize, min: usize, n: usize },
    #[error("height-{p} elements are not an ideal: {left} * {right} = {product}")]
    NotIdeal {
        p: usize,
        left: ChainMap,
        right: ChainMap,
        product: ChainMap,
    },
    #[error("base semigroup is not regular (element {0} has no inverse)")]
    IrregularBase(ChainMap),
    #[error("quotient product is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("family {0} is not a supported base (use orct or oct)")]
    UnsupportedFamily(FamilyTag),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Green(#[from] GreenError),
}

/// `K(n,p)`: indices into the base of the elements of height at most `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightIdeal {
    pub p: usize,
    pub members: Vec<usize>,
}

pub fn height_ideal(base: &FiniteSemigroup, p: usize) -> Result<HeightIdeal, ReesError> {
    let n = base.degree();
    if p < 1 || p > n {
        return Err(ReesError::HeightOutOfRange { p, min: 1, n });
    }
    let heights: Vec<usize> = base.elements().iter().map(ChainMap::height).collect();
    let members: Vec<usize> = (0..base.len()).filter(|&i| heights[i] <= p).collect();
    for &a in &members {
        for s in 0..base.len() {
            for (l, r) in [(a, s), (s, a)] {
                let prod = base.mul(l, r);
                if heights[prod] > p {
                    return Err(ReesError::NotIdeal {
                        p,
                        left: base.element(l).clone(),
                        right: base.element(r).clone(),
                        product: base.element(prod).clone(),
                    });
                }
            }
        }
    }
    Ok(HeightIdeal { p, members })
}

/// `Reg(ORCT_n)` or `Reg(OCT_n)`, the bases the quotient is defined over.
pub fn regular_base(family: FamilyTag, n: usize) -> Result<FiniteSemigroup, ReesError> {
    match family {
        FamilyTag::ORCT | FamilyTag::OCT => Ok(regular_part(family, n)?),
        other => Err(ReesError::UnsupportedFamily(other)),
    }
}

/// `K(n,p)/K(n,p−1)`. Element 0 is the zero; elements `1..` are the height-`p`
/// maps in lexicographic order.
#[derive(Debug, Clone)]
pub struct ReesQuotient {
    degree: usize,
    p: usize,
    carrier: Vec<ChainMap>,
    table: CayleyTable,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReesOptions {
    /// Accept a base that is not regular. The collapsing rule is unchanged.
    pub allow_irregular_base: bool,
}

impl ReesQuotient {
    pub const ZERO: usize = 0;

    pub fn new(base: &FiniteSemigroup, p: usize) -> Result<Self, ReesError> {
        Self::with_options(base, p, ReesOptions::default())
    }

    pub fn with_options(base: &FiniteSemigroup, p: usize, opts: ReesOptions) -> Result<Self, ReesError> {
        let n = base.degree();
        if p < 2 || p > n {
            return Err(ReesError::HeightOutOfRange { p, min: 2, n });
        }
        if !opts.allow_irregular_base {
            if let Some(bad) = (0..base.len()).find(|&a| !base.is_regular_element(a)) {
                return Err(ReesError::IrregularBase(base.element(bad).clone()));
            }
        }
        height_ideal(base, p)?;
        let top: Vec<usize> = (0..base.len())
            .filter(|&i| base.element(i).height() == p)
            .collect();
        let local = |g: usize| top.binary_search(&g).ok().map(|i| i + 1);
        let order = top.len() + 1;
        let table = CayleyTable::from_fn(order, |a, b| {
            if a == Self::ZERO || b == Self::ZERO {
                return Self::ZERO;
            }
            local(base.mul(top[a - 1], top[b - 1])).unwrap_or(Self::ZERO)
        });
        let q = ReesQuotient {
            degree: n,
            p,
            carrier: base.maps_of(&top),
            table,
        };
        if q.order() <= ASSOCIATIVITY_CHECK_LIMIT {
            if let Some((a, b, c)) = q.associativity_counterexample() {
                return Err(ReesError::NotAssociative(q.label(a), q.label(b), q.label(c)));
            }
        }
        Ok(q)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn height(&self) -> usize {
        self.p
    }

    /// Nonzero elements, in index order starting at 1.
    pub fn carrier(&self) -> &[ChainMap] {
        &self.carrier
    }

    /// The map behind element `a`, `None` for the zero.
    pub fn map_of(&self, a: usize) -> Option<&ChainMap> {
        a.checked_sub(1).map(|i| &self.carrier[i])
    }

    pub fn index_of(&self, m: &ChainMap) -> Option<usize> {
        self.carrier.binary_search(m).ok().map(|i| i + 1)
    }
}

impl Semigroup for ReesQuotient {
    fn order(&self) -> usize {
        self.table.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table.mul(a, b)
    }

    fn label(&self, a: usize) -> String {
        self.map_of(a).map_or_else(|| "0".to_string(), ChainMap::to_string)
    }
}

pub fn rees_quotient(base: &FiniteSemigroup, p: usize) -> Result<ReesQuotient, ReesError> {
    ReesQuotient::new(base, p)
}

/// Independently computed inverse-semigroup evidence for a quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InverseReport {
    pub regular: bool,
    pub idempotents_commute: bool,
    pub unique_inverses: bool,
    pub orthodox: bool,
    pub l_unipotent: bool,
    pub r_unipotent: bool,
    pub inverse: bool,
    /// All routes reach the same inverse verdict.
    pub consistent: bool,
}

pub fn verify_inverse<S: Semigroup + ?Sized>(q: &S) -> Result<InverseReport, ReesError> {
    let criteria = q.inverse_criteria();
    let all: Vec<usize> = (0..q.order()).collect();
    let orthodox = q.is_orthodox();
    let l_unipotent = is_l_unipotent(q, &all)?;
    let r_unipotent = is_r_unipotent(q, &all)?;
    let by_commuting = criteria.regular && criteria.idempotents_commute;
    let by_unipotence = orthodox && l_unipotent && r_unipotent;
    let consistent = by_commuting == criteria.unique_inverses && by_commuting == by_unipotence;
    Ok(InverseReport {
        regular: criteria.regular,
        idempotents_commute: criteria.idempotents_commute,
        unique_inverses: criteria.unique_inverses,
        orthodox,
        l_unipotent,
        r_unipotent,
        inverse: by_commuting && consistent,
        consistent,
    })
}

/// The order-preserving idempotent with image `[lo, hi]`: points below `lo`
/// go to `lo`, points above `hi` go to `hi`, the rest stay put.
pub fn clamp_idempotent(n: usize, lo: usize, hi: usize) -> ChainMap {
    assert!(1 <= lo && lo <= hi && hi <= n);
    let word: Vec<i64> = (1..=n).map(|x| x.clamp(lo, hi) as i64).collect();
    ChainMap::new(n, &word).expect("clamp stays in range")
}
