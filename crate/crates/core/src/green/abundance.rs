//! Abundance and unipotence verdicts.

use super::oracle::GreenOracle;
use super::{GreenError, RelationKind};
use crate::semigroup::{Semigroup, SemigroupExt, SubsetView};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An `L*`-class (left) or `R*`-class (right) holding no idempotent.
pub fn abundance_witness<S: Semigroup + ?Sized>(s: &S, side: Side) -> Option<Vec<usize>> {
    let kind = match side {
        Side::Left => RelationKind::LStar,
        Side::Right => RelationKind::RStar,
    };
    let classes = GreenOracle::new(s)
        .partition(kind)
        .expect("starred oracle partitions are infallible");
    classes
        .classes()
        .iter()
        .find(|c| !c.iter().any(|&x| s.is_idempotent(x)))
        .cloned()
}

pub fn left_abundance_witness<S: Semigroup + ?Sized>(s: &S) -> Option<Vec<usize>> {
    abundance_witness(s, Side::Left)
}

pub fn right_abundance_witness<S: Semigroup + ?Sized>(s: &S) -> Option<Vec<usize>> {
    abundance_witness(s, Side::Right)
}

/// Every `L*`-class contains an idempotent.
pub fn is_left_abundant<S: Semigroup + ?Sized>(s: &S) -> bool {
    left_abundance_witness(s).is_none()
}

/// Every `R*`-class contains an idempotent.
pub fn is_right_abundant<S: Semigroup + ?Sized>(s: &S) -> bool {
    right_abundance_witness(s).is_none()
}

/// An `L`-class (left) or `R`-class (right) of the subsemigroup `subset`
/// whose idempotent count is not exactly one, in parent indices.
pub fn unipotence_witness<S: Semigroup + ?Sized>(
    s: &S,
    subset: &[usize],
    side: Side,
) -> Result<Option<Vec<usize>>, GreenError> {
    let view = SubsetView::new(s, subset)?;
    let kind = match side {
        Side::Left => RelationKind::L,
        Side::Right => RelationKind::R,
    };
    let classes = GreenOracle::new(&view).partition(kind)?;
    Ok(classes
        .classes()
        .iter()
        .find(|c| c.iter().filter(|&&x| view.is_idempotent(x)).count() != 1)
        .map(|c| c.iter().map(|&x| view.global(x)).collect()))
}

/// Each `L`-class of `subset` holds exactly one idempotent.
pub fn is_l_unipotent<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> Result<bool, GreenError> {
    Ok(unipotence_witness(s, subset, Side::Left)?.is_none())
}

/// Each `R`-class of `subset` holds exactly one idempotent.
pub fn is_r_unipotent<S: Semigroup + ?Sized>(s: &S, subset: &[usize]) -> Result<bool, GreenError> {
    Ok(unipotence_witness(s, subset, Side::Right)?.is_none())
}
