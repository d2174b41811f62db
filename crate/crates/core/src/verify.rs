//! Named theorem checks over enumerated families.
//!
//! Each check computes a property by brute force, compares it with what the
//! theory predicts, and returns one [`VerifyReport`] per sub-property. A
//! report whose property fails always carries a replayable counterexample.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::green::{
    characterized_partition, d_char, l_char, r_char, regular_char_ct, regular_char_orct,
    right_abundance_witness, left_abundance_witness, starred_char, unipotence_witness,
    GreenError, GreenOracle, RelationKind, RelationPartition, Side,
};
use crate::map::{ChainMap, FamilyTag};
use crate::partition::{max_refinement, KernelPartition, PartitionError, RefinementReading};
use crate::rees::{regular_base, rees_quotient, verify_inverse, ReesError};
use crate::semigroup::{enumerate_family, EngineError, FiniteSemigroup, Semigroup, SemigroupExt, SubsetView};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("check {check} does not apply to family {family}")]
    FamilyNotSupported { check: CheckId, family: FamilyTag },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Rees(#[from] ReesError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    RegularityCt,
    RegularityOrct,
    GreenL,
    GreenR,
    GreenD,
    Starred,
    Abundance,
    Unipotence,
    Orthodox,
    IdempotentProducts,
    ImageConvexity,
    Structure,
    MaxRefinement,
    ReesInverse,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        CheckId::RegularityCt,
        CheckId::RegularityOrct,
        CheckId::GreenL,
        CheckId::GreenR,
        CheckId::GreenD,
        CheckId::Starred,
        CheckId::Abundance,
        CheckId::Unipotence,
        CheckId::Orthodox,
        CheckId::IdempotentProducts,
        CheckId::ImageConvexity,
        CheckId::Structure,
        CheckId::MaxRefinement,
        CheckId::ReesInverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::RegularityCt => "regularity-ct",
            CheckId::RegularityOrct => "regularity-orct",
            CheckId::GreenL => "green-l",
            CheckId::GreenR => "green-r",
            CheckId::GreenD => "green-d",
            CheckId::Starred => "starred",
            CheckId::Abundance => "abundance",
            CheckId::Unipotence => "unipotence",
            CheckId::Orthodox => "orthodox",
            CheckId::IdempotentProducts => "idempotent-products",
            CheckId::ImageConvexity => "image-convexity",
            CheckId::Structure => "structure",
            CheckId::MaxRefinement => "max-refinement",
            CheckId::ReesInverse => "rees-inverse",
        }
    }

    /// Families the check is defined for.
    pub fn families(self) -> &'static [FamilyTag] {
        use FamilyTag::*;
        match self {
            CheckId::RegularityCt | CheckId::GreenL | CheckId::GreenR | CheckId::GreenD | CheckId::MaxRefinement => &[CT],
            CheckId::RegularityOrct | CheckId::Unipotence | CheckId::ReesInverse => &[ORCT, OCT],
            CheckId::Structure => &[T, CT, OCT, ORCT],
            CheckId::Starred
            | CheckId::Abundance
            | CheckId::Orthodox
            | CheckId::IdempotentProducts
            | CheckId::ImageConvexity => &[CT, OCT, ORCT],
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| VerifyError::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub elements: Vec<ChainMap>,
    pub reason: String,
    /// Command reproducing the violation.
    pub replay: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub family: FamilyTag,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    /// Whether the property holds.
    pub verdict: Verdict,
    /// What the theory predicts; `None` for purely informational properties.
    pub expected: Option<Verdict>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerifyReport {
    /// The computed verdict matches the prediction (or there is none).
    pub fn as_expected(&self) -> bool {
        self.expected.is_none_or(|e| e == self.verdict)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn analyze_replay(maps: &[ChainMap]) -> String {
    maps.iter()
        .map(|m| format!("contracta analyze --n {} --map {m}", m.degree()))
        .collect::<Vec<_>>()
        .join(" && ")
}

struct Ctx {
    family: FamilyTag,
    n: usize,
}

impl Ctx {
    fn report(
        &self,
        check: &str,
        holds: bool,
        expected: Option<bool>,
        detail: String,
        witness: Option<(Vec<ChainMap>, String, String)>,
    ) -> VerifyReport {
        let verdict = if holds { Verdict::Pass } else { Verdict::Fail };
        VerifyReport {
            check: check.to_string(),
            family: self.family,
            n: self.n,
            p: None,
            verdict,
            expected: expected.map(|e| if e { Verdict::Pass } else { Verdict::Fail }),
            detail,
            counterexample: if holds {
                None
            } else {
                witness.map(|(elements, reason, replay)| Counterexample {
                    elements,
                    reason,
                    replay,
                })
            },
            elapsed_ms: None,
        }
    }

    /// Report for a property that must hold for every element.
    fn for_all(&self, check: &str, expected: Option<bool>, what: &str, failure: Option<(Vec<ChainMap>, String)>, total: usize) -> VerifyReport {
        match failure {
            None => self.report(check, true, expected, format!("{what} on all {total} elements"), None),
            Some((maps, reason)) => {
                let replay = analyze_replay(&maps);
                self.report(check, false, expected, format!("{what} fails"), Some((maps, reason, replay)))
            }
        }
    }

    fn relations_replay(&self, kind: RelationKind) -> String {
        format!(
            "contracta relations --family {} --n {} --relation {kind} --method oracle && contracta relations --family {} --n {} --relation {kind} --method char",
            self.family, self.n, self.family, self.n
        )
    }

    /// Pairwise agreement between an oracle partition and a predicate.
    fn agreement(
        &self,
        check: &str,
        s: &FiniteSemigroup,
        oracle: &RelationPartition,
        pred: impl Fn(&ChainMap, &ChainMap) -> Result<bool, GreenError> + Sync,
    ) -> Result<VerifyReport, VerifyError> {
        use rayon::prelude::*;
        let els = s.elements();
        let n = els.len();
        let bad = (0..n)
            .into_par_iter()
            .map(|a| -> Result<Option<(usize, usize, bool)>, GreenError> {
                for b in 0..n {
                    let c = pred(&els[a], &els[b])?;
                    if c != oracle.related(a, b) {
                        return Ok(Some((a, b, c)));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .next();
        Ok(match bad {
            None => self.report(
                check,
                true,
                Some(true),
                format!("{} pairs agree ({} {} classes)", n * n, oracle.len(), oracle.kind),
                None,
            ),
            Some((a, b, c)) => {
                let maps = vec![els[a].clone(), els[b].clone()];
                let reason = format!(
                    "characterization says {c}, oracle says {} for ({}, {})",
                    !c, els[a], els[b]
                );
                self.report(
                    check,
                    false,
                    Some(true),
                    "characterization disagrees with the oracle".into(),
                    Some((maps, reason, self.relations_replay(oracle.kind))),
                )
            }
        })
    }
}

fn first_failure(els: &[ChainMap], bad: impl Fn(&ChainMap) -> bool) -> Option<&ChainMap> {
    els.iter().find(|m| bad(m))
}

/// Two elements related in `fine` but not in `coarse`.
fn refinement_witness(fine: &RelationPartition, coarse: &RelationPartition) -> Option<(usize, usize)> {
    fine.classes().iter().find_map(|c| {
        c.iter()
            .find(|&&x| !coarse.related(c[0], x))
            .map(|&x| (c[0], x))
    })
}

fn is_convex(set: &[usize]) -> bool {
    set.is_empty() || set[set.len() - 1] - set[0] + 1 == set.len()
}

type PairPredicate = fn(&ChainMap, &ChainMap) -> Result<bool, GreenError>;

/// Runs one named check on `family` at size `n`.
pub fn run_check(check: CheckId, family: FamilyTag, n: usize) -> Result<Vec<VerifyReport>, VerifyError> {
    if !check.families().contains(&family) {
        return Err(VerifyError::FamilyNotSupported { check, family });
    }
    let ctx = Ctx { family, n };
    let s = enumerate_family(family, n)?;
    let els = s.elements();
    let name = check.name();
    let mut out = Vec::new();
    match check {
        CheckId::RegularityCt | CheckId::RegularityOrct => {
            let char_fn: fn(&ChainMap) -> Result<bool, GreenError> = if check == CheckId::RegularityCt {
                regular_char_ct
            } else {
                regular_char_orct
            };
            let mut failure = None;
            for (i, a) in els.iter().enumerate() {
                let oracle = s.is_regular_element(i);
                let c = char_fn(a)?;
                if oracle != c {
                    failure = Some((vec![a.clone()], format!("oracle regular = {oracle}, characterization = {c}")));
                    break;
                }
            }
            let regular = s.regular_elements().len();
            let mut r = ctx.for_all(name, Some(true), "characterization agrees with a = aba", failure, els.len());
            r.detail.push_str(&format!("; {regular} regular elements"));
            out.push(r);
        }
        CheckId::GreenL | CheckId::GreenR | CheckId::GreenD => {
            let (kind, pred): (RelationKind, PairPredicate) = match check {
                CheckId::GreenL => (RelationKind::L, l_char),
                CheckId::GreenR => (RelationKind::R, r_char),
                _ => (RelationKind::D, d_char),
            };
            let oracle = GreenOracle::new(&s).partition(kind)?;
            out.push(ctx.agreement(name, &s, &oracle, pred)?);
        }
        CheckId::Starred => {
            let o = GreenOracle::new(&s);
            // the characterization is stated for CT and OCT only
            let expected = matches!(family, FamilyTag::CT | FamilyTag::OCT).then_some(true);
            for kind in RelationKind::STARRED {
                let oracle = o.partition(kind)?;
                let mut r = ctx.agreement(&format!("{name}/{kind}"), &s, &oracle, |a, b| starred_char(a, b, kind))?;
                r.expected = expected.map(|_| Verdict::Pass);
                out.push(r);
            }
        }
        CheckId::Abundance => {
            for (side, label, expected) in [(Side::Left, "left", true), (Side::Right, "right", n <= 3)] {
                let witness = match side {
                    Side::Left => left_abundance_witness(&s),
                    Side::Right => right_abundance_witness(&s),
                };
                let star = if side == Side::Left { "L*" } else { "R*" };
                out.push(match witness {
                    None => ctx.report(&format!("{name}/{label}"), true, Some(expected), format!("every {star}-class contains an idempotent"), None),
                    Some(class) => {
                        let maps = s.maps_of(&class);
                        let reason = format!("{star}-class of {} elements with no idempotent", maps.len());
                        let replay = format!(
                            "contracta relations --family {family} --n {n} --relation {} --method oracle",
                            if side == Side::Left { "lstar" } else { "rstar" }
                        );
                        ctx.report(&format!("{name}/{label}"), false, Some(expected), format!("some {star}-class has no idempotent"), Some((maps, reason, replay)))
                    }
                });
            }
        }
        CheckId::Unipotence => {
            let reg = s.regular_elements();
            for (side, label, expected) in [(Side::Left, "l-unipotent", true), (Side::Right, "r-unipotent", n == 1)] {
                let witness = unipotence_witness(&s, &reg, side)?;
                let what = if side == Side::Left { "L" } else { "R" };
                out.push(match witness {
                    None => ctx.report(&format!("{name}/{label}"), true, Some(expected), format!("every {what}-class of Reg({family}_{n}) has one idempotent"), None),
                    Some(class) => {
                        let maps = s.maps_of(&class);
                        let idem: Vec<String> = maps.iter().filter(|m| m.is_idempotent()).map(ToString::to_string).collect();
                        let reason = format!("{what}-class with idempotents {{{}}}", idem.join(", "));
                        let replay = analyze_replay(&maps);
                        ctx.report(&format!("{name}/{label}"), false, Some(expected), format!("an {what}-class of Reg({family}_{n}) does not have exactly one idempotent"), Some((maps, reason, replay)))
                    }
                });
            }
        }
        CheckId::Orthodox => {
            let reg = s.regular_elements();
            let label = format!("{name}/reg-regular-subsemigroup");
            let view = match SubsetView::new(&s, &reg) {
                Ok(v) => v,
                Err(EngineError::NotClosed { left, right, product }) => {
                    let maps = [&left, &right]
                        .iter()
                        .map(|l| l.parse::<ChainMap>().expect("labels are image words"))
                        .collect();
                    let reason = format!("{left} * {right} = {product} is not regular");
                    let replay = format!("contracta analyze --n {n} --map {product}");
                    out.push(ctx.report(&label, false, Some(true), format!("Reg({family}_{n}) is not closed"), Some((maps, reason, replay))));
                    return Ok(out);
                }
                Err(e) => return Err(e.into()),
            };
            let irregular = (0..view.order()).find(|&i| !view.is_regular_element(i));
            out.push(ctx.for_all(
                &label,
                Some(true),
                &format!("Reg({family}_{n}) closed and regular in itself"),
                irregular.map(|i| (vec![s.element(view.global(i)).clone()], "not regular inside Reg".into())),
                reg.len(),
            ));
            let orthodox_expected = match family {
                FamilyTag::ORCT | FamilyTag::OCT => Some(true),
                _ => None,
            };
            let e = view.idempotents();
            let bad = e.iter().find_map(|&x| {
                e.iter()
                    .find(|&&y| !view.is_idempotent(view.mul(x, y)))
                    .map(|&y| (x, y))
            });
            let holds = irregular.is_none() && bad.is_none();
            let witness = bad.map(|(x, y)| {
                let maps = vec![s.element(view.global(x)).clone(), s.element(view.global(y)).clone()];
                let prod = maps[0].then(&maps[1]).expect("same degree");
                let reason = format!("{} * {} = {prod} is not idempotent", maps[0], maps[1]);
                let replay = analyze_replay(&[prod]);
                (maps, reason, replay)
            });
            out.push(ctx.report(&format!("{name}/reg-orthodox"), holds, orthodox_expected, format!("{} idempotents in Reg({family}_{n})", e.len()), witness));
        }
        CheckId::IdempotentProducts => {
            let e = s.idempotents();
            // products of idempotents are regular in the ambient family
            let bad = e.iter().find_map(|&x| {
                e.iter()
                    .map(|&y| s.mul(x, y))
                    .find(|&p| !s.is_regular_element(p))
                    .map(|p| (x, p))
            });
            out.push(ctx.for_all(
                &format!("{name}/ef-regular"),
                Some(true),
                "ef regular for idempotents e, f",
                bad.map(|(x, p)| (vec![s.element(x).clone(), s.element(p).clone()], format!("product {} is not regular", s.element(p)))),
                e.len() * e.len(),
            ));
            let generated = s.generated_subsemigroup(&e)?;
            let irregular = (0..generated.len()).find(|&i| !generated.is_regular_element(i));
            let regular = irregular.is_none();
            let mut r = ctx.for_all(
                &format!("{name}/generated-regular"),
                Some(true),
                "<E> regular in itself",
                irregular.map(|i| (vec![generated.element(i).clone()], format!("not regular inside <E({family}_{n})>"))),
                generated.len(),
            );
            r.detail.push_str(&format!("; |<E>| = {}", generated.len()));
            out.push(r);
            let reg = s.regular_elements();
            let reg_regular = SubsetView::new(&s, &reg).map(|v| v.is_regular()).unwrap_or(false);
            let all_ef = bad.is_none();
            let agree = all_ef == reg_regular && reg_regular == regular;
            let witness = bad
                .map(|(x, p)| vec![s.element(x).clone(), s.element(p).clone()])
                .or_else(|| irregular.map(|i| vec![generated.element(i).clone()]))
                .map(|maps| {
                    let replay = analyze_replay(&maps);
                    (maps, "the three conditions do not hold or fail together".to_string(), replay)
                });
            out.push(ctx.report(&format!("{name}/equivalent-conditions"), agree, Some(true), format!("ef regular = {all_ef}, Reg regular subsemigroup = {reg_regular}, <E> regular = {regular}"), witness));
            if matches!(family, FamilyTag::ORCT | FamilyTag::OCT) {
                let not_closed = e.iter().find_map(|&x| {
                    e.iter()
                        .find(|&&y| !s.is_idempotent(s.mul(x, y)))
                        .map(|&y| vec![s.element(x).clone(), s.element(y).clone()])
                });
                out.push(ctx.for_all(
                    &format!("{name}/e-closed"),
                    Some(true),
                    "products of idempotents are idempotent",
                    not_closed.map(|maps| (maps, "product of idempotents is not idempotent".into())),
                    e.len() * e.len(),
                ));
                let bad_form = e.iter().map(|&x| s.element(x)).find(|m| !is_clamp(m));
                out.push(ctx.for_all(
                    &format!("{name}/canonical-form"),
                    Some(true),
                    "idempotents are clamp maps",
                    bad_form.map(|m| (vec![m.clone()], "idempotent not of the canonical stationary-block form".into())),
                    e.len(),
                ));
            }
        }
        CheckId::ImageConvexity => {
            let bad = first_failure(els, |m| !is_convex(&m.image()));
            out.push(ctx.for_all(name, Some(true), "image is convex", bad.map(|m| (vec![m.clone()], "image not convex".into())), els.len()));
        }
        CheckId::Structure => {
            let o = GreenOracle::new(&s);
            let parts = [RelationKind::GREEN.as_slice(), RelationKind::STARRED.as_slice()]
                .concat()
                .into_iter()
                .map(|k| Ok((k, o.partition(k)?)))
                .collect::<Result<HashMap<_, _>, GreenError>>()?;
            let p = |k: RelationKind| &parts[&k];
            use RelationKind::*;
            let mut push = |label: &str, pairs: &[(RelationKind, RelationKind)], detail: String| {
                let bad = pairs.iter().find_map(|&(fine, coarse)| {
                    refinement_witness(p(fine), p(coarse)).map(|(a, b)| (fine, coarse, a, b))
                });
                let witness = bad.map(|(fine, coarse, a, b)| {
                    let maps = vec![els[a].clone(), els[b].clone()];
                    let reason = format!("{fine}-related but not {coarse}-related");
                    let replay = format!("contracta relations --family {family} --n {n} --relation {coarse} --method oracle");
                    (maps, reason, replay)
                });
                out.push(ctx.report(&format!("{name}/{label}"), bad.is_none(), Some(true), detail, witness));
            };
            push(
                "d-equals-j",
                &[(D, J), (J, D)],
                format!("{} D-classes, {} J-classes", p(D).len(), p(J).len()),
            );
            push(
                "green-chain",
                &[(H, L), (H, R), (L, D), (R, D), (D, J)],
                format!("|L| = {}, |R| = {}, |H| = {}", p(L).len(), p(R).len(), p(H).len()),
            );
            push(
                "starred-chain",
                &[(HStar, LStar), (HStar, RStar), (LStar, DStar), (RStar, DStar), (L, LStar), (R, RStar)],
                format!("|L*| = {}, |R*| = {}, |D*| = {}", p(LStar).len(), p(RStar).len(), p(DStar).len()),
            );
        }
        CheckId::MaxRefinement => {
            for reading in [RefinementReading::Convex, RefinementReading::Admissible] {
                let label = match reading {
                    RefinementReading::Convex => "convex",
                    RefinementReading::Admissible => "admissible",
                };
                let mut ties = 0;
                let mut failure = None;
                for a in els {
                    let res = max_refinement(a, reading)?;
                    ties += usize::from(res.is_tie());
                    let ok = res.partition.refines(&KernelPartition::kernel(a)) && res.partition.has_convex_transversal();
                    if !ok && failure.is_none() {
                        failure = Some((vec![a.clone()], format!("maximum refinement {} has no convex transversal", res.partition)));
                    }
                }
                let mut r = ctx.for_all(&format!("{name}/{label}"), Some(true), "result refines the kernel and has a convex transversal", failure, els.len());
                r.detail.push_str(&format!("; {ties} maps with tied maximal refinements"));
                out.push(r);
            }
        }
        CheckId::ReesInverse => {
            let base = regular_base(family, n)?;
            for p in 2..=n {
                let q = rees_quotient(&base, p)?;
                let rep = verify_inverse(&q)?;
                let mut r = ctx.report(
                    name,
                    rep.inverse && rep.consistent,
                    Some(true),
                    format!(
                        "|Q| = {}: regular {}, idempotents commute {}, unique inverses {}, L-unipotent {}, R-unipotent {}",
                        q.order(),
                        rep.regular,
                        rep.idempotents_commute,
                        rep.unique_inverses,
                        rep.l_unipotent,
                        rep.r_unipotent
                    ),
                    None,
                );
                r.p = Some(p);
                if !r.passed() {
                    r.counterexample = Some(Counterexample {
                        elements: q.carrier().to_vec(),
                        reason: format!("inverse criteria: {rep:?}"),
                        replay: format!("contracta rees --family {family} --n {n} --p {p}"),
                    });
                }
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Convenience for relation partitions computed by the chosen method.
pub fn relation_partition(s: &FiniteSemigroup, kind: RelationKind, method: crate::green::Method) -> Result<RelationPartition, GreenError> {
    match method {
        crate::green::Method::Oracle => GreenOracle::new(s).partition(kind),
        crate::green::Method::Characterized => characterized_partition(s, kind),
    }
}

fn is_clamp(m: &ChainMap) -> bool {
    let im = m.image();
    let (lo, hi) = (im[0], im[im.len() - 1]);
    m.word().enumerate().all(|(i, v)| v == (i + 1).clamp(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_roundtrip() {
        for c in CheckId::ALL {
            assert_eq!(c.name().parse::<CheckId>().unwrap(), c);
        }
        assert!("nope".parse::<CheckId>().is_err());
    }

    #[test]
    fn family_guard() {
        assert!(matches!(
            run_check(CheckId::GreenL, FamilyTag::OCT, 3),
            Err(VerifyError::FamilyNotSupported { .. })
        ));
    }

    #[test]
    fn abundance_reports_witness() {
        let reports = run_check(CheckId::Abundance, FamilyTag::CT, 4).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports[0].passed() && reports[0].as_expected());
        assert!(!reports[1].passed() && reports[1].as_expected());
        let mut w = reports[1].counterexample.as_ref().unwrap().elements.clone();
        w.sort();
        let expected: Vec<ChainMap> = ["[1,2,2,3]", "[2,3,3,4]", "[3,2,2,1]", "[4,3,3,2]"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(w, expected);
    }

    #[test]
    fn small_checks_pass() {
        for c in CheckId::ALL {
            for &f in c.families() {
                for r in run_check(c, f, 3).unwrap() {
                    assert!(r.as_expected(), "{r:?}");
                    if !r.passed() {
                        assert!(r.counterexample.is_some(), "{r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn clamp_shape() {
        assert!(is_clamp(&"[2,2,3,4,4]".parse().unwrap()));
        assert!(is_clamp(&"[3,3,3]".parse().unwrap()));
        assert!(!is_clamp(&"[3,2,3,2]".parse().unwrap()));
    }

    #[test]
    fn ct6_failures_carry_witnesses() {
        let mut failing = Vec::new();
        for c in [CheckId::IdempotentProducts, CheckId::Orthodox, CheckId::MaxRefinement] {
            for r in run_check(c, FamilyTag::CT, 6).unwrap() {
                if !r.passed() {
                    assert!(r.counterexample.is_some(), "{r:?}");
                    failing.push(r);
                }
            }
        }
        let ef = failing.iter().find(|r| r.check == "idempotent-products/ef-regular").unwrap();
        let cx = ef.counterexample.as_ref().unwrap();
        assert!(cx.elements[0].is_idempotent());
        assert!(!regular_char_ct(&cx.elements[1]).unwrap());
        let e: ChainMap = "[1,2,3,4,3,2]".parse().unwrap();
        let f: ChainMap = "[6,5,5,4,5,6]".parse().unwrap();
        assert!(e.is_idempotent() && f.is_idempotent() && f.is_contraction());
        let ef_map = e.then(&f).unwrap();
        assert_eq!(ef_map.to_string(), "[6,5,5,4,5,5]");
        assert!(!KernelPartition::kernel(&ef_map).has_convex_transversal());
    }

}
