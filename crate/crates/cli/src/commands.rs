use anyhow::{bail, Result};
use contracta::green::{regular_char_ct, regular_char_orct, Method, RelationKind, RelationPartition};
use contracta::map::{ChainMap, FamilyTag};
use contracta::partition::{max_refinement, KernelPartition, MaxRefinement, RefinementReading};
use contracta::rees::{regular_base, rees_quotient, verify_inverse, InverseReport};
use contracta::semigroup::{enumerate_family_with, FiniteSemigroup, Semigroup, SemigroupExt};
use contracta::verify::{relation_partition, run_check, CheckId, Verdict, VerifyReport};
use serde::Serialize;

use crate::config::Guards;

pub const SCHEMA: u32 = 1;

/// A finished command: its JSON document, its CSV projection and whether it
/// counts as a success for the exit code.
pub struct Outcome {
    pub json: String,
    pub csv: Vec<Vec<String>>,
    pub success: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

fn finish<T: Serialize>(command: &str, body: &T, csv: Vec<Vec<String>>, success: bool) -> Result<Outcome> {
    let json = serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        command,
        body,
    })?;
    Ok(Outcome { json, csv, success })
}

fn word(m: &ChainMap) -> Vec<usize> {
    m.word().collect()
}

fn row<I: IntoIterator<Item = S>, S: ToString>(cells: I) -> Vec<String> {
    cells.into_iter().map(|c| c.to_string()).collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn enumerate(family: FamilyTag, n: usize, guards: &Guards) -> Result<FiniteSemigroup> {
    guards.check_enumeration(family, n)?;
    Ok(enumerate_family_with(family, n, &guards.enumeration)?)
}

#[derive(Serialize)]
struct ElementRow {
    map: Vec<usize>,
    height: usize,
    idempotent: bool,
    regular: Option<bool>,
}

#[derive(Serialize)]
struct EnumerateBody {
    family: FamilyTag,
    n: usize,
    order: usize,
    idempotents: usize,
    regular: Option<usize>,
    elements: Vec<ElementRow>,
}

pub fn cmd_enumerate(family: FamilyTag, n: usize, guards: &Guards) -> Result<Outcome> {
    let s = enumerate(family, n, guards)?;
    // regularity needs an oracle scan; beyond its guard it is left out
    let regular = guards.oracle_allows(family, n).then(|| {
        let mut flags = vec![false; s.len()];
        for i in s.regular_elements() {
            flags[i] = true;
        }
        flags
    });
    let elements: Vec<ElementRow> = s
        .elements()
        .iter()
        .enumerate()
        .map(|(i, m)| ElementRow {
            map: word(m),
            height: m.height(),
            idempotent: m.is_idempotent(),
            regular: regular.as_ref().map(|r| r[i]),
        })
        .collect();
    let body = EnumerateBody {
        family,
        n,
        order: s.len(),
        idempotents: elements.iter().filter(|e| e.idempotent).count(),
        regular: regular.as_ref().map(|r| r.iter().filter(|&&x| x).count()),
        elements,
    };
    let mut csv = vec![row(["map", "height", "idempotent", "regular"])];
    for (m, e) in s.elements().iter().zip(&body.elements) {
        csv.push(row([m.to_string(), e.height.to_string(), e.idempotent.to_string(), opt(e.regular)]));
    }
    finish("enumerate", &body, csv, true)
}

#[derive(Serialize)]
struct TransversalRow {
    points: Vec<usize>,
    convex: bool,
    relatively_convex: bool,
    admissible: bool,
    isometry: bool,
}

#[derive(Serialize)]
struct RefinementView {
    reading: &'static str,
    partition: String,
    tie: bool,
    maximal: Vec<String>,
    has_convex_transversal: bool,
}

impl RefinementView {
    fn new(reading: &'static str, r: &MaxRefinement) -> Self {
        RefinementView {
            reading,
            partition: r.partition.to_string(),
            tie: r.is_tie(),
            maximal: r.maximal.iter().map(ToString::to_string).collect(),
            has_convex_transversal: r.partition.has_convex_transversal(),
        }
    }
}

#[derive(Serialize)]
struct Regularity {
    family: FamilyTag,
    oracle: Option<bool>,
    char: bool,
}

#[derive(Serialize)]
struct AnalyzeBody {
    n: usize,
    map: Vec<usize>,
    families: Vec<FamilyTag>,
    height: usize,
    image: Vec<usize>,
    fix_points: Vec<usize>,
    idempotent: bool,
    kernel: String,
    kernel_blocks: Vec<Vec<usize>>,
    transversals: Vec<TransversalRow>,
    convex_transversal: Option<Vec<usize>>,
    max_refinement: Option<RefinementView>,
    max_admissible_refinement: Option<RefinementView>,
    /// Regular in the widest contraction family containing the map.
    regular: Option<bool>,
    regularity: Vec<Regularity>,
}

pub fn cmd_analyze(n: usize, map: &str, guards: &Guards) -> Result<Outcome> {
    let a: ChainMap = map.parse()?;
    if a.degree() != n {
        bail!("map {a} has degree {}, expected --n {n}", a.degree());
    }
    guards.check_enumeration(FamilyTag::T, n)?;
    let kernel = KernelPartition::kernel(&a);
    let contraction = a.is_contraction();
    let transversals = kernel
        .transversals()
        .map(|t| {
            Ok(TransversalRow {
                points: t.points(),
                convex: t.is_convex(),
                relatively_convex: t.is_relatively_convex(),
                admissible: t.is_admissible(),
                isometry: t.is_isometry_on(&a)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let convex_transversal = kernel.convex_transversals().first().map(|t| t.points());
    let (max_convex, max_adm) = if contraction {
        (
            Some(RefinementView::new("convex", &max_refinement(&a, RefinementReading::Convex)?)),
            Some(RefinementView::new("admissible", &max_refinement(&a, RefinementReading::Admissible)?)),
        )
    } else {
        (None, None)
    };
    let families: Vec<FamilyTag> = FamilyTag::ALL.into_iter().filter(|f| f.contains(&a)).collect();
    let mut regular = Vec::new();
    for &f in families.iter().filter(|&&f| f != FamilyTag::T) {
        let char = match f {
            FamilyTag::CT => regular_char_ct(&a)?,
            _ => regular_char_orct(&a)?,
        };
        let oracle = if guards.oracle_allows(f, n) {
            let s = enumerate(f, n, guards)?;
            let i = s.index_of(&a).expect("map belongs to its family");
            Some(s.is_regular_element(i))
        } else {
            None
        };
        regular.push(Regularity { family: f, oracle, char });
    }
    let success = regular.iter().all(|r| r.oracle.is_none_or(|o| o == r.char));
    let body = AnalyzeBody {
        n,
        map: word(&a),
        families,
        height: a.height(),
        image: a.image(),
        fix_points: a.fix_points(),
        idempotent: a.is_idempotent(),
        kernel: kernel.to_string(),
        kernel_blocks: kernel.blocks().to_vec(),
        transversals,
        convex_transversal,
        max_refinement: max_convex,
        max_admissible_refinement: max_adm,
        regular: regular.first().map(|r| r.oracle.unwrap_or(r.char)),
        regularity: regular,
    };
    let fmt_set = |v: &[usize]| format!("{{{}}}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    let mut csv = vec![row(["key", "value"])];
    csv.push(row(["map".to_string(), a.to_string()]));
    csv.push(row(["height".to_string(), body.height.to_string()]));
    csv.push(row(["idempotent".to_string(), body.idempotent.to_string()]));
    csv.push(row(["kernel".to_string(), body.kernel.clone()]));
    csv.push(row(["convex_transversal".to_string(), body.convex_transversal.as_deref().map_or_else(|| "none".into(), fmt_set)]));
    if let Some(r) = &body.max_refinement {
        csv.push(row(["max_refinement".to_string(), r.partition.clone()]));
    }
    if let Some(r) = &body.max_admissible_refinement {
        csv.push(row(["max_admissible_refinement".to_string(), r.partition.clone()]));
    }
    csv.push(row(["regular".to_string(), opt(body.regular)]));
    for r in &body.regularity {
        csv.push(row([format!("regular_{}_char", r.family), r.char.to_string()]));
        csv.push(row([format!("regular_{}_oracle", r.family), opt(r.oracle)]));
    }
    finish("analyze", &body, csv, success)
}

#[derive(Serialize)]
struct RelationsBody {
    family: FamilyTag,
    n: usize,
    relation: RelationKind,
    method: String,
    count: usize,
    classes: Vec<Vec<Vec<usize>>>,
}

pub fn cmd_relations(family: FamilyTag, n: usize, kind: RelationKind, method: Method, guards: &Guards) -> Result<Outcome> {
    if method == Method::Oracle {
        guards.check_oracle(family, n)?;
    }
    if method == Method::Characterized && family != FamilyTag::CT && !kind.is_starred() {
        bail!("characterized {kind} is only available for family ct");
    }
    let s = enumerate(family, n, guards)?;
    let p: RelationPartition = relation_partition(&s, kind, method)?;
    let classes: Vec<Vec<Vec<usize>>> = p
        .classes()
        .iter()
        .map(|c| c.iter().map(|&i| word(s.element(i))).collect())
        .collect();
    let mut csv = vec![row(["class", "map"])];
    for (k, c) in p.classes().iter().enumerate() {
        for &i in c {
            csv.push(row([k.to_string(), s.element(i).to_string()]));
        }
    }
    let body = RelationsBody {
        family,
        n,
        relation: kind,
        method: method.to_string(),
        count: classes.len(),
        classes,
    };
    finish("relations", &body, csv, true)
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    n: usize,
    passed: bool,
    reports: &'a [VerifyReport],
}

fn verify_reports(checks: &[CheckId], family: Option<FamilyTag>, n: usize, timing: bool, guards: &Guards) -> Result<Vec<VerifyReport>> {
    let mut reports = Vec::new();
    for &c in checks {
        let families: Vec<FamilyTag> = match family {
            Some(f) => {
                if !c.families().contains(&f) {
                    bail!("check {c} does not apply to family {f}");
                }
                vec![f]
            }
            None => c.families().to_vec(),
        };
        for f in families {
            guards.check_oracle(f, n)?;
            let start = std::time::Instant::now();
            let mut rs = run_check(c, f, n)?;
            if timing {
                let ms = start.elapsed().as_millis() as u64;
                for r in &mut rs {
                    r.elapsed_ms = Some(ms);
                }
            }
            reports.extend(rs);
        }
    }
    Ok(reports)
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

fn report_csv(reports: &[VerifyReport]) -> Vec<Vec<String>> {
    let mut csv = vec![row(["check", "family", "n", "p", "verdict", "expected", "as_expected", "detail", "counterexample", "reason"])];
    for r in reports {
        let cx = r.counterexample.as_ref();
        csv.push(row([
            r.check.clone(),
            r.family.to_string(),
            r.n.to_string(),
            opt(r.p),
            verdict(r.verdict).to_string(),
            r.expected.map_or(String::new(), |e| verdict(e).to_string()),
            r.as_expected().to_string(),
            r.detail.clone(),
            cx.map_or(String::new(), |c| c.elements.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")),
            cx.map_or(String::new(), |c| c.reason.clone()),
        ]));
    }
    csv
}

pub fn cmd_verify(checks: &[CheckId], family: Option<FamilyTag>, n: usize, timing: bool, guards: &Guards) -> Result<Outcome> {
    let reports = verify_reports(checks, family, n, timing, guards)?;
    let passed = reports.iter().all(VerifyReport::as_expected);
    let body = VerifyBody {
        n,
        passed,
        reports: &reports,
    };
    finish("verify", &body, report_csv(&reports), passed)
}

#[derive(Serialize)]
struct CounterexampleBody<'a> {
    check: String,
    family: Option<FamilyTag>,
    max_n: usize,
    found: bool,
    witness: Option<&'a VerifyReport>,
}

/// Scans `n = 1..=max_n` and stops at the first report whose property fails.
pub fn cmd_counterexample(check: CheckId, family: Option<FamilyTag>, max_n: usize, guards: &Guards) -> Result<Outcome> {
    let mut witness = None;
    for n in 1..=max_n {
        let reports = verify_reports(&[check], family, n, false, guards)?;
        if let Some(r) = reports.into_iter().find(|r| !r.passed()) {
            witness = Some(r);
            break;
        }
    }
    let csv = match &witness {
        Some(r) => report_csv(std::slice::from_ref(r)),
        None => vec![row(["witness"]), row(["none"])],
    };
    let body = CounterexampleBody {
        check: check.to_string(),
        family,
        max_n,
        found: witness.is_some(),
        witness: witness.as_ref(),
    };
    finish("counterexample", &body, csv, true)
}

#[derive(Serialize)]
struct ReesBody {
    family: FamilyTag,
    n: usize,
    p: usize,
    order: usize,
    carrier: Vec<Vec<usize>>,
    idempotents: Vec<Vec<usize>>,
    report: InverseReport,
}

pub fn cmd_rees(family: FamilyTag, n: usize, p: usize, guards: &Guards) -> Result<Outcome> {
    guards.check_oracle(family, n)?;
    guards.check_enumeration(family, n)?;
    let base = regular_base(family, n)?;
    let q = rees_quotient(&base, p)?;
    let report = verify_inverse(&q)?;
    // the zero is listed as an empty word
    let label = |i: usize| q.map_of(i).map_or_else(Vec::new, word);
    let body = ReesBody {
        family,
        n,
        p,
        order: q.order(),
        carrier: (0..q.order()).map(label).collect(),
        idempotents: q.idempotents().into_iter().map(label).collect(),
        report,
    };
    let mut csv = vec![row(["index", "map", "height", "idempotent"])];
    for i in 0..q.order() {
        let height = q.map_of(i).map_or(0, ChainMap::height);
        csv.push(row([i.to_string(), q.label(i), height.to_string(), q.is_idempotent(i).to_string()]));
    }
    finish("rees", &body, csv, report.inverse && report.consistent)
}
