//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use contracta::green::{
    is_l_unipotent, is_left_abundant, is_r_unipotent, is_right_abundant, l_char, r_char,
    regular_char_ct, regular_char_orct, right_abundance_witness, starred_char, unipotence_witness,
    GreenOracle, RelationKind, RelationPartition, Side,
};
use contracta::map::{ChainMap, FamilyTag};
use contracta::partition::KernelPartition;
use contracta::rees::{regular_base, rees_quotient, verify_inverse};
use contracta::semigroup::{enumerate_family, FiniteSemigroup, Semigroup, SemigroupExt, SubsetView};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn m(s: &str) -> ChainMap {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn family(f: FamilyTag, n: usize) -> FiniteSemigroup {
    enumerate_family(f, n).unwrap()
}

/// Pairs where a predicate and an oracle partition disagree.
fn disagreements(
    s: &FiniteSemigroup,
    oracle: &RelationPartition,
    pred: impl Fn(&ChainMap, &ChainMap) -> bool,
) -> Vec<(ChainMap, ChainMap)> {
    let els = s.elements();
    let mut bad = Vec::new();
    for a in 0..els.len() {
        for b in 0..els.len() {
            if pred(&els[a], &els[b]) != oracle.related(a, b) {
                bad.push((els[a].clone(), els[b].clone()));
            }
        }
    }
    bad
}

fn regularity_ct() -> Outcome {
    let mut checked = 0;
    for n in 2..=5 {
        let s = family(FamilyTag::CT, n);
        for (i, a) in s.elements().iter().enumerate() {
            let oracle = s.is_regular_element(i);
            let char = regular_char_ct(a).unwrap();
            ensure(oracle == char, || format!("{a}: oracle {oracle}, convex transversal {char}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} maps, 0 disagreements"))
}

fn regularity_orct() -> Outcome {
    let mut checked = 0;
    for f in [FamilyTag::ORCT, FamilyTag::OCT] {
        for n in 2..=6 {
            let s = family(f, n);
            for (i, a) in s.elements().iter().enumerate() {
                let oracle = s.is_regular_element(i);
                let char = regular_char_orct(a).unwrap();
                ensure(oracle == char, || format!("{f} {a}: oracle {oracle}, arithmetic {char}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} maps over orct and oct, 0 disagreements"))
}

fn green_lr() -> Outcome {
    let mut pairs = 0;
    for n in 2..=5 {
        let s = family(FamilyTag::CT, n);
        let o = GreenOracle::new(&s);
        let l = o.partition(RelationKind::L).unwrap();
        let r = o.partition(RelationKind::R).unwrap();
        let bad_l = disagreements(&s, &l, |a, b| l_char(a, b).unwrap());
        ensure(bad_l.is_empty(), || format!("L, n = {n}: {} disagreements, first {:?}", bad_l.len(), bad_l[0]))?;
        let bad_r = disagreements(&s, &r, |a, b| r_char(a, b).unwrap());
        ensure(bad_r.is_empty(), || format!("R, n = {n}: {} disagreements, first {:?}", bad_r.len(), bad_r[0]))?;
        pairs += s.len() * s.len();
    }
    let (alpha, beta, delta) = (m("[1,2,2,3,4,3]"), m("[4,3,2,2,1,2]"), m("[5,4,3,2,1,2]"));
    ensure(delta.then(&beta).unwrap() == alpha, || "delta beta != alpha".into())?;
    ensure(delta.then(&alpha).unwrap() == beta, || "delta alpha != beta".into())?;
    ensure(delta.is_contraction(), || "delta is not a contraction".into())?;
    ensure(l_char(&alpha, &beta).unwrap(), || "l_char rejects the CT_6 pair".into())?;
    let s6 = family(FamilyTag::CT, 6);
    let l6 = GreenOracle::new(&s6).partition(RelationKind::L).unwrap();
    let (ia, ib) = (s6.index_of(&alpha).unwrap(), s6.index_of(&beta).unwrap());
    ensure(l6.related(ia, ib), || "oracle rejects the CT_6 pair".into())?;
    Ok(format!("{pairs} pairs for L and R, CT_6 pair L-related via [5,4,3,2,1,2]"))
}

fn regression_no_convex_transversal() -> Outcome {
    let (alpha, beta) = (m("[1,2,2,3,4,3]"), m("[4,3,2,2,1,2]"));
    for a in [&alpha, &beta] {
        let k = KernelPartition::kernel(a);
        ensure(!k.has_convex_transversal(), || format!("{a}: kernel {k} has a convex transversal"))?;
        ensure(!regular_char_ct(a).unwrap(), || format!("{a} reported regular"))?;
    }
    ensure(l_char(&alpha, &beta).unwrap(), || "pair not L-related by l_char".into())?;
    let s = family(FamilyTag::CT, 6);
    let l = GreenOracle::new(&s).partition(RelationKind::L).unwrap();
    ensure(
        l.related(s.index_of(&alpha).unwrap(), s.index_of(&beta).unwrap()),
        || "pair not L-related by the oracle".into(),
    )?;
    Ok("both maps lack convex transversals, still L-related".into())
}

fn starred() -> Outcome {
    let mut pairs = 0;
    for f in [FamilyTag::CT, FamilyTag::OCT] {
        for n in 2..=4 {
            let s = family(f, n);
            let o = GreenOracle::new(&s);
            for kind in RelationKind::STARRED {
                let p = o.partition(kind).unwrap();
                let bad = disagreements(&s, &p, |a, b| starred_char(a, b, kind).unwrap());
                ensure(bad.is_empty(), || format!("{kind} on {f}_{n}: first {:?}", bad[0]))?;
                pairs += s.len() * s.len();
            }
        }
    }
    Ok(format!("{pairs} pair checks over L*, R*, H*, D*"))
}

fn abundance() -> Outcome {
    for f in FamilyTag::CONTRACTION {
        for n in 2..=5 {
            ensure(is_left_abundant(&family(f, n)), || format!("{f}_{n} not left abundant"))?;
        }
    }
    for n in 1..=3 {
        ensure(is_right_abundant(&family(FamilyTag::CT, n)), || format!("CT_{n} not right abundant"))?;
    }
    let s = family(FamilyTag::CT, 4);
    let witness = right_abundance_witness(&s).ok_or("CT_4 is right abundant")?;
    let r = GreenOracle::new(&s).partition(RelationKind::RStar).unwrap();
    let class = r.class_containing(s.index_of(&m("[1,2,2,3]")).unwrap());
    let mut maps = s.maps_of(class);
    maps.sort();
    let expected: Vec<ChainMap> = ["[1,2,2,3]", "[2,3,3,4]", "[3,2,2,1]", "[4,3,3,2]"].map(m).to_vec();
    ensure(maps == expected, || format!("R*-class of [1,2,2,3] is {maps:?}"))?;
    ensure(maps.iter().all(|x| !x.is_idempotent()), || "witness class holds an idempotent".into())?;
    ensure(!witness.is_empty(), || "empty witness".into())?;
    Ok("left abundant for n <= 5, right abundant for n <= 3, CT_4 witness class reproduced".into())
}

fn idempotent_structure() -> Outcome {
    for n in 1..=6 {
        let s = family(FamilyTag::ORCT, n);
        let e = s.idempotents();
        for &x in &e {
            for &y in &e {
                let p = s.mul(x, y);
                ensure(s.is_idempotent(p), || {
                    format!("{} * {} = {} in ORCT_{n}", s.element(x), s.element(y), s.element(p))
                })?;
            }
        }
        let reg = s.regular_elements();
        let view = SubsetView::new(&s, &reg).map_err(|e| format!("Reg(ORCT_{n}): {e}"))?;
        ensure(view.is_orthodox(), || format!("Reg(ORCT_{n}) not orthodox"))?;
        ensure(is_l_unipotent(&s, &reg).unwrap(), || format!("Reg(ORCT_{n}) not L-unipotent"))?;
        if n >= 2 {
            ensure(!is_r_unipotent(&s, &reg).unwrap(), || format!("Reg(ORCT_{n}) R-unipotent"))?;
            let w = unipotence_witness(&s, &reg, Side::Right).unwrap().unwrap();
            let consts: Vec<ChainMap> = s.maps_of(&w).into_iter().filter(|x| x.height() == 1).collect();
            ensure(consts.len() == n, || format!("R-class witness in Reg(ORCT_{n}) is not the constants"))?;
        }
    }
    for n in 1..=5 {
        let s = family(FamilyTag::CT, n);
        let e = s.idempotents();
        for &x in &e {
            for &y in &e {
                let p = s.mul(x, y);
                ensure(s.is_regular_element(p), || {
                    format!("{} * {} = {} not regular in CT_{n}", s.element(x), s.element(y), s.element(p))
                })?;
            }
        }
        let g = s.generated_subsemigroup(&e).unwrap();
        ensure(g.is_regular(), || format!("<E(CT_{n})> not regular"))?;
    }
    let (a, b) = (m("[1,2,2,2]"), m("[3,2,3,2]"));
    ensure(a.is_idempotent() && b.is_idempotent(), || "factors are not idempotent".into())?;
    let ab = a.then(&b).unwrap();
    ensure(ab == m("[3,2,2,2]"), || format!("product is {ab}"))?;
    ensure(!ab.is_idempotent(), || "product is idempotent".into())?;
    Ok("E(ORCT_n) closed (n <= 6), ef regular and <E(CT_n)> regular (n <= 5), [1,2,2,2][3,2,3,2] = [3,2,2,2]".into())
}

fn rees() -> Outcome {
    let mut count = 0;
    for f in [FamilyTag::ORCT, FamilyTag::OCT] {
        for n in 2..=6 {
            let base = regular_base(f, n).unwrap();
            for p in 2..=n {
                let q = rees_quotient(&base, p).unwrap();
                let r = verify_inverse(&q).unwrap();
                ensure(r.inverse && r.consistent, || format!("Q_{p}({n}) over {f}: {r:?}"))?;
                ensure(
                    r.regular && r.idempotents_commute && r.unique_inverses,
                    || format!("Q_{p}({n}) over {f}: criteria {r:?}"),
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} quotients inverse, criteria consistent"))
}

fn structure() -> Outcome {
    for n in 1..=6 {
        for a in family(FamilyTag::CT, n).elements() {
            let im = a.image();
            ensure(im[im.len() - 1] - im[0] + 1 == im.len(), || format!("image of {a} not convex"))?;
        }
    }
    let mut partitions = 0;
    for f in FamilyTag::ALL {
        for n in 1..=5 {
            let s = family(f, n);
            let o = GreenOracle::new(&s);
            let p = |k| o.partition(k).unwrap();
            let (l, r, h, d, j) = (
                p(RelationKind::L),
                p(RelationKind::R),
                p(RelationKind::H),
                p(RelationKind::D),
                p(RelationKind::J),
            );
            ensure(d.same_classes(&j), || format!("D != J on {f}_{n}"))?;
            for (fine, coarse) in [(&h, &l), (&h, &r), (&l, &d), (&r, &d), (&d, &j)] {
                ensure(fine.refines(coarse), || format!("{} not inside {} on {f}_{n}", fine.kind, coarse.kind))?;
            }
            partitions += 5;
        }
    }
    Ok(format!("images convex for n <= 6, D = J and chains on {partitions} partitions"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("regularity equivalence, CT", regularity_ct),
        ("regularity equivalence, ORCT/OCT", regularity_orct),
        ("L and R agreement", green_lr),
        ("no-convex-transversal regression", regression_no_convex_transversal),
        ("starred relations", starred),
        ("abundance", abundance),
        ("idempotent structure", idempotent_structure),
        ("Rees quotients", rees),
        ("structural sanity", structure),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
