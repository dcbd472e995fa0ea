//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every criterion demands 100% agreement; nothing is sampled away.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use patterna_core::random::{
    random_3cnf, random_amalgamation_problem, random_hypergraph, random_pattern, random_reasonable_consistency,
    random_reasonable_positive, rng,
};
use patterna_core::verify::{all_fully_complete, all_graphs, all_reasonable_consistency, cooper_claim};
use patterna_core::{
    atomless_pm_witness, blowup, blowup_pullback, brute_force_exhibitable, brute_force_sat, build_witness_structure,
    check_axioms, check_one_n, classify, cm_from_doubled_witness, condition_cnf, decide_exhibitable,
    disjoint_one1_family, double_positive, encodes_hypergraph, exhibits, export_dimacs, find_triangle,
    free_amalgam, fully_complete_extension, gen_divline, import_dimacs, index_set, ip_family, membership_structure,
    pattern_from_cnf, pattern_from_hypergraph, powerset_sm_witness, realize, realize_check, triangle_free_double,
    Condition, DivlineKind, DivlineParams, Hypergraph, Limits, OneFlavor, Pattern, SetFamily, StructureFlavor,
    StructureSource,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn cond(pos: &[usize], neg: &[usize]) -> Condition {
    Condition::new(index_set(pos.iter().copied()), index_set(neg.iter().copied())).unwrap()
}

/// One index that must be both inside and outside every point.
fn lone_index_both_ways() -> Pattern {
    Pattern::new(1, [], [cond(&[0], &[]), cond(&[], &[0])]).unwrap()
}

/// Two consistent, mutually exclusive sets whose union is the third set.
fn union_configuration() -> Pattern {
    Pattern::new(
        3,
        [cond(&[0], &[]), cond(&[1], &[])],
        [cond(&[0, 1], &[]), cond(&[0], &[2]), cond(&[1], &[2]), cond(&[2], &[0, 1])],
    )
    .unwrap()
}

fn agree(p: &Pattern, limits: &Limits) -> Result<(), String> {
    let fast = e(decide_exhibitable(p))?;
    let slow = e(brute_force_exhibitable(p, limits))?;
    ensure(fast.exhibitable == slow.exhibitable, || format!("disagreement on {}", p.to_json()))
}

fn witness_of(p: &Pattern) -> Result<SetFamily, String> {
    e(decide_exhibitable(p))?
        .witness
        .ok_or_else(|| format!("not exhibitable: {}", p.to_json()))
}

fn criterion_1() -> Outcome {
    let limits = Limits::default();
    let n = 3;
    let all: Vec<Condition> = (0..1usize << (2 * n))
        .filter_map(|code| {
            let pos = index_set((0..n).filter(|i| code >> i & 1 == 1));
            let neg = index_set((0..n).filter(|i| code >> (n + i) & 1 == 1));
            Condition::new(pos, neg).ok()
        })
        .collect();
    let mut exhaustive = 0;
    let mut check = |c: Vec<Condition>, i: Vec<Condition>| -> Result<(), String> {
        exhaustive += 1;
        agree(&e(Pattern::new(n, c, i))?, &limits)
    };
    check(vec![], vec![])?;
    for a in &all {
        check(vec![a.clone()], vec![])?;
        check(vec![], vec![a.clone()])?;
        for b in &all {
            check(vec![a.clone()], vec![b.clone()])?;
            if a < b {
                check(vec![a.clone(), b.clone()], vec![])?;
                check(vec![], vec![a.clone(), b.clone()])?;
            }
        }
    }
    let mut r = rng(1);
    for _ in 0..10_000 {
        agree(&random_pattern(&mut r, 5, 8), &limits)?;
    }
    Ok(format!("{exhaustive} exhaustive + 10000 random patterns agree"))
}

fn criterion_2() -> Outcome {
    ensure(!e(decide_exhibitable(&lone_index_both_ways()))?.exhibitable, || {
        "index required both ways was exhibitable".into()
    })?;
    ensure(e(decide_exhibitable(&union_configuration()))?.exhibitable, || {
        "union configuration was not exhibitable".into()
    })?;
    Ok("both labeled instances decided as stated".into())
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for n in [2, 3] {
        for p in e(all_fully_complete(n))? {
            ensure(classify(&p).fully_complete, || p.to_json())?;
            witness_of(&p)?;
            e(powerset_sm_witness(&p))?;
            total += 1;
        }
    }
    ensure(total == 15 + 255, || format!("enumerated {total} patterns"))?;
    Ok(format!("{total}/270 fully complete patterns exhibited and constructed"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    for _ in 0..1000 {
        let n = r.gen_range(1..=6);
        let p = random_reasonable_positive(&mut r, n);
        witness_of(&p)?;
        e(atomless_pm_witness(&p))?;
    }
    Ok("1000/1000 reasonable positive patterns exhibited and constructed".into())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let (mut sat, mut unsat) = (0, 0);
    for _ in 0..500 {
        let vars = r.gen_range(1..=8);
        let clauses = r.gen_range(1..=6 * vars);
        let f = random_3cnf(&mut r, vars, clauses);
        let expected = brute_force_sat(&f).is_some();
        let got = e(decide_exhibitable(&pattern_from_cnf(&f)))?.exhibitable;
        ensure(got == expected, || export_dimacs(&f))?;
        if expected {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    Ok(format!("500/500 formulas agree ({sat} satisfiable, {unsat} unsatisfiable)"))
}

fn criterion_6() -> Outcome {
    let limits = Limits::default();
    let mut r = rng(6);
    let mut done = 0;
    while done < 500 {
        let p = random_pattern(&mut r, 5, 8);
        let Some(w) = e(decide_exhibitable(&p))?.witness else {
            continue;
        };
        let ext = fully_complete_extension(&w);
        ensure(classify(&ext).fully_complete, || ext.to_json())?;
        let witnesses = [
            witness_of(&ext)?,
            e(brute_force_exhibitable(&ext, &limits))?.witness.ok_or("oracle found no witness")?,
            e(powerset_sm_witness(&ext))?,
        ];
        for w2 in &witnesses {
            ensure(e(exhibits(w2, &p))?, || format!("{} does not exhibit {}", w2.to_json(), p.to_json()))?;
        }
        done += 1;
    }
    Ok("500/500 extensions refine their pattern (3 witnesses each)".into())
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    for _ in 0..200 {
        let n = r.gen_range(1..=5);
        let p = random_reasonable_consistency(&mut r, n);
        let doubled = e(double_positive(&p))?;
        let w = witness_of(&doubled)?;
        let t = e(cm_from_doubled_witness(&w, &p))?;
        ensure(e(exhibits(&t, &p))?, || p.to_json())?;
    }
    Ok("200/200 truncated witnesses exhibit the original".into())
}

fn criterion_8() -> Outcome {
    let limits = Limits::default();
    let fam2 = e(ip_family(2, &limits))?;
    let all = e(all_reasonable_consistency(2))?;
    ensure(all.len() == 256, || format!("{} patterns enumerated", all.len()))?;
    for p in &all {
        ensure(e(exhibits(&fam2, p))?, || p.to_json())?;
    }
    let mut r = rng(8);
    for n in [3, 4] {
        let fam = e(ip_family(n, &limits))?;
        for _ in 0..100 {
            let p = random_reasonable_consistency(&mut r, n);
            ensure(e(exhibits(&fam, &p))?, || p.to_json())?;
        }
    }
    Ok("256/256 exhaustive + 200/200 random consistency patterns exhibited".into())
}

fn dictionary(h: &Hypergraph, limits: &Limits) -> Result<(), String> {
    let p = e(pattern_from_hypergraph(h, limits))?;
    let flags = classify(&p);
    ensure(flags.reasonable && flags.positive && p.is_k_bounded(h.k()), || p.to_json())?;
    let w = witness_of(&p)?;
    ensure(e(realize_check(&w, h))?, || w.to_json())?;
    let s = e(build_witness_structure(StructureSource::Hypergraph(h), limits))?;
    ensure(check_axioms(&s).ok, || "structure violates axioms".into())?;
    ensure(e(realize_check(&s.trace_family(), h))?, || "structure traces do not realize".into())
}

fn criterion_9() -> Outcome {
    let limits = Limits::default();
    let graphs = all_graphs(5);
    ensure(graphs.len() == 1024, || format!("{} graphs", graphs.len()))?;
    for g in &graphs {
        dictionary(g, &limits)?;
    }
    let mut r = rng(9);
    for _ in 0..200 {
        let v = r.gen_range(0..=6);
        let density = r.gen_range(0.1..0.9);
        dictionary(&random_hypergraph(&mut r, 3, v, density), &limits)?;
    }
    Ok("1024/1024 graphs + 200/200 3-hypergraphs realized".into())
}

fn criterion_10() -> Outcome {
    let limits = Limits::default();
    let mut r = rng(10);
    for _ in 0..200 {
        let k = r.gen_range(2..=3);
        let v = r.gen_range(0..=5);
        let density = r.gen_range(0.1..0.9);
        let h = random_hypergraph(&mut r, k, v, density);
        let b = e(blowup(&h, &limits))?;
        let fam = e(realize(&b.hypergraph, &limits))?;
        let pulled = e(blowup_pullback(&fam, &b))?;
        ensure(e(realize_check(&pulled, &h))?, || serde_json::to_string(&h).unwrap())?;
    }
    Ok("200/200 blowup witnesses pull back to realizations".into())
}

fn criterion_11() -> Outcome {
    let limits = Limits::default();
    let mut total = 0;
    for v in 0..=5 {
        for g in all_graphs(v) {
            let out = e(triangle_free_double(&g, &limits))?;
            ensure(find_triangle(&out.graph).is_none(), || serde_json::to_string(&g).unwrap())?;
            ensure(e(realize_check(&out.family, &g))?, || serde_json::to_string(&g).unwrap())?;
            total += 1;
        }
    }
    Ok(format!("{total}/{total} graphs doubled triangle-free and realized"))
}

fn criterion_12() -> Outcome {
    let mut r = rng(12);
    for i in 0..200 {
        let flavor = if i % 2 == 0 {
            StructureFlavor::Positive
        } else {
            StructureFlavor::Uniform(2 + i % 3)
        };
        let prob = random_amalgamation_problem(&mut r, flavor);
        let m = e(free_amalgam(&prob.a, &prob.b0, &prob.b1, &prob.e0, &prob.e1))?;
        ensure(check_axioms(&m.structure).ok, || "amalgam violates axioms".into())?;
        ensure(prob.e0.compose(&m.f0) == prob.e1.compose(&m.f1), || "embeddings do not commute".into())?;
    }
    Ok("200/200 amalgams valid with commuting embeddings".into())
}

fn criterion_13() -> Outcome {
    for n in 1..=3 {
        e(cooper_claim(n))?;
    }
    for n in 1..=6 {
        for flavor in [OneFlavor::Atoms, OneFlavor::Skolem] {
            let f = e(disjoint_one1_family(n, flavor))?;
            ensure(e(check_one_n(&f.family, 1))?, || format!("{flavor:?} n={n}"))?;
        }
    }
    for n in 1..=4 {
        let ms = e(membership_structure(n, &Limits::default()))?;
        e(ms.check())?;
        ensure(e(check_one_n(&e(ms.singleton_columns())?, 1))?, || format!("membership n={n}"))?;
    }
    Ok("claim for n=1..3, 1^(1) families n≤6, membership n≤4".into())
}

fn criterion_14() -> Outcome {
    let limits = Limits::default();
    let mut r = rng(14);
    for _ in 0..100 {
        let k = r.gen_range(1..=2);
        let v = r.gen_range(0..=6);
        let density = r.gen_range(0.1..0.9);
        let h = random_hypergraph(&mut r, k + 1, v, density);
        let w = witness_of(&e(pattern_from_hypergraph(&h, &limits))?)?;
        ensure(e(encodes_hypergraph(&w, &h))?, || serde_json::to_string(&h).unwrap())?;
    }
    Ok("100/100 witnesses encode their hypergraph".into())
}

fn run_cli(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_patterna"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn criterion_15(dir: &Path) -> Outcome {
    let mut corpus: Vec<(String, Pattern)> = vec![
        ("lone.json".into(), lone_index_both_ways()),
        ("union.json".into(), union_configuration()),
    ];
    let families = [
        (DivlineKind::Op, DivlineParams::n(3)),
        (DivlineKind::Sop, DivlineParams::n(4)),
        (DivlineKind::Ktp, DivlineParams::tree(2, 2, Some(2))),
        (DivlineKind::Tp1, DivlineParams::tree(2, 2, None)),
        (DivlineKind::Cooper, DivlineParams::n(2)),
        (DivlineKind::Pmchar, DivlineParams::n(2)),
    ];
    for (kind, params) in families {
        corpus.push((format!("{kind}.json"), e(gen_divline(kind, &params))?));
    }
    let mut r = rng(15);
    for i in 0..5 {
        corpus.push((format!("random{i}.json"), random_pattern(&mut r, 5, 8)));
    }

    let mut invocations: Vec<Vec<String>> = Vec::new();
    for (name, p) in &corpus {
        let path = dir.join(name);
        e(fs::write(&path, p.to_json()))?;
        let path = path.to_string_lossy().into_owned();
        invocations.push(vec!["decide".into(), path.clone(), "--witness".into()]);
        invocations.push(vec!["decide".into(), path, "--oracle".into()]);

        for c in p.consistency() {
            let f = condition_cnf(p, c);
            let back = e(import_dimacs(&export_dimacs(&f)))?;
            ensure(back == f, || format!("DIMACS round trip changed {name}"))?;
        }
    }
    for c in ["powerset-sm", "ip-family", "cooper-claim", "free-amalgam", "blowup-roundtrip"] {
        invocations.push(vec!["verify".into(), c.into(), "--count".into(), "10".into()]);
    }

    let mut seen_codes = BTreeSet::new();
    for args in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_cli(&args)?;
        ensure(first.1 == 0 || first.1 == 1, || format!("{args:?} exited {}", first.1))?;
        seen_codes.insert(first.1);
        for _ in 0..2 {
            ensure(run_cli(&args)? == first, || format!("{args:?} is not deterministic"))?;
        }
    }
    ensure(seen_codes.len() == 2, || "corpus did not exercise both answers".into())?;
    Ok(format!("{} invocations byte-identical over 3 runs; DIMACS round trips", invocations.len()))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<Criterion> = vec![
        ("oracle agreement", Box::new(criterion_1)),
        ("labeled instances", Box::new(criterion_2)),
        ("fully complete exhibitability", Box::new(criterion_3)),
        ("positive exhibitability", Box::new(criterion_4)),
        ("pattern satisfiability equals CNF satisfiability", Box::new(criterion_5)),
        ("extension refinement", Box::new(criterion_6)),
        ("positive doubling", Box::new(criterion_7)),
        ("independence family", Box::new(criterion_8)),
        ("hypergraph dictionary", Box::new(criterion_9)),
        ("blowup round trip", Box::new(criterion_10)),
        ("triangle-free doubling", Box::new(criterion_11)),
        ("free amalgamation", Box::new(criterion_12)),
        ("union-closed disjoint families", Box::new(criterion_13)),
        ("hypergraph encoding", Box::new(criterion_14)),
        ("determinism", Box::new(move || criterion_15(dir.path()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
