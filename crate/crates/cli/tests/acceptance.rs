//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any failed.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hdw_core::action::{check_gauge_invariance, evaluate_action, FundamentalClass};
use hdw_core::arith::rational;
use hdw_core::corpus;
use hdw_core::measure::verify_lemma1;
use hdw_core::oracle::{self, ClassEntry};
use hdw_core::simplicial::Subcomplex;
use hdw_core::suite::{lemma_pairs, suite_groups};
use hdw_core::tqft::{dagger_check, monoidal_check, partition_closed, untwisted_partition_from_orders, verify_gluing};
use hdw_core::{
    cohomology, ActionSpec, BigUint, CochainComplex, DwTheory, FiniteAbelianGroup, GammaCochain, PhaseSum, Triangulation,
};

/// Tolerance for twisted gluing comparisons.
const GLUING_TOL: f64 = 1e-9;
/// Oracle search-node cap per enumeration.
const ORACLE_NODES: u64 = 2_000_000;
/// Cases with at most this many simplices in degrees `i-1..=i+1` must be covered.
const ORACLE_SIMPLICES: usize = 30;
/// Cocycle sets up to this size also get a class-partition check.
const PARTITION_CHECK: u64 = 200_000;
const GAUGE_TRIALS: usize = 100;

type Check = Result<String, String>;

fn arc(t: Triangulation) -> Arc<Triangulation> {
    Arc::new(t)
}

fn z(n: u64) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(n).unwrap()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn relevant(t: &Triangulation, i: usize) -> usize {
    (i.saturating_sub(1)..=i + 1).filter(|&k| k <= t.dim()).map(|k| t.count(k)).sum()
}

/// Every cocycle lands in a class whose SNF coordinates are hit exactly
/// `|B|` times.
fn class_partition(t: &Triangulation, sub: &Subcomplex, complex: &Arc<CochainComplex>, i: usize, n: u64) -> Result<(), String> {
    let h = cohomology(complex, i, &z(n));
    let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut bad = None;
    oracle::for_each_cocycle(t, sub, i, n, ORACLE_NODES, |values| {
        let c = GammaCochain::cyclic(i, n, values.to_vec());
        match h.coordinates(&c) {
            Ok(coords) => *counts.entry(coords).or_default() += 1,
            Err(e) => bad = Some(e.to_string()),
        }
    })
    .map_err(err)?;
    if let Some(e) = bad {
        return Err(e);
    }
    let b = oracle::cohomology_cyclic(t, sub, i, n, ORACLE_NODES).map_err(err)?.coboundaries;
    ensure(BigUint::from(counts.len()) == h.order(), || format!("{} classes vs order {}", counts.len(), h.order()))?;
    ensure(counts.values().all(|&c| BigUint::from(c) == b), || "uneven class sizes".into())
}

fn criterion_1() -> Check {
    let groups: [&[u64]; 3] = [&[2], &[3], &[2, 2]];
    let mut cases = 0;
    let mut partitions = 0;
    for (name, t) in corpus::all() {
        if !t.is_oriented() && name != "rp2" {
            continue;
        }
        let t = arc(t);
        let boundary = t.boundary_subcomplex();
        let mut pairs = vec![(Subcomplex::empty(&t), CochainComplex::absolute(Arc::clone(&t)))];
        if !t.is_closed() {
            pairs.push((boundary.clone(), CochainComplex::rel_boundary(Arc::clone(&t))));
        }
        for (sub, complex) in &pairs {
            for i in 0..=t.dim() {
                for moduli in groups {
                    let oracle_order = match oracle::cohomology_order(&t, sub, i, moduli, ORACLE_NODES) {
                        Ok(o) => o,
                        Err(e) if relevant(&t, i) > ORACLE_SIMPLICES => {
                            let _ = e;
                            continue;
                        }
                        Err(e) => return Err(format!("{name} H^{i}: {e}")),
                    };
                    let g = FiniteAbelianGroup::from_cyclic(moduli).unwrap();
                    let h = cohomology(complex, i, &g);
                    ensure(h.order() == oracle_order, || {
                        format!("{name} H^{i} {g}: SNF {} vs oracle {oracle_order}", h.order())
                    })?;
                    let classes = h.enumerate_classes(1_000_000).map_err(err)?;
                    ensure(BigUint::from(classes.len()) == oracle_order, || format!("{name} H^{i}: class count"))?;
                    cases += 1;
                    if moduli.len() == 1 {
                        let zc = oracle::cohomology_cyclic(&t, sub, i, moduli[0], ORACLE_NODES).map_err(err)?.cocycles;
                        if zc <= BigUint::from(PARTITION_CHECK) {
                            class_partition(&t, sub, complex, i, moduli[0]).map_err(|e| format!("{name} H^{i}: {e}"))?;
                            partitions += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{cases} (complex, degree, Γ) cases, {partitions} class partitions"))
}

fn criterion_2() -> Check {
    let mut n_cases = 0;
    let pairs = lemma_pairs();
    ensure(pairs.len() >= 6, || "too few pairs".into())?;
    for (m, sub) in pairs {
        let m = arc(m);
        let n = match sub {
            Some(s) => m.subcomplex(s).map_err(err)?.clone(),
            None => Subcomplex::empty(&m),
        };
        for p in 1..=2 {
            for g in suite_groups() {
                let r = verify_lemma1(&m, &n, p, &g).map_err(err)?;
                ensure(r.holds, || format!("{} {:?} p={p} {g}: {:?}", m.name(), sub, r))?;
                n_cases += 1;
            }
        }
    }
    Ok(format!("{n_cases} (M, N, p, Γ) cases exact"))
}

fn gluing_theories(mn: &Triangulation) -> Vec<DwTheory> {
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push(DwTheory::untwisted(1, n));
        if mn.dim() == 2 {
            for lambda in 1..n as i64 {
                out.push(DwTheory::untwisted(1, n).with_action(ActionSpec::cup_square(lambda)));
            }
        }
    }
    if mn.dim() >= 2 {
        out.push(DwTheory::untwisted(2, 2));
    }
    out
}

fn criterion_3() -> Check {
    let mut n_cases = 0;
    for mn in [corpus::cylinder(), corpus::two_disks(), corpus::slab()] {
        let theories = gluing_theories(&mn);
        let mn = arc(mn);
        for t in theories {
            let r = verify_gluing(&mn, &t, GLUING_TOL).map_err(err)?;
            let ok = if t.action.is_trivial() { r.exact } else { r.holds };
            ensure(ok && r.lemma_holds, || format!("{} {:?}: {:?} vs {:?}", mn.name(), t.action, r.lhs, r.rhs))?;
            n_cases += 1;
        }
    }
    Ok(format!("{n_cases} gluings (T² ← cylinder, S² ← two disks, T³ ← T²×I)"))
}

fn criterion_4() -> Check {
    let mut n_cases = 0;
    for mn in [corpus::cylinder(), corpus::two_disks(), corpus::slab(), corpus::interval_glued(3)] {
        let mn = arc(mn);
        for p in 1..=2 {
            for g in suite_groups() {
                let t = DwTheory::new(p, g.clone(), ActionSpec::Trivial);
                let r = verify_gluing(&mn, &t, GLUING_TOL).map_err(err)?;
                ensure(r.excision_holds, || format!("{} p={p} {g}: {} vs {}", mn.name(), r.mu_rel, r.mu_mn))?;
                n_cases += 1;
            }
        }
    }
    Ok(format!("{n_cases} fixtures × theories exact"))
}

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn criterion_5() -> Check {
    let real = |a: i64, b: i64| PhaseSum::from_rational(rational(a, b));
    let mut n_cases = 0;
    let mut both = |m: Triangulation, t: DwTheory, expect: PhaseSum| -> Result<(), String> {
        let m = arc(m);
        let direct = partition_closed(&m, &t).map_err(err)?;
        let orders = PhaseSum::from_rational(untwisted_partition_from_orders(&m, &t));
        ensure(direct == expect && orders == expect, || {
            format!("{} {:?}: direct {:?}, orders {:?}, expected {:?}", m.name(), t, direct, orders, expect)
        })?;
        n_cases += 1;
        Ok(())
    };
    for n in 2..=4i64 {
        let t = DwTheory::untwisted(1, n as u64);
        both(corpus::circle(3), t.clone(), real(1, 1))?;
        both(corpus::sphere2(), t.clone(), real(1, n))?;
        both(corpus::torus2(), t.clone(), real(n, 1))?;
        both(corpus::torus3(), t, real(n * n, 1))?;
    }
    both(corpus::torus2(), DwTheory::untwisted(2, 2), real(1, 1))?;

    // frozen oracle output for the twisted torus
    let text = std::fs::read_to_string(corpus_path("golden/torus2_cup_square.json")).map_err(err)?;
    let golden: serde_json::Value = serde_json::from_str(&text).map_err(err)?;
    let value: PhaseSum = serde_json::from_value(golden["partition"]["value"].clone()).map_err(err)?;
    let table: Vec<ClassEntry> = serde_json::from_value(golden["classes"].clone()).map_err(err)?;
    let torus = arc(corpus::torus2());
    let spec = ActionSpec::cup_square(1);
    let t = DwTheory::untwisted(1, 2).with_action(spec);
    ensure(partition_closed(&torus, &t).map_err(err)? == value, || "twisted torus value differs from golden".into())?;
    let h = cohomology(&CochainComplex::absolute(Arc::clone(&torus)), 1, &z(2));
    let mut matched = 0;
    for rep in h.enumerate_classes(1_000).map_err(err)? {
        let entry = table
            .iter()
            .find(|e| {
                let g = GammaCochain::cyclic(1, 2, e.representative.clone());
                h.coordinates(&g).ok() == h.coordinates(&rep).ok()
            })
            .ok_or("class missing from golden table")?;
        let phase = evaluate_action(&torus, &rep, &spec).map_err(err)?;
        ensure(phase == PhaseSum::root_of_unity(entry.s, 2), || "class-wise action differs from golden".into())?;
        matched += 1;
    }
    ensure(matched == table.len(), || "golden table size".into())?;
    Ok(format!("{n_cases} closed values on both paths, {matched} golden classes"))
}

fn criterion_6() -> Check {
    let mut n_cases = 0;
    let cases: Vec<(Triangulation, usize, Vec<u64>)> = vec![
        (corpus::sphere2(), 1, vec![2, 3, 4]),
        (corpus::torus2(), 1, vec![2, 3, 4]),
        (corpus::torus7(), 1, vec![2, 3, 4]),
        (corpus::s2xs2(), 2, vec![2, 3]),
    ];
    for (m, p, ns) in cases {
        let m = arc(m);
        let fc = FundamentalClass::of(&m).map_err(err)?;
        for n in ns {
            for lambda in 1..n as i64 {
                let t = DwTheory::untwisted(p, n).with_action(ActionSpec::cup_square(lambda));
                let r = check_gauge_invariance(&m, &fc, &t, GAUGE_TRIALS, n * 31 + lambda as u64).map_err(err)?;
                ensure(r.holds, || format!("{} n={n} λ={lambda}: {} failures", m.name(), r.failures))?;
                n_cases += 1;
            }
        }
    }
    let flipped = arc(corpus::torus2_flipped());
    let fc = FundamentalClass::of(&flipped).map_err(err)?;
    let t = DwTheory::untwisted(1, 3).with_action(ActionSpec::cup_square(1));
    let r = check_gauge_invariance(&flipped, &fc, &t, GAUGE_TRIALS, 7).map_err(err)?;
    ensure(!r.holds, || "negative control passed".into())?;
    Ok(format!("{n_cases} (M, n, λ) invariant; flipped sign caught with {} failures", r.failures))
}

fn criterion_7() -> Check {
    let closed = [corpus::circle(3), corpus::sphere2(), corpus::torus2(), corpus::torus7(), corpus::torus3(), corpus::s2xs2()];
    let theories = |m: &Triangulation| {
        let mut out = vec![DwTheory::untwisted(1, 2), DwTheory::untwisted(1, 3)];
        if m.dim() == 2 {
            for n in 2..=4 {
                out.push(DwTheory::untwisted(1, n).with_action(ActionSpec::cup_square(1)));
            }
        }
        if m.dim() == 4 {
            out.push(DwTheory::untwisted(2, 3).with_action(ActionSpec::cup_square(1)));
        }
        out
    };
    let mut n_dagger = 0;
    for m in &closed {
        for t in theories(m) {
            let m = arc(m.clone());
            let r = dagger_check(&m, &t).map_err(err)?;
            ensure(r.holds, || format!("dagger {} {:?}", m.name(), t))?;
            n_dagger += 1;
        }
    }
    let mut n_mono = 0;
    for (i, a) in closed.iter().enumerate() {
        for b in &closed[i..] {
            if a.dim() != b.dim() || a.count(a.dim()) * b.count(b.dim()) > 10_000 {
                continue;
            }
            for t in theories(a) {
                let r = monoidal_check(&arc(a.clone()), &arc(b.clone()), &t).map_err(err)?;
                ensure(r.holds, || format!("monoidal {} {:?}", r.manifold, t))?;
                n_mono += 1;
            }
        }
    }
    Ok(format!("{n_dagger} reversal and {n_mono} disjoint-union checks exact"))
}

fn criterion_8() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hdw"))
            .arg("verify")
            .output()
            .map_err(err)
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "verify reported failures".into())?;
    ensure(a.stdout == b.stdout, || "verify output differs between runs".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 8] = [
        ("cohomology oracle equivalence", criterion_1, Duration::from_secs(10)),
        ("measure lemma", criterion_2, Duration::from_secs(30)),
        ("gluing theorem", criterion_3, Duration::from_secs(120)),
        ("excision", criterion_4, Duration::from_secs(120)),
        ("closed-manifold golden values", criterion_5, Duration::from_secs(60)),
        ("gauge invariance", criterion_6, Duration::from_secs(60)),
        ("dagger and monoidal", criterion_7, Duration::from_secs(30)),
        ("determinism of verify", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {}s budget", budget.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {} {status} {name} ({:.2}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
