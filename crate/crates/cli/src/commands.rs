use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hdw_core::oracle::{self, ClassEntry, OracleCohomology, OraclePartition};
use hdw_core::suite::{corpus_suite, manifold_suite, CheckKind, SuiteOptions};
use hdw_core::tqft::{self, Bordism, PartitionReport};
use hdw_core::{
    cohomology as cohomology_group, measure, BigUint, CochainComplex, Error, Pair, Triangulation,
};
use serde::Serialize;
use serde_json::json;

use crate::{Outcome, TheoryArgs};

type Result<T> = std::result::Result<T, Error>;

fn load(path: &Path) -> Result<Arc<Triangulation>> {
    Ok(Arc::new(Triangulation::load(path)?))
}

fn done(report: impl Serialize, ok: bool) -> Outcome {
    Outcome {
        report: serde_json::to_value(report).expect("reports serialize"),
        table: Vec::new(),
        ok,
    }
}

pub fn cohomology(file: &Path, gamma: &str, degrees: &[usize], relative: Option<&str>, classes: bool, limit: u64) -> Result<Outcome> {
    let m = load(file)?;
    let group = hdw_core::FiniteAbelianGroup::parse(gamma)?;
    let complex = match relative {
        None => CochainComplex::absolute(Arc::clone(&m)),
        Some("boundary") => CochainComplex::rel_boundary(Arc::clone(&m)),
        Some(name) => CochainComplex::new(Pair::new(Arc::clone(&m), m.subcomplex(name)?.clone())),
    };
    let mut groups = Vec::new();
    for &k in degrees {
        let h = cohomology_group(&complex, k, &group);
        let mut v = serde_json::to_value(h.report()).expect("reports serialize");
        if classes {
            v["classes"] = json!(h.coordinate_tuples(limit)?);
        }
        groups.push(v);
    }
    Ok(done(
        json!({ "manifold": m.name(), "relative": relative, "groups": groups }),
        true,
    ))
}

pub fn measure(file: &Path, args: &TheoryArgs, sub: Option<&str>) -> Result<Outcome> {
    let m = load(file)?;
    let group = args.group()?;
    match sub {
        None => Ok(done(measure::mu(&m, args.p, &group), true)),
        Some(name) => {
            let r = measure::verify_lemma1(&m, m.subcomplex(name)?, args.p, &group)?;
            let ok = r.holds;
            Ok(done(r, ok))
        }
    }
}

pub fn partition(file: &Path, args: &TheoryArgs) -> Result<Outcome> {
    let m = load(file)?;
    let z = tqft::partition_closed(&m, &args.theory()?)?;
    Ok(done(PartitionReport::new(m.name(), z), true))
}

pub fn state_space(file: &Path, args: &TheoryArgs) -> Result<Outcome> {
    let n = load(file)?;
    Ok(done(tqft::state_space(&n, &args.theory()?)?.report(), true))
}

pub fn bordism(file: &Path, incoming: &str, outgoing: &str, args: &TheoryArgs) -> Result<Outcome> {
    let b = load(file)?;
    let theory = args.theory()?;
    // the incoming end carries the opposite of its induced orientation
    let (n_in, inc) = b.boundary_piece(b.subcomplex(incoming)?, incoming)?;
    let n_in = Arc::new(n_in.reversed());
    let (n_out, out) = b.boundary_piece(b.subcomplex(outgoing)?, outgoing)?;
    let n_out = Arc::new(n_out);
    let bordism = Bordism::new(
        Arc::clone(&b),
        tqft::state_space(&n_in, &theory)?,
        inc,
        tqft::state_space(&n_out, &theory)?,
        out,
        None,
    )?;
    Ok(done(bordism.matrix(&theory)?.report(), true))
}

pub fn glue(file: &Path, args: &TheoryArgs, tol: f64) -> Result<Outcome> {
    let mn = load(file)?;
    let r = tqft::verify_gluing(&mn, &args.theory()?, tol)?;
    let ok = r.holds && r.lemma_holds && r.excision_holds;
    Ok(done(r, ok))
}

pub fn verify(files: &[PathBuf], args: &TheoryArgs, tol: f64, checks: Option<&str>, trials: usize, seed: u64) -> Result<Outcome> {
    let kinds: BTreeSet<CheckKind> = match checks {
        None => CheckKind::ALL.into_iter().collect(),
        Some(list) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?,
    };
    let opts = SuiteOptions {
        kinds,
        tol,
        trials,
        seed,
        limit: args.limit,
    };
    let report = if files.is_empty() {
        corpus_suite(&opts)?
    } else {
        let items = files.iter().map(|f| load(f)).collect::<Result<Vec<_>>>()?;
        manifold_suite(&items, &args.theory()?, &opts)?
    };
    if report.is_empty() {
        eprintln!("warning: no checks selected; nothing to verify");
    }
    let mut table: Vec<String> = report.checks.iter().map(|c| c.line()).collect();
    table.push(format!("{} passed, {} failed", report.passed, report.failed));
    let ok = report.all_passed;
    let mut outcome = done(report, ok);
    outcome.table = table;
    Ok(outcome)
}

#[derive(Serialize)]
struct OracleDegree {
    degree: usize,
    #[serde(serialize_with = "hdw_core::arith::serde_exact::order")]
    order: BigUint,
    factors: Vec<OracleCohomology>,
}

#[derive(Serialize)]
struct OracleReport {
    manifold: String,
    gamma: Vec<u64>,
    cohomology: Vec<OracleDegree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<OraclePartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<ClassEntry>>,
}

pub fn oracle(file: &Path, args: &TheoryArgs, degrees: Option<Vec<usize>>, classes: bool) -> Result<Outcome> {
    let m = load(file)?;
    let group = args.group()?;
    let limit = args.limit;
    let sub = m.boundary_subcomplex();
    let degrees = degrees.unwrap_or_else(|| (0..=args.p.min(m.dim())).collect());
    let mut cohomology = Vec::new();
    for k in degrees {
        let factors = group
            .invariant_factors()
            .iter()
            .map(|&n| oracle::cohomology_cyclic(&m, &sub, k, n, limit))
            .collect::<Result<Vec<_>>>()?;
        cohomology.push(OracleDegree {
            degree: k,
            order: factors.iter().map(|f| f.order.clone()).product(),
            factors,
        });
    }
    let lambda = match args.action() {
        hdw_core::ActionSpec::Trivial => 0,
        hdw_core::ActionSpec::CupSquare { lambda } => lambda,
    };
    let cyclic = group.as_cyclic();
    let partition = match cyclic {
        Some(n) if m.is_closed() => {
            let lambda = lambda.rem_euclid(n as i64) as u64;
            Some(oracle::partition(&m, args.p, n, lambda, limit)?)
        }
        _ => None,
    };
    let classes = match (classes, cyclic) {
        (false, _) => None,
        (true, Some(n)) if m.is_closed() => Some(oracle::class_table(&m, args.p, n, limit)?),
        (true, _) => {
            return Err(Error::InvalidGroup(
                "class tables need a closed manifold and cyclic coefficients".into(),
            ))
        }
    };
    let report = OracleReport {
        manifold: m.name().to_string(),
        gamma: group.invariant_factors().to_vec(),
        cohomology,
        partition,
        classes,
    };
    Ok(done(&report, true))
}
