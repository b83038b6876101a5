//! The verification suite behind `hdw verify`: measure lemma, gluing,
//! excision, reversal, disjoint union and gauge checks over a fixed matrix
//! of manifolds and theories.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::{check_gauge_invariance, ActionSpec, FundamentalClass};
use crate::cohomology::FiniteAbelianGroup;
use crate::corpus;
use crate::error::{Error, Result};
use crate::measure::verify_lemma1;
use crate::simplicial::{Subcomplex, Triangulation};
use crate::theory::{DwTheory, DEFAULT_LIMIT};
use crate::tqft::{dagger_check, monoidal_check, verify_gluing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Lemma,
    Gluing,
    Excision,
    Dagger,
    Monoidal,
    Gauge,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Lemma,
        CheckKind::Gluing,
        CheckKind::Excision,
        CheckKind::Dagger,
        CheckKind::Monoidal,
        CheckKind::Gauge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Lemma => "lemma",
            CheckKind::Gluing => "gluing",
            CheckKind::Excision => "excision",
            CheckKind::Dagger => "dagger",
            CheckKind::Monoidal => "monoidal",
            CheckKind::Gauge => "gauge",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckOutcome {
    pub check: CheckKind,
    pub subject: String,
    pub theory: String,
    pub passed: bool,
    pub detail: serde_json::Value,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:<9} {:<28} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check.name(),
            self.subject,
            self.theory
        )
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<CheckOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

impl SuiteReport {
    fn from_checks(checks: Vec<CheckOutcome>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        SuiteReport {
            failed: checks.len() - passed,
            all_passed: passed == checks.len(),
            passed,
            checks,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn of_kind(&self, kind: CheckKind) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(move |c| c.check == kind)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub kinds: BTreeSet<CheckKind>,
    pub tol: f64,
    pub trials: usize,
    pub seed: u64,
    pub limit: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            kinds: CheckKind::ALL.into_iter().collect(),
            tol: 1e-9,
            trials: 100,
            seed: 0,
            limit: DEFAULT_LIMIT,
        }
    }
}

fn label(t: &DwTheory) -> String {
    format!("p={} {} {}", t.p, t.gamma, t.action)
}

fn json(v: impl Serialize) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

struct Runner<'a> {
    opts: &'a SuiteOptions,
    out: Vec<CheckOutcome>,
}

impl Runner<'_> {
    fn wants(&self, k: CheckKind) -> bool {
        self.opts.kinds.contains(&k)
    }

    fn push(&mut self, check: CheckKind, subject: &str, theory: String, passed: bool, detail: serde_json::Value) {
        self.out.push(CheckOutcome {
            check,
            subject: subject.to_string(),
            theory,
            passed,
            detail,
        });
    }

    fn lemma(&mut self, m: &Arc<Triangulation>, sub_name: &str, sub: &Subcomplex, p: usize, g: &FiniteAbelianGroup) -> Result<()> {
        if !self.wants(CheckKind::Lemma) {
            return Ok(());
        }
        let r = verify_lemma1(m, sub, p, g)?;
        let subject = format!("{}/{}", m.name(), sub_name);
        self.push(CheckKind::Lemma, &subject, format!("p={p} {g}"), r.holds, json(&r));
        Ok(())
    }

    fn gluing(&mut self, mn: &Arc<Triangulation>, theory: &DwTheory) -> Result<()> {
        if !self.wants(CheckKind::Gluing) && !self.wants(CheckKind::Excision) {
            return Ok(());
        }
        let r = verify_gluing(mn, theory, self.opts.tol)?;
        if self.wants(CheckKind::Gluing) {
            self.push(CheckKind::Gluing, mn.name(), label(theory), r.holds && r.lemma_holds, json(&r));
        }
        if self.wants(CheckKind::Excision) {
            let detail = serde_json::json!({ "mu_M_rel_N": json(&r)["mu_M_rel_N"], "mu_MN": json(&r)["mu_MN"] });
            self.push(CheckKind::Excision, mn.name(), format!("p={} {}", theory.p, theory.gamma), r.excision_holds, detail);
        }
        Ok(())
    }

    fn dagger(&mut self, m: &Arc<Triangulation>, theory: &DwTheory) -> Result<()> {
        if self.wants(CheckKind::Dagger) {
            let r = dagger_check(m, theory)?;
            self.push(CheckKind::Dagger, m.name(), label(theory), r.holds, json(&r));
        }
        Ok(())
    }

    fn monoidal(&mut self, a: &Arc<Triangulation>, b: &Arc<Triangulation>, theory: &DwTheory) -> Result<()> {
        if self.wants(CheckKind::Monoidal) {
            let r = monoidal_check(a, b, theory)?;
            let subject = format!("{}+{}", a.name(), b.name());
            self.push(CheckKind::Monoidal, &subject, label(theory), r.holds, json(&r));
        }
        Ok(())
    }

    fn gauge(&mut self, m: &Arc<Triangulation>, theory: &DwTheory) -> Result<()> {
        if self.wants(CheckKind::Gauge) {
            let fc = FundamentalClass::of(m)?;
            let r = check_gauge_invariance(m, &fc, theory, self.opts.trials, self.opts.seed)?;
            self.push(CheckKind::Gauge, m.name(), label(theory), r.holds, json(&r));
        }
        Ok(())
    }
}

fn z(n: u64) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(n).expect("n ≥ 1")
}

fn applicable(m: &Triangulation, theory: &DwTheory) -> bool {
    match theory.action {
        ActionSpec::Trivial => true,
        ActionSpec::CupSquare { .. } => m.is_oriented() && theory.action.resolve(m.dim(), theory.p, &theory.gamma).is_ok(),
    }
}

/// `(M, N)` pairs for the measure lemma; `None` is the empty subcomplex.
pub fn lemma_pairs() -> Vec<(Triangulation, Option<&'static str>)> {
    vec![
        (corpus::torus2(), Some("slice")),
        (corpus::torus2(), None),
        (corpus::cylinder(), Some("slice")),
        (corpus::torus3(), Some("slice")),
        (corpus::sphere2(), Some("equator")),
        (corpus::circle(3), Some("slice")),
        (corpus::slab(), Some("slice")),
        (corpus::interval(3), Some("slice")),
        (corpus::torus7(), Some("cycle")),
    ]
}

/// Coefficient groups used across the built-in suite.
pub fn suite_groups() -> Vec<FiniteAbelianGroup> {
    vec![z(2), z(3), z(4), FiniteAbelianGroup::from_cyclic(&[2, 2]).expect("valid")]
}

/// The built-in matrix over the shipped corpus.
pub fn corpus_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut run = Runner { opts, out: Vec::new() };
    let theory = |p: usize, g: FiniteAbelianGroup, a: ActionSpec| DwTheory::new(p, g, a).with_limit(opts.limit);

    for (m, sub) in lemma_pairs() {
        let m = Arc::new(m);
        let (name, n) = match sub {
            Some(s) => (s, m.subcomplex(s)?.clone()),
            None => ("empty", Subcomplex::empty(&m)),
        };
        for p in 1..=2 {
            for g in suite_groups() {
                run.lemma(&m, name, &n, p, &g)?;
            }
        }
    }

    let fixtures = [corpus::cylinder(), corpus::two_disks(), corpus::slab(), corpus::interval_glued(3)];
    for mn in fixtures {
        let mn = Arc::new(mn);
        for g in [z(2), z(3)] {
            for action in [ActionSpec::Trivial, ActionSpec::cup_square(1)] {
                let t = theory(1, g.clone(), action);
                if applicable(&mn, &t) {
                    run.gluing(&mn, &t)?;
                }
            }
        }
    }
    run.gluing(&Arc::new(corpus::slab()), &theory(2, z(2), ActionSpec::Trivial))?;

    let closed = [corpus::circle(3), corpus::sphere2(), corpus::torus2(), corpus::torus7(), corpus::torus3()];
    for m in &closed {
        let m = Arc::new(m.clone());
        for n in [2, 3] {
            run.dagger(&m, &theory(1, z(n), ActionSpec::Trivial))?;
        }
        for n in 2..=4 {
            let t = theory(1, z(n), ActionSpec::cup_square(1));
            if applicable(&m, &t) {
                run.dagger(&m, &t)?;
                run.gauge(&m, &t)?;
            }
        }
    }
    let s2xs2 = Arc::new(corpus::s2xs2());
    let t = theory(2, z(3), ActionSpec::cup_square(1));
    run.dagger(&s2xs2, &t)?;
    run.gauge(&s2xs2, &t)?;

    let pairs = [
        (corpus::torus2(), corpus::sphere2()),
        (corpus::torus2(), corpus::torus7()),
        (corpus::circle(3), corpus::circle(3)),
        (corpus::torus3(), corpus::torus3()),
    ];
    for (a, b) in pairs {
        let (a, b) = (Arc::new(a), Arc::new(b));
        for n in [2, 3] {
            run.monoidal(&a, &b, &theory(1, z(n), ActionSpec::Trivial))?;
            let t = theory(1, z(n), ActionSpec::cup_square(1));
            if applicable(&a, &t) && applicable(&b, &t) {
                run.monoidal(&a, &b, &t)?;
            }
        }
    }
    Ok(SuiteReport::from_checks(run.out))
}

/// Every check that applies to the given manifolds under one theory.
pub fn manifold_suite(items: &[Arc<Triangulation>], theory: &DwTheory, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut run = Runner { opts, out: Vec::new() };
    for m in items {
        let boundary = m.boundary_subcomplex();
        for (name, sub) in m.subcomplexes() {
            if !sub.intersects(&boundary) && !sub.is_empty() {
                run.lemma(m, name, sub, theory.p, &theory.gamma)?;
            }
        }
        if m.gluing().is_some() && applicable(m, theory) {
            run.gluing(m, theory)?;
        }
        if m.is_closed() && applicable(m, theory) {
            run.dagger(m, theory)?;
            run.monoidal(m, m, theory)?;
            if !theory.action.is_trivial() {
                run.gauge(m, theory)?;
            }
        }
    }
    Ok(SuiteReport::from_checks(run.out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        assert_eq!("gauge".parse::<CheckKind>().unwrap(), CheckKind::Gauge);
        assert!("nope".parse::<CheckKind>().is_err());
    }

    #[test]
    fn negative_control_fails() {
        let m = Arc::new(corpus::torus2_flipped());
        let t = DwTheory::untwisted(1, 3).with_action(ActionSpec::cup_square(1));
        let r = manifold_suite(&[m], &t, &SuiteOptions::default()).unwrap();
        assert!(!r.all_passed);
        assert!(r.of_kind(CheckKind::Gauge).all(|c| !c.passed));
    }

    #[test]
    fn files_suite_on_cylinder() {
        let m = Arc::new(corpus::cylinder());
        let r = manifold_suite(&[m], &DwTheory::untwisted(1, 2), &SuiteOptions::default()).unwrap();
        assert!(r.all_passed);
        assert!(r.of_kind(CheckKind::Gluing).count() == 1);
        assert!(r.of_kind(CheckKind::Lemma).count() >= 1);
    }

    #[test]
    fn empty_selection() {
        let opts = SuiteOptions {
            kinds: BTreeSet::new(),
            ..SuiteOptions::default()
        };
        let r = manifold_suite(&[Arc::new(corpus::torus2())], &DwTheory::untwisted(1, 2), &opts).unwrap();
        assert!(r.is_empty() && r.all_passed);
    }
}
