//! The sweep driver: generate, check in parallel, merge by fingerprint.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{CheckName, GeneratorSpec, Subject, Verdict, VerdictReport};
use crate::algebra::BoundQuiverAlgebra;
use crate::resolve::Limits;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub specs: Vec<GeneratorSpec>,
    pub checks: Vec<CheckName>,
    pub limits: Limits,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: String,
    pub pass: usize,
    pub pass_at_bound: usize,
    pub inconclusive: usize,
    pub fail: usize,
    pub not_applicable: usize,
    /// Fingerprints of algebras with a counterexample candidate.
    pub candidates: Vec<String>,
    /// Fingerprints of algebras failing a proved statement.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRun {
    #[serde(flatten)]
    pub spec: GeneratorSpec,
    pub generated: usize,
    pub skipped: usize,
    pub duplicates: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub bound: usize,
    pub max_dim: usize,
    pub seed: u64,
    pub families: Vec<FamilyRun>,
    /// Distinct algebras checked.
    pub algebras: usize,
    /// Algebras already produced by an earlier family, dropped.
    pub duplicates: usize,
    pub checks: Vec<CheckSummary>,
    pub timing: Timing,
}

impl SweepSummary {
    /// Pretty JSON with or without the timing block.
    pub fn to_json(&self, timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("summary serializes");
        if !timing {
            v.as_object_mut().expect("object").remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("summary serializes")
    }

    pub fn worst(&self) -> Verdict {
        let mut w = Verdict::NotApplicable;
        for c in &self.checks {
            if !c.candidates.is_empty() {
                w = w.max(Verdict::CounterexampleCandidate);
            }
            if c.fail > 0 {
                w = w.max(Verdict::Fail);
            }
        }
        w
    }
}

pub struct SweepOutcome {
    pub summary: SweepSummary,
    /// Sorted by fingerprint, then check.
    pub reports: Vec<VerdictReport>,
}

impl SweepOutcome {
    /// Reports that need a persisted witness.
    pub fn flagged(&self) -> impl Iterator<Item = &VerdictReport> {
        self.reports.iter().filter(|r| r.verdict >= Verdict::Fail)
    }
}

pub fn run_sweep(config: &SweepConfig) -> SweepOutcome {
    let start = Instant::now();
    let mut families = Vec::new();
    let mut algebras: Vec<Arc<BoundQuiverAlgebra>> = Vec::new();
    let mut seen = HashSet::new();
    let mut duplicates = 0;
    for spec in &config.specs {
        let mut g = spec.generate();
        let mut generated = 0;
        for a in g.by_ref() {
            generated += 1;
            if seen.insert(a.fingerprint()) {
                algebras.push(Arc::new(a));
            } else {
                duplicates += 1;
            }
        }
        families.push(FamilyRun { spec: spec.clone(), generated, skipped: g.skipped(), duplicates: g.duplicates() });
    }
    log::info!("sweep: {} algebras, {} duplicates dropped", algebras.len(), duplicates);

    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.workers.max(1)).build().expect("thread pool");
    let mut reports: Vec<VerdictReport> = pool.install(|| {
        algebras
            .par_iter()
            .flat_map_iter(|a| Subject::new(a.clone(), config.limits).run_all(&config.checks))
            .collect()
    });
    reports.sort_by(|x, y| (&x.fingerprint, x.check).cmp(&(&y.fingerprint, y.check)));

    let checks = config
        .checks
        .iter()
        .map(|&c| {
            let mut s = CheckSummary { name: c.to_string(), ..Default::default() };
            for r in reports.iter().filter(|r| r.check == c) {
                match r.verdict {
                    Verdict::Pass => s.pass += 1,
                    Verdict::PassAtBound => s.pass_at_bound += 1,
                    Verdict::Inconclusive => s.inconclusive += 1,
                    Verdict::NotApplicable => s.not_applicable += 1,
                    Verdict::Fail => {
                        s.fail += 1;
                        s.failures.push(r.fingerprint.clone());
                    }
                    Verdict::CounterexampleCandidate => s.candidates.push(r.fingerprint.clone()),
                }
            }
            s
        })
        .collect();

    let summary = SweepSummary {
        bound: config.limits.bound,
        max_dim: config.limits.max_dim,
        seed: config.seed,
        families,
        algebras: algebras.len(),
        duplicates,
        checks,
        timing: Timing { wall_time_s: start.elapsed().as_secs_f64() },
    };
    SweepOutcome { summary, reports }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Family;

    #[test]
    fn empty_sweep() {
        let config = SweepConfig { specs: vec![], checks: CheckName::ALL.to_vec(), limits: Limits::with_bound(5), seed: 1, workers: 2 };
        let out = run_sweep(&config);
        assert_eq!(out.summary.algebras, 0);
        assert!(out.reports.is_empty());
        assert!(out.summary.checks.iter().all(|c| c.pass == 0 && c.fail == 0));
    }

    #[test]
    fn small_sweep_is_reproducible() {
        let config = SweepConfig {
            specs: vec![GeneratorSpec::new(Family::Nakayama, 15, 3), GeneratorSpec::new(Family::Monomial, 10, 4)],
            checks: vec![CheckName::ThmInjdimRadical, CheckName::QuestionSyzygy],
            limits: Limits::with_bound(6),
            seed: 3,
            workers: 3,
        };
        let a = run_sweep(&config);
        let b = run_sweep(&SweepConfig { workers: 1, ..config });
        assert_eq!(a.summary.to_json(false), b.summary.to_json(false));
        assert!(!a.summary.to_json(false).contains("wall_time_s"));
        let total: usize = a.summary.checks.iter().map(|c| c.pass + c.pass_at_bound + c.inconclusive + c.fail + c.candidates.len()).sum();
        assert_eq!(total, 2 * a.summary.algebras);
        assert_eq!(a.summary.worst().max(Verdict::Inconclusive), Verdict::Inconclusive);
    }
}
