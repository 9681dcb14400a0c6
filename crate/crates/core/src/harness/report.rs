//! Suite runs, JSON-lines reports and counterexample replay.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::checks::{check, generate};
use super::laws::{Instance, Law, Mutation, Outcome};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Everything needed to reproduce one failing instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub law: Law,
    pub seed: u64,
    pub index: u64,
    pub mutation: Option<Mutation>,
    pub instance: Instance,
    pub outcome: Outcome,
}

/// One report line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub law: Law,
    pub seed: u64,
    pub index: u64,
    pub instance_seed: u64,
    pub passed: bool,
    pub checks: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
}

/// Closing report line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub law: Law,
    pub seed: u64,
    pub count: u64,
    pub passed: u64,
    pub failed: u64,
    pub checks: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub records: Vec<InstanceRecord>,
    pub summary: SuiteSummary,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub exec: Execution,
    /// Worker threads for parallel runs; `0` keeps the global pool.
    pub jobs: usize,
    pub mutation: Option<Mutation>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.records.iter().filter_map(|r| r.counterexample.as_ref())
    }

    /// Records then the summary, one JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut out, &serde_json::json!({ "summary": self.summary }))?;
        out.write_all(b"\n")
    }

    /// The report without wall time, for determinism comparisons.
    pub fn content(&self) -> (Vec<InstanceRecord>, SuiteSummary) {
        let mut s = self.summary.clone();
        s.wall_ms = 0;
        (self.records.clone(), s)
    }
}

fn run_one(law: Law, seed: u64, index: u64, mutation: Option<Mutation>) -> InstanceRecord {
    let inst = match generate(law, seed, index) {
        Ok(inst) => inst,
        Err(e) => {
            return InstanceRecord {
                law,
                seed,
                index,
                instance_seed: super::generate::instance_seed(seed, index),
                passed: false,
                checks: 0,
                failure: Some(format!("generation error: {e}")),
                counterexample: None,
            }
        }
    };
    let outcome = check(&inst, mutation);
    let counterexample = (!outcome.passed).then(|| Counterexample {
        law,
        seed,
        index,
        mutation,
        instance: inst.clone(),
        outcome: outcome.clone(),
    });
    InstanceRecord {
        law,
        seed,
        index,
        instance_seed: inst.instance_seed,
        passed: outcome.passed,
        checks: outcome.checks,
        failure: outcome.failure,
        counterexample,
    }
}

/// Runs instances `0..count` of `law` under `seed`. Records come back in
/// instance order whatever the execution mode.
pub fn run_suite(law: Law, seed: u64, count: u64, opts: RunOptions) -> Result<SuiteReport> {
    if let Some(m) = opts.mutation {
        if !law.supports(m) {
            return Err(Error::Invalid(format!("law {law} does not support mutation {m:?}")));
        }
    }
    let start = Instant::now();
    let records = opts
        .exec
        .map_indexed(count as usize, opts.jobs, |i| run_one(law, seed, i as u64, opts.mutation));
    let passed = records.iter().filter(|r| r.passed).count() as u64;
    let summary = SuiteSummary {
        law,
        seed,
        count,
        passed,
        failed: count - passed,
        checks: records.iter().map(|r| r.checks).sum(),
        wall_ms: start.elapsed().as_millis() as u64,
    };
    Ok(SuiteReport { records, summary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    /// The stored instance equals the one regenerated from `(law, seed, index)`.
    pub regenerated_matches: bool,
    pub outcome: Outcome,
    /// The re-run outcome equals the stored one, field for field.
    pub reproduced: bool,
}

/// Re-checks a counterexample from its stored payload.
pub fn replay(cx: &Counterexample) -> Result<Replay> {
    if cx.instance.law != cx.law || cx.instance.seed != cx.seed || cx.instance.index != cx.index {
        return Err(Error::Invalid("counterexample header does not match its instance".into()));
    }
    let regenerated = generate(cx.law, cx.seed, cx.index)?;
    let outcome = check(&cx.instance, cx.mutation);
    Ok(Replay {
        regenerated_matches: regenerated == cx.instance,
        reproduced: outcome == cx.outcome,
        outcome,
    })
}
