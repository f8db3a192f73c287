//! Step-count profiling of compiled runs against the per-step bound.
//!
//! The interesting quantity is the number of 2-tag steps between
//! consecutive checkpoints, normalized by m·log₂(2m) where m is the
//! decoded length plus the counter value. The profile reports the least
//! upper constant over all observed points; the acceptance suite freezes
//! that constant and guards regressions against it. Rewrite steps are
//! counted exactly; wall-clock time is never measured.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclic::{BinaryWord, CyclicTagSystem};
use crate::gen;
use crate::lockstep::{lockstep_verify, LockstepError, LockstepOptions, Verdict};

/// One measured macro-step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostPoint {
    pub checkpoint_index: u64,
    /// Decoded dataword length at the macro-step's starting checkpoint.
    pub l: u64,
    pub counter: u64,
    /// 2-tag steps to the next checkpoint.
    pub steps: u64,
    /// steps / (m·log₂(2m)) with m = l + counter.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub input: String,
    pub cyclic_steps: u64,
    pub tag_steps: u64,
    pub max_counter: u64,
    pub max_decoded_len: u64,
}

/// The profile of one benchmark family run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostProfile {
    pub points: Vec<CostPoint>,
    pub trials: Vec<TrialSummary>,
    /// Least upper constant: max over points of `ratio`.
    pub c_fit: f64,
    pub total_tag_steps: u64,
    pub total_cyclic_steps: u64,
}

/// Normalizer m·log₂(2m).
pub fn per_step_bound(m: u64) -> f64 {
    let m = m.max(1) as f64;
    m * (2.0 * m).log2()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Lockstep(#[from] LockstepError),
    #[error("trial on input {input} did not verify: {detail}")]
    NotEquivalent { input: String, detail: String },
}

/// Run the compiled system on every input in lockstep with the reference,
/// collecting per-macro-step counts. A trial that fails verification or
/// violates the counter invariants fails the whole profile; the profile
/// never reports points from an unverified run.
pub fn bench(
    program: &CyclicTagSystem,
    inputs: &[BinaryWord],
    max_cyclic_steps: u64,
) -> Result<CostProfile, BenchError> {
    let opts = LockstepOptions {
        max_cyclic_steps,
        ..Default::default()
    };
    let mut points = Vec::new();
    let mut trials = Vec::new();
    let mut total_tag = 0u64;
    let mut total_cyclic = 0u64;
    let mut c_fit = 0f64;

    for input in inputs {
        let report = lockstep_verify(program, input, &opts)?;
        let rendered = crate::cyclic::format_bits(input);
        if !report.verdict.is_equivalent() {
            let detail = match &report.verdict {
                Verdict::Equivalent => unreachable!(),
                Verdict::DivergedAt { reason, .. } => reason.clone(),
                Verdict::HaltMismatch { detail, .. } => detail.clone(),
            };
            return Err(BenchError::NotEquivalent {
                input: rendered,
                detail,
            });
        }

        let mut max_counter = 0u64;
        let mut max_len = 0u64;
        for pair in report.records.windows(2) {
            let (from, to) = (&pair[0], &pair[1]);
            let m = from.dataword.len() as u64 + from.counter;
            points.push(CostPoint {
                checkpoint_index: to.step,
                l: from.dataword.len() as u64,
                counter: from.counter,
                steps: to.tag_steps,
                ratio: to.tag_steps as f64 / per_step_bound(m),
            });
        }
        for rec in &report.records {
            max_counter = max_counter.max(rec.counter);
            max_len = max_len.max(rec.dataword.len() as u64);
        }
        let cyclic_steps = report.records.last().map_or(0, |r| r.step);
        total_tag += report.total_tag_steps;
        total_cyclic += cyclic_steps;
        trials.push(TrialSummary {
            input: rendered,
            cyclic_steps,
            tag_steps: report.total_tag_steps,
            max_counter,
            max_decoded_len: max_len,
        });
    }

    for p in &points {
        c_fit = c_fit.max(p.ratio);
    }
    Ok(CostProfile {
        points,
        trials,
        c_fit,
        total_tag_steps: total_tag,
        total_cyclic_steps: total_cyclic,
    })
}

/// Benchmark input families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Fixed reference program, growing random inputs.
    A,
    /// Growth-heavy: all-ones appendants stress counter doubling.
    B,
    /// Shrink-heavy: empty appendants stress the general-counter case.
    C,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "a" | "A" => Some(Family::A),
            "b" | "B" => Some(Family::B),
            "c" | "C" => Some(Family::C),
            _ => None,
        }
    }

    pub fn program(self) -> CyclicTagSystem {
        let words = |strs: &[&str]| {
            strs.iter()
                .map(|s| crate::cyclic::parse_bits(s).unwrap())
                .collect()
        };
        match self {
            Family::A => CyclicTagSystem::new(words(&["00", "010", "11"])),
            Family::B => CyclicTagSystem::new(words(&["1", "11", "111"])),
            Family::C => CyclicTagSystem::new(vec![Vec::new(), Vec::new(), Vec::new()]),
        }
    }

    /// One random input per requested length, from the family's seed.
    pub fn inputs(self, lengths: &[usize], seed: u64) -> Vec<BinaryWord> {
        let mut rng = gen::rng(seed);
        lengths
            .iter()
            .map(|&len| gen::random_input(&mut rng, len, len))
            .collect()
    }
}

/// CSV rows for the points: checkpoint_index,l,counter,steps.
pub fn points_csv(profile: &CostProfile) -> String {
    let mut out = String::from("checkpoint_index,l,counter,steps\n");
    for p in &profile.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.checkpoint_index, p.l, p.counter, p.steps
        );
    }
    out
}

/// The JSON summary persisted next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSummary {
    pub c_fit: f64,
    pub points: usize,
    pub total_tag_steps: u64,
    pub total_cyclic_steps: u64,
    pub max_ratio_point: Option<CostPoint>,
}

pub fn summarize(profile: &CostProfile) -> ProfileSummary {
    let max_point = profile
        .points
        .iter()
        .max_by(|a, b| a.ratio.partial_cmp(&b.ratio).expect("ratios are finite"))
        .cloned();
    ProfileSummary {
        c_fit: profile.c_fit,
        points: profile.points.len(),
        total_tag_steps: profile.total_tag_steps,
        total_cyclic_steps: profile.total_cyclic_steps,
        max_ratio_point: max_point,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_step_bound_is_monotone() {
        assert!(per_step_bound(8) < per_step_bound(16));
        assert_eq!(per_step_bound(1), 1.0);
    }

    #[test]
    fn family_programs_have_expected_shapes() {
        assert_eq!(Family::A.program().len(), 3);
        assert!(Family::B
            .program()
            .appendants()
            .iter()
            .all(|a| a.iter().all(|&b| b)));
        assert!(Family::C.program().appendants().iter().all(Vec::is_empty));
        assert_eq!(Family::parse("b"), Some(Family::B));
        assert_eq!(Family::parse("x"), None);
    }

    #[test]
    fn family_inputs_fix_lengths() {
        let inputs = Family::A.inputs(&[8, 16], 42);
        assert_eq!(inputs[0].len(), 8);
        assert_eq!(inputs[1].len(), 16);
        assert_eq!(inputs, Family::A.inputs(&[8, 16], 42));
    }

    #[test]
    fn bench_propagates_precondition_failures() {
        // Family A's program needs inputs of length 3 or more.
        let err = bench(&Family::A.program(), &[vec![true]], 4).unwrap_err();
        assert!(matches!(err, BenchError::Lockstep(_)));
    }
}
