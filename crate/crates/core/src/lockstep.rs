//! Lockstep verification of compiled systems against the cyclic reference
//! interpreter.
//!
//! The compiled 2-tag system is driven from checkpoint to checkpoint — the
//! configurations whose symbols all sit at the checkpoint stage and decode
//! to a cyclic configuration — and every decoded view is compared against
//! the reference. Each macro-step gets a step budget proportional to
//! m·(1+log₂ m), m the decoded length plus counter, times a safety factor,
//! so nontermination bugs surface as diagnosable budget errors rather than
//! hangs.

use std::collections::VecDeque;

use serde::Serialize;

use crate::codec::{decode, encode_input, BarSide, Base, DecoratedSymbol, StageId};
use crate::compile::{compile, CompileError, CompiledSystem};
use crate::cyclic::{cstep, format_bits, CyclicConfig, CyclicHalt, CyclicTagSystem};
use crate::tag::machine::{HaltKind, Machine, Program, StepEvent};
use crate::tag::TagSystem;

/// Environment variable overriding the budget safety factor K.
pub const STEP_BUDGET_ENV: &str = "TAGFORGE_STEP_BUDGET_K";

/// Default safety factor for the per-macro-step budget.
pub const DEFAULT_BUDGET_K: u64 = 64;

/// Budget for one macro-step starting from a checkpoint of size `m`.
pub fn macro_step_budget(m: u64, k_factor: u64) -> u64 {
    let m = m.max(2) as f64;
    (m * (1.0 + m.log2()) * k_factor as f64).ceil() as u64
}

/// The K override from the environment, or the default.
pub fn budget_k_from_env() -> u64 {
    std::env::var(STEP_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&k| k > 0)
        .unwrap_or(DEFAULT_BUDGET_K)
}

/// Why a drive toward the next uniform-stage configuration stopped early.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DriveError {
    #[error("machine halted: word too short")]
    WordTooShort,
    #[error("machine halted: no rule for {0}")]
    NoRule(String),
    #[error("hash symbol reached the read position: {0}")]
    HashRead(String),
    #[error("step budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
}

/// A 2-tag machine over decorated symbols that tracks how many symbols of
/// the word sit at each stage, so uniform-stage configurations are detected
/// in O(1) per step.
pub struct StageScan<'p> {
    machine: Machine<'p, DecoratedSymbol>,
    program: &'p Program<DecoratedSymbol>,
    stage_slot: Vec<u8>,
    is_hash: Vec<bool>,
    histogram: [usize; StageId::ALL.len()],
    distinct: usize,
}

impl<'p> StageScan<'p> {
    pub fn new(program: &'p Program<DecoratedSymbol>, word: VecDeque<u32>) -> Self {
        let stage_slot: Vec<u8> = program
            .symbols()
            .iter()
            .map(|s| {
                StageId::ALL
                    .iter()
                    .position(|t| *t == s.stage)
                    .expect("stage indexed") as u8
            })
            .collect();
        let is_hash = program
            .symbols()
            .iter()
            .map(|s| s.base == Base::Hash)
            .collect();
        let mut scan = StageScan {
            machine: Machine::new(program, word),
            program,
            stage_slot,
            is_hash,
            histogram: [0; StageId::ALL.len()],
            distinct: 0,
        };
        let ids: Vec<u32> = scan.machine.word().iter().copied().collect();
        for id in ids {
            scan.add(id);
        }
        scan
    }

    fn add(&mut self, id: u32) {
        let slot = self.stage_slot[id as usize] as usize;
        if self.histogram[slot] == 0 {
            self.distinct += 1;
        }
        self.histogram[slot] += 1;
    }

    fn remove(&mut self, id: u32) {
        let slot = self.stage_slot[id as usize] as usize;
        self.histogram[slot] -= 1;
        if self.histogram[slot] == 0 {
            self.distinct -= 1;
        }
    }

    pub fn steps(&self) -> u64 {
        self.machine.steps()
    }

    pub fn word_len(&self) -> usize {
        self.machine.word().len()
    }

    pub fn word(&self) -> Vec<DecoratedSymbol> {
        self.program.extern_word(self.machine.word())
    }

    /// The word's single stage, when uniform and non-empty.
    pub fn uniform_stage(&self) -> Option<StageId> {
        if self.distinct != 1 {
            return None;
        }
        let slot = self
            .histogram
            .iter()
            .position(|&c| c > 0)
            .expect("one distinct stage");
        Some(StageId::ALL[slot])
    }

    /// One machine step, maintaining the stage histogram. Reading a hash is
    /// rejected before stepping: it has no rule, and reaching one means the
    /// compiled table is wrong.
    pub fn step(&mut self) -> Result<(), DriveError> {
        if let Some(&id) = self.machine.word().front() {
            if self.is_hash[id as usize] && self.machine.word().len() >= 2 {
                return Err(DriveError::HashRead(self.program.symbol(id).to_string()));
            }
        }
        match self.machine.step() {
            StepEvent::Stepped {
                read,
                partner,
                appended,
            } => {
                self.remove(read);
                self.remove(partner);
                let len = self.machine.word().len();
                for i in (len - appended)..len {
                    self.add(self.machine.word()[i]);
                }
                Ok(())
            }
            StepEvent::Halted(HaltKind::WordTooShort) => Err(DriveError::WordTooShort),
            StepEvent::Halted(HaltKind::NoRule(id)) => {
                Err(DriveError::NoRule(self.program.symbol(id).to_string()))
            }
        }
    }

    /// Step until the word is uniformly at `target`, returning the steps
    /// taken. The current configuration counts if already uniform.
    pub fn drive_to(&mut self, target: StageId, budget: u64) -> Result<u64, DriveError> {
        let start = self.machine.steps();
        loop {
            if self.uniform_stage() == Some(target) {
                return Ok(self.machine.steps() - start);
            }
            if self.machine.steps() - start >= budget {
                return Err(DriveError::BudgetExhausted { budget });
            }
            self.step()?;
        }
    }

    /// Step until the next uniform-stage configuration strictly after the
    /// current one, whatever its stage.
    pub fn drive_to_any_uniform(&mut self, budget: u64) -> Result<(StageId, u64), DriveError> {
        let start = self.machine.steps();
        loop {
            if self.machine.steps() - start >= budget {
                return Err(DriveError::BudgetExhausted { budget });
            }
            self.step()?;
            if let Some(stage) = self.uniform_stage() {
                return Ok((stage, self.machine.steps() - start));
            }
        }
    }
}

/// Run a decorated-symbol tag system until the word is uniformly at
/// `target`. Used by the per-family contract tests, where the rule families
/// under test are installed in isolation.
pub fn run_to_uniform_stage(
    ts: &TagSystem<DecoratedSymbol>,
    word: &[DecoratedSymbol],
    target: StageId,
    budget: u64,
) -> Result<(Vec<DecoratedSymbol>, u64), DriveError> {
    let program = Program::build_with(ts, word);
    let ids = program
        .intern_word(word)
        .expect("word symbols interned by construction");
    let mut scan = StageScan::new(&program, ids);
    let steps = scan.drive_to(target, budget)?;
    Ok((scan.word(), steps))
}

/// One uniform-stage configuration passed through by a scanned run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformConfig {
    pub stage: StageId,
    /// Total steps from the run's start when this configuration appeared.
    pub steps: u64,
    pub word: Vec<DecoratedSymbol>,
}

/// Collect the uniform-stage configurations a run passes through until the
/// word becomes uniform at `stop`, inclusive.
pub fn scan_uniform_stages(
    ts: &TagSystem<DecoratedSymbol>,
    word: &[DecoratedSymbol],
    stop: StageId,
    budget: u64,
) -> Result<Vec<UniformConfig>, DriveError> {
    let program = Program::build_with(ts, word);
    let ids = program
        .intern_word(word)
        .expect("word symbols interned by construction");
    let mut scan = StageScan::new(&program, ids);
    let mut seen = Vec::new();
    if let Some(stage) = scan.uniform_stage() {
        seen.push(UniformConfig {
            stage,
            steps: 0,
            word: scan.word(),
        });
        if stage == stop {
            return Ok(seen);
        }
    }
    loop {
        let (stage, _) = scan.drive_to_any_uniform(budget)?;
        seen.push(UniformConfig {
            stage,
            steps: scan.steps(),
            word: scan.word(),
        });
        if stage == stop {
            return Ok(seen);
        }
    }
}

/// One checkpoint of a verified run, as dumped to JSON Lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckpointRecord {
    /// Cyclic step index this checkpoint corresponds to.
    pub step: u64,
    pub appendant_index: u16,
    pub dataword: String,
    pub counter: u64,
    pub bar_side: BarSide,
    /// 2-tag steps spent since the previous checkpoint.
    pub tag_steps: u64,
    pub counter_is_power_of_two: bool,
    pub counter_exceeds_length: bool,
    /// Counter ≤ 2 × the longest decoded dataword seen so far.
    pub counter_within_double_max: bool,
}

/// Verdict of a lockstep run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// Every checkpoint matched and halts correspond.
    Equivalent,
    /// A checkpoint decoded to something other than the reference, or no
    /// checkpoint materialised where one was due.
    DivergedAt { step: u64, reason: String },
    /// The 2-tag side halted while the reference had not.
    HaltMismatch { step: u64, detail: String },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LockstepReport {
    pub verdict: Verdict,
    pub records: Vec<CheckpointRecord>,
    /// Set when the reference halted (empty dataword) within the bound.
    pub cyclic_halted_at: Option<u64>,
    pub total_tag_steps: u64,
    /// True when every record satisfies all three counter invariants.
    pub invariants_hold: bool,
}

/// Inputs the harness refuses to run.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LockstepError {
    #[error("compile failed: {0}")]
    Compile(#[from] CompileError),
    #[error(
        "encoding rejected: input length {len} shorter than longest appendant {max_appendant}"
    )]
    EncodingRejected { len: usize, max_appendant: usize },
    #[error("encoding rejected: empty input")]
    EmptyInput,
}

/// Options for a lockstep run.
#[derive(Debug, Clone)]
pub struct LockstepOptions {
    pub max_cyclic_steps: u64,
    /// Budget safety factor; see [`macro_step_budget`].
    pub budget_k: u64,
}

impl Default for LockstepOptions {
    fn default() -> Self {
        LockstepOptions {
            max_cyclic_steps: 100,
            budget_k: budget_k_from_env(),
        }
    }
}

/// Compile `program` and verify it against the reference interpreter on
/// `input` for up to `opts.max_cyclic_steps` steps.
pub fn lockstep_verify(
    program: &CyclicTagSystem,
    input: &[bool],
    opts: &LockstepOptions,
) -> Result<LockstepReport, LockstepError> {
    let compiled = compile(program)?;
    lockstep_verify_compiled(&compiled, program, input, opts)
}

/// Verify an already compiled system. Taking the compiled artifact
/// separately also serves fault-injection tests, which perturb it first.
pub fn lockstep_verify_compiled(
    compiled: &CompiledSystem,
    program: &CyclicTagSystem,
    input: &[bool],
    opts: &LockstepOptions,
) -> Result<LockstepReport, LockstepError> {
    if input.is_empty() {
        return Err(LockstepError::EmptyInput);
    }
    if input.len() < compiled.max_appendant_len() {
        return Err(LockstepError::EncodingRejected {
            len: input.len(),
            max_appendant: compiled.max_appendant_len(),
        });
    }

    let encoded = encode_input(input, compiled.p()).expect("input checked non-empty");
    let tag_program = Program::build(compiled.tag());
    let ids = tag_program
        .intern_word(&encoded)
        .expect("encoded input uses compiled alphabet");
    let mut scan = StageScan::new(&tag_program, ids);

    let mut records: Vec<CheckpointRecord> = Vec::new();
    let mut reference = CyclicConfig::initial(input.to_vec());
    let mut max_len_seen = 0u64;
    let mut invariants_hold = true;
    let mut cyclic_halted_at = None;

    let record_checkpoint = |scan: &StageScan<'_>,
                             step: u64,
                             tag_steps: u64,
                             reference: &CyclicConfig,
                             max_len_seen: &mut u64,
                             invariants_hold: &mut bool,
                             records: &mut Vec<CheckpointRecord>|
     -> Result<(), String> {
        let word = scan.word();
        let view = decode(&word).map_err(|e| format!("not a checkpoint: {e}"))?;
        if !view.is_checkpoint() {
            return Err(format!(
                "decoded view at stage {} is not canonical",
                view.stage
            ));
        }
        *max_len_seen = (*max_len_seen).max(view.dataword.len() as u64);
        let rec = CheckpointRecord {
            step,
            appendant_index: view.appendant,
            dataword: format_bits(&view.dataword),
            counter: view.counter,
            bar_side: view.bar_side,
            tag_steps,
            counter_is_power_of_two: view.counter.is_power_of_two(),
            counter_exceeds_length: view.counter > (view.dataword.len() as u64 - 1),
            counter_within_double_max: view.counter <= 2 * *max_len_seen,
        };
        if !(rec.counter_is_power_of_two
            && rec.counter_exceeds_length
            && rec.counter_within_double_max)
        {
            *invariants_hold = false;
        }
        let want_marker = reference.marker as u16;
        if view.appendant != want_marker || view.dataword != reference.dataword {
            let detail = format!(
                "decoded (marker {}, {}) but reference is (marker {}, {})",
                view.appendant,
                rec.dataword,
                want_marker,
                format_bits(&reference.dataword)
            );
            records.push(rec);
            return Err(detail);
        }
        records.push(rec);
        Ok(())
    };

    // Checkpoint 0 is the input encoding itself.
    if let Err(reason) = record_checkpoint(
        &scan,
        0,
        0,
        &reference,
        &mut max_len_seen,
        &mut invariants_hold,
        &mut records,
    ) {
        return Ok(LockstepReport {
            verdict: Verdict::DivergedAt { step: 0, reason },
            records,
            cyclic_halted_at: None,
            total_tag_steps: 0,
            invariants_hold,
        });
    }

    let mut verdict = Verdict::Equivalent;
    for t in 0..opts.max_cyclic_steps {
        match cstep(program, &reference) {
            // No encoded word represents the empty dataword (the head pair
            // is always present), and the construction's behavior past
            // that point is undefined; stop at the cyclic halt.
            Ok(next) if next.dataword.is_empty() => {
                cyclic_halted_at = Some(t + 1);
                break;
            }
            Ok(next) => reference = next,
            Err(CyclicHalt::EmptyDataword) => {
                cyclic_halted_at = Some(t);
                break;
            }
            Err(other) => unreachable!("cstep only halts on empty dataword: {other:?}"),
        }

        let m = {
            let last = records.last().expect("checkpoint 0 recorded");
            last.dataword.len() as u64 + last.counter
        };
        let budget = macro_step_budget(m, opts.budget_k);

        // Leave the current checkpoint, then drive to the next.
        let drive = scan
            .step()
            .and_then(|()| scan.drive_to(StageId::Checkpoint, budget));
        match drive {
            Ok(steps) => {
                if let Err(reason) = record_checkpoint(
                    &scan,
                    t + 1,
                    steps + 1,
                    &reference,
                    &mut max_len_seen,
                    &mut invariants_hold,
                    &mut records,
                ) {
                    verdict = Verdict::DivergedAt {
                        step: t + 1,
                        reason,
                    };
                    break;
                }
            }
            Err(
                e @ (DriveError::WordTooShort | DriveError::NoRule(_) | DriveError::HashRead(_)),
            ) => {
                verdict = Verdict::HaltMismatch {
                    step: t + 1,
                    detail: e.to_string(),
                };
                break;
            }
            Err(e @ DriveError::BudgetExhausted { .. }) => {
                verdict = Verdict::DivergedAt {
                    step: t + 1,
                    reason: e.to_string(),
                };
                break;
            }
        }
    }

    if verdict.is_equivalent() && !invariants_hold {
        verdict = Verdict::DivergedAt {
            step: records.last().map_or(0, |r| r.step),
            reason: "counter invariant violated".to_string(),
        };
    }

    Ok(LockstepReport {
        verdict,
        records,
        cyclic_halted_at,
        total_tag_steps: scan.steps(),
        invariants_hold,
    })
}

/// One program with the inputs to verify it on.
#[derive(Debug, Clone)]
pub struct TrialSet {
    pub program: CyclicTagSystem,
    pub inputs: Vec<Vec<bool>>,
}

/// Outcome of one (program, input) trial, keyed for deterministic merging.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub program_index: usize,
    pub input_index: usize,
    pub report: Result<LockstepReport, LockstepError>,
}

/// Verify every (program, input) pair. Trials are independent and run in
/// parallel; each program is compiled once; outcomes come back sorted by
/// (program, input) key regardless of scheduling.
pub fn verify_suite(sets: &[TrialSet], opts: &LockstepOptions) -> Vec<TrialOutcome> {
    use rayon::prelude::*;
    let mut outcomes: Vec<TrialOutcome> = sets
        .par_iter()
        .enumerate()
        .flat_map_iter(|(program_index, set)| {
            let compiled = compile(&set.program);
            set.inputs
                .iter()
                .enumerate()
                .map(move |(input_index, input)| {
                    let report = match &compiled {
                        Ok(c) => lockstep_verify_compiled(c, &set.program, input, opts),
                        Err(e) => Err(LockstepError::Compile(e.clone())),
                    };
                    TrialOutcome {
                        program_index,
                        input_index,
                        report,
                    }
                })
        })
        .collect();
    outcomes.sort_by_key(|o| (o.program_index, o.input_index));
    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::parse_bits;

    fn program(appendants: &[&str]) -> CyclicTagSystem {
        CyclicTagSystem::new(
            appendants
                .iter()
                .map(|a| {
                    if *a == "-" {
                        Vec::new()
                    } else {
                        parse_bits(a).unwrap()
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn budget_grows_loglinearly() {
        assert!(macro_step_budget(16, 64) < macro_step_budget(32, 64));
        assert_eq!(macro_step_budget(2, 1), 4);
    }

    #[test]
    fn rejects_short_and_empty_inputs() {
        let prog = program(&["00", "010", "11"]);
        let opts = LockstepOptions {
            max_cyclic_steps: 1,
            budget_k: 64,
        };
        assert!(matches!(
            lockstep_verify(&prog, &[], &opts),
            Err(LockstepError::EmptyInput)
        ));
        assert!(matches!(
            lockstep_verify(&prog, &parse_bits("01").unwrap(), &opts),
            Err(LockstepError::EncodingRejected {
                len: 2,
                max_appendant: 3
            })
        ));
    }
}
