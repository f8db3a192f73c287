//! Deterministic 2-tag systems: validation, single steps, and bounded runs
//! with halt and cycle detection.
//!
//! A 2-tag system reads the leftmost symbol of the dataword, deletes the two
//! leftmost symbols, and appends the word its rule maps the read symbol to.
//! The run stops when the word is shorter than the deletion number, when the
//! read symbol has no rule, or when a configuration repeats.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::cycle::{self, config_hash, HashWindow, Observation};

/// Anything usable as a 2-tag alphabet symbol. Equality is exact identity:
/// two symbols differing in any decoration are distinct.
pub trait TagSymbol: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {}

impl<T: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display> TagSymbol for T {}

/// The deletion number of every system in this crate.
pub const BETA: u8 = 2;

/// A deterministic tag system: finite alphabet, at most one rule per symbol,
/// deletion number β (always 2 here; stored so validation can reject others).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSystem<S: TagSymbol> {
    alphabet: BTreeSet<S>,
    rules: BTreeMap<S, Vec<S>>,
    beta: u8,
}

/// One violated invariant of a [`TagSystem`]. Violations are data, not
/// failures; a system is valid iff [`TagSystem::validate`] returns none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// β is not 2.
    BadDeletionNumber(u8),
    /// A rule mentions a symbol missing from the alphabet.
    UnknownSymbol { symbol: String, in_rule_for: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadDeletionNumber(b) => write!(f, "deletion number {b} is not 2"),
            Violation::UnknownSymbol {
                symbol,
                in_rule_for,
            } => {
                write!(
                    f,
                    "symbol {symbol} in rule for {in_rule_for} is not in the alphabet"
                )
            }
        }
    }
}

impl<S: TagSymbol> TagSystem<S> {
    /// Build a system from explicit alphabet, rules, and deletion number.
    pub fn new<A, R>(alphabet: A, rules: R, beta: u8) -> Self
    where
        A: IntoIterator<Item = S>,
        R: IntoIterator<Item = (S, Vec<S>)>,
    {
        TagSystem {
            alphabet: alphabet.into_iter().collect(),
            rules: rules.into_iter().collect(),
            beta,
        }
    }

    /// Build a system whose alphabet is everything mentioned by the rules.
    pub fn from_rules<R>(rules: R) -> Self
    where
        R: IntoIterator<Item = (S, Vec<S>)>,
    {
        let rules: BTreeMap<S, Vec<S>> = rules.into_iter().collect();
        let mut alphabet = BTreeSet::new();
        for (lhs, rhs) in &rules {
            alphabet.insert(lhs.clone());
            alphabet.extend(rhs.iter().cloned());
        }
        TagSystem {
            alphabet,
            rules,
            beta: BETA,
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<S> {
        &self.alphabet
    }

    pub fn rules(&self) -> &BTreeMap<S, Vec<S>> {
        &self.rules
    }

    pub fn rule(&self, symbol: &S) -> Option<&[S]> {
        self.rules.get(symbol).map(Vec::as_slice)
    }

    pub fn beta(&self) -> u8 {
        self.beta
    }

    /// Every violated invariant; empty means valid. Monogenicity is
    /// structural (the rule map holds at most one rule per symbol).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.beta != BETA {
            out.push(Violation::BadDeletionNumber(self.beta));
        }
        for (lhs, rhs) in &self.rules {
            if !self.alphabet.contains(lhs) {
                out.push(Violation::UnknownSymbol {
                    symbol: lhs.to_string(),
                    in_rule_for: lhs.to_string(),
                });
            }
            for sym in rhs {
                if !self.alphabet.contains(sym) {
                    out.push(Violation::UnknownSymbol {
                        symbol: sym.to_string(),
                        in_rule_for: lhs.to_string(),
                    });
                }
            }
        }
        out
    }
}

/// A configuration: the dataword plus the number of steps applied so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagConfig<S: TagSymbol> {
    pub word: Vec<S>,
    pub steps: u64,
}

impl<S: TagSymbol> TagConfig<S> {
    pub fn new(word: Vec<S>) -> Self {
        TagConfig { word, steps: 0 }
    }
}

/// Why a run stopped. The first three map one-to-one onto the completion
/// conditions of the model; `StepLimitReached` is a harness artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HaltReason {
    /// |w| < β. The empty word is a legal halted configuration.
    WordTooShort,
    /// No rule for the leftmost symbol (rendered for diagnostics).
    NoRuleForReadSymbol(String),
    /// A configuration repeated: first seen after `first_seen` steps,
    /// recurring at step `first_seen + period`.
    CycleDetected {
        first_seen: u64,
        period: u64,
    },
    StepLimitReached,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HaltReason::WordTooShort => write!(f, "word shorter than deletion number"),
            HaltReason::NoRuleForReadSymbol(s) => write!(f, "no rule for read symbol {s}"),
            HaltReason::CycleDetected { first_seen, period } => {
                write!(
                    f,
                    "cycle: configuration of step {first_seen} recurs with period {period}"
                )
            }
            HaltReason::StepLimitReached => write!(f, "step limit reached"),
        }
    }
}

/// One computation step: delete the two leftmost symbols, append the rule's
/// right-hand side for the first of them.
pub fn step<S: TagSymbol>(
    ts: &TagSystem<S>,
    cfg: &TagConfig<S>,
) -> Result<TagConfig<S>, HaltReason> {
    if cfg.word.len() < usize::from(BETA) {
        return Err(HaltReason::WordTooShort);
    }
    let read = &cfg.word[0];
    let Some(rhs) = ts.rule(read) else {
        return Err(HaltReason::NoRuleForReadSymbol(read.to_string()));
    };
    let mut word = Vec::with_capacity(cfg.word.len() - 2 + rhs.len());
    word.extend_from_slice(&cfg.word[2..]);
    word.extend_from_slice(rhs);
    Ok(TagConfig {
        word,
        steps: cfg.steps + 1,
    })
}

/// ⌈|w|/2⌉: the number of steps that traverse a word of this length once.
pub fn round_length(len: usize) -> usize {
    len.div_ceil(2)
}

/// Run bounds. Cycle detection hashes every configuration into a bounded
/// set; past `cycle_cap` entries it degrades to Brent's algorithm.
#[derive(Debug, Clone)]
pub struct RunLimits {
    pub max_steps: u64,
    pub detect_cycles: bool,
    pub cycle_cap: usize,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_steps: 1 << 20,
            detect_cycles: true,
            cycle_cap: 1 << 20,
        }
    }
}

/// What the trace records. Datawords grow to the scale of the whole run, so
/// full words are opt-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMode {
    #[default]
    Off,
    /// Per step: index, read symbol, appended length.
    Summary,
    /// Additionally the full dataword after each step.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry<S: TagSymbol> {
    pub step: u64,
    pub read: S,
    pub appended: usize,
    pub word: Option<Vec<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult<S: TagSymbol> {
    pub final_word: Vec<S>,
    pub steps: u64,
    pub halt: HaltReason,
    pub trace: Vec<TraceEntry<S>>,
}

/// Iterate [`step`] until a halt condition, on an interned representation.
pub fn run<S: TagSymbol>(
    ts: &TagSystem<S>,
    w0: &[S],
    limits: &RunLimits,
    trace_mode: TraceMode,
) -> RunResult<S> {
    let program = machine::Program::build_with(ts, w0);
    let word0 = program
        .intern_word(w0)
        .expect("word symbols interned by construction");
    let mut m = machine::Machine::new(&program, word0.clone());
    let mut trace = Vec::new();
    let mut window = limits
        .detect_cycles
        .then(|| HashWindow::new(limits.cycle_cap));

    // Step 0's configuration participates in recurrence detection.
    if let Some(w) = window.as_mut() {
        w.observe(config_hash(m.word()), 0);
    }

    loop {
        if m.steps() >= limits.max_steps {
            return finish(&program, m, HaltReason::StepLimitReached, trace);
        }
        match m.step() {
            machine::StepEvent::Halted(kind) => {
                let halt = match kind {
                    machine::HaltKind::WordTooShort => HaltReason::WordTooShort,
                    machine::HaltKind::NoRule(id) => {
                        HaltReason::NoRuleForReadSymbol(program.symbol(id).to_string())
                    }
                };
                return finish(&program, m, halt, trace);
            }
            machine::StepEvent::Stepped { read, appended, .. } => match trace_mode {
                TraceMode::Off => {}
                TraceMode::Summary | TraceMode::Full => trace.push(TraceEntry {
                    step: m.steps(),
                    read: program.symbol(read).clone(),
                    appended,
                    word: (trace_mode == TraceMode::Full).then(|| {
                        m.word()
                            .iter()
                            .map(|&id| program.symbol(id).clone())
                            .collect()
                    }),
                }),
            },
        }

        if let Some(w) = window.as_mut() {
            match w.observe(config_hash(m.word()), m.steps()) {
                Observation::Fresh => {}
                Observation::Candidate { first_seen } => {
                    // Confirm by replay; a 64-bit collision is possible.
                    if let Some(period) = confirm_cycle(&program, &word0, first_seen, m.steps()) {
                        return finish(
                            &program,
                            m,
                            HaltReason::CycleDetected { first_seen, period },
                            trace,
                        );
                    }
                }
                Observation::CapExceeded => {
                    window = None;
                    if let Some(res) = brent_fallback(&program, &m, limits) {
                        return finish(&program, m, res, trace);
                    }
                    // No cycle within budget: fall through and run plain.
                }
            }
        }
    }
}

fn finish<S: TagSymbol>(
    program: &machine::Program<S>,
    m: machine::Machine<'_, S>,
    halt: HaltReason,
    trace: Vec<TraceEntry<S>>,
) -> RunResult<S> {
    RunResult {
        final_word: m
            .word()
            .iter()
            .map(|&id| program.symbol(id).clone())
            .collect(),
        steps: m.steps(),
        halt,
        trace,
    }
}

/// Replay from the start and check that the configurations at `first_seen`
/// and `candidate` really coincide. Returns the period if so.
fn confirm_cycle<S: TagSymbol>(
    program: &machine::Program<S>,
    word0: &VecDeque<u32>,
    first_seen: u64,
    candidate: u64,
) -> Option<u64> {
    let mut m = machine::Machine::new(program, word0.clone());
    for _ in 0..first_seen {
        if !matches!(m.step(), machine::StepEvent::Stepped { .. }) {
            return None;
        }
    }
    let at_entry: VecDeque<u32> = m.word().clone();
    for _ in first_seen..candidate {
        if !matches!(m.step(), machine::StepEvent::Stepped { .. }) {
            return None;
        }
    }
    (m.word() == &at_entry).then_some(candidate - first_seen)
}

/// Constant-memory cycle search from the machine's current configuration.
/// Cycle indices are reported relative to the run's start.
fn brent_fallback<S: TagSymbol>(
    program: &machine::Program<S>,
    m: &machine::Machine<'_, S>,
    limits: &RunLimits,
) -> Option<HaltReason> {
    let base = m.steps();
    let budget = limits.max_steps.saturating_sub(base);
    let step_fn = |w: &VecDeque<u32>| {
        let mut probe = machine::Machine::new(program, w.clone());
        matches!(probe.step(), machine::StepEvent::Stepped { .. }).then(|| probe.into_word())
    };
    cycle::brent(m.word().clone(), step_fn, budget).map(|c| HaltReason::CycleDetected {
        first_seen: base + c.entry,
        period: c.period,
    })
}

/// Interned programs and the queue machine the runs execute on.
pub mod machine {
    use super::*;

    /// A tag system lowered to dense arrays: symbols become indices in a
    /// stable (sorted) order, rules become an index-addressed table.
    #[derive(Debug, Clone)]
    pub struct Program<S: TagSymbol> {
        syms: Vec<S>,
        ids: HashMap<S, u32>,
        rhs: Vec<Option<Box<[u32]>>>,
    }

    impl<S: TagSymbol> Program<S> {
        pub fn build(ts: &TagSystem<S>) -> Self {
            Self::build_with(ts, &[])
        }

        /// Build with extra interned symbols, so words mentioning symbols
        /// outside the alphabet still run (reading one halts the run;
        /// deleting one as the second of a pair is ordinary).
        pub fn build_with(ts: &TagSystem<S>, extra: &[S]) -> Self {
            let mut syms: Vec<S> = ts.alphabet().iter().cloned().collect();
            syms.extend(extra.iter().cloned());
            // Rules may mention symbols beyond the declared alphabet on
            // invalid systems; intern those too so runs stay total.
            for (lhs, rhs) in ts.rules() {
                if !ts.alphabet().contains(lhs) {
                    syms.push(lhs.clone());
                }
                for s in rhs {
                    if !ts.alphabet().contains(s) {
                        syms.push(s.clone());
                    }
                }
            }
            syms.sort();
            syms.dedup();
            let ids: HashMap<S, u32> = syms
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as u32))
                .collect();
            let mut rhs: Vec<Option<Box<[u32]>>> = vec![None; syms.len()];
            for (lhs, word) in ts.rules() {
                let lhs_id = ids[lhs];
                rhs[lhs_id as usize] = Some(
                    word.iter()
                        .map(|s| ids[s])
                        .collect::<Vec<_>>()
                        .into_boxed_slice(),
                );
            }
            Program { syms, ids, rhs }
        }

        pub fn id(&self, sym: &S) -> Option<u32> {
            self.ids.get(sym).copied()
        }

        pub fn symbol(&self, id: u32) -> &S {
            &self.syms[id as usize]
        }

        pub fn symbols(&self) -> &[S] {
            &self.syms
        }

        pub fn intern_word(&self, word: &[S]) -> Option<VecDeque<u32>> {
            word.iter().map(|s| self.id(s)).collect()
        }

        pub fn extern_word(&self, word: &VecDeque<u32>) -> Vec<S> {
            word.iter().map(|&id| self.symbol(id).clone()).collect()
        }
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum HaltKind {
        WordTooShort,
        NoRule(u32),
    }

    /// Result of one machine step. Deletions report both removed symbols so
    /// observers can maintain incremental statistics over the word.
    #[derive(Debug, Clone, Copy)]
    pub enum StepEvent {
        Stepped {
            read: u32,
            partner: u32,
            appended: usize,
        },
        Halted(HaltKind),
    }

    /// The word as a queue of symbol ids plus a step counter.
    #[derive(Debug, Clone)]
    pub struct Machine<'p, S: TagSymbol> {
        program: &'p Program<S>,
        word: VecDeque<u32>,
        steps: u64,
    }

    impl<'p, S: TagSymbol> Machine<'p, S> {
        pub fn new(program: &'p Program<S>, word: VecDeque<u32>) -> Self {
            Machine {
                program,
                word,
                steps: 0,
            }
        }

        pub fn word(&self) -> &VecDeque<u32> {
            &self.word
        }

        pub fn into_word(self) -> VecDeque<u32> {
            self.word
        }

        pub fn steps(&self) -> u64 {
            self.steps
        }

        pub fn step(&mut self) -> StepEvent {
            if self.word.len() < usize::from(BETA) {
                return StepEvent::Halted(HaltKind::WordTooShort);
            }
            let read = self.word[0];
            let Some(rhs) = &self.program.rhs[read as usize] else {
                return StepEvent::Halted(HaltKind::NoRule(read));
            };
            self.word.pop_front();
            let partner = self.word.pop_front().expect("length checked above");
            self.word.extend(rhs.iter().copied());
            self.steps += 1;
            StepEvent::Stepped {
                read,
                partner,
                appended: rhs.len(),
            }
        }
    }
}
