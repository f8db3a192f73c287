//! Cyclic tag systems: an ordered list of binary appendants cycled by a
//! marker. Each step deletes the leading symbol of the dataword; if it was
//! 1 the marked appendant is appended; the marker advances mod p.

use std::collections::VecDeque;
use std::fmt;

use crate::cycle::{config_hash, HashWindow, Observation};

/// A binary word as bits, most significant (leftmost) first.
pub type BinaryWord = Vec<bool>;

/// Parse "011"-style text into bits. Empty input is the empty word.
pub fn parse_bits(s: &str) -> Result<BinaryWord, char> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(other),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A cyclic tag program: p ≥ 1 appendants, each a binary word (possibly
/// empty; appending the empty word is a no-op beyond deletion).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicTagSystem {
    appendants: Vec<BinaryWord>,
}

/// Violated invariants of a cyclic tag program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CyclicViolation {
    /// The appendant list is empty.
    EmptyProgram,
    /// An appendant contains a symbol other than 0 or 1. Carries the
    /// appendant index and the offending character. Only reachable through
    /// unchecked construction paths such as the text parser.
    NonBinarySymbol { appendant: usize, symbol: char },
}

impl fmt::Display for CyclicViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclicViolation::EmptyProgram => write!(f, "program has no appendants"),
            CyclicViolation::NonBinarySymbol { appendant, symbol } => {
                write!(
                    f,
                    "appendant {appendant} contains non-binary symbol {symbol:?}"
                )
            }
        }
    }
}

impl CyclicTagSystem {
    pub fn new(appendants: Vec<BinaryWord>) -> Self {
        CyclicTagSystem { appendants }
    }

    pub fn appendants(&self) -> &[BinaryWord] {
        &self.appendants
    }

    /// Number of appendants p.
    pub fn len(&self) -> usize {
        self.appendants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.appendants.is_empty()
    }

    pub fn max_appendant_len(&self) -> usize {
        self.appendants.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Empty iff all invariants hold. Bits are binary by construction, so
    /// the only structural check left is p ≥ 1.
    pub fn validate(&self) -> Vec<CyclicViolation> {
        if self.appendants.is_empty() {
            vec![CyclicViolation::EmptyProgram]
        } else {
            Vec::new()
        }
    }
}

impl fmt::Display for CyclicTagSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .appendants
            .iter()
            .map(|a| {
                if a.is_empty() {
                    "-".to_string()
                } else {
                    format_bits(a)
                }
            })
            .collect();
        write!(f, "{}", rendered.join(","))
    }
}

/// A configuration: marker index in [0, p) plus the binary dataword.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicConfig {
    pub marker: usize,
    pub dataword: BinaryWord,
}

impl CyclicConfig {
    pub fn new(marker: usize, dataword: BinaryWord) -> Self {
        CyclicConfig { marker, dataword }
    }

    pub fn initial(dataword: BinaryWord) -> Self {
        CyclicConfig {
            marker: 0,
            dataword,
        }
    }
}

impl fmt::Display for CyclicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.marker, format_bits(&self.dataword))
    }
}

/// Why a cyclic run stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CyclicHalt {
    /// The dataword is the empty word.
    EmptyDataword,
    CycleDetected {
        first_seen: u64,
        period: u64,
    },
    StepLimitReached,
}

impl fmt::Display for CyclicHalt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclicHalt::EmptyDataword => write!(f, "dataword empty"),
            CyclicHalt::CycleDetected { first_seen, period } => {
                write!(
                    f,
                    "cycle: configuration of step {first_seen} recurs with period {period}"
                )
            }
            CyclicHalt::StepLimitReached => write!(f, "step limit reached"),
        }
    }
}

/// One computation step. Halt-on-empty is checked before stepping, so a
/// trace never contains a post-empty configuration.
pub fn cstep(ts: &CyclicTagSystem, cfg: &CyclicConfig) -> Result<CyclicConfig, CyclicHalt> {
    let p = ts.len();
    debug_assert!(p >= 1);
    if cfg.dataword.is_empty() {
        return Err(CyclicHalt::EmptyDataword);
    }
    let mut dataword = Vec::with_capacity(cfg.dataword.len());
    dataword.extend_from_slice(&cfg.dataword[1..]);
    if cfg.dataword[0] {
        dataword.extend_from_slice(&ts.appendants[cfg.marker]);
    }
    Ok(CyclicConfig {
        marker: (cfg.marker + 1) % p,
        dataword,
    })
}

/// Bounds for [`crun`]; cycle detection mirrors the 2-tag runner.
#[derive(Debug, Clone)]
pub struct CyclicLimits {
    pub max_steps: u64,
    pub detect_cycles: bool,
    pub cycle_cap: usize,
}

impl Default for CyclicLimits {
    fn default() -> Self {
        CyclicLimits {
            max_steps: 1 << 20,
            detect_cycles: true,
            cycle_cap: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicRun {
    pub final_config: CyclicConfig,
    pub steps: u64,
    pub halt: CyclicHalt,
    /// Per-step configurations including the initial one, when requested.
    pub trace: Vec<CyclicConfig>,
}

/// Iterate [`cstep`] from marker 0 until halt, recording a full trace when
/// asked.
pub fn crun(
    ts: &CyclicTagSystem,
    input: &[bool],
    limits: &CyclicLimits,
    with_trace: bool,
) -> CyclicRun {
    let mut marker = 0usize;
    let mut word: VecDeque<bool> = input.iter().copied().collect();
    let p = ts.len();
    let mut steps: u64 = 0;
    let mut trace = Vec::new();
    let mut window = limits
        .detect_cycles
        .then(|| HashWindow::new(limits.cycle_cap));

    let snapshot = |marker: usize, word: &VecDeque<bool>| CyclicConfig {
        marker,
        dataword: word.iter().copied().collect(),
    };
    if with_trace {
        trace.push(snapshot(marker, &word));
    }
    if let Some(w) = window.as_mut() {
        w.observe(config_hash(&(marker, &word)), 0);
    }

    let halt = loop {
        if word.is_empty() {
            break CyclicHalt::EmptyDataword;
        }
        if steps >= limits.max_steps {
            break CyclicHalt::StepLimitReached;
        }
        let head = word.pop_front().expect("checked non-empty");
        if head {
            word.extend(ts.appendants[marker].iter().copied());
        }
        marker = (marker + 1) % p;
        steps += 1;
        if with_trace {
            trace.push(snapshot(marker, &word));
        }
        if let Some(w) = window.as_mut() {
            match w.observe(config_hash(&(marker, &word)), steps) {
                Observation::Fresh => {}
                Observation::Candidate { first_seen } => {
                    if let Some(period) = confirm(ts, input, first_seen, steps) {
                        break CyclicHalt::CycleDetected { first_seen, period };
                    }
                }
                Observation::CapExceeded => {
                    window = None;
                    if let Some(halt) = brent_from(ts, snapshot(marker, &word), steps, limits) {
                        break halt;
                    }
                }
            }
        }
    };

    CyclicRun {
        final_config: snapshot(marker, &word),
        steps,
        halt,
        trace,
    }
}

fn confirm(ts: &CyclicTagSystem, input: &[bool], first_seen: u64, candidate: u64) -> Option<u64> {
    let mut cfg = CyclicConfig::initial(input.to_vec());
    for _ in 0..first_seen {
        cfg = cstep(ts, &cfg).ok()?;
    }
    let entry = cfg.clone();
    for _ in first_seen..candidate {
        cfg = cstep(ts, &cfg).ok()?;
    }
    (cfg == entry).then_some(candidate - first_seen)
}

fn brent_from(
    ts: &CyclicTagSystem,
    start: CyclicConfig,
    base: u64,
    limits: &CyclicLimits,
) -> Option<CyclicHalt> {
    let budget = limits.max_steps.saturating_sub(base);
    crate::cycle::brent(start, |cfg| cstep(ts, cfg).ok(), budget).map(|c| {
        CyclicHalt::CycleDetected {
            first_seen: base + c.entry,
            period: c.period,
        }
    })
}
