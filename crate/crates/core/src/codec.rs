//! The decorated-symbol data model and the bidirectional mapping between
//! cyclic tag configurations and 2-tag datawords.
//!
//! Compiled systems write each simulated bit as a pair of symbols (undotted,
//! dotted), distinguish one pair with a bar (the simulated read head), and
//! embed a block of `a`-pairs whose count — the counter — is a power of two
//! strictly greater than the simulated dataword length. Symbols additionally
//! carry a stage tag sequencing the compiled sub-algorithms, an appendant
//! index, and a transient mark used by the halving sweeps.
//!
//! Canonical text rendering: `base[.|:][~][!]@stage#k` — dot class (`.`
//! dotted, `:` third, undotted bare), `~` bar, `!` mark, stage short name,
//! appendant index. Example: `1.~@pb3#2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclic::BinaryWord;

/// Base glyph of a decorated symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Zero,
    One,
    A,
    Hash,
}

impl Base {
    pub fn bit(b: bool) -> Base {
        if b {
            Base::One
        } else {
            Base::Zero
        }
    }

    pub fn as_bit(self) -> Option<bool> {
        match self {
            Base::Zero => Some(false),
            Base::One => Some(true),
            _ => None,
        }
    }

    fn glyph(self) -> char {
        match self {
            Base::Zero => '0',
            Base::One => '1',
            Base::A => 'a',
            Base::Hash => 'h',
        }
    }
}

/// Position-parity class: undotted (read on odd positions), dotted (even
/// positions), and the auxiliary third class emitted by marking sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dot {
    Plain,
    Dotted,
    Third,
}

/// Stage tags sequencing the compiled construction. Every generated rule
/// maps symbols of one stage to symbols of statically known successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageId {
    /// Decode point between macro-steps; its rules fork on the read bit.
    Checkpoint,
    /// Resolves the fork: 0 routes to PassBar1, 1 to AppendInject.
    Dispatch,
    /// Appends the encoded marked appendant behind the dataword.
    AppendInject,
    /// Counter-halving scan: unmarked a-pairs become triples.
    CounterUpdate1,
    /// Counter-halving mark: every second unmarked a-pair is marked.
    CounterUpdate2,
    /// Data scan: unmarked x-pairs become triples; detects counter 1.
    CounterUpdate3,
    /// Data mark: every second unmarked x-pair is marked, odd ones first.
    CounterUpdate4,
    /// Probe: a lone unmarked x-pair becomes a parity signal.
    CounterUpdate5,
    /// Unmark everything while the parity signal propagates.
    CounterUpdate6,
    /// Case split on the signal: keep or double the counter.
    CounterUpdate7,
    PassBar1,
    PassBar2,
    PassBar3,
    PassBar4,
    PassBar5,
    /// Emits the length-3 barred subword.
    Reposition1,
    /// Discriminates head-left from head-right of the counter.
    Reposition2,
    /// Extra counter pass that places it right of the head.
    Reposition3,
    /// One round mapping appendant index k to (k+1) mod p.
    MarkerInc,
    /// Standalone parity tester stages.
    ParityEntry,
    ParityRound,
    ParityDone,
}

impl StageId {
    pub const ALL: [StageId; 22] = [
        StageId::Checkpoint,
        StageId::Dispatch,
        StageId::AppendInject,
        StageId::CounterUpdate1,
        StageId::CounterUpdate2,
        StageId::CounterUpdate3,
        StageId::CounterUpdate4,
        StageId::CounterUpdate5,
        StageId::CounterUpdate6,
        StageId::CounterUpdate7,
        StageId::PassBar1,
        StageId::PassBar2,
        StageId::PassBar3,
        StageId::PassBar4,
        StageId::PassBar5,
        StageId::Reposition1,
        StageId::Reposition2,
        StageId::Reposition3,
        StageId::MarkerInc,
        StageId::ParityEntry,
        StageId::ParityRound,
        StageId::ParityDone,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            StageId::Checkpoint => "cp",
            StageId::Dispatch => "disp",
            StageId::AppendInject => "inj",
            StageId::CounterUpdate1 => "cu1",
            StageId::CounterUpdate2 => "cu2",
            StageId::CounterUpdate3 => "cu3",
            StageId::CounterUpdate4 => "cu4",
            StageId::CounterUpdate5 => "cu5",
            StageId::CounterUpdate6 => "cu6",
            StageId::CounterUpdate7 => "cu7",
            StageId::PassBar1 => "pb1",
            StageId::PassBar2 => "pb2",
            StageId::PassBar3 => "pb3",
            StageId::PassBar4 => "pb4",
            StageId::PassBar5 => "pb5",
            StageId::Reposition1 => "rp1",
            StageId::Reposition2 => "rp2",
            StageId::Reposition3 => "rp3",
            StageId::MarkerInc => "mk",
            StageId::ParityEntry => "pe",
            StageId::ParityRound => "pr",
            StageId::ParityDone => "pd",
        }
    }

    pub fn from_short_name(s: &str) -> Option<StageId> {
        Some(match s {
            "cp" => StageId::Checkpoint,
            "disp" => StageId::Dispatch,
            "inj" => StageId::AppendInject,
            "cu1" => StageId::CounterUpdate1,
            "cu2" => StageId::CounterUpdate2,
            "cu3" => StageId::CounterUpdate3,
            "cu4" => StageId::CounterUpdate4,
            "cu5" => StageId::CounterUpdate5,
            "cu6" => StageId::CounterUpdate6,
            "cu7" => StageId::CounterUpdate7,
            "pb1" => StageId::PassBar1,
            "pb2" => StageId::PassBar2,
            "pb3" => StageId::PassBar3,
            "pb4" => StageId::PassBar4,
            "pb5" => StageId::PassBar5,
            "rp1" => StageId::Reposition1,
            "rp2" => StageId::Reposition2,
            "rp3" => StageId::Reposition3,
            "mk" => StageId::MarkerInc,
            "pe" => StageId::ParityEntry,
            "pr" => StageId::ParityRound,
            "pd" => StageId::ParityDone,
            _ => return None,
        })
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// One 2-tag alphabet symbol of a compiled system. Equality is exact
/// identity over all six fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedSymbol {
    pub base: Base,
    pub dot: Dot,
    pub barred: bool,
    pub marked: bool,
    pub stage: StageId,
    pub appendant: u16,
}

impl DecoratedSymbol {
    pub fn new(
        base: Base,
        dot: Dot,
        barred: bool,
        marked: bool,
        stage: StageId,
        appendant: u16,
    ) -> Self {
        debug_assert!(
            base != Base::Hash || (dot == Dot::Plain && !barred && !marked),
            "hash symbols carry only stage and appendant index"
        );
        debug_assert!(base != Base::A || !barred, "a-symbols are never barred");
        DecoratedSymbol {
            base,
            dot,
            barred,
            marked,
            stage,
            appendant,
        }
    }

    pub fn hash(stage: StageId, appendant: u16) -> Self {
        DecoratedSymbol::new(Base::Hash, Dot::Plain, false, false, stage, appendant)
    }

    /// Same symbol with a different stage (and optionally index).
    pub fn at(mut self, stage: StageId) -> Self {
        self.stage = stage;
        self
    }
}

impl fmt::Display for DecoratedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base.glyph())?;
        match self.dot {
            Dot::Plain => {}
            Dot::Dotted => write!(f, ".")?,
            Dot::Third => write!(f, ":")?,
        }
        if self.barred {
            write!(f, "~")?;
        }
        if self.marked {
            write!(f, "!")?;
        }
        write!(f, "@{}#{}", self.stage.short_name(), self.appendant)
    }
}

/// Error parsing the canonical symbol rendering.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid symbol token {token:?}: {reason}")]
pub struct SymbolParseError {
    pub token: String,
    pub reason: String,
}

impl FromStr for DecoratedSymbol {
    type Err = SymbolParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| SymbolParseError {
            token: s.to_string(),
            reason: reason.to_string(),
        };
        let mut chars = s.chars();
        let base = match chars.next() {
            Some('0') => Base::Zero,
            Some('1') => Base::One,
            Some('a') => Base::A,
            Some('h') => Base::Hash,
            _ => return Err(fail("expected base glyph 0, 1, a, or h")),
        };
        let rest: String = chars.collect();
        let (deco, tail) = rest.split_once('@').ok_or_else(|| fail("missing @stage"))?;
        let (stage_name, index) = tail.split_once('#').ok_or_else(|| fail("missing #index"))?;
        let stage =
            StageId::from_short_name(stage_name).ok_or_else(|| fail("unknown stage name"))?;
        let appendant: u16 = index.parse().map_err(|_| fail("bad appendant index"))?;
        let mut dot = Dot::Plain;
        let mut barred = false;
        let mut marked = false;
        for c in deco.chars() {
            match c {
                '.' if dot == Dot::Plain && !barred && !marked => dot = Dot::Dotted,
                ':' if dot == Dot::Plain && !barred && !marked => dot = Dot::Third,
                '~' if !barred && !marked => barred = true,
                '!' if !marked => marked = true,
                _ => return Err(fail("bad decoration sequence")),
            }
        }
        if base == Base::Hash && (dot != Dot::Plain || barred || marked) {
            return Err(fail("hash symbols take no decorations"));
        }
        if base == Base::A && barred {
            return Err(fail("a-symbols are never barred"));
        }
        Ok(DecoratedSymbol::new(
            base, dot, barred, marked, stage, appendant,
        ))
    }
}

impl Serialize for DecoratedSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DecoratedSymbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which side of the counter block the barred pair sits on in the linear
/// word. `Right` is the transient "jumped over the counter" layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BarSide {
    Left,
    Right,
}

impl fmt::Display for BarSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BarSide::Left => "left",
            BarSide::Right => "right",
        })
    }
}

/// The cyclic-configuration view of a well-formed encoded word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedView {
    pub dataword: BinaryWord,
    pub appendant: u16,
    pub counter: u64,
    /// Number of x-pairs between the barred pair and the counter block
    /// (reported as the dataword length for the
    /// jumped layout, which reads the same cyclically).
    pub cut: usize,
    pub stage: StageId,
    pub bar_side: BarSide,
}

impl DecodedView {
    /// True when the view is a checkpoint: canonical layout at the
    /// checkpoint stage.
    pub fn is_checkpoint(&self) -> bool {
        self.stage == StageId::Checkpoint && self.bar_side == BarSide::Left
    }
}

/// First violated invariant found while decoding.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NotACheckpoint {
    #[error("empty word")]
    EmptyWord,
    #[error("mixed stages")]
    MixedStages,
    #[error("mixed appendant indices")]
    MixedIndices,
    #[error("hash symbol present")]
    UnexpectedHash,
    #[error("marked symbol present")]
    MarkedSymbol,
    #[error("third-dot symbol present")]
    TransientShape,
    #[error("odd-length word leaves a dangling half pair")]
    DanglingHalfPair,
    #[error("pair at symbol offset {0} is not an (undotted, dotted) twin")]
    MalformedPair(usize),
    #[error("no barred pair")]
    NoHead,
    #[error("more than one barred pair")]
    MultipleHeads,
    #[error("no counter block")]
    NoCounter,
    #[error("counter block is not contiguous")]
    SplitCounter,
    #[error("barred pair is neither first nor directly after a leading counter")]
    BarMisplaced,
    #[error("counter {counter} is not a power of two")]
    CounterNotPowerOfTwo { counter: u64 },
    #[error("counter {counter} is not greater than dataword tail length {l}")]
    CounterTooSmall { counter: u64, l: usize },
}

/// Errors constructing the input encoding.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("input dataword is empty")]
    EmptyInput,
    #[error("program has no appendants")]
    EmptyProgram,
}

fn pair(base: Base, barred: bool, stage: StageId, k: u16) -> [DecoratedSymbol; 2] {
    [
        DecoratedSymbol::new(base, Dot::Plain, barred, false, stage, k),
        DecoratedSymbol::new(base, Dot::Dotted, barred, false, stage, k),
    ]
}

/// Encode a cyclic input dataword: one pair per bit with the first pair
/// barred, then 2^⌈log₂|w|⌉ counter pairs, all at the checkpoint stage with
/// appendant index 0.
pub fn encode_input(w: &[bool], p: usize) -> Result<Vec<DecoratedSymbol>, EncodeError> {
    if w.is_empty() {
        return Err(EncodeError::EmptyInput);
    }
    if p == 0 {
        return Err(EncodeError::EmptyProgram);
    }
    let counter_pairs = w.len().next_power_of_two();
    let mut out = Vec::with_capacity(2 * (w.len() + counter_pairs));
    for (i, &bit) in w.iter().enumerate() {
        out.extend(pair(Base::bit(bit), i == 0, StageId::Checkpoint, 0));
    }
    for _ in 0..counter_pairs {
        out.extend(pair(Base::A, false, StageId::Checkpoint, 0));
    }
    Ok(out)
}

/// Decode an encoded word back into its cyclic-configuration view,
/// reporting the first violated invariant otherwise. Accepts the canonical
/// layout (barred pair first) and the transient jumped layout (leading
/// counter, then the barred pair).
pub fn decode(word: &[DecoratedSymbol]) -> Result<DecodedView, NotACheckpoint> {
    let first = word.first().ok_or(NotACheckpoint::EmptyWord)?;
    let stage = first.stage;
    let k = first.appendant;
    for sym in word {
        if sym.stage != stage {
            return Err(NotACheckpoint::MixedStages);
        }
        if sym.appendant != k {
            return Err(NotACheckpoint::MixedIndices);
        }
        if sym.base == Base::Hash {
            return Err(NotACheckpoint::UnexpectedHash);
        }
        if sym.marked {
            return Err(NotACheckpoint::MarkedSymbol);
        }
        if sym.dot == Dot::Third {
            return Err(NotACheckpoint::TransientShape);
        }
    }
    if !word.len().is_multiple_of(2) {
        return Err(NotACheckpoint::DanglingHalfPair);
    }

    // (base, barred) per pair.
    let mut pairs = Vec::with_capacity(word.len() / 2);
    for (j, chunk) in word.chunks_exact(2).enumerate() {
        let (lo, hi) = (&chunk[0], &chunk[1]);
        let twin = lo.dot == Dot::Plain
            && hi.dot == Dot::Dotted
            && lo.base == hi.base
            && lo.barred == hi.barred;
        if !twin {
            return Err(NotACheckpoint::MalformedPair(2 * j));
        }
        pairs.push((lo.base, lo.barred));
    }

    let heads: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (_, b))| *b)
        .map(|(j, _)| j)
        .collect();
    let head = match heads.as_slice() {
        [] => return Err(NotACheckpoint::NoHead),
        [one] => *one,
        _ => return Err(NotACheckpoint::MultipleHeads),
    };

    let a_indices: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (b, _))| *b == Base::A)
        .map(|(j, _)| j)
        .collect();
    if a_indices.is_empty() {
        return Err(NotACheckpoint::NoCounter);
    }
    let a_start = a_indices[0];
    let a_len = a_indices.len();
    if a_indices != (a_start..a_start + a_len).collect::<Vec<_>>() {
        return Err(NotACheckpoint::SplitCounter);
    }

    let (bar_side, x_order): (BarSide, Vec<usize>) = if head == 0 {
        // Canonical layout: bar first, counter embedded.
        let xs = (1..pairs.len())
            .filter(|j| !a_indices.contains(j))
            .collect();
        (BarSide::Left, xs)
    } else if a_start == 0 && head == a_len {
        // Jumped layout: counter, then the bar, then the rest.
        let xs = (head + 1..pairs.len()).collect();
        (BarSide::Right, xs)
    } else {
        return Err(NotACheckpoint::BarMisplaced);
    };

    let mut dataword = Vec::with_capacity(1 + x_order.len());
    dataword.push(pairs[head].0.as_bit().expect("bar is on a bit pair"));
    for j in x_order {
        dataword.push(pairs[j].0.as_bit().expect("a-run is contiguous"));
    }

    let cut = match bar_side {
        BarSide::Left => a_start - 1,
        BarSide::Right => dataword.len() - 1,
    };
    let counter = a_len as u64;
    let l = dataword.len() - 1;
    if !counter.is_power_of_two() {
        return Err(NotACheckpoint::CounterNotPowerOfTwo { counter });
    }
    if counter <= l as u64 {
        return Err(NotACheckpoint::CounterTooSmall { counter, l });
    }

    Ok(DecodedView {
        dataword,
        appendant: k,
        counter,
        cut,
        stage,
        bar_side,
    })
}

/// Exact count of counter pairs in a well-formed encoded word.
pub fn counter_value(word: &[DecoratedSymbol]) -> Result<u64, NotACheckpoint> {
    decode(word).map(|v| v.counter)
}

/// Side of the barred pair relative to the counter block.
pub fn bar_side(word: &[DecoratedSymbol]) -> Result<BarSide, NotACheckpoint> {
    decode(word).map(|v| v.bar_side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::parse_bits;

    #[test]
    fn encode_worked_example_input() {
        let w = parse_bits("011").unwrap();
        let enc = encode_input(&w, 3).unwrap();
        // 3 bit pairs + 2^⌈log₂3⌉ = 4 counter pairs.
        assert_eq!(enc.len(), 2 * (3 + 4));
        assert!(enc[0].barred && enc[1].barred);
        assert_eq!(enc[0].base, Base::Zero);
        assert_eq!(enc[2].base, Base::One);
        assert!(!enc[2].barred);
        assert_eq!(enc[enc.len() - 1].base, Base::A);
    }

    #[test]
    fn encode_counter_sizes() {
        for (input, pairs) in [
            ("1", 1usize),
            ("11", 2),
            ("011", 4),
            ("1101", 4),
            ("11010", 8),
        ] {
            let enc = encode_input(&parse_bits(input).unwrap(), 1).unwrap();
            let a_count = enc.iter().filter(|s| s.base == Base::A).count() / 2;
            assert_eq!(a_count, pairs, "counter pairs for {input:?}");
        }
    }

    #[test]
    fn encode_five_bit_pair_pattern() {
        // 11010: barred pair, four plain pairs, eight counter pairs.
        let enc = encode_input(&parse_bits("11010").unwrap(), 1).unwrap();
        let rendered: Vec<String> = enc.iter().map(|s| s.to_string()).collect();
        let want_head = [
            "1~@cp#0", "1.~@cp#0", "1@cp#0", "1.@cp#0", "0@cp#0", "0.@cp#0", "1@cp#0", "1.@cp#0",
            "0@cp#0", "0.@cp#0",
        ];
        assert_eq!(&rendered[..10], want_head);
        assert!(rendered[10..]
            .iter()
            .all(|s| s == "a@cp#0" || s == "a.@cp#0"));
        assert_eq!(rendered.len(), 10 + 16);
    }

    #[test]
    fn encode_rejects_empty() {
        assert_eq!(encode_input(&[], 3), Err(EncodeError::EmptyInput));
    }

    #[test]
    fn decode_round_trips_encode() {
        let w = parse_bits("011").unwrap();
        let enc = encode_input(&w, 3).unwrap();
        let view = decode(&enc).unwrap();
        assert_eq!(view.dataword, w);
        assert_eq!(view.appendant, 0);
        assert_eq!(view.counter, 4);
        assert_eq!(view.cut, 2);
        assert_eq!(view.bar_side, BarSide::Left);
        assert!(view.is_checkpoint());
    }

    #[test]
    fn decode_rejects_small_counter() {
        // 5 bits with only a 4-pair counter: counter ≤ l.
        let mut word = Vec::new();
        for (i, bit) in [true, false, true, true, false].iter().enumerate() {
            word.extend(pair(Base::bit(*bit), i == 0, StageId::Checkpoint, 0));
        }
        for _ in 0..4 {
            word.extend(pair(Base::A, false, StageId::Checkpoint, 0));
        }
        assert_eq!(
            decode(&word),
            Err(NotACheckpoint::CounterTooSmall { counter: 4, l: 4 })
        );
    }

    #[test]
    fn decode_rejects_two_heads() {
        let mut word = encode_input(&parse_bits("011").unwrap(), 3).unwrap();
        word[2].barred = true;
        word[3].barred = true;
        assert_eq!(decode(&word), Err(NotACheckpoint::MultipleHeads));
    }

    #[test]
    fn decode_rejects_split_counter() {
        let mut word = Vec::new();
        word.extend(pair(Base::One, true, StageId::Checkpoint, 0));
        word.extend(pair(Base::A, false, StageId::Checkpoint, 0));
        word.extend(pair(Base::One, false, StageId::Checkpoint, 0));
        word.extend(pair(Base::A, false, StageId::Checkpoint, 0));
        assert_eq!(decode(&word), Err(NotACheckpoint::SplitCounter));
    }

    #[test]
    fn decode_accepts_jumped_layout() {
        // counter(2), bar, one x-pair: decodes with the bar on the right.
        let mut word = Vec::new();
        word.extend(pair(Base::A, false, StageId::Reposition1, 1));
        word.extend(pair(Base::A, false, StageId::Reposition1, 1));
        word.extend(pair(Base::One, true, StageId::Reposition1, 1));
        word.extend(pair(Base::Zero, false, StageId::Reposition1, 1));
        let view = decode(&word).unwrap();
        assert_eq!(view.bar_side, BarSide::Right);
        assert_eq!(view.dataword, parse_bits("10").unwrap());
        assert_eq!(view.counter, 2);
        assert!(!view.is_checkpoint());
    }

    #[test]
    fn counter_value_and_bar_side_ops() {
        let enc = encode_input(&parse_bits("011").unwrap(), 3).unwrap();
        assert_eq!(counter_value(&enc), Ok(4));
        assert_eq!(bar_side(&enc), Ok(BarSide::Left));
        let mut split = enc.clone();
        split.swap(4, 8);
        assert!(counter_value(&split).is_err());
    }

    #[test]
    fn symbol_rendering_round_trips() {
        let cases = [
            DecoratedSymbol::new(Base::One, Dot::Dotted, true, false, StageId::PassBar3, 2),
            DecoratedSymbol::new(
                Base::A,
                Dot::Third,
                false,
                false,
                StageId::CounterUpdate2,
                0,
            ),
            DecoratedSymbol::new(Base::Zero, Dot::Plain, false, true, StageId::MarkerInc, 11),
            DecoratedSymbol::hash(StageId::Dispatch, 5),
        ];
        for sym in cases {
            let text = sym.to_string();
            let back: DecoratedSymbol = text.parse().unwrap();
            assert_eq!(back, sym, "through {text}");
        }
        assert_eq!(cases[0].to_string(), "1.~@pb3#2",);
    }

    #[test]
    fn symbol_parse_rejects_garbage() {
        for bad in [
            "",
            "2@cp#0",
            "1@cp",
            "1@nope#0",
            "a~@cp#0",
            "h.@cp#0",
            "1.!~@cp#0",
        ] {
            assert!(bad.parse::<DecoratedSymbol>().is_err(), "{bad:?} parsed");
        }
    }
}
