//! Generation of the complete 2-tag rule table simulating a given cyclic
//! tag system, plus the standalone six-rule parity tester.
//!
//! One cyclic computation step is simulated by a fixed macro-cycle of
//! stages: Checkpoint → Dispatch → [AppendInject → CounterUpdate1..7]? →
//! PassBar1..5 → Reposition1..3 → MarkerInc → Checkpoint. The checkpoint
//! rules set the read parity even exactly when the read bit is 1, which
//! routes the next pass into the append pipeline; a 0 skips straight to the
//! bar-passing stages, since deletion alone cannot invalidate the counter.
//!
//! Control flow relies on three queue effects:
//!
//! - a three-symbol group (pair plus a third-dot trailer) shifts every read
//!   behind it by one position, turning undotted reads dotted;
//! - an `h` appended at the head of a pass's output is consumed as the
//!   second symbol of the pass's final deletion, restoring odd parity; it
//!   is never the read symbol in a correct table;
//! - symbols left one stage behind their successors get read one extra
//!   time, which rotates them to the back of the word. The appendant
//!   injection and the head reposition both use this.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::codec::{Base, DecoratedSymbol, Dot, StageId};
use crate::cyclic::{CyclicTagSystem, CyclicViolation};
use crate::tag::TagSystem;

/// A generated rule.
pub type Rule = (DecoratedSymbol, Vec<DecoratedSymbol>);

/// Which part of the construction a rule implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleFamily {
    Dispatch,
    AppendInject,
    CounterUpdate,
    PassBar,
    Reposition,
    MarkerInc,
}

impl fmt::Display for RuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleFamily::Dispatch => "dispatch",
            RuleFamily::AppendInject => "append-inject",
            RuleFamily::CounterUpdate => "counter-update",
            RuleFamily::PassBar => "pass-bar",
            RuleFamily::Reposition => "reposition",
            RuleFamily::MarkerInc => "marker-inc",
        })
    }
}

const BITS: [Base; 2] = [Base::Zero, Base::One];

fn s(base: Base, dot: Dot, barred: bool, marked: bool, stage: StageId, k: u16) -> DecoratedSymbol {
    DecoratedSymbol::new(base, dot, barred, marked, stage, k)
}

/// The (undotted, dotted) pair of one encoded unit.
fn pair2(base: Base, barred: bool, marked: bool, stage: StageId, k: u16) -> Vec<DecoratedSymbol> {
    vec![
        s(base, Dot::Plain, barred, marked, stage, k),
        s(base, Dot::Dotted, barred, marked, stage, k),
    ]
}

/// Pair plus the third-dot trailer: the one-position shifter.
fn trio(base: Base, barred: bool, stage: StageId, k: u16) -> Vec<DecoratedSymbol> {
    vec![
        s(base, Dot::Plain, barred, false, stage, k),
        s(base, Dot::Dotted, barred, false, stage, k),
        s(base, Dot::Third, barred, false, stage, k),
    ]
}

/// Hash, then a barred pair: the shape of every parity restore.
fn hash_then_bar(base: Base, stage: StageId, k: u16) -> Vec<DecoratedSymbol> {
    let mut rhs = vec![DecoratedSymbol::hash(stage, k)];
    rhs.extend(pair2(base, true, false, stage, k));
    rhs
}

/// Checkpoint and fork-resolution rules. At the checkpoint the read bit
/// decides the macro route; the bar's rule alone carries the decision, as a
/// pair (0: reads behind it stay undotted) or a trio (1: reads turn
/// dotted). The dispatch stage then maps undotted traffic to the bar
/// passer and dotted traffic to the append pipeline.
pub fn gen_dispatch_rules(p: usize) -> Vec<Rule> {
    let mut rules = Vec::new();
    for k in 0..p as u16 {
        use StageId::{AppendInject as INJ, Checkpoint as CP, Dispatch as D, PassBar1 as PB1};
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, false, false, CP, k),
                pair2(x, false, false, D, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, CP, k),
            pair2(Base::A, false, false, D, k),
        ));
        rules.push((
            s(Base::Zero, Dot::Plain, true, false, CP, k),
            pair2(Base::Zero, true, false, D, k),
        ));
        rules.push((
            s(Base::One, Dot::Plain, true, false, CP, k),
            trio(Base::One, true, D, k),
        ));

        // 0-branch: everything is read undotted.
        rules.push((
            s(Base::Zero, Dot::Plain, true, false, D, k),
            pair2(Base::Zero, true, false, PB1, k),
        ));
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, false, false, D, k),
                pair2(x, false, false, PB1, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, D, k),
            pair2(Base::A, false, false, PB1, k),
        ));

        // 1-branch: the trio shifted everything behind the bar to dotted.
        rules.push((
            s(Base::One, Dot::Plain, true, false, D, k),
            hash_then_bar(Base::One, INJ, k),
        ));
        rules.push((s(Base::One, Dot::Third, true, false, D, k), Vec::new()));
        for x in BITS {
            rules.push((
                s(x, Dot::Dotted, false, false, D, k),
                pair2(x, false, false, INJ, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Dotted, false, false, D, k),
            pair2(Base::A, false, false, INJ, k),
        ));
    }
    rules
}

/// Appendant injection and the counter-update stages that follow it.
///
/// The injection rule emits the encoded appendant one stage behind the new
/// barred pair, so one rotation later the appendant sits at the back of the
/// word. The update stages then repeatedly halve the counter (marking even
/// a-pairs) while halving the unmarked data count (marking odd x-pairs,
/// realizing ‖w_k‖ = ⌊‖w_{k-1}‖/2⌋). When the counter reaches one, at most
/// one unmarked x-pair is left; probing it decides whether the appended
/// word pushed the length to the counter or past it, in which case every
/// counter pair is emitted twice.
pub fn gen_append_rules(program: &CyclicTagSystem) -> Vec<Rule> {
    let p = program.len();
    let mut rules = Vec::new();
    for k in 0..p as u16 {
        use StageId::{
            AppendInject as INJ, CounterUpdate1 as C1, CounterUpdate2 as C2, CounterUpdate3 as C3,
            CounterUpdate4 as C4, CounterUpdate5 as C5, CounterUpdate6 as C6, CounterUpdate7 as C7,
            PassBar1 as PB1,
        };

        // Injection: append the encoded appendant, then the new bar one
        // stage ahead.
        let mut inject = Vec::new();
        for &bit in &program.appendants()[k as usize] {
            inject.extend(pair2(Base::bit(bit), false, false, INJ, k));
        }
        inject.extend(pair2(Base::One, true, false, C1, k));
        rules.push((s(Base::One, Dot::Plain, true, false, INJ, k), inject));
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, false, false, INJ, k),
                pair2(x, false, false, C1, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, INJ, k),
            pair2(Base::A, false, false, C1, k),
        ));

        // Stage 1: unmarked a-pairs become trios. Dotted entry is the
        // parity restore after an odd data-marking pass.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C1, k),
                pair2(x, true, false, C2, k),
            ));
            rules.push((
                s(x, Dot::Dotted, true, false, C1, k),
                hash_then_bar(x, C2, k),
            ));
            for dot in [Dot::Plain, Dot::Dotted] {
                rules.push((
                    s(x, dot, false, false, C1, k),
                    pair2(x, false, false, C2, k),
                ));
                rules.push((s(x, dot, false, true, C1, k), pair2(x, false, true, C2, k)));
            }
        }
        for dot in [Dot::Plain, Dot::Dotted] {
            rules.push((
                s(Base::A, dot, false, false, C1, k),
                trio(Base::A, false, C2, k),
            ));
            rules.push((
                s(Base::A, dot, false, true, C1, k),
                pair2(Base::A, false, true, C2, k),
            ));
        }

        // Stage 2: trios annihilate; every second unmarked a-pair is read
        // dotted and marked.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C2, k),
                pair2(x, true, false, C3, k),
            ));
            for dot in [Dot::Plain, Dot::Dotted] {
                rules.push((
                    s(x, dot, false, false, C2, k),
                    pair2(x, false, false, C3, k),
                ));
                rules.push((s(x, dot, false, true, C2, k), pair2(x, false, true, C3, k)));
            }
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, C2, k),
            pair2(Base::A, false, false, C3, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, false, C2, k),
            pair2(Base::A, false, true, C3, k),
        ));
        rules.push((s(Base::A, Dot::Third, false, false, C2, k), Vec::new()));
        rules.push((
            s(Base::A, Dot::Plain, false, true, C2, k),
            pair2(Base::A, false, true, C3, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, true, C2, k),
            pair2(Base::A, false, true, C3, k),
        ));

        // Stage 3: unmarked x-pairs become trios. A dotted entry means the
        // counter just reached one: divert to the probe stages, keeping
        // marks.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C3, k),
                pair2(x, true, false, C4, k),
            ));
            rules.push((s(x, Dot::Plain, false, false, C3, k), trio(x, false, C4, k)));
            rules.push((
                s(x, Dot::Plain, false, true, C3, k),
                pair2(x, false, true, C4, k),
            ));
            rules.push((
                s(x, Dot::Dotted, true, false, C3, k),
                hash_then_bar(x, C5, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, false, C3, k),
                pair2(x, false, false, C5, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, true, C3, k),
                pair2(x, false, true, C5, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, C3, k),
            pair2(Base::A, false, false, C4, k),
        ));
        rules.push((
            s(Base::A, Dot::Plain, false, true, C3, k),
            pair2(Base::A, false, true, C4, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, false, C3, k),
            pair2(Base::A, false, false, C5, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, true, C3, k),
            pair2(Base::A, false, true, C5, k),
        ));

        // Stage 4: trios annihilate; odd-numbered unmarked x-pairs (read
        // undotted) are marked, even-numbered ones (read dotted) survive.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C4, k),
                pair2(x, true, false, C1, k),
            ));
            rules.push((
                s(x, Dot::Plain, false, false, C4, k),
                pair2(x, false, true, C1, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, false, C4, k),
                pair2(x, false, false, C1, k),
            ));
            rules.push((s(x, Dot::Third, false, false, C4, k), Vec::new()));
            rules.push((
                s(x, Dot::Plain, false, true, C4, k),
                pair2(x, false, true, C1, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, true, C4, k),
                pair2(x, false, true, C1, k),
            ));
        }
        for dot in [Dot::Plain, Dot::Dotted] {
            rules.push((
                s(Base::A, dot, false, false, C4, k),
                pair2(Base::A, false, false, C1, k),
            ));
            rules.push((
                s(Base::A, dot, false, true, C4, k),
                pair2(Base::A, false, true, C1, k),
            ));
        }

        // Stage 5 (probe): the lone unmarked x-pair, if any, becomes a trio
        // whose shift survives to the next stage boundary. All a-marks are
        // dropped here; x-marks are still needed to keep the probe unique.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C5, k),
                pair2(x, true, false, C6, k),
            ));
            rules.push((s(x, Dot::Plain, false, false, C5, k), trio(x, false, C6, k)));
            rules.push((
                s(x, Dot::Plain, false, true, C5, k),
                pair2(x, false, true, C6, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, C5, k),
            pair2(Base::A, false, false, C6, k),
        ));
        rules.push((
            s(Base::A, Dot::Plain, false, true, C5, k),
            pair2(Base::A, false, false, C6, k),
        ));

        // Stage 6: annihilate the probe trio, unmark the data.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C6, k),
                pair2(x, true, false, C7, k),
            ));
            rules.push((
                s(x, Dot::Plain, false, false, C6, k),
                pair2(x, false, false, C7, k),
            ));
            rules.push((s(x, Dot::Third, false, false, C6, k), Vec::new()));
            rules.push((
                s(x, Dot::Plain, false, true, C6, k),
                pair2(x, false, false, C7, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, true, C6, k),
                pair2(x, false, false, C7, k),
            ));
        }
        for dot in [Dot::Plain, Dot::Dotted] {
            rules.push((
                s(Base::A, dot, false, false, C6, k),
                pair2(Base::A, false, false, C7, k),
            ));
        }

        // Stage 7: reading the bar undotted means the counter still
        // exceeds the new length; dotted means it no longer does, so every
        // counter pair doubles.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, C7, k),
                pair2(x, true, false, PB1, k),
            ));
            rules.push((
                s(x, Dot::Plain, false, false, C7, k),
                pair2(x, false, false, PB1, k),
            ));
            rules.push((
                s(x, Dot::Dotted, true, false, C7, k),
                hash_then_bar(x, PB1, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, false, C7, k),
                pair2(x, false, false, PB1, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, C7, k),
            pair2(Base::A, false, false, PB1, k),
        ));
        let mut doubled = pair2(Base::A, false, false, PB1, k);
        doubled.extend(pair2(Base::A, false, false, PB1, k));
        rules.push((s(Base::A, Dot::Dotted, false, false, C7, k), doubled));
    }
    rules
}

/// The five bar-passing stages. Each iteration compresses unmarked x-pairs
/// to trios and marks the even-numbered ones (stages 1–3), then does the
/// same to the counter pairs (stages 4–5), halving the counter. When the
/// counter reaches one, stage 4's output has odd length for the first
/// time, stage 5's spill flips the parity, and stage 1's dotted rules
/// delete the old head and bar the unique unmarked x-pair.
pub fn gen_passbar_rules(p: usize) -> Vec<Rule> {
    let mut rules = Vec::new();
    for k in 0..p as u16 {
        use StageId::{
            PassBar1 as P1, PassBar2 as P2, PassBar3 as P3, PassBar4 as P4, PassBar5 as P5,
            Reposition1 as R1,
        };

        // Stage 1, undotted: compress unmarked x-pairs.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, P1, k),
                pair2(x, true, false, P2, k),
            ));
            rules.push((s(x, Dot::Plain, false, false, P1, k), trio(x, false, P2, k)));
            rules.push((
                s(x, Dot::Plain, false, true, P1, k),
                pair2(x, false, true, P2, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, P1, k),
            pair2(Base::A, false, false, P2, k),
        ));
        rules.push((
            s(Base::A, Dot::Plain, false, true, P1, k),
            pair2(Base::A, false, true, P2, k),
        ));
        // Stage 1, dotted: the detection round. The old head dies, the
        // unique unmarked x-pair becomes the new head, marks drop.
        for x in BITS {
            rules.push((
                s(x, Dot::Dotted, true, false, P1, k),
                vec![DecoratedSymbol::hash(R1, k)],
            ));
            rules.push((
                s(x, Dot::Dotted, false, false, P1, k),
                pair2(x, true, false, R1, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, true, P1, k),
                pair2(x, false, false, R1, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Dotted, false, false, P1, k),
            pair2(Base::A, false, false, R1, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, true, P1, k),
            pair2(Base::A, false, false, R1, k),
        ));

        // Stage 2: trios annihilate; even-numbered unmarked x-pairs are
        // read dotted and marked.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, P2, k),
                pair2(x, true, false, P3, k),
            ));
            rules.push((
                s(x, Dot::Plain, false, false, P2, k),
                pair2(x, false, false, P3, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, false, P2, k),
                pair2(x, false, true, P3, k),
            ));
            rules.push((s(x, Dot::Third, false, false, P2, k), Vec::new()));
            rules.push((
                s(x, Dot::Plain, false, true, P2, k),
                pair2(x, false, true, P3, k),
            ));
            rules.push((
                s(x, Dot::Dotted, false, true, P2, k),
                pair2(x, false, true, P3, k),
            ));
        }
        for dot in [Dot::Plain, Dot::Dotted] {
            rules.push((
                s(Base::A, dot, false, false, P2, k),
                pair2(Base::A, false, false, P3, k),
            ));
            rules.push((
                s(Base::A, dot, false, true, P2, k),
                pair2(Base::A, false, true, P3, k),
            ));
        }

        // Stage 3: parity restore before the counter stages.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, P3, k),
                pair2(x, true, false, P4, k),
            ));
            rules.push((
                s(x, Dot::Dotted, true, false, P3, k),
                hash_then_bar(x, P4, k),
            ));
            for dot in [Dot::Plain, Dot::Dotted] {
                rules.push((
                    s(x, dot, false, false, P3, k),
                    pair2(x, false, false, P4, k),
                ));
                rules.push((s(x, dot, false, true, P3, k), pair2(x, false, true, P4, k)));
            }
        }
        for dot in [Dot::Plain, Dot::Dotted] {
            rules.push((
                s(Base::A, dot, false, false, P3, k),
                pair2(Base::A, false, false, P4, k),
            ));
            rules.push((
                s(Base::A, dot, false, true, P3, k),
                pair2(Base::A, false, true, P4, k),
            ));
        }

        // Stage 4: compress unmarked a-pairs.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, P4, k),
                pair2(x, true, false, P5, k),
            ));
            rules.push((
                s(x, Dot::Plain, false, false, P4, k),
                pair2(x, false, false, P5, k),
            ));
            rules.push((
                s(x, Dot::Plain, false, true, P4, k),
                pair2(x, false, true, P5, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, P4, k),
            trio(Base::A, false, P5, k),
        ));
        rules.push((
            s(Base::A, Dot::Plain, false, true, P4, k),
            pair2(Base::A, false, true, P5, k),
        ));

        // Stage 5: halve the counter, loop to stage 1.
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, P5, k),
                pair2(x, true, false, P1, k),
            ));
            for dot in [Dot::Plain, Dot::Dotted] {
                rules.push((
                    s(x, dot, false, false, P5, k),
                    pair2(x, false, false, P1, k),
                ));
                rules.push((s(x, dot, false, true, P5, k), pair2(x, false, true, P1, k)));
            }
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, P5, k),
            pair2(Base::A, false, false, P1, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, false, P5, k),
            pair2(Base::A, false, true, P1, k),
        ));
        rules.push((s(Base::A, Dot::Third, false, false, P5, k), Vec::new()));
        rules.push((
            s(Base::A, Dot::Plain, false, true, P5, k),
            pair2(Base::A, false, true, P1, k),
        ));
        rules.push((
            s(Base::A, Dot::Dotted, false, true, P5, k),
            pair2(Base::A, false, true, P1, k),
        ));
    }
    rules
}

/// Head reposition. One pass emits a length-3 barred subword; in the next,
/// a head left of the counter reads the counter dotted and one restore
/// finishes, while a head right of the counter reads it undotted first and
/// sends it through one extra pass, placing it behind the head.
pub fn gen_reposition_rules(p: usize) -> Vec<Rule> {
    let mut rules = Vec::new();
    for k in 0..p as u16 {
        use StageId::{MarkerInc as M, Reposition1 as R1, Reposition2 as R2, Reposition3 as R3};
        for x in BITS {
            rules.push((s(x, Dot::Plain, true, false, R1, k), trio(x, true, R2, k)));
            rules.push((
                s(x, Dot::Plain, false, false, R1, k),
                pair2(x, false, false, R2, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, R1, k),
            pair2(Base::A, false, false, R2, k),
        ));

        for x in BITS {
            rules.push((s(x, Dot::Plain, true, false, R2, k), hash_then_bar(x, M, k)));
            rules.push((s(x, Dot::Third, true, false, R2, k), Vec::new()));
            rules.push((
                s(x, Dot::Dotted, false, false, R2, k),
                pair2(x, false, false, M, k),
            ));
        }
        rules.push((
            s(Base::A, Dot::Dotted, false, false, R2, k),
            pair2(Base::A, false, false, M, k),
        ));
        rules.push((
            s(Base::A, Dot::Plain, false, false, R2, k),
            pair2(Base::A, false, false, R3, k),
        ));

        rules.push((
            s(Base::A, Dot::Dotted, false, false, R3, k),
            pair2(Base::A, false, false, M, k),
        ));
    }
    rules
}

/// Marker increment: one pass relabels every symbol's appendant index to
/// (k+1) mod p and re-enters the checkpoint stage.
pub fn gen_marker_rules(p: usize) -> Vec<Rule> {
    let mut rules = Vec::new();
    for k in 0..p as u16 {
        let next = ((k as usize + 1) % p) as u16;
        use StageId::{Checkpoint as CP, MarkerInc as M};
        for x in BITS {
            rules.push((
                s(x, Dot::Plain, true, false, M, k),
                pair2(x, true, false, CP, next),
            ));
            rules.push((
                s(x, Dot::Plain, false, false, M, k),
                pair2(x, false, false, CP, next),
            ));
        }
        rules.push((
            s(Base::A, Dot::Plain, false, false, M, k),
            pair2(Base::A, false, false, CP, next),
        ));
    }
    rules
}

/// The six-rule parity tester. On a word of the form "barred pair, then
/// plain bits" it halts in exactly ⌊|w|/2⌋+1 steps, leaving a single
/// dotted barred symbol when |w| is odd and a single plain symbol when |w|
/// is even.
pub fn gen_parity_tester() -> TagSystem<DecoratedSymbol> {
    use StageId::{ParityDone as PD, ParityEntry as PE, ParityRound as PR};
    let mut rules: Vec<Rule> = Vec::new();
    for x in BITS {
        rules.push((
            s(x, Dot::Plain, true, false, PE, 0),
            pair2(x, true, false, PR, 0),
        ));
        rules.push((s(x, Dot::Plain, false, false, PE, 0), Vec::new()));
        rules.push((
            s(x, Dot::Plain, true, false, PR, 0),
            vec![s(x, Dot::Plain, false, false, PD, 0)],
        ));
    }
    TagSystem::from_rules(rules)
}

/// Encode a bit string for the parity tester: a barred pair for the first
/// bit, then one plain symbol per remaining bit. |encodeds| = |bits| + 1.
pub fn parity_input(bits: &[bool]) -> Vec<DecoratedSymbol> {
    assert!(
        !bits.is_empty(),
        "parity tester input needs at least one bit"
    );
    let mut word = pair2(Base::bit(bits[0]), true, false, StageId::ParityEntry, 0);
    for &b in &bits[1..] {
        word.push(s(
            Base::bit(b),
            Dot::Plain,
            false,
            false,
            StageId::ParityEntry,
            0,
        ));
    }
    word
}

/// Output class of a finished parity-tester run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityVerdict {
    Odd,
    Even,
}

/// Classify the tester's final word, if it is a well-formed verdict.
pub fn parity_verdict(word: &[DecoratedSymbol]) -> Option<ParityVerdict> {
    match word {
        [sym] if sym.stage == StageId::ParityRound && sym.barred && sym.dot == Dot::Dotted => {
            Some(ParityVerdict::Odd)
        }
        [sym] if sym.stage == StageId::ParityDone && !sym.barred && sym.dot == Dot::Plain => {
            Some(ParityVerdict::Even)
        }
        _ => None,
    }
}

/// Compilation failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("invalid cyclic program: {0:?}")]
    InvalidProgram(Vec<CyclicViolation>),
    #[error("program has {0} appendants, more than the supported 65535")]
    TooManyAppendants(usize),
    #[error("internal: duplicate rule for {0}")]
    DuplicateRule(DecoratedSymbol),
    #[error("internal: rule families are not closed over stage {0}")]
    StageLeak(StageId),
}

/// A compiled system: the tag system plus the metadata the codec and the
/// harness need.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    tag: TagSystem<DecoratedSymbol>,
    p: usize,
    max_appendant_len: usize,
    q: usize,
    stage_graph: BTreeMap<StageId, BTreeSet<StageId>>,
    provenance: BTreeMap<DecoratedSymbol, RuleFamily>,
}

/// Serializable sidecar describing a compiled system.
#[derive(Debug, Clone, Serialize)]
pub struct CompiledMeta {
    pub p: usize,
    pub q: usize,
    pub alphabet_size: usize,
    pub rule_count: usize,
    pub max_appendant_len: usize,
    pub checkpoint_stage: String,
    pub stage_graph: BTreeMap<String, Vec<String>>,
    pub provenance: BTreeMap<String, String>,
}

impl CompiledSystem {
    pub fn tag(&self) -> &TagSystem<DecoratedSymbol> {
        &self.tag
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn max_appendant_len(&self) -> usize {
        self.max_appendant_len
    }

    /// Per-appendant-index symbol kind count; the alphabet has p·q symbols.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn checkpoint_stage(&self) -> StageId {
        StageId::Checkpoint
    }

    pub fn stage_graph(&self) -> &BTreeMap<StageId, BTreeSet<StageId>> {
        &self.stage_graph
    }

    pub fn provenance(&self) -> &BTreeMap<DecoratedSymbol, RuleFamily> {
        &self.provenance
    }

    pub fn metadata(&self) -> CompiledMeta {
        CompiledMeta {
            p: self.p,
            q: self.q,
            alphabet_size: self.tag.alphabet().len(),
            rule_count: self.tag.rules().len(),
            max_appendant_len: self.max_appendant_len,
            checkpoint_stage: StageId::Checkpoint.short_name().to_string(),
            stage_graph: self
                .stage_graph
                .iter()
                .map(|(from, to)| {
                    (
                        from.short_name().to_string(),
                        to.iter().map(|t| t.short_name().to_string()).collect(),
                    )
                })
                .collect(),
            provenance: self
                .provenance
                .iter()
                .map(|(lhs, fam)| (lhs.to_string(), fam.to_string()))
                .collect(),
        }
    }

    /// Deterministically corrupt the nth bit-carrying rule (flipping one
    /// RHS bit base). Exists for fault-injection tests of the harness.
    pub fn perturb_rule(&self, nth: usize) -> CompiledSystem {
        let mut out = self.clone();
        let mut rules: Vec<(DecoratedSymbol, Vec<DecoratedSymbol>)> = out
            .tag
            .rules()
            .iter()
            .map(|(l, r)| (*l, r.clone()))
            .collect();
        let mut seen = 0usize;
        'outer: for (_, rhs) in rules.iter_mut() {
            for sym in rhs.iter_mut() {
                if sym.base.as_bit().is_some() {
                    if seen == nth {
                        sym.base = if sym.base == Base::Zero {
                            Base::One
                        } else {
                            Base::Zero
                        };
                        break 'outer;
                    }
                    seen += 1;
                }
            }
        }
        out.tag = TagSystem::new(out.tag.alphabet().iter().copied(), rules, 2);
        out
    }
}

/// The expected stage successor relation; generation is checked against it.
fn expected_stage_graph() -> BTreeMap<StageId, BTreeSet<StageId>> {
    use StageId::*;
    let edges: &[(StageId, &[StageId])] = &[
        (Checkpoint, &[Dispatch]),
        (Dispatch, &[PassBar1, AppendInject]),
        (AppendInject, &[AppendInject, CounterUpdate1]),
        (CounterUpdate1, &[CounterUpdate2]),
        (CounterUpdate2, &[CounterUpdate3]),
        (CounterUpdate3, &[CounterUpdate4, CounterUpdate5]),
        (CounterUpdate4, &[CounterUpdate1]),
        (CounterUpdate5, &[CounterUpdate6]),
        (CounterUpdate6, &[CounterUpdate7]),
        (CounterUpdate7, &[PassBar1]),
        (PassBar1, &[PassBar2, Reposition1]),
        (PassBar2, &[PassBar3]),
        (PassBar3, &[PassBar4]),
        (PassBar4, &[PassBar5]),
        (PassBar5, &[PassBar1]),
        (Reposition1, &[Reposition2]),
        (Reposition2, &[MarkerInc, Reposition3]),
        (Reposition3, &[MarkerInc]),
        (MarkerInc, &[Checkpoint]),
    ];
    edges
        .iter()
        .map(|(from, to)| (*from, to.iter().copied().collect()))
        .collect()
}

/// Assemble all rule families, restrict to the symbols reachable from the
/// input encoding, and package the result.
pub fn compile(program: &CyclicTagSystem) -> Result<CompiledSystem, CompileError> {
    let violations = program.validate();
    if !violations.is_empty() {
        return Err(CompileError::InvalidProgram(violations));
    }
    let p = program.len();
    if p > usize::from(u16::MAX) {
        return Err(CompileError::TooManyAppendants(p));
    }

    let families: [(RuleFamily, Vec<Rule>); 5] = [
        (RuleFamily::Dispatch, gen_dispatch_rules(p)),
        (RuleFamily::AppendInject, gen_append_rules(program)),
        (RuleFamily::PassBar, gen_passbar_rules(p)),
        (RuleFamily::Reposition, gen_reposition_rules(p)),
        (RuleFamily::MarkerInc, gen_marker_rules(p)),
    ];

    let mut all: BTreeMap<DecoratedSymbol, (Vec<DecoratedSymbol>, RuleFamily)> = BTreeMap::new();
    for (family, rules) in families {
        for (lhs, rhs) in rules {
            let family =
                if lhs.stage >= StageId::CounterUpdate1 && lhs.stage <= StageId::CounterUpdate7 {
                    RuleFamily::CounterUpdate
                } else {
                    family
                };
            if all.insert(lhs, (rhs, family)).is_some() {
                return Err(CompileError::DuplicateRule(lhs));
            }
        }
    }

    // Closure from everything the input encoder can emit.
    let mut reachable: BTreeSet<DecoratedSymbol> = BTreeSet::new();
    let mut work: Vec<DecoratedSymbol> = Vec::new();
    for x in BITS {
        for dot in [Dot::Plain, Dot::Dotted] {
            work.push(s(x, dot, true, false, StageId::Checkpoint, 0));
            work.push(s(x, dot, false, false, StageId::Checkpoint, 0));
        }
    }
    for dot in [Dot::Plain, Dot::Dotted] {
        work.push(s(Base::A, dot, false, false, StageId::Checkpoint, 0));
    }
    while let Some(sym) = work.pop() {
        if !reachable.insert(sym) {
            continue;
        }
        if let Some((rhs, _)) = all.get(&sym) {
            work.extend(rhs.iter().copied());
        }
    }

    // Saturate over appendant indices so the alphabet is exactly p·q and q
    // is the per-index kind count.
    let kinds: BTreeSet<(Base, Dot, bool, bool, StageId)> = reachable
        .iter()
        .map(|sym| (sym.base, sym.dot, sym.barred, sym.marked, sym.stage))
        .collect();
    let mut alphabet: BTreeSet<DecoratedSymbol> = BTreeSet::new();
    for &(base, dot, barred, marked, stage) in &kinds {
        for k in 0..p as u16 {
            alphabet.insert(s(base, dot, barred, marked, stage, k));
        }
    }

    let mut rules: BTreeMap<DecoratedSymbol, Vec<DecoratedSymbol>> = BTreeMap::new();
    let mut provenance: BTreeMap<DecoratedSymbol, RuleFamily> = BTreeMap::new();
    let mut stage_graph: BTreeMap<StageId, BTreeSet<StageId>> = BTreeMap::new();
    let expected = expected_stage_graph();
    for sym in &alphabet {
        if let Some((rhs, family)) = all.get(sym) {
            for out in rhs {
                let allowed = expected
                    .get(&sym.stage)
                    .is_some_and(|set| set.contains(&out.stage));
                if !allowed && out.stage != sym.stage {
                    return Err(CompileError::StageLeak(sym.stage));
                }
                stage_graph.entry(sym.stage).or_default().insert(out.stage);
            }
            rules.insert(*sym, rhs.clone());
            provenance.insert(*sym, *family);
        }
    }

    let q = kinds.len();
    let tag = TagSystem::new(alphabet.iter().copied(), rules, 2);
    debug_assert!(tag.validate().is_empty());

    Ok(CompiledSystem {
        tag,
        p,
        max_appendant_len: program.max_appendant_len(),
        q,
        stage_graph,
        provenance,
    })
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
    fn parity_tester_has_six_rules() {
        let ts = gen_parity_tester();
        assert_eq!(ts.rules().len(), 6);
        assert!(ts.validate().is_empty());
    }

    #[test]
    fn compile_worked_example() {
        let c = compile(&program(&["00", "010", "11"])).unwrap();
        assert_eq!(c.p(), 3);
        assert_eq!(c.tag().alphabet().len(), 3 * c.q());
        assert!(c.tag().validate().is_empty());
        // Hash symbols have no rules; all rules map into the stage graph.
        for sym in c.tag().alphabet() {
            if sym.base == Base::Hash {
                assert!(c.tag().rule(sym).is_none(), "{sym} has a rule");
            }
        }
    }

    #[test]
    fn compile_is_deterministic() {
        let prog = program(&["1", "-", "01"]);
        let a = compile(&prog).unwrap();
        let b = compile(&prog).unwrap();
        assert_eq!(a.tag(), b.tag());
        let meta_a = serde_json::to_string(&a.metadata()).unwrap();
        let meta_b = serde_json::to_string(&b.metadata()).unwrap();
        assert_eq!(meta_a, meta_b);
    }

    #[test]
    fn compile_rejects_empty_program() {
        let err = compile(&CyclicTagSystem::new(Vec::new())).unwrap_err();
        assert!(matches!(err, CompileError::InvalidProgram(_)));
    }

    #[test]
    fn marker_rules_rotate_index() {
        let rules = gen_marker_rules(3);
        for (lhs, rhs) in &rules {
            let expect = ((lhs.appendant as usize + 1) % 3) as u16;
            assert!(rhs.iter().all(|r| r.appendant == expect));
        }
        // p = 1: identity relabeling, rules still emitted.
        let unit = gen_marker_rules(1);
        assert!(!unit.is_empty());
        assert!(unit
            .iter()
            .all(|(l, r)| r.iter().all(|s| s.appendant == l.appendant)));
    }
}
