//! Interpreters for deterministic 2-tag systems and cyclic tag systems, a
//! compiler from cyclic tag programs to provably equivalent 2-tag systems,
//! and a harness that verifies the equivalence by lockstep execution.
//!
//! The crate is organised around five pieces:
//!
//! - [`tag`]: exact semantics of 2-tag systems (validation, stepping, bounded
//!   runs with halt and cycle detection).
//! - [`cyclic`]: exact semantics of cyclic tag systems.
//! - [`codec`]: the decorated-symbol data model and the bidirectional mapping
//!   between cyclic tag configurations and 2-tag datawords.
//! - [`compile`]: generation of the full 2-tag rule table simulating a given
//!   cyclic tag system, plus the standalone six-rule parity tester.
//! - [`lockstep`] and [`profile`]: the verification and step-counting harness.
//!
//! Text formats for programs live in [`text`], random program generation for
//! the randomized suites in [`gen`].

pub mod codec;
pub mod compile;
pub mod cycle;
pub mod cyclic;
pub mod gen;
pub mod lockstep;
pub mod profile;
pub mod tag;
pub mod text;

pub use codec::{
    decode, encode_input, BarSide, Base, DecodedView, DecoratedSymbol, Dot, NotACheckpoint, StageId,
};
pub use compile::{compile, gen_parity_tester, CompiledSystem};
pub use cyclic::{CyclicConfig, CyclicTagSystem};
pub use lockstep::{lockstep_verify, LockstepOptions, LockstepReport, Verdict};
pub use tag::{HaltReason, RunLimits, RunResult, TagConfig, TagSystem};
