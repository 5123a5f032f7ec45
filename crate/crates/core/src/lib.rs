//! Complexity, special words, sliding block codes and empirical measures for subshifts.
//!
//! * [`alphabet`], [`sequence`] — symbols, words and lazily generated sequences.
//! * [`generators`] — Sturmian codings, ruler-built families, staircase and periodic sequences.
//! * [`language`] — factor tables with complexity and extension counts.
//! * [`blockmap`] — sliding block codes and the factor maps built from minimal languages.
//! * [`complexity`] — profiles, special-word census and bound checks.
//! * [`measures`] — empirical measures, the weak metric and genericity probes.
//! * [`harness`] — catalogued experiments producing result bundles.

pub mod alphabet;
pub mod blockmap;
pub mod complexity;
pub mod error;
pub mod generators;
pub mod harness;
pub mod language;
pub mod measures;
pub mod periodicity;
pub mod rotation;
pub mod seqfile;
pub mod sequence;
pub mod verdict;

pub use alphabet::{Alphabet, Symbol, Word};
pub use error::{Error, Result};
pub use sequence::{SequenceKind, SymbolicSequence};
pub use verdict::Verdict;
