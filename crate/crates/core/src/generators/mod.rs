//! Every sequence family used by the workbench.

mod growth;
mod nonrecurrent;
mod recurrent;
mod ruler;
mod ruler_family;
mod schedule;
mod staircase;
mod stitched;
mod sturmian;
mod transitive;

pub mod registry;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::Result;

pub use growth::GrowthFunction;
pub use nonrecurrent::{nonrecurrent_example, NonrecurrentCase};
pub use recurrent::recurrent_sharp_family;
pub use ruler::ruler;
pub use schedule::{
    default_sturmians, make_schedule, make_schedule_with, stitched_tokens, ConstraintRecord, Entry, ExponentSchedule,
    SEARCH_CAP,
};
pub use staircase::{staircase, staircase_block, staircase_counts, two_tails};
pub use stitched::{stitched_family, StitchWord, StitchedFamily};
pub use sturmian::{language_of_rotation, sturmian, Real, Rotation, Sturmian, SturmianParams};
pub use transitive::{transitive_family, transitive_family_with_margin, transitive_runs, transitive_schedule};

/// A minimal subsystem of a generated orbit closure, known analytically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalSystem {
    /// Orbit of `cycle^∞`.
    Periodic { cycle: Word },
    /// Sturmian subshift of `params.beta`, its letters `0, 1` written as `symbols` in the host alphabet.
    Sturmian { params: SturmianParams, symbols: [Symbol; 2] },
}

impl MinimalSystem {
    /// The words of length `r`, in host symbols.
    pub fn language(&self, r: usize) -> Result<BTreeSet<Word>> {
        match self {
            MinimalSystem::Periodic { cycle } => {
                let p = cycle.len();
                Ok((0..p).map(|s| Word((0..r).map(|k| cycle[(s + k) % p]).collect())).collect())
            }
            MinimalSystem::Sturmian { params, symbols } => {
                let s = Sturmian::new(params.clone())?;
                Ok(s.language(r)
                    .into_iter()
                    .map(|w| Word(w.iter().map(|b| symbols[b.index()]).collect()))
                    .collect())
            }
        }
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            MinimalSystem::Periodic { cycle } => format!("({})^inf", alphabet.render(cycle)),
            MinimalSystem::Sturmian { params, symbols } => format!(
                "sturmian[beta={}; {}{}]",
                params.beta,
                alphabet.token(symbols[0]),
                alphabet.token(symbols[1])
            ),
        }
    }
}

/// Smallest `r ≤ max_r` at which the systems' `r`-languages are pairwise disjoint.
pub fn separating_length(systems: &[MinimalSystem], max_r: usize) -> Result<Option<usize>> {
    for r in 1..=max_r {
        let langs: Vec<BTreeSet<Word>> = systems.iter().map(|m| m.language(r)).collect::<Result<_>>()?;
        let total: usize = langs.iter().map(BTreeSet::len).sum();
        let union: BTreeSet<&Word> = langs.iter().flatten().collect();
        if union.len() == total {
            return Ok(Some(r));
        }
    }
    Ok(None)
}
