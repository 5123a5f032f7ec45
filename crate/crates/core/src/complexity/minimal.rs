//! Periodic minimal-subsystem candidates read off a language table.

use serde::Serialize;

use crate::alphabet::{Symbol, Word};
use crate::generators::MinimalSystem;
use crate::language::LanguageTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateOrigin {
    /// Found in the table and listed by the generator.
    Confirmed,
    /// Found in the table only (external input, or a disagreement with the generator).
    Heuristic,
    /// Listed by the generator but not detectable as a periodic word (e.g. Sturmian subsystems).
    Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalCandidate {
    pub description: String,
    /// Primitive cycle (least rotation) for periodic candidates.
    pub cycle: Option<Word>,
    pub origin: CandidateOrigin,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalCandidates {
    pub candidates: Vec<MinimalCandidate>,
    /// Level at which persistence was tested.
    pub level: usize,
    /// `Some(true)` when the detected periodic cycles are exactly the generator's periodic systems.
    pub agrees_with_provenance: Option<bool>,
}

fn primitive(c: &[Symbol]) -> bool {
    (1..c.len()).all(|d| c.len() % d != 0 || (0..c.len()).any(|i| c[i] != c[(i + d) % c.len()]))
}

fn least_rotation(c: &[Symbol]) -> bool {
    (1..c.len()).all(|s| {
        let rot: Vec<Symbol> = c[s..].iter().chain(&c[..s]).copied().collect();
        c <= &rot[..]
    })
}

fn cycles(sigma: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let total = (sigma as u64).pow(len as u32);
        for mut code in 0..total {
            let mut c = vec![Symbol(0); len];
            for slot in c.iter_mut().rev() {
                *slot = Symbol((code % sigma as u64) as u8);
                code /= sigma as u64;
            }
            if primitive(&c) && least_rotation(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Cycles `u` (primitive, length ≤ `max_cycle`) with `u^∞`'s word at the top saturated level in the table.
pub fn minimal_candidates(table: &LanguageTable, max_cycle: usize) -> MinimalCandidates {
    let level = (1..=table.n_max()).rev().find(|&n| table.is_saturated(n)).unwrap_or(0);
    let a = table.alphabet();
    let source = table.source();
    let known: Option<Vec<Word>> = source.minimal_systems().map(|ms| {
        ms.iter()
            .filter_map(|m| match m {
                MinimalSystem::Periodic { cycle } => Some(canonical(cycle)),
                MinimalSystem::Sturmian { .. } => None,
            })
            .collect()
    });
    let mut detected = Vec::new();
    if level > 0 {
        for c in cycles(a.len(), max_cycle.min(level)) {
            let w: Vec<Symbol> = (0..level).map(|k| c[k % c.len()]).collect();
            if table.contains(&w) {
                detected.push(Word(c));
            }
        }
    }
    let mut candidates: Vec<MinimalCandidate> = detected
        .iter()
        .map(|c| MinimalCandidate {
            description: format!("({})^inf", a.render(c)),
            cycle: Some(c.clone()),
            origin: match &known {
                Some(k) if k.contains(c) => CandidateOrigin::Confirmed,
                _ => CandidateOrigin::Heuristic,
            },
        })
        .collect();
    if let Some(ms) = source.minimal_systems() {
        for m in ms {
            if let MinimalSystem::Sturmian { .. } = m {
                candidates.push(MinimalCandidate { description: m.describe(a), cycle: None, origin: CandidateOrigin::Provenance });
            }
        }
    }
    let agrees = known.map(|k| {
        let mut k = k;
        k.sort();
        let mut d = detected.clone();
        d.sort();
        k == d
    });
    MinimalCandidates { candidates, level, agrees_with_provenance: agrees }
}

fn canonical(cycle: &Word) -> Word {
    let c = &cycle.0;
    let p = (1..=c.len()).find(|&d| c.len() % d == 0 && (0..c.len()).all(|i| c[i] == c[i % d])).unwrap_or(c.len());
    let base = &c[..p];
    (0..p)
        .map(|s| Word(base[s..].iter().chain(&base[..s]).copied().collect()))
        .min()
        .unwrap_or_else(|| cycle.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::staircase;
    use crate::language::{build_language, SaturationPolicy};
    use crate::sequence::periodic_from_str;

    #[test]
    fn cycle_enumeration() {
        // necklaces of primitive binary words: 2, 1, 2, 3
        let by_len: Vec<usize> = (1..=4).map(|l| cycles(2, 4).iter().filter(|c| c.len() == l).count()).collect();
        assert_eq!(by_len, vec![2, 1, 2, 3]);
    }

    #[test]
    fn periodic_and_staircase() {
        let x = periodic_from_str("0110").unwrap();
        let t = build_language(&x, 12, &SaturationPolicy::default()).unwrap();
        let m = minimal_candidates(&t, 4);
        assert_eq!(m.candidates.len(), 1);
        assert_eq!(m.candidates[0].cycle, Some(Word::from_indices(&[0, 0, 1, 1])));
        let s = staircase();
        let t = build_language(&s, 40, &SaturationPolicy::default()).unwrap();
        let m = minimal_candidates(&t, 3);
        let got: Vec<_> = m.candidates.iter().map(|c| c.description.clone()).collect();
        assert_eq!(got, vec!["(0)^inf", "(1)^inf"]);
    }
}
