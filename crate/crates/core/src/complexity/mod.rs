//! Complexity profiles, special-word censuses and the checks built on them.

mod bounds;
mod minimal;

pub use bounds::{bound_report, bound_report_on, rs_case_bound, BoundMode, BoundReport, BoundSpec, TracePoint};
pub use minimal::{minimal_candidates, CandidateOrigin, MinimalCandidate, MinimalCandidates};

use serde::Serialize;

use crate::alphabet::Symbol;
use crate::error::{domain, Result};
use crate::language::{LanguageTable, WordRef};
use crate::periodicity::{detect_eventual_periodicity, Direction, Periodicity};
use crate::sequence::{Provenance, SequenceKind, SymbolicSequence};

/// Identifies the table a profile or census was read from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableOrigin {
    pub source: Provenance,
    pub window: (i64, i64),
    pub surrogate: bool,
}

impl TableOrigin {
    pub fn of(table: &LanguageTable) -> Self {
        TableOrigin { source: table.source().provenance().clone(), window: table.window(), surrogate: table.used_surrogate() }
    }
}

/// `c(n)` for `1 ≤ n ≤ n_max + 1` (index 0 holds the empty word).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityProfile {
    pub n_max: usize,
    pub c: Vec<u64>,
    pub saturated: Vec<bool>,
    pub rs: Vec<u64>,
    pub ls: Vec<u64>,
    pub origin: TableOrigin,
}

impl ComplexityProfile {
    pub fn c(&self, n: usize) -> u64 {
        self.c.get(n).copied().unwrap_or(0)
    }

    pub fn is_saturated(&self, n: usize) -> bool {
        self.saturated.get(n).copied().unwrap_or(false)
    }

    /// Saturated levels in `1..=n_max`.
    pub fn saturated_levels(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n_max).filter(|&n| self.is_saturated(n))
    }

    /// Largest `H` with every level `1..=H` saturated.
    pub fn saturated_prefix(&self) -> usize {
        (1..=self.n_max).take_while(|&n| self.is_saturated(n)).last().unwrap_or(0)
    }

    /// TSV with columns `n, c, rs, ls, saturated`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("n\tc\trs\tls\tsaturated\n");
        for n in 1..=self.n_max {
            s.push_str(&format!("{n}\t{}\t{}\t{}\t{}\n", self.c(n), self.rs[n], self.ls[n], self.is_saturated(n)));
        }
        s
    }
}

pub fn profile(table: &LanguageTable) -> ComplexityProfile {
    let top = table.n_max() + 1;
    ComplexityProfile {
        n_max: table.n_max(),
        c: (0..=top).map(|n| if n == 0 { 1 } else { table.count(n) }).collect(),
        saturated: (0..=top).map(|n| n == 0 || table.is_saturated(n)).collect(),
        rs: (0..=top).map(|n| if n == 0 { 0 } else { table.rs_count(n) }).collect(),
        ls: (0..=top).map(|n| if n == 0 { 0 } else { table.ls_count(n) }).collect(),
        origin: TableOrigin::of(table),
    }
}

/// Whether a right-special word is maximal (no left extension `sw` is right-special).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Maximality {
    Maximal,
    NotMaximal,
    /// The word's first occurrence touches the window's left edge.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialWord {
    /// First occurrence in the table's window.
    pub at: WordRef,
    pub extensions: Vec<Symbol>,
    /// Set for right-special words only.
    pub maximal: Option<Maximality>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialLevel {
    pub n: usize,
    pub saturated: bool,
    pub rs: Vec<SpecialWord>,
    pub ls: Vec<SpecialWord>,
}

impl SpecialLevel {
    /// `Σ_{w ∈ RS(n)} (|ext(w)| − 1)`.
    pub fn excess(&self) -> u64 {
        self.rs.iter().map(|w| w.extensions.len() as u64 - 1).sum()
    }
}

/// `RS(n)` and `LS(n)` for `1 ≤ n ≤ n_max`; words are resolved with [`LanguageTable::word`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialWordReport {
    pub levels: Vec<SpecialLevel>,
    pub origin: TableOrigin,
}

impl SpecialWordReport {
    pub fn level(&self, n: usize) -> &SpecialLevel {
        &self.levels[n - 1]
    }

    pub fn n_max(&self) -> usize {
        self.levels.len()
    }

    /// TSV rows `n, side, word, extensions, maximal`.
    pub fn to_tsv(&self, table: &LanguageTable) -> String {
        let a = table.alphabet();
        let mut s = String::from("n\tside\tword\textensions\tmaximal\n");
        for lvl in &self.levels {
            for (side, words) in [("R", &lvl.rs), ("L", &lvl.ls)] {
                for w in words {
                    let m = match w.maximal {
                        Some(Maximality::Maximal) => "yes",
                        Some(Maximality::NotMaximal) => "no",
                        Some(Maximality::Undetermined) => "?",
                        None => "-",
                    };
                    s.push_str(&format!(
                        "{}\t{side}\t{}\t{}\t{m}\n",
                        lvl.n,
                        a.render(table.word(w.at)),
                        a.render(&w.extensions)
                    ));
                }
            }
        }
        s
    }
}

pub fn special_census(table: &LanguageTable) -> SpecialWordReport {
    let n_max = table.n_max();
    let mut levels: Vec<SpecialLevel> = (1..=n_max)
        .map(|n| SpecialLevel { n, saturated: table.is_saturated(n), rs: Vec::new(), ls: Vec::new() })
        .collect();
    for left in [false, true] {
        for st in table.special_states(left) {
            for n in st.min_len..=st.max_len.min(n_max) {
                let at = table.ref_for(left, st.first_end, n);
                let maximal = (!left).then(|| {
                    if n < st.full_len || st.child_special {
                        Maximality::NotMaximal
                    } else if at.start == 0 {
                        Maximality::Undetermined
                    } else {
                        Maximality::Maximal
                    }
                });
                let w = SpecialWord { at, extensions: st.extensions.clone(), maximal };
                let lvl = &mut levels[n - 1];
                if left {
                    lvl.ls.push(w);
                } else {
                    lvl.rs.push(w);
                }
            }
        }
    }
    for lvl in &mut levels {
        lvl.rs.sort_by(|a, b| table.word(a.at).cmp(table.word(b.at)));
        lvl.ls.sort_by(|a, b| table.word(a.at).cmp(table.word(b.at)));
    }
    SpecialWordReport { levels, origin: TableOrigin::of(table) }
}

/// `c(n+1) − c(n)` against the census at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingVerdict {
    pub n: usize,
    pub c_n: u64,
    pub c_next: u64,
    pub rs: u64,
    pub excess: u64,
    /// `c(n+1) − c(n) = excess ≥ #RS(n)`.
    pub holds: bool,
}

/// Checks `c(n+1) − c(n) = Σ_{RS(n)} (|ext| − 1) ≥ #RS(n)` on levels where `n` and `n+1` are saturated.
pub fn check_counting(profile: &ComplexityProfile, census: &SpecialWordReport) -> Result<Vec<CountingVerdict>> {
    if profile.origin != census.origin {
        return domain("profile and census come from different tables");
    }
    Ok((1..=profile.n_max.min(census.n_max()))
        .filter(|&n| profile.is_saturated(n) && profile.is_saturated(n + 1))
        .map(|n| {
            let lvl = census.level(n);
            let (c_n, c_next) = (profile.c(n), profile.c(n + 1));
            let excess = lvl.excess();
            let rs = lvl.rs.len() as u64;
            CountingVerdict { n, c_n, c_next, rs, excess, holds: c_next >= c_n && c_next - c_n == excess && excess >= rs }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum MhOutcome {
    /// `c(n) ≤ n` at a saturated level and the detector certified the period(s).
    Periodic { period: usize },
    /// `c(n) > n` at every saturated level.
    AperiodicThroughHorizon,
    /// Triggered but the detector found no period inside its horizon.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MhReport {
    /// First saturated `n` with `c(n) ≤ n`.
    pub trigger: Option<usize>,
    pub right: Option<Periodicity>,
    pub left: Option<Periodicity>,
    pub horizon: usize,
    pub outcome: MhOutcome,
}

/// Morse–Hedlund trigger plus the eventual-periodicity detector in both directions.
pub fn morse_hedlund_classify(profile: &ComplexityProfile, seq: &SymbolicSequence, horizon: usize) -> Result<MhReport> {
    let trigger = profile.saturated_levels().find(|&n| profile.c(n) <= n as u64);
    let right = detect_eventual_periodicity(seq, Direction::Right, horizon)?;
    let left = match seq.kind() {
        SequenceKind::BiInfinite => detect_eventual_periodicity(seq, Direction::Left, horizon)?,
        SequenceKind::RightInfinite => None,
    };
    let outcome = match (trigger, right, left, seq.kind()) {
        (None, ..) => MhOutcome::AperiodicThroughHorizon,
        (Some(_), Some(r), Some(l), SequenceKind::BiInfinite) => {
            MhOutcome::Periodic { period: num_integer::lcm(r.period, l.period) }
        }
        (Some(_), Some(r), _, SequenceKind::RightInfinite) => MhOutcome::Periodic { period: r.period },
        _ => MhOutcome::Inconclusive,
    };
    Ok(MhReport { trigger, right, left, horizon, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, Word};
    use crate::generators::{sturmian, two_tails, SturmianParams};
    use crate::language::{build_language, SaturationPolicy};
    use crate::sequence::periodic_from_str;

    fn table(seq: &SymbolicSequence, n: usize) -> LanguageTable {
        build_language(seq, n, &SaturationPolicy::default()).unwrap()
    }

    #[test]
    fn sturmian_profile_and_census() {
        let x = sturmian(SturmianParams::golden()).unwrap();
        let t = table(&x, 60);
        let p = profile(&t);
        let census = special_census(&t);
        for n in 1..=60 {
            assert!(p.is_saturated(n));
            assert_eq!(p.c(n), n as u64 + 1);
            assert_eq!(census.level(n).rs.len(), 1);
            assert_eq!(census.level(n).ls.len(), 1);
            assert_eq!(census.level(n).rs[0].maximal, Some(Maximality::NotMaximal));
        }
        assert!(check_counting(&p, &census).unwrap().iter().all(|v| v.holds && v.excess == 1));
    }

    #[test]
    fn census_matches_brute_force() {
        let a = Alphabet::digits(3);
        let w = a.parse("0120210011220102211").unwrap();
        let t = LanguageTable::from_word(&w, &a, 6).unwrap();
        let census = special_census(&t);
        for n in 1..=6 {
            let words: std::collections::BTreeSet<Word> = w.windows(n).map(|s| Word(s.to_vec())).collect();
            let rs: Vec<Word> = words
                .iter()
                .filter(|u| {
                    let mut ext: Vec<Symbol> = w.windows(n + 1).filter(|s| s[..n] == u[..]).map(|s| s[n]).collect();
                    ext.sort();
                    ext.dedup();
                    ext.len() >= 2
                })
                .cloned()
                .collect();
            let got: Vec<Word> = census.level(n).rs.iter().map(|s| Word(t.word(s.at).to_vec())).collect();
            assert_eq!(got, rs, "n = {n}");
            for s in &census.level(n).rs {
                let u = t.word(s.at);
                let any_left_special = a.symbols().any(|x| {
                    let mut su = vec![x];
                    su.extend_from_slice(u);
                    t.right_extensions(&su).map_or(false, |e| e.len() >= 2)
                });
                match s.maximal.unwrap() {
                    Maximality::Maximal => assert!(!any_left_special),
                    Maximality::NotMaximal => assert!(any_left_special),
                    Maximality::Undetermined => assert!(w.starts_with(u)),
                }
            }
        }
    }

    #[test]
    fn corrupted_profile_is_caught() {
        let x = sturmian(SturmianParams::golden()).unwrap();
        let t = table(&x, 20);
        let mut p = profile(&t);
        let census = special_census(&t);
        p.c[7] += 1;
        let bad: Vec<usize> = check_counting(&p, &census).unwrap().iter().filter(|v| !v.holds).map(|v| v.n).collect();
        assert_eq!(bad, vec![6, 7]);
        let other = profile(&table(&periodic_from_str("01").unwrap(), 20));
        assert!(check_counting(&other, &census).is_err());
    }

    #[test]
    fn morse_hedlund_outcomes() {
        for (cycle, p) in [("01", 2usize), ("0011", 4)] {
            let x = periodic_from_str(cycle).unwrap();
            let prof = profile(&table(&x, 10));
            assert!(prof.c(p) <= p as u64);
            let r = morse_hedlund_classify(&prof, &x, 64).unwrap();
            assert_eq!(r.outcome, MhOutcome::Periodic { period: p });
        }
        let s = sturmian(SturmianParams::golden()).unwrap();
        let r = morse_hedlund_classify(&profile(&table(&s, 40)), &s, 256).unwrap();
        assert_eq!(r.outcome, MhOutcome::AperiodicThroughHorizon);
        let tt = two_tails();
        let prof = profile(&table(&tt, 30));
        assert!((1..=30).all(|n| prof.c(n) == n as u64 + 1));
        let r = morse_hedlund_classify(&prof, &tt, 64).unwrap();
        assert_eq!(r.outcome, MhOutcome::AperiodicThroughHorizon);
        assert_eq!(r.right.map(|p| p.period), Some(1));
        assert_eq!(r.left.map(|p| p.period), Some(1));
    }
}
