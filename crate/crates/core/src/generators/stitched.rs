//! Families where each run `p^{n_k^p}` of a stitched column is replaced by a Sturmian word `w_k^p`
//! that is both a prefix and a suffix of `w_{k+1}^p`.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::blockmap::BlockMap;
use crate::error::{domain, Result};
use crate::rotation::{cylinder, first_hit, signed, Arc};
use crate::sequence::{Provenance, SequenceKind, SymbolicSequence};

use super::ruler_family::{Content, Embedded, Piece, RulerFamily, Tail};
use super::schedule::{make_schedule_with, ExponentSchedule};
use super::sturmian::{Sturmian, SturmianParams};
use super::MinimalSystem;

/// `S[start, start + len)` of a Sturmian coding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchWord {
    pub start: i64,
    pub len: u64,
}

pub(crate) fn first_stitch(_s: &Sturmian, n: u64) -> Option<StitchWord> {
    Some(StitchWord { start: 0, len: n })
}

/// The canonical `w_k` given `w_{k−1}` and a lower bound on its length: the least return distance
/// `d ≥ max(1, lb − |w_{k−1}|)` at which `w_{k−1}` can reoccur, then the first window from index 0
/// that starts and ends with `w_{k−1}` at that distance.
pub(crate) fn next_stitch(s: &Sturmian, prev: StitchWord, lb: u64, cap: u64) -> Option<StitchWord> {
    let rot = &s.rotation;
    let arc = cylinder(rot.beta, rot.point(prev.start), prev.len);
    let l = arc.len;
    let d_min = lb.saturating_sub(prev.len).max(1);
    // |dβ| < ℓ  ⟺  (dβ + ℓ − 1) mod 1 < 2ℓ − 1
    let bound = BigUint::from(l) * 2u32 - 1u32;
    let mut d_from = d_min;
    loop {
        let d = first_hit(rot.beta, l - 1, &bound, d_from, cap)?;
        let delta = signed(rot.beta.wrapping_mul(d as u128));
        let shrink = delta.unsigned_abs();
        let j = if delta >= 0 {
            Arc { lo: arc.lo, len: l - shrink }
        } else {
            Arc { lo: arc.lo.wrapping_add(shrink), len: l - shrink }
        };
        let len = prev.len.checked_add(d)?;
        if len > cap {
            return None;
        }
        let base = rot.x0.wrapping_sub(j.lo);
        if let Some(t) = first_hit(rot.beta, base, &BigUint::from(j.len), 0, cap - len) {
            return Some(StitchWord { start: t as i64, len });
        }
        d_from = d + 1;
    }
}

/// The sequence `x′`: runs of columns `j−i+1..j` replaced by nested Sturmian words.
#[derive(Debug, Clone)]
pub struct StitchedFamily {
    pub schedule: ExponentSchedule,
    pub sequence: SymbolicSequence,
    pub alphabet: Alphabet,
}

impl StitchedFamily {
    pub fn j(&self) -> usize {
        self.schedule.j()
    }

    pub fn i(&self) -> usize {
        self.schedule.i()
    }

    /// Host symbols `[zero, one]` of stitched column `q`.
    pub fn stitched_symbols(&self, q: usize) -> [Symbol; 2] {
        let base = (self.j() - self.i() + 2 * q) as u8;
        [Symbol(base), Symbol(base + 1)]
    }

    /// The 1-block map `x′ ↦ x` sending both letters of stitched column `p` to `p`.
    pub fn collapse_map(&self) -> Result<BlockMap> {
        let (j, i) = (self.j(), self.i());
        let target = Alphabet::one_based(j);
        let mut table = Vec::new();
        for p in 1..=j - i {
            table.push(Symbol(p as u8 - 1));
        }
        for q in 0..i {
            let p = (j - i + 1 + q) as u8;
            table.push(Symbol(p - 1));
            table.push(Symbol(p - 1));
        }
        BlockMap::one_block(self.alphabet.clone(), target, table, "stitch-collapse")
    }
}

/// Builds `x′` over `schedule`; if the schedule was generated for different Sturmians it is regenerated.
pub fn stitched_family(schedule: &ExponentSchedule, sturmians: &[SturmianParams]) -> Result<StitchedFamily> {
    let (j, i) = (schedule.j(), schedule.i());
    if i == 0 {
        return domain("stitched family needs i ≥ 1");
    }
    if sturmians.len() != i {
        return domain(format!("{i} stitched columns need {i} Sturmians"));
    }
    let mut tokens: Vec<String> = (1..=j - i).map(|p| p.to_string()).collect();
    for s in sturmians {
        let a = s.alphabet();
        tokens.extend(a.tokens().iter().cloned());
    }
    let alphabet = Alphabet::new(tokens)
        .map_err(|e| crate::error::Error::Domain(format!("stitched alphabets must be disjoint: {e}")))?;
    let schedule = if schedule.sturmians() == sturmians {
        schedule.clone()
    } else {
        make_schedule_with(j, i, schedule.g(), schedule.margin(), sturmians)?
    };
    let embedded: Vec<Embedded> = sturmians
        .iter()
        .enumerate()
        .map(|(q, p)| {
            let base = (j - i + 2 * q) as u8;
            Ok(Embedded { sturmian: Sturmian::new(p.clone())?, symbols: [Symbol(base), Symbol(base + 1)] })
        })
        .collect::<Result<_>>()?;
    let blocks: Vec<Vec<Piece>> = (1..=schedule.generations())
        .map(|k| {
            (1..=j)
                .map(|p| {
                    let content = if p <= j - i {
                        Content::Run(Symbol(p as u8 - 1))
                    } else {
                        let q = p - (j - i) - 1;
                        // an infinite w_k reads S onwards from w_{k−1}, which it must start with
                        let word = schedule.stitch_word(q, k).or_else(|| {
                            let start = (1..k).rev().find_map(|m| schedule.stitch_word(q, m)).map_or(0, |w| w.start);
                            Some(StitchWord { start, len: u64::MAX })
                        });
                        Content::Stitched { q, word }
                    };
                    Piece { len: schedule.entry(k, p), content }
                })
                .collect()
        })
        .collect();
    let q_tail = i - 1;
    let tail_words: Vec<StitchWord> =
        (1..=schedule.generations()).filter_map(|k| schedule.stitch_word(q_tail, k)).collect();
    let prov = Provenance::new(
        "stitched",
        serde_json::json!({
            "j": j,
            "i": i,
            "g": schedule.g().tag(),
            "margin": schedule.margin(),
            "schedule": schedule.to_json(),
        }),
    );
    let mut minimal: Vec<MinimalSystem> =
        (1..=j - i).map(|p| MinimalSystem::Periodic { cycle: vec![Symbol(p as u8 - 1)].into() }).collect();
    for (q, e) in embedded.iter().enumerate() {
        minimal.push(MinimalSystem::Sturmian { params: sturmians[q].clone(), symbols: e.symbols });
    }
    let fam = RulerFamily::new(
        blocks,
        Tail::Stitched { q: q_tail, words: tail_words },
        embedded,
        alphabet.clone(),
        prov.clone(),
    );
    let sequence = SymbolicSequence::new(fam, SequenceKind::BiInfinite, alphabet.clone(), prov)
        .with_minimal_systems(minimal);
    Ok(StitchedFamily { schedule, sequence, alphabet })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::growth::GrowthFunction;
    use crate::generators::schedule::make_schedule;

    fn word_of(s: &Sturmian, w: StitchWord) -> Vec<bool> {
        (0..w.len).map(|o| s.bit(w.start + o as i64).unwrap()).collect()
    }

    #[test]
    fn stitched_words_are_nested() {
        let sched = make_schedule(2, 1, &GrowthFunction::linear(1), 1).unwrap();
        let s = Sturmian::new(sched.sturmians()[0].clone()).unwrap();
        let mut prev: Option<Vec<bool>> = None;
        for k in 1..=4 {
            let w = sched.stitch_word(0, k).unwrap();
            assert_eq!(Some(w.len), sched.entry(k, 2).finite());
            let cur = word_of(&s, w);
            if let Some(p) = &prev {
                assert!(cur.starts_with(p) && cur.ends_with(p), "generation {k}");
                // canonical: no earlier start gives the same shape
                for t in 0..w.start.min(2000) {
                    let alt = word_of(&s, StitchWord { start: t, len: w.len });
                    assert!(!(alt.starts_with(p) && alt.ends_with(p)), "earlier start {t} at k = {k}");
                }
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn large_entries_are_stitched_without_scanning() {
        let sched = make_schedule(3, 1, &GrowthFunction::sqrt(), 1).unwrap();
        let s = Sturmian::new(sched.sturmians()[0].clone()).unwrap();
        let w1 = sched.stitch_word(0, 1).unwrap();
        let w2 = sched.stitch_word(0, 2).unwrap();
        assert!(w2.len > 1 << 40);
        let p = word_of(&s, w1);
        let head: Vec<bool> = (0..w1.len).map(|o| s.bit(w2.start + o as i64).unwrap()).collect();
        let tail: Vec<bool> =
            (0..w1.len).map(|o| s.bit(w2.start + (w2.len - w1.len + o) as i64).unwrap()).collect();
        assert_eq!(head, p);
        assert_eq!(tail, p);
    }
}
