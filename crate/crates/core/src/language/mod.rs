//! Windowed languages: distinct n-words of a sequence with their one-sided extensions.

mod sam;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{domain, Result};
use crate::sequence::{SequenceKind, SymbolicSequence};
use sam::Sam;

/// How far windows may grow while waiting for the language to stabilise.
#[derive(Debug, Clone, Serialize)]
pub struct SaturationPolicy {
    /// Half-width of the first window; default `max(256, 2·(n_max+1))`.
    pub initial_half_width: Option<usize>,
    /// Hard cap on window length in symbols.
    pub cap: usize,
    /// Analyse the family's finite-language surrogate when it provides one.
    pub use_surrogate: bool,
}

impl Default for SaturationPolicy {
    fn default() -> Self {
        SaturationPolicy { initial_half_width: None, cap: 1 << 26, use_surrogate: true }
    }
}

impl SaturationPolicy {
    pub fn raw() -> Self {
        SaturationPolicy { use_surrogate: false, ..Default::default() }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Occurrence of a word inside the table's window: `len` symbols starting at window offset `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WordRef {
    pub start: u32,
    pub len: u32,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct LevelStats {
    pub count: Vec<u64>,
    pub rs: Vec<u64>,
    pub excess: Vec<u64>,
    pub dead: Vec<u64>,
}

impl LevelStats {
    fn from_sam(sam: &Sam, top: usize) -> LevelStats {
        let mut d = LevelStats {
            count: vec![0; top + 2],
            rs: vec![0; top + 2],
            excess: vec![0; top + 2],
            dead: vec![0; top + 2],
        };
        let add = |arr: &mut Vec<u64>, a: usize, b: usize, x: u64| {
            arr[a] = arr[a].wrapping_add(x);
            arr[b + 1] = arr[b + 1].wrapping_sub(x);
        };
        for v in 1..sam.states() as u32 {
            let a = sam.min_len(v) as usize;
            if a > top {
                continue;
            }
            let b = (sam.len[v as usize] as usize).min(top);
            let deg = sam.outdeg(v) as u64;
            add(&mut d.count, a, b, 1);
            if deg >= 2 {
                add(&mut d.rs, a, b, 1);
                add(&mut d.excess, a, b, deg - 1);
            } else if deg == 0 {
                add(&mut d.dead, a, b, 1);
            }
        }
        for arr in [&mut d.count, &mut d.rs, &mut d.excess, &mut d.dead] {
            let mut acc = 0u64;
            for x in arr.iter_mut() {
                acc = acc.wrapping_add(*x);
                *x = acc;
            }
            arr.truncate(top + 1);
        }
        d
    }
}

/// Distinct words of length `1..=n_max` of a window, with right and left extensions.
///
/// Levels are tabulated through `n_max + 1` so that extension identities at `n_max` can be checked.
#[derive(Debug, Clone)]
pub struct LanguageTable {
    analysed: SymbolicSequence,
    source: SymbolicSequence,
    surrogate: bool,
    lo: i64,
    hi: i64,
    n_max: usize,
    text: Vec<Symbol>,
    fwd: Sam,
    rev: Sam,
    stats: LevelStats,
    ls: Vec<u64>,
    saturated: Vec<bool>,
}

fn window_bounds(seq: &SymbolicSequence, half: usize) -> (i64, i64) {
    let h = half as i64;
    let (mut lo, mut hi) = match seq.kind() {
        SequenceKind::BiInfinite => (-h, h - 1),
        SequenceKind::RightInfinite => (0, 2 * h - 1),
    };
    let (dlo, dhi) = seq.domain();
    if let Some(d) = dlo {
        lo = lo.max(d);
    }
    if let Some(d) = dhi {
        hi = hi.min(d);
    }
    (lo, hi)
}

/// Tabulates the language of `seq` through `n_max`, doubling the window until every level is stable.
pub fn build_language(seq: &SymbolicSequence, n_max: usize, policy: &SaturationPolicy) -> Result<LanguageTable> {
    if n_max == 0 {
        return domain("n_max must be positive");
    }
    let top = n_max + 1;
    let (analysed, surrogate) = match policy.use_surrogate.then(|| seq.language_surrogate(top)).flatten() {
        Some(s) => (s?, true),
        None => (seq.clone(), false),
    };
    let sigma = analysed.alphabet().len();
    let mut half = policy.initial_half_width.unwrap_or_else(|| 256.max(2 * top));
    // finite data is its own language: one pass over the whole domain
    let finite = matches!(analysed.domain(), (Some(_), Some(_)));
    if let (Some(a), Some(b)) = analysed.domain() {
        half = ((b - a + 1) as usize).min(policy.cap);
    } else {
        half = half.min((policy.cap / 2).max(1));
    }

    // a structural coverage window must fit under the cap, otherwise no level is claimed saturated
    let mut hint_fits = true;
    if let (Some((a, b)), false) = (analysed.coverage_hint(top), finite) {
        let need = match analysed.kind() {
            SequenceKind::BiInfinite => (-a).max(b + 1).max(0) as usize,
            SequenceKind::RightInfinite => (b.max(0) as usize + 2) / 2,
        };
        hint_fits = 2 * need <= policy.cap;
        half = half.max(need.min((policy.cap / 2).max(1)));
    }
    let mut prev: Option<((i64, i64), Vec<u64>)> = None;
    let mut flags = vec![false; top + 1];
    let mut current: Option<((i64, i64), Vec<Symbol>, Sam, LevelStats)> = None;
    loop {
        let (lo, hi) = match analysed.domain() {
            (Some(a), Some(b)) => (a, b.min(a + half as i64 - 1)),
            _ => window_bounds(&analysed, half),
        };
        let len = (hi - lo + 1) as usize;
        let grew = prev.as_ref().map_or(true, |(r, _)| *r != (lo, hi));
        if !grew || (len > policy.cap && current.is_some()) {
            break;
        }
        let text = analysed.window(lo, hi)?.0;
        let fwd = Sam::build(&text, sigma);
        let stats = LevelStats::from_sam(&fwd, top);
        if let Some((_, old)) = &prev {
            for n in 1..=top {
                flags[n] = stats.count[n] > 0 && stats.count[n] == old[n];
            }
        }
        if finite {
            for n in 1..=top {
                flags[n] = stats.count[n] > 0;
            }
        }
        let done = finite || (prev.is_some() && flags[1..].iter().all(|&f| f));
        prev = Some(((lo, hi), stats.count.clone()));
        current = Some(((lo, hi), text, fwd, stats));
        if done || len >= policy.cap {
            break;
        }
        half *= 2;
    }
    if !hint_fits {
        flags.iter_mut().for_each(|f| *f = false);
    }
    let ((lo, hi), text, fwd, stats) = current.expect("at least one window");
    let reversed: Vec<Symbol> = text.iter().rev().copied().collect();
    let rev = Sam::build(&reversed, sigma);
    let ls = {
        let mut d = vec![0u64; top + 2];
        for v in 1..rev.states() as u32 {
            let a = rev.min_len(v) as usize;
            if a > top || rev.outdeg(v) < 2 {
                continue;
            }
            let b = (rev.len[v as usize] as usize).min(top);
            d[a] = d[a].wrapping_add(1);
            d[b + 1] = d[b + 1].wrapping_sub(1);
        }
        let mut acc = 0u64;
        for x in d.iter_mut() {
            acc = acc.wrapping_add(*x);
            *x = acc;
        }
        d.truncate(top + 1);
        d
    };
    Ok(LanguageTable {
        analysed,
        source: seq.clone(),
        surrogate,
        lo,
        hi,
        n_max,
        text,
        fwd,
        rev,
        stats,
        ls,
        saturated: flags,
    })
}

impl LanguageTable {
    /// Table of a single fixed word; every nonempty level counts as saturated.
    pub fn from_word(word: &[Symbol], alphabet: &Alphabet, n_max: usize) -> Result<LanguageTable> {
        let seq = crate::sequence::finite_sequence(
            word.to_vec(),
            0,
            SequenceKind::RightInfinite,
            alphabet.clone(),
            crate::sequence::Provenance::new("word", serde_json::json!({ "word": alphabet.render(word) })),
        )?;
        let policy = SaturationPolicy { initial_half_width: Some(word.len()), cap: word.len().max(1), use_surrogate: false };
        build_language(&seq, n_max, &policy)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The window analysed, in the analysed sequence's coordinates.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn window_symbols(&self) -> &[Symbol] {
        &self.text
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.analysed.alphabet()
    }

    /// The sequence whose language was requested.
    pub fn source(&self) -> &SymbolicSequence {
        &self.source
    }

    /// The sequence actually windowed (the source or its surrogate).
    pub fn analysed(&self) -> &SymbolicSequence {
        &self.analysed
    }

    pub fn used_surrogate(&self) -> bool {
        self.surrogate
    }

    /// Number of distinct n-words, for `1 ≤ n ≤ n_max + 1`.
    pub fn count(&self, n: usize) -> u64 {
        self.stats.count.get(n).copied().unwrap_or(0)
    }

    pub fn is_saturated(&self, n: usize) -> bool {
        self.saturated.get(n).copied().unwrap_or(false)
    }

    pub fn rs_count(&self, n: usize) -> u64 {
        self.stats.rs.get(n).copied().unwrap_or(0)
    }

    pub fn ls_count(&self, n: usize) -> u64 {
        self.ls.get(n).copied().unwrap_or(0)
    }

    /// Σ over right-special n-words of (|ext| − 1).
    pub fn extension_excess(&self, n: usize) -> u64 {
        self.stats.excess.get(n).copied().unwrap_or(0)
    }

    /// n-words with no right extension inside the window (only the window's tail can be one).
    pub fn dead_ends(&self, n: usize) -> u64 {
        self.stats.dead.get(n).copied().unwrap_or(0)
    }

    pub fn word(&self, r: WordRef) -> &[Symbol] {
        &self.text[r.start as usize..(r.start + r.len) as usize]
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        w.is_empty() || self.fwd.walk(w).is_some()
    }

    pub fn right_extensions(&self, w: &[Symbol]) -> Option<Vec<Symbol>> {
        self.fwd.walk(w).map(|v| self.fwd.transitions(v))
    }

    pub fn left_extensions(&self, w: &[Symbol]) -> Option<Vec<Symbol>> {
        self.rev.walk(w.iter().rev()).map(|v| self.rev.transitions(v))
    }

    /// All n-words in length-lex order.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = self
            .refs_where(&self.fwd, n, |_| true)
            .into_iter()
            .map(|r| Word(self.word(r).to_vec()))
            .collect();
        out.sort();
        out
    }

    fn refs_where(&self, sam: &Sam, n: usize, keep: impl Fn(u32) -> bool) -> Vec<WordRef> {
        (1..sam.states() as u32)
            .filter(|&v| sam.min_len(v) as usize <= n && n <= sam.len[v as usize] as usize && keep(v))
            .map(|v| self.ref_for(false, sam.first_end[v as usize] as usize, n))
            .collect()
    }

    /// Right-special states with their length ranges, for census construction.
    pub(crate) fn special_states(&self, left: bool) -> Vec<SpecialState> {
        let sam = if left { &self.rev } else { &self.fwd };
        let top = self.n_max + 1;
        let mut child_special = vec![false; sam.states()];
        let mut child_any = vec![false; sam.states()];
        for u in 1..sam.states() as u32 {
            let p = sam.link[u as usize] as usize;
            child_any[p] = true;
            if sam.outdeg(u) >= 2 {
                child_special[p] = true;
            }
        }
        (1..sam.states() as u32)
            .filter(|&v| sam.outdeg(v) >= 2 && (sam.min_len(v) as usize) <= top)
            .map(|v| SpecialState {
                min_len: sam.min_len(v) as usize,
                max_len: (sam.len[v as usize] as usize).min(top),
                full_len: sam.len[v as usize] as usize,
                first_end: sam.first_end[v as usize] as usize,
                extensions: sam.transitions(v),
                child_special: child_special[v as usize],
            })
            .collect()
    }

    pub(crate) fn ref_for(&self, left: bool, first_end: usize, n: usize) -> WordRef {
        if left {
            WordRef { start: (self.text.len() - 1 - first_end) as u32, len: n as u32 }
        } else {
            WordRef { start: (first_end + 1 - n) as u32, len: n as u32 }
        }
    }

    /// TSV with columns `n, count, saturated`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("n\tcount\tsaturated\n");
        for n in 1..=self.n_max {
            s.push_str(&format!("{n}\t{}\t{}\n", self.count(n), self.is_saturated(n)));
        }
        s
    }

    /// Words of lengths `1..=max_len` with their extension sets.
    pub fn to_json(&self, max_len: usize) -> serde_json::Value {
        let a = self.alphabet();
        let mut levels = BTreeMap::new();
        for n in 1..=max_len.min(self.n_max) {
            let words: Vec<_> = self
                .words(n)
                .into_iter()
                .map(|w| {
                    let r = self.right_extensions(&w).unwrap_or_default();
                    let l = self.left_extensions(&w).unwrap_or_default();
                    serde_json::json!({
                        "word": a.render(&w),
                        "right": r.iter().map(|&s| a.token(s)).collect::<Vec<_>>(),
                        "left": l.iter().map(|&s| a.token(s)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            levels.insert(n.to_string(), serde_json::json!({ "saturated": self.is_saturated(n), "words": words }));
        }
        serde_json::json!({
            "alphabet": a.tokens(),
            "window": [self.lo, self.hi],
            "surrogate": self.surrogate,
            "source": self.source.provenance(),
            "levels": levels,
        })
    }
}

pub(crate) struct SpecialState {
    pub min_len: usize,
    pub max_len: usize,
    pub full_len: usize,
    pub first_end: usize,
    pub extensions: Vec<Symbol>,
    pub child_special: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::periodic_from_str;
    use std::collections::BTreeSet;

    #[test]
    fn periodic_language() {
        let x = periodic_from_str("01").unwrap();
        let t = build_language(&x, 10, &SaturationPolicy::default()).unwrap();
        for n in 1..=10 {
            assert_eq!(t.count(n), 2);
            assert!(t.is_saturated(n));
        }
    }

    #[test]
    fn matches_brute_force_on_a_word() {
        let a = Alphabet::digits(2);
        let w = a.parse("0110100110010110").unwrap();
        let t = LanguageTable::from_word(&w, &a, 8).unwrap();
        for n in 1..=8 {
            let brute: BTreeSet<Word> = w.windows(n).map(|s| Word(s.to_vec())).collect();
            assert_eq!(t.words(n), brute.iter().cloned().collect::<Vec<_>>());
            assert_eq!(t.count(n) as usize, brute.len());
            let ext_total: usize = brute.iter().map(|u| t.right_extensions(u).unwrap().len()).sum();
            let next: BTreeSet<Word> = w.windows(n + 1).map(|s| Word(s.to_vec())).collect();
            assert_eq!(ext_total, next.len());
        }
    }

    #[test]
    fn left_extensions_agree_with_scan() {
        let a = Alphabet::digits(3);
        let w = a.parse("0120210011220").unwrap();
        let t = LanguageTable::from_word(&w, &a, 4).unwrap();
        for n in 1..=4 {
            for u in t.words(n) {
                let mut want: Vec<Symbol> =
                    w.windows(n + 1).filter(|s| s[1..] == u[..]).map(|s| s[0]).collect();
                want.sort();
                want.dedup();
                assert_eq!(t.left_extensions(&u).unwrap(), want);
            }
        }
    }
}
