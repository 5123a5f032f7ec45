//! Shared engine for `… tail . B_{ω_1} B_{ω_2} B_{ω_3} …` where block `B_k` is a product of `j` pieces.
//!
//! With `P_k = B_{ω_1} ⋯ B_{ω_{2^k−1}}` we have `P_k = P_{k−1} B_k P_{k−1}`, so a symbol query descends
//! through at most one level per generation.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::alphabet::Symbol;
use crate::error::{domain, Result};
use crate::rotation::{cylinder, first_hit};
use crate::sequence::{LeftTail, Provenance, SequenceKind, SymbolSource, SymbolicSequence, TailPeriodic};
use crate::alphabet::Alphabet;

use super::ruler::ruler;
use super::schedule::{Entry, SEARCH_CAP};
use super::stitched::StitchWord;
use super::sturmian::Sturmian;

#[derive(Debug, Clone)]
pub(crate) enum Content {
    Run(Symbol),
    /// Reads Sturmian `q` from `word.start`; `None` when the word was never computed (beyond the cap).
    Stitched { q: usize, word: Option<StitchWord> },
}

#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub len: Entry,
    pub content: Content,
}

#[derive(Debug, Clone)]
pub(crate) enum Tail {
    Constant(Symbol),
    /// Left-infinite limit of the nested stitched words of Sturmian `q`, one word per generation.
    Stitched { q: usize, words: Vec<StitchWord> },
}

/// A Sturmian coding whose two letters are mapped into a host alphabet.
#[derive(Debug, Clone)]
pub(crate) struct Embedded {
    pub sturmian: Sturmian,
    pub symbols: [Symbol; 2],
}

impl Embedded {
    fn at(&self, t: i64) -> Result<Symbol> {
        Ok(self.symbols[self.sturmian.bit(t)? as usize])
    }
}

impl SymbolSource for Embedded {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        self.at(i)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RulerFamily {
    /// `blocks[k-1]` = pieces of `B_k`; generations past the end never get queried because some
    /// piece of the last stored block is infinite.
    pub blocks: Vec<Vec<Piece>>,
    pub tail: Tail,
    pub sturmians: Vec<Embedded>,
    pub alphabet: Alphabet,
    pub provenance: Provenance,
    block_len: Vec<u128>,
    prefix_len: Vec<u128>,
}

fn len_of(e: Entry) -> u128 {
    e.value()
}

impl RulerFamily {
    pub fn new(
        blocks: Vec<Vec<Piece>>,
        tail: Tail,
        sturmians: Vec<Embedded>,
        alphabet: Alphabet,
        provenance: Provenance,
    ) -> Self {
        let block_len: Vec<u128> = blocks
            .iter()
            .map(|b| b.iter().fold(0u128, |a, p| a.saturating_add(len_of(p.len))))
            .collect();
        let mut prefix_len = vec![0u128];
        for k in 1..=blocks.len() {
            let prev = prefix_len[k - 1];
            prefix_len.push(prev.saturating_mul(2).saturating_add(block_len[k - 1]));
        }
        RulerFamily { blocks, tail, sturmians, alphabet, provenance, block_len, prefix_len }
    }

    fn piece_symbol(&self, piece: &Piece, offset: u128) -> Result<Symbol> {
        match &piece.content {
            Content::Run(s) => Ok(*s),
            Content::Stitched { q, word } => match word {
                Some(w) => self.sturmians[*q].at(w.start + offset as i64),
                None => domain("index lies inside a stitched word beyond the schedule cap"),
            },
        }
    }

    fn right(&self, i: u128) -> Result<Symbol> {
        let mut k = match self.prefix_len.iter().position(|&l| l > i) {
            Some(k) => k,
            None => return domain("index beyond the generated blocks"),
        };
        let mut i = i;
        loop {
            let a = self.prefix_len[k - 1];
            if i < a {
                k -= 1;
                continue;
            }
            i -= a;
            if i < self.block_len[k - 1] {
                let mut off = i;
                for piece in &self.blocks[k - 1] {
                    let l = len_of(piece.len);
                    if off < l {
                        return self.piece_symbol(piece, off);
                    }
                    off -= l;
                }
                unreachable!("offset inside block");
            }
            i -= self.block_len[k - 1];
            k -= 1;
        }
    }

    fn left(&self, t: u64) -> Result<Symbol> {
        match &self.tail {
            Tail::Constant(s) => Ok(*s),
            // past the last finite stitched word the next one is infinite: keep reading S leftwards
            Tail::Stitched { q, words } => match words.iter().find(|w| w.len >= t).or(words.last()) {
                Some(w) => self.sturmians[*q].at(w.start + w.len as i64 - t as i64),
                None => self.sturmians[*q].at(-(t as i64)),
            },
        }
    }

    /// Block `k` with every piece longer than `n` replaced by a representative of length ≈ n.
    fn capped_block(&self, k: usize, n: u64, long_stitch: &[Option<Vec<Symbol>>]) -> Result<Vec<Symbol>> {
        let mut out = Vec::new();
        for piece in &self.blocks[k.min(self.blocks.len()) - 1] {
            let long = k > self.blocks.len() || len_of(piece.len) > n as u128;
            self.capped_piece(piece, long, n, long_stitch, &mut out)?;
        }
        Ok(out)
    }

    fn capped_piece(
        &self,
        piece: &Piece,
        long: bool,
        n: u64,
        long_stitch: &[Option<Vec<Symbol>>],
        out: &mut Vec<Symbol>,
    ) -> Result<()> {
        match (&piece.content, long) {
            (Content::Run(s), _) => {
                let l = if long { n + 1 } else { len_of(piece.len) as u64 };
                out.extend(std::iter::repeat(*s).take(l as usize));
            }
            (Content::Stitched { q, .. }, true) => {
                out.extend_from_slice(long_stitch[*q].as_ref().expect("representative computed"));
            }
            (Content::Stitched { q, word }, false) => {
                let w = word.expect("short stitched words are computed");
                for o in 0..w.len {
                    out.push(self.sturmians[*q].at(w.start + o as i64)?);
                }
            }
        }
        Ok(())
    }

    /// Same words of length ≤ `n` as the full sequence, with a periodic right side. Entries beyond
    /// the cap are finite in the family, so here they are capped like every other long piece.
    pub fn surrogate(&self, n: u64) -> Option<Result<SymbolicSequence>> {
        let first_long = (1..=self.blocks.len() + 1)
            .find(|&k| k > self.blocks.len() || len_of(self.blocks[k - 1][0].len) > n as u128)?;
        if first_long > 40 {
            return None;
        }
        // representatives for stitched columns
        let mut reps: Vec<Option<Vec<Symbol>>> = vec![None; self.sturmians.len()];
        let mut rep_end: Vec<Option<i64>> = vec![None; self.sturmians.len()];
        for q in self.stitched_columns() {
            let w = self.first_long_stitch(q, n)?;
            match representative(&self.sturmians[q], w, n) {
                Ok((start, word)) => {
                    rep_end[q] = Some(start + word.len() as i64);
                    reps[q] = Some(word);
                }
                Err(e) => return Some(Err(e)),
            }
        }
        let period_blocks = 1u64 << (first_long - 1);
        let mut period = Vec::new();
        for b in 1..=period_blocks {
            let k = (ruler(b) as usize).min(first_long);
            match self.capped_block(k, n, &reps) {
                Ok(block) => period.extend(block),
                Err(e) => return Some(Err(e)),
            }
        }
        let left = match &self.tail {
            Tail::Constant(s) => LeftTail::Constant(*s),
            Tail::Stitched { q, .. } => {
                let emb = self.sturmians[*q].clone();
                let seq = SymbolicSequence::new(
                    emb,
                    SequenceKind::BiInfinite,
                    self.alphabet.clone(),
                    Provenance::new("embedded-sturmian", serde_json::Value::Null),
                );
                LeftTail::Borrowed { seq, end: rep_end[*q].expect("tail column is stitched") }
            }
        };
        let prov = Provenance::new("surrogate", serde_json::json!({ "n": n, "source": self.provenance }));
        let src = TailPeriodic { left, prefix: Vec::new(), period };
        Some(Ok(SymbolicSequence::new(src, SequenceKind::BiInfinite, self.alphabet.clone(), prov)))
    }

    fn stitched_columns(&self) -> Vec<usize> {
        self.blocks
            .first()
            .map(|b| {
                b.iter()
                    .filter_map(|p| match p.content {
                        Content::Stitched { q, .. } => Some(q),
                        _ => None,
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// The first word of column `q` longer than `n`; an uncomputed (beyond-cap) word is stood in
    /// for by its predecessor, which any admissible choice starts and ends with.
    fn first_long_stitch(&self, q: usize, n: u64) -> Option<StitchWord> {
        let mut prev = StitchWord { start: 0, len: 0 };
        for block in &self.blocks {
            for p in block {
                if let Content::Stitched { q: qq, word: Some(w) } = &p.content {
                    if *qq != q {
                        continue;
                    }
                    match p.len.finite() {
                        None => return Some(prev),
                        Some(l) if l > n => return Some(*w),
                        Some(_) => prev = *w,
                    }
                }
            }
        }
        None
    }
}

/// Least power-of-two length `L ≥ 2n+2` such that the `L` symbols after (or before) `from`
/// contain every Sturmian word of length `n`.
fn cover_length(s: &Embedded, from: i64, n: u64, forward: bool) -> Result<u64> {
    let mut cover = 2 * n + 2;
    loop {
        let lo = if forward { from } else { from - cover as i64 };
        let text: Vec<Symbol> = (0..cover).map(|o| s.at(lo + o as i64)).collect::<Result<_>>()?;
        let distinct: HashSet<&[Symbol]> = text.windows(n as usize).collect();
        if distinct.len() as u64 == n + 1 {
            return Ok(cover);
        }
        cover *= 2;
        if cover > 1 << 30 {
            return domain("Sturmian factor does not cover its language; rotation too close to rational");
        }
    }
}

/// A factor `S[t, t+L)` of the Sturmian starting at `w`, sharing its last `min(n, |w|)` symbols
/// with `w` and containing every Sturmian word of length `n`.
fn representative(s: &Embedded, w: StitchWord, n: u64) -> Result<(i64, Vec<Symbol>)> {
    let rot = &s.sturmian.rotation;
    let start = w.start;
    let cover = cover_length(s, start, n, true)?;
    let m = n.min(w.len);
    let d = if m == 0 {
        cover
    } else {
        let arc = cylinder(rot.beta, rot.point(w.start + (w.len - m) as i64), m);
        let base = rot.point(start).wrapping_sub(arc.lo);
        first_hit(rot.beta, base, &BigUint::from(arc.len), cover - m, SEARCH_CAP)
            .ok_or_else(|| crate::error::Error::Domain("no return of the stitched suffix".into()))?
    };
    let word: Vec<Symbol> = (0..d + m).map(|o| s.at(start + o as i64)).collect::<Result<_>>()?;
    Ok((start, word))
}

impl SymbolSource for RulerFamily {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        if i >= 0 {
            self.right(i as u128)
        } else {
            self.left(i.unsigned_abs())
        }
    }

    fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        self.surrogate(n_max as u64)
    }
}
