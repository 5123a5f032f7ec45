use crate::alphabet::{Alphabet, Symbol};
use crate::error::Result;
use crate::sequence::{LeftTail, Provenance, SequenceKind, SymbolSource, SymbolicSequence, TailPeriodic};

use super::MinimalSystem;

/// `0^∞ . 0 11 000 1111 ⋯`: block `m ≥ 1` has length `m` and symbol `(m + 1) mod 2`.
#[derive(Debug, Clone, Copy)]
pub struct Staircase;

/// Block containing index `i ≥ 0`: the largest `m` with `m(m−1)/2 ≤ i`.
pub fn staircase_block(i: u64) -> u64 {
    let i = i as u128;
    let mut m = ((1 + 8 * i).isqrt() + 1) / 2;
    while m * (m - 1) / 2 > i {
        m -= 1;
    }
    while (m + 1) * m / 2 <= i {
        m += 1;
    }
    m as u64
}

/// Closed-form counts over positions `[start, start + n)`: symbol counts `c[a]` and counts
/// `p[a][b]` of the pairs `x_i x_{i+1}`, summed block by block.
pub fn staircase_counts(start: u64, n: u64) -> ([u64; 2], [[u64; 2]; 2]) {
    let (mut c, mut p) = ([0u64; 2], [[0u64; 2]; 2]);
    let (lo, hi) = (start, start + n);
    if n == 0 {
        return (c, p);
    }
    let mut m = staircase_block(lo);
    loop {
        let (a, b) = (m * (m - 1) / 2, m * (m + 1) / 2);
        if a >= hi {
            break;
        }
        let s = ((m + 1) % 2) as usize;
        let overlap = |x: u64, y: u64| y.min(hi).saturating_sub(x.max(lo));
        c[s] += overlap(a, b);
        p[s][s] += overlap(a, b - 1);
        if (lo..hi).contains(&(b - 1)) {
            p[s][1 - s] += 1;
        }
        m += 1;
    }
    (c, p)
}

impl SymbolSource for Staircase {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        if i < 0 {
            return Ok(Symbol(0));
        }
        Ok(Symbol(((staircase_block(i as u64) + 1) % 2) as u8))
    }

    fn fill(&self, start: i64, out: &mut [Symbol]) -> Result<()> {
        let mut i = start;
        let mut k = 0;
        while k < out.len() && i < 0 {
            out[k] = Symbol(0);
            k += 1;
            i += 1;
        }
        if k == out.len() {
            return Ok(());
        }
        let mut m = staircase_block(i as u64);
        let mut end = m * (m + 1) / 2; // first index of block m + 1
        while k < out.len() {
            if i as u64 >= end {
                m += 1;
                end = m * (m + 1) / 2;
            }
            out[k] = Symbol(((m + 1) % 2) as u8);
            k += 1;
            i += 1;
        }
        Ok(())
    }

    fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        let n = n_max as u64;
        let mut prefix = Vec::new();
        for m in 1..=n {
            prefix.extend(std::iter::repeat(Symbol(((m + 1) % 2) as u8)).take(m as usize));
        }
        let mut period = Vec::new();
        for m in [n + 1, n + 2] {
            period.extend(std::iter::repeat(Symbol(((m + 1) % 2) as u8)).take(n_max + 1));
        }
        let src = TailPeriodic { left: LeftTail::Constant(Symbol(0)), prefix, period };
        let prov = Provenance::new("surrogate", serde_json::json!({ "n": n_max, "source": "staircase" }));
        Some(Ok(SymbolicSequence::new(src, SequenceKind::BiInfinite, Alphabet::digits(2), prov)))
    }
}

pub fn staircase() -> SymbolicSequence {
    let minimal = vec![
        MinimalSystem::Periodic { cycle: vec![Symbol(0)].into() },
        MinimalSystem::Periodic { cycle: vec![Symbol(1)].into() },
    ];
    SymbolicSequence::new(
        Staircase,
        SequenceKind::BiInfinite,
        Alphabet::digits(2),
        Provenance::new("staircase", serde_json::json!({})),
    )
    .with_minimal_systems(minimal)
}

/// `0^∞ . 1^∞`.
pub fn two_tails() -> SymbolicSequence {
    let src = TailPeriodic { left: LeftTail::Constant(Symbol(0)), prefix: Vec::new(), period: vec![Symbol(1)] };
    let minimal = vec![
        MinimalSystem::Periodic { cycle: vec![Symbol(0)].into() },
        MinimalSystem::Periodic { cycle: vec![Symbol(1)].into() },
    ];
    SymbolicSequence::new(
        src,
        SequenceKind::BiInfinite,
        Alphabet::digits(2),
        Provenance::new("two-tails", serde_json::json!({})),
    )
    .with_minimal_systems(minimal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_prefix() {
        assert_eq!(staircase().render(0, 20).unwrap(), "011000111100000111111");
    }

    #[test]
    fn blocks_symbol_by_symbol() {
        let x = staircase();
        let mut i = 0i64;
        for m in 1..200u64 {
            for _ in 0..m {
                assert_eq!(x.symbol_at(i), Symbol(((m + 1) % 2) as u8));
                assert_eq!(staircase_block(i as u64), m);
                i += 1;
            }
        }
        let w = x.window(-5, 3000).unwrap();
        for (k, s) in w.iter().enumerate() {
            assert_eq!(*s, x.symbol_at(k as i64 - 5));
        }
    }
}
