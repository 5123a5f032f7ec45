//! Suffix automaton over a symbol window.

use crate::alphabet::Symbol;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct Sam {
    sigma: usize,
    pub len: Vec<u32>,
    pub link: Vec<u32>,
    /// End position of the first occurrence of the state's strings.
    pub first_end: Vec<u32>,
    next: Vec<u32>,
}

impl Sam {
    pub fn build(text: &[Symbol], sigma: usize) -> Sam {
        let cap = 2 * text.len() + 2;
        let mut sam = Sam {
            sigma,
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            first_end: Vec::with_capacity(cap),
            next: Vec::with_capacity(cap * sigma),
        };
        sam.push(0, NONE, 0);
        let mut last = 0u32;
        for (pos, &s) in text.iter().enumerate() {
            let c = s.index();
            let cur = sam.push(sam.len[last as usize] + 1, NONE, pos as u32);
            let mut p = last;
            while p != NONE && sam.next[p as usize * sigma + c] == NONE {
                sam.next[p as usize * sigma + c] = cur;
                p = sam.link[p as usize];
            }
            if p == NONE {
                sam.link[cur as usize] = 0;
            } else {
                let q = sam.next[p as usize * sigma + c];
                if sam.len[p as usize] + 1 == sam.len[q as usize] {
                    sam.link[cur as usize] = q;
                } else {
                    let clone = sam.push(sam.len[p as usize] + 1, sam.link[q as usize], sam.first_end[q as usize]);
                    let (qs, cs) = (q as usize * sigma, clone as usize * sigma);
                    for k in 0..sigma {
                        sam.next[cs + k] = sam.next[qs + k];
                    }
                    while p != NONE && sam.next[p as usize * sigma + c] == q {
                        sam.next[p as usize * sigma + c] = clone;
                        p = sam.link[p as usize];
                    }
                    sam.link[q as usize] = clone;
                    sam.link[cur as usize] = clone;
                }
            }
            last = cur;
        }
        sam
    }

    fn push(&mut self, len: u32, link: u32, first_end: u32) -> u32 {
        let id = self.len.len() as u32;
        self.len.push(len);
        self.link.push(link);
        self.first_end.push(first_end);
        self.next.extend(std::iter::repeat(NONE).take(self.sigma));
        id
    }

    pub fn states(&self) -> usize {
        self.len.len()
    }

    pub fn step(&self, v: u32, s: Symbol) -> Option<u32> {
        if s.index() >= self.sigma {
            return None;
        }
        let t = self.next[v as usize * self.sigma + s.index()];
        (t != NONE).then_some(t)
    }

    pub fn outdeg(&self, v: u32) -> usize {
        let row = &self.next[v as usize * self.sigma..(v as usize + 1) * self.sigma];
        row.iter().filter(|&&t| t != NONE).count()
    }

    pub fn transitions(&self, v: u32) -> Vec<Symbol> {
        let row = &self.next[v as usize * self.sigma..(v as usize + 1) * self.sigma];
        row.iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(|(k, _)| Symbol(k as u8))
            .collect()
    }

    pub fn walk<'a>(&self, w: impl IntoIterator<Item = &'a Symbol>) -> Option<u32> {
        let mut v = 0u32;
        for &s in w {
            v = self.step(v, s)?;
        }
        Some(v)
    }

    /// Shortest length represented by state `v` (the root represents only the empty word).
    pub fn min_len(&self, v: u32) -> u32 {
        if v == 0 {
            0
        } else {
            self.len[self.link[v as usize] as usize] + 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn distinct_substring_counts_match_brute_force() {
        let text: Vec<Symbol> = [0u8, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 2, 1, 0]
            .iter()
            .map(|&k| Symbol(k))
            .collect();
        let sam = Sam::build(&text, 3);
        for n in 1..=text.len() {
            let brute: HashSet<&[Symbol]> = text.windows(n).collect();
            let by_sam = (1..sam.states() as u32)
                .filter(|&v| sam.min_len(v) as usize <= n && n <= sam.len[v as usize] as usize)
                .count();
            assert_eq!(brute.len(), by_sam, "n = {n}");
        }
    }
}
