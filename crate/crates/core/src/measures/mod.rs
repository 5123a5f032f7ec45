//! Empirical measures `ν_n(x) = (1/n) Σ_{i<n} δ_{σ^i x}` on cylinders, and the weak metric.

mod extract;

pub use extract::{
    extract_generic_candidates, generic_limit_probe, rs_window_cover_check, CoverReport, ExtractionParams,
    ExtractionReport, GenericCandidate, ProbeReport,
};

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use serde::Serialize;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{domain, Result};
use crate::sequence::SymbolicSequence;

/// Cylinder counts of words of length `1..=depth` starting at `n` consecutive positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    alphabet: Alphabet,
    depth: usize,
    n: u64,
    start: i64,
    counts: Vec<BTreeMap<Word, u64>>,
}

impl EmpiricalMeasure {
    /// `ν_n(σ^start x)`: `freq[w]` = occurrences of `w` beginning in `[start, start + n)` divided by `n`.
    pub fn empirical(seq: &SymbolicSequence, start: i64, n: u64, depth: usize) -> Result<Self> {
        if depth == 0 || n < depth as u64 {
            return domain(format!("need n ≥ depth ≥ 1 (n = {n}, depth = {depth})"));
        }
        let text = seq.window(start, start + n as i64 + depth as i64 - 2)?;
        let mut m = Self::from_symbols(seq.alphabet(), &text, n, depth)?;
        m.start = start;
        Ok(m)
    }

    /// Counts over the first `n` positions of `text`, which must hold `n + depth − 1` symbols.
    pub fn from_symbols(alphabet: &Alphabet, text: &[Symbol], n: u64, depth: usize) -> Result<Self> {
        if depth == 0 || n == 0 || text.len() < n as usize + depth - 1 {
            return domain(format!("need {} symbols for n = {n}, depth = {depth}", n as usize + depth - 1));
        }
        let sigma = alphabet.len() as u64;
        if (sigma as f64).powi(depth as i32) > u64::MAX as f64 / 2.0 {
            return domain("depth too large for the alphabet");
        }
        let mut counts = Vec::with_capacity(depth);
        for d in 1..=depth {
            let mut h: HashMap<u64, u64> = HashMap::new();
            for i in 0..n as usize {
                let code = text[i..i + d].iter().fold(0u64, |acc, s| acc * sigma + s.0 as u64);
                *h.entry(code).or_default() += 1;
            }
            let level: BTreeMap<Word, u64> = h
                .into_iter()
                .map(|(mut code, c)| {
                    let mut w = vec![Symbol(0); d];
                    for slot in w.iter_mut().rev() {
                        *slot = Symbol((code % sigma) as u8);
                        code /= sigma;
                    }
                    (Word(w), c)
                })
                .collect();
            counts.push(level);
        }
        Ok(EmpiricalMeasure { alphabet: alphabet.clone(), depth, n, start: 0, counts })
    }

    /// The invariant measure on the orbit of `cycle^∞`.
    pub fn periodic(alphabet: &Alphabet, cycle: &[Symbol], depth: usize) -> Result<Self> {
        if cycle.is_empty() {
            return domain("empty cycle");
        }
        alphabet.check(cycle)?;
        let text: Vec<Symbol> = (0..cycle.len() + depth).map(|k| cycle[k % cycle.len()]).collect();
        Self::from_symbols(alphabet, &text, cycle.len() as u64, depth)
    }

    /// `δ_{s^∞}`.
    pub fn point_mass(alphabet: &Alphabet, s: Symbol, depth: usize) -> Result<Self> {
        Self::periodic(alphabet, &[s], depth)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn count(&self, w: &[Symbol]) -> u64 {
        if w.is_empty() {
            return self.n;
        }
        self.counts.get(w.len() - 1).and_then(|m| m.get(&Word(w.to_vec()))).copied().unwrap_or(0)
    }

    /// Exact frequency; `None` beyond the tabulated depth.
    pub fn freq(&self, w: &[Symbol]) -> Option<Ratio<u64>> {
        (w.len() <= self.depth).then(|| Ratio::new(self.count(w), self.n))
    }

    pub fn freq_f64(&self, w: &[Symbol]) -> Option<f64> {
        (w.len() <= self.depth).then(|| self.count(w) as f64 / self.n as f64)
    }

    /// Words of length `d` with nonzero count.
    pub fn support(&self, d: usize) -> impl Iterator<Item = (&Word, &u64)> {
        self.counts[d - 1].iter()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: Vec<serde_json::Value> = self
            .counts
            .iter()
            .map(|m| {
                let obj: serde_json::Map<String, serde_json::Value> = m
                    .iter()
                    .map(|(w, c)| (self.alphabet.render(w), serde_json::Value::String(format!("{c}/{}", self.n))))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "start": self.start, "n": self.n, "depth": self.depth, "freq": levels })
    }
}

/// The weak metric truncated after the first `truncation` words in length-lex order (empty word excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeakMetricSpec {
    pub truncation: usize,
}

impl Default for WeakMetricSpec {
    fn default() -> Self {
        WeakMetricSpec { truncation: 16 }
    }
}

impl WeakMetricSpec {
    /// `w_1, …, w_T`.
    pub fn enumerate(&self, alphabet: &Alphabet) -> Vec<Word> {
        let sigma = alphabet.len();
        let mut out = Vec::with_capacity(self.truncation);
        let mut len = 1;
        while out.len() < self.truncation {
            let total = (sigma as u128).saturating_pow(len as u32);
            let mut code = 0u128;
            while code < total && out.len() < self.truncation {
                let mut w = vec![Symbol(0); len];
                let mut c = code;
                for slot in w.iter_mut().rev() {
                    *slot = Symbol((c % sigma as u128) as u8);
                    c /= sigma as u128;
                }
                out.push(Word(w));
                code += 1;
            }
            len += 1;
        }
        out
    }

    /// Longest enumerated word, i.e. the cylinder depth the metric needs.
    pub fn required_depth(&self, alphabet: &Alphabet) -> usize {
        self.enumerate(alphabet).last().map_or(0, Word::len)
    }

    /// `Σ_{n>T} 2^{−n} = 2^{−T}`.
    pub fn tail_bound(&self) -> f64 {
        0.5f64.powi(self.truncation as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakDistance {
    pub value: f64,
    /// The true distance lies in `[value, value + tail_bound]`.
    pub tail_bound: f64,
}

pub fn weak_distance(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure, spec: &WeakMetricSpec) -> Result<WeakDistance> {
    if mu.alphabet != nu.alphabet {
        return domain("measures over different alphabets");
    }
    let words = spec.enumerate(&mu.alphabet);
    let need = words.last().map_or(0, Word::len);
    if mu.depth < need || nu.depth < need {
        return domain(format!("metric with T = {} needs depth {need}", spec.truncation));
    }
    let mut value = 0.0;
    let mut weight = 1.0;
    for w in &words {
        weight *= 0.5;
        let a = mu.count(w) as f64 / mu.n as f64;
        let b = nu.count(w) as f64 / nu.n as f64;
        value += weight * (a - b).abs();
    }
    Ok(WeakDistance { value, tail_bound: spec.tail_bound() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::staircase;
    use crate::sequence::periodic_from_str;

    #[test]
    fn periodic_frequencies_are_exact() {
        let x = periodic_from_str("01").unwrap();
        let m = EmpiricalMeasure::empirical(&x, 0, 10, 4).unwrap();
        let a = x.alphabet().clone();
        assert_eq!(m.freq(&a.parse("0").unwrap()), Some(Ratio::new(1, 2)));
        assert_eq!(m.freq(&a.parse("1").unwrap()), Some(Ratio::new(1, 2)));
        assert_eq!(m.freq(&a.parse("00").unwrap()), Some(Ratio::new(0, 1)));
        assert_eq!(m.freq(&a.parse("00000").unwrap()), None);
        assert!(EmpiricalMeasure::empirical(&x, 0, 2, 3).is_err());
        let p = EmpiricalMeasure::periodic(&a, &a.parse("01").unwrap(), 4).unwrap();
        let d = weak_distance(&m, &p, &WeakMetricSpec::default()).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn enumeration_is_length_lex() {
        let a = Alphabet::digits(2);
        let ws: Vec<String> = WeakMetricSpec { truncation: 7 }.enumerate(&a).iter().map(|w| a.render(w)).collect();
        assert_eq!(ws, ["0", "1", "00", "01", "10", "11", "000"]);
        assert_eq!(WeakMetricSpec::default().required_depth(&a), 4);
    }

    #[test]
    fn distance_between_point_masses() {
        // direct summation: |δ_0 − δ_1| is 1 exactly on the constant words among w_1..w_20
        let a = Alphabet::digits(2);
        let spec = WeakMetricSpec { truncation: 20 };
        let mut oracle = 0.0;
        let mut idx = 0;
        'outer: for len in 1..=5u32 {
            for code in 0..(1u32 << len) {
                idx += 1;
                if idx > 20 {
                    break 'outer;
                }
                if code == 0 || code == (1 << len) - 1 {
                    oracle += 0.5f64.powi(idx);
                }
            }
        }
        assert_eq!(oracle, 0.898529052734375);
        let d0 = EmpiricalMeasure::point_mass(&a, Symbol(0), 5).unwrap();
        let d1 = EmpiricalMeasure::point_mass(&a, Symbol(1), 5).unwrap();
        let d = weak_distance(&d0, &d1, &spec).unwrap();
        assert_eq!(d.value, oracle);
        assert_eq!(d.tail_bound, 0.5f64.powi(20));
    }

    #[test]
    fn staircase_block_count_oracle() {
        // run-length arithmetic: run r (r = 1, 2, …) has length r, is 0s for odd r, and starts at r(r−1)/2
        let n: u64 = 1_000_000;
        let mut c = [[0u64; 2]; 2];
        let mut r = 1u64;
        while r * (r - 1) / 2 < n {
            let (s, e) = (r * (r - 1) / 2, r * (r + 1) / 2);
            let b = (r % 2 == 0) as usize;
            let last = e.min(n);
            c[b][b] += last - s - (last == e) as u64;
            if last == e {
                c[b][1 - b] += 1;
            }
            r += 1;
        }
        let m = EmpiricalMeasure::empirical(&staircase(), 0, n, 2).unwrap();
        let a = Alphabet::digits(2);
        for (w, want) in [("00", c[0][0]), ("01", c[0][1]), ("10", c[1][0]), ("11", c[1][1])] {
            assert_eq!(m.count(&a.parse(w).unwrap()), want, "{w}");
        }
        assert_eq!(m.count(&a.parse("0").unwrap()), c[0][0] + c[0][1]);
        assert_eq!((c[0][0] + c[0][1], c[0][0], c[1][1], c[0][1]), (499_849, 499_142, 499_445, 707));
    }
}
