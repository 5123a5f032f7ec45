//! Canonical exponent schedules `n_k^p` for the ruler-driven families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::growth::GrowthFunction;
use super::sturmian::{Sturmian, SturmianParams};
use super::stitched::{first_stitch, next_stitch, StitchWord};

/// Largest value an entry may take; larger requirements become [`Entry::BeyondCap`].
pub const SEARCH_CAP: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Entry {
    Finite(u64),
    /// The canonical value exceeds [`SEARCH_CAP`]; it behaves as +∞ for every finite query.
    BeyondCap,
}

impl Entry {
    pub fn finite(self) -> Option<u64> {
        match self {
            Entry::Finite(n) => Some(n),
            Entry::BeyondCap => None,
        }
    }

    /// Value as `u128`, with `BeyondCap` mapped to `u128::MAX`.
    pub fn value(self) -> u128 {
        self.finite().map_or(u128::MAX, |n| n as u128)
    }
}

/// Why an entry has the value it has.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintRecord {
    pub k: usize,
    pub p: usize,
    pub value: Entry,
    /// `(name, rhs)` for each direct constraint `n > rhs`.
    pub direct: Vec<(String, u128)>,
    /// `(name, rhs)` for each constraint `g(n) > rhs`.
    pub growth: Vec<(String, u128)>,
    /// Value before stitching inflation, when inflated.
    pub before_stitch: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ExponentSchedule {
    j: usize,
    i: usize,
    g: GrowthFunction,
    margin: u64,
    /// `entries[k-1][p-1]`; generations past the end are entirely beyond the cap.
    entries: Vec<Vec<Entry>>,
    log: Vec<ConstraintRecord>,
    sturmians: Vec<SturmianParams>,
    /// `stitch[q][k-1]` for stitched column `p = j − i + 1 + q`.
    stitch: Vec<Vec<Option<StitchWord>>>,
}

/// Tokens for the `q`-th stitched Sturmian: `c/d`, `e/f`, `g/h`, …
pub fn stitched_tokens(q: usize) -> (String, String) {
    let base = b'c' + 2 * q as u8;
    ((base as char).to_string(), ((base + 1) as char).to_string())
}

/// Default Sturmians for `i` stitched columns: alternating golden/silver rotations with fresh tokens.
pub fn default_sturmians(i: usize) -> Vec<SturmianParams> {
    (0..i)
        .map(|q| {
            let base = if q % 2 == 0 { SturmianParams::golden() } else { SturmianParams::new(super::sturmian::Real::silver()) };
            let (z, o) = stitched_tokens(q);
            base.relabeled(&z, &o)
        })
        .collect()
}

/// The canonical schedule; stitched columns (when `i > 0`) use [`default_sturmians`].
pub fn make_schedule(j: usize, i: usize, g: &GrowthFunction, margin: u64) -> Result<ExponentSchedule> {
    make_schedule_with(j, i, g, margin, &default_sturmians(i))
}

pub fn make_schedule_with(
    j: usize,
    i: usize,
    g: &GrowthFunction,
    margin: u64,
    sturmians: &[SturmianParams],
) -> Result<ExponentSchedule> {
    if j < 2 || i > j {
        return Err(Error::Schedule(format!("need j ≥ 2 and 0 ≤ i ≤ j, got j = {j}, i = {i}")));
    }
    if margin == 0 {
        return Err(Error::Schedule("margin must be positive".into()));
    }
    if sturmians.len() != i {
        return Err(Error::Schedule(format!("{i} stitched columns need {i} Sturmians, got {}", sturmians.len())));
    }
    let rotations: Vec<Sturmian> = sturmians.iter().cloned().map(Sturmian::new).collect::<Result<_>>()?;
    let mut s = ExponentSchedule {
        j,
        i,
        g: g.clone(),
        margin,
        entries: Vec::new(),
        log: Vec::new(),
        sturmians: sturmians.to_vec(),
        stitch: vec![Vec::new(); i],
    };
    let mut total: u128 = 0;
    let mut prev: u128 = 0;
    let mut k = 1usize;
    loop {
        let mut row: Vec<Entry> = Vec::with_capacity(j);
        for p in 1..=j {
            let mut direct = vec![("growth".to_string(), prev)];
            if p >= 3 {
                direct.push(("disjoint".to_string(), row[p - 2].value().saturating_add(row[p - 3].value())));
            }
            let mut growth = vec![("sharp".to_string(), total)];
            if p == 1 && k >= 2 {
                let r = &s.entries[k - 2];
                let l = s.l_sum(k - 1);
                let inner = r[j - 1].value().saturating_add(r[0].value()).saturating_add(l);
                growth.push(("liminf".to_string(), inner.saturating_mul(j as u128 + 2)));
            }
            let lb = direct.iter().map(|(_, r)| r.saturating_add(margin as u128)).max().unwrap();
            let target = growth.iter().map(|(_, r)| r.saturating_add(margin as u128)).max().unwrap();
            let mut value = if lb > SEARCH_CAP as u128 {
                Entry::BeyondCap
            } else {
                match g.first_reaching(target, lb as u64, SEARCH_CAP) {
                    Some(n) => Entry::Finite(n),
                    None => {
                        if g.eval(SEARCH_CAP) <= g.eval(1) {
                            return Err(Error::Schedule(format!(
                                "{} is not unbounded on [1, 2^62]",
                                g.tag()
                            )));
                        }
                        Entry::BeyondCap
                    }
                }
            };
            let mut before = None;
            if p > j - i {
                let q = p - (j - i) - 1;
                let w = match (value, k) {
                    (Entry::Finite(n), 1) => first_stitch(&rotations[q], n),
                    (Entry::Finite(n), _) => match s.stitch[q][k - 2] {
                        Some(prev_w) => next_stitch(&rotations[q], prev_w, n, SEARCH_CAP),
                        None => None,
                    },
                    (Entry::BeyondCap, _) => None,
                };
                match w {
                    Some(w) => {
                        if Entry::Finite(w.len) != value {
                            before = value.finite();
                        }
                        value = Entry::Finite(w.len);
                    }
                    None => value = Entry::BeyondCap,
                }
                s.stitch[q].push(w);
            }
            s.log.push(ConstraintRecord { k, p, value, direct, growth, before_stitch: before });
            row.push(value);
            total = total.saturating_add(value.value());
            prev = value.value();
        }
        let done = row.iter().any(|e| *e == Entry::BeyondCap);
        s.entries.push(row);
        if done {
            break;
        }
        k += 1;
    }
    Ok(s)
}

impl ExponentSchedule {
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn g(&self) -> &GrowthFunction {
        &self.g
    }

    pub fn margin(&self) -> u64 {
        self.margin
    }

    pub fn sturmians(&self) -> &[SturmianParams] {
        &self.sturmians
    }

    /// Number of stored generations (the last one contains a beyond-cap entry).
    pub fn generations(&self) -> usize {
        self.entries.len()
    }

    /// `n_k^p`, 1-based.
    pub fn entry(&self, k: usize, p: usize) -> Entry {
        assert!(k >= 1 && (1..=self.j).contains(&p));
        self.entries.get(k - 1).map_or(Entry::BeyondCap, |r| r[p - 1])
    }

    pub fn log(&self) -> &[ConstraintRecord] {
        &self.log
    }

    pub(crate) fn stitch_word(&self, q: usize, k: usize) -> Option<StitchWord> {
        self.stitch.get(q).and_then(|c| c.get(k - 1)).copied().flatten()
    }

    /// `L(k) = Σ_{p=1}^{j} Σ_{t=1}^{2^{k−1}−1} n_{ω_t}^p` (saturating; `u128::MAX` if any term is beyond the cap).
    pub fn l_sum(&self, k: usize) -> u128 {
        // ω_t = m for exactly 2^{k−1−m} values t < 2^{k−1}
        let mut acc: u128 = 0;
        for m in 1..k {
            let count = 1u128.checked_shl((k - 1 - m) as u32).unwrap_or(u128::MAX);
            for p in 1..=self.j {
                acc = acc.saturating_add(self.entry(m, p).value().saturating_mul(count));
            }
        }
        acc
    }

    /// The same schedule without stitching data (the `i = 0` family over identical entries).
    pub fn unstitched(&self) -> ExponentSchedule {
        ExponentSchedule { i: 0, sturmians: Vec::new(), stitch: Vec::new(), ..self.clone() }
    }

    /// Every finite entry in interleaved order.
    pub fn finite_entries(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for (k, row) in self.entries.iter().enumerate() {
            for (p, e) in row.iter().enumerate() {
                if let Some(n) = e.finite() {
                    out.push((k + 1, p + 1, n));
                }
            }
        }
        out
    }

    /// Independent re-check of every schedule inequality over the stored generations.
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let seq: Vec<(usize, usize, Entry)> = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(k, row)| row.iter().enumerate().map(move |(p, &e)| (k + 1, p + 1, e)))
            .collect();
        for w in seq.windows(2) {
            let (a, b) = (w[0].2.value(), w[1].2.value());
            if a != u128::MAX && b <= a {
                bad.push(format!("growth fails at n_{}^{}", w[1].0, w[1].1));
            }
        }
        let mut total: u128 = 0;
        for &(k, p, e) in &seq {
            if let Some(n) = e.finite() {
                if p >= 3 {
                    let s = self.entry(k, p - 1).value().saturating_add(self.entry(k, p - 2).value());
                    if (n as u128) <= s {
                        bad.push(format!("disjointness fails at n_{k}^{p}"));
                    }
                }
                if (self.g.eval(n) as u128) <= total {
                    bad.push(format!("sharpness fails at n_{k}^{p}"));
                }
                if p == 1 && k >= 2 {
                    let rhs = (self.entry(k - 1, self.j).value())
                        .saturating_add(self.entry(k - 1, 1).value())
                        .saturating_add(self.l_sum(k - 1))
                        .saturating_mul(self.j as u128 + 2);
                    if (self.g.eval(n) as u128) <= rhs {
                        bad.push(format!("liminf inequality fails at n_{k}^1"));
                    }
                }
            }
            total = total.saturating_add(e.value());
        }
        bad
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "j": self.j,
            "i": self.i,
            "g": self.g.tag(),
            "margin": self.margin,
            "entries": self.entries,
            "sturmians": self.sturmians,
            "stitch": self.stitch,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(s: &ExponentSchedule) -> Vec<u64> {
        s.finite_entries().into_iter().map(|(_, _, n)| n).collect()
    }

    #[test]
    fn canonical_values() {
        let s = make_schedule(2, 0, &GrowthFunction::log2(), 1).unwrap();
        assert_eq!(values(&s), vec![2, 5, (1 << 28) + 1]);
        assert_eq!(s.entry(2, 2), Entry::BeyondCap);
        let s = make_schedule(2, 0, &GrowthFunction::sqrt(), 1).unwrap();
        assert_eq!(values(&s)[..5], [1, 2, 145, 21905, 7781356945]);
        let s = make_schedule(3, 0, &GrowthFunction::linear(1), 1).unwrap();
        assert_eq!(values(&s)[..12], [1, 2, 4, 26, 34, 68, 506, 642, 1284, 9661, 12229, 24458]);
    }

    #[test]
    fn every_logged_inequality_holds() {
        for g in [GrowthFunction::log2(), GrowthFunction::sqrt(), GrowthFunction::linear(1)] {
            for j in 2..=4 {
                let s = make_schedule(j, 0, &g, 1).unwrap();
                assert!(s.validate().is_empty(), "{:?}", s.validate());
                for r in s.log() {
                    if let Some(n) = r.value.finite() {
                        for (_, rhs) in &r.direct {
                            assert!(n as u128 > *rhs);
                        }
                        for (_, rhs) in &r.growth {
                            assert!(g.eval(n) as u128 > *rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = make_schedule(3, 1, &GrowthFunction::sqrt(), 1).unwrap();
        let b = make_schedule(3, 1, &GrowthFunction::sqrt(), 1).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn bounded_growth_is_an_error() {
        let g = GrowthFunction::constant(5);
        assert!(make_schedule(2, 0, &g, 1).is_err());
    }

    #[test]
    fn l_sum_by_enumeration() {
        let s = make_schedule(2, 0, &GrowthFunction::linear(1), 1).unwrap();
        for k in 1..5 {
            let brute: u128 = (1..(1u64 << (k - 1)))
                .map(|t| {
                    let m = super::super::ruler::ruler(t) as usize;
                    s.entry(m, 1).value() + s.entry(m, 2).value()
                })
                .sum();
            assert_eq!(s.l_sum(k), brute);
        }
    }
}
