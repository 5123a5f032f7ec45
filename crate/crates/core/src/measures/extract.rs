//! Genericity probes, candidate extraction from right-special words, and the window cover check.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{weak_distance, EmpiricalMeasure, WeakDistance, WeakMetricSpec};
use crate::alphabet::Symbol;
use crate::complexity::{ComplexityProfile, SpecialWordReport};
use crate::error::{domain, Result};
use crate::language::{LanguageTable, WordRef};
use crate::periodicity::{detect_eventual_periodicity, Direction, Periodicity};
use crate::sequence::SymbolicSequence;
use crate::verdict::Verdict;

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub estimates: Vec<EmpiricalMeasure>,
    /// `d(ν_{n_k}, ν_{n_{k+1}})` for consecutive lengths.
    pub distances: Vec<WeakDistance>,
    pub tol: f64,
    /// Pass when the last consecutive distance is below `tol`; a finite horizon never fails.
    pub verdict: Verdict,
}

impl ProbeReport {
    pub fn final_estimate(&self) -> &EmpiricalMeasure {
        self.estimates.last().expect("at least one length")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "estimates": self.estimates.iter().map(EmpiricalMeasure::to_json).collect::<Vec<_>>(),
            "distances": self.distances,
            "tol": self.tol,
            "verdict": self.verdict,
        })
    }
}

/// `ν_n(σ^start x)` at each of the increasing `lengths`.
pub fn generic_limit_probe(
    seq: &SymbolicSequence,
    start: i64,
    lengths: &[u64],
    depth: usize,
    spec: &WeakMetricSpec,
    tol: f64,
) -> Result<ProbeReport> {
    if lengths.is_empty() || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return domain("lengths must be nonempty and increasing");
    }
    let estimates: Vec<EmpiricalMeasure> =
        lengths.iter().map(|&n| EmpiricalMeasure::empirical(seq, start, n, depth)).collect::<Result<_>>()?;
    let distances: Vec<WeakDistance> =
        estimates.windows(2).map(|w| weak_distance(&w[0], &w[1], spec)).collect::<Result<_>>()?;
    let verdict = match distances.last() {
        Some(d) if d.value <= tol => Verdict::Pass,
        _ => Verdict::Inconclusive,
    };
    Ok(ProbeReport { estimates, distances, tol, verdict })
}

#[derive(Debug, Clone)]
pub struct ExtractionParams {
    pub g: u64,
    pub depth: usize,
    pub metric: WeakMetricSpec,
    /// Single-linkage threshold; defaults to 8 times the metric's tail bound.
    pub tau: f64,
}

impl ExtractionParams {
    /// Depth covering the metric's words (4 for a binary alphabet at `T = 16`).
    pub fn new(g: u64, alphabet: &crate::alphabet::Alphabet) -> Self {
        let metric = WeakMetricSpec::default();
        ExtractionParams { g, depth: metric.required_depth(alphabet), tau: 8.0 * metric.tail_bound(), metric }
    }
}

#[derive(Debug, Clone)]
pub struct GenericCandidate {
    pub word: WordRef,
    /// Offset in the table's window where the measure starts.
    pub offset: usize,
    pub measure: EmpiricalMeasure,
}

#[derive(Debug, Clone)]
pub struct ExtractionReport {
    /// Qualifying levels found (ascending).
    pub levels: Vec<usize>,
    /// The level used (largest qualifying).
    pub level: Option<usize>,
    pub candidates: Vec<GenericCandidate>,
    /// Indices into `candidates`, one list per cluster.
    pub clusters: Vec<Vec<usize>>,
    pub diagnostic: Option<String>,
    /// Detector findings on the analysed side, within `horizon`.
    pub right_periodicity: Option<Periodicity>,
    pub horizon: usize,
}

impl ExtractionReport {
    /// First member of each cluster.
    pub fn representatives(&self) -> Vec<&EmpiricalMeasure> {
        self.clusters.iter().map(|c| &self.candidates[c[0]].measure).collect()
    }

    pub fn to_json(&self, table: &LanguageTable) -> serde_json::Value {
        let a = table.alphabet();
        serde_json::json!({
            "levels": self.levels,
            "level": self.level,
            "candidates": self.candidates.iter().map(|c| serde_json::json!({
                "word": a.render(table.word(c.word)),
                "offset": c.offset,
                "measure": c.measure.to_json(),
            })).collect::<Vec<_>>(),
            "clusters": self.clusters,
            "diagnostic": self.diagnostic,
            "right_periodicity": self.right_periodicity,
            "horizon": self.horizon,
        })
    }
}

/// Levels `n` (saturated) with `#RS(n) < g`, `c(n) < 2g·n` and `c(n) − g·n` below every earlier value.
fn qualifying_levels(profile: &ComplexityProfile, census: &SpecialWordReport, g: u64) -> Vec<usize> {
    let mut best = i128::MAX;
    let mut out = Vec::new();
    for n in 1..=profile.n_max.min(census.n_max()) {
        if !profile.is_saturated(n) {
            continue;
        }
        let c = profile.c(n) as i128;
        let m = c - (g as i128) * n as i128;
        let new_min = m < best;
        best = best.min(m);
        if new_min && (census.level(n).rs.len() as u64) < g && c < 2 * g as i128 * n as i128 {
            out.push(n);
        }
    }
    out
}

fn cluster(measures: &[&EmpiricalMeasure], spec: &WeakMetricSpec, tau: f64) -> Result<Vec<Vec<usize>>> {
    let k = measures.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for a in 0..k {
        for b in a + 1..k {
            if weak_distance(measures[a], measures[b], spec)?.value <= tau {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<usize, usize> = HashMap::new();
    for x in 0..k {
        let r = root(&mut parent, x);
        let gi = *index.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[gi].push(x);
    }
    Ok(groups)
}

/// Candidate generic measures from the right-special words at the largest qualifying level.
pub fn extract_generic_candidates(
    table: &LanguageTable,
    profile: &ComplexityProfile,
    census: &SpecialWordReport,
    params: &ExtractionParams,
) -> Result<ExtractionReport> {
    if params.g < 2 {
        return domain("g must be at least 2");
    }
    if profile.origin != census.origin {
        return domain("profile and census come from different tables");
    }
    let horizon = 4096.min(table.window_symbols().len().saturating_sub(2)).max(8);
    let right_periodicity = detect_eventual_periodicity(table.analysed(), Direction::Right, horizon).ok().flatten();
    let levels = qualifying_levels(profile, census, params.g);
    let mut report = ExtractionReport {
        levels: levels.clone(),
        level: None,
        candidates: Vec::new(),
        clusters: Vec::new(),
        diagnostic: None,
        right_periodicity,
        horizon,
    };
    let Some(&n) = levels.last() else {
        report.diagnostic = Some("no qualifying level in the window".into());
        return Ok(report);
    };
    report.level = Some(n);
    let text = table.window_symbols();
    let span = n + params.depth - 1;
    for sw in &census.level(n).rs {
        let w = table.word(sw.at);
        let mut tally: HashMap<&[Symbol], (usize, usize)> = HashMap::new();
        for p in 0..text.len().saturating_sub(span - 1) {
            if &text[p..p + n] == w {
                let e = tally.entry(&text[p..p + span]).or_insert((0, p));
                e.0 += 1;
            }
        }
        let Some((_, &(_, offset))) = tally.iter().max_by_key(|(_, &(c, p))| (c, std::cmp::Reverse(p))) else {
            continue;
        };
        let measure = EmpiricalMeasure::from_symbols(table.alphabet(), &text[offset..offset + span], n as u64, params.depth)?;
        report.candidates.push(GenericCandidate { word: sw.at, offset, measure });
    }
    if report.candidates.is_empty() {
        report.diagnostic = Some(format!("no right-special word at level {n} has room for depth {}", params.depth));
        return Ok(report);
    }
    let ms: Vec<&EmpiricalMeasure> = report.candidates.iter().map(|c| &c.measure).collect();
    report.clusters = cluster(&ms, &params.metric, params.tau)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverLevel {
    pub n: usize,
    pub span: usize,
    pub windows_checked: u64,
    /// Offsets of subwords of length `c(n) + n` containing no right-special `n`-word.
    pub counterexamples: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub levels: Vec<CoverLevel>,
    pub skipped: Option<String>,
    pub verdict: Verdict,
}

/// Every subword of length `c(n) + n` of the window contains a word of `RS(n)`, for saturated `n ≤ n_limit`.
pub fn rs_window_cover_check(
    table: &LanguageTable,
    profile: &ComplexityProfile,
    census: &SpecialWordReport,
    n_limit: usize,
) -> Result<CoverReport> {
    if profile.origin != census.origin {
        return domain("profile and census come from different tables");
    }
    let skip = |why: String| Ok(CoverReport { levels: Vec::new(), skipped: Some(why), verdict: Verdict::Inconclusive });
    if table.used_surrogate() {
        return skip("table built from a periodic surrogate; rebuild from raw windows".into());
    }
    let text = table.window_symbols();
    let horizon = (text.len() / 2).clamp(8, 1 << 16);
    if let Some(p) = detect_eventual_periodicity(table.source(), Direction::Right, horizon)? {
        return skip(format!("eventually periodic to the right (period {}, onset {})", p.period, p.onset));
    }
    let mut levels = Vec::new();
    for n in (1..=n_limit.min(census.n_max())).filter(|&n| profile.is_saturated(n)) {
        let rs: HashSet<&[Symbol]> = census.level(n).rs.iter().map(|s| table.word(s.at)).collect();
        let span = profile.c(n) as usize + n;
        if span > text.len() {
            break;
        }
        // hits[p + 1] − hits[q] counts right-special starts in [q, p]
        let mut hits = vec![0u32; text.len() + 1];
        for p in 0..text.len() {
            let here = p + n <= text.len() && rs.contains(&text[p..p + n]);
            hits[p + 1] = hits[p] + here as u32;
        }
        let mut counterexamples = Vec::new();
        let windows = text.len() - span + 1;
        for s in 0..windows {
            if hits[s + span - n + 1] == hits[s] {
                counterexamples.push(s);
            }
        }
        levels.push(CoverLevel { n, span, windows_checked: windows as u64, counterexamples });
    }
    let verdict = if levels.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(levels.iter().all(|l| l.counterexamples.is_empty()))
    };
    Ok(CoverReport { levels, skipped: None, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::complexity::{profile, special_census};
    use crate::generators::{staircase, sturmian, SturmianParams};
    use crate::language::{build_language, SaturationPolicy};
    use crate::sequence::periodic_from_str;

    #[test]
    fn sturmian_frequency_converges_to_beta() {
        let x = sturmian(SturmianParams::golden()).unwrap();
        let r = generic_limit_probe(&x, 0, &[1000, 10_000, 100_000], 4, &WeakMetricSpec::default(), 1e-3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let beta = (5f64.sqrt() - 1.0) / 2.0;
        // orbit counting oracle: discrepancy of the golden rotation is O(log n / n)
        let f1 = r.final_estimate().freq_f64(&[Symbol(1)]).unwrap();
        assert!((f1 - beta).abs() < 1e-4, "{f1}");
    }

    #[test]
    fn extraction_on_staircase_and_sturmian() {
        let a = Alphabet::digits(2);
        let s = staircase();
        let t = build_language(&s, 64, &SaturationPolicy::raw()).unwrap();
        let (p, c) = (profile(&t), special_census(&t));
        let rep = extract_generic_candidates(&t, &p, &c, &ExtractionParams::new(3, &a)).unwrap();
        assert!(rep.clusters.len() <= 2 && !rep.clusters.is_empty());
        let spec = WeakMetricSpec::default();
        for (bit, m) in rep.representatives().into_iter().enumerate() {
            let delta = EmpiricalMeasure::point_mass(&a, Symbol(bit as u8), 4).unwrap();
            assert!(weak_distance(m, &delta, &spec).unwrap().value <= 0.02);
        }
        let x = sturmian(SturmianParams::golden()).unwrap();
        let t = build_language(&x, 64, &SaturationPolicy::default()).unwrap();
        let (p, c) = (profile(&t), special_census(&t));
        let rep = extract_generic_candidates(&t, &p, &c, &ExtractionParams::new(2, &a)).unwrap();
        assert_eq!(rep.level, Some(64));
        assert_eq!(rep.clusters.len(), 1);
    }

    #[test]
    fn cover_check() {
        let x = sturmian(SturmianParams::golden()).unwrap();
        let t = build_language(&x, 30, &SaturationPolicy::raw()).unwrap();
        let rep = rs_window_cover_check(&t, &profile(&t), &special_census(&t), 30).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.skipped);
        assert_eq!(rep.levels[9].span, 21);
        let y = periodic_from_str("001").unwrap();
        let t = build_language(&y, 10, &SaturationPolicy::raw()).unwrap();
        let rep = rs_window_cover_check(&t, &profile(&t), &special_census(&t), 10).unwrap();
        assert!(rep.skipped.is_some());
        assert_eq!(rep.verdict, Verdict::Inconclusive);
    }
}
