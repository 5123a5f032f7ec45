//! Margin traces `m(n) = c(n) − (α·n + g(n))` with finite-horizon verdicts. For a fractional
//! `α = a/b` the trace holds `b·m(n)`, which keeps every margin an exact integer.

use num_rational::Ratio;
use serde::Serialize;

use super::ComplexityProfile;
use crate::generators::{Entry, ExponentSchedule, GrowthFunction};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// `c(n) ≤ α·n + g(n)` at every point.
    Ceiling,
    /// Lower bound in the liminf sense: the tail minimum of the margin grows.
    LiminfFloor,
    /// Lower bound in the limsup sense: the running maximum of the margin grows.
    LimsupFloor,
}

impl std::str::FromStr for BoundMode {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "ceiling" | "le" => Ok(BoundMode::Ceiling),
            "liminf" | "floor" => Ok(BoundMode::LiminfFloor),
            "limsup" => Ok(BoundMode::LimsupFloor),
            _ => crate::error::domain(format!("unknown bound mode {s:?} (ceiling|liminf|limsup)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundSpec {
    pub alpha: Ratio<u64>,
    pub growth: GrowthFunction,
    pub mode: BoundMode,
}

impl BoundSpec {
    pub fn new(alpha: u64, growth: GrowthFunction, mode: BoundMode) -> Self {
        BoundSpec { alpha: Ratio::from_integer(alpha), growth, mode }
    }

    pub fn fractional(numer: u64, denom: u64, growth: GrowthFunction, mode: BoundMode) -> Self {
        BoundSpec { alpha: Ratio::new(numer, denom), growth, mode }
    }

    /// Parses `"alpha,g,mode"`, e.g. `"3,log2,ceiling"`, `"2,zero,liminf"` or `"3/2,zero,limsup"`.
    pub fn parse(text: &str) -> crate::error::Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return crate::error::domain(format!("bound {text:?} is not alpha,g,mode"));
        }
        let alpha: Ratio<u64> = parts[0]
            .parse()
            .ok()
            .filter(|a: &Ratio<u64>| *a.denom() != 0)
            .ok_or_else(|| crate::error::Error::Domain(format!("bad coefficient {:?}", parts[0])))?;
        Ok(BoundSpec { alpha, growth: GrowthFunction::parse(parts[1])?, mode: parts[2].parse()? })
    }

    /// `b·(α·n + g(n))` for `α = a/b`.
    pub fn rhs(&self, n: usize) -> i128 {
        let b = *self.alpha.denom() as i128;
        *self.alpha.numer() as i128 * n as i128 + b * self.growth.eval(n as u64) as i128
    }

    /// `b·(c − α·n − g(n))` for `α = a/b`.
    pub fn margin(&self, n: usize, c: u64) -> i128 {
        *self.alpha.denom() as i128 * c as i128 - self.rhs(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TracePoint {
    pub n: usize,
    pub c: u64,
    pub margin: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub alpha: String,
    /// Every margin is multiplied by this (the denominator of α).
    pub scale: u64,
    pub growth: String,
    pub mode: BoundMode,
    /// Saturated levels only.
    pub trace: Vec<TracePoint>,
    /// `(2^m, running statistic)`: tail minimum for liminf floors, running maximum for limsup floors.
    pub checkpoints: Vec<(usize, i128)>,
    pub horizon: usize,
    /// Levels where a ceiling fails.
    pub violations: Vec<usize>,
    pub verdict: Verdict,
    #[serde(skip)]
    spec: Option<BoundSpec>,
}

impl BoundReport {
    /// Whether the stored trace is reproduced by recomputing from `profile`.
    pub fn recompute_matches(&self, profile: &ComplexityProfile) -> bool {
        let Some(spec) = &self.spec else { return false };
        self.trace
            .iter()
            .all(|t| profile.is_saturated(t.n) && t.c == profile.c(t.n) && t.margin == spec.margin(t.n, t.c))
    }

    /// TSV columns `n, c, margin`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("n\tc\tmargin\n");
        for t in &self.trace {
            s.push_str(&format!("{}\t{}\t{}\n", t.n, t.c, t.margin));
        }
        s
    }
}

/// Report over every saturated level of `profile`.
pub fn bound_report(profile: &ComplexityProfile, spec: &BoundSpec) -> BoundReport {
    let points: Vec<usize> = profile.saturated_levels().collect();
    build(profile, spec, &points)
}

/// Report restricted to the saturated members of `points` (e.g. a schedule subsequence).
pub fn bound_report_on(profile: &ComplexityProfile, spec: &BoundSpec, points: &[usize]) -> BoundReport {
    let mut pts: Vec<usize> = points.iter().copied().filter(|&n| n >= 1 && n <= profile.n_max && profile.is_saturated(n)).collect();
    pts.sort_unstable();
    pts.dedup();
    build(profile, spec, &pts)
}

fn build(profile: &ComplexityProfile, spec: &BoundSpec, points: &[usize]) -> BoundReport {
    let trace: Vec<TracePoint> = points
        .iter()
        .map(|&n| {
            let c = profile.c(n);
            TracePoint { n, c, margin: spec.margin(n, c) }
        })
        .collect();
    let horizon = trace.last().map_or(0, |t| t.n);
    let mut checkpoints = Vec::new();
    let mut violations = Vec::new();
    let verdict = match spec.mode {
        BoundMode::Ceiling => {
            violations = trace.iter().filter(|t| t.margin > 0).map(|t| t.n).collect();
            if trace.is_empty() {
                Verdict::Inconclusive
            } else {
                Verdict::from_bool(violations.is_empty())
            }
        }
        BoundMode::LiminfFloor | BoundMode::LimsupFloor => {
            let mut d = 1usize;
            while d <= horizon {
                let stat = if spec.mode == BoundMode::LiminfFloor {
                    trace.iter().filter(|t| t.n >= d).map(|t| t.margin).min()
                } else {
                    trace.iter().filter(|t| t.n <= d).map(|t| t.margin).max()
                };
                if let Some(v) = stat {
                    checkpoints.push((d, v));
                }
                d *= 2;
            }
            if checkpoints.len() < 2 {
                Verdict::Inconclusive
            } else {
                let (first, last) = (checkpoints[0].1, checkpoints[checkpoints.len() - 1].1);
                let monotone = checkpoints.windows(2).all(|w| w[1].1 >= w[0].1);
                Verdict::from_bool(monotone && last > first && last > 0)
            }
        }
    };
    BoundReport {
        alpha: spec.alpha.to_string(),
        scale: *spec.alpha.denom(),
        growth: spec.growth.tag().to_string(),
        mode: spec.mode,
        trace,
        checkpoints,
        horizon,
        violations,
        verdict,
        spec: Some(spec.clone()),
    }
}

/// The case bound on `#RS(n)` for the recurrent family over `schedule`:
/// `j + 2` when `n_k^p < n ≤ n_k^p + n_k^{p−1}` for some `k` and `2 ≤ p ≤ j`;
/// `j` when `n_k^j + n_k^1 + L(k) < n ≤ n_{k+1}^1` for some `k`; `j + 1` otherwise.
pub fn rs_case_bound(schedule: &ExponentSchedule, n: u64) -> u64 {
    let j = schedule.j();
    let n = n as u128;
    for k in 1..=schedule.generations() + 1 {
        for p in 2..=j {
            let (a, b) = (schedule.entry(k, p), schedule.entry(k, p - 1));
            if let Entry::Finite(a) = a {
                if (a as u128) < n && n <= (a as u128).saturating_add(b.value()) {
                    return j as u64 + 2;
                }
            }
        }
    }
    for k in 1..=schedule.generations() {
        let lo = schedule.entry(k, j).value().saturating_add(schedule.entry(k, 1).value()).saturating_add(schedule.l_sum(k));
        if lo < n && n <= schedule.entry(k + 1, 1).value() {
            return j as u64;
        }
    }
    j as u64 + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::profile;
    use crate::generators::{make_schedule, sturmian, SturmianParams};
    use crate::language::{build_language, SaturationPolicy};

    fn sturmian_profile(n: usize) -> ComplexityProfile {
        let x = sturmian(SturmianParams::golden()).unwrap();
        profile(&build_language(&x, n, &SaturationPolicy::default()).unwrap())
    }

    #[test]
    fn ceiling_and_floor_on_n_plus_one() {
        let p = sturmian_profile(64);
        let ceil = bound_report(&p, &BoundSpec::new(1, GrowthFunction::constant(1), BoundMode::Ceiling));
        assert_eq!(ceil.verdict, Verdict::Pass);
        assert!(ceil.recompute_matches(&p));
        let tight = bound_report(&p, &BoundSpec::new(1, GrowthFunction::zero(), BoundMode::Ceiling));
        assert_eq!(tight.verdict, Verdict::Fail);
        assert_eq!(tight.violations.len(), 64);
        // c(n) − n/… : margin constant 1 is not increasing
        let flat = bound_report(&p, &BoundSpec::new(1, GrowthFunction::zero(), BoundMode::LiminfFloor));
        assert_eq!(flat.verdict, Verdict::Fail);
        let grows = bound_report(&p, &BoundSpec::new(0, GrowthFunction::zero(), BoundMode::LiminfFloor));
        assert_eq!(grows.verdict, Verdict::Pass);
        assert_eq!(grows.checkpoints.first(), Some(&(1, 2)));
        let half = bound_report(&p, &BoundSpec::parse("3/2,zero,ceiling").unwrap());
        assert_eq!(half.scale, 2);
        assert_eq!(half.trace[0].margin, 2 * 2 - 3);
        assert_eq!(half.verdict, Verdict::Fail);
        let on = bound_report_on(&p, &BoundSpec::new(1, GrowthFunction::zero(), BoundMode::Ceiling), &[5, 9, 1000]);
        assert_eq!(on.trace.len(), 2);
    }

    #[test]
    fn tampered_trace_is_detected() {
        let p = sturmian_profile(16);
        let mut r = bound_report(&p, &BoundSpec::parse("1,zero,limsup").unwrap());
        assert!(r.recompute_matches(&p));
        r.trace[3].margin += 1;
        assert!(!r.recompute_matches(&p));
    }

    #[test]
    fn case_bound_ranges() {
        let s = make_schedule(2, 0, &GrowthFunction::log2(), 1).unwrap();
        // n_1 = (2, 5): (5, 7] has the j + 2 bound
        assert_eq!(rs_case_bound(&s, 6), 4);
        assert_eq!(rs_case_bound(&s, 7), 4);
        assert_eq!(rs_case_bound(&s, 8), 2);
        assert_eq!(rs_case_bound(&s, 3), 3);
    }
}
