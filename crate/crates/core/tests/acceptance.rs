//! The thirteen acceptance criteria at their pinned tolerances, one line each.
//!
//! Runs without the libtest harness so the lines always print; exits nonzero if any criterion is not a pass.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use subshift::harness::{lookup, run_experiment, Bundle, ExperimentSpec};
use subshift::Verdict;

struct Outcome {
    verdict: Verdict,
    detail: String,
}

/// Every check mapped to `criterion` across the given bundles.
fn criterion(k: u8, bundles: &[&Bundle]) -> Outcome {
    let checks: Vec<_> = bundles.iter().flat_map(|b| b.checks.iter()).filter(|c| c.criterion == Some(k)).collect();
    if checks.is_empty() {
        return Outcome { verdict: Verdict::Inconclusive, detail: "no check covers this criterion".into() };
    }
    let verdict = Verdict::all(checks.iter().map(|c| c.verdict));
    let shown: Vec<String> = if verdict == Verdict::Pass {
        vec![format!("{} checks", checks.len())]
    } else {
        checks
            .iter()
            .filter(|c| c.verdict != Verdict::Pass)
            .map(|c| format!("{} [{}]: {}", c.name, c.verdict, c.detail))
            .collect()
    };
    Outcome { verdict, detail: shown.join("; ") }
}

fn timed(k: u8, b: &Bundle, took: Duration, limit: Duration) -> Outcome {
    let mut o = criterion(k, &[b]);
    if took > limit && o.verdict == Verdict::Pass {
        o.verdict = Verdict::Fail;
    }
    o.detail = format!("{}; runtime {:.2?} (limit {:?})", o.detail, took, limit);
    o
}

fn main() {
    let mut bundles: BTreeMap<&str, (Bundle, Duration)> = BTreeMap::new();
    for tag in ["T2.1", "T2.2", "T4.1", "T1.1", "P3.8", "L3.1", "T1.2", "§5-staircase", "T1.4-extract"] {
        let t0 = Instant::now();
        let b = run_experiment(&ExperimentSpec::new(tag)).unwrap_or_else(|e| panic!("{tag}: {e}"));
        bundles.insert(lookup(tag).unwrap().tag, (b, t0.elapsed()));
    }
    let b = |tag: &str| &bundles[tag].0;
    let rows: Vec<(u8, &str, Outcome)> = vec![
        (1, "Sturmian c(n) = n+1 for n ≤ 200", timed(1, b("T2.1"), bundles["T2.1"].1, Duration::from_secs(10))),
        (2, "Morse–Hedlund trigger and period", criterion(2, &[b("T2.2")])),
        (3, "nonrecurrent exact formulas i1/i2", criterion(3, &[b("T4.1")])),
        (4, "recurrent sharp family ceilings", criterion(4, &[b("T1.1")])),
        (5, "right-special census bounds", criterion(5, &[b("P3.8")])),
        (6, "stitching identity", criterion(6, &[b("T1.1")])),
        (7, "factor-map inequality", criterion(7, &[b("L3.1")])),
        (8, "counting identity", criterion(8, &[b("P3.8")])),
        (9, "floor margins at dyadic checkpoints", criterion(9, &[b("T1.1"), b("T1.2")])),
        (10, "staircase frequencies at 10^6", timed(10, b("§5-staircase"), bundles["§5-staircase"].1, Duration::from_secs(30))),
        (11, "generic-measure extraction", criterion(11, &[b("T1.4-extract")])),
        (12, "right-special window cover", criterion(12, &[b("T1.4-extract")])),
        (13, "block-map contracts", criterion(13, &[b("L3.1")])),
    ];
    let mut failed = 0;
    for (k, what, o) in &rows {
        let mark = match o.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        println!("criterion {k:>2} {mark:<12} {what} — {}", o.detail);
        if o.verdict != Verdict::Pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", rows.len() - failed, rows.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
