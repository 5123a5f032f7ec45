//! The transitive family on `j` symbols: `c(n) < jn + g(n)` while `c(n) − jn` keeps rising, and the
//! right-special census picks up one extra word exactly on the ranges `(n_k, n_k + n_{k−1}]`.
//!
//! `cargo run --release --example transitive_family -- [j] [log2|sqrt] [n_max]`

use subshift::complexity::{bound_report, profile, special_census, BoundMode, BoundSpec};
use subshift::generators::{transitive_family, transitive_runs, GrowthFunction};
use subshift::language::{build_language, SaturationPolicy};

fn main() -> subshift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let j: usize = args.first().map_or(3, |s| s.parse().expect("j"));
    let g = GrowthFunction::parse(args.get(1).map_or("sqrt", String::as_str))?;
    let n_max: usize = args.get(2).map_or(4096, |s| s.parse().expect("n_max"));

    let x = transitive_family(j, &g)?;
    let runs: Vec<u64> = transitive_runs(&x).unwrap_or_default().iter().filter_map(|e| e.finite()).collect();
    println!("run lengths n_k (below the schedule cap): {runs:?}");
    let table = build_language(&x, n_max, &SaturationPolicy::default())?;
    let prof = profile(&table);
    let ceiling = bound_report(&prof, &BoundSpec::new(j as u64, g.clone(), BoundMode::Ceiling));
    println!("c(n) ≤ jn + g(n): {} (max margin {:?})", ceiling.verdict, ceiling.trace.iter().map(|t| t.margin).max());
    let floor = bound_report(&prof, &BoundSpec::new(j as u64, GrowthFunction::zero(), BoundMode::LiminfFloor));
    println!("c(n) − jn at dyadic checkpoints: {:?} → {}", floor.checkpoints, floor.verdict);
    let census = special_census(&table);
    let extra: Vec<usize> = prof.saturated_levels().filter(|&n| census.level(n).rs.len() > j).collect();
    println!("levels with #RS = j + 1: {extra:?}");
    Ok(())
}
