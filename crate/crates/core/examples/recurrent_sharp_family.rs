//! The recurrent sharp family: ceiling `c(n) ≤ (j+1)n + g(n)`, the subsequence ceiling at `n_k^1`,
//! and the right-special census against its case bounds.
//!
//! `cargo run --release --example recurrent_sharp_family -- [j] [log2|sqrt] [n_max]`

use subshift::complexity::{bound_report, bound_report_on, profile, rs_case_bound, special_census, BoundMode, BoundSpec};
use subshift::generators::{make_schedule, recurrent_sharp_family, GrowthFunction};
use subshift::language::{build_language, SaturationPolicy};

fn main() -> subshift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let j: usize = args.first().map_or(2, |s| s.parse().expect("j"));
    let g = GrowthFunction::parse(args.get(1).map_or("log2", String::as_str))?;
    let n_max: usize = args.get(2).map_or(4096, |s| s.parse().expect("n_max"));

    let schedule = make_schedule(j, 0, &g, 1)?;
    println!("schedule: {:?}", schedule.finite_entries());
    let x = recurrent_sharp_family(&schedule)?;
    let t0 = std::time::Instant::now();
    let table = build_language(&x, n_max, &SaturationPolicy::default())?;
    let prof = profile(&table);
    println!("table: window {:?}, saturated prefix {}, {:.2?}", table.window(), prof.saturated_prefix(), t0.elapsed());

    let ceiling = bound_report(&prof, &BoundSpec::new(j as u64 + 1, g.clone(), BoundMode::Ceiling));
    println!("c(n) ≤ (j+1)n + g(n): {} (max margin {:?})", ceiling.verdict, ceiling.trace.iter().map(|t| t.margin).max());
    let firsts: Vec<usize> = schedule.finite_entries().iter().filter(|e| e.1 == 1).map(|e| e.2 as usize).collect();
    let sub = bound_report_on(&prof, &BoundSpec::new(j as u64, g.clone(), BoundMode::Ceiling), &firsts);
    println!("c(n_k^1) ≤ j·n + g(n) at {:?}: {}", sub.trace.iter().map(|t| (t.n, t.c)).collect::<Vec<_>>(), sub.verdict);
    let floor = bound_report(&prof, &BoundSpec::new(j as u64, GrowthFunction::zero(), BoundMode::LiminfFloor));
    println!("margin c(n) − jn at dyadic checkpoints: {:?} → {}", floor.checkpoints, floor.verdict);

    let census = special_census(&table);
    let mut bad = Vec::new();
    for n in prof.saturated_levels() {
        let rs = census.level(n).rs.len() as u64;
        if rs < j as u64 || rs > rs_case_bound(&schedule, n as u64) {
            bad.push((n, rs, rs_case_bound(&schedule, n as u64)));
        }
    }
    println!("census violations (n, #RS, bound): {:?}", &bad[..bad.len().min(20)]);
    let hist: std::collections::BTreeMap<usize, usize> =
        prof.saturated_levels().fold(Default::default(), |mut m, n| {
            *m.entry(census.level(n).rs.len()).or_default() += 1;
            m
        });
    println!("#RS histogram: {hist:?}");
    Ok(())
}
