//! Sturmian codings of an irrational rotation: `c(n) = n + 1`, one right- and one left-special word per length.
//!
//! `cargo run --release --example sturmian_complexity -- [golden|silver|quad:a,b,c,d] [n_max]`

use subshift::complexity::{profile, special_census};
use subshift::generators::{sturmian, Real, SturmianParams};
use subshift::language::{build_language, SaturationPolicy};

fn main() -> subshift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let beta = Real::parse(args.first().map_or("golden", String::as_str))?;
    let n_max: usize = args.get(1).map_or(200, |s| s.parse().expect("n_max"));

    let x = sturmian(SturmianParams::new(beta.clone()))?;
    println!("β = {beta}: {} …", x.render(0, 79)?);
    let t0 = std::time::Instant::now();
    let table = build_language(&x, n_max, &SaturationPolicy::default())?;
    let prof = profile(&table);
    let census = special_census(&table);
    let exact = (1..=n_max).all(|n| prof.is_saturated(n) && prof.c(n) == n as u64 + 1);
    println!("c(n) = n + 1 for every n ≤ {n_max}: {exact} ({:.2?}, window {:?})", t0.elapsed(), table.window());
    for n in [1, 2, 5, 10, n_max.min(20)] {
        let l = census.level(n);
        let rs: Vec<String> = l.rs.iter().map(|w| table.alphabet().render(&table.word(w.at))).collect();
        println!("  n = {n:>3}: c = {:>3}, RS = {rs:?}, #LS = {}", prof.c(n), l.ls.len());
    }
    Ok(())
}
