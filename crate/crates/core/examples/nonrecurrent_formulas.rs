//! The non-recurrent witnesses `0^∞.s` (case i1) and `r.s` (case i2) against their closed-form complexities.
//!
//! Case i1 matches `c(N) = N + 1`, `c(n) = 2n − N + 1`. Case i2 does not match `c(n) = 3n − N`: two rotations from
//! the same gap share their language well past length N, so the measured profile stays at `2n` longer.
//!
//! `cargo run --release --example nonrecurrent_formulas -- [N] [n_max]`

use subshift::complexity::profile;
use subshift::generators::{nonrecurrent_example, NonrecurrentCase};
use subshift::language::{build_language, SaturationPolicy};

fn main() -> subshift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u64 = args.first().map_or(10, |s| s.parse().expect("N"));
    let n_max: usize = args.get(1).map_or(150, |s| s.parse().expect("n_max"));

    for (label, case) in [("i1", NonrecurrentCase::i1_default(n as i64)), ("i2", NonrecurrentCase::i2_default(n as i64))] {
        let x = nonrecurrent_example(&case, n)?;
        let prof = profile(&build_language(&x, n_max, &SaturationPolicy::default())?);
        let formula = |k: u64| match label {
            "i1" if k < n => k + 1,
            "i1" => 2 * k - n + 1,
            _ if k <= n => 2 * k,
            _ => 3 * k - n,
        };
        let bad: Vec<usize> = (1..=n_max)
            .filter(|&k| prof.is_saturated(k) && (label == "i2" || k as u64 >= n) && prof.c(k) != formula(k as u64))
            .collect();
        println!("case {label}, N = {n}: {} mismatching levels of {n_max}", bad.len());
        for k in [n as usize - 1, n as usize, n as usize + 1, 2 * n as usize, 2 * n as usize + 1, n_max] {
            println!("  c({k:>3}) = {:>4}   formula {:>4}", prof.c(k), formula(k as u64));
        }
    }
    Ok(())
}
