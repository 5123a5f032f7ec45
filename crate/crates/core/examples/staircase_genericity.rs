//! The staircase `0^∞.0 11 000 1111 …`: empirical frequencies along the forward orbit approach
//! `(δ_{0^∞} + δ_{1^∞})/2`, cross-checked against closed-form run counts.
//!
//! `cargo run --release --example staircase_genericity -- [n …]`

use subshift::generators::{staircase, staircase_counts};
use subshift::measures::EmpiricalMeasure;
use subshift::Symbol;

fn main() -> subshift::Result<()> {
    let mut lengths: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("n")).collect();
    if lengths.is_empty() {
        lengths = vec![1_000, 10_000, 100_000, 1_000_000];
    }
    let x = staircase();
    println!("{:>9}  {:>8} {:>8} {:>8} {:>8} {:>8}  oracle", "n", "0", "1", "00", "11", "01");
    for n in lengths {
        let t0 = std::time::Instant::now();
        let m = EmpiricalMeasure::empirical(&x, 0, n, 2)?;
        let f = |w: &[u8]| m.freq_f64(&w.iter().map(|&b| Symbol(b)).collect::<Vec<_>>()).unwrap_or(0.0);
        let (single, pair) = staircase_counts(0, n);
        let agree = single[0] == m.count(&[Symbol(0)]) && pair[0][1] == m.count(&[Symbol(0), Symbol(1)]);
        println!(
            "{n:>9}  {:>8.6} {:>8.6} {:>8.6} {:>8.6} {:>8.6}  {}  ({:.2?})",
            f(&[0]),
            f(&[1]),
            f(&[0, 0]),
            f(&[1, 1]),
            f(&[0, 1]),
            if agree { "agrees" } else { "DIFFERS" },
            t0.elapsed()
        );
    }
    Ok(())
}
