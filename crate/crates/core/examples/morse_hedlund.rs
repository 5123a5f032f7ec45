//! Periodic versus aperiodic: `c(n) ≤ n` at some `n` forces periodicity, and the detector recovers the period.
//!
//! `cargo run --release --example morse_hedlund -- [cycle …]`

use subshift::complexity::{morse_hedlund_classify, profile};
use subshift::generators::{sturmian, SturmianParams};
use subshift::language::{build_language, SaturationPolicy};
use subshift::sequence::periodic_from_str;
use subshift::SymbolicSequence;

fn report(label: &str, x: &SymbolicSequence) -> subshift::Result<()> {
    let prof = profile(&build_language(x, 64, &SaturationPolicy::default())?);
    let mh = morse_hedlund_classify(&prof, x, 512)?;
    let cs: Vec<u64> = (1..=10).map(|n| prof.c(n)).collect();
    println!("{label:<12} c(1..10) = {cs:?}");
    println!("{:<12} trigger {:?}, outcome {:?}", "", mh.trigger, mh.outcome);
    Ok(())
}

fn main() -> subshift::Result<()> {
    let mut cycles: Vec<String> = std::env::args().skip(1).collect();
    if cycles.is_empty() {
        cycles = vec!["01".into(), "0011".into(), "0010110".into()];
    }
    for c in &cycles {
        report(&format!("({c})^∞"), &periodic_from_str(c)?)?;
    }
    report("Sturmian", &sturmian(SturmianParams::golden())?)
}
