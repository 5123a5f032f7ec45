//! Generic-measure extraction: empirical measures read off right-special occurrences cluster around the
//! ergodic measures (two point masses on the staircase, one measure on a Sturmian), and every
//! `(c(n) + n)`-window contains a right-special `n`-word.
//!
//! `cargo run --release --example generic_extraction`

use subshift::complexity::{profile, special_census};
use subshift::generators::{staircase, sturmian, SturmianParams};
use subshift::language::{build_language, SaturationPolicy};
use subshift::measures::{extract_generic_candidates, rs_window_cover_check, weak_distance, EmpiricalMeasure, ExtractionParams};
use subshift::{Symbol, SymbolicSequence};

fn run(label: &str, x: &SymbolicSequence, g: u64) -> subshift::Result<()> {
    let table = build_language(x, 64, &SaturationPolicy::raw())?;
    let prof = profile(&table);
    let census = special_census(&table);
    let params = ExtractionParams::new(g, x.alphabet());
    let rep = extract_generic_candidates(&table, &prof, &census, &params)?;
    println!("{label}: level {:?}, {} candidates, {} cluster(s) at τ = {:.2e}", rep.level, rep.candidates.len(), rep.clusters.len(), params.tau);
    for (k, m) in rep.representatives().into_iter().enumerate() {
        let d: Vec<f64> = (0..2)
            .map(|b| {
                let delta = EmpiricalMeasure::point_mass(x.alphabet(), Symbol(b), params.depth)?;
                Ok(weak_distance(m, &delta, &params.metric)?.value)
            })
            .collect::<subshift::Result<_>>()?;
        println!("  cluster {k}: freq(0) = {:.4}, d(·, δ0) = {:.4}, d(·, δ1) = {:.4}", m.freq_f64(&[Symbol(0)]).unwrap_or(0.0), d[0], d[1]);
    }
    let cover = rs_window_cover_check(&table, &prof, &census, 30)?;
    let windows: u64 = cover.levels.iter().map(|l| l.windows_checked).sum();
    println!("  window cover for n ≤ 30: {} ({windows} windows)", cover.verdict);
    Ok(())
}

fn main() -> subshift::Result<()> {
    run("staircase", &staircase(), 3)?;
    run("Sturmian", &sturmian(SturmianParams::golden())?, 2)
}
