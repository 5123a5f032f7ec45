//! Stitched families: `c_{X′}(n) = c_X(n) + i·n` against the unstitched family over the same schedule,
//! the factor-map inequality `c_{X′}(n) ≥ c_{π(X′)}(n − r) + i·n`, and the floor margin `c(n) − (j+i)n`.
//!
//! `cargo run --release --example stitched_family -- [j] [i] [log2|sqrt] [n_max]`

use subshift::blockmap::{apply_to_sequence, build_pi};
use subshift::complexity::{bound_report, profile, BoundMode, BoundSpec};
use subshift::generators::{
    default_sturmians, make_schedule, recurrent_sharp_family, separating_length, stitched_family, GrowthFunction,
};
use subshift::language::{build_language, SaturationPolicy};

fn main() -> subshift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let j: usize = args.first().map_or(2, |s| s.parse().expect("j"));
    let i: usize = args.get(1).map_or(1, |s| s.parse().expect("i"));
    let g = GrowthFunction::parse(args.get(2).map_or("sqrt", String::as_str))?;
    let n_max: usize = args.get(3).map_or(2048, |s| s.parse().expect("n_max"));

    let schedule = make_schedule(j, i, &g, 1)?;
    println!("schedule: {:?}", schedule.finite_entries());
    let fam = stitched_family(&schedule, &default_sturmians(i))?;
    let policy = SaturationPolicy::default();
    let t0 = std::time::Instant::now();
    let stitched = profile(&build_language(&fam.sequence, n_max, &policy)?);
    let plain = profile(&build_language(&recurrent_sharp_family(&fam.schedule.unstitched())?, n_max, &policy)?);
    println!("tables: saturated prefixes {} / {} in {:.2?}", stitched.saturated_prefix(), plain.saturated_prefix(), t0.elapsed());
    let bad: Vec<(usize, u64, u64)> = (1..=n_max)
        .filter(|&n| stitched.is_saturated(n) && plain.is_saturated(n))
        .filter(|&n| stitched.c(n) != plain.c(n) + (i * n) as u64)
        .map(|n| (n, stitched.c(n), plain.c(n)))
        .collect();
    println!("stitching identity violations: {:?}", &bad[..bad.len().min(10)]);

    let systems = fam.sequence.minimal_systems().expect("generated family").to_vec();
    let r = separating_length(&systems, 64)?.expect("separating length");
    let langs = systems.iter().map(|m| m.language(r)).collect::<subshift::Result<Vec<_>>>()?;
    let pi = build_pi(&langs, r, fam.sequence.alphabet())?;
    let image = profile(&build_language(&apply_to_sequence(&pi.pi, &fam.sequence)?, n_max, &policy)?);
    let bad: Vec<usize> = (r + 1..=n_max)
        .filter(|&n| stitched.is_saturated(n) && image.is_saturated(n - r))
        .filter(|&n| stitched.c(n) < image.c(n - r) + (i * n) as u64)
        .collect();
    println!("r = {r}; factor inequality violations: {:?}", &bad[..bad.len().min(10)]);

    let floor = bound_report(&stitched, &BoundSpec::new((j + i) as u64, GrowthFunction::zero(), BoundMode::LiminfFloor));
    println!("c(n) − (j+i)n checkpoints: {:?} → {}", floor.checkpoints, floor.verdict);
    Ok(())
}
