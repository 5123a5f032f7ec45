//! The factor map π for a stitched family: φ marks r-windows from each minimal language, ψ marks the
//! boundaries, and `c_X(n) ≥ c_{π(X)}(n − r) + i·n` on every saturated level.
//!
//! `cargo run --release --example factor_map_pi -- [j] [i] [n_max]`

use subshift::blockmap::{apply_to_sequence, build_collapse, build_pi};
use subshift::complexity::profile;
use subshift::generators::{default_sturmians, make_schedule, separating_length, stitched_family, GrowthFunction};
use subshift::language::{build_language, SaturationPolicy};

fn main() -> subshift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let j: usize = args.first().map_or(2, |s| s.parse().expect("j"));
    let i: usize = args.get(1).map_or(1, |s| s.parse().expect("i"));
    let n_max: usize = args.get(2).map_or(512, |s| s.parse().expect("n_max"));

    let fam = stitched_family(&make_schedule(j, i, &GrowthFunction::sqrt(), 1)?, &default_sturmians(i))?;
    let x = &fam.sequence;
    let systems = x.minimal_systems().expect("generated families know their minimal systems");
    let r = separating_length(systems, 64)?.expect("minimal languages separate");
    let langs = systems.iter().map(|m| m.language(r)).collect::<subshift::Result<Vec<_>>>()?;
    println!("{} minimal systems, separating length r = {r}", systems.len());

    let pi = build_pi(&langs, r, x.alphabet())?;
    let image = apply_to_sequence(&pi.pi, x)?;
    println!("x     = {}", x.render(-20, 60)?);
    println!("π(x)  = {}", image.render(-20, 60)?);

    let policy = SaturationPolicy::default();
    let cx = profile(&build_language(x, n_max, &policy)?);
    let cp = profile(&build_language(&image, n_max, &policy)?);
    let levels: Vec<usize> = (r + 1..=n_max).filter(|&n| cx.is_saturated(n) && cp.is_saturated(n - r)).collect();
    let ok = levels.iter().all(|&n| cx.c(n) >= cp.c(n - r) + (i * n) as u64);
    println!("c_X(n) ≥ c_π(X)(n − r) + {i}n on {} saturated levels: {ok}", levels.len());
    for n in [r + 1, 16, 64, n_max] {
        println!("  n = {n:>4}: c_X = {:>5}, c_π(X)(n − r) + {i}n = {:>5}", cx.c(n), cp.c(n - r) + (i * n) as u64);
    }

    let collapse = build_collapse(&langs[0], r, x.alphabet(), None)?;
    println!("collapse onto the first minimal system: {}", apply_to_sequence(&collapse, x)?.render(-20, 60)?);
    Ok(())
}
