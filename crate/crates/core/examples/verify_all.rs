//! Every catalogued experiment at its default parameters, with per-criterion verdicts; pass a directory to
//! also write the bundles (provenance, verdicts, TSV traces).
//!
//! `cargo run --release --example verify_all -- [out_dir]`

use subshift::harness::{bundle_dir_name, list_experiments, run_experiment, ExperimentSpec, Format};
use subshift::Verdict;

fn main() -> subshift::Result<()> {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    let mut overall = Verdict::Pass;
    for entry in list_experiments() {
        let t0 = std::time::Instant::now();
        let bundle = run_experiment(&ExperimentSpec::new(entry.tag))?;
        let criteria: Vec<String> = bundle.criteria().iter().map(|(k, v)| format!("{k}:{v}")).collect();
        println!("{:<14} {:<13} {:>9.2?}  criteria [{}]", entry.tag, bundle.verdict().to_string(), t0.elapsed(), criteria.join(" "));
        for c in bundle.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
            println!("    {} [{}]: {}", c.name, c.verdict, c.detail);
        }
        if let Some(dir) = &out {
            bundle.write(&dir.join(bundle_dir_name(&bundle.tag)), Format::Tsv)?;
        }
        overall = overall.and(bundle.verdict());
    }
    println!("overall: {overall}");
    Ok(())
}
