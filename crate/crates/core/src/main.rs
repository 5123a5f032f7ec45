use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use subshift::blockmap::{apply_to_sequence, build_collapse, build_pi, parse_rule_tsv, BlockMap};
use subshift::complexity::{bound_report, profile, special_census, BoundSpec};
use subshift::generators::registry::{FamilySpec, FAMILIES};
use subshift::generators::separating_length;
use subshift::harness::{bundle_dir_name, list_experiments, run_experiment, ExperimentSpec, Format};
use subshift::language::{build_language, SaturationPolicy};
use subshift::measures::{extract_generic_candidates, generic_limit_probe, ExtractionParams, WeakMetricSpec};
use subshift::seqfile::{read_sequence, write_atomic, write_sequence};
use subshift::{Error, Result, SequenceKind, SymbolicSequence, Verdict};

#[derive(Parser)]
#[command(name = "subshift", version, about = "Complexity, block maps and empirical measures for symbolic sequences")]
struct Cli {
    /// Hard cap on analysis windows, in symbols.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    cap: usize,
    /// Directory for outputs; relative `--out` paths are resolved inside it.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Trace format.
    #[arg(long, global = true, default_value = "tsv")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a window of a generated sequence plus a provenance sidecar.
    Gen {
        /// Family name (see `list`).
        family: String,
        /// Family parameters as key=value.
        params: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        length: u64,
        /// Index of the first written symbol (bi-infinite families only may go negative).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        origin: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a block map to a sequence file.
    Map {
        /// pi | collapse | custom
        kind: String,
        #[command(flatten)]
        input: Input,
        /// Rule TSV for `custom`.
        #[arg(long)]
        rule: Option<PathBuf>,
        /// Block length r for pi/collapse; defaults to the least separating length.
        #[arg(long)]
        r: Option<usize>,
        /// Minimal system kept by `collapse`.
        #[arg(long, default_value_t = 0)]
        keep: usize,
        /// Family whose minimal languages define pi/collapse; defaults to `--family`.
        #[arg(long)]
        languages: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complexity profile, special-word census or bound trace.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 64)]
        nmax: usize,
        /// profile | special | bounds
        #[arg(long, default_value = "profile")]
        report: String,
        /// "alpha,g,mode", e.g. "3,sqrt,ceiling" or "3/2,zero,limsup".
        #[arg(long)]
        bound: Option<String>,
        /// Analyse the raw windows even when the family offers a surrogate.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical measures along a forward orbit, or `measure extract` for generic candidates.
    Measure {
        /// `extract` for candidate extraction.
        mode: Option<String>,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        lengths: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Convergence tolerance for the probe, or the cluster threshold for `extract`.
        #[arg(long)]
        tol: Option<f64>,
        /// Gap parameter for `extract`.
        #[arg(long, default_value_t = 3)]
        g: u64,
        /// Table depth for `extract`.
        #[arg(long, default_value_t = 64)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a catalogued experiment (`all` runs every entry).
    Verify {
        tag: String,
        /// Parameter overrides as key=value.
        params: Vec<String>,
    },
    /// Catalogued experiments and generator families.
    List,
}

#[derive(Args)]
struct Input {
    /// Sequence file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Generator instead of a file: `"family key=value …"`.
    #[arg(long)]
    family: Option<String>,
}

fn family_spec(text: &str) -> Result<FamilySpec> {
    let mut parts = text.split_whitespace();
    let name = parts.next().ok_or_else(|| Error::Domain("empty family".into()))?;
    FamilySpec::parse(name, &parts.map(String::from).collect::<Vec<_>>())
}

impl Input {
    fn load(&self) -> Result<SymbolicSequence> {
        match (&self.input, &self.family) {
            (Some(p), None) => read_sequence(p),
            (None, Some(f)) => family_spec(f)?.build(),
            _ => Err(Error::Domain("give exactly one of --in FILE or --family \"name k=v …\"".into())),
        }
    }
}

struct Ctx {
    cap: usize,
    out_dir: Option<PathBuf>,
    format: Format,
}

impl Ctx {
    fn path(&self, out: &Option<PathBuf>) -> Option<PathBuf> {
        out.as_ref().map(|p| match &self.out_dir {
            Some(d) if p.is_relative() => d.join(p),
            _ => p.clone(),
        })
    }

    /// Writes to `--out` (or prints) and returns nothing else.
    fn emit(&self, out: &Option<PathBuf>, text: &str) -> Result<()> {
        match self.path(out) {
            Some(p) => write_atomic(&p, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".provenance.json");
    PathBuf::from(s)
}

fn gen(ctx: &Ctx, family: &str, params: &[String], length: u64, origin: i64, out: &Option<PathBuf>) -> Result<Verdict> {
    let spec = FamilySpec::parse(family, params)?;
    let seq = spec.build()?;
    if length == 0 {
        return Err(Error::Domain("--length must be positive".into()));
    }
    let hi = origin + length as i64 - 1;
    let prov = json!({ "family": spec.family, "params": spec.params, "window": [origin, hi], "provenance": seq.provenance() });
    match ctx.path(out) {
        Some(p) => {
            write_sequence(&p, &seq, origin, hi)?;
            write_atomic(&sidecar(&p), pretty(&prov).as_bytes())?;
        }
        None => print!("{}", subshift::seqfile::format_sequence(&seq, origin, hi)?),
    }
    Ok(Verdict::Pass)
}

#[allow(clippy::too_many_arguments)]
fn map(
    ctx: &Ctx,
    kind: &str,
    input: &Input,
    rule: &Option<PathBuf>,
    r: Option<usize>,
    keep: usize,
    languages: &Option<String>,
    out: &Option<PathBuf>,
) -> Result<Verdict> {
    let seq = input.load()?;
    let f: BlockMap = match kind {
        "custom" => {
            let p = rule.as_ref().ok_or_else(|| Error::Domain("custom maps need --rule FILE".into()))?;
            parse_rule_tsv(&std::fs::read_to_string(p)?, seq.alphabet())?
        }
        "pi" | "collapse" => {
            let systems = match languages.as_ref().or(input.family.as_ref()) {
                Some(f) => family_spec(f)?.build()?.minimal_systems().map(<[_]>::to_vec),
                None => None,
            }
            .ok_or_else(|| Error::Domain("pi/collapse take their minimal languages from --languages or --family".into()))?;
            let r = match r {
                Some(r) => r,
                None => separating_length(&systems, 64)?
                    .ok_or_else(|| Error::Domain("no separating length up to 64".into()))?,
            };
            let langs = systems.iter().map(|m| m.language(r)).collect::<Result<Vec<_>>>()?;
            if kind == "pi" {
                build_pi(&langs, r, seq.alphabet())?.pi
            } else {
                let l = langs.get(keep).ok_or_else(|| Error::Domain(format!("no minimal system {keep}")))?;
                build_collapse(l, r, seq.alphabet(), None)?
            }
        }
        other => return Err(Error::Domain(format!("unknown map kind {other:?} (pi|collapse|custom)"))),
    };
    let img = apply_to_sequence(&f, &seq)?;
    let (lo, hi) = match img.domain() {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            let lo = if img.kind() == SequenceKind::BiInfinite { -500 } else { 0 };
            (lo, lo + 999)
        }
    };
    match ctx.path(out) {
        Some(p) => write_sequence(&p, &img, lo, hi)?,
        None => print!("{}", subshift::seqfile::format_sequence(&img, lo, hi)?),
    }
    Ok(Verdict::Pass)
}

fn analyze(ctx: &Ctx, input: &Input, nmax: usize, report: &str, bound: &Option<String>, raw: bool, out: &Option<PathBuf>) -> Result<Verdict> {
    let seq = input.load()?;
    let mut policy = SaturationPolicy::default().with_cap(ctx.cap);
    policy.use_surrogate = !raw;
    let table = build_language(&seq, nmax, &policy)?;
    let prof = profile(&table);
    let census = special_census(&table);
    let spec = match (report, bound) {
        ("bounds", Some(b)) => Some(BoundSpec::parse(b)?),
        ("bounds", None) => return Err(Error::Domain("--report bounds needs --bound \"alpha,g,mode\"".into())),
        ("profile" | "special", _) => bound.as_deref().map(BoundSpec::parse).transpose()?,
        (other, _) => return Err(Error::Domain(format!("unknown report {other:?} (profile|special|bounds)"))),
    };
    let br = spec.as_ref().map(|s| bound_report(&prof, s));
    let sat = prof.saturated_prefix();
    let verdict = match &br {
        Some(b) => b.verdict,
        None if sat >= nmax => Verdict::Pass,
        None => Verdict::Inconclusive,
    };
    let margin = |n: usize| br.as_ref().and_then(|b| b.trace.iter().find(|t| t.n == n)).map(|t| t.margin);
    let block = json!({
        "report": report,
        "source": seq.provenance(),
        "n_max": nmax,
        "saturated_prefix": sat,
        "surrogate": table.used_surrogate(),
        "bound": br,
        "verdict": verdict,
    });
    let mut rows = Vec::new();
    for n in 1..=nmax {
        let l = census.level(n);
        rows.push((n, prof.c(n), l.rs.len(), l.ls.len(), margin(n), prof.is_saturated(n)));
    }
    let text = match ctx.format {
        Format::Tsv => {
            let mut s = String::from("n\tc\trs\tls\tmargin\tsaturated\n");
            for (n, c, rs, ls, m, sat) in &rows {
                s.push_str(&format!("{n}\t{c}\t{rs}\t{ls}\t{}\t{sat}\n", m.map_or("-".into(), |m| m.to_string())));
            }
            if report == "special" {
                s.push_str(&census.to_tsv(&table));
            }
            s
        }
        Format::Json => {
            let levels: Vec<Value> = rows
                .iter()
                .map(|(n, c, rs, ls, m, sat)| json!({ "n": n, "c": c, "rs": rs, "ls": ls, "margin": m.map(|m| m.to_string()), "saturated": sat }))
                .collect();
            pretty(&json!({ "levels": levels, "verdict": block }))
        }
    };
    ctx.emit(out, &text)?;
    if ctx.format == Format::Tsv {
        match ctx.path(out) {
            Some(p) => {
                let mut s = p.as_os_str().to_owned();
                s.push(".verdict.json");
                write_atomic(Path::new(&s), pretty(&block).as_bytes())?;
            }
            None => print!("{}", pretty(&block)),
        }
    }
    Ok(verdict)
}

#[allow(clippy::too_many_arguments)]
fn measure(ctx: &Ctx, mode: &Option<String>, input: &Input, start: i64, lengths: &[u64], depth: usize, tol: Option<f64>, g: u64, nmax: usize, out: &Option<PathBuf>) -> Result<Verdict> {
    let seq = input.load()?;
    let (doc, verdict) = match mode.as_deref() {
        None => {
            let spec = WeakMetricSpec::default();
            let tol = tol.unwrap_or(0.01 + spec.tail_bound());
            let rep = generic_limit_probe(&seq, start, lengths, depth, &spec, tol)?;
            (rep.to_json(), rep.verdict)
        }
        Some("extract") => {
            let table = build_language(&seq, nmax, &SaturationPolicy::raw().with_cap(ctx.cap))?;
            let prof = profile(&table);
            let census = special_census(&table);
            let mut params = ExtractionParams::new(g, seq.alphabet());
            if let Some(t) = tol {
                params.tau = t;
            }
            let rep = extract_generic_candidates(&table, &prof, &census, &params)?;
            let v = if rep.candidates.is_empty() { Verdict::Inconclusive } else { Verdict::Pass };
            (rep.to_json(&table), v)
        }
        Some(other) => return Err(Error::Domain(format!("unknown measure mode {other:?} (extract)"))),
    };
    ctx.emit(out, &pretty(&json!({ "source": seq.provenance(), "report": doc })))?;
    Ok(verdict)
}

fn verify(ctx: &Ctx, tag: &str, params: &[String]) -> Result<Verdict> {
    let tags: Vec<String> = if tag == "all" {
        list_experiments().iter().map(|e| e.tag.to_string()).collect()
    } else {
        vec![tag.to_string()]
    };
    if tag == "all" && !params.is_empty() {
        return Err(Error::Domain("`verify all` takes no parameter overrides".into()));
    }
    let mut verdict = Verdict::Pass;
    for t in tags {
        let mut spec = ExperimentSpec::new(&t);
        spec.cap = ctx.cap;
        for p in params {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Domain(format!("parameter {p:?} is not key=value")))?;
            spec = spec.with(k.trim(), v.trim());
        }
        let bundle = run_experiment(&spec)?;
        if let Some(dir) = &ctx.out_dir {
            bundle.write(&dir.join(bundle_dir_name(&bundle.tag)), ctx.format)?;
        }
        print!("{}", bundle.summary());
        verdict = verdict.and(bundle.verdict());
    }
    Ok(verdict)
}

fn list(ctx: &Ctx) -> Result<Verdict> {
    match ctx.format {
        Format::Json => {
            let fams: Vec<Value> = FAMILIES.iter().map(|(n, p)| json!({ "family": n, "params": p })).collect();
            print!("{}", pretty(&json!({ "experiments": list_experiments(), "families": fams })));
        }
        Format::Tsv => {
            println!("tag\tcriteria\tclaim\tdefaults");
            for e in list_experiments() {
                let crit: Vec<String> = e.criteria.iter().map(u8::to_string).collect();
                let defs: Vec<String> = e.defaults.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{}\t{}\t{}\t{}", e.tag, crit.join(","), e.claim, defs.join(" "));
            }
            println!();
            println!("family\tparameters");
            for (n, p) in FAMILIES {
                println!("{n}\t{p}");
            }
        }
    }
    Ok(Verdict::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { cap: cli.cap, out_dir: cli.out_dir, format: cli.format };
    let res = match &cli.cmd {
        Cmd::Gen { family, params, length, origin, out } => gen(&ctx, family, params, *length, *origin, out),
        Cmd::Map { kind, input, rule, r, keep, languages, out } => map(&ctx, kind, input, rule, *r, *keep, languages, out),
        Cmd::Analyze { input, nmax, report, bound, raw, out } => analyze(&ctx, input, *nmax, report, bound, *raw, out),
        Cmd::Measure { mode, input, start, lengths, depth, tol, g, nmax, out } => {
            measure(&ctx, mode, input, *start, lengths, *depth, *tol, *g, *nmax, out)
        }
        Cmd::Verify { tag, params } => verify(&ctx, tag, params),
        Cmd::List => list(&ctx),
    };
    match res {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
