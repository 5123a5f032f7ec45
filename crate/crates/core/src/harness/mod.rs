//! Reproducible verification experiments: a catalog of claims, a runner per tag, and report
//! bundles (provenance JSON, verdicts JSON, TSV or JSON traces).

mod runs;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::language::SaturationPolicy;
use crate::seqfile::write_atomic;
use crate::verdict::Verdict;

/// One catalog row: the claim a tag checks, the witnesses used, and default parameters.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub tag: &'static str,
    pub aliases: &'static [&'static str],
    pub claim: &'static str,
    pub witnesses: &'static str,
    /// Acceptance criteria (1–13) whose verdicts this experiment reports.
    pub criteria: &'static [u8],
    pub defaults: &'static [(&'static str, &'static str)],
    /// Why the default horizon is enough.
    pub horizon: &'static str,
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        tag: "T1.1",
        aliases: &[],
        claim: "For a transitive subshift with a recurrent transitive point and j ≥ 2 minimal subsystems, \
                i of them infinite, the following bounds hold and are sharp: limsup (c(n) − (j+i+1)n) = ∞ \
                and liminf (c(n) − (j+i)n) = ∞; adding any unbounded nondecreasing g to either threshold breaks it.",
        witnesses: "recurrent ruler families (i = 0): ceilings c(n) ≤ (j+1)n + g(n) and c(n_k^1) ≤ j·n_k^1 + g(n_k^1), \
                    liminf floor of c(n) − jn; stitched families (i > 0): c_{X′}(n) = c_X(n) + i·n and the floor of c(n) − (j+i)n",
        criteria: &[4, 6, 9],
        defaults: &[
            ("j", "2,3"),
            ("g", "log2,sqrt"),
            ("n_max", "4096"),
            ("stitched", "2:1,3:1,3:2"),
            ("stitched_g", "sqrt"),
            ("stitched_n_max", "2048"),
        ],
        horizon: "4096 saturated levels (≥ 200); sqrt schedules reach n_2^1 = 145 inside it, log2 schedules only n_1",
    },
    CatalogEntry {
        tag: "T1.2",
        aliases: &[],
        claim: "A transitive subshift with j ≥ 3 minimal subsystems, i of them infinite, has liminf (c(n) − (j+i)n) = ∞.",
        witnesses: "run families 0^∞.1^{n_1}2^{n_2}⋯(j−1)^{n_{j−1}}1^{n_j}⋯: liminf floor of c(n) − jn",
        criteria: &[9],
        defaults: &[("j", "3,4"), ("g", "sqrt"), ("n_max", "4096")],
        horizon: "4096 levels cover the runs 1, 2, 10, 170 and the start of 33490",
    },
    CatalogEntry {
        tag: "T2.1",
        aliases: &[],
        claim: "A Sturmian subshift has c(n) = n + 1 for every n ≥ 1.",
        witnesses: "rotation coding with β = (√5−1)/2, x0 = β/2",
        criteria: &[1],
        defaults: &[("beta", "golden"), ("n_max", "200")],
        horizon: "200 levels; the coding saturates after a few thousand symbols",
    },
    CatalogEntry {
        tag: "T2.2",
        aliases: &[],
        claim: "If c(n) ≤ n for some n ≥ 1, the subshift is a finite union of periodic orbits.",
        witnesses: "periodic points (01)^∞ and (0011)^∞ with the periodicity detector; a Sturmian control never triggers",
        criteria: &[2],
        defaults: &[("cycles", "01,0011"), ("n_max", "64")],
        horizon: "64 levels; periods are certified over at least 4 repetitions",
    },
    CatalogEntry {
        tag: "T2.3",
        aliases: &[],
        claim: "A non-minimal transitive subshift with a recurrent transitive point has limsup (c(n) − 1.5n) = ∞.",
        witnesses: "recurrent ruler family: limsup floor of 2c(n) − 3n",
        criteria: &[],
        defaults: &[("j", "2"), ("g", "sqrt"), ("n_max", "4096")],
        horizon: "4096 saturated levels",
    },
    CatalogEntry {
        tag: "T2.5",
        aliases: &[],
        claim: "If such a subshift properly contains an infinite minimal subsystem, limsup (c(n) − 2.5n) = ∞.",
        witnesses: "stitched family: limsup floor of 2c(n) − 5n",
        criteria: &[],
        defaults: &[("j", "2"), ("i", "1"), ("g", "sqrt"), ("n_max", "2048")],
        horizon: "2048 saturated levels",
    },
    CatalogEntry {
        tag: "T4.1",
        aliases: &["T4.1-i1", "T4.1-i2"],
        claim: "A transitive subshift with two minimal subsystems, i ≥ 1 of them infinite, has \
                liminf (c(n) − (i+1)n) > −∞, and no uniform constant works: 0^∞.s has c(N) = N+1 and \
                c(n) = 2n − N + 1 for n ≥ N; r.s has c(n) = 2n for n ≤ N and c(n) = 3n − N for n > N.",
        witnesses: "Sturmian halves with β in (1/(N+1), 1/N); T4.1-i1 / T4.1-i2 select one case",
        criteria: &[3],
        defaults: &[("case", "i1,i2"), ("N", "5,10,20"), ("n_max", "150")],
        horizon: "150 levels, exact on saturated levels",
    },
    CatalogEntry {
        tag: "T4.2",
        aliases: &[],
        claim: "For j ≥ 3 the bound limsup (c(n) − (j+i)n) = ∞ cannot be improved: the run family has \
                c(n) < jn + g(n), all a^n are right-special, and j+1 right-special words occur only for \
                n in (n_k, n_k + n_{k−1}].",
        witnesses: "run families 0^∞.1^{n_1}2^{n_2}⋯",
        criteria: &[],
        defaults: &[("j", "3,4"), ("g", "sqrt"), ("n_max", "4096")],
        horizon: "4096 levels cover three ranges (n_k, n_k + n_{k−1}]",
    },
    CatalogEntry {
        tag: "L3.1",
        aliases: &[],
        claim: "For the marker map π of radius r built from the minimal languages, c_X(n) ≥ c_{π(X)}(n − r) + i·n.",
        witnesses: "stitched families; randomized block-map contracts (word/sequence coherence, output length, composition)",
        criteria: &[7, 13],
        defaults: &[
            ("stitched", "2:1,3:1,3:2"),
            ("g", "sqrt"),
            ("n_max", "1024"),
            ("trials", "10000"),
            ("span", "10000"),
        ],
        horizon: "1024 levels; composition compared on [−span, span]",
    },
    CatalogEntry {
        tag: "P3.8",
        aliases: &[],
        claim: "On the recurrent ruler family #RS(n) ≥ j, with at most j+2 right-special words just past n_k^p, \
                at most j after n_k^j + n_k^1 + L(k), and at most j+1 otherwise; every subshift has \
                c(n+1) − c(n) = Σ_{w∈RS(n)} (|ext(w)| − 1) ≥ #RS(n).",
        witnesses: "recurrent families for the census; every generated family for the counting identity",
        criteria: &[5, 8],
        defaults: &[("j", "2,3"), ("g", "log2,sqrt"), ("n_max", "2048")],
        horizon: "2048 levels for the ruler families, 256 for the others",
    },
    CatalogEntry {
        tag: "§5-staircase",
        aliases: &["staircase"],
        claim: "The staircase point 0^∞.0 11 000 1111 ⋯ is generic for (δ_{0^∞} + δ_{1^∞})/2.",
        witnesses: "empirical cylinder frequencies from index 0, cross-checked against closed-form run counts",
        criteria: &[10],
        defaults: &[("n", "1000000"), ("start", "0")],
        horizon: "10^6 symbols (about 1414 runs)",
    },
    CatalogEntry {
        tag: "T1.4-extract",
        aliases: &[],
        claim: "If x is not eventually periodic in both directions and liminf (c(n) − gn) = −∞, the orbit closure \
                has at most g − 1 generic measures; every n-window of length c(n) + n contains a right-special word.",
        witnesses: "candidate extraction on the staircase (g = 3) and a Sturmian (g = 2); exhaustive window scans",
        criteria: &[11, 12],
        defaults: &[("n_max", "64"), ("g_staircase", "3"), ("g_sturmian", "2"), ("cover_n", "30")],
        horizon: "64 levels from raw windows; cover scans every window position",
    },
];

pub fn list_experiments() -> &'static [CatalogEntry] {
    CATALOG
}

/// Resolves a tag or alias to its catalog entry.
pub fn lookup(tag: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.tag == tag || e.aliases.contains(&tag))
        .ok_or_else(|| Error::Domain(format!("unknown experiment tag {tag:?}; see `list`")))
}

/// Everything that determines an experiment's outputs.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Tag as given (an alias such as `T4.1-i2` narrows the run).
    pub tag: String,
    /// Overrides of the catalog defaults.
    pub params: BTreeMap<String, String>,
    /// Window cap in symbols for language tables.
    pub cap: usize,
    /// Where to write the bundle; `None` keeps it in memory.
    pub out_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(tag: &str) -> Self {
        ExperimentSpec { tag: tag.to_string(), params: BTreeMap::new(), cap: 1 << 26, out_dir: None }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Catalog defaults overlaid with the overrides; unknown keys are rejected.
    pub fn resolved(&self) -> Result<BTreeMap<String, String>> {
        let entry = lookup(&self.tag)?;
        let mut out: BTreeMap<String, String> =
            entry.defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        if let Some(case) = self.tag.strip_prefix("T4.1-") {
            out.insert("case".into(), case.into());
        }
        for (k, v) in &self.params {
            if !out.contains_key(k) {
                return domain(format!("{} takes no parameter {k:?}", entry.tag));
            }
            out.insert(k.clone(), v.clone());
        }
        Ok(out)
    }
}

/// One verdict with a short human-readable reason.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub criterion: Option<u8>,
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

/// A table of exact values, written as TSV or JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Trace {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Trace { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        self.rows.push(cells);
    }

    pub fn to_tsv(&self) -> String {
        let mut s = self.columns.join("\t");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|v| match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                })
                .collect();
            s.push_str(&cells.join("\t"));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
            .collect();
        json!({ "name": self.name, "rows": rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            _ => domain(format!("unknown format {s:?} (tsv|json)")),
        }
    }
}

/// The outputs of one experiment.
#[derive(Debug, Clone)]
pub struct Bundle {
    /// Canonical tag.
    pub tag: String,
    pub requested: String,
    pub params: BTreeMap<String, String>,
    pub cap: usize,
    pub checks: Vec<Check>,
    pub traces: Vec<Trace>,
    /// Provenance of every sequence analysed, in order of use.
    pub sources: Vec<Value>,
}

impl Bundle {
    pub fn verdict(&self) -> Verdict {
        Verdict::all(self.checks.iter().map(|c| c.verdict))
    }

    /// Combined verdict per acceptance criterion.
    pub fn criteria(&self) -> BTreeMap<u8, Verdict> {
        let mut out: BTreeMap<u8, Verdict> = BTreeMap::new();
        for c in &self.checks {
            if let Some(k) = c.criterion {
                let v = out.entry(k).or_insert(Verdict::Pass);
                *v = v.and(c.verdict);
            }
        }
        out
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict().exit_code()
    }

    pub fn provenance_json(&self) -> Value {
        json!({
            "tag": self.tag,
            "requested": self.requested,
            "crate": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "params": self.params,
            "cap": self.cap,
            "sources": self.sources,
        })
    }

    pub fn verdicts_json(&self) -> Value {
        let criteria: BTreeMap<String, Verdict> = self.criteria().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        json!({
            "tag": self.tag,
            "verdict": self.verdict(),
            "criteria": criteria,
            "checks": self.checks,
        })
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let crit = c.criterion.map_or("-".to_string(), |k| k.to_string());
            s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", self.tag, crit, c.name, c.verdict, c.detail));
        }
        s.push_str(&format!("{}\toverall\t{}\n", self.tag, self.verdict()));
        s
    }

    /// Writes `provenance.json`, `verdicts.json` and one file per trace into `dir`.
    pub fn write(&self, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: String, bytes: Vec<u8>| -> Result<()> {
            let p = dir.join(name);
            write_atomic(&p, &bytes)?;
            written.push(p);
            Ok(())
        };
        put("provenance.json".into(), pretty(&self.provenance_json()))?;
        put("verdicts.json".into(), pretty(&self.verdicts_json()))?;
        for t in &self.traces {
            match format {
                Format::Tsv => put(format!("{}.tsv", t.name), t.to_tsv().into_bytes())?,
                Format::Json => put(format!("{}.json", t.name), pretty(&t.to_json()))?,
            }
        }
        Ok(written)
    }
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("JSON values serialize");
    b.push(b'\n');
    b
}

/// Directory name for a tag (`§` dropped).
pub fn bundle_dir_name(tag: &str) -> String {
    tag.replace('§', "S")
}

/// Runs the experiment and, when `spec.out_dir` is set, writes the bundle there (TSV traces).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Bundle> {
    let entry = lookup(&spec.tag)?;
    let params = spec.resolved()?;
    let mut run = runs::Run::new(entry.tag, &params, SaturationPolicy::default().with_cap(spec.cap));
    match entry.tag {
        "T1.1" => run.t1_1()?,
        "T1.2" => run.t1_2()?,
        "T2.1" => run.t2_1()?,
        "T2.2" => run.t2_2()?,
        "T2.3" => run.t2_3()?,
        "T2.5" => run.t2_5()?,
        "T4.1" => run.t4_1()?,
        "T4.2" => run.t4_2()?,
        "L3.1" => run.l3_1()?,
        "P3.8" => run.p3_8()?,
        "§5-staircase" => run.staircase()?,
        "T1.4-extract" => run.extract()?,
        other => unreachable!("catalog tag {other} has a runner"),
    }
    let bundle = Bundle {
        tag: entry.tag.to_string(),
        requested: spec.tag.clone(),
        params: params.clone(),
        cap: spec.cap,
        checks: run.checks,
        traces: run.traces,
        sources: run.sources,
    };
    if let Some(dir) = &spec.out_dir {
        bundle.write(dir, Format::Tsv)?;
    }
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_tags_are_unique_and_resolvable() {
        let mut seen = std::collections::HashSet::new();
        for e in list_experiments() {
            assert!(seen.insert(e.tag), "{}", e.tag);
            for a in e.aliases {
                assert!(seen.insert(a), "{a}");
            }
            assert_eq!(lookup(e.tag).unwrap().tag, e.tag);
        }
        assert_eq!(lookup("staircase").unwrap().tag, "§5-staircase");
        assert!(lookup("T9.9").is_err());
        assert!(lookup("T1.1").unwrap().claim.contains("hold and are sharp"));
    }

    #[test]
    fn every_criterion_is_covered() {
        let mut all: Vec<u8> = list_experiments().iter().flat_map(|e| e.criteria.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all, (1..=13).collect::<Vec<u8>>());
    }

    #[test]
    fn params_resolve_against_defaults() {
        let s = ExperimentSpec::new("T4.1-i2").with("N", "10");
        let p = s.resolved().unwrap();
        assert_eq!(p["case"], "i2");
        assert_eq!(p["N"], "10");
        assert!(ExperimentSpec::new("T2.1").with("bogus", 1).resolved().is_err());
    }

    #[test]
    fn trace_formats() {
        let mut t = Trace::new("x", &["n", "c"]);
        t.row(vec![json!(1), json!("2")]);
        assert_eq!(t.to_tsv(), "n\tc\n1\t2\n");
        assert_eq!(t.to_json()["rows"][0]["c"], "2");
    }
}
