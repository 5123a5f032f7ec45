use crate::alphabet::{Alphabet, Symbol};
use crate::error::{domain, Error, Result};
use crate::sequence::{LeftTail, Provenance, SequenceKind, SymbolSource, SymbolicSequence, TailPeriodic};

use super::growth::GrowthFunction;
use super::schedule::{Entry, SEARCH_CAP};
use super::MinimalSystem;

/// Canonical exponents for the transitive family: `n_k` is the least value with `n_k > n_{k−1}`,
/// `n_k > n_{k−1} + n_{k−2}` and `g(n_k) > Σ_{i<k} n_i`, each by at least `margin`.
pub fn transitive_schedule(g: &GrowthFunction, margin: u64) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    let mut total: u128 = 0;
    loop {
        let k = out.len();
        let prev = if k >= 1 { out[k - 1].value() } else { 0 };
        let prev2 = if k >= 2 { out[k - 2].value() } else { 0 };
        let lb = prev.max(prev.saturating_add(prev2)).saturating_add(margin as u128);
        let target = total.saturating_add(margin as u128);
        let e = if lb > SEARCH_CAP as u128 {
            Entry::BeyondCap
        } else {
            match g.first_reaching(target, lb as u64, SEARCH_CAP) {
                Some(n) => Entry::Finite(n),
                None if g.eval(SEARCH_CAP) <= g.eval(1) => {
                    return Err(Error::Schedule(format!("{} is not unbounded on [1, 2^62]", g.tag())))
                }
                None => Entry::BeyondCap,
            }
        };
        out.push(e);
        if e == Entry::BeyondCap {
            return Ok(out);
        }
        total = total.saturating_add(e.value());
    }
}

#[derive(Debug, Clone)]
struct Transitive {
    j: usize,
    runs: Vec<Entry>,
    /// `starts[k]` = index where run `k` (0-based) begins.
    starts: Vec<u128>,
}

impl Transitive {
    fn run_symbol(&self, k: usize) -> Symbol {
        Symbol(1 + (k % (self.j - 1)) as u8)
    }
}

impl SymbolSource for Transitive {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        if i < 0 {
            return Ok(Symbol(0));
        }
        let k = self.starts.partition_point(|&s| s <= i as u128) - 1;
        Ok(self.run_symbol(k))
    }

    fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        let n = n_max as u128;
        let first_long = self.runs.iter().position(|e| e.value() > n)?;
        let mut prefix = Vec::new();
        for k in 0..first_long {
            prefix.extend(std::iter::repeat(self.run_symbol(k)).take(self.runs[k].value() as usize));
        }
        let mut period = Vec::new();
        for k in first_long..first_long + self.j - 1 {
            period.extend(std::iter::repeat(self.run_symbol(k)).take(n_max + 1));
        }
        let src = TailPeriodic { left: LeftTail::Constant(Symbol(0)), prefix, period };
        let prov = Provenance::new("surrogate", serde_json::json!({ "n": n_max, "source": "transitive" }));
        Some(Ok(SymbolicSequence::new(src, SequenceKind::BiInfinite, Alphabet::digits(self.j), prov)))
    }
}

/// `0^∞ . 1^{n_1} 2^{n_2} ⋯ (j−1)^{n_{j−1}} 1^{n_j} ⋯` over `{0..j−1}`.
pub fn transitive_family(j: usize, g: &GrowthFunction) -> Result<SymbolicSequence> {
    transitive_family_with_margin(j, g, 1)
}

pub fn transitive_family_with_margin(j: usize, g: &GrowthFunction, margin: u64) -> Result<SymbolicSequence> {
    if j < 3 {
        return domain("transitive family needs j ≥ 3");
    }
    let runs = transitive_schedule(g, margin)?;
    let mut starts = vec![0u128];
    for e in &runs {
        let last = *starts.last().unwrap();
        starts.push(last.saturating_add(e.value()));
    }
    starts.pop();
    let prov = Provenance::new(
        "transitive",
        serde_json::json!({ "j": j, "g": g.tag(), "margin": margin, "runs": runs }),
    );
    let minimal = (0..j as u8).map(|s| MinimalSystem::Periodic { cycle: vec![Symbol(s)].into() }).collect();
    Ok(SymbolicSequence::new(Transitive { j, runs, starts }, SequenceKind::BiInfinite, Alphabet::digits(j), prov)
        .with_minimal_systems(minimal))
}

/// The run lengths `n_1, n_2, …` recorded in a transitive family's provenance.
pub fn transitive_runs(seq: &SymbolicSequence) -> Option<Vec<Entry>> {
    serde_json::from_value(seq.provenance().params.get("runs")?.clone()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_inequalities() {
        for g in [GrowthFunction::log2(), GrowthFunction::sqrt(), GrowthFunction::linear(1)] {
            let runs = transitive_schedule(&g, 1).unwrap();
            let fin: Vec<u64> = runs.iter().filter_map(|e| e.finite()).collect();
            let mut total = 0u128;
            for (k, &n) in fin.iter().enumerate() {
                assert!(g.eval(n) as u128 > total);
                if k >= 2 {
                    assert!(n > fin[k - 1] + fin[k - 2]);
                }
                total += n as u128;
            }
        }
    }

    #[test]
    fn layout() {
        let x = transitive_family(3, &GrowthFunction::linear(1)).unwrap();
        let runs: Vec<u64> = transitive_runs(&x).unwrap().iter().filter_map(|e| e.finite()).collect();
        assert_eq!(&runs[..4], &[1, 2, 4, 8]);
        assert_eq!(x.render(-3, 14).unwrap(), "000122111122222222");
    }
}
