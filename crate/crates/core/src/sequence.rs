use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{domain, Result};
use crate::generators::MinimalSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    BiInfinite,
    RightInfinite,
}

/// Where a sequence came from: family tag plus every parameter needed to rebuild it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub family: String,
    pub params: Value,
}

impl Provenance {
    pub fn new(family: impl Into<String>, params: Value) -> Self {
        Provenance { family: family.into(), params }
    }
}

/// Backing rule of a [`SymbolicSequence`]. Implementations are immutable.
pub trait SymbolSource: Send + Sync + fmt::Debug {
    fn symbol_at(&self, i: i64) -> Result<Symbol>;

    fn fill(&self, start: i64, out: &mut [Symbol]) -> Result<()> {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.symbol_at(start + k as i64)?;
        }
        Ok(())
    }

    /// A sequence with the same words of length ≤ `n_max` whose windows saturate quickly.
    fn language_surrogate(&self, _n_max: usize) -> Option<Result<SymbolicSequence>> {
        None
    }

    /// A window `[lo, hi]` known to contain every word of length ≤ `n`, when the structure gives one.
    fn coverage_hint(&self, _n: usize) -> Option<(i64, i64)> {
        None
    }
}

struct Inner {
    source: Box<dyn SymbolSource>,
    kind: SequenceKind,
    lo: Option<i64>,
    hi: Option<i64>,
    alphabet: Alphabet,
    provenance: Provenance,
    minimal: Option<Vec<MinimalSystem>>,
}

/// Lazily evaluated symbol stream. Cheap to clone.
#[derive(Clone)]
pub struct SymbolicSequence {
    inner: Arc<Inner>,
}

impl fmt::Debug for SymbolicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolicSequence")
            .field("family", &self.inner.provenance.family)
            .field("kind", &self.inner.kind)
            .field("alphabet", &self.inner.alphabet)
            .finish()
    }
}

impl SymbolicSequence {
    pub fn new(
        source: impl SymbolSource + 'static,
        kind: SequenceKind,
        alphabet: Alphabet,
        provenance: Provenance,
    ) -> Self {
        let lo = match kind {
            SequenceKind::BiInfinite => None,
            SequenceKind::RightInfinite => Some(0),
        };
        SymbolicSequence {
            inner: Arc::new(Inner {
                source: Box::new(source),
                kind,
                lo,
                hi: None,
                alphabet,
                provenance,
                minimal: None,
            }),
        }
    }

    /// Restricts the valid index range (finite data).
    pub fn with_domain(self, lo: Option<i64>, hi: Option<i64>) -> Self {
        self.rebuild(|inner| {
            inner.lo = match (inner.lo, lo) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            };
            inner.hi = hi;
        })
    }

    /// Attaches the analytically known minimal subsystems of the orbit closure.
    pub fn with_minimal_systems(self, systems: Vec<MinimalSystem>) -> Self {
        self.rebuild(|inner| inner.minimal = Some(systems))
    }

    fn rebuild(self, f: impl FnOnce(&mut Inner)) -> Self {
        match Arc::try_unwrap(self.inner) {
            Ok(mut inner) => {
                f(&mut inner);
                SymbolicSequence { inner: Arc::new(inner) }
            }
            Err(shared) => {
                let mut inner = Inner {
                    source: Box::new(Delegate(SymbolicSequence { inner: shared.clone() })),
                    kind: shared.kind,
                    lo: shared.lo,
                    hi: shared.hi,
                    alphabet: shared.alphabet.clone(),
                    provenance: shared.provenance.clone(),
                    minimal: shared.minimal.clone(),
                };
                f(&mut inner);
                SymbolicSequence { inner: Arc::new(inner) }
            }
        }
    }

    pub fn kind(&self) -> SequenceKind {
        self.inner.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.inner.alphabet
    }

    pub fn provenance(&self) -> &Provenance {
        &self.inner.provenance
    }

    pub fn minimal_systems(&self) -> Option<&[MinimalSystem]> {
        self.inner.minimal.as_deref()
    }

    /// Inclusive index bounds; `None` means unbounded on that side.
    pub fn domain(&self) -> (Option<i64>, Option<i64>) {
        (self.inner.lo, self.inner.hi)
    }

    pub fn is_finite(&self) -> bool {
        self.inner.lo.is_some() && self.inner.hi.is_some()
    }

    pub fn contains_index(&self, i: i64) -> bool {
        self.inner.lo.map_or(true, |lo| i >= lo) && self.inner.hi.map_or(true, |hi| i <= hi)
    }

    pub fn try_symbol_at(&self, i: i64) -> Result<Symbol> {
        if !self.contains_index(i) {
            return domain(format!("index {i} outside sequence domain {:?}", self.domain()));
        }
        self.inner.source.symbol_at(i)
    }

    /// Panics on out-of-domain indices or unresolved precision; use [`try_symbol_at`](Self::try_symbol_at) otherwise.
    pub fn symbol_at(&self, i: i64) -> Symbol {
        self.try_symbol_at(i).unwrap_or_else(|e| panic!("symbol_at({i}): {e}"))
    }

    /// The word `x_lo … x_hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Word> {
        if lo > hi {
            return domain(format!("empty window [{lo}, {hi}]"));
        }
        if !self.contains_index(lo) || !self.contains_index(hi) {
            return domain(format!("window [{lo}, {hi}] outside sequence domain {:?}", self.domain()));
        }
        let mut out = vec![Symbol(0); (hi - lo + 1) as usize];
        self.inner.source.fill(lo, &mut out)?;
        Ok(Word(out))
    }

    pub fn render(&self, lo: i64, hi: i64) -> Result<String> {
        Ok(self.alphabet().render(&self.window(lo, hi)?))
    }

    pub fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        self.inner.source.language_surrogate(n_max)
    }

    pub fn coverage_hint(&self, n: usize) -> Option<(i64, i64)> {
        self.inner.source.coverage_hint(n)
    }
}

#[derive(Debug)]
struct Delegate(SymbolicSequence);

impl SymbolSource for Delegate {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        self.0.inner.source.symbol_at(i)
    }
    fn fill(&self, start: i64, out: &mut [Symbol]) -> Result<()> {
        self.0.inner.source.fill(start, out)
    }
    fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        self.0.inner.source.language_surrogate(n_max)
    }
    fn coverage_hint(&self, n: usize) -> Option<(i64, i64)> {
        self.0.inner.source.coverage_hint(n)
    }
}

#[derive(Debug)]
struct Shifted {
    inner: SymbolicSequence,
    k: i64,
}

impl SymbolSource for Shifted {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        self.inner.try_symbol_at(i + self.k)
    }
    fn fill(&self, start: i64, out: &mut [Symbol]) -> Result<()> {
        self.inner.inner.source.fill(start + self.k, out)
    }
    fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        self.inner.language_surrogate(n_max)
    }
    fn coverage_hint(&self, n: usize) -> Option<(i64, i64)> {
        self.inner.coverage_hint(n).map(|(lo, hi)| (lo - self.k, hi - self.k))
    }
}

/// `σ^k`: the result reads `seq.symbol_at(i + k)` at index `i`.
pub fn shift(seq: &SymbolicSequence, k: i64) -> Result<SymbolicSequence> {
    if k == 0 {
        return Ok(seq.clone());
    }
    if seq.kind() == SequenceKind::RightInfinite && k < 0 {
        return domain(format!("negative shift {k} of a right-infinite sequence"));
    }
    let (lo, hi) = seq.domain();
    let prov = Provenance::new(
        "shift",
        serde_json::json!({ "k": k, "source": seq.provenance() }),
    );
    let mut out = SymbolicSequence::new(
        Shifted { inner: seq.clone(), k },
        seq.kind(),
        seq.alphabet().clone(),
        prov,
    );
    if lo.is_some() || hi.is_some() {
        out = out.with_domain(lo.map(|l| l - k), hi.map(|h| h - k));
    }
    if let Some(m) = seq.minimal_systems() {
        out = out.with_minimal_systems(m.to_vec());
    }
    Ok(out)
}

/// Left tail of a [`TailPeriodic`] source.
#[derive(Debug, Clone)]
pub enum LeftTail {
    Constant(Symbol),
    /// Index `-t` reads `seq.symbol_at(end - t)`, i.e. the left-infinite part of `seq` ending just before `end`.
    Borrowed { seq: SymbolicSequence, end: i64 },
}

/// `… tail . prefix period period …`, the shape of every finite-language surrogate.
#[derive(Debug, Clone)]
pub struct TailPeriodic {
    pub left: LeftTail,
    pub prefix: Vec<Symbol>,
    pub period: Vec<Symbol>,
}

impl SymbolSource for TailPeriodic {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        if i < 0 {
            return match &self.left {
                LeftTail::Constant(s) => Ok(*s),
                LeftTail::Borrowed { seq, end } => seq.try_symbol_at(end + i),
            };
        }
        let i = i as usize;
        if i < self.prefix.len() {
            Ok(self.prefix[i])
        } else {
            Ok(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    // the left tail's own words recur on the right, so only the junction is needed on the left
    fn coverage_hint(&self, n: usize) -> Option<(i64, i64)> {
        Some((-(n as i64) - 1, (self.prefix.len() + 2 * self.period.len() + n + 1) as i64))
    }
}

/// Bi-infinite periodic point `… u u . u u …` with `x_0 = u_0`.
#[derive(Debug, Clone)]
pub struct Periodic {
    pub cycle: Vec<Symbol>,
}

impl SymbolSource for Periodic {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        Ok(self.cycle[i.rem_euclid(self.cycle.len() as i64) as usize])
    }

    fn coverage_hint(&self, n: usize) -> Option<(i64, i64)> {
        Some((0, (self.cycle.len() + n) as i64))
    }
}

/// Finite data; index `i` reads `data[i + origin]`.
#[derive(Debug, Clone)]
pub struct Finite {
    pub data: Vec<Symbol>,
    pub origin: i64,
}

impl SymbolSource for Finite {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        let k = i + self.origin;
        if k < 0 || k as usize >= self.data.len() {
            return domain(format!("index {i} outside finite data"));
        }
        Ok(self.data[k as usize])
    }
    fn fill(&self, start: i64, out: &mut [Symbol]) -> Result<()> {
        let k = start + self.origin;
        if k < 0 || k as usize + out.len() > self.data.len() {
            return domain(format!("range starting at {start} outside finite data"));
        }
        out.copy_from_slice(&self.data[k as usize..k as usize + out.len()]);
        Ok(())
    }
}

/// Sequence over finite data with `data[origin]` at index 0.
pub fn finite_sequence(
    data: Vec<Symbol>,
    origin: i64,
    kind: SequenceKind,
    alphabet: Alphabet,
    provenance: Provenance,
) -> Result<SymbolicSequence> {
    if data.is_empty() {
        return domain("empty data");
    }
    alphabet.check(&data)?;
    if kind == SequenceKind::RightInfinite && origin != 0 {
        return domain("an origin offset requires a bi-infinite sequence");
    }
    let hi = data.len() as i64 - 1 - origin;
    Ok(SymbolicSequence::new(Finite { data, origin }, kind, alphabet, provenance)
        .with_domain(Some(-origin), Some(hi)))
}

/// Bi-infinite periodic sequence over the given alphabet.
pub fn periodic(alphabet: Alphabet, cycle: Word) -> Result<SymbolicSequence> {
    if cycle.is_empty() {
        return domain("empty cycle");
    }
    alphabet.check(&cycle)?;
    let prov = Provenance::new(
        "periodic",
        serde_json::json!({ "cycle": alphabet.render(&cycle), "alphabet": alphabet.tokens() }),
    );
    let minimal = vec![MinimalSystem::Periodic { cycle: cycle.clone() }];
    Ok(SymbolicSequence::new(Periodic { cycle: cycle.0 }, SequenceKind::BiInfinite, alphabet, prov)
        .with_minimal_systems(minimal))
}

/// Periodic sequence from a compact string such as `"0011"`; the alphabet is the sorted set of characters.
pub fn periodic_from_str(cycle: &str) -> Result<SymbolicSequence> {
    let mut chars: Vec<char> = cycle.chars().collect();
    chars.sort_unstable();
    chars.dedup();
    let alphabet = Alphabet::new(chars.iter().map(|c| c.to_string()))?;
    let word = alphabet.parse(cycle)?;
    periodic(alphabet, word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> SymbolicSequence {
        periodic_from_str("011").unwrap()
    }

    #[test]
    fn shift_identity_and_inverse() {
        let x = ab();
        let y = shift(&shift(&x, 3).unwrap(), -3).unwrap();
        for i in -20..20 {
            assert_eq!(x.symbol_at(i), y.symbol_at(i));
            assert_eq!(shift(&x, 0).unwrap().symbol_at(i), x.symbol_at(i));
            assert_eq!(shift(&x, 1).unwrap().symbol_at(i), x.symbol_at(i + 1));
        }
    }

    #[test]
    fn negative_shift_of_right_infinite_is_rejected() {
        let x = finite_sequence(
            vec![Symbol(0), Symbol(1)],
            0,
            SequenceKind::RightInfinite,
            Alphabet::digits(2),
            Provenance::new("t", Value::Null),
        )
        .unwrap();
        assert!(shift(&x, -1).is_err());
        assert_eq!(shift(&x, 1).unwrap().symbol_at(0), Symbol(1));
    }

    #[test]
    fn window_bounds() {
        let x = ab();
        assert_eq!(x.render(0, 5).unwrap(), "011011");
        assert_eq!(x.window(4, 4).unwrap().0, vec![x.symbol_at(4)]);
        assert!(x.window(3, 2).is_err());
        let f = finite_sequence(
            vec![Symbol(0), Symbol(1), Symbol(1)],
            1,
            SequenceKind::BiInfinite,
            Alphabet::digits(2),
            Provenance::new("t", Value::Null),
        )
        .unwrap();
        assert_eq!(f.render(-1, 1).unwrap(), "011");
        assert!(f.window(-2, 0).is_err());
    }

    #[test]
    fn tail_periodic_layout() {
        let s = TailPeriodic {
            left: LeftTail::Constant(Symbol(1)),
            prefix: vec![Symbol(0)],
            period: vec![Symbol(1), Symbol(0)],
        };
        let got: Vec<u8> = (-2..5).map(|i| s.symbol_at(i).unwrap().0).collect();
        assert_eq!(got, vec![1, 1, 0, 1, 0, 1, 0]);
    }
}
