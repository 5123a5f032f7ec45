//! Sliding block codes `f(x)_i = F(x_{i−m} … x_{i+a})`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{domain, Error, Result};
use crate::sequence::{Provenance, SequenceKind, SymbolSource, SymbolicSequence};

type Rule = Arc<dyn Fn(&[Symbol]) -> Option<Symbol> + Send + Sync>;

/// A sliding block code with memory `m` and anticipation `a`.
#[derive(Clone)]
pub struct BlockMap {
    memory: usize,
    anticipation: usize,
    source: Alphabet,
    target: Alphabet,
    name: String,
    rule: Rule,
}

impl fmt::Debug for BlockMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlockMap")
            .field("name", &self.name)
            .field("memory", &self.memory)
            .field("anticipation", &self.anticipation)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl BlockMap {
    pub fn new(
        memory: usize,
        anticipation: usize,
        source: Alphabet,
        target: Alphabet,
        name: impl Into<String>,
        rule: impl Fn(&[Symbol]) -> Option<Symbol> + Send + Sync + 'static,
    ) -> Self {
        BlockMap { memory, anticipation, source, target, name: name.into(), rule: Arc::new(rule) }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        BlockMap::new(0, 0, alphabet.clone(), alphabet, "identity", |w| Some(w[0]))
    }

    /// Letter-to-letter map; `table[s]` is the image of symbol `s`.
    pub fn one_block(source: Alphabet, target: Alphabet, table: Vec<Symbol>, name: &str) -> Result<Self> {
        if table.len() != source.len() {
            return domain(format!("1-block table has {} entries for {} symbols", table.len(), source.len()));
        }
        target.check(&table)?;
        Ok(BlockMap::new(0, 0, source, target, name, move |w| table.get(w[0].index()).copied()))
    }

    /// 1-block map to `{0,1}` sending `zeros` to 0 and everything else to 1.
    pub fn indicator(source: Alphabet, zeros: &[Symbol]) -> Result<Self> {
        let table = source.symbols().map(|s| Symbol(!zeros.contains(&s) as u8)).collect();
        BlockMap::one_block(source, Alphabet::digits(2), table, "indicator")
    }

    /// Rule given by an explicit table of windows; `center_fallback` maps unlisted windows to their
    /// centre symbol (by token) when the target alphabet has it.
    pub fn from_table(
        memory: usize,
        anticipation: usize,
        source: Alphabet,
        target: Alphabet,
        table: HashMap<Vec<Symbol>, Symbol>,
        center_fallback: bool,
    ) -> Result<Self> {
        let width = memory + anticipation + 1;
        for (w, s) in &table {
            if w.len() != width {
                return domain(format!("table window of length {} for width {width}", w.len()));
            }
            source.check(w)?;
            target.check(&[*s])?;
        }
        let center: Vec<Option<Symbol>> = source.symbols().map(|s| target.symbol(source.token(s))).collect();
        Ok(BlockMap::new(memory, anticipation, source, target, "table", move |w| {
            table.get(w).copied().or_else(|| if center_fallback { center[w[memory].index()] } else { None })
        }))
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn width(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The rule on one window of exactly `width` symbols.
    pub fn eval(&self, window: &[Symbol]) -> Result<Symbol> {
        if window.len() != self.width() {
            return domain(format!("window of length {} for a map of width {}", window.len(), self.width()));
        }
        (self.rule)(window).ok_or_else(|| {
            Error::Domain(format!("rule {} undefined on window {}", self.name, self.source.render(window)))
        })
    }
}

/// Slides the rule along `w`; the result has length `|w| − m − a`.
pub fn apply_to_word(f: &BlockMap, w: &[Symbol]) -> Result<Word> {
    if w.len() < f.width() {
        return domain(format!("word of length {} shorter than map width {}", w.len(), f.width()));
    }
    f.source.check(w)?;
    w.windows(f.width()).map(|win| f.eval(win)).collect::<Result<Vec<_>>>().map(Word)
}

/// `g ∘ f`: memory and anticipation add.
pub fn compose(g: &BlockMap, f: &BlockMap) -> Result<BlockMap> {
    if f.target != g.source {
        return domain(format!("cannot compose: {} ≠ {}", f.target, g.source));
    }
    let (ff, gg) = (f.clone(), g.clone());
    let name = format!("{}∘{}", g.name, f.name);
    Ok(BlockMap::new(
        f.memory + g.memory,
        f.anticipation + g.anticipation,
        f.source.clone(),
        g.target.clone(),
        name,
        move |w| {
            let mid: Option<Vec<Symbol>> = w.windows(ff.width()).map(|x| (ff.rule)(x)).collect();
            (gg.rule)(&mid?)
        },
    ))
}

#[derive(Debug)]
struct Mapped {
    f: BlockMap,
    inner: SymbolicSequence,
}

impl SymbolSource for Mapped {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        let w = self.inner.window(i - self.f.memory as i64, i + self.f.anticipation as i64)?;
        self.f.eval(&w)
    }

    fn fill(&self, start: i64, out: &mut [Symbol]) -> Result<()> {
        if out.is_empty() {
            return Ok(());
        }
        let lo = start - self.f.memory as i64;
        let hi = start + out.len() as i64 - 1 + self.f.anticipation as i64;
        let w = self.inner.window(lo, hi)?;
        for (slot, win) in out.iter_mut().zip(w.windows(self.f.width())) {
            *slot = self.f.eval(win)?;
        }
        Ok(())
    }

    fn language_surrogate(&self, n_max: usize) -> Option<Result<SymbolicSequence>> {
        let inner = self.inner.language_surrogate(n_max + self.f.width() - 1)?;
        Some(inner.and_then(|s| apply_to_sequence(&self.f, &s)))
    }

    fn coverage_hint(&self, n: usize) -> Option<(i64, i64)> {
        let w = self.f.width() as i64;
        self.inner.coverage_hint(n + w as usize).map(|(lo, hi)| (lo - w, hi + w))
    }
}

/// `f(x)` as a lazily evaluated sequence.
pub fn apply_to_sequence(f: &BlockMap, seq: &SymbolicSequence) -> Result<SymbolicSequence> {
    if seq.alphabet() != f.source() {
        return domain(format!("alphabet mismatch: sequence {} vs map {}", seq.alphabet(), f.source()));
    }
    if seq.kind() == SequenceKind::RightInfinite && f.memory > 0 {
        return domain("a map with memory needs a bi-infinite input");
    }
    let prov = Provenance::new(
        "block-map",
        serde_json::json!({
            "map": f.name,
            "memory": f.memory,
            "anticipation": f.anticipation,
            "source": seq.provenance(),
        }),
    );
    let (lo, hi) = seq.domain();
    let mut out = SymbolicSequence::new(Mapped { f: f.clone(), inner: seq.clone() }, seq.kind(), f.target.clone(), prov);
    if (lo.is_some() && seq.kind() == SequenceKind::BiInfinite) || hi.is_some() {
        out = out.with_domain(lo.map(|l| l + f.memory as i64), hi.map(|h| h - f.anticipation as i64));
    }
    Ok(out)
}

/// `π = ψ ∘ φ` together with its parts.
#[derive(Debug, Clone)]
pub struct PiMap {
    pub phi: BlockMap,
    pub psi: BlockMap,
    pub pi: BlockMap,
    /// `a_1 … a_j` in the target alphabet.
    pub markers: Vec<Symbol>,
    /// The boundary marker `b`.
    pub boundary: Symbol,
    pub r: usize,
}

/// φ emits `a_p` on r-windows of `𝓛_r(M_p)` and the window's first symbol otherwise; ψ emits `b` on
/// 2-windows `a_p s` or `s a_p` with `s ≠ a_p` and the first symbol otherwise.
pub fn build_pi(minimal_languages: &[BTreeSet<Word>], r: usize, source: &Alphabet) -> Result<PiMap> {
    if r == 0 {
        return domain("r must be positive");
    }
    let mut owner: HashMap<Vec<Symbol>, usize> = HashMap::new();
    for (p, lang) in minimal_languages.iter().enumerate() {
        for w in lang {
            if w.len() != r {
                return domain(format!("word of length {} in a length-{r} language", w.len()));
            }
            source.check(w)?;
            if let Some(q) = owner.insert(w.0.clone(), p) {
                return domain(format!(
                    "languages {} and {} share {}; no separating length r = {r}",
                    q + 1,
                    p + 1,
                    source.render(w)
                ));
            }
        }
    }
    let mut tokens = Vec::new();
    let mut mid = source.clone();
    for p in 0..minimal_languages.len() {
        let stem = if p < 26 { ((b'A' + p as u8) as char).to_string() } else { format!("A{p}") };
        let t = mid.fresh_token(&stem);
        mid = mid.extended([t.clone()])?;
        tokens.push(t);
    }
    let markers: Vec<Symbol> = tokens.iter().map(|t| mid.symbol(t).unwrap()).collect();
    let b_token = mid.fresh_token("b");
    let target = mid.extended([b_token.clone()])?;
    let boundary = target.symbol(&b_token).unwrap();
    let mk = markers.clone();
    let phi = BlockMap::new(0, r - 1, source.clone(), mid.clone(), "phi", move |w| {
        Some(owner.get(w).map_or(w[0], |&p| mk[p]))
    });
    let is_marker: Vec<bool> = mid.symbols().map(|s| markers.contains(&s)).collect();
    let psi = BlockMap::new(0, 1, mid, target, "psi", move |w| {
        let (z0, z1) = (w[0], w[1]);
        let crosses = z0 != z1 && (is_marker[z0.index()] || is_marker[z1.index()]);
        Some(if crosses { boundary } else { z0 })
    });
    let pi = compose(&psi, &phi)?;
    Ok(PiMap { phi, psi, pi, markers, boundary, r })
}

/// r-block map to `{0,1}`: 0 on windows in `𝓛_r(M)`, 1 otherwise. `ambient` is `𝓛_r(X)` (all
/// `|A|^r` words when `None`).
pub fn build_collapse(
    minimal_language: &BTreeSet<Word>,
    r: usize,
    source: &Alphabet,
    ambient: Option<&BTreeSet<Word>>,
) -> Result<BlockMap> {
    if r == 0 || minimal_language.is_empty() {
        return domain("collapse needs r ≥ 1 and a nonempty language");
    }
    for w in minimal_language {
        if w.len() != r {
            return domain(format!("word of length {} in a length-{r} language", w.len()));
        }
        source.check(w)?;
    }
    let proper = match ambient {
        Some(a) => a.iter().any(|w| !minimal_language.contains(w)),
        None => (minimal_language.len() as u128) < (source.len() as u128).saturating_pow(r as u32),
    };
    if !proper {
        return domain("the minimal language equals the whole r-language; the image would be a fixed point");
    }
    let lang: std::collections::HashSet<Vec<Symbol>> = minimal_language.iter().map(|w| w.0.clone()).collect();
    Ok(BlockMap::new(0, r - 1, source.clone(), Alphabet::digits(2), "collapse", move |w| {
        Some(Symbol(!lang.contains(w) as u8))
    }))
}

/// Parses a TSV rule: `window<TAB>symbol` lines, optional headers `#memory: m`, `#target: tokens`,
/// `#otherwise: center`.
pub fn parse_rule_tsv(text: &str, source: &Alphabet) -> Result<BlockMap> {
    let mut memory = 0usize;
    let mut target_tokens: Option<Vec<String>> = None;
    let mut fallback = false;
    let mut rows: Vec<(usize, String, String)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            let (key, val) = h.split_once(':').unwrap_or((h, ""));
            match key.trim() {
                "memory" => {
                    memory = val.trim().parse().map_err(|_| Error::Parse { line: k + 1, msg: "bad memory".into() })?
                }
                "target" => target_tokens = Some(val.split_whitespace().map(String::from).collect()),
                "otherwise" => fallback = val.trim() == "center",
                _ => {}
            }
            continue;
        }
        let (w, s) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse { line: k + 1, msg: "expected window<TAB>symbol".into() })?;
        rows.push((k + 1, w.to_string(), s.trim().to_string()));
    }
    if rows.is_empty() && !fallback {
        return Err(Error::Parse { line: 0, msg: "empty rule".into() });
    }
    let target = match target_tokens {
        Some(t) => Alphabet::new(t)?,
        None => {
            let set: BTreeSet<String> = rows.iter().map(|r| r.2.clone()).collect();
            Alphabet::new(set)?
        }
    };
    let mut table = HashMap::new();
    let mut width = None;
    for (line, w, s) in rows {
        let word = source.parse(&w).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if *width.get_or_insert(word.len()) != word.len() {
            return Err(Error::Parse { line, msg: "windows of different lengths".into() });
        }
        let sym = target
            .symbol(&s)
            .ok_or_else(|| Error::Parse { line, msg: format!("symbol {s:?} not in target") })?;
        table.insert(word.0, sym);
    }
    let width = width.unwrap_or(memory + 1);
    if width <= memory {
        return Err(Error::Parse { line: 0, msg: "memory must be smaller than the window length".into() });
    }
    BlockMap::from_table(memory, width - 1 - memory, source.clone(), target, table, fallback)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::periodic_from_str;

    #[test]
    fn identity_and_lengths() {
        let a = Alphabet::digits(2);
        let id = BlockMap::identity(a.clone());
        let w = a.parse("01101").unwrap();
        assert_eq!(apply_to_word(&id, &w).unwrap(), w);
        let xor = BlockMap::new(0, 1, a.clone(), a.clone(), "xor", |w| Some(Symbol(w[0].0 ^ w[1].0)));
        assert_eq!(apply_to_word(&xor, &a.parse("01").unwrap()).unwrap().len(), 1);
        assert!(apply_to_word(&xor, &a.parse("0").unwrap()).is_err());
        assert_eq!(compose(&id, &xor).unwrap().width(), 2);
    }

    #[test]
    fn pi_on_two_constants() {
        let a = Alphabet::digits(3);
        let langs: Vec<BTreeSet<Word>> = vec![
            [a.parse("00").unwrap()].into_iter().collect(),
            [a.parse("11").unwrap()].into_iter().collect(),
        ];
        let pi = build_pi(&langs, 2, &a).unwrap();
        assert_eq!(pi.pi.width(), 3);
        let t = pi.pi.target().clone();
        let out = apply_to_word(&pi.pi, &a.parse("0001112").unwrap()).unwrap();
        assert_eq!(t.render(&out), "AbbBb");
        let bad = vec![langs[0].clone(), langs[0].clone()];
        assert!(build_pi(&bad, 2, &a).is_err());
    }

    #[test]
    fn collapse_rules() {
        let a = Alphabet::digits(2);
        let lang: BTreeSet<Word> = ["00", "01", "10"].iter().map(|w| a.parse(w).unwrap()).collect();
        let c = build_collapse(&lang, 2, &a, None).unwrap();
        assert_eq!(a.render(&apply_to_word(&c, &a.parse("0110").unwrap()).unwrap()), "010");
        let all: BTreeSet<Word> = ["00", "01", "10", "11"].iter().map(|w| a.parse(w).unwrap()).collect();
        assert!(build_collapse(&all, 2, &a, None).is_err());
        assert!(build_collapse(&lang, 2, &a, Some(&lang)).is_err());
    }

    #[test]
    fn tsv_rules() {
        let a = Alphabet::digits(2);
        let f = parse_rule_tsv("#memory: 1\n#target: 0 1\n00\t0\n01\t1\n10\t1\n11\t0\n", &a).unwrap();
        assert_eq!((f.memory(), f.anticipation()), (1, 0));
        let x = periodic_from_str("0110").unwrap();
        let y = apply_to_sequence(&f, &x).unwrap();
        for i in -8..8 {
            assert_eq!(y.symbol_at(i).0, x.symbol_at(i - 1).0 ^ x.symbol_at(i).0);
        }
        let partial = parse_rule_tsv("00\t1\n", &a).unwrap();
        assert!(apply_to_word(&partial, &a.parse("01").unwrap()).is_err());
    }
}
