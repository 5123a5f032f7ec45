//! Sequence files: `#alphabet: <tokens>` header, optional `#kind: bi-infinite` and `#origin: <offset>`, then
//! either one line of single-character symbols or one token per line. `data[origin]` is index 0.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::sequence::{finite_sequence, Provenance, SequenceKind, SymbolicSequence};

/// Parses the text of a sequence file; `label` goes into the provenance.
pub fn parse_sequence(text: &str, label: &str) -> Result<SymbolicSequence> {
    let mut alphabet: Option<Alphabet> = None;
    let mut kind = SequenceKind::RightInfinite;
    let mut origin = 0i64;
    let mut data: Vec<Symbol> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            let (key, val) = h.split_once(':').unwrap_or((h, ""));
            let val = val.trim();
            match key.trim() {
                "alphabet" => alphabet = Some(Alphabet::new(val.split_whitespace())?),
                "kind" => {
                    kind = match val {
                        "bi-infinite" => SequenceKind::BiInfinite,
                        "right-infinite" => SequenceKind::RightInfinite,
                        _ => return Err(Error::Parse { line: line_no, msg: format!("unknown kind {val:?}") }),
                    }
                }
                "origin" => {
                    origin = val.parse().map_err(|_| Error::Parse { line: line_no, msg: format!("bad origin {val:?}") })?
                }
                _ => {}
            }
            continue;
        }
        let a = alphabet
            .as_ref()
            .ok_or_else(|| Error::Parse { line: line_no, msg: "data before the #alphabet header".into() })?;
        let w = a.parse(line).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        data.extend(w.0);
    }
    let alphabet = alphabet.ok_or_else(|| Error::Parse { line: 0, msg: "missing #alphabet header".into() })?;
    if origin < 0 || origin as usize >= data.len().max(1) {
        return Err(Error::Parse { line: 0, msg: format!("origin {origin} outside the data") });
    }
    let prov = Provenance::new("file", serde_json::json!({ "source": label, "length": data.len(), "origin": origin }));
    finite_sequence(data, origin, kind, alphabet, prov)
}

pub fn read_sequence(path: &Path) -> Result<SymbolicSequence> {
    let text = fs::read_to_string(path)?;
    parse_sequence(&text, &path.display().to_string())
}

/// File text for `x_lo … x_hi`.
pub fn format_sequence(seq: &SymbolicSequence, lo: i64, hi: i64) -> Result<String> {
    let a = seq.alphabet();
    let data = seq.window(lo, hi)?;
    let mut s = format!("#alphabet: {}\n", a.tokens().join(" "));
    match seq.kind() {
        SequenceKind::BiInfinite => {
            if lo > 0 || hi < 0 {
                return Err(Error::Domain("a bi-infinite window must contain index 0".into()));
            }
            s.push_str(&format!("#kind: bi-infinite\n#origin: {}\n", -lo))
        }
        SequenceKind::RightInfinite => {
            if lo != 0 {
                return Err(Error::Domain("a right-infinite sequence is written from index 0".into()));
            }
        }
    }
    if a.is_compact() {
        s.push_str(&a.render(&data));
        s.push('\n');
    } else {
        for &x in data.iter() {
            s.push_str(a.token(x));
            s.push('\n');
        }
    }
    Ok(s)
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_sequence(path: &Path, seq: &SymbolicSequence, lo: i64, hi: i64) -> Result<()> {
    write_atomic(path, format_sequence(seq, lo, hi)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_schedule, recurrent_sharp_family, staircase, GrowthFunction};

    #[test]
    fn round_trip_compact_and_tokens() {
        let s = staircase();
        let text = format_sequence(&s, -5, 20).unwrap();
        assert!(text.starts_with("#alphabet: 0 1\n#kind: bi-infinite\n#origin: 5\n"));
        let back = parse_sequence(&text, "mem").unwrap();
        for i in -5..=20 {
            assert_eq!(back.symbol_at(i), s.symbol_at(i));
        }
        let sched = make_schedule(2, 0, &GrowthFunction::log2(), 1).unwrap();
        let r = recurrent_sharp_family(&sched).unwrap();
        let back = parse_sequence(&format_sequence(&r, -3, 12).unwrap(), "mem").unwrap();
        assert_eq!(back.window(-3, 12).unwrap(), r.window(-3, 12).unwrap());
    }

    #[test]
    fn token_per_line_and_errors() {
        let t = "#alphabet: a bb\na\nbb\nbb\n";
        let x = parse_sequence(t, "mem").unwrap();
        assert_eq!(x.alphabet().render(&x.window(0, 2).unwrap()), "a bb bb");
        assert!(parse_sequence("0101\n", "mem").is_err());
        assert!(matches!(parse_sequence("#alphabet: 0 1\n0120\n", "mem"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_sequence("#alphabet: 0 1\n#origin: 9\n01\n", "mem").is_err());
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/x.seq");
        write_sequence(&p, &staircase(), 0, 9).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "#alphabet: 0 1\n#kind: bi-infinite\n#origin: 0\n0110001111\n");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
