use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{domain, Result};
use crate::sequence::{Provenance, SequenceKind, SymbolSource, SymbolicSequence};

use super::sturmian::{Real, Sturmian, SturmianParams};
use super::MinimalSystem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonrecurrentCase {
    /// `0^∞ . s`.
    I1 { beta: Real },
    /// `r . s` with `r` from rotation `beta1` ending in 1 and `s` from `beta2` starting with 1.
    I2 { beta1: Real, beta2: Real },
}

impl NonrecurrentCase {
    pub fn i1_default(n: i64) -> Self {
        NonrecurrentCase::I1 { beta: Real::golden_in_gap(n) }
    }

    pub fn i2_default(n: i64) -> Self {
        NonrecurrentCase::I2 { beta1: Real::golden_in_gap(n), beta2: Real::silver_in_gap(n) }
    }
}

fn check_gap(beta: &Real, n: u64) -> Result<()> {
    let b = beta.fixed256()?;
    let one = BigUint::one() << 256u32;
    if &b * (n + 1) <= one || &b * n >= one {
        return domain(format!("beta = {beta} is not in (1/{}, 1/{n})", n + 1));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Glued {
    left: Option<Sturmian>,
    right: Sturmian,
}

impl SymbolSource for Glued {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        if i >= 0 {
            return Ok(Symbol(self.right.bit(i)? as u8));
        }
        match &self.left {
            None => Ok(Symbol(0)),
            // x0 = β/2 codes 1 at index 0, so reading index i + 1 puts that 1 at −1
            Some(s) => Ok(Symbol(s.bit(i + 1)? as u8)),
        }
    }
}

/// The non-recurrent witnesses: case i1 `0^∞.s`, case i2 `r.s`, with every rotation in `(1/(N+1), 1/N)`.
pub fn nonrecurrent_example(case: &NonrecurrentCase, n: u64) -> Result<SymbolicSequence> {
    if n <= 3 {
        return domain("N must exceed 3");
    }
    let (glued, minimal, params) = match case {
        NonrecurrentCase::I1 { beta } => {
            check_gap(beta, n)?;
            let p = SturmianParams::new(beta.clone());
            let s = Sturmian::new(p.clone())?;
            (
                Glued { left: None, right: s },
                vec![
                    MinimalSystem::Periodic { cycle: vec![Symbol(0)].into() },
                    MinimalSystem::Sturmian { params: p, symbols: [Symbol(0), Symbol(1)] },
                ],
                serde_json::json!({ "case": "i1", "N": n, "beta": beta }),
            )
        }
        NonrecurrentCase::I2 { beta1, beta2 } => {
            check_gap(beta1, n)?;
            check_gap(beta2, n)?;
            if beta1.fixed256()? == beta2.fixed256()? {
                return domain("case i2 needs two distinct rotations");
            }
            let p1 = SturmianParams::new(beta1.clone());
            let p2 = SturmianParams::new(beta2.clone());
            (
                Glued { left: Some(Sturmian::new(p1.clone())?), right: Sturmian::new(p2.clone())? },
                vec![
                    MinimalSystem::Sturmian { params: p1, symbols: [Symbol(0), Symbol(1)] },
                    MinimalSystem::Sturmian { params: p2, symbols: [Symbol(0), Symbol(1)] },
                ],
                serde_json::json!({ "case": "i2", "N": n, "beta1": beta1, "beta2": beta2 }),
            )
        }
    };
    Ok(SymbolicSequence::new(
        glued,
        SequenceKind::BiInfinite,
        Alphabet::digits(2),
        Provenance::new("nonrecurrent", params),
    )
    .with_minimal_systems(minimal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaps_between_ones() {
        for n in [5u64, 10, 20] {
            let x = nonrecurrent_example(&NonrecurrentCase::i1_default(n as i64), n).unwrap();
            let w = x.window(0, 5000).unwrap();
            let ones: Vec<usize> = w.iter().enumerate().filter(|(_, s)| s.0 == 1).map(|(k, _)| k).collect();
            for p in ones.windows(2) {
                let gap = (p[1] - p[0] - 1) as u64;
                assert!(gap == n - 1 || gap == n, "gap {gap} for N = {n}");
            }
            assert_eq!(x.render(-4, -1).unwrap(), "0000");
        }
    }

    #[test]
    fn junction_of_case_i2() {
        let x = nonrecurrent_example(&NonrecurrentCase::i2_default(10), 10).unwrap();
        assert_eq!(x.render(-1, 0).unwrap(), "11");
    }

    #[test]
    fn parameter_checks() {
        assert!(nonrecurrent_example(&NonrecurrentCase::I1 { beta: Real::golden() }, 5).is_err());
        assert!(nonrecurrent_example(&NonrecurrentCase::i1_default(5), 3).is_err());
        let same = NonrecurrentCase::I2 { beta1: Real::golden_in_gap(6), beta2: Real::golden_in_gap(6) };
        assert!(nonrecurrent_example(&same, 6).is_err());
    }
}
