//! Codings of irrational rotations: `s_n = 1` iff `x0 + nβ mod 1 ∈ [0, β)`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{domain, Error, Result};
use crate::sequence::{Provenance, SequenceKind, SymbolSource, SymbolicSequence};

use super::MinimalSystem;

const BITS: u32 = 256;
/// Fast-path guard: 2^-64 of the circle, in 128-bit units.
const GUARD: u128 = 1 << 64;

/// An exactly specified real number in (0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Real {
    /// `(a + b·√c) / d`.
    Quadratic { a: i64, b: i64, c: u64, d: i64 },
    /// Decimal expansion such as `"0.4142135623730950488"`.
    Decimal(String),
}

impl Real {
    /// `(√5 − 1)/2`.
    pub fn golden() -> Real {
        Real::Quadratic { a: -1, b: 1, c: 5, d: 2 }
    }

    /// `√2 − 1`.
    pub fn silver() -> Real {
        Real::Quadratic { a: -1, b: 1, c: 2, d: 1 }
    }

    /// `1 / (N + (√5 − 1)/2)`, which lies in `(1/(N+1), 1/N)`.
    pub fn golden_in_gap(n: i64) -> Real {
        // 2/(2N − 1 + √5) = (2(2N−1) − 2√5) / ((2N−1)² − 5)
        let m = 2 * n - 1;
        Real::Quadratic { a: 2 * m, b: -2, c: 5, d: m * m - 5 }
    }

    /// `1 / (N − 1 + √2)`, which lies in `(1/(N+1), 1/N)`.
    pub fn silver_in_gap(n: i64) -> Real {
        let m = n - 1;
        Real::Quadratic { a: m, b: -1, c: 2, d: m * m - 2 }
    }

    /// Parses `golden`, `silver`, `quad:a,b,c,d` or a decimal.
    pub fn parse(text: &str) -> Result<Real> {
        let t = text.trim();
        match t {
            "golden" => return Ok(Real::golden()),
            "silver" | "sqrt2" => return Ok(Real::silver()),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("quad:") {
            let v: Vec<i64> = rest
                .split(',')
                .map(|p| p.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Domain(format!("bad quadratic {t:?}: {e}")))?;
            if v.len() != 4 || v[2] < 0 || v[3] == 0 {
                return domain(format!("quadratic needs a,b,c≥0,d≠0: {t:?}"));
            }
            return Ok(Real::Quadratic { a: v[0], b: v[1], c: v[2] as u64, d: v[3] });
        }
        if t.starts_with("0.") && t[2..].chars().all(|c| c.is_ascii_digit()) && t.len() > 2 {
            return Ok(Real::Decimal(t.to_string()));
        }
        domain(format!("cannot parse real {t:?}"))
    }

    /// `⌊x·2^256⌋`, requiring `0 < x < 1`.
    pub fn fixed256(&self) -> Result<BigUint> {
        let scale = BigInt::one() << BITS;
        let v: BigInt = match self {
            Real::Quadratic { a, b, c, d } => {
                let root = (BigUint::from(*c) << (2 * BITS)).sqrt();
                let num = BigInt::from(*a) * &scale + BigInt::from(*b) * BigInt::from(root);
                num.div_floor(&BigInt::from(*d))
            }
            Real::Decimal(s) => {
                let digits = &s[2..];
                let num: BigInt = digits.parse().map_err(|_| Error::Domain(format!("bad decimal {s:?}")))?;
                let den = BigInt::from(10u32).pow(digits.len() as u32);
                (num * &scale).div_floor(&den)
            }
        };
        if v.sign() != Sign::Plus || v >= scale {
            return domain(format!("{self} is not in (0, 1)"));
        }
        Ok(v.to_biguint().unwrap())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Quadratic { a, b, c, d } => (*a as f64 + *b as f64 * (*c as f64).sqrt()) / *d as f64,
            Real::Decimal(s) => s.parse().unwrap_or(f64::NAN),
        }
    }
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Real::Quadratic { a, b, c, d } => write!(f, "({a} + {b}√{c})/{d}"),
            Real::Decimal(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmianParams {
    pub beta: Real,
    /// Starting point; `None` means `β/2`.
    pub x0: Option<Real>,
    /// Tokens replacing `0` and `1`.
    pub relabel: Option<(String, String)>,
}

impl SturmianParams {
    pub fn new(beta: Real) -> Self {
        SturmianParams { beta, x0: None, relabel: None }
    }

    pub fn golden() -> Self {
        SturmianParams::new(Real::golden())
    }

    pub fn relabeled(mut self, zero: &str, one: &str) -> Self {
        self.relabel = Some((zero.to_string(), one.to_string()));
        self
    }

    pub fn with_x0(mut self, x0: Real) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn alphabet(&self) -> Alphabet {
        match &self.relabel {
            Some((z, o)) => Alphabet::new([z.as_str(), o.as_str()]).expect("distinct relabel tokens"),
            None => Alphabet::digits(2),
        }
    }
}

/// Rotation orbit `x_t = x0 + tβ` with a 128-bit fast path and 256-bit fallback near cut points.
#[derive(Debug, Clone)]
pub struct Rotation {
    pub beta: u128,
    pub x0: u128,
    beta_hi: BigUint,
    x0_hi: BigUint,
}

impl Rotation {
    pub fn new(params: &SturmianParams) -> Result<Rotation> {
        let beta_hi = params.beta.fixed256()?;
        let x0_hi = match &params.x0 {
            Some(x) => x.fixed256()?,
            None => &beta_hi >> 1u32,
        };
        check_irrational(&beta_hi)?;
        let r = Rotation {
            beta: (&beta_hi >> 128u32).to_u128().unwrap(),
            x0: (&x0_hi >> 128u32).to_u128().unwrap(),
            beta_hi,
            x0_hi,
        };
        if r.near_cut(r.x0) {
            return Err(Error::Precision(format!(
                "x0 = {} lies within 2^-64 of a cut point (0 or beta)",
                params.x0.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "beta/2".into())
            )));
        }
        Ok(r)
    }

    pub fn point(&self, t: i64) -> u128 {
        self.x0.wrapping_add((t as i128 as u128).wrapping_mul(self.beta))
    }

    fn near_cut(&self, x: u128) -> bool {
        x < GUARD || x > u128::MAX - GUARD || x.abs_diff(self.beta) < GUARD
    }

    /// True iff `x_t ∈ [0, β)`.
    pub fn in_upper(&self, t: i64) -> Result<bool> {
        let x = self.point(t);
        if !self.near_cut(x) {
            return Ok(x < self.beta);
        }
        let m = BigInt::one() << BITS;
        let xt = (BigInt::from(self.x0_hi.clone()) + BigInt::from(t) * BigInt::from(self.beta_hi.clone())).mod_floor(&m);
        let xt = xt.to_biguint().unwrap();
        let guard = BigUint::one() << (BITS - 192);
        let m_u = BigUint::one() << BITS;
        let near0 = xt < guard || &m_u - &xt <= guard;
        let diff = if xt > self.beta_hi { &xt - &self.beta_hi } else { &self.beta_hi - &xt };
        if near0 || diff < guard {
            return Err(Error::Precision(format!(
                "orbit point {t} lies within 2^-192 of a cut point; supply more precision"
            )));
        }
        Ok(xt < self.beta_hi)
    }
}

/// Rejects β with `‖qβ‖ < 2^-64` for some `q ≤ 2^32` (checked on continued-fraction convergents).
fn check_irrational(beta_hi: &BigUint) -> Result<()> {
    let m = BigUint::one() << BITS;
    let guard = BigUint::one() << (BITS - 64);
    let (mut num, mut den) = (beta_hi.clone(), m.clone());
    let (mut q_prev, mut q) = (BigUint::zero(), BigUint::one());
    let limit = BigUint::one() << 32u32;
    // β = num/den; convergent denominators q_k
    loop {
        if num.is_zero() {
            return domain("beta is rational");
        }
        let a = &den / &num;
        let r = &den % &num;
        den = num;
        num = r;
        let q_next = &a * &q + &q_prev;
        q_prev = q;
        q = q_next;
        if q > limit {
            return Ok(());
        }
        let frac = (&q * beta_hi) % &m;
        let dist = std::cmp::min(frac.clone(), &m - &frac);
        if dist < guard {
            return domain(format!("beta is within 2^-64 of a rational with denominator {q}"));
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sturmian {
    pub params: SturmianParams,
    pub rotation: Rotation,
}

impl Sturmian {
    pub fn new(params: SturmianParams) -> Result<Sturmian> {
        let rotation = Rotation::new(&params)?;
        Ok(Sturmian { params, rotation })
    }

    pub fn bit(&self, t: i64) -> Result<bool> {
        self.rotation.in_upper(t)
    }

    /// The language of length `r`, enumerated from the rotation's cut points (independent of x0).
    pub fn language(&self, r: usize) -> BTreeSet<Word> {
        language_of_rotation(self.rotation.beta, r)
    }
}

/// All `r+1` words of length `r` coding the rotation by `beta`.
pub fn language_of_rotation(beta: u128, r: usize) -> BTreeSet<Word> {
    let mut cuts: Vec<u128> = (-1..r as i64)
        .map(|i| (i as i128 as u128).wrapping_mul(beta).wrapping_neg())
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut out = BTreeSet::new();
    for k in 0..cuts.len() {
        let a = cuts[k];
        let b = cuts[(k + 1) % cuts.len()];
        let gap = b.wrapping_sub(a);
        let mid = a.wrapping_add(gap / 2);
        let w: Vec<Symbol> = (0..r)
            .map(|i| Symbol((mid.wrapping_add(beta.wrapping_mul(i as u128)) < beta) as u8))
            .collect();
        out.insert(Word(w));
    }
    out
}

impl SymbolSource for Sturmian {
    fn symbol_at(&self, i: i64) -> Result<Symbol> {
        Ok(Symbol(self.bit(i)? as u8))
    }
}

/// The bi-infinite Sturmian coding of `params`.
pub fn sturmian(params: SturmianParams) -> Result<SymbolicSequence> {
    let s = Sturmian::new(params.clone())?;
    let alphabet = params.alphabet();
    let prov = Provenance::new(
        "sturmian",
        serde_json::json!({
            "beta": params.beta,
            "beta_approx": params.beta.to_f64(),
            "x0": params.x0.as_ref().map(|x| serde_json::to_value(x).unwrap()).unwrap_or(serde_json::json!("beta/2")),
            "relabel": params.relabel,
        }),
    );
    let minimal = vec![MinimalSystem::Sturmian { params: params.clone(), symbols: [Symbol(0), Symbol(1)] }];
    Ok(SymbolicSequence::new(s, SequenceKind::BiInfinite, alphabet, prov).with_minimal_systems(minimal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_of_golden() {
        let b = Real::golden().fixed256().unwrap();
        assert_eq!((b >> 128u32).to_u128().unwrap(), 0x9E3779B97F4A7C15F39CC0605CEDC834);
    }

    #[test]
    fn gap_parameters_lie_in_the_gap() {
        for n in 4..30 {
            for r in [Real::golden_in_gap(n), Real::silver_in_gap(n)] {
                let v = r.to_f64();
                assert!(v > 1.0 / (n as f64 + 1.0) && v < 1.0 / n as f64, "{r} for N={n}");
            }
        }
    }

    #[test]
    fn rationals_are_rejected() {
        assert!(Sturmian::new(SturmianParams::new(Real::Decimal("0.5".into()))).is_err());
        assert!(Sturmian::new(SturmianParams::new(Real::Decimal("0.375".into()))).is_err());
        assert!(Sturmian::new(SturmianParams::new(Real::Quadratic { a: 0, b: 1, c: 4, d: 3 })).is_err());
        assert!(Sturmian::new(SturmianParams::golden()).is_ok());
    }

    #[test]
    fn agrees_with_float_rotation_on_small_indices() {
        let s = Sturmian::new(SturmianParams::golden()).unwrap();
        let beta = (5f64.sqrt() - 1.0) / 2.0;
        let x0 = beta / 2.0;
        for t in -300i64..300 {
            let x = (x0 + t as f64 * beta).rem_euclid(1.0);
            assert!(x.min(1.0 - x) > 1e-9 && (x - beta).abs() > 1e-9);
            assert_eq!(s.bit(t).unwrap(), x < beta, "t = {t}");
        }
    }

    #[test]
    fn rotation_language_has_r_plus_one_words() {
        let s = Sturmian::new(SturmianParams::golden()).unwrap();
        for r in 1..40 {
            let lang = s.language(r);
            assert_eq!(lang.len(), r + 1);
            for t in 0..200 {
                let w: Vec<Symbol> = (t..t + r as i64).map(|i| Symbol(s.bit(i).unwrap() as u8)).collect();
                assert!(lang.contains(&Word(w)));
            }
        }
    }
}
