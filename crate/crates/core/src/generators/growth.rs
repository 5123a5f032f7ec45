use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

/// Nondecreasing unbounded `g: ℕ → ℕ` with a tag used in reports.
#[derive(Clone)]
pub struct GrowthFunction {
    tag: String,
    rule: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl fmt::Debug for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrowthFunction({})", self.tag)
    }
}

impl PartialEq for GrowthFunction {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}

fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

fn ceil_sqrt(n: u64) -> u64 {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

impl GrowthFunction {
    pub fn new(tag: impl Into<String>, rule: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        GrowthFunction { tag: tag.into(), rule: Arc::new(rule) }
    }

    /// `⌈log₂ n⌉` (so `g(1) = 0`).
    pub fn log2() -> Self {
        GrowthFunction::new("log2", ceil_log2)
    }

    /// `⌈√n⌉`.
    pub fn sqrt() -> Self {
        GrowthFunction::new("sqrt", ceil_sqrt)
    }

    /// `c·n`.
    pub fn linear(c: u64) -> Self {
        if c == 1 {
            GrowthFunction::new("linear", |n| n)
        } else {
            GrowthFunction::new(format!("linear:{c}"), move |n| n.saturating_mul(c))
        }
    }

    /// Constant `k`; bounded, so only usable as an additive term in bound reports.
    pub fn constant(k: u64) -> Self {
        if k == 0 {
            GrowthFunction::new("zero", |_| 0)
        } else {
            GrowthFunction::new(format!("const:{k}"), move |_| k)
        }
    }

    pub fn zero() -> Self {
        GrowthFunction::constant(0)
    }

    /// `log2`, `sqrt`, `linear`, `linear:C`, `const:K`, `zero`/`none`.
    pub fn parse(tag: &str) -> Result<Self> {
        let t = tag.trim();
        match t {
            "log2" | "log" => return Ok(GrowthFunction::log2()),
            "sqrt" => return Ok(GrowthFunction::sqrt()),
            "linear" | "n" | "identity" => return Ok(GrowthFunction::linear(1)),
            "zero" | "none" | "0" => return Ok(GrowthFunction::zero()),
            _ => {}
        }
        if let Some(c) = t.strip_prefix("linear:") {
            if let Ok(c) = c.parse::<u64>() {
                if c >= 1 {
                    return Ok(GrowthFunction::linear(c));
                }
            }
        }
        if let Some(k) = t.strip_prefix("const:") {
            if let Ok(k) = k.parse::<u64>() {
                return Ok(GrowthFunction::constant(k));
            }
        }
        domain(format!("unknown growth function {t:?}"))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, n: u64) -> u64 {
        (self.rule)(n)
    }

    /// Smallest `n ≥ from` with `g(n) ≥ target`, searching up to `cap`.
    pub fn first_reaching(&self, target: u128, from: u64, cap: u64) -> Option<u64> {
        if from > cap {
            return None;
        }
        if self.eval(from) as u128 >= target {
            return Some(from);
        }
        let mut step = 1u64;
        let mut lo = from;
        loop {
            let hi = lo.saturating_add(step).min(cap);
            if self.eval(hi) as u128 >= target {
                let (mut a, mut b) = (lo, hi);
                while b - a > 1 {
                    let mid = a + (b - a) / 2;
                    if self.eval(mid) as u128 >= target {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                return Some(b);
            }
            if hi == cap {
                return None;
            }
            lo = hi;
            step = step.saturating_mul(2);
        }
    }

    /// Checks monotonicity on a sample of `[1, horizon]` and growth beyond `g(1)`.
    pub fn validate(&self, horizon: u64) -> Result<()> {
        let mut prev = self.eval(1);
        let mut n = 1u64;
        while n < horizon {
            let next = if n < 4096 { n + 1 } else { n + n / 64 };
            let v = self.eval(next.min(horizon));
            if v < prev {
                return domain(format!("{} decreases at n = {}", self.tag, next));
            }
            prev = v;
            n = next;
        }
        if self.eval(horizon) <= self.eval(1) {
            return domain(format!("{} does not grow on [1, {horizon}]", self.tag));
        }
        Ok(())
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let l = GrowthFunction::log2();
        assert_eq!((1..=9).map(|n| l.eval(n)).collect::<Vec<_>>(), vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
        let s = GrowthFunction::sqrt();
        assert_eq!((1..=10).map(|n| s.eval(n)).collect::<Vec<_>>(), vec![1, 2, 2, 2, 3, 3, 3, 3, 3, 4]);
        assert_eq!(s.first_reaching(145, 1, 1 << 62), Some(144 * 144 + 1));
        assert_eq!(l.first_reaching(70, 1, 1 << 62), None);
    }

    #[test]
    fn validation() {
        assert!(GrowthFunction::log2().validate(1 << 20).is_ok());
        assert!(GrowthFunction::constant(3).validate(1 << 20).is_err());
        assert!(GrowthFunction::new("bad", |n| 100 - n.min(99)).validate(1000).is_err());
    }
}
