use serde::Serialize;

use crate::error::{domain, Result};
use crate::sequence::{SequenceKind, SymbolicSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

/// Certified (within the horizon) eventual period: `x_i = x_{i±p}` for every tested `i` beyond `onset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub period: usize,
    pub onset: usize,
}

/// Smallest `(p, N)` with `p ≤ horizon/8`, `N ≤ horizon/2` such that `x_i = x_{i+p}` for all `N < i ≤ horizon − p`
/// (mirrored for `Left`). `None` only means nothing was found inside the horizon.
pub fn detect_eventual_periodicity(
    seq: &SymbolicSequence,
    direction: Direction,
    horizon: usize,
) -> Result<Option<Periodicity>> {
    if horizon < 8 {
        return domain("horizon must be at least 8");
    }
    if direction == Direction::Left && seq.kind() != SequenceKind::BiInfinite {
        return domain("left periodicity needs a bi-infinite sequence");
    }
    let h = horizon as i64;
    // xs[k] is x_k (right) or x_{-k} (left), k = 0..=horizon
    let xs = match direction {
        Direction::Right => seq.window(0, h)?.0,
        Direction::Left => {
            let mut w = seq.window(-h, 0)?.0;
            w.reverse();
            w
        }
    };
    // the periodic stretch past the onset spans at least four periods
    for p in 1..=horizon / 8 {
        let last_bad = (0..=horizon - p).rev().find(|&k| xs[k] != xs[k + p]);
        let onset = last_bad.unwrap_or(0);
        if onset <= horizon / 2 {
            return Ok(Some(Periodicity { period: p, onset }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::periodic_from_str;

    #[test]
    fn finds_smallest_period() {
        let x = periodic_from_str("0011").unwrap();
        assert_eq!(
            detect_eventual_periodicity(&x, Direction::Right, 64).unwrap(),
            Some(Periodicity { period: 4, onset: 0 })
        );
        assert_eq!(
            detect_eventual_periodicity(&x, Direction::Left, 64).unwrap(),
            Some(Periodicity { period: 4, onset: 0 })
        );
    }
}
