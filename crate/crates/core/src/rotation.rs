//! Circle rotation in 128-bit fixed point (the unit circle is `Z / 2^128`), with exact
//! counting of orbit visits to arcs via floor sums.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

fn modulus() -> BigUint {
    BigUint::one() << 128u32
}

/// Σ_{i=0}^{n-1} ⌊(a·i + b) / m⌋.
pub fn floor_sum(n: &BigUint, m: &BigUint, a: &BigUint, b: &BigUint) -> BigUint {
    let (mut n, mut m, mut a, mut b) = (n.clone(), m.clone(), a.clone(), b.clone());
    let mut ans = BigUint::zero();
    loop {
        if n.is_zero() {
            return ans;
        }
        if a >= m {
            let q = &a / &m;
            let two = BigUint::from(2u32);
            ans += (&n * (&n - 1u32) / two) * q;
            a %= &m;
        }
        if b >= m {
            ans += &n * (&b / &m);
            b %= &m;
        }
        let y_max = &a * &n + &b;
        if y_max < m {
            return ans;
        }
        n = &y_max / &m;
        b = &y_max % &m;
        std::mem::swap(&mut m, &mut a);
    }
}

/// Number of `y ∈ [0, n)` with `(a·y + b) mod 2^128 < bound`, for `bound ≤ 2^128`.
pub fn count_below(n: u64, a: u128, b: u128, bound: &BigUint) -> u64 {
    let m = modulus();
    let bound = if *bound > m { m.clone() } else { bound.clone() };
    let n_big = BigUint::from(n);
    let a_big = BigUint::from(a);
    let b_big = BigUint::from(b);
    let hi = floor_sum(&n_big, &m, &a_big, &b_big);
    let shifted = &b_big + &m - &bound;
    let lo = floor_sum(&n_big, &m, &a_big, &shifted);
    (hi + n_big - lo).to_u64().expect("count fits")
}

/// Least `y` in `[start, limit)` with `(a·y + b) mod 2^128 < bound`.
pub fn first_hit(a: u128, b: u128, bound: &BigUint, start: u64, limit: u64) -> Option<u64> {
    if start >= limit || bound.is_zero() {
        return None;
    }
    let b0 = b.wrapping_add(a.wrapping_mul(start as u128));
    let room = limit - start;
    let mut len = 1u64;
    loop {
        if count_below(len, a, b0, bound) > 0 {
            break;
        }
        if len >= room {
            return None;
        }
        len = len.saturating_mul(2).min(room);
    }
    let (mut lo, mut hi) = (len / 2, len);
    // invariant: count(lo) == 0, count(hi) > 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if count_below(mid, a, b0, bound) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(start + hi - 1)
}

/// min over `y ∈ [0, n)` of `(a·y + b) mod 2^128`, `n ≥ 1`.
pub fn min_mod(n: u64, a: u128, b: u128) -> u128 {
    assert!(n >= 1);
    // least v with count_below(v + 1) ≥ 1
    let (mut lo, mut hi) = (0u128, b);
    if count_below(n, a, b, &BigUint::from(0u32)) > 0 {
        return 0;
    }
    // count_below(hi + 1) ≥ 1 since y = 0 gives b
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if count_below(n, a, b, &(BigUint::from(mid) + 1u32)) > 0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Half-open arc `[lo, lo + len)` on the fixed-point circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub lo: u128,
    pub len: u128,
}

impl Arc {
    pub fn contains(&self, x: u128) -> bool {
        x.wrapping_sub(self.lo) < self.len
    }
}

/// Arc of orbit points `y` whose depth-`n` coding under rotation by `beta` (cut points 0 and `beta`) equals that of `y`.
pub fn cylinder(beta: u128, y: u128, n: u64) -> Arc {
    let left = min_mod(n + 1, beta, y.wrapping_sub(beta));
    let right = min_mod(n + 1, beta.wrapping_neg(), beta.wrapping_sub(y));
    Arc { lo: y.wrapping_sub(left), len: left + right }
}

/// Signed representative of `x` in `(-2^127, 2^127]`.
pub fn signed(x: u128) -> i128 {
    x as i128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_sum_small() {
        for n in 0u32..12 {
            for m in 1u32..9 {
                for a in 0u32..10 {
                    for b in 0u32..10 {
                        let brute: u32 = (0..n).map(|i| (a * i + b) / m).sum();
                        let got = floor_sum(&n.into(), &m.into(), &a.into(), &b.into());
                        assert_eq!(got, BigUint::from(brute));
                    }
                }
            }
        }
    }

    fn golden() -> u128 {
        // ⌊((√5 − 1)/2)·2^128⌋
        0x9E3779B97F4A7C15F39CC0605CEDC834
    }

    #[test]
    fn count_and_hit_match_scan() {
        let a = golden();
        let b = 12345u128 << 90;
        let bound = BigUint::from(1u128 << 124);
        let mut seen = 0u64;
        let mut first = None;
        for y in 0..2000u64 {
            if b.wrapping_add(a.wrapping_mul(y as u128)) < (1u128 << 124) {
                seen += 1;
                first.get_or_insert(y);
            }
            if y % 250 == 0 {
                assert_eq!(count_below(y + 1, a, b, &bound), seen);
            }
        }
        assert_eq!(first_hit(a, b, &bound, 0, 1 << 40), first);
        let second = (first.unwrap() + 1..2000)
            .find(|&y| b.wrapping_add(a.wrapping_mul(y as u128)) < (1u128 << 124));
        assert_eq!(first_hit(a, b, &bound, first.unwrap() + 1, 1 << 40), second);
    }

    #[test]
    fn min_mod_matches_scan() {
        let a = golden();
        let b = 77u128 << 100;
        let brute = (0..500u64).map(|y| b.wrapping_add(a.wrapping_mul(y as u128))).min().unwrap();
        assert_eq!(min_mod(500, a, b), brute);
    }

    #[test]
    fn cylinder_is_the_coding_class() {
        let beta = golden();
        let code = |y: u128, n: u64| -> Vec<bool> {
            (0..n).map(|i| y.wrapping_add(beta.wrapping_mul(i as u128)) < beta).collect()
        };
        let y = 0x3000_0000_0000_0000_0000_0000_0000_0000u128;
        let arc = cylinder(beta, y, 12);
        let c = code(y, 12);
        assert_eq!(code(arc.lo, 12), c);
        assert_eq!(code(arc.lo.wrapping_add(arc.len - 1), 12), c);
        assert_ne!(code(arc.lo.wrapping_sub(1), 12), c);
        assert_ne!(code(arc.lo.wrapping_add(arc.len), 12), c);
    }
}
