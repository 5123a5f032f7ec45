/// `ω_i = 1 + v₂(i)`: the unique `m ≥ 1` with `i ≡ 2^{m−1} (mod 2^m)`.
///
/// `ω_1 … ω_16 = 1213121412131215`; the value `k` first appears at `i = 2^{k−1}`.
pub fn ruler(i: u64) -> u32 {
    assert!(i >= 1, "ruler index starts at 1");
    i.trailing_zeros() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_prefix() {
        let s: String = (1..=16).map(|i| char::from_digit(ruler(i), 10).unwrap()).collect();
        assert_eq!(s, "1213121412131215");
    }

    #[test]
    fn congruence_by_brute_force() {
        for i in 1..=(1u64 << 12) {
            let m = (1..=13u32).find(|&m| i % (1u64 << m) == 1u64 << (m - 1)).unwrap();
            assert_eq!(ruler(i), m, "i = {i}");
            assert_eq!(ruler(2 * i), ruler(i) + 1);
        }
    }

    #[test]
    fn first_occurrence() {
        for k in 1..12u32 {
            let first = (1..).find(|&i| ruler(i) == k).unwrap();
            assert_eq!(first, 1u64 << (k - 1));
        }
    }
}
