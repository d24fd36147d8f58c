//! Meet-in-the-middle search for small integer relations modulo `M`.

use std::collections::HashMap;

use crate::arith::{add_mod_u128, signed_mod_u128};

/// All nonzero `c ∈ [-bound, bound]^m` with `Σ c_i·values[i] ≡ 0 (mod modulus)`.
///
/// `values` must be reduced mod `modulus`, and `modulus < 2^127`. Stops after
/// `limit` solutions.
pub fn solve_box(values: &[u128], modulus: u128, bound: i64, limit: usize) -> Vec<Vec<i64>> {
    let m = values.len();
    if m == 0 {
        return vec![];
    }
    let half = m / 2;
    let (left, right) = values.split_at(half);

    let mut table: HashMap<u128, Vec<Vec<i64>>> = HashMap::new();
    for_each_combo(left, modulus, bound, |coeffs, sum| {
        table.entry(sum).or_default().push(coeffs.to_vec());
        true
    });

    let mut out = Vec::new();
    for_each_combo(right, modulus, bound, |coeffs, sum| {
        let need = if sum == 0 { 0 } else { modulus - sum };
        if let Some(lefts) = table.get(&need) {
            for l in lefts {
                if l.iter().chain(coeffs).all(|&c| c == 0) {
                    continue;
                }
                let mut full = l.clone();
                full.extend_from_slice(coeffs);
                out.push(full);
                if out.len() >= limit {
                    return false;
                }
            }
        }
        true
    });
    out
}

/// Monomials for the bounded tower check: the target `x·y^{m+1}` first, then
/// `1` and every `x^a·y^b` with `1 ≤ a ≤ d`, `b ≤ m·a` and `b ≤ m + 1`, which
/// spans the products of at most `d` generators `x·y^i` with `i ≤ m`.
pub fn tower_monomials(d: u32, m: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(1, m + 1), (0, 0)];
    for a in 1..=d {
        for b in 0..=(m * a).min(m + 1) {
            out.push((a, b));
        }
    }
    out
}

/// Odometer over `[-bound, bound]^len` with the running sum kept mod `modulus`.
/// The callback returns `false` to stop.
fn for_each_combo(
    values: &[u128],
    modulus: u128,
    bound: i64,
    mut f: impl FnMut(&[i64], u128) -> bool,
) {
    let n = values.len();
    let mut coeffs = vec![-bound; n];
    let steps: Vec<u128> = values.iter().map(|&v| v % modulus).collect();
    // Sum for the starting vector: -bound · Σ values.
    let mut sum = 0u128;
    for &v in &steps {
        let neg = crate::arith::mul_mod_u128(v, signed_mod_u128(-bound, modulus), modulus);
        sum = add_mod_u128(sum, neg, modulus);
    }
    // Resetting a digit from +bound to -bound subtracts 2·bound·v.
    let resets: Vec<u128> = steps
        .iter()
        .map(|&v| crate::arith::mul_mod_u128(v, signed_mod_u128(-2 * bound, modulus), modulus))
        .collect();
    loop {
        if !f(&coeffs, sum) {
            return;
        }
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                sum = add_mod_u128(sum, steps[i], modulus);
                break;
            }
            coeffs[i] = -bound;
            sum = add_mod_u128(sum, resets[i], modulus);
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(values: &[u128], modulus: u128, bound: i64) -> Vec<Vec<i64>> {
        let m = values.len();
        let width = (2 * bound + 1) as usize;
        let total = width.pow(m as u32);
        let mut out = Vec::new();
        for idx in 0..total {
            let mut r = idx;
            let c: Vec<i64> = (0..m)
                .map(|_| {
                    let d = (r % width) as i64 - bound;
                    r /= width;
                    d
                })
                .collect();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let s: i128 = c
                .iter()
                .zip(values)
                .map(|(&ci, &v)| ci as i128 * v as i128)
                .sum();
            if s.rem_euclid(modulus as i128) == 0 {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn agrees_with_brute_force() {
        for (values, modulus, bound) in [
            (vec![3u128, 5, 7, 11], 13u128, 1i64),
            (vec![1, 2, 4], 1000, 2),
            (vec![10, 20, 31, 7, 9], 97, 1),
            (vec![6], 12, 2),
        ] {
            let mut got = solve_box(&values, modulus, bound, usize::MAX);
            got.sort();
            assert_eq!(got, brute(&values, modulus, bound), "{values:?}");
        }
    }

    #[test]
    fn respects_limit() {
        let got = solve_box(&[0, 0, 0], 7, 1, 5);
        assert_eq!(got.len(), 5);
    }
}
