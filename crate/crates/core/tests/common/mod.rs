//! Independent oracles for the integration suites. These deliberately use
//! different algorithms than the library: explicit word enumeration and
//! per-symbol dynamic programming instead of transfer matrices, subset
//! filtering instead of closure growth, exhaustive subset search instead
//! of branch and bound.

#![allow(dead_code)]

use num_bigint::BigUint;

/// All admissible words of length `n` for a 0/1 transition matrix, by
/// direct extension. Desk scale only.
pub fn oracle_words(matrix: &[Vec<u8>], n: usize) -> Vec<Vec<u8>> {
    let k = matrix.len();
    if n == 0 {
        return vec![vec![]];
    }
    let mut words: Vec<Vec<u8>> = (0..k as u8).map(|s| vec![s]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for w in &words {
            let last = *w.last().unwrap() as usize;
            #[allow(clippy::needless_range_loop)]
            for s in 0..k {
                if matrix[last][s] == 1 {
                    let mut w2 = w.clone();
                    w2.push(s as u8);
                    next.push(w2);
                }
            }
        }
        words = next;
    }
    words
}

/// Word count of length `n` by per-symbol dynamic programming over u128.
pub fn oracle_count_dp(matrix: &[Vec<u8>], n: usize) -> u128 {
    let k = matrix.len();
    if n == 0 {
        return 1;
    }
    let mut ending: Vec<u128> = vec![1; k];
    for _ in 1..n {
        let mut next = vec![0u128; k];
        for (last, &c) in ending.iter().enumerate() {
            for (s, next_c) in next.iter_mut().enumerate() {
                if matrix[last][s] == 1 {
                    *next_c += c;
                }
            }
        }
        ending = next;
    }
    ending.into_iter().sum()
}

/// Fibonacci numbers with F(1) = F(2) = 1.
pub fn oracle_fib(n: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}

pub fn big(n: u128) -> BigUint {
    let lo = (n & (u64::MAX as u128)) as u64;
    let hi = (n >> 64) as u64;
    (BigUint::from(hi) << 64) | BigUint::from(lo)
}

/// Number of distinct restrictions of admissible points to a coordinate
/// set, by enumerating every admissible word over the convex hull and
/// projecting. The `coords` are absolute positions; admissibility of the
/// hull word implies two-way extendability because every symbol has a
/// successor and a predecessor.
pub fn oracle_joint_assignments(matrix: &[Vec<u8>], segs: &[(i64, i64)]) -> u128 {
    if segs.is_empty() {
        return 1;
    }
    let lo = segs.iter().map(|s| s.0).min().unwrap();
    let hi = segs.iter().map(|s| s.1).max().unwrap();
    let len = (hi - lo + 1) as usize;
    let coords: Vec<usize> = segs
        .iter()
        .flat_map(|&(i, j)| (i..=j).map(|c| (c - lo) as usize).collect::<Vec<_>>())
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    for w in oracle_words(matrix, len) {
        let projected: Vec<u8> = coords.iter().map(|&c| w[c]).collect();
        seen.insert(projected);
    }
    seen.len() as u128
}

/// Minimum subcover size by exhaustive subset enumeration.
pub fn oracle_min_subcover(full: u64, sets: &[u64]) -> Option<u64> {
    let m = sets.len();
    let mut best: Option<u64> = None;
    for bits in 1u64..(1 << m) {
        let union = (0..m)
            .filter(|&i| bits & (1 << i) != 0)
            .fold(0u64, |acc, i| acc | sets[i]);
        if union == full {
            let size = bits.count_ones() as u64;
            best = Some(best.map_or(size, |b: u64| b.min(size)));
        }
    }
    best
}

/// All subgroups of a finite abelian group by brute-force subset
/// filtering: every subset containing 0 that is closed under addition.
/// The group is given by its addition table.
pub fn oracle_subgroups(order: usize, add: &dyn Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    assert!(order <= 16, "oracle is desk-scale only");
    let mut out = Vec::new();
    for bits in 0u32..(1 << order) {
        if bits & 1 == 0 {
            continue; // must contain 0
        }
        let members: Vec<usize> = (0..order).filter(|&e| bits & (1 << e) != 0).collect();
        let closed = members
            .iter()
            .all(|&x| members.iter().all(|&y| bits & (1 << add(x, y)) != 0));
        if closed {
            out.push(members);
        }
    }
    out
}
