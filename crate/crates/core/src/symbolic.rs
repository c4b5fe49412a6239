//! Shifts of finite type via cylinder covers over coordinate windows.
//!
//! Covers are parametrized by finite unions of coordinate windows; the
//! cylinders over such a set of coordinates partition the shift space, so
//! the minimum subcover is the whole cover and its `H`-norm is exactly the
//! logarithm of the number of jointly admissible symbol assignments. That
//! count is computed with big-integer transfer-matrix products, bridging
//! the gaps between windows with boolean reachability so that meets of
//! disjoint windows get the true norm of the meet cover (a single convex
//! hull would overcount and break subadditivity).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sidedness::OneSided => f.write_str("one-sided"),
            Sidedness::TwoSided => f.write_str("two-sided"),
        }
    }
}

/// Which norm a window space carries.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WindowNorm {
    /// Log of the exact word count (topological-entropy flavor).
    H,
    /// Order-based norm; every window cover partitions the space, so this
    /// is identically 0 here (mean-dimension flavor over a zero-dimensional
    /// alphabet).
    D,
}

struct SftCore {
    alphabet: usize,
    sidedness: Sidedness,
    matrix: Vec<Vec<u8>>,
    /// counts[n] = number of admissible words of length n, for n ≤ cache
    /// horizon (index 0 holds the empty-word count 1).
    counts: Vec<BigUint>,
}

/// A subshift of finite type: `k` symbols constrained by a 0/1 transition
/// matrix. The full shift is the all-ones matrix.
#[derive(Clone)]
pub struct Sft(Arc<SftCore>);

impl fmt::Debug for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sft")
            .field("alphabet", &self.0.alphabet)
            .field("sidedness", &self.0.sidedness)
            .finish()
    }
}

/// Word counts are cached eagerly up to this length at construction;
/// longer counts are recomputed on demand.
const COUNT_CACHE_LEN: usize = 128;

impl Sft {
    pub fn new(alphabet: usize, sidedness: Sidedness, matrix: Vec<Vec<u8>>) -> Result<Sft> {
        if alphabet == 0 {
            return Err(EntError::invalid("alphabet must have at least one symbol"));
        }
        if matrix.len() != alphabet || matrix.iter().any(|r| r.len() != alphabet) {
            return Err(EntError::invalid("transition matrix must be k×k"));
        }
        if matrix.iter().flatten().any(|&x| x > 1) {
            return Err(EntError::invalid("transition matrix entries must be 0 or 1"));
        }
        for i in 0..alphabet {
            if matrix[i].iter().all(|&x| x == 0) {
                return Err(EntError::invalid(format!("symbol {i} has no successor")));
            }
            if (0..alphabet).all(|j| matrix[j][i] == 0) {
                return Err(EntError::invalid(format!("symbol {i} has no predecessor")));
            }
        }
        let counts = build_counts(&matrix, alphabet, COUNT_CACHE_LEN);
        Ok(Sft(Arc::new(SftCore { alphabet, sidedness, matrix, counts })))
    }

    pub fn full_shift(alphabet: usize, sidedness: Sidedness) -> Result<Sft> {
        Sft::new(alphabet, sidedness, vec![vec![1; alphabet]; alphabet])
    }

    /// The two-symbol shift forbidding consecutive ones; word counts are
    /// Fibonacci numbers.
    pub fn golden_mean(sidedness: Sidedness) -> Sft {
        Sft::new(2, sidedness, vec![vec![1, 1], vec![1, 0]]).expect("valid matrix")
    }

    pub fn alphabet(&self) -> usize {
        self.0.alphabet
    }

    pub fn sidedness(&self) -> Sidedness {
        self.0.sidedness
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.0.matrix
    }

    pub fn is_full(&self) -> bool {
        self.0.matrix.iter().flatten().all(|&x| x == 1)
    }

    /// Number of admissible words of length `n` (`n = 0` counts the empty
    /// word).
    pub fn count_words(&self, n: usize) -> BigUint {
        if let Some(c) = self.0.counts.get(n) {
            return c.clone();
        }
        count_tail(&self.0.matrix, self.0.alphabet, &self.0.counts, n)
    }

    /// Number of jointly admissible symbol assignments over a canonical
    /// window set: transfer-matrix counts inside each window, boolean
    /// reachability across each gap.
    pub fn count_assignments(&self, segs: &[(i64, i64)]) -> BigUint {
        let k = self.0.alphabet;
        if segs.is_empty() {
            return BigUint::one();
        }
        if segs.len() == 1 {
            return self.count_words((segs[0].1 - segs[0].0 + 1) as usize);
        }
        // Row vector over end symbols of the prefix processed so far.
        let mut v: Vec<BigUint> = vec![BigUint::one(); k];
        let mut first = true;
        let mut prev_end = 0i64;
        for &(i, j) in segs {
            if !first {
                let gap = (i - prev_end - 1) as usize;
                let bridge = bool_power(&self.0.matrix, k, gap + 1);
                v = bool_apply(&v, &bridge, k);
            }
            let len = (j - i + 1) as usize;
            for _ in 0..len.saturating_sub(1) {
                v = count_step(&v, &self.0.matrix, k);
            }
            prev_end = j;
            first = false;
        }
        v.into_iter().sum()
    }
}

fn build_counts(matrix: &[Vec<u8>], k: usize, up_to: usize) -> Vec<BigUint> {
    let mut counts = Vec::with_capacity(up_to + 1);
    counts.push(BigUint::one());
    let mut v: Vec<BigUint> = vec![BigUint::one(); k];
    counts.push(v.iter().sum());
    for _ in 2..=up_to {
        v = count_step(&v, matrix, k);
        counts.push(v.iter().sum());
    }
    counts
}

fn count_tail(matrix: &[Vec<u8>], k: usize, cached: &[BigUint], n: usize) -> BigUint {
    // Recompute from scratch; cheap relative to big-int growth and keeps
    // the cache immutable.
    let _ = cached;
    let mut v: Vec<BigUint> = vec![BigUint::one(); k];
    for _ in 1..n {
        v = count_step(&v, matrix, k);
    }
    if n == 0 {
        BigUint::one()
    } else {
        v.into_iter().sum()
    }
}

/// One transfer step: `w[j] = Σ_i v[i]·A[i][j]`.
fn count_step(v: &[BigUint], matrix: &[Vec<u8>], k: usize) -> Vec<BigUint> {
    let mut w = vec![BigUint::zero(); k];
    for i in 0..k {
        if v[i].is_zero() {
            continue;
        }
        for j in 0..k {
            if matrix[i][j] == 1 {
                w[j] += &v[i];
            }
        }
    }
    w
}

/// Boolean reachability matrix `A^m` as row bitmasks.
fn bool_power(matrix: &[Vec<u8>], k: usize, m: usize) -> Vec<u64> {
    debug_assert!(k <= 64);
    let base: Vec<u64> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| matrix[i][j] == 1)
                .fold(0u64, |acc, j| acc | (1 << j))
        })
        .collect();
    let mut cur: Vec<u64> = (0..k).map(|i| 1 << i).collect(); // identity
    for _ in 0..m {
        cur = (0..k)
            .map(|i| {
                let mut row = 0u64;
                let mut bits = cur[i];
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    row |= base[j];
                }
                row
            })
            .collect();
    }
    cur
}

/// `w[j] = Σ_i v[i]·B[i][j]` for a boolean bridge `B`.
fn bool_apply(v: &[BigUint], bridge: &[u64], k: usize) -> Vec<BigUint> {
    let mut w = vec![BigUint::zero(); k];
    for i in 0..k {
        if v[i].is_zero() {
            continue;
        }
        let mut bits = bridge[i];
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            w[j] += &v[i];
        }
    }
    w
}

/// Canonicalizes a list of windows: sorted, merged when overlapping or
/// adjacent (adjacent coordinates form one contiguous window).
pub fn canonical_windows(mut segs: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    segs.retain(|&(i, j)| i <= j);
    segs.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(segs.len());
    for (i, j) in segs {
        match out.last_mut() {
            Some(last) if i <= last.1 + 1 => {
                last.1 = last.1.max(j);
            }
            _ => out.push((i, j)),
        }
    }
    out
}

/// `coords(sub) ⊆ coords(sup)` for canonical window sets: each window of
/// `sub` must lie inside a single window of `sup`.
fn coords_subset(sub: &[(i64, i64)], sup: &[(i64, i64)]) -> bool {
    sub.iter().all(|&(i, j)| sup.iter().any(|&(a, b)| a <= i && j <= b))
}

fn payload_windows(p: &Payload) -> &[(i64, i64)] {
    match p {
        Payload::Windows(segs) => segs,
        _ => panic!("foreign payload in a window space"),
    }
}

/// The cylinder-cover space of an SFT over window sets, with the chosen
/// norm. The trivial cover is the unit; `[−k, k]` (or `[0, k]`) is the
/// declared cofinal family.
pub fn sft_space(sft: &Sft, norm: WindowNorm) -> CoverSpace {
    let name = format!(
        "{} windows ({}, |Σ|={}, {})",
        if sft.is_full() { "full-shift" } else { "sft" },
        sft.sidedness(),
        sft.alphabet(),
        match norm {
            WindowNorm::H => "H",
            WindowNorm::D => "D",
        },
    );
    let sided = sft.sidedness();
    let norm_sft = sft.clone();
    CoverSpace::builder(name)
        .refines(|a, b| {
            let (sa, sb) = (payload_windows(a), payload_windows(b));
            coords_subset(sb, sa)
        })
        .meet(|a, b| {
            let mut segs = payload_windows(a).to_vec();
            segs.extend_from_slice(payload_windows(b));
            Payload::Windows(canonical_windows(segs))
        })
        .norm(move |p| match norm {
            WindowNorm::H => ExtReal::log_count(&norm_sft.count_assignments(payload_windows(p))),
            WindowNorm::D => ExtReal::ZERO,
        })
        .unit(Payload::Windows(vec![]))
        .cofinal(move |k| match sided {
            Sidedness::OneSided => Payload::Windows(vec![(0, k as i64)]),
            Sidedness::TwoSided => Payload::Windows(vec![(-(k as i64), k as i64)]),
        })
        .meet_space(true)
        .commutative(true)
        .build()
}

/// A single-window cover.
pub fn window(space: &CoverSpace, sft: &Sft, i: i64, j: i64) -> Result<Cover> {
    if i > j {
        return Err(EntError::invalid(format!("window [{i},{j}] is empty")));
    }
    if sft.sidedness() == Sidedness::OneSided && i < 0 {
        return Err(EntError::invalid(
            "one-sided shifts have no negative coordinates",
        ));
    }
    Ok(space.cover(Payload::Windows(vec![(i, j)])))
}

/// The trivial cover `{Σ}`.
pub fn trivial_cover(space: &CoverSpace) -> Cover {
    space.cover(Payload::Windows(vec![]))
}

fn shift_segs(segs: &[(i64, i64)], by: i64) -> Vec<(i64, i64)> {
    segs.iter().map(|&(i, j)| (i + by, j + by)).collect()
}

/// The preimage map of the shift on window covers: windows move one step
/// up. A homomorphism (word counts are shift-invariant); an isomorphism
/// with inverse `[i,j] ↦ [i−1,j−1]` on two-sided shifts. On full shifts it
/// carries the exact entropy in closed form: `log k` relative to any
/// non-trivial cover.
pub fn shift_preimage_map(sft: &Sft, space: &CoverSpace) -> CoverMap {
    let sided = sft.sidedness();
    let declared = match sided {
        Sidedness::OneSided => MapClass::Homomorphism,
        Sidedness::TwoSided => MapClass::Isomorphism,
    };
    let mut b = CoverMap::builder("shift preimage", space, space, declared)
        .apply(|p| Payload::Windows(shift_segs(payload_windows(p), 1)));
    if sided == Sidedness::TwoSided {
        b = b.inverse(|p| Payload::Windows(shift_segs(payload_windows(p), -1)));
    }
    if sft.is_full() {
        let logk = ExtReal::log_count_u64(sft.alphabet() as u64);
        b = b.closed_form(move |p| {
            if payload_windows(p).is_empty() {
                Some(ExtReal::ZERO)
            } else {
                Some(logk)
            }
        });
    }
    b.build()
}

/// The forward-image map of the shift on window covers of a one-sided full
/// shift: coordinates move one step down and constraints at the origin are
/// forgotten, so iterates coarsen and the trajectory stabilizes. A lower
/// map.
pub fn shift_forward_map(sft: &Sft, space: &CoverSpace) -> Result<CoverMap> {
    if sft.sidedness() != Sidedness::OneSided || !sft.is_full() {
        return Err(EntError::precondition(
            "the forward-image map is exact only on one-sided full shifts",
        ));
    }
    Ok(CoverMap::builder("shift forward image", space, space, MapClass::LowerMap)
        .apply(|p| {
            let segs: Vec<(i64, i64)> = payload_windows(p)
                .iter()
                .filter_map(|&(i, j)| {
                    if j == 0 {
                        None
                    } else {
                        Some(((i - 1).max(0), j - 1))
                    }
                })
                .collect();
            Payload::Windows(canonical_windows(segs))
        })
        .build())
}

/// Disjoint union of two shifts of the same sidedness: block-diagonal
/// transition matrix, so word counts add.
pub fn disjoint_union(a: &Sft, b: &Sft) -> Result<Sft> {
    if a.sidedness() != b.sidedness() {
        return Err(EntError::precondition("disjoint union needs equal sidedness"));
    }
    let (ka, kb) = (a.alphabet(), b.alphabet());
    let k = ka + kb;
    let mut m = vec![vec![0u8; k]; k];
    for i in 0..ka {
        for j in 0..ka {
            m[i][j] = a.matrix()[i][j];
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            m[ka + i][ka + j] = b.matrix()[i][j];
        }
    }
    Sft::new(k, a.sidedness(), m)
}

/// Product of two shifts of the same sidedness: Kronecker-product
/// transition matrix, so word counts multiply.
pub fn product_sft(a: &Sft, b: &Sft) -> Result<Sft> {
    if a.sidedness() != b.sidedness() {
        return Err(EntError::precondition("product needs equal sidedness"));
    }
    let (ka, kb) = (a.alphabet(), b.alphabet());
    let k = ka * kb;
    let mut m = vec![vec![0u8; k]; k];
    for i1 in 0..ka {
        for i2 in 0..kb {
            for j1 in 0..ka {
                for j2 in 0..kb {
                    m[i1 * kb + i2][j1 * kb + j2] = a.matrix()[i1][j1] * b.matrix()[i2][j2];
                }
            }
        }
    }
    Sft::new(k, a.sidedness(), m)
}
