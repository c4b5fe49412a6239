//! Finite explicit cover spaces given by tables, plus the hand-built and
//! seeded fixtures used across the test suites and the CLI.

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

/// A finite cover space spelled out element by element.
#[derive(Clone, Debug)]
pub struct FiniteSpaceSpec {
    pub name: String,
    pub element_names: Vec<String>,
    /// `refines[i][j]` ⇔ element `i` refines element `j`.
    pub refines: Vec<Vec<bool>>,
    /// `meet[i][j]` = index of `i ∧ j`.
    pub meet: Vec<Vec<usize>>,
    pub norms: Vec<ExtReal>,
    pub unit: Option<usize>,
    pub claims_meet_space: bool,
    pub claims_commutative: bool,
}

impl FiniteSpaceSpec {
    pub fn len(&self) -> usize {
        self.element_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_names.is_empty()
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(EntError::invalid("finite space needs at least one element"));
        }
        if self.refines.len() != n
            || self.refines.iter().any(|r| r.len() != n)
            || self.meet.len() != n
            || self.meet.iter().any(|r| r.len() != n)
            || self.norms.len() != n
        {
            return Err(EntError::invalid("table sizes do not match element count"));
        }
        if self.meet.iter().flatten().any(|&k| k >= n) {
            return Err(EntError::invalid("meet table points outside the space"));
        }
        if let Some(u) = self.unit {
            if u >= n {
                return Err(EntError::invalid("unit index outside the space"));
            }
        }
        Ok(())
    }

    /// Builds the cover space. Axioms are not enforced here — run the
    /// checkers; broken fixtures are legitimate inputs.
    pub fn build(&self) -> Result<CoverSpace> {
        self.validate()?;
        let refines = self.refines.clone();
        let meet = self.meet.clone();
        let norms = self.norms.clone();
        let mut b = CoverSpace::builder(self.name.clone())
            .refines(move |a, b| match (a, b) {
                (Payload::Atom(i), Payload::Atom(j)) => refines[*i as usize][*j as usize],
                _ => false,
            })
            .meet(move |a, b| match (a, b) {
                (Payload::Atom(i), Payload::Atom(j)) => {
                    Payload::Atom(meet[*i as usize][*j as usize] as u32)
                }
                _ => panic!("foreign payload in finite space"),
            })
            .norm(move |p| match p {
                Payload::Atom(i) => norms[*i as usize],
                _ => ExtReal::Infinity,
            })
            .enumeration((0..self.len() as u32).map(Payload::Atom).collect())
            .meet_space(self.claims_meet_space)
            .commutative(self.claims_commutative);
        if let Some(u) = self.unit {
            b = b.unit(Payload::Atom(u as u32));
        }
        // The minimum over the whole table, if one exists, is a constant
        // cofinal family.
        let n = self.len();
        let mut min_idx = None;
        'outer: for i in 0..n {
            for j in 0..n {
                if !self.refines[i][j] {
                    continue 'outer;
                }
            }
            min_idx = Some(i as u32);
            break;
        }
        if let Some(m) = min_idx {
            b = b.cofinal(move |_| Payload::Atom(m));
        }
        Ok(b.build())
    }

    /// A self-map by image table.
    pub fn table_map(
        &self,
        space: &CoverSpace,
        name: impl Into<String>,
        images: &[usize],
        declared: MapClass,
        inverse: Option<&[usize]>,
    ) -> Result<CoverMap> {
        if images.len() != self.len() || images.iter().any(|&k| k >= self.len()) {
            return Err(EntError::invalid("image table does not match the space"));
        }
        let table: Vec<u32> = images.iter().map(|&k| k as u32).collect();
        let mut b = CoverMap::builder(name, space, space, declared).apply(move |p| match p {
            Payload::Atom(i) => Payload::Atom(table[*i as usize]),
            other => other.clone(),
        });
        if let Some(inv) = inverse {
            if inv.len() != self.len() || inv.iter().any(|&k| k >= self.len()) {
                return Err(EntError::invalid("inverse table does not match the space"));
            }
            let table: Vec<u32> = inv.iter().map(|&k| k as u32).collect();
            b = b.inverse(move |p| match p {
                Payload::Atom(i) => Payload::Atom(table[*i as usize]),
                other => other.clone(),
            });
        }
        Ok(b.build())
    }
}

fn log(n: u64) -> ExtReal {
    ExtReal::log_count_u64(n)
}

/// Four-element diamond: top `1`, incomparable `a`, `b`, bottom `m`, with
/// `a ∧ b = m`. A valid commutative unital meet entropy space.
pub fn diamond() -> FiniteSpaceSpec {
    // Indices: 0 = bottom, 1 = a, 2 = b, 3 = top.
    let le = |i: usize, j: usize| -> bool {
        i == j || i == 0 || j == 3
    };
    let refines = (0..4).map(|i| (0..4).map(|j| le(i, j)).collect()).collect();
    let meet = (0..4usize)
        .map(|i| {
            (0..4usize)
                .map(|j| {
                    if le(i, j) {
                        i
                    } else if le(j, i) {
                        j
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    FiniteSpaceSpec {
        name: "diamond".to_string(),
        element_names: vec!["m".into(), "a".into(), "b".into(), "1".into()],
        refines,
        meet,
        norms: vec![log(3), log(2), log(2), log(1)],
        unit: Some(3),
        claims_meet_space: true,
        claims_commutative: true,
    }
}

/// Diamond with the edge `m ≺ b` removed, breaking "meet refines both
/// factors" at `(a, b)`.
pub fn diamond_broken_meet() -> FiniteSpaceSpec {
    let mut spec = diamond();
    spec.name = "diamond (broken meet law)".to_string();
    spec.refines[0][2] = false;
    spec.unit = None;
    spec
}

/// Diamond with `h(a)` raised above `h(m)`, breaking norm antitonicity on
/// the pair `(m, a)`.
pub fn diamond_broken_norm() -> FiniteSpaceSpec {
    let mut spec = diamond();
    spec.name = "diamond (broken norm law)".to_string();
    spec.norms[1] = log(5);
    spec
}

/// Three-element chain `c0 ≺ c1 ≺ c2` with constant norm, together with
/// the step-down self-map `c2 ↦ c1 ↦ c0 ↦ c0`: a cofinal, positively
/// expansive morphism whose descent element is the bottom of the chain.
pub fn chain3() -> FiniteSpaceSpec {
    let le = |i: usize, j: usize| i <= j;
    FiniteSpaceSpec {
        name: "chain3".to_string(),
        element_names: vec!["c0".into(), "c1".into(), "c2".into()],
        refines: (0..3).map(|i| (0..3).map(|j| le(i, j)).collect()).collect(),
        meet: (0..3).map(|i| (0..3).map(|j| i.min(j)).collect()).collect(),
        norms: vec![log(2), log(2), log(2)],
        unit: None,
        claims_meet_space: true,
        claims_commutative: true,
    }
}

/// The step-down map on [`chain3`].
pub fn chain3_stepdown(spec: &FiniteSpaceSpec, space: &CoverSpace) -> Result<CoverMap> {
    spec.table_map(space, "step-down", &[0, 0, 1], MapClass::LowerMorphism, None)
}

/// Deterministic splitmix64 stream for seeded fixtures.
#[derive(Clone, Debug)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Seeded random valid space: a family of subsets of a 6-point ground set
/// closed under intersection, refined by inclusion, met by intersection,
/// normed by `(6 − |S|) · log 2 · scale`. Such a family always satisfies
/// the cover and norm axioms, so these make good inputs for preservation
/// tests. At most `max_elems` elements.
pub fn random_meet_space(seed: u64, max_elems: usize) -> FiniteSpaceSpec {
    let mut rng = SplitMix64(seed);
    let ground: u32 = 6;
    loop {
        let mut family: Vec<u32> = Vec::new();
        let k = 2 + rng.below(3) as usize;
        for _ in 0..k {
            family.push((rng.next_u64() & 0x3F) as u32);
        }
        // Close under pairwise intersection.
        loop {
            let mut added = false;
            let snapshot = family.clone();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    let c = a & b;
                    if !family.contains(&c) {
                        family.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        family.sort_unstable();
        family.dedup();
        if family.len() > max_elems || family.len() < 2 {
            continue;
        }
        let scale = 1 + rng.below(3);
        let n = family.len();
        let le = |i: usize, j: usize| family[i] & family[j] == family[i];
        let meet_idx = |i: usize, j: usize| {
            let c = family[i] & family[j];
            family.iter().position(|&x| x == c).unwrap()
        };
        return FiniteSpaceSpec {
            name: format!("seeded space {seed}"),
            element_names: family.iter().map(|s| format!("S{s:02x}")).collect(),
            refines: (0..n).map(|i| (0..n).map(|j| le(i, j)).collect()).collect(),
            meet: (0..n).map(|i| (0..n).map(|j| meet_idx(i, j)).collect()).collect(),
            norms: family
                .iter()
                .map(|s| {
                    ExtReal::Finite(
                        (ground - s.count_ones()) as f64
                            * std::f64::consts::LN_2
                            * scale as f64,
                    )
                })
                .collect(),
            unit: None,
            claims_meet_space: true,
            claims_commutative: true,
        };
    }
}

/// All covers of a finite explicit space, as `Cover`s.
pub fn all_covers(space: &CoverSpace) -> Vec<Cover> {
    space.enumeration().unwrap_or_default()
}
