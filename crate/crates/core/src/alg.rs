//! Finite abelian groups: subgroup lattices, endomorphisms, and the
//! image/preimage entropy structures on them.
//!
//! Three spaces per group:
//!
//! * the *image* structure on all subgroups: `E ≺ F ⇔ F ⊆ E`, `E∧F = E+F`,
//!   `h = log|·|`, dynamics `F ↦ φF` (a lower morphism);
//! * the *index* structure: `E ≺ F ⇔ E ⊆ F`, `E∧F = E∩F`,
//!   `h = log[G : ·]`, dynamics `F ↦ φ⁻¹F` (a lower morphism);
//! * the *backward* image structure: same space as the first, dynamics
//!   `F ↦ φ⁻¹F` for injective `φ` — no longer meet-preserving, but still a
//!   lower map.

use std::fmt;
use std::sync::Arc;

use crate::construct::{adjoin_unit, shift_space_map, IndexKind};
use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

/// Maximum group order accepted by the constructors.
pub const DEFAULT_ORDER_CAP: u64 = 4096;

/// A finite abelian group in invariant-factor form: elements are tuples
/// `(x₁, …, x_k)` with `xᵢ mod dᵢ`, encoded as mixed-radix indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinAbGroup {
    factors: Vec<u64>,
    order: u64,
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<FinAbGroup> {
        FinAbGroup::with_cap(factors, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(factors: Vec<u64>, cap: u64) -> Result<FinAbGroup> {
        if factors.is_empty() {
            return Err(EntError::invalid("group needs at least one factor"));
        }
        if factors.iter().any(|&d| d < 2) {
            return Err(EntError::invalid("every invariant factor must be ≥ 2"));
        }
        let mut order: u64 = 1;
        for &d in &factors {
            order = order
                .checked_mul(d)
                .ok_or_else(|| EntError::invalid("group order overflows"))?;
            if order > cap {
                return Err(EntError::invalid(format!(
                    "group order exceeds the cap of {cap}"
                )));
            }
        }
        Ok(FinAbGroup { factors, order })
    }

    pub fn cyclic(d: u64) -> Result<FinAbGroup> {
        FinAbGroup::new(vec![d])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn decode(&self, mut e: u64) -> Vec<u64> {
        let mut coords = Vec::with_capacity(self.factors.len());
        for &d in &self.factors {
            coords.push(e % d);
            e /= d;
        }
        coords
    }

    pub fn encode(&self, coords: &[u64]) -> u64 {
        let mut e = 0u64;
        for (i, &d) in self.factors.iter().enumerate().rev() {
            e = e * d + coords[i] % d;
        }
        e
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (ca, cb) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .zip(&self.factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let coords: Vec<u64> =
            self.decode(a).iter().zip(&self.factors).map(|(x, d)| (d - x) % d).collect();
        self.encode(&coords)
    }
}

/// Subgroup as an element bitset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup(Vec<u64>);

impl Subgroup {
    fn blocks_for(order: u64) -> usize {
        (order as usize).div_ceil(64)
    }

    pub fn trivial(g: &FinAbGroup) -> Subgroup {
        let mut s = Subgroup(vec![0; Self::blocks_for(g.order())]);
        s.insert(0);
        s
    }

    pub fn full(g: &FinAbGroup) -> Subgroup {
        let mut s = Subgroup(vec![0; Self::blocks_for(g.order())]);
        for e in 0..g.order() {
            s.insert(e);
        }
        s
    }

    /// Rewraps raw bitset blocks (as stored in a payload).
    pub fn from_blocks(blocks: Vec<u64>) -> Subgroup {
        Subgroup(blocks)
    }

    pub fn contains(&self, e: u64) -> bool {
        self.0[(e / 64) as usize] & (1 << (e % 64)) != 0
    }

    pub fn insert(&mut self, e: u64) {
        self.0[(e / 64) as usize] |= 1 << (e % 64);
    }

    pub fn card(&self) -> u64 {
        self.0.iter().map(|b| b.count_ones() as u64).sum()
    }

    pub fn elements(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.card() as usize);
        for (bi, &block) in self.0.iter().enumerate() {
            let mut bits = block;
            while bits != 0 {
                let o = bits.trailing_zeros() as u64;
                bits &= bits - 1;
                out.push(bi as u64 * 64 + o);
            }
        }
        out
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    /// Closure of a set of generators under addition.
    pub fn generated(g: &FinAbGroup, gens: &[u64]) -> Subgroup {
        let mut s = Subgroup::trivial(g);
        let mut worklist: Vec<u64> = vec![0];
        for &gen in gens {
            if !s.contains(gen) {
                s.insert(gen);
                worklist.push(gen);
            }
        }
        // Grow until closed: add sums of current elements with generators
        // and with each other.
        let mut idx = 0;
        while idx < worklist.len() {
            let x = worklist[idx];
            idx += 1;
            let snapshot: Vec<u64> = worklist.clone();
            for y in snapshot {
                let z = g.add(x, y);
                if !s.contains(z) {
                    s.insert(z);
                    worklist.push(z);
                }
            }
        }
        s
    }

    /// `E + F`: the subgroup generated by the union.
    pub fn sum(&self, other: &Subgroup, g: &FinAbGroup) -> Subgroup {
        let mut gens = self.elements();
        gens.extend(other.elements());
        Subgroup::generated(g, &gens)
    }

    pub fn into_payload(self) -> Payload {
        Payload::Bits(self.0)
    }

    pub fn from_payload(p: &Payload) -> &[u64] {
        match p {
            Payload::Bits(blocks) => blocks,
            _ => panic!("foreign payload in a subgroup space"),
        }
    }
}

fn payload_subgroup(p: &Payload) -> Subgroup {
    Subgroup(Subgroup::from_payload(p).to_vec())
}

/// All subgroups, by closure growth: repeatedly extend known subgroups by
/// one missing element until saturation.
pub fn enumerate_subgroups(g: &FinAbGroup) -> Vec<Subgroup> {
    let mut found: Vec<Subgroup> = vec![Subgroup::trivial(g)];
    let mut frontier: Vec<Subgroup> = found.clone();
    while let Some(s) = frontier.pop() {
        for e in 1..g.order() {
            if s.contains(e) {
                continue;
            }
            let mut gens = s.elements();
            gens.push(e);
            let bigger = Subgroup::generated(g, &gens);
            if !found.contains(&bigger) {
                found.push(bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    found.sort_by_key(|s| (s.card(), s.0.clone()));
    found
}

/// An endomorphism given by an integer matrix: column `j` is the image of
/// the `j`-th canonical generator.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    group: FinAbGroup,
    matrix: Vec<Vec<i64>>,
    table: Arc<Vec<u64>>,
    pub injective: bool,
    pub surjective: bool,
}

impl Endomorphism {
    pub fn new(group: &FinAbGroup, matrix: Vec<Vec<i64>>) -> Result<Endomorphism> {
        let k = group.factors().len();
        if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
            return Err(EntError::invalid("endomorphism matrix must be k×k"));
        }
        // Well-definedness: d_j · (column j) must vanish, i.e.
        // d_j · m_ij ≡ 0 (mod d_i) for all i.
        for j in 0..k {
            let dj = group.factors()[j] as i64;
            for i in 0..k {
                let di = group.factors()[i] as i64;
                if (dj * matrix[i][j]).rem_euclid(di) != 0 {
                    return Err(EntError::invalid(format!(
                        "matrix entry ({i},{j}) does not respect the factor orders"
                    )));
                }
            }
        }
        let mut table = Vec::with_capacity(group.order() as usize);
        for e in 0..group.order() {
            let coords = group.decode(e);
            let image: Vec<u64> = (0..k)
                .map(|i| {
                    let di = group.factors()[i] as i64;
                    let mut acc: i64 = 0;
                    for j in 0..k {
                        acc = (acc + matrix[i][j].rem_euclid(di) * (coords[j] as i64)) % di;
                    }
                    acc.rem_euclid(di) as u64
                })
                .collect();
            table.push(group.encode(&image));
        }
        let mut seen = vec![false; group.order() as usize];
        for &img in &table {
            seen[img as usize] = true;
        }
        let surjective = seen.iter().all(|&b| b);
        let injective = surjective; // finite set: injective ⇔ surjective
        Ok(Endomorphism { group: group.clone(), matrix, table: Arc::new(table), injective, surjective })
    }

    /// Multiplication by `m` on every factor.
    pub fn scalar(group: &FinAbGroup, m: i64) -> Result<Endomorphism> {
        let k = group.factors().len();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { m } else { 0 }).collect())
            .collect();
        Endomorphism::new(group, matrix)
    }

    pub fn identity(group: &FinAbGroup) -> Endomorphism {
        Endomorphism::scalar(group, 1).expect("identity is well defined")
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, e: u64) -> u64 {
        self.table[e as usize]
    }

    pub fn image_of(&self, s: &Subgroup) -> Subgroup {
        let mut out = Subgroup::trivial(&self.group);
        for e in s.elements() {
            out.insert(self.apply(e));
        }
        out
    }

    pub fn preimage_of(&self, s: &Subgroup) -> Subgroup {
        let mut out = Subgroup::trivial(&self.group);
        for e in 0..self.group.order() {
            if s.contains(self.apply(e)) {
                out.insert(e);
            }
        }
        out
    }
}

/// The subgroup space with image dynamics: `E ≺ F ⇔ F ⊆ E`, `E∧F = E+F`,
/// `h(F) = log|F|`. The trivial subgroup is the unit.
pub fn weiss_space(g: &FinAbGroup) -> CoverSpace {
    let group = Arc::new(g.clone());
    let meet_group = group.clone();
    let subgroups = enumerate_subgroups(g);
    CoverSpace::builder(format!("subgroups of {g} (image structure)"))
        .refines(|a, b| {
            // a ≺ b ⇔ b ⊆ a as element sets.
            Subgroup::from_payload(b)
                .iter()
                .zip(Subgroup::from_payload(a))
                .all(|(x, y)| x & !y == 0)
        })
        .meet(move |a, b| {
            payload_subgroup(a).sum(&payload_subgroup(b), &meet_group).into_payload()
        })
        .norm(|p| {
            let card: u64 = Subgroup::from_payload(p).iter().map(|b| b.count_ones() as u64).sum();
            ExtReal::log_count_u64(card)
        })
        .unit(Subgroup::trivial(g).into_payload())
        .enumeration(subgroups.into_iter().map(Subgroup::into_payload).collect())
        .cofinal(move |_| Subgroup::full(&group).into_payload())
        .meet_space(true)
        .commutative(true)
        .build()
}

/// Image dynamics `F ↦ φF` on [`weiss_space`]: a lower morphism, unital.
/// When `φ` is bijective the inverse (preimage) is attached, and the
/// classifier will discover the stronger isomorphism class.
pub fn weiss_map(space: &CoverSpace, phi: &Endomorphism) -> CoverMap {
    let endo = phi.clone();
    let mut b = CoverMap::builder("subgroup image", space, space, MapClass::LowerMorphism)
        .apply(move |p| endo.image_of(&payload_subgroup(p)).into_payload());
    if phi.injective {
        let endo = phi.clone();
        b = b.inverse(move |p| endo.preimage_of(&payload_subgroup(p)).into_payload());
    }
    b.build()
}

/// The subgroup space with index norm and preimage dynamics: `E ≺ F ⇔
/// E ⊆ F`, `E∧F = E∩F`, `h(F) = log[G:F]`. The whole group is the unit.
/// On a finite group every subgroup has finite index, so the carrier is
/// again all subgroups.
pub fn adjoint_space(g: &FinAbGroup) -> CoverSpace {
    let order = g.order();
    let subgroups = enumerate_subgroups(g);
    CoverSpace::builder(format!("subgroups of {g} (index structure)"))
        .refines(|a, b| {
            Subgroup::from_payload(a)
                .iter()
                .zip(Subgroup::from_payload(b))
                .all(|(x, y)| x & !y == 0)
        })
        .meet(|a, b| {
            Payload::Bits(
                Subgroup::from_payload(a)
                    .iter()
                    .zip(Subgroup::from_payload(b))
                    .map(|(x, y)| x & y)
                    .collect(),
            )
        })
        .norm(move |p| {
            let card: u64 = Subgroup::from_payload(p).iter().map(|b| b.count_ones() as u64).sum();
            ExtReal::log_count_u64(order / card)
        })
        .unit(Subgroup::full(g).into_payload())
        .enumeration(subgroups.into_iter().map(Subgroup::into_payload).collect())
        .cofinal(move |_| {
            let blocks = Subgroup::blocks_for(order);
            let mut s = Subgroup(vec![0; blocks]);
            s.insert(0);
            s.into_payload()
        })
        .meet_space(true)
        .commutative(true)
        .build()
}

/// Preimage dynamics `F ↦ φ⁻¹F` on [`adjoint_space`]: a lower morphism.
pub fn adjoint_map(space: &CoverSpace, phi: &Endomorphism) -> CoverMap {
    let endo = phi.clone();
    CoverMap::builder("subgroup preimage (index)", space, space, MapClass::LowerMorphism)
        .apply(move |p| endo.preimage_of(&payload_subgroup(p)).into_payload())
        .build()
}

/// Preimage dynamics on the *image-structure* space, for injective `φ`:
/// merely a lower map (meets are no longer preserved in general), though
/// on a finite group injectivity makes it the inverse of an isomorphism
/// and the classifier will discover that.
pub fn backward_weiss_map(space: &CoverSpace, phi: &Endomorphism) -> Result<CoverMap> {
    if !phi.injective {
        return Err(EntError::precondition(
            "backward image dynamics need an injective endomorphism",
        ));
    }
    let endo = phi.clone();
    let endo_inv = phi.clone();
    Ok(CoverMap::builder("subgroup preimage (image structure)", space, space, MapClass::LowerMap)
        .apply(move |p| endo.preimage_of(&payload_subgroup(p)).into_payload())
        .inverse(move |p| endo_inv.image_of(&payload_subgroup(p)).into_payload())
        .build())
}

/// A shift over copies of a finite abelian group: the coproduct of the
/// unit-adjoined image-structure space over ℕ, shifted. Exposes the
/// canonical positive generator: the tuple carrying the full group at
/// index 0.
pub struct BernoulliShift {
    pub base: CoverSpace,
    pub space: CoverSpace,
    pub map: CoverMap,
    pub embed: CoverMap,
    pub generator: Cover,
}

/// Builds the shift system for `H^{⊕ℕ}`.
pub fn bernoulli_weiss_shift(h: &FinAbGroup) -> Result<BernoulliShift> {
    let base = adjoin_unit(&weiss_space(h));
    let base_map = CoverMap::identity(&base);
    let shift = shift_space_map(&base, IndexKind::Nat, &base_map)?;
    let full = Subgroup::full(h).into_payload();
    let generator = shift.space.cover(Payload::Sparse(vec![(0, full)]));
    Ok(BernoulliShift {
        base,
        space: shift.space,
        map: shift.map,
        embed: shift.embed,
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts() {
        assert_eq!(enumerate_subgroups(&FinAbGroup::cyclic(4).unwrap()).len(), 3);
        assert_eq!(enumerate_subgroups(&FinAbGroup::new(vec![2, 2]).unwrap()).len(), 5);
        assert_eq!(enumerate_subgroups(&FinAbGroup::cyclic(5).unwrap()).len(), 2);
        assert_eq!(enumerate_subgroups(&FinAbGroup::new(vec![2, 4]).unwrap()).len(), 8);
    }

    #[test]
    fn sum_and_norm_on_z4() {
        let g = FinAbGroup::cyclic(4).unwrap();
        let subs = enumerate_subgroups(&g);
        let two = subs.iter().find(|s| s.card() == 2).unwrap();
        let full = subs.iter().find(|s| s.card() == 4).unwrap();
        let sum = two.sum(full, &g);
        assert_eq!(sum.card(), 4);
    }

    #[test]
    fn times_two_on_z4_images() {
        let g = FinAbGroup::cyclic(4).unwrap();
        let phi = Endomorphism::scalar(&g, 2).unwrap();
        let full = Subgroup::full(&g);
        let img = phi.image_of(&full);
        assert_eq!(img.elements(), vec![0, 2]);
        assert!(!phi.injective);
    }

    #[test]
    fn times_three_on_z4_is_bijective() {
        let g = FinAbGroup::cyclic(4).unwrap();
        let phi = Endomorphism::scalar(&g, 3).unwrap();
        assert!(phi.injective && phi.surjective);
        let subs = enumerate_subgroups(&g);
        let two = subs.iter().find(|s| s.card() == 2).unwrap();
        assert_eq!(phi.preimage_of(two).elements(), vec![0, 2]);
    }

    #[test]
    fn order_cap_enforced() {
        assert!(FinAbGroup::with_cap(vec![64, 65], 4096).is_err());
    }

    #[test]
    fn matrix_well_definedness() {
        // Z2 ⊕ Z4: sending the Z2 generator to (0,1) is not well defined
        // because 2·(0,1) = (0,2) ≠ 0.
        let g = FinAbGroup::new(vec![2, 4]).unwrap();
        assert!(Endomorphism::new(&g, vec![vec![0, 0], vec![1, 1]]).is_err());
        // Sending it to (0,2) is fine.
        assert!(Endomorphism::new(&g, vec![vec![0, 0], vec![2, 1]]).is_ok());
    }
}
