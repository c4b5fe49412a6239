//! Open covers of finite topological spaces, with exact `H` and `D` norms.
//!
//! `N(α)` (minimum subcover size) is computed by branch and bound seeded
//! with a greedy upper bound; `D(α)` (minimum order over refining covers)
//! searches all covers drawn from the topology's open sets with pruning by
//! the current best. Both honor a step budget.

use std::fmt;
use std::sync::Arc;

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

/// Norm choice for a topological cover space.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TopoNorm {
    /// `H(α) = log N(α)`.
    H,
    /// `D(α) = min{ord(β) : β ≺ α}` as a real value.
    D,
}

/// A topology on points `{0, …, n−1}`, opens as bitsets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteTopology {
    n: usize,
    opens: Vec<u64>,
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "topology on {} points, {} opens", self.n, self.opens.len())
    }
}

impl FiniteTopology {
    /// Builds and validates: must contain ∅ and the full set and be closed
    /// under pairwise union and intersection (which suffices for finite
    /// families).
    pub fn new(n: usize, mut opens: Vec<u64>) -> Result<FiniteTopology> {
        if n == 0 || n > 16 {
            return Err(EntError::invalid("point count must be in 1..=16"));
        }
        let full = full_mask(n);
        if opens.iter().any(|&o| o & !full != 0) {
            return Err(EntError::invalid("an open set mentions a point outside the space"));
        }
        opens.push(0);
        opens.push(full);
        opens.sort_unstable();
        opens.dedup();
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                for c in [a | b, a & b] {
                    if opens.binary_search(&c).is_err() {
                        return Err(EntError::invalid(format!(
                            "family not closed: {a:#b} and {b:#b} produce {c:#b}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteTopology { n, opens })
    }

    pub fn discrete(n: usize) -> FiniteTopology {
        let mut opens: Vec<u64> = (0..(1u64 << n)).collect();
        opens.sort_unstable();
        FiniteTopology { n, opens }
    }

    pub fn indiscrete(n: usize) -> FiniteTopology {
        FiniteTopology { n, opens: vec![0, full_mask(n)] }
    }

    /// Two points with opens `{∅, {0}, {0,1}}`.
    pub fn sierpinski() -> FiniteTopology {
        FiniteTopology { n: 2, opens: vec![0, 0b01, 0b11] }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn full(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn is_open(&self, set: u64) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    /// Relative topology on a point subset, with points renumbered in
    /// increasing order.
    pub fn subspace(&self, subset: u64) -> Result<(FiniteTopology, Vec<usize>)> {
        let points: Vec<usize> = (0..self.n).filter(|&p| subset & (1 << p) != 0).collect();
        if points.is_empty() {
            return Err(EntError::invalid("subspace must be non-empty"));
        }
        let compress = |set: u64| -> u64 {
            points
                .iter()
                .enumerate()
                .filter(|(_, &p)| set & (1 << p) != 0)
                .fold(0u64, |acc, (q, _)| acc | (1 << q))
        };
        let mut opens: Vec<u64> = self.opens.iter().map(|&o| compress(o & subset)).collect();
        opens.sort_unstable();
        opens.dedup();
        Ok((FiniteTopology { n: points.len(), opens }, points))
    }
}

pub fn full_mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

/// All topologies on `n` points (brute force; intended for n ≤ 4).
pub fn enumerate_topologies(n: usize) -> Vec<FiniteTopology> {
    assert!(n <= 4, "topology enumeration is desk-scale only");
    let full = full_mask(n);
    let candidates: Vec<u64> = (1..full).collect();
    let mut out = Vec::new();
    for bits in 0..(1u64 << candidates.len()) {
        let mut opens = vec![0u64, full];
        for (idx, &c) in candidates.iter().enumerate() {
            if bits & (1 << idx) != 0 {
                opens.push(c);
            }
        }
        opens.sort_unstable();
        let closed = {
            let mut ok = true;
            'pairs: for (i, &a) in opens.iter().enumerate() {
                for &b in &opens[i + 1..] {
                    if opens.binary_search(&(a | b)).is_err()
                        || opens.binary_search(&(a & b)).is_err()
                    {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            ok
        };
        if closed {
            out.push(FiniteTopology { n, opens });
        }
    }
    out
}

fn payload_sets(p: &Payload) -> &[u64] {
    match p {
        Payload::Sets(sets) => sets,
        _ => panic!("foreign payload in a topological cover space"),
    }
}

fn canonical_family(mut sets: Vec<u64>) -> Vec<u64> {
    sets.retain(|&s| s != 0);
    sets.sort_unstable();
    sets.dedup();
    sets
}

/// Validates that a family of sets is an open cover of the topology.
pub fn validate_cover(topology: &FiniteTopology, sets: &[u64]) -> Result<Vec<u64>> {
    let sets = canonical_family(sets.to_vec());
    if sets.is_empty() {
        return Err(EntError::invalid("a cover needs at least one non-empty member"));
    }
    for &s in &sets {
        if !topology.is_open(s) {
            return Err(EntError::invalid(format!("member {s:#b} is not open")));
        }
    }
    let union = sets.iter().fold(0u64, |acc, &s| acc | s);
    if union != topology.full() {
        return Err(EntError::invalid("members do not cover the space"));
    }
    Ok(sets)
}

/// Exact minimum subcover cardinality, by branch and bound from a greedy
/// seed.
pub fn cover_n(topology: &FiniteTopology, sets: &[u64], budget: u64) -> Result<u64> {
    let full = topology.full();
    // Greedy upper bound.
    let mut chosen = 0usize;
    let mut covered = 0u64;
    while covered != full {
        let best = sets
            .iter()
            .max_by_key(|&&s| (s & !covered).count_ones())
            .copied()
            .unwrap_or(0);
        if best & !covered == 0 {
            return Err(EntError::invalid("family does not cover the space"));
        }
        covered |= best;
        chosen += 1;
    }
    let mut best = chosen as u64;
    let mut steps = 0u64;
    // Depth-first search branching on the least-covered point.
    fn dfs(
        sets: &[u64],
        full: u64,
        covered: u64,
        used: u64,
        best: &mut u64,
        steps: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *steps += 1;
        if *steps > budget {
            return Err(EntError::BudgetExceeded { budget, operation: "cover_n" });
        }
        if covered == full {
            *best = (*best).min(used);
            return Ok(());
        }
        if used + 1 >= *best {
            return Ok(());
        }
        let uncovered = full & !covered;
        let point = uncovered.trailing_zeros();
        for &s in sets {
            if s & (1 << point) != 0 {
                dfs(sets, full, covered | s, used + 1, best, steps, budget)?;
            }
        }
        Ok(())
    }
    dfs(sets, full, 0, 0, &mut best, &mut steps, budget)?;
    Ok(best)
}

/// `H(α) = log N(α)`.
pub fn cover_h(topology: &FiniteTopology, sets: &[u64], budget: u64) -> Result<ExtReal> {
    Ok(ExtReal::log_count_u64(cover_n(topology, sets, budget)?))
}

/// `ord(α)`: the largest number of members sharing a point, minus one.
/// For families of distinct sets this equals the maximum size of a
/// subfamily with non-empty intersection, at linear cost.
pub fn cover_ord(n_points: usize, sets: &[u64]) -> u64 {
    let mut best = 0u64;
    for p in 0..n_points {
        let mult = sets.iter().filter(|&&s| s & (1 << p) != 0).count() as u64;
        best = best.max(mult);
    }
    best.saturating_sub(1)
}

/// `D(α)`: minimum `ord(β)` over open covers `β ≺ α` drawn from the whole
/// topology, by pruned search.
pub fn cover_d(topology: &FiniteTopology, sets: &[u64], budget: u64) -> Result<u64> {
    // Usable opens: non-empty and inside some member of α.
    let usable: Vec<u64> = topology
        .opens()
        .iter()
        .copied()
        .filter(|&o| o != 0 && sets.iter().any(|&a| o & !a == 0))
        .collect();
    let full = topology.full();
    let union = usable.iter().fold(0u64, |acc, &s| acc | s);
    if union != full {
        return Err(EntError::invalid(
            "no refining cover exists inside the topology (family is not a cover)",
        ));
    }
    let mut best = u64::MAX;
    let mut steps = 0u64;
    let n = topology.points();
    fn ord_of(n: usize, family: &[u64]) -> u64 {
        cover_ord(n, family)
    }
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        n: usize,
        usable: &[u64],
        full: u64,
        family: &mut Vec<u64>,
        covered: u64,
        best: &mut u64,
        steps: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *steps += 1;
        if *steps > budget {
            return Err(EntError::BudgetExceeded { budget, operation: "cover_d" });
        }
        let current = ord_of(n, family);
        if current >= *best && *best != u64::MAX {
            return Ok(());
        }
        if covered == full {
            *best = (*best).min(current);
            return Ok(());
        }
        let uncovered = full & !covered;
        let point = uncovered.trailing_zeros();
        for &s in usable {
            if s & (1 << point) != 0 && !family.contains(&s) {
                family.push(s);
                dfs(n, usable, full, family, covered | s, best, steps, budget)?;
                family.pop();
            }
        }
        Ok(())
    }
    let mut family = Vec::new();
    dfs(n, &usable, full, &mut family, 0, &mut best, &mut steps, budget)?;
    Ok(best)
}

/// All covers made of maximal members (one canonical representative per
/// mutual-refinement class).
pub fn enumerate_irredundant_covers(topology: &FiniteTopology) -> Vec<Vec<u64>> {
    let opens: Vec<u64> = topology.opens().iter().copied().filter(|&o| o != 0).collect();
    let full = topology.full();
    let mut out = Vec::new();
    let m = opens.len();
    assert!(m <= 20, "cover enumeration is desk-scale only");
    'subset: for bits in 1u64..(1 << m) {
        let family: Vec<u64> = (0..m).filter(|&i| bits & (1 << i) != 0).map(|i| opens[i]).collect();
        let union = family.iter().fold(0u64, |acc, &s| acc | s);
        if union != full {
            continue;
        }
        // Antichain: no member inside another.
        for (i, &a) in family.iter().enumerate() {
            for (j, &b) in family.iter().enumerate() {
                if i != j && a & !b == 0 {
                    continue 'subset;
                }
            }
        }
        out.push(family);
    }
    out.sort();
    out
}

/// `dim(X)`: the supremum of `D(α)` over irredundant covers.
pub fn covering_dimension(topology: &FiniteTopology, budget: u64) -> Result<u64> {
    let mut dim = 0;
    for cover in enumerate_irredundant_covers(topology) {
        dim = dim.max(cover_d(topology, &cover, budget)?);
    }
    Ok(dim)
}

/// The open-cover entropy space of a finite topology with the chosen norm.
/// Enumeration lists one representative per `~`-class (the antichain
/// covers); the norm search honors `norm_budget` per evaluation.
pub fn topo_entropy_space(
    topology: &FiniteTopology,
    norm: TopoNorm,
    norm_budget: u64,
) -> CoverSpace {
    let topo = Arc::new(topology.clone());
    let name = format!(
        "open covers of {} ({})",
        topo,
        match norm {
            TopoNorm::H => "H",
            TopoNorm::D => "D",
        }
    );
    let enumeration: Vec<Payload> = enumerate_irredundant_covers(topology)
        .into_iter()
        .map(Payload::Sets)
        .collect();
    let norm_topo = topo.clone();
    CoverSpace::builder(name)
        .refines(|a, b| {
            let (fa, fb) = (payload_sets(a), payload_sets(b));
            fa.iter().all(|&x| fb.iter().any(|&y| x & !y == 0))
        })
        .meet(|a, b| {
            let (fa, fb) = (payload_sets(a), payload_sets(b));
            let mut sets = Vec::with_capacity(fa.len() * fb.len());
            for &x in fa {
                for &y in fb {
                    sets.push(x & y);
                }
            }
            Payload::Sets(canonical_family(sets))
        })
        .try_norm(move |p| {
            let sets = payload_sets(p);
            match norm {
                TopoNorm::H => cover_h(&norm_topo, sets, norm_budget),
                TopoNorm::D => {
                    cover_d(&norm_topo, sets, norm_budget).map(|d| ExtReal::Finite(d as f64))
                }
            }
        })
        .unit(Payload::Sets(vec![full_mask(topology.points())]))
        .enumeration(enumeration)
        .meet_space(true)
        .commutative(true)
        .build()
}

/// A cover of the space from explicit point sets.
pub fn open_cover(
    space: &CoverSpace,
    topology: &FiniteTopology,
    sets: &[u64],
) -> Result<Cover> {
    Ok(space.cover(Payload::Sets(validate_cover(topology, sets)?)))
}

/// A self-map of the point set with its topological behavior.
#[derive(Clone, Debug)]
pub struct PointMap {
    pub table: Vec<usize>,
    pub continuous: bool,
    pub open: bool,
    pub onto: bool,
}

impl PointMap {
    pub fn new(topology: &FiniteTopology, table: Vec<usize>) -> Result<PointMap> {
        let n = topology.points();
        if table.len() != n || table.iter().any(|&q| q >= n) {
            return Err(EntError::invalid("point map must send points to points"));
        }
        let image = |set: u64| -> u64 {
            (0..n)
                .filter(|&p| set & (1 << p) != 0)
                .fold(0u64, |acc, p| acc | (1 << table[p]))
        };
        let preimage = |set: u64| -> u64 {
            (0..n)
                .filter(|&p| set & (1 << table[p]) != 0)
                .fold(0u64, |acc, p| acc | (1 << p))
        };
        let continuous = topology.opens().iter().all(|&o| topology.is_open(preimage(o)));
        let open = topology.opens().iter().all(|&o| topology.is_open(image(o)));
        let onto = image(topology.full()) == topology.full();
        Ok(PointMap { table, continuous, open, onto })
    }

    pub fn image(&self, set: u64) -> u64 {
        self.table
            .iter()
            .enumerate()
            .filter(|(p, _)| set & (1 << p) != 0)
            .fold(0u64, |acc, (_, &q)| acc | (1 << q))
    }

    pub fn preimage(&self, set: u64) -> u64 {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &q)| set & (1 << q) != 0)
            .fold(0u64, |acc, (p, _)| acc | (1 << p))
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = 0u64;
        for &q in &self.table {
            seen |= 1 << q;
        }
        seen.count_ones() as usize == self.table.len()
    }
}

/// The preimage map `α ↦ T⁻¹α` on open covers of a continuous `T`: a lower
/// morphism; an isomorphism when `T` is a continuous open bijection.
pub fn preimage_map(space: &CoverSpace, t: &PointMap) -> Result<CoverMap> {
    if !t.continuous {
        return Err(EntError::precondition("preimage map needs a continuous T"));
    }
    let invertible = t.is_bijective() && t.open;
    let declared = if invertible {
        MapClass::Isomorphism
    } else {
        MapClass::LowerMorphism
    };
    let fwd = t.clone();
    let mut b = CoverMap::builder("preimage", space, space, declared).apply(move |p| {
        Payload::Sets(canonical_family(
            payload_sets(p).iter().map(|&s| fwd.preimage(s)).collect(),
        ))
    });
    if invertible {
        let bwd = t.clone();
        b = b.inverse(move |p| {
            Payload::Sets(canonical_family(
                payload_sets(p).iter().map(|&s| bwd.image(s)).collect(),
            ))
        });
    }
    Ok(b.build())
}

/// The forward-image map `α ↦ Tα` on open covers of an open onto `T`: a
/// lower map.
pub fn forward_map(space: &CoverSpace, t: &PointMap) -> Result<CoverMap> {
    if !t.open || !t.onto {
        return Err(EntError::precondition("forward map needs an open onto T"));
    }
    let fwd = t.clone();
    Ok(CoverMap::builder("forward image", space, space, MapClass::LowerMap)
        .apply(move |p| {
            Payload::Sets(canonical_family(
                payload_sets(p).iter().map(|&s| fwd.image(s)).collect(),
            ))
        })
        .build())
}

/// Restriction of covers to an extension-closed subspace, as a map between
/// the two cover spaces (`α ↦ α ∧ Y`). Point indices are renumbered by
/// `point_order` as produced by [`FiniteTopology::subspace`].
pub fn restriction_map(
    space: &CoverSpace,
    sub_space: &CoverSpace,
    subset: u64,
    point_order: &[usize],
) -> CoverMap {
    let order = point_order.to_vec();
    let compress = move |set: u64| -> u64 {
        order
            .iter()
            .enumerate()
            .filter(|(_, &p)| set & (1 << p) != 0)
            .fold(0u64, |acc, (q, _)| acc | (1 << q))
    };
    CoverMap::builder("restrict", space, sub_space, MapClass::LowerMorphism)
        .apply(move |p| {
            Payload::Sets(canonical_family(
                payload_sets(p).iter().map(|&s| compress(s & subset)).collect(),
            ))
        })
        .build()
}

/// Whether a subspace is extension closed: every open cover of the
/// subspace is the trace (member-wise restriction, empty traces dropped)
/// of some open cover of the whole space. Checked exhaustively: for each
/// cover `β` of the subspace, the maximal candidate family — all opens
/// whose trace lies in `β` or is empty — must cover `X` and realize every
/// member of `β`.
pub fn is_extension_closed(
    topology: &FiniteTopology,
    sub: &FiniteTopology,
    subset: u64,
    point_order: &[usize],
) -> bool {
    let compress = |set: u64| -> u64 {
        point_order
            .iter()
            .enumerate()
            .filter(|(_, &p)| set & (1 << p) != 0)
            .fold(0u64, |acc, (q, _)| acc | (1 << q))
    };
    let sub_opens: Vec<u64> = sub.opens().iter().copied().filter(|&o| o != 0).collect();
    let m = sub_opens.len();
    assert!(m <= 20, "extension-closedness check is desk-scale only");
    let sub_full = full_mask(sub.points());
    for bits in 1u64..(1 << m) {
        let beta: Vec<u64> =
            (0..m).filter(|&i| bits & (1 << i) != 0).map(|i| sub_opens[i]).collect();
        if beta.iter().fold(0u64, |acc, &s| acc | s) != sub_full {
            continue;
        }
        let mut union = 0u64;
        let mut realized = vec![false; beta.len()];
        for &o in topology.opens() {
            let trace = compress(o & subset);
            if trace == 0 {
                union |= o;
            } else if let Some(idx) = beta.iter().position(|&b| b == trace) {
                union |= o;
                realized[idx] = true;
            }
        }
        if union != topology.full() || realized.iter().any(|&r| !r) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_maps_are_continuous_and_open() {
        let t = FiniteTopology::discrete(3);
        let m = PointMap::new(&t, vec![1, 2, 0]).unwrap();
        assert!(m.continuous && m.open && m.onto);
        let c = PointMap::new(&t, vec![1, 1, 1]).unwrap();
        assert!(c.continuous && c.open && !c.onto);
    }

    #[test]
    fn forward_map_requires_open_onto() {
        let t = FiniteTopology::discrete(3);
        let sp = topo_entropy_space(&t, TopoNorm::H, 10_000);
        // Constant map: open (discrete) but not onto.
        let constant = PointMap::new(&t, vec![1, 1, 1]).unwrap();
        assert!(forward_map(&sp, &constant).is_err());
        let cycle = PointMap::new(&t, vec![1, 2, 0]).unwrap();
        assert!(forward_map(&sp, &cycle).is_ok());
    }

    #[test]
    fn sierpinski_constant_map_not_open() {
        // t = constant 1: preimages are ∅ or everything (continuous);
        // image of the open {0} is {1}, which is not open.
        let t = FiniteTopology::sierpinski();
        let m = PointMap::new(&t, vec![1, 1]).unwrap();
        assert!(m.continuous);
        assert!(!m.open);
    }

    #[test]
    fn invalid_family_rejected() {
        assert!(FiniteTopology::new(2, vec![0b01, 0b10]).is_ok());
        // {∅, {0}, {1}, X} is closed; {∅, {0}, {1}} without the union is
        // normalized by adding X, so break closure differently: on 3
        // points, {0,1} and {1,2} without their intersection {1}.
        assert!(FiniteTopology::new(3, vec![0b011, 0b110]).is_err());
    }

    #[test]
    fn cover_n_examples() {
        let t = FiniteTopology::discrete(3);
        // {X} alone.
        assert_eq!(cover_n(&t, &[0b111], 1000).unwrap(), 1);
        // Three doubletons: any two cover.
        assert_eq!(cover_n(&t, &[0b011, 0b110, 0b101], 1000).unwrap(), 2);
        // X among redundant members.
        assert_eq!(cover_n(&t, &[0b001, 0b111, 0b010], 1000).unwrap(), 1);
    }

    #[test]
    fn ord_examples() {
        assert_eq!(cover_ord(3, &[0b001, 0b010, 0b100]), 0);
        assert_eq!(cover_ord(3, &[0b011, 0b110]), 1);
        assert_eq!(cover_ord(3, &[0b111]), 0);
    }

    #[test]
    fn d_examples() {
        let t = FiniteTopology::discrete(3);
        assert_eq!(cover_d(&t, &[0b011, 0b110], 10_000).unwrap(), 0);
        let s = FiniteTopology::sierpinski();
        assert_eq!(cover_d(&s, &[0b11], 10_000).unwrap(), 0);
    }

    #[test]
    fn dimensions_are_zero_at_desk_scale() {
        assert_eq!(covering_dimension(&FiniteTopology::discrete(3), 100_000).unwrap(), 0);
        assert_eq!(covering_dimension(&FiniteTopology::sierpinski(), 100_000).unwrap(), 0);
        assert_eq!(covering_dimension(&FiniteTopology::indiscrete(2), 100_000).unwrap(), 0);
    }

    #[test]
    fn three_point_topology_count() {
        assert_eq!(enumerate_topologies(3).len(), 29);
    }
}
