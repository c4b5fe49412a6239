//! Coproducts over an index line: finite-support tuples of a unital base
//! space, ordered and met componentwise, normed by the finite sum over the
//! support.

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

/// Index line of a coproduct or shift space.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IndexKind {
    Nat,
    Int,
}

impl IndexKind {
    pub fn admits(&self, i: i64) -> bool {
        match self {
            IndexKind::Nat => i >= 0,
            IndexKind::Int => true,
        }
    }
}

pub(crate) fn sparse_entries(p: &Payload) -> &[(i64, Payload)] {
    match p {
        Payload::Sparse(entries) => entries,
        _ => panic!("foreign payload in a coproduct space"),
    }
}

/// Canonical form: sorted by index, entries equal to the base unit
/// dropped.
pub(crate) fn normalize_sparse(mut entries: Vec<(i64, Payload)>, unit: &Payload) -> Payload {
    entries.retain(|(_, e)| e != unit);
    entries.sort_by_key(|(i, _)| *i);
    Payload::Sparse(entries)
}

/// Builds a finite-support tuple cover; indices must fit the index kind
/// and entries must be base payloads.
pub fn sparse_tuple(
    space: &CoverSpace,
    base: &CoverSpace,
    kind: IndexKind,
    entries: Vec<(i64, Cover)>,
) -> Result<Cover> {
    let unit = base.unit().ok_or(EntError::MissingUnit)?;
    let mut list = Vec::with_capacity(entries.len());
    let mut seen = std::collections::BTreeSet::new();
    for (i, c) in entries {
        if !kind.admits(i) {
            return Err(EntError::invalid(format!("index {i} not allowed on this line")));
        }
        if !seen.insert(i) {
            return Err(EntError::invalid(format!("duplicate index {i}")));
        }
        base.owns(&c)?;
        list.push((i, c.into_payload()));
    }
    Ok(space.cover(normalize_sparse(list, unit.payload())))
}

/// The coproduct space of countably many copies of a unital base along an
/// index line.
pub fn coproduct_space(base: &CoverSpace, kind: IndexKind) -> Result<CoverSpace> {
    let unit = base.unit().ok_or(EntError::MissingUnit)?.into_payload();
    let name = match kind {
        IndexKind::Nat => format!("⊕ℕ {}", base.name()),
        IndexKind::Int => format!("⊕ℤ {}", base.name()),
    };

    let refines_base = base.clone();
    let refines_unit = unit.clone();
    let meet_base = base.clone();
    let meet_unit = unit.clone();
    let norm_base = base.clone();

    let mut b = CoverSpace::builder(name)
        .refines(move |a, c| {
            let (ea, ec) = (sparse_entries(a), sparse_entries(c));
            let mut indices: Vec<i64> =
                ea.iter().map(|(i, _)| *i).chain(ec.iter().map(|(i, _)| *i)).collect();
            indices.sort_unstable();
            indices.dedup();
            indices.into_iter().all(|i| {
                let x = ea
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, e)| e)
                    .unwrap_or(&refines_unit);
                let y = ec
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, e)| e)
                    .unwrap_or(&refines_unit);
                refines_base.raw_refines(x, y)
            })
        })
        .meet(move |a, c| {
            let (ea, ec) = (sparse_entries(a), sparse_entries(c));
            let mut indices: Vec<i64> =
                ea.iter().map(|(i, _)| *i).chain(ec.iter().map(|(i, _)| *i)).collect();
            indices.sort_unstable();
            indices.dedup();
            let entries = indices
                .into_iter()
                .map(|i| {
                    let x = ea.iter().find(|(j, _)| *j == i).map(|(_, e)| e);
                    let y = ec.iter().find(|(j, _)| *j == i).map(|(_, e)| e);
                    let m = match (x, y) {
                        (Some(x), Some(y)) => meet_base.raw_meet(x, y),
                        (Some(x), None) => meet_base.raw_meet(x, &meet_unit),
                        (None, Some(y)) => meet_base.raw_meet(&meet_unit, y),
                        (None, None) => unreachable!("index came from one side"),
                    };
                    (i, m)
                })
                .collect();
            normalize_sparse(entries, &meet_unit)
        })
        .try_norm(move |p| {
            let mut acc = ExtReal::ZERO;
            for (_, e) in sparse_entries(p) {
                acc = acc + norm_base.raw_norm(e)?;
            }
            Ok(acc)
        })
        .unit(Payload::Sparse(vec![]))
        .meet_space(base.claims_meet_space())
        .commutative(base.claims_commutative());

    // Cofinal family: the finest enumerated base element repeated over a
    // growing index range (or the base's own cofinal member when the base
    // is not enumerable but exposes an increasing cofinal family).
    let finest = base.enumeration().map(|els| {
        els.iter()
            .map(|c| c.payload().clone())
            .reduce(|x, y| base.raw_meet(&x, &y))
            .expect("non-empty enumeration")
    });
    let cof_base = base.clone();
    let cof_unit = unit.clone();
    if finest.is_some() || base.has_cofinal_family() {
        b = b.cofinal(move |k| {
            let entry = |k: u32| -> Payload {
                match &finest {
                    Some(f) => f.clone(),
                    None => cof_base
                        .cofinal_member(k)
                        .expect("cofinal family present")
                        .into_payload(),
                }
            };
            let range: Vec<i64> = match kind {
                IndexKind::Nat => (0..=k as i64).collect(),
                IndexKind::Int => (-(k as i64)..=k as i64).collect(),
            };
            let entries: Vec<(i64, Payload)> =
                range.into_iter().map(|i| (i, entry(k))).collect();
            normalize_sparse(entries, &cof_unit)
        });
    }
    Ok(b.build())
}

/// Induced coproduct of one unital self-map acting on every coordinate.
pub fn coproduct_map(space: &CoverSpace, base: &CoverSpace, base_map: &CoverMap) -> Result<CoverMap> {
    let unit = base.unit().ok_or(EntError::MissingUnit)?;
    let image = base_map.apply(&unit)?;
    if !(base.equivalent(&image, &unit)?) {
        return Err(EntError::precondition("coproduct needs a unital base map"));
    }
    let fwd = base_map.clone();
    let fwd_unit = unit.payload().clone();
    let mut b = CoverMap::builder(
        format!("⊕ {}", base_map.name()),
        space,
        space,
        base_map.declared_class(),
    )
    .apply(move |p| {
        let entries =
            sparse_entries(p).iter().map(|(i, e)| (*i, fwd.raw_apply(e))).collect();
        normalize_sparse(entries, &fwd_unit)
    });
    if base_map.has_inverse() {
        let bwd = base_map.clone();
        let bwd_unit = unit.payload().clone();
        b = b.inverse(move |p| {
            let entries = sparse_entries(p)
                .iter()
                .map(|(i, e)| (*i, bwd.raw_unapply(e).expect("inverse present")))
                .collect();
            normalize_sparse(entries, &bwd_unit)
        });
    }
    Ok(b.build())
}

/// Canonical injection of the base at one index: a homomorphism.
pub fn coproduct_injection(
    space: &CoverSpace,
    base: &CoverSpace,
    kind: IndexKind,
    index: i64,
) -> Result<CoverMap> {
    if !kind.admits(index) {
        return Err(EntError::invalid(format!("index {index} not allowed on this line")));
    }
    let unit = base.unit().ok_or(EntError::MissingUnit)?.into_payload();
    Ok(CoverMap::builder(
        format!("inject @ {index}"),
        base,
        space,
        MapClass::Homomorphism,
    )
    .apply(move |p| normalize_sparse(vec![(index, p.clone())], &unit))
    .build())
}

/// Every finite-support tuple with support inside `indices` and entries
/// drawn from `entries` (the base unit standing for "absent"). The
/// canonical target family for generator searches on coproducts.
pub fn finite_support_tuples(
    space: &CoverSpace,
    base: &CoverSpace,
    indices: &[i64],
    entries: &[Cover],
) -> Result<Vec<Cover>> {
    let unit = base.unit().ok_or(EntError::MissingUnit)?.into_payload();
    for c in entries {
        base.owns(c)?;
    }
    let mut tuples: Vec<Vec<(i64, Payload)>> = vec![Vec::new()];
    for &i in indices {
        let mut next = Vec::with_capacity(tuples.len() * (entries.len() + 1));
        for t in &tuples {
            next.push(t.clone());
            for e in entries {
                if e.payload() == &unit {
                    continue;
                }
                let mut t2 = t.clone();
                t2.push((i, e.payload().clone()));
                next.push(t2);
            }
        }
        tuples = next;
    }
    Ok(tuples
        .into_iter()
        .map(|t| space.cover(normalize_sparse(t, &unit)))
        .collect())
}
