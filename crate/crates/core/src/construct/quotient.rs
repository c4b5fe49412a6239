//! Quotient of a finite space by mutual refinement: classes of `~`, an
//! antisymmetric induced order, and a well-defined norm.

use crate::error::{EntError, Result};
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

/// Builds the quotient space of an enumerable cover space together with
/// the projection homomorphism. Representatives are the first enumeration
/// member of each class; the induced order is verified antisymmetric.
pub fn quotient_space(space: &CoverSpace) -> Result<(CoverSpace, CoverMap)> {
    let all = space.enumeration().ok_or(EntError::MissingEnumeration)?;

    let mut reps: Vec<Cover> = Vec::new();
    for c in &all {
        let mut found = false;
        for r in &reps {
            if space.equivalent(c, r)? {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(c.clone());
        }
    }

    // Antisymmetry of the induced order: distinct classes cannot refine
    // each other both ways, by construction — assert it anyway.
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            if i != j && space.refines(a, b)? && space.refines(b, a)? {
                return Err(EntError::invalid(
                    "quotient construction produced equivalent representatives",
                ));
            }
        }
    }

    let rep_payloads: Vec<Payload> =
        reps.iter().map(|c| c.payload().clone()).collect();

    let class_of = {
        let base = space.clone();
        let reps = rep_payloads.clone();
        move |p: &Payload| -> u32 {
            for (i, r) in reps.iter().enumerate() {
                if base.raw_refines(p, r) && base.raw_refines(r, p) {
                    return i as u32;
                }
            }
            panic!("element does not belong to any ~-class of the enumeration");
        }
    };

    let n_classes = reps.len();
    let refines_base = space.clone();
    let refines_reps = rep_payloads.clone();
    let meet_base = space.clone();
    let meet_reps = rep_payloads.clone();
    let meet_class = class_of.clone();
    let norm_base = space.clone();
    let norm_reps = rep_payloads.clone();

    let mut b = CoverSpace::builder(format!("{} / ~", space.name()))
        .refines(move |a, c| match (a, c) {
            (Payload::Atom(i), Payload::Atom(j)) => refines_base
                .raw_refines(&refines_reps[*i as usize], &refines_reps[*j as usize]),
            _ => false,
        })
        .meet(move |a, c| match (a, c) {
            (Payload::Atom(i), Payload::Atom(j)) => {
                let m = meet_base.raw_meet(&meet_reps[*i as usize], &meet_reps[*j as usize]);
                Payload::Atom(meet_class(&m))
            }
            _ => panic!("foreign payload in a quotient space"),
        })
        .try_norm(move |p| match p {
            Payload::Atom(i) => norm_base.raw_norm(&norm_reps[*i as usize]),
            _ => Ok(crate::extreal::ExtReal::Infinity),
        })
        .enumeration((0..n_classes as u32).map(Payload::Atom).collect())
        .meet_space(space.claims_meet_space())
        .commutative(space.claims_commutative());
    if let Some(u) = space.unit() {
        b = b.unit(Payload::Atom(class_of(u.payload())));
    }
    let quotient = b.build();

    let projection = CoverMap::builder(
        "projection to ~-classes",
        space,
        &quotient,
        MapClass::Homomorphism,
    )
    .apply(move |p| Payload::Atom(class_of(p)))
    .build();

    Ok((quotient, projection))
}

/// Quotient of a whole system: the space, the projection, and the induced
/// self-map `[α] ↦ [λα]` (well defined because monotone maps respect `~`).
pub fn quotient_system(
    space: &CoverSpace,
    map: &CoverMap,
) -> Result<(CoverSpace, CoverMap, CoverMap)> {
    if !map.is_self_map() || map.source().id() != space.id() {
        return Err(EntError::precondition("quotient_system expects a self-map"));
    }
    let (quotient, projection) = quotient_space(space)?;
    let reps: Vec<Payload> = quotient
        .enumeration()
        .expect("quotient of an enumerable space is enumerable")
        .iter()
        .enumerate()
        .map(|(i, _)| {
            // Representative payloads in the base space, rediscovered from
            // the projection: the i-th class representative is the first
            // base element projecting to Atom(i).
            let base_all = space.enumeration().expect("enumerable");
            base_all
                .into_iter()
                .find(|c| projection.raw_apply(c.payload()) == Payload::Atom(i as u32))
                .expect("every class has a representative")
                .into_payload()
        })
        .collect();
    let base_map = map.clone();
    let proj = projection.clone();
    let induced = CoverMap::builder(
        format!("{} on ~-classes", map.name()),
        &quotient,
        &quotient,
        map.declared_class(),
    )
    .apply(move |p| match p {
        Payload::Atom(i) => proj.raw_apply(&base_map.raw_apply(&reps[*i as usize])),
        other => other.clone(),
    })
    .build();
    Ok((quotient, projection, induced))
}
