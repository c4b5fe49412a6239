//! Unit adjunction: a fresh top element of norm 0.

use crate::map::CoverMap;
use crate::space::{Cover, CoverSpace, Payload};

/// Adjoins a top element: every element refines it, meets with it are
/// identities, and its norm is 0. All original relations are untouched.
/// Idempotent when the space's unit already is the distinguished adjoined
/// element.
pub fn adjoin_unit(space: &CoverSpace) -> CoverSpace {
    if space.unit().is_some_and(|u| u.payload() == &Payload::Unit) {
        return space.clone();
    }
    let base_r = space.clone();
    let base_m = space.clone();
    let base_n = space.clone();
    let mut b = CoverSpace::builder(format!("{} + unit", space.name()))
        .refines(move |a, c| match (a, c) {
            (_, Payload::Unit) => true,
            (Payload::Unit, _) => false,
            (x, y) => base_r.raw_refines(x, y),
        })
        .meet(move |a, c| match (a, c) {
            (Payload::Unit, y) => y.clone(),
            (x, Payload::Unit) => x.clone(),
            (x, y) => base_m.raw_meet(x, y),
        })
        .try_norm(move |p| match p {
            Payload::Unit => Ok(crate::extreal::ExtReal::ZERO),
            x => base_n.raw_norm(x),
        })
        .unit(Payload::Unit)
        .meet_space(space.claims_meet_space())
        .commutative(space.claims_commutative());
    if let Some(els) = space.enumeration() {
        let mut payloads: Vec<Payload> = els.into_iter().map(Cover::into_payload).collect();
        payloads.push(Payload::Unit);
        b = b.enumeration(payloads);
    }
    if space.has_cofinal_family() {
        let base = space.clone();
        b = b.cofinal(move |k| {
            base.cofinal_member(k).expect("cofinal family present").into_payload()
        });
    }
    b.build()
}

/// Lifts a self-map of the base space to the unit-adjoined space, sending
/// the new unit to itself; the declared class is unchanged.
pub fn lift_unital(adjoined: &CoverSpace, map: &CoverMap) -> CoverMap {
    let fwd = map.clone();
    let mut b = CoverMap::builder(
        format!("{} (unital)", map.name()),
        adjoined,
        adjoined,
        map.declared_class(),
    )
    .apply(move |p| match p {
        Payload::Unit => Payload::Unit,
        x => fwd.raw_apply(x),
    });
    if map.has_inverse() {
        let bwd = map.clone();
        b = b.inverse(move |p| match p {
            Payload::Unit => Payload::Unit,
            x => bwd.raw_unapply(x).expect("inverse present"),
        });
    }
    b.build()
}
