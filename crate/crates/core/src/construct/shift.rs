//! Shift dynamics on coproduct spaces: `(αᵢ) ↦ (λα_{i−1})`, with the
//! convention `α₋₁ = unit` on the ℕ line.

use crate::construct::coproduct::{
    coproduct_space, normalize_sparse, sparse_entries, IndexKind,
};
use crate::error::{EntError, Result};
use crate::map::{CoverMap, MapClass};
use crate::space::CoverSpace;

/// A shift system: the coproduct space, the shift map, and the embedding
/// of the base at index 0.
pub struct ShiftSystem {
    pub space: CoverSpace,
    pub map: CoverMap,
    pub embed: CoverMap,
}

/// Builds the shift `s_λ` over a unital base with a unital base map. On
/// the ℤ line the base map must be invertible, and the shift is too.
pub fn shift_space_map(
    base: &CoverSpace,
    kind: IndexKind,
    base_map: &CoverMap,
) -> Result<ShiftSystem> {
    let unit = base.unit().ok_or(EntError::MissingUnit)?;
    let image = base_map.apply(&unit)?;
    if !(base.equivalent(&image, &unit)?) {
        return Err(EntError::precondition("shift needs a unital base map"));
    }
    if kind == IndexKind::Int && !base_map.has_inverse() {
        return Err(EntError::precondition(
            "a shift over ℤ needs an invertible base map",
        ));
    }
    let space = coproduct_space(base, kind)?;

    // The pure shift is a homomorphism (an isomorphism on ℤ); composing
    // with the coordinatewise λ keeps the weaker of the two classes.
    let shift_class = match kind {
        IndexKind::Nat => MapClass::Homomorphism,
        IndexKind::Int => MapClass::Isomorphism,
    };
    let declared = shift_class.meet(base_map.declared_class());

    let fwd = base_map.clone();
    let fwd_unit = unit.payload().clone();
    let mut b = CoverMap::builder("shift", &space, &space, declared).apply(move |p| {
        let entries = sparse_entries(p)
            .iter()
            .map(|(i, e)| (i + 1, fwd.raw_apply(e)))
            .collect();
        normalize_sparse(entries, &fwd_unit)
    });
    if kind == IndexKind::Int && base_map.has_inverse() {
        let bwd = base_map.clone();
        let bwd_unit = unit.payload().clone();
        b = b.inverse(move |p| {
            let entries = sparse_entries(p)
                .iter()
                .map(|(i, e)| (i - 1, bwd.raw_unapply(e).expect("inverse present")))
                .collect();
            normalize_sparse(entries, &bwd_unit)
        });
    }
    let map = b.build();

    let embed_unit = unit.payload().clone();
    let embed = CoverMap::builder("embed @ 0", base, &space, MapClass::Homomorphism)
        .apply(move |p| normalize_sparse(vec![(0, p.clone())], &embed_unit))
        .build();

    Ok(ShiftSystem { space, map, embed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::unit::adjoin_unit;
    use crate::fixtures;
    use crate::space::Payload;

    #[test]
    fn shift_moves_support_and_applies_base_map() {
        let spec = fixtures::diamond();
        let base = spec.build().unwrap();
        let adjoined = adjoin_unit(&base);
        let sys =
            shift_space_map(&adjoined, IndexKind::Nat, &CoverMap::identity(&adjoined)).unwrap();
        let a = adjoined.cover(Payload::Atom(1));
        let abar = sys.embed.apply(&a).unwrap();
        assert_eq!(abar.payload(), &Payload::Sparse(vec![(0, Payload::Atom(1))]));
        let shifted = sys.map.apply(&abar).unwrap();
        assert_eq!(shifted.payload(), &Payload::Sparse(vec![(1, Payload::Atom(1))]));
    }

    #[test]
    fn trajectory_of_embedded_cover_lays_out_iterates() {
        let spec = fixtures::diamond();
        let base = spec.build().unwrap();
        let adjoined = adjoin_unit(&base);
        let sys =
            shift_space_map(&adjoined, IndexKind::Nat, &CoverMap::identity(&adjoined)).unwrap();
        let a = adjoined.cover(Payload::Atom(1));
        let abar = sys.embed.apply(&a).unwrap();
        let t = crate::entropy::trajectory_meet(&sys.space, &sys.map, &abar, 0, 2).unwrap();
        assert_eq!(
            t.payload(),
            &Payload::Sparse(vec![
                (0, Payload::Atom(1)),
                (1, Payload::Atom(1)),
                (2, Payload::Atom(1)),
            ])
        );
    }
}
