//! Direct limits over a finite directed index poset.
//!
//! With finitely many indices and all pairs bounded above, the poset has a
//! top index; classes are decided by pushing representatives there through
//! the coherent homomorphisms. The carrier keeps `(index, element)` tags
//! so the canonical maps are plain injections and norms are read at the
//! original index (well-definedness is a checked property, not an
//! assumption).

use crate::error::{EntError, Result};
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

/// A finite directed system of enumerable entropy spaces with compatible
/// self-maps.
pub struct DirectedSystem {
    /// `order[i][j]` ⇔ `i ≤ j`; must be a partial order with all pairs
    /// bounded above.
    pub order: Vec<Vec<bool>>,
    pub spaces: Vec<CoverSpace>,
    /// Self-maps `λᵢ`, one per index.
    pub maps: Vec<CoverMap>,
    /// Coherent homomorphisms `φ_ij` for the strict relations `i < j`
    /// (identities are implicit).
    pub homs: Vec<(usize, usize, CoverMap)>,
}

pub struct DirectLimit {
    pub space: CoverSpace,
    pub map: CoverMap,
    /// Canonical homomorphisms `Cᵢ → lim`.
    pub canonical: Vec<CoverMap>,
    /// The top index every class is pushed to.
    pub top: usize,
}

struct Pusher {
    top: usize,
    /// `route[i]` applies `φ_{i,top}` to a payload.
    homs: Vec<Option<CoverMap>>,
}

impl Pusher {
    fn push(&self, idx: usize, p: &Payload) -> Payload {
        if idx == self.top {
            return p.clone();
        }
        self.homs[idx]
            .as_ref()
            .expect("validated: hom to top exists")
            .raw_apply(p)
    }
}

fn tagged(p: &Payload) -> (usize, &Payload) {
    match p {
        Payload::Tagged(i, inner) => (*i as usize, inner),
        _ => panic!("foreign payload in a direct-limit space"),
    }
}

/// Builds the direct limit, validating the poset, coherence of the
/// homomorphisms and compatibility of the self-maps exhaustively over the
/// enumerations.
pub fn direct_limit(sys: &DirectedSystem) -> Result<DirectLimit> {
    let n = sys.spaces.len();
    if n == 0 {
        return Err(EntError::precondition("direct limit needs at least one index"));
    }
    if sys.order.len() != n
        || sys.order.iter().any(|r| r.len() != n)
        || sys.maps.len() != n
    {
        return Err(EntError::invalid("system tables do not match the index count"));
    }
    // Partial order checks.
    for i in 0..n {
        if !sys.order[i][i] {
            return Err(EntError::invalid("index order must be reflexive"));
        }
        for j in 0..n {
            if i != j && sys.order[i][j] && sys.order[j][i] {
                return Err(EntError::invalid("index order must be antisymmetric"));
            }
            for k in 0..n {
                if sys.order[i][j] && sys.order[j][k] && !sys.order[i][k] {
                    return Err(EntError::invalid("index order must be transitive"));
                }
            }
        }
    }
    // Directedness and a top index.
    let mut top = 0usize;
    for i in 1..n {
        let bound = (0..n).find(|&k| sys.order[top][k] && sys.order[i][k]);
        top = bound.ok_or_else(|| {
            EntError::invalid(format!("indices {top} and {i} have no upper bound"))
        })?;
    }

    let hom = |i: usize, j: usize| -> Result<Option<CoverMap>> {
        if i == j {
            return Ok(Some(CoverMap::identity(&sys.spaces[i])));
        }
        for (a, b, m) in &sys.homs {
            if *a == i && *b == j {
                return Ok(Some(m.clone()));
            }
        }
        if sys.order[i][j] {
            return Err(EntError::invalid(format!("missing homomorphism {i} → {j}")));
        }
        Ok(None)
    };

    let enums: Vec<Vec<Cover>> = sys
        .spaces
        .iter()
        .map(|s| s.enumeration().ok_or(EntError::MissingEnumeration))
        .collect::<Result<_>>()?;

    // Coherence: φ_jk ∘ φ_ij = φ_ik on every element, for i ≤ j ≤ k.
    for i in 0..n {
        for j in 0..n {
            if !sys.order[i][j] {
                continue;
            }
            for k in 0..n {
                if !sys.order[j][k] {
                    continue;
                }
                let f_ij = hom(i, j)?.expect("order holds");
                let f_jk = hom(j, k)?.expect("order holds");
                let f_ik = hom(i, k)?.expect("transitive order");
                for x in &enums[i] {
                    let via = f_jk.apply(&f_ij.apply(x)?)?;
                    let direct = f_ik.apply(x)?;
                    if via.payload() != direct.payload() {
                        return Err(EntError::invalid(format!(
                            "homomorphisms are not coherent at {i}≤{j}≤{k} on {x}"
                        )));
                    }
                }
            }
        }
    }
    // Compatibility: φ_ij ∘ λᵢ = λⱼ ∘ φ_ij.
    for i in 0..n {
        for j in 0..n {
            if !sys.order[i][j] || i == j {
                continue;
            }
            let f = hom(i, j)?.expect("order holds");
            for x in &enums[i] {
                let lhs = f.apply(&sys.maps[i].apply(x)?)?;
                let rhs = sys.maps[j].apply(&f.apply(x)?)?;
                if lhs.payload() != rhs.payload() {
                    return Err(EntError::invalid(format!(
                        "self-maps are incompatible with φ_{i}{j} at {x}"
                    )));
                }
            }
        }
    }

    let mut routes = Vec::with_capacity(n);
    for i in 0..n {
        routes.push(hom(i, top)?);
    }
    let pusher = std::sync::Arc::new(Pusher { top, homs: routes });

    let top_space = sys.spaces[top].clone();
    let refines_push = pusher.clone();
    let refines_top = top_space.clone();
    let meet_push = pusher.clone();
    let meet_top = top_space.clone();
    let norm_spaces: Vec<CoverSpace> = sys.spaces.to_vec();

    let enumeration: Vec<Payload> = enums
        .iter()
        .enumerate()
        .flat_map(|(i, els)| {
            els.iter()
                .map(move |c| Payload::Tagged(i as u32, Box::new(c.payload().clone())))
        })
        .collect();

    let names: Vec<&str> = sys.spaces.iter().map(|s| s.name()).collect();
    let mut b = CoverSpace::builder(format!("lim({})", names.join(" → ")))
        .refines(move |a, c| {
            let (i, x) = tagged(a);
            let (j, y) = tagged(c);
            refines_top.raw_refines(&refines_push.push(i, x), &refines_push.push(j, y))
        })
        .meet(move |a, c| {
            let (i, x) = tagged(a);
            let (j, y) = tagged(c);
            let m = meet_top.raw_meet(&meet_push.push(i, x), &meet_push.push(j, y));
            Payload::Tagged(meet_push.top as u32, Box::new(m))
        })
        .try_norm(move |p| {
            let (i, x) = tagged(p);
            norm_spaces[i].raw_norm(x)
        })
        .enumeration(enumeration)
        .meet_space(sys.spaces.iter().all(|s| s.claims_meet_space()))
        .commutative(sys.spaces.iter().all(|s| s.claims_commutative()));
    if let Some(u) = sys.spaces[top].unit() {
        b = b.unit(Payload::Tagged(top as u32, Box::new(u.into_payload())));
    }
    let space = b.build();

    let declared = sys
        .maps
        .iter()
        .map(|m| m.declared_class())
        .reduce(MapClass::meet)
        .expect("non-empty");
    let apply_maps: Vec<CoverMap> = sys.maps.to_vec();
    let map = CoverMap::builder("induced limit map", &space, &space, declared)
        .apply(move |p| {
            let (i, x) = tagged(p);
            Payload::Tagged(i as u32, Box::new(apply_maps[i].raw_apply(x)))
        })
        .build();

    let canonical = (0..n)
        .map(|i| {
            CoverMap::builder(format!("include {i}"), &sys.spaces[i], &space, MapClass::Homomorphism)
                .apply(move |p| Payload::Tagged(i as u32, Box::new(p.clone())))
                .build()
        })
        .collect();

    Ok(DirectLimit { space, map, canonical, top })
}
