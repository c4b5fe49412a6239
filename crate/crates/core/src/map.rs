//! Maps between cover spaces and the class taxonomy.
//!
//! Classes are axiom bundles over a monotone map `λ`:
//!
//! * `[L1]` `λ(α∧β) ≺ λα∧λβ`, `[L2]` `h(λα) ≤ h(α)`  — lower map
//! * `[U1]` `λ(α∧β) ≻ λα∧λβ`, `[U2]` `h(λα) ≥ h(α)`  — upper map
//! * `[M1]` `λ(α∧β) ~ λα∧λβ` — morphism; with `[M2]` `h(λα) = h(α)` —
//!   homomorphism; a bijective homomorphism with homomorphism inverse is an
//!   isomorphism.
//!
//! Implications: homomorphism ⇒ lower/upper morphism ⇒ morphism and
//! lower/upper map; everything ⇒ monotone.

use std::fmt;
use std::sync::Arc;

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::space::{Cover, CoverSpace, Payload};

/// Declared class of a map, from weakest to strongest.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MapClass {
    Monotone,
    LowerMap,
    UpperMap,
    Morphism,
    LowerMorphism,
    UpperMorphism,
    Homomorphism,
    Isomorphism,
}

impl MapClass {
    /// Axiom closure of the class, as flag bits.
    pub fn axioms(self) -> ClassAxioms {
        use MapClass::*;
        let mut a = ClassAxioms { mono: true, ..ClassAxioms::NONE };
        match self {
            Monotone => {}
            LowerMap => {
                a.l1 = true;
                a.l2 = true;
            }
            UpperMap => {
                a.u1 = true;
                a.u2 = true;
            }
            Morphism => {
                a.m1 = true;
                a.l1 = true;
                a.u1 = true;
            }
            LowerMorphism => {
                a.m1 = true;
                a.l1 = true;
                a.u1 = true;
                a.l2 = true;
            }
            UpperMorphism => {
                a.m1 = true;
                a.l1 = true;
                a.u1 = true;
                a.u2 = true;
            }
            Homomorphism | Isomorphism => {
                a.m1 = true;
                a.l1 = true;
                a.u1 = true;
                a.m2 = true;
                a.l2 = true;
                a.u2 = true;
                a.iso = self == Isomorphism;
            }
        }
        a
    }

    /// Whether this class implies the lower-map axioms, i.e. whether
    /// trajectory norms are guaranteed subadditive and the quotient
    /// infimum a valid upper bound of the entropy.
    pub fn implies_lower_map(self) -> bool {
        let a = self.axioms();
        a.l1 && a.l2
    }

    pub fn implies_morphism(self) -> bool {
        self.axioms().m1
    }

    /// Strongest class implied by both arguments (used for induced maps on
    /// products and coproducts).
    pub fn meet(self, other: MapClass) -> MapClass {
        ClassAxioms::strongest(self.axioms().intersect(other.axioms()))
    }

    /// Class of the inverse of a bi-monotone bijection of this class:
    /// lower and upper swap, homomorphism and isomorphism are self-dual.
    pub fn mirror(self) -> MapClass {
        use MapClass::*;
        match self {
            LowerMap => UpperMap,
            UpperMap => LowerMap,
            LowerMorphism => UpperMorphism,
            UpperMorphism => LowerMorphism,
            other => other,
        }
    }
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapClass::Monotone => "monotone",
            MapClass::LowerMap => "lower map",
            MapClass::UpperMap => "upper map",
            MapClass::Morphism => "morphism",
            MapClass::LowerMorphism => "lower morphism",
            MapClass::UpperMorphism => "upper morphism",
            MapClass::Homomorphism => "homomorphism",
            MapClass::Isomorphism => "isomorphism",
        };
        f.write_str(s)
    }
}

/// Axiom flags for class arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ClassAxioms {
    pub mono: bool,
    pub l1: bool,
    pub l2: bool,
    pub u1: bool,
    pub u2: bool,
    pub m1: bool,
    pub m2: bool,
    pub iso: bool,
}

impl ClassAxioms {
    pub const NONE: ClassAxioms = ClassAxioms {
        mono: false,
        l1: false,
        l2: false,
        u1: false,
        u2: false,
        m1: false,
        m2: false,
        iso: false,
    };

    pub fn intersect(self, o: ClassAxioms) -> ClassAxioms {
        ClassAxioms {
            mono: self.mono && o.mono,
            l1: self.l1 && o.l1,
            l2: self.l2 && o.l2,
            u1: self.u1 && o.u1,
            u2: self.u2 && o.u2,
            m1: self.m1 && o.m1,
            m2: self.m2 && o.m2,
            iso: self.iso && o.iso,
        }
    }

    /// Strongest named class whose axiom closure is contained in `a`.
    pub fn strongest(a: ClassAxioms) -> MapClass {
        use MapClass::*;
        for c in [
            Isomorphism,
            Homomorphism,
            LowerMorphism,
            UpperMorphism,
            Morphism,
            LowerMap,
            UpperMap,
        ] {
            let need = c.axioms();
            let both = need.intersect(a);
            if both == need {
                return c;
            }
        }
        Monotone
    }
}

pub(crate) type ApplyFn = dyn Fn(&Payload) -> Payload + Send + Sync;
pub(crate) type ClosedFormFn = dyn Fn(&Payload) -> Option<ExtReal> + Send + Sync;

struct MapCore {
    name: String,
    source: CoverSpace,
    target: CoverSpace,
    apply: Box<ApplyFn>,
    declared: MapClass,
    inverse: Option<Box<ApplyFn>>,
    /// Exact entropy of the map relative to a cover, when the backend
    /// knows it in closed form. Only meaningful for self-maps.
    closed_form: Option<Box<ClosedFormFn>>,
}

/// A map between cover spaces (a self-map when source and target agree).
#[derive(Clone)]
pub struct CoverMap(Arc<MapCore>);

impl fmt::Debug for CoverMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverMap")
            .field("name", &self.0.name)
            .field("declared", &self.0.declared)
            .finish()
    }
}

impl CoverMap {
    pub fn builder(
        name: impl Into<String>,
        source: &CoverSpace,
        target: &CoverSpace,
        declared: MapClass,
    ) -> MapBuilder {
        MapBuilder {
            name: name.into(),
            source: source.clone(),
            target: target.clone(),
            declared,
            apply: None,
            inverse: None,
            closed_form: None,
        }
    }

    /// The identity self-map (a homomorphism on any space).
    pub fn identity(space: &CoverSpace) -> CoverMap {
        CoverMap::builder("id", space, space, MapClass::Isomorphism)
            .apply(|p| p.clone())
            .inverse(|p| p.clone())
            .build()
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn source(&self) -> &CoverSpace {
        &self.0.source
    }

    pub fn target(&self) -> &CoverSpace {
        &self.0.target
    }

    pub fn declared_class(&self) -> MapClass {
        self.0.declared
    }

    pub fn is_self_map(&self) -> bool {
        self.0.source.id() == self.0.target.id()
    }

    pub fn has_inverse(&self) -> bool {
        self.0.inverse.is_some()
    }

    pub fn apply(&self, c: &Cover) -> Result<Cover> {
        self.0.source.owns(c)?;
        Ok(self.0.target.cover((self.0.apply)(c.payload())))
    }

    pub(crate) fn raw_apply(&self, p: &Payload) -> Payload {
        (self.0.apply)(p)
    }

    pub(crate) fn raw_unapply(&self, p: &Payload) -> Result<Payload> {
        match &self.0.inverse {
            Some(f) => Ok(f(p)),
            None => Err(EntError::MissingInverse),
        }
    }

    /// The inverse map as a first-class handle.
    pub fn inverse_map(&self) -> Result<CoverMap> {
        let Some(_) = self.0.inverse else {
            return Err(EntError::MissingInverse);
        };
        let fwd = self.clone();
        let bwd = self.clone();
        Ok(CoverMap(Arc::new(MapCore {
            name: format!("{}⁻¹", self.0.name),
            source: self.0.target.clone(),
            target: self.0.source.clone(),
            apply: Box::new(move |p| fwd.raw_unapply(p).expect("inverse present")),
            declared: self.0.declared.mirror(),
            inverse: Some(Box::new(move |p| bwd.raw_apply(p))),
            closed_form: None,
        })))
    }

    /// Backend-supplied exact value of `h(self, α)`, when known.
    pub fn closed_form(&self, c: &Cover) -> Option<ExtReal> {
        self.0.closed_form.as_ref().and_then(|f| f(c.payload()))
    }

    /// `k`-th iterate of a payload under the map; negative `k` uses the
    /// inverse.
    pub(crate) fn iterate(&self, p: &Payload, k: i64) -> Result<Payload> {
        let mut cur = p.clone();
        if k >= 0 {
            for _ in 0..k {
                cur = self.raw_apply(&cur);
            }
        } else {
            for _ in 0..(-k) {
                cur = self.raw_unapply(&cur)?;
            }
        }
        Ok(cur)
    }
}

/// `m`-fold composition of a self-map; the class is preserved for natural
/// powers, and `m = 0` yields the identity. Negative powers require an
/// inverse and only keep the declared class when it is an isomorphism.
pub fn power_map(map: &CoverMap, m: i64) -> Result<CoverMap> {
    if !map.is_self_map() {
        return Err(EntError::precondition("power of a non-self-map"));
    }
    if m < 0 && !map.has_inverse() {
        return Err(EntError::MissingInverse);
    }
    if m == 0 {
        return Ok(CoverMap::identity(map.source()));
    }
    let declared = if m > 0 {
        map.declared_class()
    } else {
        map.declared_class().mirror()
    };
    let fwd = map.clone();
    let mut builder = CoverMap::builder(
        format!("{}^{}", map.name(), m),
        map.source(),
        map.target(),
        declared,
    )
    .apply(move |p| fwd.iterate(p, m).expect("sign checked above"));
    if map.has_inverse() {
        let bwd = map.clone();
        builder = builder.inverse(move |p| bwd.iterate(p, -m).expect("inverse present"));
    }
    Ok(builder.build())
}

pub struct MapBuilder {
    name: String,
    source: CoverSpace,
    target: CoverSpace,
    declared: MapClass,
    apply: Option<Box<ApplyFn>>,
    inverse: Option<Box<ApplyFn>>,
    closed_form: Option<Box<ClosedFormFn>>,
}

impl MapBuilder {
    pub fn apply(mut self, f: impl Fn(&Payload) -> Payload + Send + Sync + 'static) -> Self {
        self.apply = Some(Box::new(f));
        self
    }

    pub fn inverse(mut self, f: impl Fn(&Payload) -> Payload + Send + Sync + 'static) -> Self {
        self.inverse = Some(Box::new(f));
        self
    }

    pub fn closed_form(
        mut self,
        f: impl Fn(&Payload) -> Option<ExtReal> + Send + Sync + 'static,
    ) -> Self {
        self.closed_form = Some(Box::new(f));
        self
    }

    pub fn build(self) -> CoverMap {
        CoverMap(Arc::new(MapCore {
            name: self.name,
            source: self.source,
            target: self.target,
            apply: self.apply.expect("apply is required"),
            declared: self.declared,
            inverse: self.inverse,
            closed_form: self.closed_form,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_meets() {
        use MapClass::*;
        assert_eq!(LowerMorphism.meet(UpperMap), Monotone);
        assert_eq!(Homomorphism.meet(LowerMorphism), LowerMorphism);
        assert_eq!(Isomorphism.meet(Isomorphism), Isomorphism);
        assert_eq!(Isomorphism.meet(Homomorphism), Homomorphism);
        assert_eq!(LowerMap.meet(LowerMorphism), LowerMap);
        assert_eq!(Morphism.meet(UpperMap), Monotone);
    }

    #[test]
    fn lower_map_implication() {
        assert!(MapClass::Homomorphism.implies_lower_map());
        assert!(MapClass::Isomorphism.implies_lower_map());
        assert!(MapClass::LowerMorphism.implies_lower_map());
        assert!(MapClass::LowerMap.implies_lower_map());
        assert!(!MapClass::Morphism.implies_lower_map());
        assert!(!MapClass::UpperMap.implies_lower_map());
        assert!(!MapClass::Monotone.implies_lower_map());
    }

    #[test]
    fn mirror_swaps_lower_and_upper() {
        assert_eq!(MapClass::LowerMap.mirror(), MapClass::UpperMap);
        assert_eq!(MapClass::Isomorphism.mirror(), MapClass::Isomorphism);
    }
}
