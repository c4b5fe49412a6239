//! The cover-space abstraction.
//!
//! A [`CoverSpace`] is a capability bundle: a refinement pre-order, an
//! associative meet, a norm into `[0, ∞]`, and optional extras (a unit, an
//! exhaustive enumeration, an indexed cofinal family). Backends and
//! combinators construct instances; everything else in the library is
//! generic over this handle.
//!
//! Elements are [`Cover`]s: a space id plus an opaque [`Payload`]. Payloads
//! from different spaces never mix — every operation checks ownership.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_space_id() -> u64 {
    NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed)
}

/// Backend-specific element data. Kept as a closed data enum so covers are
/// comparable, hashable and printable without downcasting.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Payload {
    /// Element of a finite explicit space, by index.
    Atom(u32),
    /// Family of open sets of a finite topology, each a point bitset.
    Sets(Vec<u64>),
    /// Subgroup of a finite abelian group, as an element bitset.
    Bits(Vec<u64>),
    /// Cylinder cover of a shift space over a set of coordinate windows,
    /// stored as sorted disjoint non-adjacent segments. Empty = the trivial
    /// cover `{Σ}`.
    Windows(Vec<(i64, i64)>),
    /// Element of a product space, one component per factor.
    Tuple(Vec<Payload>),
    /// Finite-support tuple over an index line: sorted `(index, entry)`
    /// pairs, absent indices holding the base unit.
    Sparse(Vec<(i64, Payload)>),
    /// Element of a direct limit: original index plus representative.
    Tagged(u32, Box<Payload>),
    /// An adjoined top element.
    Unit,
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Atom(i) => write!(f, "#{i}"),
            Payload::Sets(sets) => {
                let parts: Vec<String> = sets.iter().map(|s| format!("{s:b}")).collect();
                write!(f, "sets[{}]", parts.join(","))
            }
            Payload::Bits(blocks) => {
                let n: u32 = blocks.iter().map(|b| b.count_ones()).sum();
                write!(f, "subgroup(order {n})")
            }
            Payload::Windows(segs) if segs.is_empty() => write!(f, "trivial"),
            Payload::Windows(segs) => {
                let parts: Vec<String> =
                    segs.iter().map(|(i, j)| format!("[{i},{j}]")).collect();
                write!(f, "{}", parts.join("∪"))
            }
            Payload::Tuple(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", s.join(", "))
            }
            Payload::Sparse(entries) if entries.is_empty() => write!(f, "(all units)"),
            Payload::Sparse(entries) => {
                let s: Vec<String> =
                    entries.iter().map(|(i, p)| format!("{i}↦{p}")).collect();
                write!(f, "{{{}}}", s.join(", "))
            }
            Payload::Tagged(i, p) => write!(f, "[{p} @ {i}]"),
            Payload::Unit => write!(f, "unit"),
        }
    }
}

/// An element of a cover space.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cover {
    space_id: u64,
    payload: Payload,
}

impl Cover {
    pub fn space_id(&self) -> u64 {
        self.space_id
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn into_payload(self) -> Payload {
        self.payload
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.payload.fmt(f)
    }
}

pub(crate) type RefinesFn = dyn Fn(&Payload, &Payload) -> bool + Send + Sync;
pub(crate) type MeetFn = dyn Fn(&Payload, &Payload) -> Payload + Send + Sync;
pub(crate) type NormFn = dyn Fn(&Payload) -> Result<ExtReal> + Send + Sync;
pub(crate) type CofinalFn = dyn Fn(u32) -> Payload + Send + Sync;

pub(crate) struct SpaceCore {
    id: u64,
    name: String,
    refines: Box<RefinesFn>,
    meet: Box<MeetFn>,
    norm: Box<NormFn>,
    unit: Option<Payload>,
    enumeration: Option<Vec<Payload>>,
    cofinal: Option<Box<CofinalFn>>,
    claims_meet_space: bool,
    claims_commutative: bool,
    /// Lazily computed: enumeration present and every enumerated norm finite.
    bounded_finite: OnceLock<bool>,
}

/// Shared handle to one entropy-space instance. Cheap to clone; immutable
/// after construction and safe to use from multiple threads.
#[derive(Clone)]
pub struct CoverSpace(Arc<SpaceCore>);

impl fmt::Debug for CoverSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoverSpace")
            .field("id", &self.0.id)
            .field("name", &self.0.name)
            .finish()
    }
}

impl CoverSpace {
    pub fn builder(name: impl Into<String>) -> SpaceBuilder {
        SpaceBuilder {
            name: name.into(),
            refines: None,
            meet: None,
            norm: None,
            unit: None,
            enumeration: None,
            cofinal: None,
            claims_meet_space: false,
            claims_commutative: false,
        }
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn claims_meet_space(&self) -> bool {
        self.0.claims_meet_space
    }

    pub fn claims_commutative(&self) -> bool {
        self.0.claims_commutative
    }

    /// Wraps a payload as a cover of this space.
    pub fn cover(&self, payload: Payload) -> Cover {
        Cover { space_id: self.0.id, payload }
    }

    pub fn owns(&self, cover: &Cover) -> Result<()> {
        if cover.space_id == self.0.id {
            Ok(())
        } else {
            Err(EntError::SpaceMismatch { expected: self.0.id, found: cover.space_id })
        }
    }

    /// The refinement pre-order: `a ≺ b` ("a refines b").
    pub fn refines(&self, a: &Cover, b: &Cover) -> Result<bool> {
        self.owns(a)?;
        self.owns(b)?;
        Ok((self.0.refines)(&a.payload, &b.payload))
    }

    pub fn meet(&self, a: &Cover, b: &Cover) -> Result<Cover> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.cover((self.0.meet)(&a.payload, &b.payload)))
    }

    pub fn norm(&self, a: &Cover) -> Result<ExtReal> {
        self.owns(a)?;
        (self.0.norm)(&a.payload)
    }

    /// `a ~ b`: mutual refinement.
    pub fn equivalent(&self, a: &Cover, b: &Cover) -> Result<bool> {
        Ok(self.refines(a, b)? && self.refines(b, a)?)
    }

    pub fn unit(&self) -> Option<Cover> {
        self.0.unit.clone().map(|p| self.cover(p))
    }

    /// Exhaustive enumeration, when the space is finite and explicit.
    pub fn enumeration(&self) -> Option<Vec<Cover>> {
        self.0
            .enumeration
            .as_ref()
            .map(|els| els.iter().map(|p| self.cover(p.clone())).collect())
    }

    pub fn is_enumerable(&self) -> bool {
        self.0.enumeration.is_some()
    }

    /// Member `k` of the declared cofinal family, if one is exposed.
    pub fn cofinal_member(&self, k: u32) -> Option<Cover> {
        self.0.cofinal.as_ref().map(|f| self.cover(f(k)))
    }

    pub fn has_cofinal_family(&self) -> bool {
        self.0.cofinal.is_some()
    }

    /// True when the space is exhaustively enumerable and every enumerated
    /// element has finite norm. On such a space the trajectory norms are
    /// bounded, so every entropy is exactly 0.
    pub fn bounded_finite(&self) -> bool {
        *self.0.bounded_finite.get_or_init(|| {
            let Some(els) = self.0.enumeration.as_ref() else {
                return false;
            };
            els.iter().all(|p| match (self.0.norm)(p) {
                Ok(v) => v.is_finite(),
                Err(_) => false,
            })
        })
    }

    pub(crate) fn raw_refines(&self, a: &Payload, b: &Payload) -> bool {
        (self.0.refines)(a, b)
    }

    pub(crate) fn raw_meet(&self, a: &Payload, b: &Payload) -> Payload {
        (self.0.meet)(a, b)
    }

    pub(crate) fn raw_norm(&self, a: &Payload) -> Result<ExtReal> {
        (self.0.norm)(a)
    }
}

pub struct SpaceBuilder {
    name: String,
    refines: Option<Box<RefinesFn>>,
    meet: Option<Box<MeetFn>>,
    norm: Option<Box<NormFn>>,
    unit: Option<Payload>,
    enumeration: Option<Vec<Payload>>,
    cofinal: Option<Box<CofinalFn>>,
    claims_meet_space: bool,
    claims_commutative: bool,
}

impl SpaceBuilder {
    pub fn refines(mut self, f: impl Fn(&Payload, &Payload) -> bool + Send + Sync + 'static) -> Self {
        self.refines = Some(Box::new(f));
        self
    }

    pub fn meet(mut self, f: impl Fn(&Payload, &Payload) -> Payload + Send + Sync + 'static) -> Self {
        self.meet = Some(Box::new(f));
        self
    }

    /// Infallible norm.
    pub fn norm(mut self, f: impl Fn(&Payload) -> ExtReal + Send + Sync + 'static) -> Self {
        self.norm = Some(Box::new(move |p| Ok(f(p))));
        self
    }

    /// Norm that may exhaust a search budget.
    pub fn try_norm(mut self, f: impl Fn(&Payload) -> Result<ExtReal> + Send + Sync + 'static) -> Self {
        self.norm = Some(Box::new(f));
        self
    }

    pub fn unit(mut self, p: Payload) -> Self {
        self.unit = Some(p);
        self
    }

    pub fn enumeration(mut self, els: Vec<Payload>) -> Self {
        self.enumeration = Some(els);
        self
    }

    pub fn cofinal(mut self, f: impl Fn(u32) -> Payload + Send + Sync + 'static) -> Self {
        self.cofinal = Some(Box::new(f));
        self
    }

    pub fn meet_space(mut self, yes: bool) -> Self {
        self.claims_meet_space = yes;
        self
    }

    pub fn commutative(mut self, yes: bool) -> Self {
        self.claims_commutative = yes;
        self
    }

    pub fn build(self) -> CoverSpace {
        CoverSpace(Arc::new(SpaceCore {
            id: fresh_space_id(),
            name: self.name,
            refines: self.refines.expect("refines is required"),
            meet: self.meet.expect("meet is required"),
            norm: self.norm.expect("norm is required"),
            unit: self.unit,
            enumeration: self.enumeration,
            cofinal: self.cofinal,
            claims_meet_space: self.claims_meet_space,
            claims_commutative: self.claims_commutative,
            bounded_finite: OnceLock::new(),
        }))
    }
}
