//! Entropy on pre-ordered normed semigroups.
//!
//! A *cover space* is a set with a refinement pre-order `≺` and an
//! associative meet `∧` where the meet refines both factors; an *entropy
//! space* adds a norm into `[0, ∞]` that is antitone under refinement and
//! subadditive over meets. The entropy of a self-map is the growth rate of
//! the norms of trajectory meets `α ∧ λα ∧ … ∧ λⁿ⁻¹α`.
//!
//! The crate provides:
//!
//! * the kernel: extended arithmetic, the space and map abstractions, axiom
//!   checkers, an empirical map classifier, and the entropy estimator
//!   ([`extreal`], [`space`], [`map`], [`axioms`], [`classify`],
//!   [`entropy`]);
//! * combinators building new spaces from old — products, coproducts,
//!   `f`-products, finite direct limits, unit adjunction, quotients by
//!   mutual refinement, shift spaces — plus connections for comparing
//!   entropies across systems ([`construct`]);
//! * generators and expansivity, with re-checkable certificates
//!   ([`expansive`]);
//! * three exactly computable backends: open covers of finite topological
//!   spaces ([`topo`]), subgroup lattices of finite abelian groups
//!   ([`alg`]), and cylinder covers of shifts of finite type with
//!   big-integer word counting ([`symbolic`]);
//! * hand-built and seeded fixtures for tests and the CLI ([`fixtures`]).
//!
//! Everything is immutable after construction; all operations are pure and
//! safe to call concurrently. Iterative operations take an explicit step
//! budget and report exhaustion as an error distinct from any mathematical
//! failure.

// Transfer-matrix and lattice code reads clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod alg;
pub mod axioms;
pub mod classify;
pub mod construct;
pub mod diagnostics;
pub mod entropy;
pub mod error;
pub mod expansive;
pub mod extreal;
pub mod fixtures;
pub mod map;
pub mod space;
pub mod symbolic;
pub mod topo;

pub use error::{EntError, Result};
pub use extreal::ExtReal;
pub use map::{power_map, CoverMap, MapClass};
pub use space::{Cover, CoverSpace, Payload};

pub use axioms::{check_cover_axioms, check_norm_axioms, Axiom, AxiomReport};
pub use classify::{classify_map, validate_declared_class, ClassReport};
pub use entropy::{
    entropy_bilateral, entropy_over_family, entropy_relative, norm_supremum, trajectory_meet,
    EntropyEstimate, EntropyParams, ExactReason, FamilyKind, FamilyProvenance,
};
