//! Generators, expansivity and their entropy consequences.
//!
//! A cover `α` is a positive generator for `λ` when its forward trajectory
//! meets eventually refine every cover; a generator when the two-sided
//! meets do. Existence is expansivity, and entropy then localizes at the
//! generator. Searches are budgeted in the exponent `m`; on spaces without
//! an exhaustive enumeration the quantifier runs over a declared target
//! family and certificates carry that scope.

use crate::classify::classify_map;
use crate::entropy::{
    entropy_over_family, trajectory_meet, EntropyParams, FamilyEntropy, FamilyKind,
};
use crate::error::{EntError, Result};
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeneratorKind {
    Positive,
    TwoSided,
}

/// Whether a certificate quantified over the whole space or a declared
/// family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertificateScope {
    Exhaustive,
    FamilyBased,
}

/// Evidence that `alpha` generates: for every target `β`, the recorded
/// exponent `m` satisfies `α₀ᵐ ≺ β` (or `α₋ₘᵐ ≺ β`). Every witness
/// re-verifies through [`trajectory_meet`].
#[derive(Clone, Debug)]
pub struct GeneratorCertificate {
    pub alpha: Cover,
    pub kind: GeneratorKind,
    pub witnesses: Vec<(Cover, u32)>,
    pub scope: CertificateScope,
}

impl GeneratorCertificate {
    /// Re-checks every witness from scratch.
    pub fn verify(&self, space: &CoverSpace, map: &CoverMap) -> Result<bool> {
        for (beta, m) in &self.witnesses {
            let traj = match self.kind {
                GeneratorKind::Positive => {
                    trajectory_meet(space, map, &self.alpha, 0, *m as i64)?
                }
                GeneratorKind::TwoSided => {
                    trajectory_meet(space, map, &self.alpha, -(*m as i64), *m as i64)?
                }
            };
            if !space.refines(&traj, beta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A failed certification: the first target no trajectory meet within the
/// budget refines. Inconclusive on spaces where the family was not
/// exhaustive.
#[derive(Clone, Debug)]
pub struct GeneratorRefusal {
    pub failing: Cover,
    pub m_budget: u32,
}

#[derive(Clone, Debug)]
pub enum GeneratorOutcome {
    Certified(GeneratorCertificate),
    Refused(GeneratorRefusal),
}

impl GeneratorOutcome {
    pub fn certificate(&self) -> Option<&GeneratorCertificate> {
        match self {
            GeneratorOutcome::Certified(c) => Some(c),
            GeneratorOutcome::Refused(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, GeneratorOutcome::Certified(_))
    }
}

fn certificate_scope(space: &CoverSpace, targets: &[Cover]) -> CertificateScope {
    match space.enumeration() {
        Some(all)
            if all
                .iter()
                .all(|a| targets.iter().any(|t| t.payload() == a.payload())) =>
        {
            CertificateScope::Exhaustive
        }
        _ => CertificateScope::FamilyBased,
    }
}

fn search_generator(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    targets: &[Cover],
    m_budget: u32,
    kind: GeneratorKind,
) -> Result<GeneratorOutcome> {
    space.owns(alpha)?;
    if targets.is_empty() {
        return Err(EntError::precondition("generator search needs targets"));
    }
    if kind == GeneratorKind::TwoSided && !map.has_inverse() {
        return Err(EntError::MissingInverse);
    }

    let mut pending: Vec<&Cover> = targets.iter().collect();
    let mut witnesses: Vec<(Cover, u32)> = Vec::new();

    let mut traj = alpha.clone();
    let mut forward = alpha.payload().clone();
    let mut backward = alpha.payload().clone();

    for m in 0..=m_budget {
        if m > 0 {
            forward = map.raw_apply(&forward);
            let mut p = space.raw_meet(traj.payload(), &forward);
            if kind == GeneratorKind::TwoSided {
                backward = map.raw_unapply(&backward)?;
                p = space.raw_meet(&backward, &p);
            }
            traj = space.cover(p);
        }
        let mut still_pending = Vec::with_capacity(pending.len());
        for beta in pending {
            if space.refines(&traj, beta)? {
                witnesses.push(((*beta).clone(), m));
            } else {
                still_pending.push(beta);
            }
        }
        pending = still_pending;
        if pending.is_empty() {
            return Ok(GeneratorOutcome::Certified(GeneratorCertificate {
                alpha: alpha.clone(),
                kind,
                witnesses,
                scope: certificate_scope(space, targets),
            }));
        }
    }
    Ok(GeneratorOutcome::Refused(GeneratorRefusal {
        failing: pending[0].clone(),
        m_budget,
    }))
}

/// Certifies `alpha` as a positive generator against `targets`, with
/// exponent budget `m_budget`.
pub fn is_positive_generator(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    targets: &[Cover],
    m_budget: u32,
) -> Result<GeneratorOutcome> {
    search_generator(space, map, alpha, targets, m_budget, GeneratorKind::Positive)
}

/// Certifies `alpha` as a two-sided generator (the map must be
/// invertible).
pub fn is_generator(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    targets: &[Cover],
    m_budget: u32,
) -> Result<GeneratorOutcome> {
    search_generator(space, map, alpha, targets, m_budget, GeneratorKind::TwoSided)
}

/// Entropy over a certified generator system.
pub struct SystemEntropy {
    pub family: FamilyEntropy,
    /// Per-target witnesses `(target, system member index, m)`.
    pub witnesses: Vec<(Cover, usize, u32)>,
    /// True when the target family was the whole enumeration.
    pub exhaustive_scope: bool,
}

/// Certifies `system` as a joint (positive) generator system against
/// `targets` and returns the supremum of the member entropies, labeled
/// exact. Requires a meet space and a map that classifies as a morphism on
/// the sample.
pub fn generator_system_entropy(
    space: &CoverSpace,
    map: &CoverMap,
    system: &[Cover],
    targets: &[Cover],
    kind: GeneratorKind,
    m_budget: u32,
    params: &EntropyParams,
) -> Result<SystemEntropy> {
    if system.is_empty() {
        return Err(EntError::precondition("generator system is empty"));
    }
    if !space.claims_meet_space() {
        return Err(EntError::precondition(
            "generator-system entropy needs a meet space",
        ));
    }
    // Classification sample: the system plus targets (exhaustive when the
    // space is enumerable). Classification is quadratic in the sample, so
    // large target families are thinned deterministically.
    let sample: Vec<Cover> = match space.enumeration() {
        Some(all) => all,
        None => {
            let mut s: Vec<Cover> = system.to_vec();
            let stride = targets.len().div_ceil(24).max(1);
            s.extend(targets.iter().step_by(stride).cloned());
            s
        }
    };
    let report = classify_map(map, &sample, params.tolerance)?;
    if !report.satisfies(MapClass::Morphism) {
        return Err(EntError::DeclaredClassTooStrong {
            declared: MapClass::Morphism.to_string(),
            observed: report.best_class().to_string(),
        });
    }

    // Joint certification: each target needs one system member.
    let mut witnesses: Vec<(Cover, usize, u32)> = Vec::new();
    'targets: for beta in targets {
        for (idx, alpha) in system.iter().enumerate() {
            let outcome =
                search_generator(space, map, alpha, std::slice::from_ref(beta), m_budget, kind)?;
            if let GeneratorOutcome::Certified(cert) = outcome {
                witnesses.push((beta.clone(), idx, cert.witnesses[0].1));
                continue 'targets;
            }
        }
        return Err(EntError::precondition(format!(
            "system is not generating: no member handles target {beta} within m ≤ {m_budget}"
        )));
    }

    let family = entropy_over_family(
        space,
        map,
        system,
        FamilyKind::CertifiedGeneratorSystem,
        params,
    )?;
    let exhaustive_scope = certificate_scope(space, targets) == CertificateScope::Exhaustive;
    Ok(SystemEntropy { family, witnesses, exhaustive_scope })
}

/// Evidence from the descent construction for a positively expansive
/// cofinal morphism: an element whose forward iterates decrease through
/// the refinement order and eventually refine every target.
#[derive(Clone, Debug)]
pub struct DescentCertificate {
    pub beta: Cover,
    pub checked_depth: u32,
    /// Per-target `(γ, n)` with `λⁿβ ≺ γ`.
    pub refinement_targets: Vec<(Cover, u32)>,
}

/// Runs the descent construction: from a certified positive generator
/// `alpha` and a cofinality witness `γ` (`λγ ≺ α`), builds
/// `β = α ∧ λα ∧ … ∧ λ^{m−1}α` with `α₀^{m−1} ≺ γ` and verifies that the
/// iterates `λⁿβ` descend and refine every target. A verification failure
/// is an error: it signals that the map was not the cofinal positively
/// expansive morphism it was claimed to be.
pub fn cofinal_descent(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    targets: &[Cover],
    depth: u32,
    m_budget: u32,
) -> Result<DescentCertificate> {
    space.owns(alpha)?;
    if !space.claims_meet_space() {
        return Err(EntError::precondition("descent needs a meet space"));
    }
    let candidates: Vec<Cover> = match space.enumeration() {
        Some(all) => all,
        None => targets.to_vec(),
    };

    // Cofinality witness: γ with λγ ≺ α.
    let mut gamma = None;
    for g in &candidates {
        if space.refines(&map.apply(g)?, alpha)? {
            gamma = Some(g.clone());
            break;
        }
    }
    let gamma = gamma.ok_or_else(|| {
        EntError::precondition("no cofinality witness: nothing maps below the generator")
    })?;

    // Positive-generator exponent against γ.
    let mut m_star = None;
    for m in 0..=m_budget {
        let t = trajectory_meet(space, map, alpha, 0, m as i64)?;
        if space.refines(&t, &gamma)? {
            m_star = Some(m + 1); // block length m+1 = indices 0..=m
            break;
        }
    }
    let m_star = m_star.ok_or_else(|| {
        EntError::precondition("generator exponent not found within the budget")
    })?;

    let beta = trajectory_meet(space, map, alpha, 0, m_star as i64 - 1)?;

    // λⁿβ ≻ λⁿ⁺¹β up to the requested depth.
    let mut current = beta.clone();
    for n in 0..depth {
        let next = map.apply(&current)?;
        if !space.refines(&next, &current)? {
            return Err(EntError::precondition(format!(
                "descent broke at step {n}: λⁿ⁺¹β does not refine λⁿβ (classification bug)"
            )));
        }
        current = next;
    }

    // Iterates refine every target.
    let mut refinement_targets = Vec::with_capacity(candidates.len());
    'targets: for t in &candidates {
        let mut it = beta.clone();
        for n in 0..=depth {
            if space.refines(&it, t)? {
                refinement_targets.push((t.clone(), n));
                continue 'targets;
            }
            it = map.apply(&it)?;
        }
        return Err(EntError::precondition(format!(
            "iterates of β never refine target {t} within depth {depth}"
        )));
    }

    Ok(DescentCertificate { beta, checked_depth: depth, refinement_targets })
}
