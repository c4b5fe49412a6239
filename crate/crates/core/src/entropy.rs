//! Trajectory meets and the entropy estimator.
//!
//! The entropy of a self-map `λ` relative to a cover `α` is the growth rate
//! of `h(α ∧ λα ∧ … ∧ λⁿ⁻¹α)`. For lower maps that sequence is subadditive,
//! so the per-`n` quotients upper-bound the limit and their infimum
//! converges to it. The estimator reports the whole finite-horizon picture
//! and attaches an `exact` value only when a certificate justifies it:
//!
//! * every norm of a finite explicit space is finite, so trajectory norms
//!   are bounded and the limit is 0;
//! * the trajectory reached a literal fixed point, so the norms are
//!   eventually constant and the limit is 0;
//! * the backend knows the limit in closed form;
//! * a generator certificate localizes the full entropy at this cover.

use std::fmt;

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{power_map, CoverMap, MapClass};
use crate::space::{Cover, CoverSpace};

/// Knobs shared by the iterative operations.
#[derive(Clone, Copy, Debug)]
pub struct EntropyParams {
    /// Number of trajectory steps to evaluate.
    pub horizon: u32,
    /// Abstract step budget; meets, applications and norm evaluations all
    /// count. Exhaustion is an error, distinct from any mathematical
    /// failure.
    pub budget: u64,
    /// Absolute tolerance for comparisons of finite norm values.
    pub tolerance: f64,
}

impl Default for EntropyParams {
    fn default() -> Self {
        EntropyParams { horizon: 16, budget: 10_000_000, tolerance: 1e-9 }
    }
}

impl EntropyParams {
    pub fn with_horizon(horizon: u32) -> Self {
        EntropyParams { horizon, ..Default::default() }
    }
}

pub(crate) struct StepBudget {
    remaining: std::cell::Cell<u64>,
    limit: u64,
}

impl StepBudget {
    pub(crate) fn new(limit: u64) -> Self {
        StepBudget { remaining: std::cell::Cell::new(limit), limit }
    }

    pub(crate) fn charge(&self, n: u64, operation: &'static str) -> Result<()> {
        let cur = self.remaining.get();
        if cur < n {
            return Err(EntError::BudgetExceeded { budget: self.limit, operation });
        }
        self.remaining.set(cur - n);
        Ok(())
    }
}

/// Why an estimate's `exact` field is trustworthy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExactReason {
    /// Enumerable space with finite norms: bounded trajectory norms force
    /// the quotients to 0.
    BoundedNormFiniteSpace,
    /// The backend supplied the limit in closed form.
    ClosedForm,
    /// The trajectory and its generating factor stopped changing, so the
    /// norm sequence is eventually constant.
    Stabilized,
    /// A generator certificate localizes the entropy at this cover.
    GeneratorCertificate,
}

impl fmt::Display for ExactReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExactReason::BoundedNormFiniteSpace => "bounded-norm-finite-space",
            ExactReason::ClosedForm => "closed-form",
            ExactReason::Stabilized => "stabilized",
            ExactReason::GeneratorCertificate => "generator-certificate",
        };
        f.write_str(s)
    }
}

/// A certified exact entropy value.
#[derive(Clone, Copy, Debug)]
pub struct ExactValue {
    pub value: ExtReal,
    pub reason: ExactReason,
}

/// Finite-horizon entropy data for one `(map, cover)` pair.
#[derive(Clone, Debug)]
pub struct EntropyEstimate {
    pub horizon: u32,
    /// `a_n = h(α₀ⁿ⁻¹)` for `n = 1..=horizon` (possibly truncated by
    /// stabilization).
    pub a_seq: Vec<ExtReal>,
    /// `a_n / n` — for two-sided estimates, `h(α₋ₙⁿ)/(2n+1)`.
    pub quotients: Vec<ExtReal>,
    /// Minimum of the computed quotients.
    pub running_inf: ExtReal,
    /// Set only when certified; carries its reason.
    pub exact: Option<ExactValue>,
    /// True when the map's class implies the lower-map axioms, so each
    /// quotient bounds the true entropy from above and `running_inf` is a
    /// valid upper bound.
    pub valid_upper_bound: bool,
    /// Step at which the trajectory stopped changing, if it did.
    pub stabilized_at: Option<u32>,
}

impl EntropyEstimate {
    /// The number to quote: the certified value when present, otherwise the
    /// running infimum.
    pub fn value(&self) -> ExtReal {
        self.exact.map(|e| e.value).unwrap_or(self.running_inf)
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn label(&self) -> String {
        match &self.exact {
            Some(e) => format!("exact ({})", e.reason),
            None if self.valid_upper_bound => "bound (running infimum)".to_string(),
            None => "bound (not certified as upper bound)".to_string(),
        }
    }
}

/// `α_n^m[λ] = λⁿα ∧ λⁿ⁺¹α ∧ … ∧ λᵐα`, folded left in index order.
/// Negative indices require an inverse.
pub fn trajectory_meet(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    n: i64,
    m: i64,
) -> Result<Cover> {
    space.owns(alpha)?;
    if n > m {
        return Err(EntError::precondition(format!(
            "trajectory_meet needs n ≤ m, got {n} > {m}"
        )));
    }
    if n < 0 && !map.has_inverse() {
        return Err(EntError::MissingInverse);
    }
    let mut acc = map.iterate(alpha.payload(), n)?;
    let mut factor = acc.clone();
    for _ in n..m {
        factor = map.raw_apply(&factor);
        acc = space.raw_meet(&acc, &factor);
    }
    Ok(space.cover(acc))
}

/// Entropy of `map` relative to `alpha`, computed incrementally via
/// `α₀ⁿ = α₀ⁿ⁻¹ ∧ λⁿα` out to the horizon.
pub fn entropy_relative(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    params: &EntropyParams,
) -> Result<EntropyEstimate> {
    space.owns(alpha)?;
    if map.source().id() != space.id() || !map.is_self_map() {
        return Err(EntError::precondition(
            "entropy_relative expects a self-map on the given space",
        ));
    }
    if params.horizon == 0 {
        return Err(EntError::precondition("horizon must be ≥ 1"));
    }
    let budget = StepBudget::new(params.budget);

    let mut a_seq = Vec::with_capacity(params.horizon as usize);
    let mut quotients = Vec::with_capacity(params.horizon as usize);
    let mut running_inf = ExtReal::Infinity;
    let mut stabilized_at = None;

    let mut traj = alpha.payload().clone();
    let mut factor = alpha.payload().clone();

    for n in 1..=params.horizon {
        if n > 1 {
            budget.charge(2, "entropy_relative")?;
            let next_factor = map.raw_apply(&factor);
            let next_traj = space.raw_meet(&traj, &next_factor);
            let fixed = next_factor == factor && next_traj == traj;
            factor = next_factor;
            traj = next_traj;
            if fixed {
                // Every later factor and meet repeats, so a_m is constant
                // from here on.
                stabilized_at = Some(n);
            }
        }
        budget.charge(1, "entropy_relative")?;
        let a_n = space.raw_norm(&traj)?;
        let q = a_n.div_u32(n);
        running_inf = running_inf.min(q);
        a_seq.push(a_n);
        quotients.push(q);
        if stabilized_at.is_some() {
            break;
        }
    }

    let valid_upper_bound = map.declared_class().implies_lower_map();

    let mut exact = None;
    if space.bounded_finite() {
        exact = Some(ExactValue {
            value: ExtReal::ZERO,
            reason: ExactReason::BoundedNormFiniteSpace,
        });
    }
    if exact.is_none() {
        if let Some(v) = map.closed_form(alpha) {
            exact = Some(ExactValue { value: v, reason: ExactReason::ClosedForm });
        }
    }
    if exact.is_none()
        && stabilized_at.is_some()
        && a_seq.last().is_some_and(|v| v.is_finite())
    {
        // Constant a_n from some point on: the limit of a_n/n is 0.
        exact = Some(ExactValue { value: ExtReal::ZERO, reason: ExactReason::Stabilized });
    }

    Ok(EntropyEstimate {
        horizon: params.horizon,
        a_seq,
        quotients,
        running_inf,
        exact,
        valid_upper_bound,
        stabilized_at,
    })
}

/// Two-sided estimate for an isomorphism: quotients are
/// `h(α₋ₙⁿ)/(2n+1)` for `n = 0..horizon`. The map must pass the
/// isomorphism classification — exhaustively on enumerable spaces, on the
/// orbit sample `{λ⁻¹α, α, λα}` otherwise.
pub fn entropy_bilateral(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    params: &EntropyParams,
) -> Result<EntropyEstimate> {
    space.owns(alpha)?;
    if !map.has_inverse() {
        return Err(EntError::MissingInverse);
    }
    let sample = match space.enumeration() {
        Some(all) => all,
        None => vec![
            space.cover(map.raw_unapply(alpha.payload())?),
            alpha.clone(),
            map.apply(alpha)?,
        ],
    };
    let report = crate::classify::classify_map(map, &sample, params.tolerance)?;
    if !report.satisfies(MapClass::Isomorphism) {
        return Err(EntError::DeclaredClassTooStrong {
            declared: MapClass::Isomorphism.to_string(),
            observed: report.best_class().to_string(),
        });
    }
    let budget = StepBudget::new(params.budget);

    let mut a_seq = Vec::new();
    let mut quotients = Vec::new();
    let mut running_inf = ExtReal::Infinity;
    let mut stabilized_at = None;

    // Incrementally extend α₋ₙⁿ on both flanks; the fold order matches the
    // left-associated index-order product up to associativity.
    let mut traj = alpha.payload().clone();
    let mut left = alpha.payload().clone();
    let mut right = alpha.payload().clone();

    for n in 0..params.horizon {
        if n > 0 {
            budget.charge(4, "entropy_bilateral")?;
            let next_left = map.raw_unapply(&left)?;
            let next_right = map.raw_apply(&right);
            let next_traj = space.raw_meet(&space.raw_meet(&next_left, &traj), &next_right);
            let fixed = next_left == left && next_right == right && next_traj == traj;
            left = next_left;
            right = next_right;
            traj = next_traj;
            if fixed {
                stabilized_at = Some(n);
            }
        }
        budget.charge(1, "entropy_bilateral")?;
        let a_n = space.raw_norm(&traj)?;
        let q = a_n.div_u32(2 * n + 1);
        running_inf = running_inf.min(q);
        a_seq.push(a_n);
        quotients.push(q);
        if stabilized_at.is_some() {
            break;
        }
    }

    let mut exact = None;
    if space.bounded_finite() {
        exact = Some(ExactValue {
            value: ExtReal::ZERO,
            reason: ExactReason::BoundedNormFiniteSpace,
        });
    }
    if exact.is_none() {
        if let Some(v) = map.closed_form(alpha) {
            exact = Some(ExactValue { value: v, reason: ExactReason::ClosedForm });
        }
    }

    Ok(EntropyEstimate {
        horizon: params.horizon,
        a_seq,
        quotients,
        running_inf,
        exact,
        valid_upper_bound: map.declared_class().implies_lower_map(),
        stabilized_at,
    })
}

/// How a family passed to [`entropy_over_family`] is qualified.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyKind {
    /// No cofinality claim: the supremum is only a lower bound for `h(λ)`.
    Plain,
    /// Declared cofinal: the supremum over the family equals `h(λ)` for
    /// monotone maps.
    Cofinal,
    /// A certified (positive) generator system: the supremum is exact.
    CertifiedGeneratorSystem,
}

/// Provenance of a family-level entropy value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilyProvenance {
    LowerBoundOnly,
    CofinalSupremum,
    ExactByCertificate,
}

impl fmt::Display for FamilyProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyProvenance::LowerBoundOnly => "lower-bound-only",
            FamilyProvenance::CofinalSupremum => "cofinal-supremum",
            FamilyProvenance::ExactByCertificate => "exact-by-certificate",
        };
        f.write_str(s)
    }
}

/// Entropy of a map over a family of covers: the supremum of the
/// per-member estimates, with provenance.
#[derive(Clone, Debug)]
pub struct FamilyEntropy {
    pub members: Vec<(Cover, EntropyEstimate)>,
    pub value: ExtReal,
    pub provenance: FamilyProvenance,
    /// True when every member estimate carried an exact certificate.
    pub all_members_exact: bool,
}

/// `h(λ)` over a family: `sup_α h(λ, α)`.
pub fn entropy_over_family(
    space: &CoverSpace,
    map: &CoverMap,
    family: &[Cover],
    kind: FamilyKind,
    params: &EntropyParams,
) -> Result<FamilyEntropy> {
    if family.is_empty() {
        return Err(EntError::precondition("family must be non-empty"));
    }
    let mut members = Vec::with_capacity(family.len());
    let mut value = ExtReal::ZERO;
    let mut all_exact = true;
    for alpha in family {
        let est = entropy_relative(space, map, alpha, params)?;
        all_exact &= est.is_exact();
        value = value.max(est.value());
        members.push((alpha.clone(), est));
    }
    let provenance = match kind {
        FamilyKind::Plain => FamilyProvenance::LowerBoundOnly,
        FamilyKind::Cofinal => FamilyProvenance::CofinalSupremum,
        FamilyKind::CertifiedGeneratorSystem => FamilyProvenance::ExactByCertificate,
    };
    Ok(FamilyEntropy { members, value, provenance, all_members_exact: all_exact })
}

/// `h(C) = sup_α h(α)`: the norm supremum over the enumeration. This is
/// the quantity the shift-entropy law produces (the shift over a base
/// space has entropy equal to the base's norm supremum); it is *not* the
/// entropy of the identity map, which is 0 on any bounded-norm space.
pub fn norm_supremum(space: &CoverSpace) -> Result<ExtReal> {
    let family = space.enumeration().ok_or(EntError::MissingEnumeration)?;
    let mut sup = ExtReal::ZERO;
    for c in &family {
        sup = sup.max(space.norm(c)?);
    }
    Ok(sup)
}

/// Re-norms a commutative space with `h^λ(α) = h(λ, α)` at the configured
/// horizon (the certified value when available, the running infimum
/// otherwise). Requires `map` to classify as a morphism on the sample.
pub fn derived_entropy_norm(
    space: &CoverSpace,
    map: &CoverMap,
    sample: &[Cover],
    params: &EntropyParams,
) -> Result<CoverSpace> {
    if !space.claims_commutative() {
        return Err(EntError::precondition(
            "derived entropy norm needs a commutative space",
        ));
    }
    let report = crate::classify::classify_map(map, sample, params.tolerance)?;
    if !report.satisfies(MapClass::Morphism) {
        return Err(EntError::DeclaredClassTooStrong {
            declared: MapClass::Morphism.to_string(),
            observed: report.best_class().to_string(),
        });
    }

    let inner = space.clone();
    let norm_space = space.clone();
    let norm_map = map.clone();
    let norm_params = *params;

    let mut builder = CoverSpace::builder(format!("{} re-normed by h^λ", space.name()));
    {
        let s = inner.clone();
        builder = builder.refines(move |a, b| s.raw_refines(a, b));
    }
    {
        let s = inner.clone();
        builder = builder.meet(move |a, b| s.raw_meet(a, b));
    }
    builder = builder.try_norm(move |p| {
        let est = entropy_relative(
            &norm_space,
            &norm_map,
            &norm_space.cover(p.clone()),
            &norm_params,
        )?;
        Ok(est.value())
    });
    if let Some(u) = space.unit() {
        builder = builder.unit(u.into_payload());
    }
    if let Some(els) = space.enumeration() {
        builder = builder.enumeration(els.into_iter().map(|c| c.into_payload()).collect());
    }
    builder = builder
        .meet_space(space.claims_meet_space())
        .commutative(space.claims_commutative());
    Ok(builder.build())
}

/// Checks the finite-horizon logarithmic-law inequalities for a lower map:
/// quotient-level forms of `m·h(λ,α) ≥ h(λᵐ,α)` and
/// `m·h(λ,α) ≤ h(λᵐ, α₀ᵐ⁻¹)`.
pub fn log_law_estimates(
    space: &CoverSpace,
    map: &CoverMap,
    alpha: &Cover,
    m: u32,
    params: &EntropyParams,
) -> Result<(EntropyEstimate, EntropyEstimate, EntropyEstimate)> {
    let base = entropy_relative(space, map, alpha, params)?;
    let powered = power_map(map, m as i64)?;
    let at_alpha = entropy_relative(space, &powered, alpha, params)?;
    let block = trajectory_meet(space, map, alpha, 0, m.saturating_sub(1) as i64)?;
    let at_block = entropy_relative(space, &powered, &block, params)?;
    Ok((base, at_alpha, at_block))
}
