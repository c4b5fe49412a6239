//! Empirical classification of maps against the class taxonomy.
//!
//! Works for any map between entropy spaces (self-maps included): the
//! premises of each axiom are read in the source space, the conclusions in
//! the target. On an exhaustively enumerable source the verdict is a
//! proof; elsewhere it is sample-based and the report says so. A sampled
//! check never upgrades a declared class — it can only refute it.

use crate::diagnostics::{Flag, Witness};
use crate::error::{EntError, Result};
use crate::map::{ClassAxioms, CoverMap, MapClass};
use crate::space::{Cover, CoverSpace};

/// Per-axiom outcome of classifying a map over a sample.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub monotone: Flag,
    pub l1: Flag,
    pub l2: Flag,
    pub u1: Flag,
    pub u2: Flag,
    pub m1: Flag,
    pub m2: Flag,
    /// Round-trips through the inverse plus the inverse's own axioms, when
    /// an inverse was available to test; `None` when the map exposes none.
    pub iso: Option<Flag>,
    /// False when the verdict is a proof over the full enumeration.
    pub sampled: bool,
}

impl ClassReport {
    /// Observed axiom flags.
    pub fn axioms(&self) -> ClassAxioms {
        ClassAxioms {
            mono: self.monotone.holds,
            l1: self.l1.holds,
            l2: self.l2.holds,
            u1: self.u1.holds,
            u2: self.u2.holds,
            m1: self.m1.holds,
            m2: self.m2.holds,
            iso: self.iso.as_ref().is_some_and(|f| f.holds),
        }
    }

    /// Strongest class consistent with every observed flag.
    pub fn best_class(&self) -> MapClass {
        ClassAxioms::strongest(self.axioms())
    }

    /// Whether the observations support the given class.
    pub fn satisfies(&self, class: MapClass) -> bool {
        let need = class.axioms();
        let got = self.axioms();
        need.intersect(got) == need
    }

    /// Classes from the taxonomy supported by the observations, strongest
    /// first.
    pub fn supported_classes(&self) -> Vec<MapClass> {
        use MapClass::*;
        [
            Isomorphism,
            Homomorphism,
            LowerMorphism,
            UpperMorphism,
            Morphism,
            LowerMap,
            UpperMap,
            Monotone,
        ]
        .into_iter()
        .filter(|c| self.satisfies(*c))
        .collect()
    }
}

/// Runs every axiom of the taxonomy over `sample` (covers of the map's
/// source space), with norm comparisons up to `tol`.
pub fn classify_map(map: &CoverMap, sample: &[Cover], tol: f64) -> Result<ClassReport> {
    let source = map.source();
    let target = map.target();
    if sample.is_empty() {
        return Err(EntError::precondition("classification sample is empty"));
    }
    for c in sample {
        source.owns(c)?;
    }

    let mut monotone = Flag::default();
    let mut l1 = Flag::default();
    let mut l2 = Flag::default();
    let mut u1 = Flag::default();
    let mut u2 = Flag::default();
    let mut m1 = Flag::default();
    let mut m2 = Flag::default();

    let images: Vec<Cover> = sample.iter().map(|c| map.apply(c)).collect::<Result<_>>()?;

    for (i, a) in sample.iter().enumerate() {
        let ha = source.norm(a)?;
        let hla = target.norm(&images[i])?;
        l2.checked += 1;
        if !hla.le_approx(ha, tol) {
            l2.record_failure(Witness::new(
                vec![a.to_string()],
                format!("h(λα) = {hla} exceeds h(α) = {ha}"),
            ));
        }
        u2.checked += 1;
        if !ha.le_approx(hla, tol) {
            u2.record_failure(Witness::new(
                vec![a.to_string()],
                format!("h(λα) = {hla} below h(α) = {ha}"),
            ));
        }
        m2.checked += 1;
        if !hla.approx_eq(ha, tol) {
            m2.record_failure(Witness::new(
                vec![a.to_string()],
                format!("h(λα) = {hla} differs from h(α) = {ha}"),
            ));
        }

        for (j, b) in sample.iter().enumerate() {
            monotone.checked += 1;
            if source.refines(a, b)? && !target.refines(&images[i], &images[j])? {
                monotone.record_failure(Witness::new(
                    vec![a.to_string(), b.to_string()],
                    "α ≺ β but λα does not refine λβ",
                ));
            }

            let lhs = map.apply(&source.meet(a, b)?)?;
            let rhs = target.meet(&images[i], &images[j])?;
            let lower = target.refines(&lhs, &rhs)?;
            let upper = target.refines(&rhs, &lhs)?;
            l1.checked += 1;
            if !lower {
                l1.record_failure(Witness::new(
                    vec![a.to_string(), b.to_string()],
                    "λ(α∧β) does not refine λα∧λβ",
                ));
            }
            u1.checked += 1;
            if !upper {
                u1.record_failure(Witness::new(
                    vec![a.to_string(), b.to_string()],
                    "λα∧λβ does not refine λ(α∧β)",
                ));
            }
            m1.checked += 1;
            if !(lower && upper) {
                m1.record_failure(Witness::new(
                    vec![a.to_string(), b.to_string()],
                    "λ(α∧β) not equivalent to λα∧λβ",
                ));
            }
        }
    }

    // Isomorphism evidence: round-trips through the inverse, plus the
    // inverse being a monotone norm- and meet-preserving map on the image
    // sample.
    let iso = if map.has_inverse() {
        let inv = map.inverse_map()?;
        let mut flag = Flag::default();
        for (i, a) in sample.iter().enumerate() {
            flag.checked += 1;
            let back = inv.apply(&images[i])?;
            if back.payload() != a.payload() {
                flag.record_failure(Witness::new(
                    vec![a.to_string()],
                    "λ⁻¹(λα) differs from α",
                ));
            }
        }
        if flag.holds {
            if let Some(w) = inverse_axiom_failure(source, target, &inv, &images, tol)? {
                flag.record_failure(w);
            }
        }
        Some(flag)
    } else {
        None
    };

    let exhaustive = match source.enumeration() {
        Some(all) => all
            .iter()
            .all(|a| sample.iter().any(|s| s.payload() == a.payload())),
        None => false,
    };

    Ok(ClassReport {
        monotone,
        l1,
        l2,
        u1,
        u2,
        m1,
        m2,
        iso,
        sampled: !exhaustive,
    })
}

fn inverse_axiom_failure(
    source: &CoverSpace,
    target: &CoverSpace,
    inv: &CoverMap,
    image_sample: &[Cover],
    tol: f64,
) -> Result<Option<Witness>> {
    for a in image_sample {
        let ia = inv.apply(a)?;
        let ha = target.norm(a)?;
        let hia = source.norm(&ia)?;
        if !hia.approx_eq(ha, tol) {
            return Ok(Some(Witness::new(
                vec![a.to_string()],
                "inverse does not preserve the norm",
            )));
        }
        for b in image_sample {
            if target.refines(a, b)? && !source.refines(&ia, &inv.apply(b)?)? {
                return Ok(Some(Witness::new(
                    vec![a.to_string(), b.to_string()],
                    "inverse is not monotone",
                )));
            }
            let lhs = inv.apply(&target.meet(a, b)?)?;
            let rhs = source.meet(&ia, &inv.apply(b)?)?;
            if !(source.refines(&lhs, &rhs)? && source.refines(&rhs, &lhs)?) {
                return Ok(Some(Witness::new(
                    vec![a.to_string(), b.to_string()],
                    "inverse does not preserve meets up to ~",
                )));
            }
        }
    }
    Ok(None)
}

/// Confirms that a map's declared class is consistent with observation on
/// the given sample (the full source enumeration when none is given).
pub fn validate_declared_class(
    map: &CoverMap,
    sample: Option<&[Cover]>,
    tol: f64,
) -> Result<ClassReport> {
    let own_sample;
    let sample = match sample {
        Some(s) => s,
        None => {
            own_sample = map
                .source()
                .enumeration()
                .ok_or(EntError::MissingEnumeration)?;
            &own_sample
        }
    };
    let report = classify_map(map, sample, tol)?;
    if !report.satisfies(map.declared_class()) {
        return Err(EntError::DeclaredClassTooStrong {
            declared: map.declared_class().to_string(),
            observed: report.best_class().to_string(),
        });
    }
    Ok(report)
}
