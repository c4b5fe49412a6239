//! Structural checks for cover and norm axioms.
//!
//! Failures are data (a report with witnesses), never errors: mutated or
//! user-supplied spaces are expected inputs.

use std::fmt;

use crate::diagnostics::{Flag, Witness};
use crate::error::Result;
use crate::extreal::ExtReal;
use crate::space::{Cover, CoverSpace};

/// Which condition a check line refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axiom {
    /// `α∧β ≺ α` and `α∧β ≺ β`.
    MeetRefinesFactors,
    /// `α≺α′` and `β≺β′` imply `α∧β ≺ α′∧β′`.
    MeetMonotone,
    /// `(α∧β)∧γ ~ α∧(β∧γ)`.
    AssociativeUpToEquiv,
    /// `α∧β ~ β∧α` (checked only when claimed).
    CommutativeUpToEquiv,
    /// `α∧α ~ α` (the meet-space law, checked only when claimed).
    MeetIdempotent,
    /// `α ≺ 1` and `α∧1 ~ 1∧α ~ α`, plus `h(1) = 0`.
    UnitLaws,
    /// `α ≺ β` implies `h(α) ≥ h(β)`.
    NormAntitone,
    /// `h(α∧β) ≤ h(α) + h(β)`.
    NormSubadditive,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::MeetRefinesFactors => "meet refines both factors",
            Axiom::MeetMonotone => "meet monotone in both arguments",
            Axiom::AssociativeUpToEquiv => "meet associative up to ~",
            Axiom::CommutativeUpToEquiv => "meet commutative up to ~",
            Axiom::MeetIdempotent => "meet idempotent up to ~ (meet space)",
            Axiom::UnitLaws => "unit laws",
            Axiom::NormAntitone => "norm antitone under refinement",
            Axiom::NormSubadditive => "norm subadditive over meets",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub flag: Flag,
}

/// Result of running a suite of axiom checks over a sample.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub space: String,
    pub checks: Vec<AxiomCheck>,
    /// True when the sample was the space's full enumeration.
    pub exhaustive: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.flag.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.flag.holds)
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

fn is_exhaustive(space: &CoverSpace, sample: &[Cover]) -> bool {
    match space.enumeration() {
        Some(all) => {
            all.len() <= sample.len()
                && all.iter().all(|a| sample.iter().any(|s| s.payload() == a.payload()))
        }
        None => false,
    }
}

/// Checks the cover-space axioms (`[C1]`, `[C2]`, associativity up to `~`,
/// plus commutativity / idempotence when claimed and the unit laws when a
/// unit is present) on `sample`.
pub fn check_cover_axioms(space: &CoverSpace, sample: &[Cover]) -> Result<AxiomReport> {
    for c in sample {
        space.owns(c)?;
    }
    let mut c1 = Flag::default();
    let mut c2 = Flag::default();
    let mut assoc = Flag::default();
    let mut comm = Flag::default();
    let mut idem = Flag::default();
    let mut unit_flag = Flag::default();

    for a in sample {
        for b in sample {
            let m = space.meet(a, b)?;
            c1.checked += 1;
            if !(space.refines(&m, a)? && space.refines(&m, b)?) {
                c1.record_failure(Witness::new(
                    vec![a.to_string(), b.to_string(), m.to_string()],
                    "α∧β does not refine both factors",
                ));
            }
            if space.claims_commutative() {
                comm.checked += 1;
                let n = space.meet(b, a)?;
                if !space.equivalent(&m, &n)? {
                    comm.record_failure(Witness::new(
                        vec![a.to_string(), b.to_string()],
                        "α∧β not equivalent to β∧α",
                    ));
                }
            }
        }
        if space.claims_meet_space() {
            idem.checked += 1;
            let m = space.meet(a, a)?;
            if !space.equivalent(&m, a)? {
                idem.record_failure(Witness::new(
                    vec![a.to_string()],
                    "α∧α not equivalent to α",
                ));
            }
        }
    }

    // [C2] over refining pairs: for α≺α′, β≺β′ require α∧β ≺ α′∧β′.
    let mut le_pairs: Vec<(usize, usize)> = Vec::new();
    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate() {
            if space.refines(a, b)? {
                le_pairs.push((i, j));
            }
        }
    }
    for &(i, i2) in &le_pairs {
        for &(j, j2) in &le_pairs {
            c2.checked += 1;
            let lhs = space.meet(&sample[i], &sample[j])?;
            let rhs = space.meet(&sample[i2], &sample[j2])?;
            if !space.refines(&lhs, &rhs)? {
                c2.record_failure(Witness::new(
                    vec![
                        sample[i].to_string(),
                        sample[i2].to_string(),
                        sample[j].to_string(),
                        sample[j2].to_string(),
                    ],
                    "α≺α′ and β≺β′ but α∧β does not refine α′∧β′",
                ));
            }
        }
    }

    for a in sample {
        for b in sample {
            for c in sample {
                assoc.checked += 1;
                let left = space.meet(&space.meet(a, b)?, c)?;
                let right = space.meet(a, &space.meet(b, c)?)?;
                if !space.equivalent(&left, &right)? {
                    assoc.record_failure(Witness::new(
                        vec![a.to_string(), b.to_string(), c.to_string()],
                        "(α∧β)∧γ not equivalent to α∧(β∧γ)",
                    ));
                }
            }
        }
    }

    if let Some(unit) = space.unit() {
        match space.norm(&unit) {
            Ok(n) if n == ExtReal::ZERO => {}
            Ok(n) => unit_flag.record_failure(Witness::new(
                vec![unit.to_string()],
                format!("unit norm is {n}, expected 0"),
            )),
            Err(e) => unit_flag.record_failure(Witness::new(
                vec![unit.to_string()],
                format!("unit norm failed: {e}"),
            )),
        }
        for a in sample {
            unit_flag.checked += 1;
            if !space.refines(a, &unit)? {
                unit_flag.record_failure(Witness::new(
                    vec![a.to_string()],
                    "element does not refine the unit",
                ));
            }
            let l = space.meet(&unit, a)?;
            let r = space.meet(a, &unit)?;
            if !(space.equivalent(&l, a)? && space.equivalent(&r, a)?) {
                unit_flag.record_failure(Witness::new(
                    vec![a.to_string()],
                    "meet with unit not equivalent to the element",
                ));
            }
        }
    }

    let mut checks = vec![
        AxiomCheck { axiom: Axiom::MeetRefinesFactors, flag: c1 },
        AxiomCheck { axiom: Axiom::MeetMonotone, flag: c2 },
        AxiomCheck { axiom: Axiom::AssociativeUpToEquiv, flag: assoc },
    ];
    if space.claims_commutative() {
        checks.push(AxiomCheck { axiom: Axiom::CommutativeUpToEquiv, flag: comm });
    }
    if space.claims_meet_space() {
        checks.push(AxiomCheck { axiom: Axiom::MeetIdempotent, flag: idem });
    }
    if space.unit().is_some() {
        checks.push(AxiomCheck { axiom: Axiom::UnitLaws, flag: unit_flag });
    }

    Ok(AxiomReport {
        space: space.name().to_string(),
        checks,
        exhaustive: is_exhaustive(space, sample),
    })
}

/// Checks the norm axioms `[H1]` (antitone) and `[H2]` (subadditive) on
/// `sample`, comparing finite values up to `tol`.
pub fn check_norm_axioms(space: &CoverSpace, sample: &[Cover], tol: f64) -> Result<AxiomReport> {
    for c in sample {
        space.owns(c)?;
    }
    let mut h1 = Flag::default();
    let mut h2 = Flag::default();

    let norms: Vec<ExtReal> = sample
        .iter()
        .map(|c| space.norm(c))
        .collect::<Result<_>>()?;

    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate() {
            if space.refines(a, b)? {
                h1.checked += 1;
                if !norms[j].le_approx(norms[i], tol) {
                    h1.record_failure(Witness::new(
                        vec![a.to_string(), b.to_string()],
                        format!(
                            "α ≺ β but h(α) = {} < h(β) = {}",
                            norms[i], norms[j]
                        ),
                    ));
                }
            }
            h2.checked += 1;
            let m = space.meet(a, b)?;
            let hm = space.norm(&m)?;
            if !hm.le_approx(norms[i] + norms[j], tol) {
                h2.record_failure(Witness::new(
                    vec![a.to_string(), b.to_string(), m.to_string()],
                    format!(
                        "h(α∧β) = {} exceeds h(α)+h(β) = {}",
                        hm,
                        norms[i] + norms[j]
                    ),
                ));
            }
        }
    }

    Ok(AxiomReport {
        space: space.name().to_string(),
        checks: vec![
            AxiomCheck { axiom: Axiom::NormAntitone, flag: h1 },
            AxiomCheck { axiom: Axiom::NormSubadditive, flag: h2 },
        ],
        exhaustive: is_exhaustive(space, sample),
    })
}
