//! Connections: maps intertwining two dynamical systems, and the verdicts
//! they license about the systems' entropies.
//!
//! For `μ : C₁ → C₂` between systems `λ₁`, `λ₂` (with `λ₂` monotone):
//!
//! * an upper connection (`μ` an upper map with `μλ₁α ≻ λ₂μα`) gives
//!   `h(λ₁) ≤ h(λ₂)`;
//! * a cofinal lower connection gives `h(λ₁) ≥ h(λ₂)`;
//! * a cofinal connection gives equality, as does a conjugation (a
//!   bijective bi-monotone connection).

use std::fmt;

use crate::classify::{classify_map, ClassReport};
use crate::diagnostics::{Flag, Witness};
use crate::error::{EntError, Result};
use crate::map::{CoverMap, MapClass};
use crate::space::Cover;

/// Declared strength of a connection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConnectionClass {
    Lower,
    Upper,
    Full,
    Conjugation,
}

impl fmt::Display for ConnectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConnectionClass::Lower => "lower connection",
            ConnectionClass::Upper => "upper connection",
            ConnectionClass::Full => "connection",
            ConnectionClass::Conjugation => "conjugation",
        };
        f.write_str(s)
    }
}

/// Cofinality of the connecting map's image in the target space.
#[derive(Clone, Debug)]
pub enum Cofinality {
    Certified,
    No(Witness),
    Unknown,
}

impl Cofinality {
    pub fn is_certified(&self) -> bool {
        matches!(self, Cofinality::Certified)
    }
}

/// A map between two dynamical systems.
pub struct Connection {
    pub mu: CoverMap,
    pub source_map: CoverMap,
    pub target_map: CoverMap,
    pub declared: ConnectionClass,
}

impl Connection {
    pub fn new(
        mu: CoverMap,
        source_map: CoverMap,
        target_map: CoverMap,
        declared: ConnectionClass,
    ) -> Result<Connection> {
        if mu.source().id() != source_map.source().id()
            || mu.target().id() != target_map.source().id()
            || !source_map.is_self_map()
            || !target_map.is_self_map()
        {
            return Err(EntError::precondition(
                "connection endpoints do not line up with the dynamics",
            ));
        }
        Ok(Connection { mu, source_map, target_map, declared })
    }
}

/// Classification outcome for a connection.
#[derive(Clone, Debug)]
pub struct ConnectionReport {
    /// Map-level axioms of `μ` between the two entropy spaces.
    pub mu_report: ClassReport,
    /// `μλ₁α ≺ λ₂μα` on the sample.
    pub intertwine_lower: Flag,
    /// `μλ₁α ≻ λ₂μα` on the sample.
    pub intertwine_upper: Flag,
    pub cofinal: Cofinality,
    pub sampled: bool,
}

impl ConnectionReport {
    pub fn is_lower_connection(&self) -> bool {
        let a = self.mu_report.axioms();
        a.mono && a.l1 && a.l2 && self.intertwine_lower.holds
    }

    pub fn is_upper_connection(&self) -> bool {
        let a = self.mu_report.axioms();
        a.mono && a.u1 && a.u2 && self.intertwine_upper.holds
    }

    pub fn is_connection(&self) -> bool {
        let a = self.mu_report.axioms();
        a.mono
            && a.m1
            && a.m2
            && self.intertwine_lower.holds
            && self.intertwine_upper.holds
    }

    pub fn is_conjugation(&self) -> bool {
        self.is_connection() && self.mu_report.axioms().iso
    }

    pub fn supports(&self, class: ConnectionClass) -> bool {
        match class {
            ConnectionClass::Lower => self.is_lower_connection(),
            ConnectionClass::Upper => self.is_upper_connection(),
            ConnectionClass::Full => self.is_connection(),
            ConnectionClass::Conjugation => self.is_conjugation(),
        }
    }
}

/// Classifies a connection over a sample of source covers: the map axioms
/// of `μ` plus the intertwining relations, and cofinality certified
/// exhaustively when the target is enumerable.
pub fn classify_connection(
    conn: &Connection,
    sample: &[Cover],
    tol: f64,
) -> Result<ConnectionReport> {
    let mu_report = classify_map(&conn.mu, sample, tol)?;
    let target = conn.mu.target();

    let mut lower = Flag::default();
    let mut upper = Flag::default();
    for a in sample {
        let via_source = conn.mu.apply(&conn.source_map.apply(a)?)?;
        let via_target = conn.target_map.apply(&conn.mu.apply(a)?)?;
        lower.checked += 1;
        if !target.refines(&via_source, &via_target)? {
            lower.record_failure(Witness::new(
                vec![a.to_string()],
                "μλ₁α does not refine λ₂μα",
            ));
        }
        upper.checked += 1;
        if !target.refines(&via_target, &via_source)? {
            upper.record_failure(Witness::new(
                vec![a.to_string()],
                "λ₂μα does not refine μλ₁α",
            ));
        }
    }

    let cofinal = match target.enumeration() {
        Some(targets) => {
            let mut verdict = Cofinality::Certified;
            'targets: for beta in &targets {
                for alpha in sample {
                    if target.refines(&conn.mu.apply(alpha)?, beta)? {
                        continue 'targets;
                    }
                }
                verdict = Cofinality::No(Witness::new(
                    vec![beta.to_string()],
                    "no sampled image refines this target element",
                ));
                break;
            }
            verdict
        }
        None => Cofinality::Unknown,
    };

    Ok(ConnectionReport {
        sampled: mu_report.sampled,
        mu_report,
        intertwine_lower: lower,
        intertwine_upper: upper,
        cofinal,
    })
}

/// Relation between the two entropies licensed by a connection.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerdictRelation {
    SourceLeqTarget,
    SourceGeqTarget,
    Equal,
    NoVerdict,
}

impl fmt::Display for VerdictRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictRelation::SourceLeqTarget => "h(λ₁) ≤ h(λ₂)",
            VerdictRelation::SourceGeqTarget => "h(λ₁) ≥ h(λ₂)",
            VerdictRelation::Equal => "h(λ₁) = h(λ₂)",
            VerdictRelation::NoVerdict => "no verdict",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub relation: VerdictRelation,
    pub justification: String,
    pub report: ConnectionReport,
}

/// Derives the entropy comparison licensed by the observed connection
/// class and cofinality. The target dynamics must be monotone (every
/// declared class implies it).
pub fn compare_entropy(conn: &Connection, sample: &[Cover], tol: f64) -> Result<Verdict> {
    let report = classify_connection(conn, sample, tol)?;
    let upper = report.is_upper_connection();
    let lower = report.is_lower_connection();
    let full = report.is_connection();
    let cofinal = report.cofinal.is_certified();
    let conjugation = report.is_conjugation();

    let (relation, justification) = if conjugation {
        (VerdictRelation::Equal, "the systems are conjugate".to_string())
    } else if full && cofinal {
        (VerdictRelation::Equal, "cofinal connection".to_string())
    } else if lower && upper {
        // A connection without certified cofinality still bounds from
        // above via its upper half.
        (VerdictRelation::SourceLeqTarget, "connection (cofinality uncertified)".to_string())
    } else if upper {
        (VerdictRelation::SourceLeqTarget, "upper connection".to_string())
    } else if lower && cofinal {
        (VerdictRelation::SourceGeqTarget, "cofinal lower connection".to_string())
    } else {
        (
            VerdictRelation::NoVerdict,
            "hypotheses unmet: need an upper connection or a cofinal lower connection"
                .to_string(),
        )
    };
    Ok(Verdict { relation, justification, report })
}

impl MapClass {
    /// Connection flavor this map class can support on its own axioms.
    pub fn connection_flavor(self) -> Option<ConnectionClass> {
        let a = self.axioms();
        if a.m1 && a.m2 {
            Some(ConnectionClass::Full)
        } else if a.l1 && a.l2 {
            Some(ConnectionClass::Lower)
        } else if a.u1 && a.u2 {
            Some(ConnectionClass::Upper)
        } else {
            None
        }
    }
}
