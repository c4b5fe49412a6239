//! Engine behind the `entrospace` binary: fixture parsing, the four
//! commands (`check`, `entropy`, `expansivity`, `laws`), and deterministic
//! report rendering. The same entry points back the Python module.

pub mod engine;
pub mod fixture;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use engine::System;
use entrospace::classify::classify_map;
use entrospace::construct::{
    classify_connection, compare_entropy, product_projection, Connection, ConnectionClass,
};
use entrospace::entropy::norm_supremum;
use entrospace::expansive::{
    generator_system_entropy, is_generator, is_positive_generator, GeneratorKind,
    GeneratorOutcome,
};
use entrospace::{
    check_cover_axioms, check_norm_axioms, entropy_bilateral, entropy_over_family,
    entropy_relative, power_map, EntError, EntropyEstimate, EntropyParams, ExtReal, FamilyKind,
};
use fixture::{Fixture, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("analysis error: {0}")]
    Analysis(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    pub fn analysis(msg: impl Into<String>) -> Self {
        CliError::Analysis(msg.into())
    }

    fn from_ent(e: EntError) -> Self {
        match e {
            EntError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Analysis(other.to_string()),
        }
    }
}

/// Exit codes: 0 success, 2 schema error, 3 failed analysis, 4 budget
/// exhaustion, 1 anything else.
pub fn exit_code(outcome: &Result<Report, CliError>) -> i32 {
    match outcome {
        Ok(r) if r.failures == 0 => 0,
        Ok(_) => 3,
        Err(CliError::Schema(_)) => 2,
        Err(CliError::Analysis(_)) => 3,
        Err(CliError::Budget(_)) => 4,
        Err(CliError::Io(_)) => 1,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Command {
    Check,
    Entropy,
    Expansivity,
    Laws,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Entropy => "entropy",
            Command::Expansivity => "expansivity",
            Command::Laws => "laws",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub horizon: Option<u32>,
    pub budget: Option<u64>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Settings {
    pub horizon: u32,
    pub budget: u64,
    pub tolerance: f64,
    pub m_budget: u32,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub name: String,
    /// "pass", "fail", "info", or "skipped".
    pub outcome: String,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Deterministic work counter (cases examined), in place of wall time.
    pub cases: usize,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Analysis {
    fn new(name: &str, outcome: &str, summary: impl Into<String>) -> Analysis {
        Analysis {
            name: name.to_string(),
            outcome: outcome.to_string(),
            summary: summary.into(),
            witness: None,
            cases: 0,
            data: Value::Null,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub system: String,
    pub settings: Settings,
    pub analyses: Vec<Analysis>,
    pub failures: usize,
}

impl Report {
    fn push(&mut self, a: Analysis) {
        if a.outcome == "fail" {
            self.failures += 1;
        }
        self.analyses.push(a);
    }
}

fn ext_json(v: ExtReal) -> Value {
    match v.finite() {
        Some(x) => json!(x),
        None => json!("inf"),
    }
}

fn ext_str(v: ExtReal) -> String {
    match v.finite() {
        Some(x) => format!("{x:.9}"),
        None => "inf".to_string(),
    }
}

fn estimate_json(est: &EntropyEstimate) -> Value {
    json!({
        "horizon": est.horizon,
        "a_seq": est.a_seq.iter().map(|v| ext_json(*v)).collect::<Vec<_>>(),
        "quotients": est.quotients.iter().map(|v| ext_json(*v)).collect::<Vec<_>>(),
        "running_inf": ext_json(est.running_inf),
        "exact": est.exact.map(|e| json!({"value": ext_json(e.value), "reason": e.reason.to_string()})).unwrap_or(Value::Null),
        "valid_upper_bound": est.valid_upper_bound,
        "stabilized_at": est.stabilized_at,
        "label": est.label(),
    })
}

/// Parses a fixture, builds the system and runs one command.
pub fn run_str(command: Command, fixture_json: &str, opts: &Options) -> Result<Report, CliError> {
    let fixture: Fixture = serde_json::from_str(fixture_json).map_err(|e| {
        CliError::Schema(format!("line {}, column {}: {}", e.line(), e.column(), e))
    })?;
    if fixture.schema != SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            fixture.schema
        )));
    }
    let mut system = engine::build_system(&fixture.system, &fixture.analysis)?;
    if let Some(seed) = opts.seed {
        rotate_samples(&mut system, seed);
    }

    let params = EntropyParams {
        horizon: opts.horizon.or(fixture.analysis.horizon).unwrap_or(16).max(1),
        budget: opts.budget.or(fixture.analysis.budget).unwrap_or(10_000_000),
        tolerance: opts.tolerance.or(fixture.analysis.tolerance).unwrap_or(1e-9),
    };
    let m_budget = fixture.analysis.m_budget.unwrap_or(64);

    let mut report = Report {
        schema: SCHEMA_VERSION,
        command: command.name().to_string(),
        system: system.label.clone(),
        settings: Settings {
            horizon: params.horizon,
            budget: params.budget,
            tolerance: params.tolerance,
            m_budget,
        },
        analyses: Vec::new(),
        failures: 0,
    };

    match command {
        Command::Check => cmd_check(&system, &params, &mut report)?,
        Command::Entropy => cmd_entropy(&system, &fixture, &params, &mut report)?,
        Command::Expansivity => {
            cmd_expansivity(&system, &fixture, &params, m_budget, &mut report)?
        }
        Command::Laws => cmd_laws(&system, &params, m_budget, &mut report)?,
    }
    Ok(report)
}

fn rotate_samples(system: &mut System, seed: u64) {
    for list in [&mut system.sample, &mut system.targets] {
        if !list.is_empty() {
            let k = (seed % list.len() as u64) as usize;
            list.rotate_left(k);
        }
    }
}

fn cmd_check(system: &System, params: &EntropyParams, report: &mut Report) -> Result<(), CliError> {
    let cover_report =
        check_cover_axioms(&system.space, &system.sample).map_err(CliError::from_ent)?;
    for check in &cover_report.checks {
        let mut a = Analysis::new(
            &format!("cover-axiom: {}", check.axiom),
            if check.flag.holds { "pass" } else { "fail" },
            if cover_report.exhaustive { "checked exhaustively" } else { "checked on a sample" },
        );
        a.cases = check.flag.checked;
        a.witness = check.flag.witness.as_ref().map(|w| w.to_string());
        report.push(a);
    }

    let norm_report = check_norm_axioms(&system.space, &system.sample, params.tolerance)
        .map_err(CliError::from_ent)?;
    for check in &norm_report.checks {
        let mut a = Analysis::new(
            &format!("norm-axiom: {}", check.axiom),
            if check.flag.holds { "pass" } else { "fail" },
            if norm_report.exhaustive { "checked exhaustively" } else { "checked on a sample" },
        );
        a.cases = check.flag.checked;
        a.witness = check.flag.witness.as_ref().map(|w| w.to_string());
        report.push(a);
    }

    let class = classify_map(&system.map, &system.sample, params.tolerance)
        .map_err(CliError::from_ent)?;
    let declared = system.map.declared_class();
    let ok = class.satisfies(declared);
    let mut a = Analysis::new(
        "map-classification",
        if ok { "pass" } else { "fail" },
        format!(
            "declared {declared}; strongest observed {}{}",
            class.best_class(),
            if class.sampled { " (sampled)" } else { " (exhaustive)" }
        ),
    );
    a.cases = class.monotone.checked;
    a.data = json!({
        "declared": declared.to_string(),
        "observed_best": class.best_class().to_string(),
        "supported": class.supported_classes().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "sampled": class.sampled,
    });
    if !ok {
        for flag in [&class.monotone, &class.l1, &class.l2, &class.u1, &class.u2, &class.m1, &class.m2]
        {
            if let Some(w) = &flag.witness {
                a.witness = Some(w.to_string());
                break;
            }
        }
    }
    report.push(a);
    Ok(())
}

fn cmd_entropy(
    system: &System,
    fixture: &Fixture,
    params: &EntropyParams,
    report: &mut Report,
) -> Result<(), CliError> {
    let cover = match &fixture.analysis.cover {
        Some(spec) => system.resolve_cover(spec)?,
        None => system.default_cover.clone(),
    };
    let est = entropy_relative(&system.space, &system.map, &cover, params)
        .map_err(CliError::from_ent)?;
    let mut a = Analysis::new(
        "entropy-relative",
        "pass",
        format!("value {} — {}", ext_str(est.value()), est.label()),
    );
    a.cases = est.a_seq.len();
    a.data = estimate_json(&est);
    report.push(a);

    let family = match &fixture.analysis.family {
        Some(specs) => specs
            .iter()
            .map(|s| system.resolve_cover(s))
            .collect::<Result<Vec<_>, _>>()?,
        None => system.family.clone(),
    };
    if !family.is_empty() {
        let kind = if fixture.analysis.family.is_some() {
            FamilyKind::Plain
        } else if system.family_cofinal {
            FamilyKind::Cofinal
        } else {
            FamilyKind::Plain
        };
        let fam = entropy_over_family(&system.space, &system.map, &family, kind, params)
            .map_err(CliError::from_ent)?;
        let mut a = Analysis::new(
            "entropy-family",
            "pass",
            format!(
                "supremum {} over {} covers ({})",
                ext_str(fam.value),
                fam.members.len(),
                fam.provenance
            ),
        );
        a.cases = fam.members.len();
        a.data = json!({
            "value": ext_json(fam.value),
            "provenance": fam.provenance.to_string(),
            "all_members_exact": fam.all_members_exact,
            "members": fam.members.iter().map(|(c, e)| json!({
                "cover": c.to_string(),
                "value": ext_json(e.value()),
                "label": e.label(),
            })).collect::<Vec<_>>(),
        });
        report.push(a);
    }

    if system.map.has_inverse() {
        match entropy_bilateral(&system.space, &system.map, &cover, params) {
            Ok(est) => {
                let mut a = Analysis::new(
                    "entropy-bilateral",
                    "pass",
                    format!("two-sided value {} — {}", ext_str(est.value()), est.label()),
                );
                a.cases = est.a_seq.len();
                a.data = estimate_json(&est);
                report.push(a);
            }
            Err(EntError::DeclaredClassTooStrong { observed, .. }) => {
                report.push(Analysis::new(
                    "entropy-bilateral",
                    "skipped",
                    format!(
                        "two-sided formula needs an isomorphism; the map classifies as {observed}"
                    ),
                ));
            }
            Err(e) => return Err(CliError::from_ent(e)),
        }
    }
    Ok(())
}

fn cmd_expansivity(
    system: &System,
    fixture: &Fixture,
    params: &EntropyParams,
    m_budget: u32,
    report: &mut Report,
) -> Result<(), CliError> {
    let alpha = match &fixture.analysis.cover {
        Some(spec) => system.resolve_cover(spec)?,
        None => system.default_cover.clone(),
    };
    if system.targets.is_empty() {
        report.push(Analysis::new(
            "positive-generator",
            "skipped",
            "no target family declared for this system",
        ));
        return Ok(());
    }

    let outcome =
        is_positive_generator(&system.space, &system.map, &alpha, &system.targets, m_budget)
            .map_err(CliError::from_ent)?;
    match &outcome {
        GeneratorOutcome::Certified(cert) => {
            let verified = cert.verify(&system.space, &system.map).map_err(CliError::from_ent)?;
            let max_m = cert.witnesses.iter().map(|(_, m)| *m).max().unwrap_or(0);
            let mut a = Analysis::new(
                "positive-generator",
                if verified { "pass" } else { "fail" },
                format!(
                    "certified over {} targets (max exponent {max_m}, scope {:?}); re-verification {}",
                    cert.witnesses.len(),
                    cert.scope,
                    if verified { "succeeded" } else { "failed" }
                ),
            );
            a.cases = cert.witnesses.len();
            a.data = json!({
                "scope": format!("{:?}", cert.scope),
                "max_exponent": max_m,
                "witnesses": cert.witnesses.iter().map(|(c, m)| json!({
                    "target": c.to_string(),
                    "m": m,
                })).collect::<Vec<_>>(),
            });
            report.push(a);

            // Localized entropy via the certificate.
            match generator_system_entropy(
                &system.space,
                &system.map,
                std::slice::from_ref(&alpha),
                &system.targets,
                GeneratorKind::Positive,
                m_budget,
                params,
            ) {
                Ok(sys) => {
                    let mut a = Analysis::new(
                        "generator-entropy",
                        "pass",
                        format!(
                            "localized value {} ({})",
                            ext_str(sys.family.value),
                            sys.family.provenance
                        ),
                    );
                    a.cases = sys.witnesses.len();
                    a.data = json!({
                        "value": ext_json(sys.family.value),
                        "exhaustive_scope": sys.exhaustive_scope,
                    });
                    report.push(a);
                }
                Err(e) => {
                    report.push(Analysis::new(
                        "generator-entropy",
                        "skipped",
                        format!("not localized: {e}"),
                    ));
                }
            }
        }
        GeneratorOutcome::Refused(r) => {
            // Exhaustive targets make the refusal a proof; a sampled
            // family only yields a budget-bounded inconclusive outcome.
            let mut a = Analysis::new(
                "positive-generator",
                if system.exhaustive { "fail" } else { "info" },
                format!(
                    "no exponent up to {} refines target {}{}",
                    r.m_budget,
                    r.failing,
                    if system.exhaustive { "" } else { " (budget-bounded, inconclusive)" }
                ),
            );
            a.witness = Some(r.failing.to_string());
            report.push(a);
        }
    }

    if system.map.has_inverse() {
        let outcome =
            is_generator(&system.space, &system.map, &alpha, &system.targets, m_budget)
                .map_err(CliError::from_ent)?;
        let a = match &outcome {
            GeneratorOutcome::Certified(cert) => {
                let max_m = cert.witnesses.iter().map(|(_, m)| *m).max().unwrap_or(0);
                let mut a = Analysis::new(
                    "two-sided-generator",
                    "pass",
                    format!(
                        "certified over {} targets (max exponent {max_m})",
                        cert.witnesses.len()
                    ),
                );
                a.cases = cert.witnesses.len();
                a
            }
            GeneratorOutcome::Refused(r) => {
                let mut a = Analysis::new(
                    "two-sided-generator",
                    if system.exhaustive { "fail" } else { "info" },
                    format!(
                        "no exponent up to {} refines target {}{}",
                        r.m_budget,
                        r.failing,
                        if system.exhaustive { "" } else { " (budget-bounded, inconclusive)" }
                    ),
                );
                a.witness = Some(r.failing.to_string());
                a
            }
        };
        report.push(a);
    }
    Ok(())
}

fn cmd_laws(
    system: &System,
    params: &EntropyParams,
    m_budget: u32,
    report: &mut Report,
) -> Result<(), CliError> {
    law_log_quotients(system, params, report)?;
    law_product_additivity(system, params, report)?;
    law_f_product_max(system, params, report)?;
    law_shift_entropy(system, params, m_budget, report)?;
    law_comparison(system, params, report)?;
    law_axiom_preservation(system, params, report)?;
    Ok(())
}

/// Power law at the quotient level: `a_n(λᵐ, α) ≤ a_{nm}(λ, α)` and
/// `a_n(λᵐ, α₀^{m−1}) ≥ a_{nm}(λ, α)` for every computed index.
fn law_log_quotients(
    system: &System,
    params: &EntropyParams,
    report: &mut Report,
) -> Result<(), CliError> {
    if !system.map.declared_class().implies_lower_map() {
        report.push(Analysis::new(
            "law: power quotients (h(λᵐ) vs m·h(λ))",
            "skipped",
            "declared class does not guarantee subadditive trajectories",
        ));
        return Ok(());
    }
    let alpha = &system.default_cover;
    let mut cases = 0usize;
    let mut failure = None;
    for m in 1u32..=3 {
        let horizon = EntropyParams { horizon: params.horizon.clamp(4, 24), ..*params };
        let deep = EntropyParams {
            horizon: horizon.horizon * m,
            ..*params
        };
        let base = entropy_relative(&system.space, &system.map, alpha, &deep)
            .map_err(CliError::from_ent)?;
        let pow = power_map(&system.map, m as i64).map_err(CliError::from_ent)?;
        let at_alpha =
            entropy_relative(&system.space, &pow, alpha, &horizon).map_err(CliError::from_ent)?;
        let block = entrospace::trajectory_meet(&system.space, &system.map, alpha, 0, m as i64 - 1)
            .map_err(CliError::from_ent)?;
        let at_block =
            entropy_relative(&system.space, &pow, &block, &horizon).map_err(CliError::from_ent)?;
        let upto = at_alpha
            .a_seq
            .len()
            .min(at_block.a_seq.len())
            .min(base.a_seq.len() / m as usize);
        for n in 1..=upto {
            cases += 1;
            let base_nm = base.a_seq[n * m as usize - 1];
            if !at_alpha.a_seq[n - 1].le_approx(base_nm, params.tolerance) {
                failure = Some(format!("m={m}, n={n}: a_n(λᵐ,α) exceeds a_(nm)(λ,α)"));
            }
            if !base_nm.le_approx(at_block.a_seq[n - 1], params.tolerance) {
                failure = Some(format!("m={m}, n={n}: a_(nm)(λ,α) exceeds a_n(λᵐ,α₀^(m−1))"));
            }
        }
    }
    let mut a = Analysis::new(
        "law: power quotients (h(λᵐ) vs m·h(λ))",
        if failure.is_none() { "pass" } else { "fail" },
        "trajectory norms of powers interleave with the base trajectory at every index",
    );
    a.cases = cases;
    a.witness = failure;
    report.push(a);
    Ok(())
}

fn law_product_additivity(
    system: &System,
    params: &EntropyParams,
    report: &mut Report,
) -> Result<(), CliError> {
    if system.op.as_deref() != Some("product") {
        report.push(Analysis::new(
            "law: product additivity (h(∏λᵢ) = Σ h(λᵢ))",
            "skipped",
            "system is not a product construction",
        ));
        return Ok(());
    }
    let est = entropy_relative(&system.space, &system.map, &system.default_cover, params)
        .map_err(CliError::from_ent)?;
    let mut part_seqs = Vec::new();
    for part in &system.parts {
        let e = entropy_relative(&part.space, &part.map, &part.default_cover, params)
            .map_err(CliError::from_ent)?;
        part_seqs.push(e);
    }
    let upto = part_seqs
        .iter()
        .map(|e| e.a_seq.len())
        .chain([est.a_seq.len()])
        .min()
        .unwrap_or(0);
    let mut failure = None;
    for n in 0..upto {
        let sum: ExtReal = part_seqs.iter().map(|e| e.a_seq[n]).sum();
        if !est.a_seq[n].approx_eq(sum, params.tolerance) {
            failure = Some(format!(
                "n={}: a_n(product) = {} but Σ a_n(parts) = {}",
                n + 1,
                ext_str(est.a_seq[n]),
                ext_str(sum)
            ));
            break;
        }
    }
    let mut a = Analysis::new(
        "law: product additivity (h(∏λᵢ) = Σ h(λᵢ))",
        if failure.is_none() { "pass" } else { "fail" },
        format!("trajectory norms add componentwise at every index (checked {upto})"),
    );
    a.cases = upto;
    a.witness = failure;
    report.push(a);
    Ok(())
}

fn law_f_product_max(
    system: &System,
    params: &EntropyParams,
    report: &mut Report,
) -> Result<(), CliError> {
    if system.op.as_deref() != Some("f_product") {
        report.push(Analysis::new(
            "law: combined-norm product tends to max(h₁, h₂)",
            "skipped",
            "system is not an f_product construction",
        ));
        return Ok(());
    }
    let est = entropy_relative(&system.space, &system.map, &system.default_cover, params)
        .map_err(CliError::from_ent)?;
    let e1 = entropy_relative(
        &system.parts[0].space,
        &system.parts[0].map,
        &system.parts[0].default_cover,
        params,
    )
    .map_err(CliError::from_ent)?;
    let e2 = entropy_relative(
        &system.parts[1].space,
        &system.parts[1].map,
        &system.parts[1].default_cover,
        params,
    )
    .map_err(CliError::from_ent)?;
    let upto = est.a_seq.len().min(e1.a_seq.len()).min(e2.a_seq.len());
    let mut failure = None;
    for n in 0..upto {
        let (a1, a2) = (e1.a_seq[n], e2.a_seq[n]);
        let expected = match (a1.finite(), a2.finite()) {
            (Some(x), Some(y)) => {
                let m = x.max(y);
                ExtReal::Finite(m + (x.min(y) - m).exp().ln_1p())
            }
            _ => ExtReal::Infinity,
        };
        if !est.a_seq[n].approx_eq(expected, params.tolerance) {
            failure = Some(format!("n={}: combined norm differs from log(e^a + e^b)", n + 1));
            break;
        }
    }
    let max_part = e1.running_inf.max(e2.running_inf);
    let mut a = Analysis::new(
        "law: combined-norm product tends to max(h₁, h₂)",
        if failure.is_none() { "pass" } else { "fail" },
        format!(
            "per-index combination exact; running bound {} vs component max {}",
            ext_str(est.running_inf),
            ext_str(max_part)
        ),
    );
    a.cases = upto;
    a.witness = failure;
    report.push(a);
    Ok(())
}

fn law_shift_entropy(
    system: &System,
    params: &EntropyParams,
    m_budget: u32,
    report: &mut Report,
) -> Result<(), CliError> {
    let name = "law: shift entropy equals the base norm supremum";
    if !matches!(system.op.as_deref(), Some("shift") | Some("bernoulli")) {
        report.push(Analysis::new(name, "skipped", "system is not a shift construction"));
        return Ok(());
    }
    let base = &system.parts[0];
    let Ok(sup) = norm_supremum(&base.space) else {
        report.push(Analysis::new(name, "skipped", "base space is not enumerable"));
        return Ok(());
    };
    let sys = generator_system_entropy(
        &system.space,
        &system.map,
        &system.family,
        &system.targets,
        GeneratorKind::Positive,
        m_budget,
        params,
    )
    .map_err(CliError::from_ent)?;
    let ok = sys.family.value.approx_eq(sup, 1e-9);
    let mut a = Analysis::new(
        name,
        if ok { "pass" } else { "fail" },
        format!(
            "generator-system entropy {} vs base norm supremum {}",
            ext_str(sys.family.value),
            ext_str(sup)
        ),
    );
    a.cases = sys.witnesses.len();
    report.push(a);
    Ok(())
}

fn law_comparison(
    system: &System,
    params: &EntropyParams,
    report: &mut Report,
) -> Result<(), CliError> {
    let name = "law: projection connections license entropy comparisons";
    if system.op.as_deref() != Some("product") {
        report.push(Analysis::new(name, "skipped", "system is not a product construction"));
        return Ok(());
    }
    let factors: Vec<_> = system.parts.iter().map(|p| p.space.clone()).collect();
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (i, part) in system.parts.iter().enumerate() {
        let proj = product_projection(&system.space, &factors, i)
            .map_err(CliError::from_ent)?;
        let conn = Connection::new(
            proj,
            system.map.clone(),
            part.map.clone(),
            ConnectionClass::Lower,
        )
        .map_err(CliError::from_ent)?;
        let rep = classify_connection(&conn, &system.sample, params.tolerance)
            .map_err(CliError::from_ent)?;
        let verdict = compare_entropy(&conn, &system.sample, params.tolerance)
            .map_err(CliError::from_ent)?;
        all_ok &= rep.is_lower_connection();
        lines.push(json!({
            "factor": i,
            "lower_connection": rep.is_lower_connection(),
            "cofinal": format!("{:?}", rep.cofinal).split('(').next().unwrap_or("Unknown").to_string(),
            "verdict": verdict.relation.to_string(),
            "justification": verdict.justification,
        }));
    }
    let mut a = Analysis::new(
        name,
        if all_ok { "pass" } else { "fail" },
        "each projection intertwines the dynamics as a lower connection",
    );
    a.cases = system.parts.len();
    a.data = Value::Array(lines);
    report.push(a);
    Ok(())
}

fn law_axiom_preservation(
    system: &System,
    params: &EntropyParams,
    report: &mut Report,
) -> Result<(), CliError> {
    let name = "law: constructed space satisfies the cover and norm axioms";
    if system.op.is_none() {
        report.push(Analysis::new(name, "skipped", "system is not a construction"));
        return Ok(());
    }
    let cover_report =
        check_cover_axioms(&system.space, &system.sample).map_err(CliError::from_ent)?;
    let norm_report = check_norm_axioms(&system.space, &system.sample, params.tolerance)
        .map_err(CliError::from_ent)?;
    let ok = cover_report.all_pass() && norm_report.all_pass();
    let witness = cover_report
        .failures()
        .chain(norm_report.failures())
        .next()
        .and_then(|c| c.flag.witness.as_ref().map(|w| w.to_string()));
    let mut a = Analysis::new(
        name,
        if ok { "pass" } else { "fail" },
        if cover_report.exhaustive { "checked exhaustively" } else { "checked on a sample" },
    );
    a.cases = cover_report.checks.iter().map(|c| c.flag.checked).sum::<usize>()
        + norm_report.checks.iter().map(|c| c.flag.checked).sum::<usize>();
    a.witness = witness;
    report.push(a);
    Ok(())
}

/// Human-readable rendering (stable across runs for identical inputs).
pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} — {}\nhorizon {}, budget {}, tolerance {:e}, m_budget {}\n",
        report.command,
        report.system,
        report.settings.horizon,
        report.settings.budget,
        report.settings.tolerance,
        report.settings.m_budget,
    ));
    for a in &report.analyses {
        out.push_str(&format!("[{:^7}] {} — {}", a.outcome, a.name, a.summary));
        if a.cases > 0 {
            out.push_str(&format!(" ({} cases)", a.cases));
        }
        out.push('\n');
        if let Some(w) = &a.witness {
            out.push_str(&format!("          witness: {w}\n"));
        }
    }
    out.push_str(&format!(
        "{}: {} analyses, {} failures\n",
        if report.failures == 0 { "ok" } else { "failed" },
        report.analyses.len(),
        report.failures,
    ));
    out
}

pub fn render_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}
