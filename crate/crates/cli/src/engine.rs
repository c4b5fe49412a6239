//! Turns fixture descriptions into live systems: a space, a self-map, and
//! the canonical cover families the analyses run over.

use entrospace::alg::{
    adjoint_map, adjoint_space, backward_weiss_map, bernoulli_weiss_shift, enumerate_subgroups,
    weiss_map, weiss_space, Endomorphism, FinAbGroup, Subgroup,
};
use entrospace::construct::{
    adjoin_unit, coproduct_map, coproduct_space, f_product_map, f_product_space,
    finite_support_tuples, lift_unital, log_sum_exp, product_map, product_space,
    quotient_system, shift_space_map, IndexKind,
};
use entrospace::extreal::ExtReal;
use entrospace::fixtures::FiniteSpaceSpec;
use entrospace::symbolic::{
    disjoint_union, product_sft, sft_space, shift_forward_map, shift_preimage_map, Sft,
    Sidedness, WindowNorm,
};
use entrospace::topo::{
    forward_map, preimage_map, topo_entropy_space, validate_cover, FiniteTopology, PointMap,
    TopoNorm,
};
use entrospace::{power_map, Cover, CoverMap, CoverSpace, MapClass, Payload};

use crate::fixture::{
    AnalysisDesc, ConstructionDesc, CoverSpec, FiniteExplicitDesc, GroupDesc, NormValue, SftDesc,
    SystemDesc, TopoDesc,
};
use crate::CliError;

/// A live system plus the cover families the commands operate on.
pub struct System {
    pub label: String,
    pub space: CoverSpace,
    pub map: CoverMap,
    /// Cover the entropy command analyzes by default.
    pub default_cover: Cover,
    /// Canonical family for family-level entropy; cofinal on the
    /// backends that declare one.
    pub family: Vec<Cover>,
    pub family_cofinal: bool,
    /// Target family for generator searches.
    pub targets: Vec<Cover>,
    /// Classification / axiom sample.
    pub sample: Vec<Cover>,
    /// Whether `sample` is the space's full enumeration.
    pub exhaustive: bool,
    /// Sub-systems of a construction, for the law suites.
    pub parts: Vec<System>,
    /// The construction operation, when this system is one.
    pub op: Option<String>,
    resolver: Resolver,
}

/// How explicit cover specifications are interpreted for this system.
enum Resolver {
    Finite { names: Vec<String> },
    Topo { topology: FiniteTopology },
    Group { group: FinAbGroup },
    Sft { sft: Sft },
    Product,
    SparseLine { kind: IndexKind },
    Opaque,
}

impl System {
    pub fn resolve_cover(&self, spec: &CoverSpec) -> Result<Cover, CliError> {
        let payload = self.resolve_payload(spec)?;
        Ok(self.space.cover(payload))
    }

    fn resolve_payload(&self, spec: &CoverSpec) -> Result<Payload, CliError> {
        match (&self.resolver, spec) {
            (Resolver::Finite { names }, CoverSpec::Name(n)) => {
                let idx = names
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| CliError::schema(format!("unknown element {n:?}")))?;
                Ok(Payload::Atom(idx as u32))
            }
            (Resolver::Topo { topology }, CoverSpec::Sets { sets }) => {
                let masks: Vec<u64> = sets
                    .iter()
                    .map(|pts| pts.iter().fold(0u64, |acc, &p| acc | (1 << p)))
                    .collect();
                let canonical = validate_cover(topology, &masks)
                    .map_err(|e| CliError::schema(e.to_string()))?;
                Ok(Payload::Sets(canonical))
            }
            (Resolver::Group { group }, CoverSpec::Subgroup { generators }) => {
                let gens: Vec<u64> = generators.iter().map(|c| group.encode(c)).collect();
                Ok(Subgroup::generated(group, &gens).into_payload())
            }
            (Resolver::Sft { sft }, CoverSpec::Window { window: (i, j) }) => {
                check_window(sft, *i, *j)?;
                Ok(Payload::Windows(vec![(*i, *j)]))
            }
            (Resolver::Sft { sft }, CoverSpec::Windows { windows }) => {
                for &(i, j) in windows {
                    check_window(sft, i, j)?;
                }
                Ok(Payload::Windows(entrospace::symbolic::canonical_windows(
                    windows.clone(),
                )))
            }
            (Resolver::Sft { .. }, CoverSpec::Name(w)) if w == "trivial" => {
                Ok(Payload::Windows(vec![]))
            }
            (Resolver::Product, CoverSpec::Tuple { tuple }) => {
                if tuple.len() != self.parts.len() {
                    return Err(CliError::schema(format!(
                        "tuple cover has {} components for {} factors",
                        tuple.len(),
                        self.parts.len()
                    )));
                }
                let parts: Result<Vec<Payload>, CliError> = tuple
                    .iter()
                    .zip(&self.parts)
                    .map(|(s, sys)| sys.resolve_payload(s))
                    .collect();
                Ok(Payload::Tuple(parts?))
            }
            (Resolver::SparseLine { kind }, CoverSpec::Support { support }) => {
                let base = self
                    .parts
                    .first()
                    .ok_or_else(|| CliError::schema("line system lost its base"))?;
                let mut entries = Vec::with_capacity(support.len());
                for (i, s) in support {
                    if !kind.admits(*i) {
                        return Err(CliError::schema(format!("index {i} not on this line")));
                    }
                    entries.push((*i, base.resolve_payload(s)?));
                }
                entries.sort_by_key(|(i, _)| *i);
                Ok(Payload::Sparse(
                    entries
                        .into_iter()
                        .filter(|(_, p)| {
                            base.space.unit().map(|u| u.into_payload()).as_ref() != Some(p)
                        })
                        .collect(),
                ))
            }
            (Resolver::Opaque, _) => Err(CliError::schema(
                "this constructed space only supports the default covers",
            )),
            _ => Err(CliError::schema("cover specification does not fit the system kind")),
        }
    }
}

fn check_window(sft: &Sft, i: i64, j: i64) -> Result<(), CliError> {
    if i > j {
        return Err(CliError::schema(format!("window [{i},{j}] is empty")));
    }
    if sft.sidedness() == Sidedness::OneSided && i < 0 {
        return Err(CliError::schema("one-sided shifts have no negative coordinates"));
    }
    Ok(())
}

fn parse_norm(v: &NormValue) -> Result<ExtReal, CliError> {
    match v {
        NormValue::Log { log } => Ok(ExtReal::log_count_u64(*log)),
        NormValue::Ratio { ratio: (p, q) } => {
            if *q == 0 {
                return Err(CliError::schema("ratio with zero denominator"));
            }
            ExtReal::new(*p as f64 / *q as f64).map_err(|e| CliError::schema(e.to_string()))
        }
        NormValue::Num(x) => ExtReal::new(*x).map_err(|e| CliError::schema(e.to_string())),
        NormValue::Word(w) if w == "inf" => Ok(ExtReal::Infinity),
        NormValue::Word(w) => Err(CliError::schema(format!("unknown norm value {w:?}"))),
    }
}

fn parse_class(s: &str) -> Result<MapClass, CliError> {
    Ok(match s {
        "monotone" => MapClass::Monotone,
        "lower_map" => MapClass::LowerMap,
        "upper_map" => MapClass::UpperMap,
        "morphism" => MapClass::Morphism,
        "lower_morphism" => MapClass::LowerMorphism,
        "upper_morphism" => MapClass::UpperMorphism,
        "homomorphism" => MapClass::Homomorphism,
        "isomorphism" => MapClass::Isomorphism,
        other => return Err(CliError::schema(format!("unknown map class {other:?}"))),
    })
}

fn parse_index_kind(s: Option<&str>) -> Result<IndexKind, CliError> {
    match s.unwrap_or("nat") {
        "nat" => Ok(IndexKind::Nat),
        "int" => Ok(IndexKind::Int),
        other => Err(CliError::schema(format!("unknown index kind {other:?}"))),
    }
}

pub fn build_system(desc: &SystemDesc, analysis: &AnalysisDesc) -> Result<System, CliError> {
    match desc {
        SystemDesc::FiniteExplicit(d) => build_finite(d),
        SystemDesc::Topo(d) => build_topo(d),
        SystemDesc::GroupWeiss(d) => build_group(d, false),
        SystemDesc::GroupAdjoint(d) => build_group(d, true),
        SystemDesc::Sft(d) => build_sft(d, analysis),
        SystemDesc::Construction(d) => build_construction(d, analysis),
    }
}

fn enumeration_backed(
    label: String,
    space: CoverSpace,
    map: CoverMap,
    default_cover: Cover,
    resolver: Resolver,
) -> System {
    let all = space.enumeration().unwrap_or_default();
    System {
        label,
        space,
        map,
        default_cover,
        family: all.clone(),
        family_cofinal: true,
        targets: all.clone(),
        sample: all,
        exhaustive: true,
        parts: Vec::new(),
        op: None,
        resolver,
    }
}

fn build_finite(d: &FiniteExplicitDesc) -> Result<System, CliError> {
    let n = d.elements.len();
    let index_of = |name: &str| -> Result<usize, CliError> {
        d.elements
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| CliError::schema(format!("unknown element {name:?}")))
    };
    let mut meet = Vec::with_capacity(n);
    for row in &d.meet {
        let mut r = Vec::with_capacity(n);
        for name in row {
            r.push(index_of(name)?);
        }
        meet.push(r);
    }
    let norms: Result<Vec<ExtReal>, CliError> = d.norms.iter().map(parse_norm).collect();
    let spec = FiniteSpaceSpec {
        name: d.name.clone().unwrap_or_else(|| "finite space".to_string()),
        element_names: d.elements.clone(),
        refines: d.refines.clone(),
        meet,
        norms: norms?,
        unit: d.unit.as_deref().map(index_of).transpose()?,
        claims_meet_space: d.claims.meet_space,
        claims_commutative: d.claims.commutative,
    };
    let space = spec.build().map_err(|e| CliError::schema(e.to_string()))?;
    let images: Result<Vec<usize>, CliError> = d.map.images.iter().map(|s| index_of(s)).collect();
    let inverse: Option<Result<Vec<usize>, CliError>> =
        d.map.inverse.as_ref().map(|v| v.iter().map(|s| index_of(s)).collect());
    let inverse = inverse.transpose()?;
    let map = spec
        .table_map(
            &space,
            "table map",
            &images?,
            parse_class(&d.map.declared)?,
            inverse.as_deref(),
        )
        .map_err(|e| CliError::schema(e.to_string()))?;
    let default_cover = space.cover(Payload::Atom(0));
    Ok(enumeration_backed(
        spec.name.clone(),
        space,
        map,
        default_cover,
        Resolver::Finite { names: d.elements.clone() },
    ))
}

fn build_topo(d: &TopoDesc) -> Result<System, CliError> {
    let opens: Vec<u64> = d
        .opens
        .iter()
        .map(|pts| pts.iter().fold(0u64, |acc, &p| acc | (1 << p)))
        .collect();
    let topology =
        FiniteTopology::new(d.points, opens).map_err(|e| CliError::schema(e.to_string()))?;
    let norm = match d.norm.as_str() {
        "H" => TopoNorm::H,
        "D" => TopoNorm::D,
        other => return Err(CliError::schema(format!("unknown topo norm {other:?}"))),
    };
    let space = topo_entropy_space(&topology, norm, 1_000_000);
    let pm = PointMap::new(&topology, d.map.point_map.clone())
        .map_err(|e| CliError::schema(e.to_string()))?;
    let map = match d.map.dynamics.as_str() {
        "preimage" => preimage_map(&space, &pm),
        "forward" => forward_map(&space, &pm),
        other => return Err(CliError::schema(format!("unknown topo dynamics {other:?}"))),
    }
    .map_err(|e| CliError::analysis(e.to_string()))?;
    let default_cover = space
        .unit()
        .expect("topological cover spaces carry the unit cover");
    Ok(enumeration_backed(
        format!("{topology}"),
        space,
        map,
        default_cover,
        Resolver::Topo { topology },
    ))
}

fn build_group(d: &GroupDesc, adjoint: bool) -> Result<System, CliError> {
    let group = FinAbGroup::new(d.factors.clone()).map_err(|e| CliError::schema(e.to_string()))?;
    let phi = Endomorphism::new(&group, d.map.matrix.clone())
        .map_err(|e| CliError::schema(e.to_string()))?;
    let (space, map, finest) = if adjoint {
        if d.map.dynamics != "preimage" {
            return Err(CliError::schema(
                "the index structure takes preimage dynamics",
            ));
        }
        let space = adjoint_space(&group);
        let map = adjoint_map(&space, &phi);
        let finest = space.cover(Subgroup::trivial(&group).into_payload());
        (space, map, finest)
    } else {
        let space = weiss_space(&group);
        let map = match d.map.dynamics.as_str() {
            "image" => weiss_map(&space, &phi),
            "backward" => backward_weiss_map(&space, &phi)
                .map_err(|e| CliError::analysis(e.to_string()))?,
            other => {
                return Err(CliError::schema(format!(
                    "unknown subgroup dynamics {other:?} (use image or backward)"
                )))
            }
        };
        let finest = space.cover(Subgroup::full(&group).into_payload());
        (space, map, finest)
    };
    Ok(enumeration_backed(
        format!("{group}"),
        space,
        map,
        finest,
        Resolver::Group { group },
    ))
}

fn build_sft(d: &SftDesc, analysis: &AnalysisDesc) -> Result<System, CliError> {
    let sidedness = match d.sidedness.as_str() {
        "one_sided" => Sidedness::OneSided,
        "two_sided" => Sidedness::TwoSided,
        other => return Err(CliError::schema(format!("unknown sidedness {other:?}"))),
    };
    let sft = match &d.transitions {
        Some(m) => Sft::new(d.alphabet, sidedness, m.clone()),
        None => Sft::full_shift(d.alphabet, sidedness),
    }
    .map_err(|e| CliError::schema(e.to_string()))?;
    let norm = match d.norm.as_str() {
        "H" => WindowNorm::H,
        "D" => WindowNorm::D,
        other => return Err(CliError::schema(format!("unknown window norm {other:?}"))),
    };
    let space = sft_space(&sft, norm);
    let base_map = match d.map.dynamics.as_str() {
        "shift_preimage" => shift_preimage_map(&sft, &space),
        "shift_forward" => {
            shift_forward_map(&sft, &space).map_err(|e| CliError::analysis(e.to_string()))?
        }
        other => return Err(CliError::schema(format!("unknown shift dynamics {other:?}"))),
    };
    let map = match d.map.power {
        Some(p) if p != 1 => {
            power_map(&base_map, p).map_err(|e| CliError::analysis(e.to_string()))?
        }
        _ => base_map,
    };

    let bound = analysis.window_bound.unwrap_or(4).clamp(0, 8);
    let lo = if sidedness == Sidedness::OneSided { 0 } else { -bound };
    let mut targets = Vec::new();
    for i in lo..=bound {
        for j in i..=bound {
            targets.push(space.cover(Payload::Windows(vec![(i, j)])));
        }
    }
    let family: Vec<Cover> = (0..=bound)
        .map(|k| {
            space.cover(Payload::Windows(vec![(if sidedness == Sidedness::OneSided { 0 } else { -k }, k)]))
        })
        .collect();
    let mut sample: Vec<Cover> = Vec::new();
    let small = bound.min(2);
    let slo = if sidedness == Sidedness::OneSided { 0 } else { -small };
    for i in slo..=small {
        for j in i..=small {
            sample.push(space.cover(Payload::Windows(vec![(i, j)])));
        }
    }
    sample.push(space.cover(Payload::Windows(vec![])));

    let default_cover = space.cover(Payload::Windows(vec![(0, 0)]));
    Ok(System {
        label: format!(
            "{} shift on {} symbols",
            d.sidedness.replace('_', "-"),
            d.alphabet
        ),
        space,
        map,
        default_cover,
        family,
        family_cofinal: true,
        targets,
        sample,
        exhaustive: false,
        parts: Vec::new(),
        op: None,
        resolver: Resolver::Sft { sft },
    })
}

fn build_construction(d: &ConstructionDesc, analysis: &AnalysisDesc) -> Result<System, CliError> {
    let parts: Result<Vec<System>, CliError> =
        d.parts.iter().map(|p| build_system(p, analysis)).collect();
    let mut parts = parts?;
    match d.op.as_str() {
        "product" | "f_product" => {
            if d.op == "f_product" && parts.len() != 2 {
                return Err(CliError::schema("f_product takes exactly two parts"));
            }
            if parts.is_empty() {
                return Err(CliError::schema("product needs at least one part"));
            }
            let spaces: Vec<CoverSpace> = parts.iter().map(|p| p.space.clone()).collect();
            let maps: Vec<CoverMap> = parts.iter().map(|p| p.map.clone()).collect();
            let (space, map) = if d.op == "product" {
                let s = product_space(&spaces).map_err(|e| CliError::analysis(e.to_string()))?;
                let m = product_map(&s, &maps).map_err(|e| CliError::analysis(e.to_string()))?;
                (s, m)
            } else {
                let s = f_product_space(&spaces[0], &spaces[1], &log_sum_exp())
                    .map_err(|e| CliError::analysis(e.to_string()))?;
                let m = f_product_map(&s, &maps[0], &maps[1])
                    .map_err(|e| CliError::analysis(e.to_string()))?;
                (s, m)
            };
            let tuple_of = |pick: &dyn Fn(&System) -> Payload| -> Payload {
                Payload::Tuple(parts.iter().map(pick).collect())
            };
            let default_cover = space.cover(tuple_of(&|p| p.default_cover.payload().clone()));
            let fam_len = parts.iter().map(|p| p.family.len()).min().unwrap_or(0);
            let family = (0..fam_len)
                .map(|k| space.cover(tuple_of(&|p| p.family[k].payload().clone())))
                .collect();
            let sample = cross_sample(&space, &parts, 36);
            let targets = sample.clone();
            Ok(System {
                label: space.name().to_string(),
                space,
                map,
                default_cover,
                family,
                family_cofinal: parts.iter().all(|p| p.family_cofinal),
                targets,
                sample,
                exhaustive: false,
                parts,
                op: Some(d.op.clone()),
                resolver: Resolver::Product,
            })
        }
        "adjoin_unit" => {
            let part = parts.pop().ok_or_else(|| CliError::schema("adjoin_unit takes one part"))?;
            if !parts.is_empty() {
                return Err(CliError::schema("adjoin_unit takes exactly one part"));
            }
            let space = adjoin_unit(&part.space);
            let map = lift_unital(&space, &part.map);
            let recover = |c: &Cover| space.cover(c.payload().clone());
            let default_cover = recover(&part.default_cover);
            let family: Vec<Cover> = part.family.iter().map(&recover).collect();
            let mut sample: Vec<Cover> = part.sample.iter().map(&recover).collect();
            sample.push(space.unit().expect("unit just adjoined"));
            let targets: Vec<Cover> = part.targets.iter().map(&recover).collect();
            Ok(System {
                label: space.name().to_string(),
                space,
                map,
                default_cover,
                family,
                family_cofinal: part.family_cofinal,
                targets,
                exhaustive: part.exhaustive,
                sample,
                parts: vec![part],
                op: Some(d.op.clone()),
                resolver: Resolver::Opaque,
            })
        }
        "quotient" => {
            let part = parts.pop().ok_or_else(|| CliError::schema("quotient takes one part"))?;
            let (space, _projection, induced) = quotient_system(&part.space, &part.map)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            let default_cover = space.cover(Payload::Atom(0));
            Ok(enumeration_backed(
                space.name().to_string(),
                space,
                induced,
                default_cover,
                Resolver::Opaque,
            ))
        }
        "coproduct" | "shift" => {
            let part = parts.pop().ok_or_else(|| CliError::schema("this op takes one part"))?;
            let kind = parse_index_kind(d.index_kind.as_deref())?;
            if part.space.unit().is_none() {
                return Err(CliError::schema(
                    "the base has no unit: wrap it in an adjoin_unit construction first",
                ));
            }
            let (space, map) = if d.op == "shift" {
                let sys = shift_space_map(&part.space, kind, &part.map)
                    .map_err(|e| CliError::analysis(e.to_string()))?;
                (sys.space, sys.map)
            } else {
                let space = coproduct_space(&part.space, kind)
                    .map_err(|e| CliError::analysis(e.to_string()))?;
                let map = coproduct_map(&space, &part.space, &part.map)
                    .map_err(|e| CliError::analysis(e.to_string()))?;
                (space, map)
            };
            let unit_payload =
                part.space.unit().expect("checked above").into_payload();
            let embed_payload = |c: &Cover| -> Payload {
                if c.payload() == &unit_payload {
                    Payload::Sparse(vec![])
                } else {
                    Payload::Sparse(vec![(0, c.payload().clone())])
                }
            };
            let default_cover = space.cover(embed_payload(&part.default_cover));
            let family: Vec<Cover> =
                part.family.iter().map(|c| space.cover(embed_payload(c))).collect();
            let bound = analysis.support_bound.unwrap_or(2).clamp(0, 8);
            let indices: Vec<i64> = match kind {
                IndexKind::Nat => (0..=bound).collect(),
                IndexKind::Int => (-bound..=bound).collect(),
            };
            let entries: Vec<Cover> = part
                .space
                .enumeration()
                .unwrap_or_else(|| part.sample.clone());
            let targets = finite_support_tuples(&space, &part.space, &indices, &entries)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            let stride = targets.len().div_ceil(24).max(1);
            let mut sample: Vec<Cover> = targets.iter().step_by(stride).cloned().collect();
            sample.push(space.cover(Payload::Sparse(vec![])));
            Ok(System {
                label: space.name().to_string(),
                space,
                map,
                default_cover,
                family,
                family_cofinal: part.family_cofinal && part.exhaustive,
                targets,
                sample,
                exhaustive: false,
                parts: vec![part],
                op: Some(d.op.clone()),
                resolver: Resolver::SparseLine { kind },
            })
        }
        "bernoulli" => {
            let factors = d
                .factors
                .clone()
                .ok_or_else(|| CliError::schema("bernoulli needs invariant factors"))?;
            let h = FinAbGroup::new(factors).map_err(|e| CliError::schema(e.to_string()))?;
            let shift = bernoulli_weiss_shift(&h).map_err(|e| CliError::analysis(e.to_string()))?;
            let bound = analysis.support_bound.unwrap_or(3).clamp(0, 8);
            let indices: Vec<i64> = (0..=bound).collect();
            let entries: Vec<Cover> = enumerate_subgroups(&h)
                .into_iter()
                .map(|s| shift.base.cover(s.into_payload()))
                .collect();
            let family: Vec<Cover> = entries
                .iter()
                .map(|e| shift.embed.apply(e).expect("base cover"))
                .collect();
            let targets = finite_support_tuples(&shift.space, &shift.base, &indices, &entries)
                .map_err(|e| CliError::analysis(e.to_string()))?;
            let stride = targets.len().div_ceil(24).max(1);
            let sample: Vec<Cover> = targets.iter().step_by(stride).cloned().collect();
            // Keep the base system around for the shift-entropy law.
            let base_default = shift.base.cover(Subgroup::full(&h).into_payload());
            let base_system = enumeration_backed(
                format!("{h} + unit"),
                shift.base.clone(),
                CoverMap::identity(&shift.base),
                base_default,
                Resolver::Group { group: h.clone() },
            );
            Ok(System {
                label: format!("shift over subgroups of {h}"),
                space: shift.space,
                map: shift.map,
                default_cover: shift.generator,
                family,
                family_cofinal: true,
                targets,
                sample,
                exhaustive: false,
                parts: vec![base_system],
                op: Some(d.op.clone()),
                resolver: Resolver::SparseLine { kind: IndexKind::Nat },
            })
        }
        "disjoint_union_sft" | "product_sft" => {
            if d.parts.len() != 2 {
                return Err(CliError::schema("this op takes exactly two sft parts"));
            }
            let grab = |sys: &System| -> Result<Sft, CliError> {
                match &sys.resolver {
                    Resolver::Sft { sft } => Ok(sft.clone()),
                    _ => Err(CliError::schema("parts must be sft systems")),
                }
            };
            let a = grab(&parts[0])?;
            let b = grab(&parts[1])?;
            let combined = if d.op == "disjoint_union_sft" {
                disjoint_union(&a, &b)
            } else {
                product_sft(&a, &b)
            }
            .map_err(|e| CliError::schema(e.to_string()))?;
            let desc = SftDesc {
                alphabet: combined.alphabet(),
                sidedness: match combined.sidedness() {
                    Sidedness::OneSided => "one_sided".to_string(),
                    Sidedness::TwoSided => "two_sided".to_string(),
                },
                transitions: Some(combined.matrix().to_vec()),
                norm: "H".to_string(),
                map: crate::fixture::SftMapDesc {
                    dynamics: "shift_preimage".to_string(),
                    power: None,
                },
            };
            let mut sys = build_sft(&desc, analysis)?;
            sys.label = format!(
                "{} of shifts on {} and {} symbols",
                if d.op == "disjoint_union_sft" { "disjoint union" } else { "product" },
                a.alphabet(),
                b.alphabet()
            );
            sys.op = Some(d.op.clone());
            sys.parts = parts;
            Ok(sys)
        }
        other => Err(CliError::schema(format!("unknown construction op {other:?}"))),
    }
}

/// Deterministic sample of tuples across the parts' samples, capped.
fn cross_sample(space: &CoverSpace, parts: &[System], cap: usize) -> Vec<Cover> {
    let mut out = Vec::new();
    let lens: Vec<usize> = parts.iter().map(|p| p.sample.len().max(1)).collect();
    let total: usize = lens.iter().product();
    let stride = total.div_ceil(cap).max(1);
    let mut idx = 0usize;
    while idx < total {
        let mut rem = idx;
        let mut tuple = Vec::with_capacity(parts.len());
        for (p, &len) in parts.iter().zip(&lens) {
            let k = rem % len;
            rem /= len;
            tuple.push(p.sample[k.min(p.sample.len() - 1)].payload().clone());
        }
        out.push(space.cover(Payload::Tuple(tuple)));
        idx += stride;
    }
    out
}
