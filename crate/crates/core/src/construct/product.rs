//! Products and `f`-products: componentwise order and meet, with the norm
//! summed (product) or combined by a monotone subadditive function
//! (`f`-product).

use std::sync::Arc;

use crate::error::{EntError, Result};
use crate::extreal::ExtReal;
use crate::map::{CoverMap, MapClass};
use crate::space::{Cover, CoverSpace, Payload};

fn tuple_parts(p: &Payload) -> &[Payload] {
    match p {
        Payload::Tuple(parts) => parts,
        _ => panic!("foreign payload in a product space"),
    }
}

/// Keep product enumerations below this size; larger products stay
/// non-enumerable.
const MAX_PRODUCT_ENUMERATION: usize = 4096;

fn shared_structure(spaces: &[CoverSpace], name: String, kind_tag: &str) -> crate::space::SpaceBuilder {
    let refine_spaces: Vec<CoverSpace> = spaces.to_vec();
    let meet_spaces: Vec<CoverSpace> = spaces.to_vec();
    let _ = kind_tag;
    CoverSpace::builder(name)
        .refines(move |a, b| {
            tuple_parts(a)
                .iter()
                .zip(tuple_parts(b))
                .zip(&refine_spaces)
                .all(|((x, y), s)| s.raw_refines(x, y))
        })
        .meet(move |a, b| {
            Payload::Tuple(
                tuple_parts(a)
                    .iter()
                    .zip(tuple_parts(b))
                    .zip(&meet_spaces)
                    .map(|((x, y), s)| s.raw_meet(x, y))
                    .collect(),
            )
        })
}

fn attach_extras(
    mut builder: crate::space::SpaceBuilder,
    spaces: &[CoverSpace],
    unital: bool,
) -> crate::space::SpaceBuilder {
    if unital {
        if let Some(units) = spaces.iter().map(|s| s.unit()).collect::<Option<Vec<_>>>() {
            builder =
                builder.unit(Payload::Tuple(units.into_iter().map(Cover::into_payload).collect()));
        }
    }
    if let Some(enums) = spaces.iter().map(|s| s.enumeration()).collect::<Option<Vec<_>>>() {
        let total: usize = enums.iter().map(|e| e.len()).product();
        if total > 0 && total <= MAX_PRODUCT_ENUMERATION {
            let mut tuples: Vec<Vec<Payload>> = vec![Vec::new()];
            for component in &enums {
                let mut next = Vec::with_capacity(tuples.len() * component.len());
                for t in &tuples {
                    for c in component {
                        let mut t2 = t.clone();
                        t2.push(c.payload().clone());
                        next.push(t2);
                    }
                }
                tuples = next;
            }
            builder = builder.enumeration(tuples.into_iter().map(Payload::Tuple).collect());
        }
    }
    if spaces.iter().all(|s| s.has_cofinal_family()) {
        let cof: Vec<CoverSpace> = spaces.to_vec();
        builder = builder.cofinal(move |k| {
            Payload::Tuple(
                cof.iter()
                    .map(|s| s.cofinal_member(k).expect("cofinal family present").into_payload())
                    .collect(),
            )
        });
    }
    builder
        .meet_space(spaces.iter().all(|s| s.claims_meet_space()))
        .commutative(spaces.iter().all(|s| s.claims_commutative()))
}

/// Product entropy space: componentwise `≺` and `∧`, norm the sum of the
/// component norms.
pub fn product_space(spaces: &[CoverSpace]) -> Result<CoverSpace> {
    if spaces.is_empty() {
        return Err(EntError::precondition("product needs at least one factor"));
    }
    let name = spaces.iter().map(|s| s.name().to_string()).collect::<Vec<_>>().join(" × ");
    let norm_spaces: Vec<CoverSpace> = spaces.to_vec();
    let builder = shared_structure(spaces, name, "product").try_norm(move |p| {
        let mut acc = ExtReal::ZERO;
        for (x, s) in tuple_parts(p).iter().zip(&norm_spaces) {
            acc = acc + s.raw_norm(x)?;
        }
        Ok(acc)
    });
    Ok(attach_extras(builder, spaces, true).build())
}

/// The induced product map, acting componentwise; its class is the meet of
/// the component classes.
pub fn product_map(product: &CoverSpace, maps: &[CoverMap]) -> Result<CoverMap> {
    if maps.is_empty() {
        return Err(EntError::precondition("product map needs at least one component"));
    }
    for m in maps {
        if !m.is_self_map() {
            return Err(EntError::precondition("product map components must be self-maps"));
        }
    }
    let declared = maps
        .iter()
        .map(|m| m.declared_class())
        .reduce(MapClass::meet)
        .expect("non-empty");
    let apply_maps: Vec<CoverMap> = maps.to_vec();
    let mut b = CoverMap::builder("componentwise", product, product, declared).apply(move |p| {
        Payload::Tuple(
            tuple_parts(p).iter().zip(&apply_maps).map(|(x, m)| m.raw_apply(x)).collect(),
        )
    });
    if maps.iter().all(|m| m.has_inverse()) {
        let inv_maps: Vec<CoverMap> = maps.to_vec();
        b = b.inverse(move |p| {
            Payload::Tuple(
                tuple_parts(p)
                    .iter()
                    .zip(&inv_maps)
                    .map(|(x, m)| m.raw_unapply(x).expect("inverse present"))
                    .collect(),
            )
        });
    }
    Ok(b.build())
}

/// Projection onto one factor: a lower morphism (dropping components can
/// only lower the summed norm).
pub fn product_projection(
    product: &CoverSpace,
    factors: &[CoverSpace],
    index: usize,
) -> Result<CoverMap> {
    let factor = factors
        .get(index)
        .ok_or_else(|| EntError::precondition("projection index out of range"))?;
    Ok(
        CoverMap::builder(format!("projection {index}"), product, factor, MapClass::LowerMorphism)
            .apply(move |p| tuple_parts(p)[index].clone())
            .build(),
    )
}

/// A monotone subadditive combiner for `f`-product norms.
#[derive(Clone)]
pub struct NormCombiner {
    pub name: String,
    f: Arc<dyn Fn(ExtReal, ExtReal) -> ExtReal + Send + Sync>,
    /// True for the built-in combiner, which skips sampled validation.
    proven: bool,
}

impl NormCombiner {
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(ExtReal, ExtReal) -> ExtReal + Send + Sync + 'static,
    ) -> NormCombiner {
        NormCombiner { name: name.into(), f: Arc::new(f), proven: false }
    }

    pub fn apply(&self, a: ExtReal, b: ExtReal) -> ExtReal {
        (self.f)(a, b)
    }

    /// Sampled validation of monotonicity and subadditivity on a grid
    /// including 0 and ∞.
    fn validate(&self) -> Result<()> {
        if self.proven {
            return Ok(());
        }
        let grid = [
            ExtReal::ZERO,
            ExtReal::Finite(0.25),
            ExtReal::Finite(2f64.ln()),
            ExtReal::Finite(1.0),
            ExtReal::Finite(5f64.ln()),
            ExtReal::Finite(17.5),
            ExtReal::Infinity,
        ];
        let tol = 1e-9;
        for &a1 in &grid {
            for &a2 in &grid {
                for &b1 in &grid {
                    for &b2 in &grid {
                        if a1 <= b1 && a2 <= b2 {
                            let lo = self.apply(a1, a2);
                            let hi = self.apply(b1, b2);
                            if !lo.le_approx(hi, tol) {
                                return Err(EntError::invalid(format!(
                                    "combiner {} is not monotone at ({a1},{a2}) vs ({b1},{b2})",
                                    self.name
                                )));
                            }
                        }
                        let joined = self.apply(a1 + b1, a2 + b2);
                        let split = self.apply(a1, a2) + self.apply(b1, b2);
                        if !joined.le_approx(split, tol) {
                            return Err(EntError::invalid(format!(
                                "combiner {} is not subadditive at ({a1},{a2}),({b1},{b2})",
                                self.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `f(a, b) = log(eᵃ + eᵇ)`: monotone and subadditive, and the `f`-product
/// entropy of lower maps under it is the maximum of the component
/// entropies.
pub fn log_sum_exp() -> NormCombiner {
    NormCombiner {
        name: "log-sum-exp".to_string(),
        f: Arc::new(|a, b| match (a, b) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => {
                let m = x.max(y);
                ExtReal::Finite(m + (x.min(y) - m).exp().ln_1p())
            }
            _ => ExtReal::Infinity,
        }),
        proven: true,
    }
}

/// Product carrier with norm `f(h₁(α), h₂(β))`. Note the combined norm of
/// a pair of units need not be 0 (log-sum-exp gives `log 2`), so the
/// result is deliberately not marked unital.
pub fn f_product_space(
    s1: &CoverSpace,
    s2: &CoverSpace,
    combiner: &NormCombiner,
) -> Result<CoverSpace> {
    combiner.validate()?;
    let spaces = [s1.clone(), s2.clone()];
    let name = format!("{} ×[{}] {}", s1.name(), combiner.name, s2.name());
    let (n1, n2) = (s1.clone(), s2.clone());
    let f = combiner.clone();
    let builder = shared_structure(&spaces, name, "f-product").try_norm(move |p| {
        let parts = tuple_parts(p);
        Ok(f.apply(n1.raw_norm(&parts[0])?, n2.raw_norm(&parts[1])?))
    });
    Ok(attach_extras(builder, &spaces, false).build())
}

/// Induced map on an `f`-product (componentwise, same as the plain
/// product).
pub fn f_product_map(fproduct: &CoverSpace, m1: &CoverMap, m2: &CoverMap) -> Result<CoverMap> {
    product_map(fproduct, &[m1.clone(), m2.clone()])
}

/// Pairs two maps with a common source into a map to a two-factor
/// (f-)product: `α ↦ (μ₁α, μ₂α)`. The declared class is the caller's
/// claim; run the classifier to check it.
pub fn pair_map(
    target: &CoverSpace,
    mu1: &CoverMap,
    mu2: &CoverMap,
    declared: MapClass,
) -> Result<CoverMap> {
    if mu1.source().id() != mu2.source().id() {
        return Err(EntError::precondition("paired maps need a common source"));
    }
    let (a, b) = (mu1.clone(), mu2.clone());
    Ok(CoverMap::builder(
        format!("⟨{}, {}⟩", mu1.name(), mu2.name()),
        mu1.source(),
        target,
        declared,
    )
    .apply(move |p| Payload::Tuple(vec![a.raw_apply(p), b.raw_apply(p)]))
    .build())
}
