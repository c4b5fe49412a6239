//! The JSON fixture schema (version 1).
//!
//! A fixture describes one dynamical system — a cover space, a self-map,
//! and an analysis block — in one of six kinds: `finite_explicit`, `topo`,
//! `group_weiss`, `group_adjoint`, `sft`, or `construction` (which nests
//! other fixtures). Norm values are written exactly: `{"log": n}`,
//! `{"ratio": [p, q]}`, a plain number, or `"inf"`.

use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub schema: u32,
    pub system: SystemDesc,
    #[serde(default)]
    pub analysis: AnalysisDesc,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemDesc {
    FiniteExplicit(FiniteExplicitDesc),
    Topo(TopoDesc),
    GroupWeiss(GroupDesc),
    GroupAdjoint(GroupDesc),
    Sft(SftDesc),
    Construction(ConstructionDesc),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteExplicitDesc {
    #[serde(default)]
    pub name: Option<String>,
    pub elements: Vec<String>,
    /// `refines[i][j]` ⇔ element i refines element j.
    pub refines: Vec<Vec<bool>>,
    /// Element names.
    pub meet: Vec<Vec<String>>,
    pub norms: Vec<NormValue>,
    #[serde(default)]
    pub unit: Option<String>,
    #[serde(default)]
    pub claims: Claims,
    pub map: FiniteMapDesc,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claims {
    #[serde(default)]
    pub meet_space: bool,
    #[serde(default)]
    pub commutative: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteMapDesc {
    /// Image element per element, by name.
    pub images: Vec<String>,
    pub declared: String,
    #[serde(default)]
    pub inverse: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoDesc {
    pub points: usize,
    /// Open sets as point lists (∅ and the full set are implied).
    pub opens: Vec<Vec<usize>>,
    #[serde(default = "default_norm_h")]
    pub norm: String,
    pub map: TopoMapDesc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopoMapDesc {
    /// "preimage" or "forward".
    pub dynamics: String,
    pub point_map: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDesc {
    pub factors: Vec<u64>,
    pub map: GroupMapDesc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupMapDesc {
    /// Square integer matrix; column j is the image of generator j.
    pub matrix: Vec<Vec<i64>>,
    /// "image" (subgroup image structure), "preimage" (index structure)
    /// or "backward" (preimage on the image structure; needs injectivity).
    pub dynamics: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftDesc {
    pub alphabet: usize,
    /// "one_sided" or "two_sided".
    pub sidedness: String,
    /// 0/1 transition matrix; omitted means the full shift.
    #[serde(default)]
    pub transitions: Option<Vec<Vec<u8>>>,
    #[serde(default = "default_norm_h")]
    pub norm: String,
    pub map: SftMapDesc,
}

fn default_norm_h() -> String {
    "H".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftMapDesc {
    /// "shift_preimage" or "shift_forward".
    pub dynamics: String,
    /// Optional power of the map (default 1; negative needs an inverse).
    #[serde(default)]
    pub power: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionDesc {
    /// "product", "f_product", "adjoin_unit", "quotient", "coproduct",
    /// "shift", "bernoulli", "disjoint_union_sft", "product_sft".
    pub op: String,
    #[serde(default)]
    pub parts: Vec<SystemDesc>,
    /// Index line for coproducts and shifts: "nat" (default) or "int".
    #[serde(default)]
    pub index_kind: Option<String>,
    /// Invariant factors for `bernoulli`.
    #[serde(default)]
    pub factors: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NormValue {
    Log { log: u64 },
    Ratio { ratio: (i64, u64) },
    Num(f64),
    Word(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CoverSpec {
    /// A window `[i, j]` of a shift system.
    Window { window: (i64, i64) },
    /// A union of windows.
    Windows { windows: Vec<(i64, i64)> },
    /// An open cover of a finite topology, as point lists.
    Sets { sets: Vec<Vec<usize>> },
    /// A subgroup by generators (each generator a coordinate tuple).
    Subgroup { generators: Vec<Vec<u64>> },
    /// A product cover, one component per factor.
    Tuple { tuple: Vec<CoverSpec> },
    /// A finite-support tuple for coproducts and shifts.
    Support { support: Vec<(i64, CoverSpec)> },
    /// Element of a finite explicit space by name, or the word "trivial"
    /// for the trivial cover of a shift system.
    Name(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisDesc {
    #[serde(default)]
    pub horizon: Option<u32>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Exponent budget for generator searches.
    #[serde(default)]
    pub m_budget: Option<u32>,
    /// Descent verification depth.
    #[serde(default)]
    pub depth: Option<u32>,
    /// Cover the entropy command analyzes (backend default otherwise).
    #[serde(default)]
    pub cover: Option<CoverSpec>,
    /// Explicit family for family-level entropy; the backend's canonical
    /// family otherwise.
    #[serde(default)]
    pub family: Option<Vec<CoverSpec>>,
    /// Bound for canonical window samples on shift backends.
    #[serde(default)]
    pub window_bound: Option<i64>,
    /// Support bound for canonical tuple samples on coproduct backends.
    #[serde(default)]
    pub support_bound: Option<i64>,
}
