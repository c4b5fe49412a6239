//! Combinators that build new entropy spaces and induced maps from old
//! ones, plus connections for comparing entropies across systems.

mod connect;
mod coproduct;
mod limit;
mod product;
mod quotient;
mod shift;
mod unit;

pub use connect::{
    classify_connection, compare_entropy, Cofinality, Connection, ConnectionClass,
    ConnectionReport, Verdict, VerdictRelation,
};
pub use coproduct::{
    coproduct_injection, coproduct_map, coproduct_space, finite_support_tuples, sparse_tuple,
    IndexKind,
};
pub use limit::{direct_limit, DirectLimit, DirectedSystem};
pub use product::{
    f_product_map, f_product_space, log_sum_exp, pair_map, product_map, product_projection,
    product_space, NormCombiner,
};
pub use quotient::{quotient_space, quotient_system};
pub use shift::{shift_space_map, ShiftSystem};
pub use unit::{adjoin_unit, lift_unital};
