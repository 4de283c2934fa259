//! Sign-pattern analysis: which wiring diagrams allow or force stable sets,
//! the excitatory/inhibitory budgets they imply, and signature counts.

mod counting;
mod curves;
mod family;
mod pattern;

pub use counting::{
    audit_counts, brute_force_row_signatures, count_allowed_row_signatures, serialize_bigint, signature_space,
    CountDiscrepancy, CountMode, BRUTE_FORCE_CAP,
};
pub use curves::{bound_curve, curve_csv, CurvePoint, CurveSpec};
pub use family::{ei_bounds, parse_set, EIBounds, FamilyKind, StableFamily};
pub use pattern::{sign_pattern, SignPattern};
