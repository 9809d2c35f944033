//! Finite-field point counts of cut representation varieties.

pub mod count;
pub mod field;
pub mod verify;

pub use count::{
    count_points, count_points_stratified, Constraint, CountOptions, CountResult, Engine, Stratum, DEFAULT_CAP,
};
pub use field::{count_gl, multiplicative_order, render_ratio};
pub use verify::{
    count_representations, parameter_info, resolve_spec, stratified_count, verify_theorem, CountTask, OracleReport,
    ParameterInfo, VerificationReport, VerifyOptions,
};
