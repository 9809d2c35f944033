pub mod corpus;
pub mod dsl;
pub mod error;
pub mod model;
pub mod motive;
pub mod oracle;
pub mod params;
pub mod poly;
pub mod series;
pub mod theorem;

pub use dsl::{parse_model, render_model};
pub use error::*;
pub use model::{Arrow, CutCheck, NCPoly, PotentialTerm, QuiverModel, ReducedPresentation, Word};
pub use motive::MotivicScalar;
pub use oracle::{
    count_points, count_representations, resolve_spec, verify_theorem, CountOptions, CountTask, Engine, OracleReport,
    Stratum, VerificationReport, VerifyOptions,
};
pub use params::{Assignment, ParamPoly};
pub use poly::Poly;
pub use series::{expand_closed_form, ClosedFormTerm, Coefficient, DimVector, MSeries, Series};
pub use theorem::{
    detect_family, dimred_prefactor, reduced_class, theorem_series, Branch, EffectiveParameter, Family, TheoremSpec,
};
