//! Transitive-closure inference lab.
//!
//! Generates parameterized graph families, evaluates
//!
//! ```text
//! path(X,Y) :- edge(X,Y).
//! path(X,Y) :- <recursive body>.
//! ```
//!
//! under left, right or double recursion with four instrumented engines, and
//! checks the counted join work against closed-form predictions and
//! brute-force oracles.

pub mod bench_harness;
pub mod closed_form;
pub mod engines;
pub mod graph_gen;
pub mod io_formats;
pub mod model;
pub mod oracles;
pub mod verify;

pub use closed_form::{predict, ClosedFormError, ClosedFormPrediction};
pub use engines::{evaluate, EngineError, EngineKind, EvalResult, Phase};
pub use graph_gen::{edge_count, generate};
pub use io_formats::FactFormat;
pub use model::{
    EdgeRelation, Family, GraphSpec, Instrumentation, Pair, PathRelation, Predicate,
    RecursionVariant, Relation, SpecViolation, Vertex,
};
