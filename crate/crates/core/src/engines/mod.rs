//! Instrumented evaluators for the transitive-closure program.
//!
//! Four engines compute the same `path` relation under a chosen recursion
//! variant and report how much join work they did:
//!
//! - [`solve_seminaive`]: bottom-up, joins only against the previous round's
//!   new facts.
//! - [`solve_minincrement`]: bottom-up, one fact per step with indexed joins;
//!   fires each combination exactly once.
//! - [`solve_topdown`]: tabled top-down evaluation of the open query
//!   `path(X,Y)` with left-to-right body selection.
//! - [`solve_ground_engine`]: grounds the program against derivable facts and
//!   then solves the ground program.

mod ground;
mod minincrement;
mod seminaive;
mod topdown;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::model::{
    EdgeRelation, Instrumentation, Pair, PathRelation, RecursionVariant, UnknownName, Vertex,
};

pub use ground::{
    ground, solve_ground, solve_ground_engine, GroundAtom, GroundInstance, GroundProgram,
};
pub use minincrement::solve_minincrement;
pub use seminaive::solve_seminaive;
pub use topdown::solve_topdown;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    SemiNaive,
    MinIncrement,
    TopDown,
    Ground,
}

impl EngineKind {
    pub const ALL: [EngineKind; 4] = [
        Self::SemiNaive,
        Self::MinIncrement,
        Self::TopDown,
        Self::Ground,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SemiNaive => "seminaive",
            Self::MinIncrement => "minincrement",
            Self::TopDown => "topdown",
            Self::Ground => "ground",
        }
    }

    /// Evaluation phases this engine reports, in order.
    pub fn eval_phases(self) -> &'static [Phase] {
        match self {
            Self::Ground => &[Phase::Ground, Phase::Solve],
            _ => &[Phase::Query],
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName::new("engine", s))
    }
}

/// Timed phases of one run, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    LoadRules,
    ReadData,
    Query,
    Ground,
    Solve,
    WriteRes,
}

impl Phase {
    pub const ALL: [Phase; 6] = [
        Self::LoadRules,
        Self::ReadData,
        Self::Query,
        Self::Ground,
        Self::Solve,
        Self::WriteRes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::LoadRules => "LoadRules",
            Self::ReadData => "ReadData",
            Self::Query => "Query",
            Self::Ground => "Ground",
            Self::Solve => "Solve",
            Self::WriteRes => "WriteRes",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct EvalResult {
    pub paths: PathRelation,
    pub instr: Instrumentation,
    /// Monotonic-clock durations of the engine's own phases.
    pub phase_times: BTreeMap<Phase, Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("integrity failure: {0}")]
    Integrity(String),
}

/// Runs `kind` on `edges`.
pub fn evaluate(
    kind: EngineKind,
    edges: &EdgeRelation,
    variant: RecursionVariant,
) -> Result<EvalResult, EngineError> {
    Ok(match kind {
        EngineKind::SemiNaive => solve_seminaive(edges, variant),
        EngineKind::MinIncrement => solve_minincrement(edges, variant),
        EngineKind::TopDown => solve_topdown(edges, variant),
        EngineKind::Ground => solve_ground_engine(edges, variant)?,
    })
}

#[inline]
fn pack(s: Vertex, t: Vertex) -> u64 {
    (u64::from(s) << 32) | u64::from(t)
}

/// Adjacency lists keyed by one endpoint.
#[derive(Default)]
struct Adjacency {
    lists: FxHashMap<Vertex, Vec<Vertex>>,
}

impl Adjacency {
    fn forward<'a>(pairs: impl IntoIterator<Item = &'a Pair>) -> Self {
        let mut adj = Self::default();
        for &(s, t) in pairs {
            adj.push(s, t);
        }
        adj
    }

    fn backward<'a>(pairs: impl IntoIterator<Item = &'a Pair>) -> Self {
        let mut adj = Self::default();
        for &(s, t) in pairs {
            adj.push(t, s);
        }
        adj
    }

    fn push(&mut self, key: Vertex, value: Vertex) {
        self.lists.entry(key).or_default().push(value);
    }

    fn get(&self, key: Vertex) -> &[Vertex] {
        self.lists.get(&key).map_or(&[], Vec::as_slice)
    }
}

/// Derived `path` facts in first-derivation order, with firing counters.
#[derive(Default)]
struct FactStore {
    known: FxHashSet<u64>,
    order: Vec<Pair>,
    instr: Instrumentation,
}

impl FactStore {
    /// Records one firing that concludes `(s, t)`; true if the fact is new.
    fn derive(&mut self, s: Vertex, t: Vertex) -> bool {
        if self.known.insert(pack(s, t)) {
            self.order.push((s, t));
            true
        } else {
            self.instr.duplicate_derivations += 1;
            false
        }
    }

    fn into_relation(self) -> (PathRelation, Instrumentation) {
        (self.order.into_iter().collect(), self.instr)
    }
}
