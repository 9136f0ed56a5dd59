//! End-to-end consistency checks used by `tclab verify` and the test suites.
//!
//! Every engine is run under every variant and compared with the oracles; for
//! generated families the oracles are in turn compared with the closed forms.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::closed_form::{predict, ClosedFormError, ClosedFormPrediction};
use crate::engines::{evaluate, EngineError, EngineKind};
use crate::graph_gen::{edge_count, generate};
use crate::model::{
    EdgeRelation, GraphSpec, PathRelation, RecursionVariant, SpecViolation, Vertex,
};
use crate::oracles::{
    check_left_right_theorem, count_combinations_oracle, reachability_oracle, TheoremCheck,
};

/// Edge probabilities used for random digraphs.
pub const RANDOM_DENSITIES: [f64; 3] = [0.1, 0.25, 0.5];

/// A disagreement between two sources that should agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub context: String,
    pub quantity: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}\n  expected: {}\n  actual:   {}",
            self.context, self.quantity, self.expected, self.actual
        )
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid graph spec: {0}")]
    InvalidSpec(#[from] SpecViolation),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Mismatch(Box<Mismatch>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// Number of individual comparisons that passed.
    pub checks: u64,
    pub summary: String,
}

/// Number of tables the tabled engine creates for the open query: the open
/// call, plus one bound call per distinct target of the relation that the
/// recursive literal is joined on.
pub fn expected_tables(
    edges: &EdgeRelation,
    paths: &PathRelation,
    variant: RecursionVariant,
) -> u64 {
    match variant {
        RecursionVariant::Left => 1,
        RecursionVariant::Right => 1 + edges.targets().len() as u64,
        RecursionVariant::Double => 1 + paths.targets().len() as u64,
    }
}

/// Directed graph on `1..=n` where each ordered pair, self-loops included,
/// is an edge with probability `p`.
pub fn random_digraph<R: Rng>(n: Vertex, p: f64, rng: &mut R) -> EdgeRelation {
    let mut edges = EdgeRelation::new();
    for s in 1..=n {
        for t in 1..=n {
            if rng.gen_bool(p) {
                edges.insert(s, t);
            }
        }
    }
    edges
}

/// First difference between two relations, for failure messages.
pub fn relation_diff(expected: &PathRelation, actual: &PathRelation) -> String {
    let missing = expected.iter().find(|&(s, t)| !actual.contains(s, t));
    let extra = actual.iter().find(|&(s, t)| !expected.contains(s, t));
    let mut parts = vec![format!("{} vs {} pairs", expected.len(), actual.len())];
    if let Some((s, t)) = missing {
        parts.push(format!("missing path({s},{t})"));
    }
    if let Some((s, t)) = extra {
        parts.push(format!("extra path({s},{t})"));
    }
    parts.join(", ")
}

fn mismatch(
    context: &str,
    quantity: String,
    expected: impl ToString,
    actual: impl ToString,
) -> VerifyError {
    VerifyError::Mismatch(Box::new(Mismatch {
        context: context.to_string(),
        quantity,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }))
}

/// Runs every engine under every variant on `edges` and compares against the
/// oracles, and against `prediction` when given. Returns the number of checks.
pub fn check_edges(
    context: &str,
    edges: &EdgeRelation,
    prediction: Option<&ClosedFormPrediction>,
) -> Result<u64, VerifyError> {
    let mut checks = 0;
    let closure = reachability_oracle(edges);
    if let Some(p) = prediction {
        checks += 1;
        if closure.len() as u64 != p.paths {
            return Err(mismatch(
                context,
                "#path (closed form vs oracle)".into(),
                p.paths,
                closure.len(),
            ));
        }
    }

    for variant in RecursionVariant::ALL {
        let combos = count_combinations_oracle(edges, variant);
        if let Some(p) = prediction {
            checks += 1;
            if combos != p.combos(variant) {
                return Err(mismatch(
                    context,
                    format!("{variant} combinations (closed form vs oracle)"),
                    p.combos(variant),
                    combos,
                ));
            }
        }
        for engine in EngineKind::ALL {
            let result = evaluate(engine, edges, variant)?;
            checks += 1;
            if result.paths != closure {
                return Err(mismatch(
                    context,
                    format!("{engine} {variant} paths (oracle vs engine)"),
                    closure.len(),
                    relation_diff(&closure, &result.paths),
                ));
            }
            checks += 1;
            if engine == EngineKind::TopDown {
                let tables = expected_tables(edges, &closure, variant);
                if result.instr.tables_created != tables {
                    return Err(mismatch(
                        context,
                        format!("{engine} {variant} tables_created"),
                        tables,
                        result.instr.tables_created,
                    ));
                }
            } else if result.instr.rec_firings != combos {
                return Err(mismatch(
                    context,
                    format!("{engine} {variant} rec_firings (oracle vs engine)"),
                    combos,
                    result.instr.rec_firings,
                ));
            }
        }
    }

    Ok(checks)
}

/// Checks one family instance end to end.
pub fn verify_spec(spec: &GraphSpec) -> Result<VerifyReport, VerifyError> {
    let edges = generate(spec)?;
    let expected_edges = edge_count(spec)?;
    let context = spec.label();
    if edges.len() as u64 != expected_edges {
        return Err(mismatch(
            &context,
            "#edge (closed form vs generator)".into(),
            expected_edges,
            edges.len(),
        ));
    }
    let p = predict(spec)?;
    let mut checks = 1 + check_edges(&context, &edges, Some(&p))?;
    checks += 1;
    if let TheoremCheck::Counterexample { left, right } = check_left_right_theorem(&edges) {
        return Err(mismatch(
            &context,
            "left vs right combinations".into(),
            left,
            right,
        ));
    }
    Ok(VerifyReport {
        checks,
        summary: format!(
            "{context}: edges={} paths={} combos left={} right={} double={}",
            p.edges, p.paths, p.combos_left, p.combos_right, p.combos_double
        ),
    })
}

/// Checks `count` seeded random digraphs with `1..=max_n` vertices.
///
/// Left and right combination counts are reported rather than asserted:
/// they differ on most random digraphs.
pub fn verify_random(count: usize, max_n: Vertex, seed: u64) -> Result<VerifyReport, VerifyError> {
    assert!(max_n >= 1, "max_n must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    let mut unequal = Vec::new();
    for i in 0..count {
        let n = rng.gen_range(1..=max_n);
        let p = *RANDOM_DENSITIES.choose(&mut rng).expect("non-empty");
        let edges = random_digraph(n, p, &mut rng);
        let context = format!(
            "random graph #{i} (seed={seed}, n={n}, p={p}, {} edges)",
            edges.len()
        );
        checks += check_edges(&context, &edges, None)?;
        if let TheoremCheck::Counterexample { left, right } = check_left_right_theorem(&edges) {
            unequal.push(format!("#{i} left={left} right={right}"));
        }
    }
    let mut summary = format!(
        "{count} random digraphs (seed={seed}, n ≤ {max_n}); left = right combinations on {} of {count}",
        count - unequal.len()
    );
    if let Some(first) = unequal.first() {
        summary.push_str(&format!(", first difference {first}"));
    }
    Ok(VerifyReport { checks, summary })
}
