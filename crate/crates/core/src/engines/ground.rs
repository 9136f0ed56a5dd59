use std::collections::BTreeMap;
use std::num::NonZeroU32;
use std::time::Instant;

use rustc_hash::FxHashSet;

use super::{pack, Adjacency, EngineError, EvalResult, FactStore, Phase};
use crate::model::{
    EdgeRelation, Instrumentation, Pair, PathRelation, Predicate, RecursionVariant,
};

/// A ground atom `edge(s,t)` or `path(s,t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundAtom {
    pub predicate: Predicate,
    pub pair: Pair,
}

/// One ground rule instance. `join` is `None` for an instance of the base rule
/// and holds the value bound to `Z` for an instance of the recursive rule; the
/// body atoms follow from it and the program's variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundInstance {
    pub head: Pair,
    pub join: Option<NonZeroU32>,
}

impl GroundInstance {
    pub fn is_recursive(&self) -> bool {
        self.join.is_some()
    }

    pub fn body(&self, variant: RecursionVariant) -> impl Iterator<Item = GroundAtom> {
        let (x, y) = self.head;
        let atom = |predicate, pair| GroundAtom { predicate, pair };
        let atoms = match self.join {
            None => [Some(atom(Predicate::Edge, (x, y))), None],
            Some(z) => {
                let z = z.get();
                let (first, second) = match variant {
                    RecursionVariant::Left => (Predicate::Path, Predicate::Edge),
                    RecursionVariant::Right => (Predicate::Edge, Predicate::Path),
                    RecursionVariant::Double => (Predicate::Path, Predicate::Path),
                };
                [Some(atom(first, (x, z))), Some(atom(second, (z, y)))]
            }
        };
        atoms.into_iter().flatten()
    }
}

/// A variable-free program: the input facts plus the instances produced by
/// grounding, in emission order. Heads may repeat.
#[derive(Debug, Clone)]
pub struct GroundProgram {
    pub variant: RecursionVariant,
    pub edges: EdgeRelation,
    pub instances: Vec<GroundInstance>,
}

impl GroundProgram {
    pub fn recursive_instances(&self) -> usize {
        self.instances.iter().filter(|i| i.is_recursive()).count()
    }
}

/// Grounds the program against `edges`.
///
/// Body atoms are instantiated left to right and only against facts derived
/// so far, one semi-naive round at a time: an instance is emitted in the
/// round after its last body fact first appeared. Every recursive instance is
/// one hypothesis combination, so their number is `rec_firings`.
pub fn ground(edges: &EdgeRelation, variant: RecursionVariant) -> (GroundProgram, Instrumentation) {
    let edge_list: Vec<Pair> = edges.iter().collect();
    let mut store = FactStore::default();
    let mut instances = Vec::new();

    let mut delta = Vec::new();
    for &(s, t) in &edge_list {
        store.instr.base_firings += 1;
        instances.push(GroundInstance {
            head: (s, t),
            join: None,
        });
        if store.derive(s, t) {
            delta.push((s, t));
        }
    }

    let edge_out = Adjacency::forward(&edge_list);
    let mut old: Vec<Pair> = Vec::new();
    let mut old_out = Adjacency::default();

    while !delta.is_empty() {
        store.instr.iterations += 1;
        let mut next = Vec::new();
        let mut emit = |store: &mut FactStore, x, z, y| {
            store.instr.rec_firings += 1;
            instances.push(GroundInstance {
                head: (x, y),
                join: Some(NonZeroU32::new(z).expect("vertex ids are positive")),
            });
            if store.derive(x, y) {
                next.push((x, y));
            }
        };
        match variant {
            RecursionVariant::Left => {
                // path(X,Z) from the delta, then edge(Z,Y).
                for &(x, z) in &delta {
                    let ys = edge_out.get(z);
                    store.instr.probes += 1 + ys.len() as u64;
                    for &y in ys {
                        emit(&mut store, x, z, y);
                    }
                }
            }
            RecursionVariant::Right => {
                // edge(X,Z) over all edges, then path(Z,Y) from the delta.
                let delta_out = Adjacency::forward(&delta);
                for &(x, z) in &edge_list {
                    let ys = delta_out.get(z);
                    store.instr.probes += 1 + ys.len() as u64;
                    for &y in ys {
                        emit(&mut store, x, z, y);
                    }
                }
            }
            RecursionVariant::Double => {
                // First atom from the delta, second from anything known;
                // then first atom from older facts, second from the delta.
                let delta_out = Adjacency::forward(&delta);
                for &(x, z) in &delta {
                    for index in [&old_out, &delta_out] {
                        let ys = index.get(z);
                        store.instr.probes += 1 + ys.len() as u64;
                        for &y in ys {
                            emit(&mut store, x, z, y);
                        }
                    }
                }
                for &(x, z) in &old {
                    let ys = delta_out.get(z);
                    store.instr.probes += 1 + ys.len() as u64;
                    for &y in ys {
                        emit(&mut store, x, z, y);
                    }
                }
                for &(x, z) in &delta {
                    old_out.push(x, z);
                }
            }
        }
        old.append(&mut delta);
        delta = next;
    }

    let instr = store.instr;
    (
        GroundProgram {
            variant,
            edges: edges.clone(),
            instances,
        },
        instr,
    )
}

/// Computes the `path` facts of a ground program: the heads of all instances
/// whose bodies are supported, iterated to a fixpoint.
///
/// A program from [`ground`] is fully supported; any instance left unsupported
/// is reported as an integrity failure.
pub fn solve_ground(program: &GroundProgram) -> Result<PathRelation, EngineError> {
    let edges: FxHashSet<u64> = program.edges.iter().map(|(s, t)| pack(s, t)).collect();
    let mut derived: FxHashSet<u64> = FxHashSet::default();
    let mut heads: Vec<Pair> = Vec::new();

    let supported = |atom: &GroundAtom, derived: &FxHashSet<u64>| {
        let key = pack(atom.pair.0, atom.pair.1);
        match atom.predicate {
            Predicate::Edge => edges.contains(&key),
            Predicate::Path => derived.contains(&key),
        }
    };

    let mut fire = |inst: &GroundInstance, derived: &mut FxHashSet<u64>| {
        let ok = inst
            .body(program.variant)
            .all(|atom| supported(&atom, derived));
        if ok && derived.insert(pack(inst.head.0, inst.head.1)) {
            heads.push(inst.head);
        }
        ok
    };

    // Instances from `ground` are in dependency order, so one pass normally
    // settles everything; later passes only revisit what it left behind.
    let mut pending: Vec<&GroundInstance> = program
        .instances
        .iter()
        .filter(|inst| !fire(inst, &mut derived))
        .collect();
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|inst| !fire(inst, &mut derived));
        if pending.len() == before {
            let inst = pending[0];
            let atom = inst
                .body(program.variant)
                .find(|a| !supported(a, &derived))
                .expect("an unsupported instance has an unsupported atom");
            return Err(EngineError::Integrity(format!(
                "instance with head path({},{}) has unsupported body atom {}({},{})",
                inst.head.0,
                inst.head.1,
                atom.predicate.name(),
                atom.pair.0,
                atom.pair.1
            )));
        }
    }
    Ok(heads.into_iter().collect())
}

/// Ground-and-solve as one engine run, timing the two phases separately.
pub fn solve_ground_engine(
    edges: &EdgeRelation,
    variant: RecursionVariant,
) -> Result<EvalResult, EngineError> {
    let start = Instant::now();
    let (program, instr) = ground(edges, variant);
    let grounded = start.elapsed();
    let start = Instant::now();
    let paths = solve_ground(&program)?;
    let solved = start.elapsed();
    drop(program);
    Ok(EvalResult {
        paths,
        instr,
        phase_times: BTreeMap::from([(Phase::Ground, grounded), (Phase::Solve, solved)]),
    })
}
