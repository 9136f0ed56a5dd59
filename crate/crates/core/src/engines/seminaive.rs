use std::collections::BTreeMap;
use std::time::Instant;

use super::{Adjacency, EvalResult, FactStore, Phase};
use crate::model::{EdgeRelation, Pair, RecursionVariant};

/// Semi-naive bottom-up evaluation.
///
/// Each round joins the facts first derived in the previous round (the delta)
/// against the facts known before it. For double recursion the round fires
/// `delta ⋈ old`, `old ⋈ delta` and `delta ⋈ delta`, so every combination
/// fires in exactly one round and one term. `iterations` counts rounds.
pub fn solve_seminaive(edges: &EdgeRelation, variant: RecursionVariant) -> EvalResult {
    let start = Instant::now();
    let edge_list: Vec<Pair> = edges.iter().collect();
    let mut store = FactStore::default();

    let mut delta: Vec<Pair> = Vec::new();
    for &(s, t) in &edge_list {
        store.instr.base_firings += 1;
        if store.derive(s, t) {
            delta.push((s, t));
        }
    }

    let edge_out = Adjacency::forward(&edge_list);
    let edge_in = Adjacency::backward(&edge_list);
    // Facts known before the current round; maintained for double recursion.
    let mut old_out = Adjacency::default();
    let mut old_in = Adjacency::default();

    while !delta.is_empty() {
        store.instr.iterations += 1;
        let mut next = Vec::new();
        let mut fire = |store: &mut FactStore, x, y| {
            store.instr.rec_firings += 1;
            if store.derive(x, y) {
                next.push((x, y));
            }
        };
        match variant {
            RecursionVariant::Left => {
                for &(x, z) in &delta {
                    let ys = edge_out.get(z);
                    store.instr.probes += 1 + ys.len() as u64;
                    for &y in ys {
                        fire(&mut store, x, y);
                    }
                }
            }
            RecursionVariant::Right => {
                for &(z, y) in &delta {
                    let xs = edge_in.get(z);
                    store.instr.probes += 1 + xs.len() as u64;
                    for &x in xs {
                        fire(&mut store, x, y);
                    }
                }
            }
            RecursionVariant::Double => {
                let delta_out = Adjacency::forward(&delta);
                for &(x, z) in &delta {
                    for index in [&old_out, &delta_out] {
                        let ys = index.get(z);
                        store.instr.probes += 1 + ys.len() as u64;
                        for &y in ys {
                            fire(&mut store, x, y);
                        }
                    }
                }
                for &(z, y) in &delta {
                    let xs = old_in.get(z);
                    store.instr.probes += 1 + xs.len() as u64;
                    for &x in xs {
                        fire(&mut store, x, y);
                    }
                }
                for &(x, z) in &delta {
                    old_out.push(x, z);
                    old_in.push(z, x);
                }
            }
        }
        delta = next;
    }

    let (paths, instr) = store.into_relation();
    EvalResult {
        paths,
        instr,
        phase_times: BTreeMap::from([(Phase::Query, start.elapsed())]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gen::generate;
    use crate::model::{GraphSpec, Relation};

    #[test]
    fn two_edge_chain() {
        let edges: Relation = [(1, 2), (2, 3)].into_iter().collect();
        let r = solve_seminaive(&edges, RecursionVariant::Left);
        assert_eq!(r.paths, [(1, 2), (2, 3), (1, 3)].into_iter().collect());
        assert_eq!(r.instr.rec_firings, 1);
        assert_eq!(r.instr.base_firings, 2);
        assert_eq!(r.instr.iterations, 2);
    }

    #[test]
    fn empty_input() {
        for v in RecursionVariant::ALL {
            let r = solve_seminaive(&Relation::new(), v);
            assert!(r.paths.is_empty());
            assert_eq!((r.instr.rec_firings, r.instr.base_firings), (0, 0));
        }
    }

    #[test]
    fn cycle_double() {
        let edges = generate(&GraphSpec::Cyc { n: 3 }).unwrap();
        let r = solve_seminaive(&edges, RecursionVariant::Double);
        assert_eq!(r.instr.rec_firings, 27);
        assert_eq!(r.paths.len(), 9);
    }

    #[test]
    fn self_loop_double() {
        let edges: Relation = [(1, 1)].into_iter().collect();
        let r = solve_seminaive(&edges, RecursionVariant::Double);
        assert_eq!(r.instr.rec_firings, 1);
        assert_eq!(r.instr.duplicate_derivations, 1);
    }

    #[test]
    fn reports_query_phase_only() {
        let r = solve_seminaive(&Relation::new(), RecursionVariant::Left);
        assert_eq!(
            r.phase_times.keys().copied().collect::<Vec<_>>(),
            vec![Phase::Query]
        );
    }
}
