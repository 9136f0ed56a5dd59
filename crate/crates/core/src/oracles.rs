//! Brute-force ground truth for closures and combination counts.
//!
//! Nothing here touches the engine indexes: reachability is a per-source
//! breadth-first traversal and combinations are enumerated triple by triple.
//! Intended for desk-scale inputs only.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::model::{EdgeRelation, PathRelation, RecursionVariant, Relation, Vertex};

/// All `(u, v)` such that `v` is reachable from `u` by one or more edges.
pub fn reachability_oracle(edges: &EdgeRelation) -> PathRelation {
    let mut adjacency: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (s, t) in edges.iter() {
        adjacency.entry(s).or_default().push(t);
    }
    let mut paths = PathRelation::new();
    for (&source, first_hop) in &adjacency {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<Vertex> = first_hop.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            if !seen.insert(v) {
                continue;
            }
            paths.insert(source, v);
            if let Some(next) = adjacency.get(&v) {
                queue.extend(next.iter().copied());
            }
        }
    }
    paths
}

/// Number of `(a, b, c)` with `(a, b)` in the first body relation and
/// `(b, c)` in the second, where the relations are chosen by `variant` over
/// the edges and their closure.
pub fn count_combinations_oracle(edges: &EdgeRelation, variant: RecursionVariant) -> u64 {
    let paths = reachability_oracle(edges);
    let (first, second) = match variant {
        RecursionVariant::Left => (&paths, edges),
        RecursionVariant::Right => (edges, &paths),
        RecursionVariant::Double => (&paths, &paths),
    };
    count_triples(first, second)
}

fn count_triples(first: &Relation, second: &Relation) -> u64 {
    let mut count = 0u64;
    for (_, b) in first.iter() {
        for _ in second.successors(b) {
            count += 1;
        }
    }
    count
}

/// Outcome of comparing left- and right-recursive combination counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremCheck {
    Equal(u64),
    Counterexample { left: u64, right: u64 },
}

/// Compares the left- and right-recursive combination counts.
///
/// The two agree on every generated family and on every graph equal to its
/// own reverse, but not on arbitrary digraphs: for
/// `a→b, a→c, b→d, c→d, d→e` left recursion has 5 combinations and right
/// recursion 6. Reversing the edges swaps the two counts.
pub fn check_left_right_theorem(edges: &EdgeRelation) -> TheoremCheck {
    let left = count_combinations_oracle(edges, RecursionVariant::Left);
    let right = count_combinations_oracle(edges, RecursionVariant::Right);
    if left == right {
        TheoremCheck::Equal(left)
    } else {
        TheoremCheck::Counterexample { left, right }
    }
}
