//! Edge sets of the twelve graph families.

use crate::closed_form;
use crate::model::{EdgeRelation, GraphSpec, SpecViolation, Vertex};

/// Generates the edge set of a valid spec.
pub fn generate(spec: &GraphSpec) -> Result<EdgeRelation, SpecViolation> {
    spec.validate()?;
    Ok(set_former(spec))
}

/// Number of edges of `spec` by closed form; always equals `generate(spec)?.len()`.
pub fn edge_count(spec: &GraphSpec) -> Result<u64, SpecViolation> {
    spec.validate()?;
    Ok(closed_form::edges(spec))
}

/// Evaluates the family's defining set-former without bound checks.
///
/// For parameters that [`GraphSpec::validate`] rejects the result is still the
/// literal set (duplicates collapse), which is what a closed-form count no
/// longer describes. Parameters must keep vertex ids inside `u32`.
pub fn set_former(spec: &GraphSpec) -> EdgeRelation {
    let mut edges = EdgeRelation::new();
    let v = |x: u64| -> Vertex { Vertex::try_from(x).expect("vertex id exceeds u32") };
    match *spec {
        GraphSpec::Cmpl { n } => {
            for i in 1..=n {
                for j in 1..=n {
                    edges.insert(v(i), v(j));
                }
            }
        }
        GraphSpec::MaxAcyc { n } => {
            for i in 1..n {
                for j in i + 1..=n {
                    edges.insert(v(i), v(j));
                }
            }
        }
        GraphSpec::Cyc { n } => cycle(&mut edges, n),
        GraphSpec::CycExtra { n, k } => {
            cycle(&mut edges, n);
            if n > 0 {
                let spacing = n / (k + 1);
                for i in 1..=n {
                    for t in 1..=k {
                        edges.insert(v(i), v((i - 1 + t * spacing) % n + 1));
                    }
                }
            }
        }
        GraphSpec::Path { n } => {
            for i in 1..n {
                edges.insert(v(i), v(i + 1));
            }
        }
        GraphSpec::PathDisj { n, k } => {
            for i in 1..=n.saturating_sub(1) * k {
                edges.insert(v(i), v(i + k));
            }
        }
        GraphSpec::Grid { n } => {
            for i in 1..=n {
                for j in (i - 1) * n + 1..i * n {
                    edges.insert(v(j), v(j + 1));
                }
            }
            for i in 1..n {
                for j in (i - 1) * n + 1..=i * n {
                    edges.insert(v(j), v(j + n));
                }
            }
        }
        GraphSpec::BinTree { h } => {
            for i in internal_nodes(h) {
                edges.insert(v(i), v(2 * i));
                edges.insert(v(i), v(2 * i + 1));
            }
        }
        GraphSpec::BinTreeRev { h } => {
            for i in internal_nodes(h) {
                edges.insert(v(2 * i), v(i));
                edges.insert(v(2 * i + 1), v(i));
            }
        }
        GraphSpec::X { n, k } => {
            for i in 1..=n {
                edges.insert(v(i), v(n + 1));
            }
            for j in 1..=k {
                edges.insert(v(n + 1), v(n + 1 + j));
            }
        }
        GraphSpec::Y { n, k } => {
            for i in 1..=n {
                edges.insert(v(i), v(n + 1));
            }
            for i in n + 1..n + k {
                edges.insert(v(i), v(i + 1));
            }
        }
        GraphSpec::W { n, k } => {
            for i in 1..=n {
                for j in 1..=k {
                    edges.insert(v(i), v(n + 1 + (i + j - 1) % n));
                }
            }
        }
    }
    edges
}

fn cycle(edges: &mut EdgeRelation, n: u64) {
    if n == 0 {
        return;
    }
    for i in 1..n {
        edges.insert(i as Vertex, (i + 1) as Vertex);
    }
    edges.insert(n as Vertex, 1);
}

/// Heap-numbered nodes with children in an `h`-level tree: `1..2^(h-1)-1`.
fn internal_nodes(h: u64) -> std::ops::Range<u64> {
    if h == 0 {
        return 1..1;
    }
    1..(1u64 << (h - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Relation;

    fn rel(pairs: &[(Vertex, Vertex)]) -> Relation {
        pairs.iter().copied().collect()
    }

    #[test]
    fn small_instances() {
        assert_eq!(
            generate(&GraphSpec::Cyc { n: 3 }).unwrap(),
            rel(&[(1, 2), (2, 3), (3, 1)])
        );
        assert_eq!(
            generate(&GraphSpec::Path { n: 3 }).unwrap(),
            rel(&[(1, 2), (2, 3)])
        );
        assert_eq!(
            generate(&GraphSpec::Grid { n: 2 }).unwrap(),
            rel(&[(1, 2), (3, 4), (1, 3), (2, 4)])
        );
        assert_eq!(
            generate(&GraphSpec::W { n: 2, k: 2 }).unwrap(),
            rel(&[(1, 3), (1, 4), (2, 4), (2, 3)])
        );
        assert_eq!(
            generate(&GraphSpec::BinTree { h: 3 }).unwrap(),
            rel(&[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
        );
        assert_eq!(
            generate(&GraphSpec::BinTreeRev { h: 2 }).unwrap(),
            rel(&[(2, 1), (3, 1)])
        );
        assert_eq!(
            generate(&GraphSpec::CycExtra { n: 4, k: 1 }).unwrap(),
            rel(&[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 1),
                (1, 3),
                (2, 4),
                (3, 1),
                (4, 2)
            ])
        );
        assert_eq!(
            generate(&GraphSpec::Y { n: 2, k: 2 }).unwrap(),
            rel(&[(1, 3), (2, 3), (3, 4)])
        );
        assert_eq!(
            generate(&GraphSpec::X { n: 1, k: 2 }).unwrap(),
            rel(&[(1, 2), (2, 3), (2, 4)])
        );
        assert_eq!(
            generate(&GraphSpec::PathDisj { n: 3, k: 2 }).unwrap(),
            rel(&[(1, 3), (2, 4), (3, 5), (4, 6)])
        );
    }

    #[test]
    fn degenerate_minima() {
        assert!(generate(&GraphSpec::Path { n: 1 }).unwrap().is_empty());
        assert!(generate(&GraphSpec::Grid { n: 1 }).unwrap().is_empty());
        assert!(generate(&GraphSpec::BinTree { h: 1 }).unwrap().is_empty());
        assert_eq!(generate(&GraphSpec::Cyc { n: 1 }).unwrap(), rel(&[(1, 1)]));
        assert_eq!(generate(&GraphSpec::Cmpl { n: 1 }).unwrap(), rel(&[(1, 1)]));
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(edge_count(&GraphSpec::Cmpl { n: 4 }), Ok(16));
        assert_eq!(edge_count(&GraphSpec::MaxAcyc { n: 5 }), Ok(10));
        assert_eq!(edge_count(&GraphSpec::BinTree { h: 3 }), Ok(6));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let err = generate(&GraphSpec::CycExtra { n: 10, k: 3 }).unwrap_err();
        assert_eq!(err.constraint, "(k+1) must divide n");
        assert!(edge_count(&GraphSpec::Path { n: 0 }).is_err());
    }

    #[test]
    fn set_former_collapses_colliding_edges() {
        // Spacing 1: every first extra edge coincides with a cycle edge.
        assert_eq!(set_former(&GraphSpec::CycExtra { n: 6, k: 5 }).len(), 30);
        // Targets wrap around once k exceeds n.
        assert_eq!(set_former(&GraphSpec::W { n: 2, k: 3 }).len(), 4);
    }

    #[test]
    fn counts_match_closed_form_for_every_family() {
        let mut specs = Vec::new();
        for n in 1..=12 {
            specs.extend([
                GraphSpec::Cmpl { n },
                GraphSpec::MaxAcyc { n },
                GraphSpec::Cyc { n },
                GraphSpec::Path { n },
                GraphSpec::Grid { n },
            ]);
            for k in 1..=n {
                specs.extend([
                    GraphSpec::PathDisj { n, k },
                    GraphSpec::X { n, k },
                    GraphSpec::Y { n, k },
                    GraphSpec::W { n, k },
                ]);
            }
            for k in 0..n {
                specs.push(GraphSpec::CycExtra { n, k });
            }
        }
        for h in 1..=9 {
            specs.extend([GraphSpec::BinTree { h }, GraphSpec::BinTreeRev { h }]);
        }
        for spec in specs.into_iter().filter(|s| s.validate().is_ok()) {
            let edges = generate(&spec).unwrap();
            assert_eq!(edges.len() as u64, edge_count(&spec).unwrap(), "{spec}");
            if !edges.is_empty() {
                let vertices = edges.vertices().len() as u64;
                assert_eq!(vertices, closed_form::vertices(&spec), "{spec}");
            }
        }
    }
}
