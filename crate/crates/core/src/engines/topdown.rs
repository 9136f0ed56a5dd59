//! Tabled top-down evaluation with variant tabling.
//!
//! A call to `path` is abstracted to its first argument: either open,
//! `path(X,Y)`, or bound, `path(a,Y)`. Each distinct call gets a table. When
//! a body literal calls `path`, the caller registers a consumer on the
//! callee's table; answers are then delivered to consumers through a FIFO
//! worklist of `(table, answer)` pairs until no table grows.
//!
//! Body literals are selected left to right. With left recursion the
//! recursive call `path(X,Z)` has the caller's own binding pattern, so only
//! the open table exists. Right recursion calls `path(z,Y)` for every edge
//! target `z`; double recursion calls it for every answer target.

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};

use super::{pack, Adjacency, EvalResult, Phase};
use crate::model::{EdgeRelation, Instrumentation, Pair, RecursionVariant, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Call {
    Open,
    Bound(Vertex),
}

type TableId = usize;

/// A continuation waiting on the answers of one table.
#[derive(Debug, Clone, Copy)]
enum Consumer {
    /// `path(X,Y) :- path(X,Z), edge(Z,Y)`: join each answer with edges.
    LeftEdge { caller: TableId },
    /// `path(X,Y) :- edge(x,Z), path(Z,Y)`: prefix each answer with `x`.
    RightPrefix { caller: TableId, x: Vertex },
    /// First literal of `path(X,Z), path(Z,Y)`: call `path(z,Y)` per answer.
    DoubleFirst { caller: TableId },
    /// Second literal of `path(x,Z), path(Z,Y)`: prefix each answer with `x`.
    DoubleSecond { caller: TableId, x: Vertex },
}

struct Table {
    answers: FxHashSet<u64>,
    list: Vec<Pair>,
    /// Answers `list[..delivered]` have reached every registered consumer.
    delivered: usize,
    consumers: Vec<Consumer>,
}

#[derive(Debug, Clone, Copy)]
enum Task {
    /// Resolve a new table's clauses.
    Seed(TableId, Call),
    /// Deliver `list[idx]` of a table to its consumers.
    Answer(TableId, usize),
}

struct Tabling<'a> {
    variant: RecursionVariant,
    edges: &'a [Pair],
    edge_out: Adjacency,
    tables: Vec<Table>,
    index: FxHashMap<Call, TableId>,
    worklist: VecDeque<Task>,
    instr: Instrumentation,
}

/// Evaluates the open query `path(X,Y)` with tabling.
///
/// `tables_created` counts distinct calls. `base_firings` counts firings of
/// the base rule in the open query's table, one per edge; bound calls resolve
/// their base clause against the edge index and are counted under `probes`.
/// `rec_firings` sums recursive-rule firings over all tables and
/// `iterations` counts worklist pops, table seeding included.
pub fn solve_topdown(edges: &EdgeRelation, variant: RecursionVariant) -> EvalResult {
    let start = Instant::now();
    let edge_list: Vec<Pair> = edges.iter().collect();
    let mut engine = Tabling {
        variant,
        edges: &edge_list,
        edge_out: Adjacency::forward(&edge_list),
        tables: Vec::new(),
        index: FxHashMap::default(),
        worklist: VecDeque::new(),
        instr: Instrumentation::default(),
    };
    let root = engine.call(Call::Open);
    engine.run();

    let paths = engine.tables[root].list.iter().copied().collect();
    EvalResult {
        paths,
        instr: engine.instr,
        phase_times: BTreeMap::from([(Phase::Query, start.elapsed())]),
    }
}

impl Tabling<'_> {
    /// Returns the table for `call`, creating it and queueing its clause
    /// resolution if new.
    fn call(&mut self, call: Call) -> TableId {
        if let Some(&id) = self.index.get(&call) {
            return id;
        }
        let id = self.tables.len();
        self.tables.push(Table {
            answers: FxHashSet::default(),
            list: Vec::new(),
            delivered: 0,
            consumers: Vec::new(),
        });
        self.index.insert(call, id);
        self.instr.tables_created += 1;
        self.worklist.push_back(Task::Seed(id, call));
        id
    }

    fn seed(&mut self, id: TableId, call: Call) {
        // path(X,Y) :- edge(X,Y).
        match call {
            Call::Open => {
                for i in 0..self.edges.len() {
                    let (s, t) = self.edges[i];
                    self.instr.base_firings += 1;
                    self.add_answer(id, s, t);
                }
            }
            Call::Bound(a) => {
                let n = self.edge_out.get(a).len();
                self.instr.probes += 1 + n as u64;
                for i in 0..n {
                    let t = self.edge_out.get(a)[i];
                    self.add_answer(id, a, t);
                }
            }
        }

        // Recursive clause, first literal.
        match self.variant {
            RecursionVariant::Left => self.consume(id, Consumer::LeftEdge { caller: id }),
            RecursionVariant::Double => self.consume(id, Consumer::DoubleFirst { caller: id }),
            RecursionVariant::Right => {
                let firsts: Vec<Pair> = match call {
                    Call::Open => self.edges.to_vec(),
                    Call::Bound(a) => self.edge_out.get(a).iter().map(|&z| (a, z)).collect(),
                };
                self.instr.probes += 1 + firsts.len() as u64;
                for (x, z) in firsts {
                    let callee = self.call(Call::Bound(z));
                    self.consume(callee, Consumer::RightPrefix { caller: id, x });
                }
            }
        }
    }

    fn add_answer(&mut self, table: TableId, s: Vertex, t: Vertex) -> bool {
        let tbl = &mut self.tables[table];
        if tbl.answers.insert(pack(s, t)) {
            tbl.list.push((s, t));
            self.worklist
                .push_back(Task::Answer(table, tbl.list.len() - 1));
            true
        } else {
            false
        }
    }

    /// A recursive-rule firing concluding `(x, y)` in `caller`'s table.
    fn fire(&mut self, caller: TableId, x: Vertex, y: Vertex) {
        self.instr.rec_firings += 1;
        if !self.add_answer(caller, x, y) {
            self.instr.duplicate_derivations += 1;
        }
    }

    /// Registers `consumer` on `table` and replays the answers it missed.
    fn consume(&mut self, table: TableId, consumer: Consumer) {
        self.tables[table].consumers.push(consumer);
        let delivered = self.tables[table].delivered;
        for i in 0..delivered {
            let answer = self.tables[table].list[i];
            self.deliver(consumer, answer);
        }
    }

    fn deliver(&mut self, consumer: Consumer, (first, second): Pair) {
        match consumer {
            Consumer::LeftEdge { caller } => {
                let (x, z) = (first, second);
                let n = self.edge_out.get(z).len();
                self.instr.probes += 1 + n as u64;
                for i in 0..n {
                    let y = self.edge_out.get(z)[i];
                    self.fire(caller, x, y);
                }
            }
            Consumer::RightPrefix { caller, x } | Consumer::DoubleSecond { caller, x } => {
                self.instr.probes += 1;
                self.fire(caller, x, second);
            }
            Consumer::DoubleFirst { caller } => {
                let (x, z) = (first, second);
                let callee = self.call(Call::Bound(z));
                self.consume(callee, Consumer::DoubleSecond { caller, x });
            }
        }
    }

    fn run(&mut self) {
        while let Some(task) = self.worklist.pop_front() {
            self.instr.iterations += 1;
            let (table, idx) = match task {
                Task::Seed(id, call) => {
                    self.seed(id, call);
                    continue;
                }
                Task::Answer(table, idx) => (table, idx),
            };
            let answer = self.tables[table].list[idx];
            // Consumers registered while delivering this answer are replayed
            // only up to `delivered`, so they are reached by this loop.
            let mut c = 0;
            while c < self.tables[table].consumers.len() {
                let consumer = self.tables[table].consumers[c];
                self.deliver(consumer, answer);
                c += 1;
            }
            self.tables[table].delivered = idx + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_gen::generate;
    use crate::model::{GraphSpec, Relation};

    #[test]
    fn cycle_left_uses_one_table() {
        let edges = generate(&GraphSpec::Cyc { n: 4 }).unwrap();
        let r = solve_topdown(&edges, RecursionVariant::Left);
        assert_eq!(r.paths.len(), 16);
        assert_eq!(r.instr.tables_created, 1);
    }

    #[test]
    fn path_right_tables_per_edge_target() {
        let edges = generate(&GraphSpec::Path { n: 3 }).unwrap();
        let r = solve_topdown(&edges, RecursionVariant::Right);
        assert_eq!(r.instr.tables_created, 3);
        assert_eq!(r.paths, [(1, 2), (2, 3), (1, 3)].into_iter().collect());
    }

    #[test]
    fn empty_input_has_the_open_table() {
        for v in RecursionVariant::ALL {
            let r = solve_topdown(&Relation::new(), v);
            assert!(r.paths.is_empty());
            assert_eq!(r.instr.tables_created, 1);
        }
    }

    #[test]
    fn self_loop_terminates() {
        let edges: Relation = [(1, 1), (1, 2), (2, 1)].into_iter().collect();
        for v in RecursionVariant::ALL {
            let r = solve_topdown(&edges, v);
            assert_eq!(r.paths.len(), 4, "{v}");
            assert_eq!(r.instr.base_firings, 3);
        }
    }

    #[test]
    fn double_tables_per_path_target() {
        let edges = generate(&GraphSpec::BinTree { h: 3 }).unwrap();
        let r = solve_topdown(&edges, RecursionVariant::Double);
        // targets of paths: 2..=7
        assert_eq!(r.instr.tables_created, 7);
        assert_eq!(r.paths.len(), 10);
    }
}
