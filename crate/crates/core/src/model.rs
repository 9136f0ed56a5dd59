//! Shared data model: binary relations, graph family specifications,
//! recursion variants and the firing counters every engine reports.

use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Vertex identifier. Generators number vertices from 1; engines never assume
/// the ids are dense or contiguous.
pub type Vertex = u32;

/// An ordered vertex pair, `(source, target)`.
pub type Pair = (Vertex, Vertex);

/// A finite binary relation with set semantics, iterated in lexicographic
/// `(source, target)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Relation {
    pairs: BTreeSet<Pair>,
}

/// The `edge` predicate.
pub type EdgeRelation = Relation;
/// The `path` predicate.
pub type PathRelation = Relation;

impl Relation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a pair, returning `true` if it was not present.
    ///
    /// Panics if either endpoint is 0; vertex ids are positive.
    pub fn insert(&mut self, source: Vertex, target: Vertex) -> bool {
        assert!(
            source >= 1 && target >= 1,
            "vertex ids must be positive, got ({source},{target})"
        );
        self.pairs.insert((source, target))
    }

    pub fn contains(&self, source: Vertex, target: Vertex) -> bool {
        self.pairs.contains(&(source, target))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Pair> + ExactSizeIterator + '_ {
        self.pairs.iter().copied()
    }

    /// Pairs whose source is `source`, in target order.
    pub fn successors(&self, source: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.pairs
            .range((source, Vertex::MIN)..=(source, Vertex::MAX))
            .map(|&(_, t)| t)
    }

    /// Every vertex that occurs as a source or a target.
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.pairs.iter().flat_map(|&(s, t)| [s, t]).collect()
    }

    /// Every vertex that occurs as a target.
    pub fn targets(&self) -> BTreeSet<Vertex> {
        self.pairs.iter().map(|&(_, t)| t).collect()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

impl FromIterator<Pair> for Relation {
    fn from_iter<I: IntoIterator<Item = Pair>>(iter: I) -> Self {
        let mut rel = Relation::new();
        rel.extend(iter);
        rel
    }
}

impl Extend<Pair> for Relation {
    fn extend<I: IntoIterator<Item = Pair>>(&mut self, iter: I) {
        for (s, t) in iter {
            self.insert(s, t);
        }
    }
}

impl<'a> IntoIterator for &'a Relation {
    type Item = &'a Pair;
    type IntoIter = btree_set::Iter<'a, Pair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

/// The two predicates of the transitive-closure program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Edge,
    Path,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Self::Edge => "edge",
            Self::Path => "path",
        }
    }
}

/// Which body the recursive `path` rule uses. The base rule
/// `path(X,Y) :- edge(X,Y).` is always present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecursionVariant {
    /// `path(X,Y) :- path(X,Z), edge(Z,Y).`
    Left,
    /// `path(X,Y) :- edge(X,Z), path(Z,Y).`
    Right,
    /// `path(X,Y) :- path(X,Z), path(Z,Y).`
    Double,
}

impl RecursionVariant {
    pub const ALL: [RecursionVariant; 3] = [Self::Left, Self::Right, Self::Double];

    pub fn name(self) -> &'static str {
        match self {
            Self::Left => "left",
            Self::Right => "right",
            Self::Double => "double",
        }
    }

    /// Source text of the recursive rule.
    pub fn rule_text(self) -> &'static str {
        match self {
            Self::Left => "path(X,Y) :- path(X,Z), edge(Z,Y).",
            Self::Right => "path(X,Y) :- edge(X,Z), path(Z,Y).",
            Self::Double => "path(X,Y) :- path(X,Z), path(Z,Y).",
        }
    }
}

impl fmt::Display for RecursionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RecursionVariant {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName::new("variant", s))
    }
}

/// A name that did not match any member of a closed vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown {kind} `{name}`")]
pub struct UnknownName {
    pub kind: &'static str,
    pub name: String,
}

impl UnknownName {
    pub(crate) fn new(kind: &'static str, name: &str) -> Self {
        Self {
            kind,
            name: name.to_string(),
        }
    }
}

/// The twelve graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Cmpl,
    MaxAcyc,
    Cyc,
    CycExtra,
    Path,
    PathDisj,
    Grid,
    BinTree,
    BinTreeRev,
    X,
    Y,
    W,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Self::Cmpl,
        Self::MaxAcyc,
        Self::Cyc,
        Self::CycExtra,
        Self::Path,
        Self::PathDisj,
        Self::Grid,
        Self::BinTree,
        Self::BinTreeRev,
        Self::X,
        Self::Y,
        Self::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cmpl => "Cmpl",
            Self::MaxAcyc => "MaxAcyc",
            Self::Cyc => "Cyc",
            Self::CycExtra => "CycExtra",
            Self::Path => "Path",
            Self::PathDisj => "PathDisj",
            Self::Grid => "Grid",
            Self::BinTree => "BinTree",
            Self::BinTreeRev => "BinTreeRev",
            Self::X => "X",
            Self::Y => "Y",
            Self::W => "W",
        }
    }

    pub fn takes_n(self) -> bool {
        !matches!(self, Self::BinTree | Self::BinTreeRev)
    }

    pub fn takes_k(self) -> bool {
        matches!(
            self,
            Self::CycExtra | Self::PathDisj | Self::X | Self::Y | Self::W
        )
    }

    pub fn takes_h(self) -> bool {
        matches!(self, Self::BinTree | Self::BinTreeRev)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = UnknownName;

    /// Case-insensitive; `cycle` is accepted as an alias of `cyc`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("cycle") {
            return Ok(Self::Cyc);
        }
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName::new("graph family", s))
    }
}

/// One graph family instance with exactly the parameters the family takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphSpec {
    Cmpl { n: u64 },
    MaxAcyc { n: u64 },
    Cyc { n: u64 },
    CycExtra { n: u64, k: u64 },
    Path { n: u64 },
    PathDisj { n: u64, k: u64 },
    Grid { n: u64 },
    BinTree { h: u64 },
    BinTreeRev { h: u64 },
    X { n: u64, k: u64 },
    Y { n: u64, k: u64 },
    W { n: u64, k: u64 },
}

/// A violated [`GraphSpec`] constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{family}: {constraint}")]
pub struct SpecViolation {
    pub family: Family,
    pub constraint: String,
}

impl SpecViolation {
    fn new(family: Family, constraint: impl Into<String>) -> Self {
        Self {
            family,
            constraint: constraint.into(),
        }
    }
}

impl GraphSpec {
    /// Builds a spec from a family and loose parameters, rejecting missing or
    /// superfluous ones. Bounds are checked separately by [`GraphSpec::validate`].
    pub fn from_parts(
        family: Family,
        n: Option<u64>,
        k: Option<u64>,
        h: Option<u64>,
    ) -> Result<Self, SpecViolation> {
        let need = |name: &str, takes: bool, value: Option<u64>| -> Result<u64, SpecViolation> {
            match (takes, value) {
                (true, Some(v)) => Ok(v),
                (true, None) => Err(SpecViolation::new(
                    family,
                    format!("parameter {name} is required"),
                )),
                (false, Some(_)) => Err(SpecViolation::new(
                    family,
                    format!("parameter {name} is not accepted"),
                )),
                (false, None) => Ok(0),
            }
        };
        let n = need("n", family.takes_n(), n)?;
        let k = need("k", family.takes_k(), k)?;
        let h = need("h", family.takes_h(), h)?;
        Ok(match family {
            Family::Cmpl => Self::Cmpl { n },
            Family::MaxAcyc => Self::MaxAcyc { n },
            Family::Cyc => Self::Cyc { n },
            Family::CycExtra => Self::CycExtra { n, k },
            Family::Path => Self::Path { n },
            Family::PathDisj => Self::PathDisj { n, k },
            Family::Grid => Self::Grid { n },
            Family::BinTree => Self::BinTree { h },
            Family::BinTreeRev => Self::BinTreeRev { h },
            Family::X => Self::X { n, k },
            Family::Y => Self::Y { n, k },
            Family::W => Self::W { n, k },
        })
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Cmpl { .. } => Family::Cmpl,
            Self::MaxAcyc { .. } => Family::MaxAcyc,
            Self::Cyc { .. } => Family::Cyc,
            Self::CycExtra { .. } => Family::CycExtra,
            Self::Path { .. } => Family::Path,
            Self::PathDisj { .. } => Family::PathDisj,
            Self::Grid { .. } => Family::Grid,
            Self::BinTree { .. } => Family::BinTree,
            Self::BinTreeRev { .. } => Family::BinTreeRev,
            Self::X { .. } => Family::X,
            Self::Y { .. } => Family::Y,
            Self::W { .. } => Family::W,
        }
    }

    pub fn n(&self) -> Option<u64> {
        match *self {
            Self::Cmpl { n }
            | Self::MaxAcyc { n }
            | Self::Cyc { n }
            | Self::CycExtra { n, .. }
            | Self::Path { n }
            | Self::PathDisj { n, .. }
            | Self::Grid { n }
            | Self::X { n, .. }
            | Self::Y { n, .. }
            | Self::W { n, .. } => Some(n),
            Self::BinTree { .. } | Self::BinTreeRev { .. } => None,
        }
    }

    pub fn k(&self) -> Option<u64> {
        match *self {
            Self::CycExtra { k, .. }
            | Self::PathDisj { k, .. }
            | Self::X { k, .. }
            | Self::Y { k, .. }
            | Self::W { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn h(&self) -> Option<u64> {
        match *self {
            Self::BinTree { h } | Self::BinTreeRev { h } => Some(h),
            _ => None,
        }
    }

    /// Checks parameter bounds.
    pub fn validate(&self) -> Result<(), SpecViolation> {
        let family = self.family();
        let fail = |c: &str| Err(SpecViolation::new(family, c));
        if let Some(n) = self.n() {
            if n < 1 {
                return fail("n ≥ 1");
            }
        }
        if let Some(h) = self.h() {
            if h < 1 {
                return fail("h ≥ 1");
            }
            // 2^h must stay well inside u32 vertex ids.
            if h > 31 {
                return fail("h ≤ 31");
            }
        }
        match *self {
            Self::CycExtra { n, k } => {
                if n % (k + 1) != 0 {
                    return fail("(k+1) must divide n");
                }
                // Spacing 1 puts the first extra edge on top of the cycle edge.
                if k >= 1 && n / (k + 1) < 2 {
                    return fail("n/(k+1) ≥ 2 when k ≥ 1");
                }
            }
            Self::PathDisj { k, .. } | Self::X { k, .. } | Self::Y { k, .. } => {
                if k < 1 {
                    return fail("k ≥ 1");
                }
            }
            Self::W { n, k } => {
                if k < 1 {
                    return fail("k ≥ 1");
                }
                if k > n {
                    return fail("k ≤ n");
                }
            }
            _ => {}
        }
        if self.max_vertex() > u128::from(Vertex::MAX) {
            return fail("vertex ids exceed 32 bits");
        }
        Ok(())
    }

    /// Largest vertex id the family's definition produces.
    fn max_vertex(&self) -> u128 {
        let sq = |v: u64| u128::from(v) * u128::from(v);
        match *self {
            Self::Grid { n } => sq(n),
            Self::PathDisj { n, k } => u128::from(n) * u128::from(k),
            Self::BinTree { h } | Self::BinTreeRev { h } => (1u128 << h.min(127)) - 1,
            Self::X { n, k } => u128::from(n) + u128::from(k) + 1,
            Self::Y { n, k } => u128::from(n) + u128::from(k),
            Self::W { n, .. } => 2 * u128::from(n),
            _ => u128::from(self.n().unwrap_or(0)),
        }
    }

    /// Short label such as `Grid(n=4)` or `W(n=3,k=2)`.
    pub fn label(&self) -> String {
        let mut params = Vec::new();
        if let Some(n) = self.n() {
            params.push(format!("n={n}"));
        }
        if let Some(k) = self.k() {
            params.push(format!("k={k}"));
        }
        if let Some(h) = self.h() {
            params.push(format!("h={h}"));
        }
        format!("{}({})", self.family(), params.join(","))
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Counters reported by every engine run.
///
/// `probes` counts index lookups plus candidates retrieved from them. It is
/// diagnostic only: its value depends on iteration order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Instrumentation {
    /// Firings of `path(X,Y) :- edge(X,Y).`
    pub base_firings: u64,
    /// Hypothesis combinations of the recursive rule that fired.
    pub rec_firings: u64,
    pub probes: u64,
    /// Fixpoint rounds or worklist pops, depending on the engine.
    pub iterations: u64,
    /// Firings whose conclusion was already known.
    pub duplicate_derivations: u64,
    /// Distinct tabled subgoals; zero for engines without tables.
    pub tables_created: u64,
}

impl fmt::Display for Instrumentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "base_firings={} rec_firings={} probes={} iterations={} duplicate_derivations={} tables_created={}",
            self.base_firings,
            self.rec_firings,
            self.probes,
            self.iterations,
            self.duplicate_derivations,
            self.tables_created
        )
    }
}
