//! Exact closed forms for the vertex, edge and path counts of each graph
//! family and the optimal number of recursive-rule combinations per variant.
//!
//! Every formula is evaluated in 128-bit integers: the numerator is built
//! first and divided exactly at the end. A nonzero remainder, a negative
//! value or an overflow is reported as an integrity failure.

use std::fmt;

use thiserror::Error;

use crate::model::{GraphSpec, RecursionVariant, SpecViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClosedFormPrediction {
    pub vertices: u64,
    pub edges: u64,
    pub paths: u64,
    pub combos_left: u64,
    pub combos_right: u64,
    pub combos_double: u64,
}

impl ClosedFormPrediction {
    pub fn combos(&self, variant: RecursionVariant) -> u64 {
        match variant {
            RecursionVariant::Left => self.combos_left,
            RecursionVariant::Right => self.combos_right,
            RecursionVariant::Double => self.combos_double,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("invalid graph spec: {0}")]
    InvalidSpec(#[from] SpecViolation),
    #[error("integrity failure evaluating {quantity} for {spec}: {detail}")]
    Integrity {
        spec: GraphSpec,
        quantity: &'static str,
        detail: String,
    },
}

pub const CSV_HEADER: &str =
    "family,n,k,h,vertices,edges,paths,combos_left,combos_right,combos_double";

/// One CSV row matching [`CSV_HEADER`]; absent parameters are empty cells.
pub fn csv_row(spec: &GraphSpec, p: &ClosedFormPrediction) -> String {
    let cell = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        spec.family(),
        cell(spec.n()),
        cell(spec.k()),
        cell(spec.h()),
        p.vertices,
        p.edges,
        p.paths,
        p.combos_left,
        p.combos_right,
        p.combos_double
    )
}

/// Evaluates every closed form for a valid spec.
pub fn predict(spec: &GraphSpec) -> Result<ClosedFormPrediction, ClosedFormError> {
    spec.validate()?;
    let q = |quantity: &'static str, e: Expr| {
        e.exact().map_err(|detail| ClosedFormError::Integrity {
            spec: *spec,
            quantity,
            detail,
        })
    };
    let f = formulas(spec);
    let combos_left = q("combos_left", f.combos_single)?;
    Ok(ClosedFormPrediction {
        vertices: q("vertices", f.vertices)?,
        edges: q("edges", f.edges)?,
        paths: q("paths", f.paths)?,
        combos_left,
        combos_right: combos_left,
        combos_double: q("combos_double", f.combos_double)?,
    })
}

#[cfg(test)]
pub(crate) fn vertices(spec: &GraphSpec) -> u64 {
    formulas(spec)
        .vertices
        .exact()
        .expect("vertex formula is integral")
}

pub(crate) fn edges(spec: &GraphSpec) -> u64 {
    formulas(spec)
        .edges
        .exact()
        .expect("edge formula is integral")
}

/// Which way the edges of a complete binary tree point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeDirection {
    TowardLeaves,
    TowardRoot,
}

/// Counts `edge(X,Y), path(Y,Z)` combinations on an `h`-level binary tree by
/// summing per edge level instead of using the closed form.
///
/// Toward the leaves, level `i` (1..h-1) holds `2^i` edges whose lower
/// endpoint roots a subtree of `2^(h-i) - 1` nodes, itself excluded.
/// Toward the root, level `i` (h down to 2) holds `2^(i-1)` edges whose upper
/// endpoint has `i - 2` proper ancestors.
pub fn predict_summation_bintree(h: u64, direction: TreeDirection) -> u64 {
    let pow2 = |e: u64| -> u128 { 1u128 << e };
    let total: u128 = match direction {
        TreeDirection::TowardLeaves => (1..h).map(|i| pow2(i) * (pow2(h - i) - 2)).sum(),
        TreeDirection::TowardRoot => (2..=h).rev().map(|i| pow2(i - 1) * u128::from(i - 2)).sum(),
    };
    u64::try_from(total).expect("summation exceeds u64")
}

struct Formulas {
    vertices: Expr,
    edges: Expr,
    paths: Expr,
    combos_single: Expr,
    combos_double: Expr,
}

/// `numerator / denominator` with a checked integer numerator.
#[derive(Clone, Copy)]
struct Expr {
    num: Option<i128>,
    den: i128,
}

impl Expr {
    fn int(v: Option<i128>) -> Self {
        Self { num: v, den: 1 }
    }

    fn over(num: Option<i128>, den: i128) -> Self {
        Self { num, den }
    }

    fn exact(self) -> Result<u64, String> {
        let num = self.num.ok_or_else(|| "overflow".to_string())?;
        if num % self.den != 0 {
            return Err(format!("{num}/{} is not integral", self.den));
        }
        let v = num / self.den;
        u64::try_from(v).map_err(|_| format!("value {v} out of range"))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{}", self.num, self.den)
    }
}

/// Checked product of factors.
fn prod(factors: &[i128]) -> Option<i128> {
    factors.iter().try_fold(1i128, |acc, &f| acc.checked_mul(f))
}

fn formulas(spec: &GraphSpec) -> Formulas {
    let n = i128::from(spec.n().unwrap_or(0));
    let k = i128::from(spec.k().unwrap_or(0));
    let h = spec.h().unwrap_or(0);
    let int = Expr::int;
    let over = Expr::over;
    match spec {
        GraphSpec::Cmpl { .. } => {
            let cube = int(prod(&[n, n, n]));
            Formulas {
                vertices: int(Some(n)),
                edges: int(prod(&[n, n])),
                paths: int(prod(&[n, n])),
                combos_single: cube,
                combos_double: cube,
            }
        }
        GraphSpec::MaxAcyc { .. } => {
            let c = over(prod(&[n, n - 1, n - 2]), 6);
            Formulas {
                vertices: int(Some(n)),
                edges: over(prod(&[n, n - 1]), 2),
                paths: over(prod(&[n, n - 1]), 2),
                combos_single: c,
                combos_double: c,
            }
        }
        GraphSpec::Cyc { .. } => Formulas {
            vertices: int(Some(n)),
            edges: int(Some(n)),
            paths: int(prod(&[n, n])),
            combos_single: int(prod(&[n, n])),
            combos_double: int(prod(&[n, n, n])),
        },
        GraphSpec::CycExtra { .. } => Formulas {
            vertices: int(Some(n)),
            edges: int(prod(&[n, k + 1])),
            paths: int(prod(&[n, n])),
            combos_single: int(prod(&[n, n, k + 1])),
            combos_double: int(prod(&[n, n, n])),
        },
        GraphSpec::Path { .. } => Formulas {
            vertices: int(Some(n)),
            edges: int(Some(n - 1)),
            paths: over(prod(&[n, n - 1]), 2),
            combos_single: over(prod(&[n - 1, n - 2]), 2),
            combos_double: over(prod(&[n, n - 1, n - 2]), 6),
        },
        GraphSpec::PathDisj { .. } => Formulas {
            vertices: int(prod(&[n, k])),
            edges: int(prod(&[n - 1, k])),
            paths: over(prod(&[n, n - 1, k]), 2),
            combos_single: over(prod(&[n - 1, n - 2, k]), 2),
            combos_double: over(prod(&[n, n - 1, n - 2, k]), 6),
        },
        GraphSpec::Grid { .. } => {
            // n(n^3 - 5n + 4) / 2 and (n^3 + 7n^2 + 2n - 22) n^2 (n - 1) / 36
            let cubic = prod(&[n, n, n])
                .and_then(|c| c.checked_sub(5 * n))
                .and_then(|c| c.checked_add(4));
            let quartic = prod(&[n, n, n])
                .and_then(|c| c.checked_add(prod(&[7, n, n])?))
                .and_then(|c| c.checked_add(2 * n - 22));
            Formulas {
                vertices: int(prod(&[n, n])),
                edges: int(prod(&[2, n, n - 1])),
                paths: over(prod(&[n, n, n + 3, n - 1]), 4),
                combos_single: over(cubic.and_then(|c| c.checked_mul(n)), 2),
                combos_double: over(quartic.and_then(|q| prod(&[q, n, n, n - 1])), 36),
            }
        }
        GraphSpec::BinTree { .. } | GraphSpec::BinTreeRev { .. } => {
            let h = h as i128;
            let p = |e: i128| -> Option<i128> { 1i128.checked_shl(u32::try_from(e).ok()?) };
            let pow_h = p(h);
            Formulas {
                vertices: int(pow_h.map(|v| v - 1)),
                edges: int(pow_h.map(|v| v - 2)),
                paths: int(pow_h.and_then(|v| v.checked_mul(h - 2)).map(|v| v + 2)),
                combos_single: int(pow_h.and_then(|v| v.checked_mul(h - 3)).map(|v| v + 4)),
                combos_double: int(p(h - 1)
                    .and_then(|v| v.checked_mul(h * h - 5 * h + 8))
                    .map(|v| v - 4)),
            }
        }
        GraphSpec::X { .. } => {
            let c = int(prod(&[n, k]));
            Formulas {
                vertices: int(Some(n + k + 1)),
                edges: int(Some(n + k)),
                paths: int(prod(&[n, k]).map(|nk| n + k + nk)),
                combos_single: c,
                combos_double: c,
            }
        }
        GraphSpec::Y { .. } => Formulas {
            vertices: int(Some(n + k)),
            edges: int(Some(n + k - 1)),
            paths: over(prod(&[2 * n + k - 1, k]), 2),
            combos_single: over(prod(&[2 * n + k - 2, k - 1]), 2),
            combos_double: over(prod(&[3 * n + k - 2, k, k - 1]), 6),
        },
        GraphSpec::W { .. } => Formulas {
            vertices: int(Some(2 * n)),
            edges: int(prod(&[n, k])),
            paths: int(prod(&[n, k])),
            combos_single: int(Some(0)),
            combos_double: int(Some(0)),
        },
    }
}
