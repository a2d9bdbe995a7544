//! Exact checks of the polygon and simplex identities.
//!
//! Every check returns a [`Report`]; a failure carries the first witness
//! found (1-based coordinates, both side values).

mod equations;
mod multivectors;
mod reduction;
mod sectors;

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

pub use equations::{verify_gon, verify_gon_transposed, verify_inverse, verify_simplex};
pub use multivectors::{intertwining_failure, verify_intertwining, verify_ranks};
pub use reduction::{verify_reduction, DEFAULT_DEPTH};
pub use sectors::{green_spectrum, verify_colors};

use crate::batch::map_collect;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grassmann::{GrassmannPoint, PlueckerTable};
use crate::linalg::Matrix;
use crate::report::{Outcome, Report};
use crate::solutions::OperatorSlot;

/// Ambient identity with `slot` written into its position rows and columns.
pub fn embed(slot: &OperatorSlot, ambient_dim: usize) -> Result<Matrix> {
    let mut m = Matrix::identity(slot.matrix.field(), ambient_dim);
    apply(&mut m, slot)?;
    Ok(m)
}

fn apply(m: &mut Matrix, slot: &OperatorSlot) -> Result<()> {
    let pos = &slot.positions.positions;
    if pos.len() != slot.matrix.rows() || !slot.matrix.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix at {} positions",
            slot.matrix.rows(),
            slot.matrix.cols(),
            pos.len()
        )));
    }
    if pos.iter().any(|&p| p == 0 || p > m.cols()) {
        return Err(Error::InvalidIndex(format!(
            "positions {pos:?} outside 1..={}",
            m.cols()
        )));
    }
    m.apply_local(&slot.positions.zero_based(), &slot.matrix);
    Ok(())
}

/// Product of the embedded slots in application order (leftmost first).
pub fn side_product(slots: &[&OperatorSlot], ambient_dim: usize) -> Result<Matrix> {
    let field = slots
        .first()
        .map(|s| s.matrix.field().clone())
        .ok_or_else(|| Error::DimensionMismatch("empty side".into()))?;
    let mut m = Matrix::identity(&field, ambient_dim);
    for s in slots {
        apply(&mut m, s)?;
    }
    Ok(m)
}

/// Same product through full embeddings and dense multiplication.
pub fn side_product_dense(slots: &[&OperatorSlot], ambient_dim: usize) -> Result<Matrix> {
    let mut acc: Option<Matrix> = None;
    for s in slots {
        let e = embed(s, ambient_dim)?;
        acc = Some(match acc {
            None => e,
            Some(a) => a.try_mul(&e)?,
        });
    }
    acc.ok_or_else(|| Error::DimensionMismatch("empty side".into()))
}

/// Picks the slots with the given labels, in that order.
pub(crate) fn pick<'a>(slots: &'a [OperatorSlot], labels: &[usize]) -> Vec<&'a OperatorSlot> {
    labels.iter().map(|&q| &slots[q - 1]).collect()
}

pub(crate) fn mismatch(lhs: &Matrix, rhs: &Matrix) -> Option<Value> {
    lhs.first_mismatch(rhs).map(|(r, c)| {
        json!({
            "row": r + 1,
            "col": c + 1,
            "lhs": lhs.get(r, c).to_json(),
            "rhs": rhs.get(r, c).to_json(),
        })
    })
}

pub(crate) fn tag(mut w: Value, key: &str, v: Value) -> Value {
    w[key] = v;
    w
}

pub(crate) fn outcome(r: Result<Option<Value>>) -> Outcome {
    match r {
        Ok(None) => Outcome::Pass,
        Ok(Some(w)) => Outcome::Fail(w),
        Err(e) => Outcome::Fail(json!({ "error": e.to_string() })),
    }
}

pub(crate) fn all_labels<F>(tbl: &PlueckerTable, build: F) -> Result<Vec<OperatorSlot>>
where
    F: Fn(&PlueckerTable, usize) -> Result<OperatorSlot>,
{
    (1..=tbl.dim()).map(|q| build(tbl, q)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    Gon,
    Simplex,
    Inverse,
    Transposed,
    Colors,
    Green,
    Intertwining,
    Ranks,
    Reduction,
    Plucker,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Gon,
        Check::Simplex,
        Check::Inverse,
        Check::Transposed,
        Check::Colors,
        Check::Green,
        Check::Intertwining,
        Check::Ranks,
        Check::Reduction,
        Check::Plucker,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Gon => "gon",
            Check::Simplex => "simplex",
            Check::Inverse => "inverse",
            Check::Transposed => "transposed",
            Check::Colors => "colors",
            Check::Green => "green",
            Check::Intertwining => "intertwining",
            Check::Ranks => "ranks",
            Check::Reduction => "reduction",
            Check::Plucker => "plucker",
        }
    }

    /// Parses a comma-separated list; `all` expands to every check.
    pub fn parse_list(text: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Unsupported("empty check list".into()));
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|c| seen.insert(*c));
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown check {s:?}")))
    }
}

/// Reduction parameters used when [`Check::Reduction`] is selected.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOptions {
    pub lambdas: Vec<Scalar>,
    pub depth: usize,
}

impl ReductionOptions {
    /// λ ∈ {0, 1} at depth 1.
    pub fn defaults(pt: &GrassmannPoint) -> Self {
        let f = pt.field();
        ReductionOptions { lambdas: vec![f.zero(), f.one()], depth: DEFAULT_DEPTH }
    }
}

pub fn run_check(pt: &GrassmannPoint, check: Check, red: &ReductionOptions) -> Result<Report> {
    Ok(match check {
        Check::Gon => verify_gon(pt),
        Check::Simplex => verify_simplex(pt),
        Check::Inverse => verify_inverse(pt),
        Check::Transposed => verify_gon_transposed(pt),
        Check::Colors => verify_colors(pt),
        Check::Green => green_spectrum(pt),
        Check::Intertwining => verify_intertwining(pt),
        Check::Ranks => verify_ranks(pt),
        Check::Reduction => verify_reduction(pt, &red.lambdas, red.depth)?,
        Check::Plucker => pt.table().verify_plucker_relations(pt.params()),
    })
}

/// Runs the checks concurrently (with the `parallel` feature); reports come
/// back in the order of `checks`.
pub fn run_checks(pt: &GrassmannPoint, checks: &[Check], red: &ReductionOptions) -> Result<Vec<Report>> {
    map_collect(checks, |&c| run_check(pt, c, red)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::PositionSet;
    use crate::field::Field;
    use crate::grassmann::{random_point, DEFAULT_MAX_TRIES};
    use crate::solutions::{build_a, build_r, Kind};

    fn slot(m: Matrix, positions: Vec<usize>) -> OperatorSlot {
        OperatorSlot { label: 1, kind: Kind::A, matrix: m, positions: PositionSet { label: 1, positions }, lambda: None }
    }

    #[test]
    fn embedding() {
        let q = Field::rationals();
        let e = embed(&slot(Matrix::from_ints(&q, &[&[5]]).unwrap(), vec![2]), 3).unwrap();
        assert_eq!(e, Matrix::from_ints(&q, &[&[1, 0, 0], &[0, 5, 0], &[0, 0, 1]]).unwrap());
        let id = embed(&slot(Matrix::identity(&q, 2), vec![1, 3]), 4).unwrap();
        assert!(id.is_identity());
        let a = Matrix::from_ints(&q, &[&[2, 3], &[4, 5]]).unwrap();
        let e = embed(&slot(a, vec![1, 3]), 3).unwrap();
        assert_eq!(e, Matrix::from_ints(&q, &[&[2, 0, 3], &[0, 1, 0], &[4, 0, 5]]).unwrap());
        assert!(embed(&slot(Matrix::identity(&q, 2), vec![1, 4]), 3).is_err());
        assert!(embed(&slot(Matrix::identity(&q, 2), vec![1]), 3).is_err());
    }

    #[test]
    fn sparse_and_dense_products_agree() {
        for n in 1..=3 {
            let pt = random_point(n, &Field::rationals(), 6, DEFAULT_MAX_TRIES).unwrap();
            let rs = all_labels(pt.table(), build_r).unwrap();
            let refs: Vec<&OperatorSlot> = rs.iter().collect();
            let dim = n * (2 * n + 1);
            assert_eq!(side_product(&refs, dim).unwrap(), side_product_dense(&refs, dim).unwrap());
            let a = all_labels(pt.table(), build_a).unwrap();
            let one = side_product(&[&a[0]], n * (n + 1) / 2).unwrap();
            assert_eq!(one, embed(&a[0], n * (n + 1) / 2).unwrap());
        }
    }

    #[test]
    fn check_names() {
        assert_eq!(Check::parse_list("gon,simplex").unwrap(), vec![Check::Gon, Check::Simplex]);
        assert_eq!(Check::parse_list("all").unwrap().len(), Check::ALL.len());
        assert_eq!(Check::parse_list("gon,gon").unwrap(), vec![Check::Gon]);
        assert!(Check::parse_list("gon,bogus").is_err());
        assert!(Check::parse_list("").is_err());
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
    }

    #[test]
    fn all_checks_pass_on_a_random_point() {
        for (n, field) in [(1, "q"), (2, "q"), (2, "gf(11)"), (3, "gf(97)")] {
            let pt = random_point(n, &Field::parse(field).unwrap(), 21, DEFAULT_MAX_TRIES).unwrap();
            let reports = run_checks(&pt, &Check::ALL, &ReductionOptions::defaults(&pt)).unwrap();
            for r in &reports {
                assert!(r.passed(), "n={n} {field}: {}", serde_json::to_string(&r.to_json()).unwrap());
            }
            let names: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
            assert_eq!(names, Check::ALL.map(Check::name).to_vec());
        }
    }
}
