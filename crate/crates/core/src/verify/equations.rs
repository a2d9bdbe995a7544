use serde_json::json;

use super::{all_labels, mismatch, outcome, pick, side_product, tag};
use crate::combinatorics::{gon_dim, gon_inverse_labels, gon_labels, simplex_dim, Side};
use crate::error::Result;
use crate::grassmann::GrassmannPoint;
use crate::report::Report;
use crate::solutions::{build_a, build_b, build_r, build_r_factored, OperatorSlot};
use serde_json::Value;

fn compare_sides(
    slots: &[OperatorSlot],
    lhs: &[usize],
    rhs: &[usize],
    dim: usize,
) -> Result<Option<Value>> {
    let l = side_product(&pick(slots, lhs), dim)?;
    let r = side_product(&pick(slots, rhs), dim)?;
    Ok(mismatch(&l, &r))
}

/// `A^(1) A^(3) ⋯ A^(2n+1) = A^(2n) ⋯ A^(2)` and
/// `B^(2) B^(4) ⋯ B^(2n) = B^(2n+1) ⋯ B^(1)` in dimension n(n+1)/2.
pub fn verify_gon(pt: &GrassmannPoint) -> Report {
    Report::run("gon", pt.params(), || {
        outcome((|| {
            let n = pt.n();
            let dim = gon_dim(n);
            let a = all_labels(pt.table(), build_a)?;
            let lhs = gon_labels(n, Side::Lhs);
            let rhs = gon_labels(n, Side::Rhs);
            if let Some(w) = compare_sides(&a, &lhs, &rhs, dim)? {
                return Ok(Some(tag(w, "equation", json!("A"))));
            }
            let b = all_labels(pt.table(), build_b)?;
            let lhs = gon_inverse_labels(n, Side::Lhs);
            let rhs = gon_inverse_labels(n, Side::Rhs);
            Ok(compare_sides(&b, &lhs, &rhs, dim)?.map(|w| tag(w, "equation", json!("B"))))
        })())
    })
}

/// The inverse gon equation with each `B^(q)` replaced by the transpose of `A^(q)`.
pub fn verify_gon_transposed(pt: &GrassmannPoint) -> Report {
    Report::run("transposed", pt.params(), || {
        outcome((|| {
            let n = pt.n();
            let mut t = all_labels(pt.table(), build_a)?;
            for s in &mut t {
                s.matrix = s.matrix.transpose();
            }
            let lhs = gon_inverse_labels(n, Side::Lhs);
            let rhs = gon_inverse_labels(n, Side::Rhs);
            compare_sides(&t, &lhs, &rhs, gon_dim(n))
        })())
    })
}

/// `R^(1) ⋯ R^(2n+1) = R^(2n+1) ⋯ R^(1)` in dimension n(2n+1).
pub fn verify_simplex(pt: &GrassmannPoint) -> Report {
    Report::run("simplex", pt.params(), || {
        outcome((|| {
            let n = pt.n();
            let r = all_labels(pt.table(), build_r)?;
            let lhs: Vec<usize> = (1..=2 * n + 1).collect();
            let rhs: Vec<usize> = lhs.iter().rev().copied().collect();
            compare_sides(&r, &lhs, &rhs, simplex_dim(2 * n))
        })())
    })
}

/// For every label: `B·A = A·B = 1`, `R·R = 1`, and the entry-pattern R
/// equals the product of its factors.
pub fn verify_inverse(pt: &GrassmannPoint) -> Report {
    Report::run("inverse", pt.params(), || {
        outcome((|| {
            let t = pt.table();
            for q in 1..=t.dim() {
                let a = build_a(t, q)?.matrix;
                let b = build_b(t, q)?.matrix;
                let r = build_r(t, q)?.matrix;
                let checks = [
                    ("BA", &b * &a, None),
                    ("AB", &a * &b, None),
                    ("RR", &r * &r, None),
                    ("factored", r.clone(), Some(build_r_factored(t, q)?)),
                ];
                for (name, got, want) in checks {
                    let want = want.unwrap_or_else(|| crate::linalg::Matrix::identity(t.field(), got.rows()));
                    if let Some(w) = mismatch(&got, &want) {
                        return Ok(Some(tag(tag(w, "relation", json!(name)), "q", json!(q))));
                    }
                }
            }
            Ok(None)
        })())
    })
}
