use serde_json::{json, Value};

use super::{mismatch, side_product, tag};
use crate::combinatorics::simplex_dim;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grassmann::GrassmannPoint;
use crate::report::{Outcome, Report};
use crate::solutions::{build_r, eliminate_last, reduction_levels};

pub const DEFAULT_DEPTH: usize = 1;

enum Run {
    Ok,
    Singular(String),
    Fail(Value),
}

fn one_lambda(pt: &GrassmannPoint, lambda: &Scalar, depth: usize) -> Result<Run> {
    let t = pt.table();
    let n = pt.n();
    for q in 1..=2 * n {
        let r = build_r(t, q)?.matrix;
        let closed = crate::solutions::build_z(t, q, lambda)?.matrix;
        match eliminate_last(&r, lambda) {
            Some(z) => {
                if let Some(w) = mismatch(&closed, &z) {
                    return Ok(Run::Fail(tag(tag(w, "part", json!("closed form vs elimination")), "q", json!(q))));
                }
            }
            None => return Ok(Run::Singular(format!("q = {q}, level 1"))),
        }
    }
    let levels = match reduction_levels(t, lambda, depth) {
        Ok(l) => l,
        Err(Error::SingularElimination { q, level, .. }) => {
            return Ok(Run::Singular(format!("q = {q}, level {level}")))
        }
        Err(e) => return Err(e),
    };
    for (d, slots) in levels.iter().enumerate() {
        let level = d + 1;
        let order = 2 * n - level;
        let lhs: Vec<_> = slots.iter().collect();
        let rhs: Vec<_> = slots.iter().rev().collect();
        let dim = simplex_dim(order);
        if let Some(w) = mismatch(&side_product(&lhs, dim)?, &side_product(&rhs, dim)?) {
            return Ok(Run::Fail(tag(w, "level", json!(level))));
        }
    }
    Ok(Run::Ok)
}

/// For each λ: the closed-form Z's agree with elimination, and the operators
/// of every level d ≤ depth satisfy the (2n − d)-simplex equation. A λ for
/// which some elimination is undetermined is reported, not guessed; the
/// check is skipped when that happens for every λ.
pub fn verify_reduction(pt: &GrassmannPoint, lambdas: &[Scalar], depth: usize) -> Result<Report> {
    let n = pt.n();
    if depth == 0 || depth > 2 * n - 1 {
        return Err(Error::InvalidIndex(format!(
            "reduction depth {depth} outside 1..={} for n = {n}",
            2 * n - 1
        )));
    }
    if lambdas.is_empty() {
        return Err(Error::Unsupported("no λ values given".into()));
    }
    for l in lambdas {
        if l.field() != pt.field() {
            return Err(Error::FieldMismatch(l.field().descriptor(), pt.field().descriptor()));
        }
    }
    let mut params = pt.params();
    params.lambdas = Some(lambdas.iter().map(Scalar::to_string).collect());
    params.depth = Some(depth);
    Ok(Report::run("reduction", params, || {
        let mut singular = Vec::new();
        for l in lambdas {
            match one_lambda(pt, l, depth) {
                Ok(Run::Ok) => {}
                Ok(Run::Singular(at)) => singular.push(format!("λ = {l}: singular elimination at {at}")),
                Ok(Run::Fail(w)) => return Outcome::Fail(tag(w, "lambda", json!(l.to_string()))),
                Err(e) => return Outcome::Fail(json!({"lambda": l.to_string(), "error": e.to_string()})),
            }
        }
        match singular.len() {
            0 => Outcome::Pass,
            k if k == lambdas.len() => Outcome::Skipped(singular.join("; ")),
            _ => Outcome::PassWith(singular.join("; ")),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::grassmann::{gf4_point, random_point, DEFAULT_MAX_TRIES};
    use crate::report::Status;

    #[test]
    fn reductions_hold() {
        let q = Field::rationals();
        for n in 1..=3 {
            let pt = random_point(n, &q, 50, DEFAULT_MAX_TRIES).unwrap();
            let lambdas = [q.zero(), q.one(), q.rational(3, 7).unwrap()];
            let r = verify_reduction(&pt, &lambdas, 1).unwrap();
            assert!(r.passed() && r.detail.is_none(), "{:?}", r.witness);
        }
        let pt = random_point(3, &q, 51, DEFAULT_MAX_TRIES).unwrap();
        let r = verify_reduction(&pt, &[q.one(), q.from_int(2)], 2).unwrap();
        assert!(r.passed(), "{:?}", r.witness);
        let r = verify_reduction(&pt, &[q.from_int(2)], 5).unwrap();
        assert!(r.passed(), "{:?}", r.witness);
        let g = gf4_point();
        let f = g.field().clone();
        let r = verify_reduction(&g, &[f.zero(), f.one(), f.from_coeffs(&[0, 1]).unwrap()], 1).unwrap();
        assert!(r.passed(), "{:?}", r.witness);
    }

    #[test]
    fn singular_lambdas_are_reported() {
        let q = Field::rationals();
        let pt = random_point(2, &q, 52, DEFAULT_MAX_TRIES).unwrap();
        let r = verify_reduction(&pt, &[q.one()], 3).unwrap();
        assert_eq!(r.status, Status::Skipped);
        assert!(r.detail.unwrap().contains("level 3"));
        let r = verify_reduction(&pt, &[q.one(), q.from_int(3)], 3).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.detail.is_some());
    }

    #[test]
    fn bad_arguments() {
        let q = Field::rationals();
        let pt = random_point(2, &q, 53, DEFAULT_MAX_TRIES).unwrap();
        assert!(verify_reduction(&pt, &[q.one()], 4).is_err());
        assert!(verify_reduction(&pt, &[q.one()], 0).is_err());
        assert!(verify_reduction(&pt, &[], 1).is_err());
        let f11 = Field::parse("gf(11)").unwrap();
        assert!(verify_reduction(&pt, &[f11.one()], 1).is_err());
    }
}
