use itertools::Itertools;
use serde_json::{json, Value};

use super::outcome;
use crate::combinatorics::{complement, gon_sequences};
use crate::error::Result;
use crate::exterior::{span_rank, Multivector};
use crate::grassmann::{GrassmannPoint, PlueckerTable};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::solutions::{build_a, build_b};

/// (family, matrix, source label of row i, target label of column j)
type Family<'a> = (&'a str, &'a Matrix, &'a dyn Fn(usize) -> usize, &'a dyn Fn(usize) -> usize);

fn combine(terms: impl IntoIterator<Item = Result<Multivector>>, zero: Multivector) -> Result<Multivector> {
    terms.into_iter().try_fold(zero, |acc, t| acc.try_add(&t?))
}

fn differ(identity: &str, q: usize, slot: (&str, usize), lhs: &Multivector, rhs: &Multivector) -> Option<Value> {
    lhs.first_difference(rhs).map(|(blade, l, r)| {
        json!({
            "identity": identity,
            "q": q,
            slot.0: slot.1,
            "blade": blade.to_vec(),
            "lhs": l.to_json(),
            "rhs": r.to_json(),
        })
    })
}

/// First failure among the four intertwining families, given `(A^(q), B^(q))`
/// for every label `q` (index `q − 1`):
/// `Σ_i φ^{a_{2i−1},q} A_i^j = −φ^{a_{2j},q}`, `Σ_j A_i^j ψ_{a_{2j},q} = ψ_{a_{2i−1},q}`,
/// `Σ_i φ^{a_{2i},q} B_i^j = −φ^{a_{2j−1},q}`, `Σ_j B_i^j ψ_{a_{2j−1},q} = ψ_{a_{2i},q}`.
pub fn intertwining_failure(tbl: &PlueckerTable, mats: &[(Matrix, Matrix)]) -> Result<Option<Value>> {
    let n = tbl.n();
    let (f, d) = (tbl.field(), tbl.dim());
    for q in 1..=d {
        let l = complement(n, q);
        let odd = |t: usize| l[2 * t - 2];
        let even = |t: usize| l[2 * t - 1];
        let (a, b) = &mats[q - 1];
        let phi = |x: usize| tbl.phi(x, q);
        let psi = |x: usize| tbl.psi(x, q);
        let phi0 = Multivector::zero(f, d, n - 1);
        let psi0 = Multivector::zero(f, d, n + 3);
        let families: [Family; 2] =
            [("A", a, &odd, &even), ("B", b, &even, &odd)];
        for (name, m, src, dst) in families {
            for j in 1..=n {
                let lhs = combine((1..=n).map(|i| Ok(phi(src(i))?.scale(m.get(i - 1, j - 1)))), phi0.clone())?;
                let rhs = phi(dst(j))?.neg();
                if let Some(w) = differ(&format!("phi-{name}"), q, ("j", j), &lhs, &rhs) {
                    return Ok(Some(w));
                }
            }
            for i in 1..=n {
                let lhs = combine((1..=n).map(|j| Ok(psi(dst(j))?.scale(m.get(i - 1, j - 1)))), psi0.clone())?;
                let rhs = psi(src(i))?;
                if let Some(w) = differ(&format!("psi-{name}"), q, ("i", i), &lhs, &rhs) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

pub fn verify_intertwining(pt: &GrassmannPoint) -> Report {
    Report::run("intertwining", pt.params(), || {
        outcome((|| {
            let t = pt.table();
            let mats = (1..=t.dim())
                .map(|q| Ok((build_a(t, q)?.matrix, build_b(t, q)?.matrix)))
                .collect::<Result<Vec<_>>>()?;
            intertwining_failure(t, &mats)
        })())
    })
}

fn rank_failure(tbl: &PlueckerTable) -> Result<Option<Value>> {
    let n = tbl.n();
    let d = tbl.dim();
    let bad = |part: &str, expected: usize, got: usize, extra: Value| {
        let mut w = json!({"part": part, "expected": expected, "got": got});
        if let Value::Object(m) = extra {
            for (k, v) in m {
                w[k] = v;
            }
        }
        Ok(Some(w))
    };
    // fixed j: any n of the φ^{i,j} are independent, and all of them span n dimensions
    for j in 1..=d {
        let all: Vec<Multivector> =
            (1..=d).filter(|&i| i != j).map(|i| tbl.phi(i, j)).collect::<Result<_>>()?;
        let r = span_rank(&all)?;
        if r != n {
            return bad("fixed-j span", n, r, json!({"j": j}));
        }
        let others: Vec<usize> = (1..=d).filter(|&i| i != j).collect();
        for (pick, subset) in all.iter().combinations(n).zip(others.iter().combinations(n)) {
            let owned: Vec<Multivector> = pick.into_iter().cloned().collect();
            let r = span_rank(&owned)?;
            if r != n {
                return bad("fixed-j subset", n, r, json!({"j": j, "i": subset}));
            }
        }
    }
    let full = n * (n + 1) / 2;
    let gon: Vec<Multivector> =
        gon_sequences(n).0.iter().map(|&(i, j)| tbl.phi(i, j)).collect::<Result<_>>()?;
    let r = span_rank(&gon)?;
    if r != full {
        return bad("odd-even pairs", full, r, json!({}));
    }
    let odd_pairs: Vec<Multivector> = (1..=d)
        .step_by(2)
        .tuple_combinations()
        .map(|(i, j)| tbl.phi(i, j))
        .collect::<Result<_>>()?;
    let r = span_rank(&odd_pairs)?;
    if r != full {
        return bad("odd pairs", full, r, json!({}));
    }
    let even_pairs: Vec<Multivector> = (2..=d)
        .step_by(2)
        .tuple_combinations()
        .map(|(i, j)| tbl.psi(i, j))
        .collect::<Result<_>>()?;
    let r = span_rank(&even_pairs)?;
    if r != n * (n - 1) / 2 {
        return bad("even pairs", n * (n - 1) / 2, r, json!({}));
    }
    Ok(None)
}

/// Span ranks: n for the φ^{i,j} at fixed j (all of them and every n of
/// them), n(n+1)/2 for the odd-even pairs and for the odd pairs, and
/// n(n−1)/2 for the ψ over even pairs.
pub fn verify_ranks(pt: &GrassmannPoint) -> Report {
    Report::run("ranks", pt.params(), || outcome(rank_failure(pt.table())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::grassmann::{gf4_point, random_point, GrassmannPoint, DEFAULT_MAX_TRIES};

    #[test]
    fn n1_q2_by_hand() {
        // φ^{1,2} A^(2) = p12 · p23/p12 and −φ^{3,2} = p23
        let pt = GrassmannPoint::from_ints(&Field::rationals(), &[&[1, -2, 0], &[0, -3, 1]]).unwrap();
        let t = pt.table();
        let a2 = build_a(t, 2).unwrap().matrix;
        let lhs = t.phi(1, 2).unwrap().scale(a2.get(0, 0));
        assert_eq!(lhs, t.phi(3, 2).unwrap().neg());
        assert_eq!(lhs.coeff(&crate::exterior::IndexSet::EMPTY), t.get(&[2, 3]).unwrap());
        assert!(verify_intertwining(&pt).passed());
    }

    #[test]
    fn identities_and_ranks() {
        for (n, field) in [(1, "q"), (2, "q"), (3, "q"), (2, "gf(11)")] {
            let pt = random_point(n, &Field::parse(field).unwrap(), 40, DEFAULT_MAX_TRIES).unwrap();
            let r = verify_intertwining(&pt);
            assert!(r.passed(), "{:?}", r.witness);
            let r = verify_ranks(&pt);
            assert!(r.passed(), "{:?}", r.witness);
        }
        assert!(verify_intertwining(&gf4_point()).passed());
        assert!(verify_ranks(&gf4_point()).passed());
    }

    #[test]
    fn bumped_entry_is_reported() {
        let pt = random_point(2, &Field::rationals(), 41, DEFAULT_MAX_TRIES).unwrap();
        let t = pt.table();
        let mut mats: Vec<(Matrix, Matrix)> =
            (1..=5).map(|q| (build_a(t, q).unwrap().matrix, build_b(t, q).unwrap().matrix)).collect();
        assert!(intertwining_failure(t, &mats).unwrap().is_none());
        let v = mats[2].0.get(1, 0) + &t.field().one();
        mats[2].0.set(1, 0, v);
        let w = intertwining_failure(t, &mats).unwrap().unwrap();
        assert_eq!(w["q"], 3);
        assert!(w["identity"].as_str().unwrap().ends_with("-A"));
        assert!(w["blade"].is_array());
    }
}
