//! The operator families A, B, R and Z built from a Plücker table.
//!
//! Local coordinates are numbered from 1 as in the formulas; rows act on the
//! right, so a row vector `u` maps to `u · M`. For n = 1 the anchor is
//! `R = [[0, A], [B, 0]]`: local slot 1 feeds A, slot 2 feeds B.

use serde::Serialize;
use serde_json::{json, Value};

use crate::combinatorics::{complement, gon_positions, simplex_positions, PositionSet};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grassmann::PlueckerTable;
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    A,
    B,
    R,
    Z,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Kind::A),
            "B" | "b" => Ok(Kind::B),
            "R" | "r" => Ok(Kind::R),
            "Z" | "z" => Ok(Kind::Z),
            _ => Err(Error::Unsupported(format!("operator kind {s:?} (expected A, B, R or Z)"))),
        }
    }
}

/// A local matrix with the ambient positions where it acts.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSlot {
    pub label: usize,
    pub kind: Kind,
    pub matrix: Matrix,
    pub positions: PositionSet,
    pub lambda: Option<Scalar>,
}

impl OperatorSlot {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "q": self.label,
            "kind": self.kind,
            "matrix": self.matrix.to_json(),
            "positions": self.positions.positions,
        });
        if let Some(l) = &self.lambda {
            v["lambda"] = l.to_json();
        }
        v
    }
}

fn check_label(tbl: &PlueckerTable, q: usize) -> Result<()> {
    if q == 0 || q > tbl.dim() {
        return Err(Error::InvalidIndex(format!("label {q} outside 1..={}", tbl.dim())));
    }
    Ok(())
}

fn nonzero(tbl: &PlueckerTable, idx: &[usize]) -> Result<Scalar> {
    let v = tbl.get(idx)?;
    if v.is_zero() {
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        return Err(Error::VanishingMinor { indices: sorted });
    }
    Ok(v)
}

/// Shared shape of the A and B formulas: `offset = 0` uses the odd members
/// of `L_q` as the fixed list and the even ones as the substituted column,
/// `offset = 1` the other way round.
fn family(tbl: &PlueckerTable, q: usize, offset: usize) -> Result<Matrix> {
    check_label(tbl, q)?;
    let n = tbl.n();
    let l = complement(n, q);
    // fixed members a_{2i-1+offset}, substituted members a_{2j-offset}
    let fixed: Vec<usize> = (1..=n).map(|i| l[2 * i - 2 + offset]).collect();
    let subst: Vec<usize> = (1..=n).map(|j| l[2 * j - 1 - offset]).collect();
    let mut denom_idx = fixed.clone();
    denom_idx.push(q);
    let denom = nonzero(tbl, &denom_idx)?.invert()?;
    let field = tbl.field();
    let mut m = Matrix::zeros(field, n, n);
    for i in 1..=n {
        for j in 1..=n {
            let mut idx = vec![subst[j - 1]];
            idx.extend(fixed.iter().enumerate().filter(|(t, _)| t + 1 != i).map(|(_, &x)| x));
            idx.push(q);
            let v = tbl.get(&idx)? * &denom;
            m.set(i - 1, j - 1, if i % 2 == 1 { -v } else { v });
        }
    }
    Ok(m)
}

/// `(A^(q))_i^j = (−1)^i p[a_{2j}, a_1, a_3, …, â_{2i−1}, …, a_{2n−1}, q] / p[a_1, a_3, …, a_{2n−1}, q]`.
pub fn build_a(tbl: &PlueckerTable, q: usize) -> Result<OperatorSlot> {
    Ok(OperatorSlot {
        label: q,
        kind: Kind::A,
        matrix: family(tbl, q, 0)?,
        positions: gon_positions(tbl.n(), q)?,
        lambda: None,
    })
}

/// `(B^(q))_i^j = (−1)^i p[a_{2j−1}, a_2, …, â_{2i}, …, a_{2n}, q] / p[a_2, …, a_{2n}, q]`.
pub fn build_b(tbl: &PlueckerTable, q: usize) -> Result<OperatorSlot> {
    Ok(OperatorSlot {
        label: q,
        kind: Kind::B,
        matrix: family(tbl, q, 1)?,
        positions: gon_positions(tbl.n(), q)?,
        lambda: None,
    })
}

/// `R[2i−1, 2j] = A_i^j`, `R[2i, 2j−1] = B_i^j`, zero elsewhere.
pub fn build_r(tbl: &PlueckerTable, q: usize) -> Result<OperatorSlot> {
    let n = tbl.n();
    let a = family(tbl, q, 0)?;
    let b = family(tbl, q, 1)?;
    let mut r = Matrix::zeros(tbl.field(), 2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            r.set(2 * i, 2 * j + 1, a.get(i, j).clone());
            r.set(2 * i + 1, 2 * j, b.get(i, j).clone());
        }
    }
    Ok(OperatorSlot {
        label: q,
        kind: Kind::R,
        matrix: r,
        positions: simplex_positions(2 * n, q)?,
        lambda: None,
    })
}

/// `dim`-dimensional identity acting as `local` on the given 0-based coordinates.
fn embedded(local: &Matrix, coords: &[usize], dim: usize) -> Matrix {
    let mut m = Matrix::identity(local.field(), dim);
    m.apply_local(coords, local);
    m
}

/// Product `P_{12} P_{34} ⋯` of the first `pairs` adjacent transpositions.
fn swaps(field: &crate::field::Field, dim: usize, pairs: usize) -> Matrix {
    let mut m = Matrix::zeros(field, dim, dim);
    for c in 0..dim {
        let t = if c < 2 * pairs { c ^ 1 } else { c };
        m.set(c, t, field.one());
    }
    m
}

/// R as the product `A_{1,3,…,2n−1} · B_{2,4,…,2n} · P_{12} P_{34} ⋯ P_{2n−1,2n}`.
pub fn build_r_factored(tbl: &PlueckerTable, q: usize) -> Result<Matrix> {
    let n = tbl.n();
    let f = tbl.field();
    let odd: Vec<usize> = (0..n).map(|i| 2 * i).collect();
    let even: Vec<usize> = (0..n).map(|i| 2 * i + 1).collect();
    let a = embedded(&family(tbl, q, 0)?, &odd, 2 * n);
    let b = embedded(&family(tbl, q, 1)?, &even, 2 * n);
    Ok(&(&a * &b) * &swaps(f, 2 * n, n))
}

/// First-level reduction in closed form:
/// `Z = A_{1,3,…,2n−1} · P_{12} ⋯ P_{2n−3,2n−2} · Λ · B_{1,3,…,2n−1}` with
/// `Λ = diag(1, …, 1, λ)` of size 2n − 1. Defined for labels `q ≤ 2n`.
pub fn build_z(tbl: &PlueckerTable, q: usize, lambda: &Scalar) -> Result<OperatorSlot> {
    let n = tbl.n();
    if q == 0 || q > 2 * n {
        return Err(Error::InvalidIndex(format!("Z is defined for labels 1..={}, not {q}", 2 * n)));
    }
    let f = tbl.field();
    if lambda.field() != f {
        return Err(Error::FieldMismatch(lambda.field().descriptor(), f.descriptor()));
    }
    let dim = 2 * n - 1;
    let odd: Vec<usize> = (0..n).map(|i| 2 * i).collect();
    let a = embedded(&family(tbl, q, 0)?, &odd, dim);
    let b = embedded(&family(tbl, q, 1)?, &odd, dim);
    let mut big_lambda = Matrix::identity(f, dim);
    big_lambda.set(dim - 1, dim - 1, lambda.clone());
    let z = &(&(&a * &swaps(f, dim, n - 1)) * &big_lambda) * &b;
    Ok(OperatorSlot {
        label: q,
        kind: Kind::Z,
        matrix: z,
        positions: simplex_positions(dim, q)?,
        lambda: Some(lambda.clone()),
    })
}

/// Imposes `u_m = λ v_m` on the last local coordinate of `r` (`v = u · r`)
/// and eliminates it:
/// `Z[r, c] = R[r, c] + λ R[r, m] R[m, c] / (1 − λ R[m, m])`.
/// Returns `None` when the constraint does not determine `u_m`.
pub fn eliminate_last(r: &Matrix, lambda: &Scalar) -> Option<Matrix> {
    let m = r.rows() - 1;
    let pivot = r.field().one() - &(lambda * r.get(m, m));
    if pivot.is_zero() {
        return None;
    }
    let scale = lambda / &pivot;
    let mut z = Matrix::zeros(r.field(), m, m);
    for i in 0..m {
        let ri = r.get(i, m) * &scale;
        for j in 0..m {
            z.set(i, j, r.get(i, j) + &(&ri * r.get(m, j)));
        }
    }
    Some(z)
}

/// Operators of levels 1..=depth of the iterated reduction with one λ. Level
/// 1 uses the closed form; deeper levels eliminate from the previous level,
/// dropping its last label each time. Level `d` solves the
/// (2n − d)-simplex equation.
pub fn reduction_levels(
    tbl: &PlueckerTable,
    lambda: &Scalar,
    depth: usize,
) -> Result<Vec<Vec<OperatorSlot>>> {
    let n = tbl.n();
    if depth == 0 || depth > 2 * n - 1 {
        return Err(Error::InvalidIndex(format!(
            "reduction depth {depth} outside 1..={} for n = {n}",
            2 * n - 1
        )));
    }
    let first = (1..=2 * n).map(|q| build_z(tbl, q, lambda)).collect::<Result<Vec<_>>>()?;
    let mut levels = vec![first];
    for level in 2..=depth {
        let order = 2 * n - level;
        let prev = levels.last().unwrap();
        let next = prev[..prev.len() - 1]
            .iter()
            .map(|slot| {
                let z = eliminate_last(&slot.matrix, lambda).ok_or_else(|| {
                    Error::SingularElimination { q: slot.label, lambda: lambda.to_string(), level }
                })?;
                Ok(OperatorSlot {
                    label: slot.label,
                    kind: Kind::Z,
                    matrix: z,
                    positions: simplex_positions(order, slot.label)?,
                    lambda: Some(lambda.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(next);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::grassmann::{gf4_point, random_point, GrassmannPoint, DEFAULT_MAX_TRIES};

    fn point(n: usize, field: &str, seed: u64) -> GrassmannPoint {
        random_point(n, &Field::parse(field).unwrap(), seed, DEFAULT_MAX_TRIES).unwrap()
    }

    #[test]
    fn trigon_entries() {
        let q = Field::rationals();
        for seed in 0..20 {
            let t = point(1, "q", seed).table().clone();
            let p = |a, b| t.get(&[a, b]).unwrap();
            let a = |l| build_a(&t, l).unwrap().matrix.get(0, 0).clone();
            assert_eq!(a(1), -(p(1, 3) / p(1, 2)));
            assert_eq!(a(2), p(2, 3) / p(1, 2));
            assert_eq!(a(3), -(p(2, 3) / p(1, 3)));
            assert_eq!(a(1) * a(3), a(2));
            let b1 = build_b(&t, 1).unwrap().matrix.get(0, 0).clone();
            assert_eq!(b1, -(p(1, 2) / p(1, 3)));
        }
        // M = [[1, −μ, 0], [0, −λ, 1]] with μ = 2, λ = 3 gives A^(1) = 1/λ
        let pt = GrassmannPoint::from_ints(&q, &[&[1, -2, 0], &[0, -3, 1]]).unwrap();
        let a1 = build_a(pt.table(), 1).unwrap();
        assert_eq!(a1.matrix.get(0, 0), &q.rational(1, 3).unwrap());
        let r1 = build_r(pt.table(), 1).unwrap().matrix;
        assert_eq!(r1, Matrix::from_rows(&q, vec![
            vec![q.zero(), q.rational(1, 3).unwrap()],
            vec![q.from_int(3), q.zero()],
        ]).unwrap());
    }

    #[test]
    fn b_inverts_a_and_r_is_an_involution() {
        for (n, field) in [(1, "q"), (2, "q"), (3, "q"), (4, "q"), (2, "gf(11)"), (3, "gf(97)"), (2, "gf(2,2;1,1,1)")] {
            let pt = point(n, field, 2);
            let t = pt.table();
            for q in 1..=2 * n + 1 {
                let a = build_a(t, q).unwrap().matrix;
                let b = build_b(t, q).unwrap().matrix;
                assert!((&b * &a).is_identity(), "n={n} {field} q={q}");
                assert!((&a * &b).is_identity());
                let r = build_r(t, q).unwrap();
                assert!((&r.matrix * &r.matrix).is_identity());
                assert_eq!(r.matrix, build_r_factored(t, q).unwrap());
                assert_eq!(r.positions.positions.len(), 2 * n);
            }
        }
        let pt = gf4_point();
        let b = build_b(pt.table(), 1).unwrap().matrix;
        assert!((&b * &build_a(pt.table(), 1).unwrap().matrix).is_identity());
    }

    #[test]
    fn projective_invariance() {
        let f = Field::rationals();
        for n in 1..=3 {
            let pt = point(n, "q", 8);
            let mut rows = pt.matrix().to_rows();
            for x in rows[n].iter_mut() {
                *x = &*x * &f.rational(-7, 3).unwrap();
            }
            let scaled = GrassmannPoint::new(Matrix::from_rows(&f, rows).unwrap()).unwrap();
            for q in 1..=2 * n + 1 {
                for build in [build_a, build_b, build_r] {
                    assert_eq!(build(pt.table(), q).unwrap(), build(scaled.table(), q).unwrap());
                }
            }
        }
    }

    #[test]
    fn vanishing_denominator_is_named() {
        let pt = GrassmannPoint::from_ints(&Field::rationals(), &[&[1, 0, 1], &[0, 1, 0]]).unwrap();
        // p_{2,3} = -1, p_{1,2} = 1, p_{1,3} = 0
        assert_eq!(build_a(pt.table(), 3), Err(Error::VanishingMinor { indices: vec![1, 3] }));
        assert!(build_a(pt.table(), 4).is_err());
    }

    #[test]
    fn z_closed_form_matches_elimination() {
        for (n, field) in [(1, "q"), (2, "q"), (3, "q"), (2, "gf(11)"), (2, "gf(2,2;1,1,1)")] {
            let pt = point(n, field, 4);
            let t = pt.table();
            let f = t.field();
            let lambdas = [f.zero(), f.one(), f.from_int(3), f.from_int(-2)];
            for lambda in &lambdas {
                for q in 1..=2 * n {
                    let r = build_r(t, q).unwrap().matrix;
                    let z = build_z(t, q, lambda).unwrap();
                    assert_eq!(Some(z.matrix.clone()), eliminate_last(&r, lambda), "n={n} q={q} λ={lambda}");
                    if lambda.is_zero() {
                        let keep: Vec<usize> = (0..2 * n - 1).collect();
                        assert_eq!(z.matrix, r.submatrix(&keep, &keep));
                    }
                }
            }
        }
        let t = point(1, "q", 1).table().clone();
        let l = Field::rationals().rational(5, 2).unwrap();
        assert_eq!(build_z(&t, 1, &l).unwrap().matrix.get(0, 0), &l);
        assert!(build_z(&t, 3, &l).is_err());
    }

    #[test]
    fn singular_elimination() {
        let f = Field::rationals();
        let r = Matrix::from_ints(&f, &[&[1, 1], &[1, 2]]).unwrap();
        assert!(eliminate_last(&r, &f.rational(1, 2).unwrap()).is_none());
        assert!(eliminate_last(&r, &f.one()).is_some());
    }

    #[test]
    fn depth_limits() {
        let t = point(2, "q", 1).table().clone();
        let l = Field::rationals().one();
        // λ = ±1 turns the second level into the identity, so the third is undetermined
        assert!(reduction_levels(&t, &l, 2).unwrap()[1].iter().all(|z| z.matrix.is_identity()));
        assert!(matches!(
            reduction_levels(&t, &l, 3),
            Err(Error::SingularElimination { q: 1, level: 3, .. })
        ));
        assert_eq!(reduction_levels(&t, &Field::rationals().from_int(3), 3).unwrap().len(), 3);
        assert!(reduction_levels(&t, &l, 4).is_err());
        assert!(reduction_levels(&t, &l, 0).is_err());
        let levels = reduction_levels(&t, &l, 2).unwrap();
        assert_eq!(levels[1].len(), 3);
        assert_eq!(levels[1][0].matrix.rows(), 2);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("R".parse::<Kind>().unwrap(), Kind::R);
        assert!("X".parse::<Kind>().is_err());
    }
}
