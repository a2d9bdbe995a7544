//! Points of Gr(n+1, 2n+1) and their Plücker coordinates.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::combinatorics::complement;
use crate::error::{Error, Result};
use crate::exterior::{IndexSet, Multivector};
use crate::field::{Field, Scalar, DEFAULT_RATIONAL_BOUND};
use crate::linalg::Matrix;
use crate::report::{Outcome, Params, Report};

pub const DEFAULT_MAX_TRIES: usize = 10_000;

/// All maximal minors of an (n+1)×(2n+1) matrix, keyed by sorted column set.
#[derive(Clone, Debug, PartialEq)]
pub struct PlueckerTable {
    n: usize,
    field: Field,
    coords: BTreeMap<IndexSet, Scalar>,
}

impl PlueckerTable {
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let k = m.rows();
        if k < 2 || m.cols() != 2 * k - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected an (n+1)x(2n+1) matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let rows: Vec<usize> = (0..k).collect();
        let coords = IndexSet::subsets(m.cols(), k)
            .map(|set| {
                let cols: Vec<usize> = set.iter().map(|c| c - 1).collect();
                Ok((set, m.submatrix(&rows, &cols).det()?))
            })
            .collect::<Result<_>>()?;
        Ok(PlueckerTable { n: k - 1, field: m.field().clone(), coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of labels, `2n + 1`.
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&IndexSet, &Scalar)> {
        self.coords.iter()
    }

    /// Value at a sorted column set.
    pub fn coord(&self, set: &IndexSet) -> Option<&Scalar> {
        self.coords.get(set)
    }

    /// `p` at an arbitrarily ordered index list: the sorted value times the
    /// sign of the sorting permutation, or zero on a repeated index.
    pub fn get(&self, indices: &[usize]) -> Result<Scalar> {
        if indices.len() != self.n + 1 {
            return Err(Error::InvalidIndex(format!(
                "Plücker index list {indices:?} must have {} entries",
                self.n + 1
            )));
        }
        if indices.iter().any(|&i| i == 0 || i > self.dim()) {
            return Err(Error::InvalidIndex(format!(
                "Plücker indices {indices:?} outside 1..={}",
                self.dim()
            )));
        }
        Ok(match IndexSet::sort_signed(indices) {
            None => self.field.zero(),
            Some((set, sign)) => {
                let v = self.coords[&set].clone();
                if sign > 0 {
                    v
                } else {
                    -v
                }
            }
        })
    }

    /// Replaces one entry; the result is in general no longer determinantal.
    pub fn set_coord(&mut self, set: IndexSet, value: Scalar) -> Result<()> {
        match self.coords.get_mut(&set) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::InvalidIndex(format!("no Plücker coordinate {set:?}"))),
        }
    }

    /// `w = Σ p_K e_K` as a grade-(n+1) multivector.
    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_terms(
            &self.field,
            self.dim(),
            self.n + 1,
            self.coords.iter().map(|(k, v)| (*k, v.clone())),
        )
        .expect("table keys have the right size")
    }

    /// Column sets whose coordinate vanishes; empty iff all are nonzero.
    pub fn vanishing(&self) -> Vec<IndexSet> {
        self.coords.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| *k).collect()
    }

    pub fn assumption_check(&self) -> (bool, Vec<IndexSet>) {
        let v = self.vanishing();
        (v.is_empty(), v)
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j || i == 0 || j == 0 || i > self.dim() || j > self.dim() {
            return Err(Error::InvalidIndex(format!(
                "pair ({i}, {j}) must be distinct labels in 1..={}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// `φ^{i,j} = Σ_K p_{i,j,K} e_K` over (n−1)-sets K.
    pub fn phi(&self, i: usize, j: usize) -> Result<Multivector> {
        self.check_pair(i, j)?;
        let mut terms = Vec::new();
        for k in IndexSet::subsets(self.dim(), self.n - 1) {
            if k.contains(i) || k.contains(j) {
                continue;
            }
            let mut idx = vec![i, j];
            idx.extend(k.iter());
            terms.push((k, self.get(&idx)?));
        }
        Multivector::from_terms(&self.field, self.dim(), self.n - 1, terms)
    }

    /// `ψ_{i,j} = e_i ∧ e_j ∧ w`, read directly off the table.
    pub fn psi(&self, i: usize, j: usize) -> Result<Multivector> {
        self.check_pair(i, j)?;
        let mut terms = Vec::new();
        for (k, v) in &self.coords {
            if k.contains(i) || k.contains(j) {
                continue;
            }
            let mut idx = vec![i, j];
            idx.extend(k.iter());
            let (set, sign) = IndexSet::sort_signed(&idx).expect("disjoint labels");
            terms.push((set, if sign > 0 { v.clone() } else { -v }));
        }
        Multivector::from_terms(&self.field, self.dim(), self.n + 3, terms)
    }

    /// First violated exchange relation
    /// `Σ_i (−1)^i p[a_{2i}, q, b] p[a_{2j−1}, a_2, …, â_{2i}, …, a_{2n}, q]
    ///   + p[a_{2j−1}, q, b] p[a_2, …, a_{2n}, q] = 0`
    ///
    /// over all labels q, slots j and (n−1)-sets b.
    pub fn first_relation_failure(&self) -> Result<Option<Value>> {
        let n = self.n;
        for q in 1..=self.dim() {
            let a = complement(n, q);
            let a = |t: usize| a[t - 1];
            let evens: Vec<usize> = (1..=n).map(|i| a(2 * i)).collect();
            let mut even_q = evens.clone();
            even_q.push(q);
            let base = self.get(&even_q)?;
            for j in 1..=n {
                for b in IndexSet::subsets(self.dim(), n - 1) {
                    let b = b.to_vec();
                    let mut sum = {
                        let mut idx = vec![a(2 * j - 1), q];
                        idx.extend(&b);
                        self.get(&idx)? * &base
                    };
                    for i in 1..=n {
                        let mut left = vec![a(2 * i), q];
                        left.extend(&b);
                        let mut right = vec![a(2 * j - 1)];
                        right.extend(evens.iter().filter(|&&x| x != a(2 * i)));
                        right.push(q);
                        let term = self.get(&left)? * self.get(&right)?;
                        sum = if i % 2 == 0 { sum + term } else { sum - term };
                    }
                    if !sum.is_zero() {
                        return Ok(Some(json!({
                            "q": q, "j": j, "b": b, "value": sum.to_json(),
                        })));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn verify_plucker_relations(&self, params: Params) -> Report {
        Report::run("plucker", params, || match self.first_relation_failure() {
            Ok(None) => Outcome::Pass,
            Ok(Some(w)) => Outcome::Fail(w),
            Err(e) => Outcome::Fail(json!({"error": e.to_string()})),
        })
    }
}

/// A full-rank (n+1)×(2n+1) matrix together with its Plücker table.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPoint {
    n: usize,
    matrix: Matrix,
    table: PlueckerTable,
    seed: Option<u64>,
    overrides: Vec<(IndexSet, Scalar)>,
}

impl GrassmannPoint {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let table = PlueckerTable::from_matrix(&matrix)?;
        if matrix.rank() != matrix.rows() {
            return Err(Error::RankDeficient(matrix.rank()));
        }
        Ok(GrassmannPoint { n: table.n, matrix, table, seed: None, overrides: Vec::new() })
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Result<Self> {
        GrassmannPoint::new(Matrix::from_ints(field, rows)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn table(&self) -> &PlueckerTable {
        &self.table
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Tampered copy whose table entry at `set` is replaced by `value`.
    /// Used to make sure the checks can fail.
    pub fn with_pluecker_override(mut self, set: IndexSet, value: Scalar) -> Result<Self> {
        self.table.set_coord(set, value.clone())?;
        self.overrides.retain(|(k, _)| *k != set);
        self.overrides.push((set, value));
        Ok(self)
    }

    pub fn is_tampered(&self) -> bool {
        !self.overrides.is_empty()
    }

    pub fn params(&self) -> Params {
        Params { n: self.n, field: self.field().descriptor(), seed: self.seed, ..Params::default() }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "field": self.field().descriptor(),
            "matrix": self.matrix.to_json(),
        });
        if let Some(s) = self.seed {
            v["seed"] = json!(s);
        }
        if !self.overrides.is_empty() {
            v["pluecker_overrides"] = self
                .overrides
                .iter()
                .map(|(k, s)| json!({"indices": k.to_vec(), "value": s.to_json()}))
                .collect();
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let malformed = |what: &str| Error::Malformed(format!("point JSON: {what}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| malformed("missing n"))? as usize;
        let field_text = v.get("field").and_then(Value::as_str).ok_or_else(|| malformed("missing field"))?;
        let field = Field::parse(field_text)?;
        let rows = v.get("matrix").and_then(Value::as_array).ok_or_else(|| malformed("missing matrix"))?;
        let rows = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| malformed("matrix rows must be arrays"))?
                    .iter()
                    .map(|x| field.scalar_from_json(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != n + 1 || rows.iter().any(|r| r.len() != 2 * n + 1) {
            return Err(malformed(&format!("matrix must be {}x{} for n = {n}", n + 1, 2 * n + 1)));
        }
        let mut pt = GrassmannPoint::new(Matrix::from_rows(&field, rows)?)?;
        if let Some(s) = v.get("seed") {
            pt.seed = Some(s.as_u64().ok_or_else(|| malformed("seed must be an integer"))?);
        }
        if let Some(ov) = v.get("pluecker_overrides") {
            for o in ov.as_array().ok_or_else(|| malformed("pluecker_overrides must be an array"))? {
                let idx: Vec<usize> = o
                    .get("indices")
                    .and_then(Value::as_array)
                    .ok_or_else(|| malformed("override without indices"))?
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| malformed("bad index")))
                    .collect::<Result<_>>()?;
                let value = field.scalar_from_json(o.get("value").ok_or_else(|| malformed("override without value"))?)?;
                pt = pt.with_pluecker_override(IndexSet::from_sorted(&idx)?, value)?;
            }
        }
        Ok(pt)
    }

    /// Fails with the first vanishing minor unless every Plücker coordinate
    /// is nonzero.
    pub fn require_nonvanishing(&self) -> Result<()> {
        match self.table.vanishing().first() {
            None => Ok(()),
            Some(k) => Err(Error::VanishingMinor { indices: k.to_vec() }),
        }
    }
}

/// Rejection-samples a point with all Plücker coordinates nonzero. Entries
/// are drawn by [`Field::random`]; the stream is fixed by `seed`.
pub fn random_point(n: usize, field: &Field, seed: u64, max_tries: usize) -> Result<GrassmannPoint> {
    random_point_bounded(n, field, seed, max_tries, DEFAULT_RATIONAL_BOUND)
}

pub fn random_point_bounded(
    n: usize,
    field: &Field,
    seed: u64,
    max_tries: usize,
    bound: i64,
) -> Result<GrassmannPoint> {
    if n == 0 {
        return Err(Error::InvalidIndex("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let rows = (0..=n)
            .map(|_| (0..=2 * n).map(|_| field.random(&mut rng, bound)).collect())
            .collect();
        let matrix = Matrix::from_rows(field, rows)?;
        let table = PlueckerTable::from_matrix(&matrix)?;
        if table.vanishing().is_empty() {
            // a nonzero maximal minor already gives full rank
            return Ok(GrassmannPoint { n, matrix, table, seed: Some(seed), overrides: Vec::new() });
        }
    }
    Err(Error::SamplingExhausted { field: field.descriptor(), n, tries: max_tries })
}

/// The GF(4) point with all ten Plücker coordinates nonzero, modulus x² + x + 1.
pub fn gf4_point() -> GrassmannPoint {
    let f = Field::parse("gf(2,2;1,1,1)").expect("valid descriptor");
    let c = |a: i64, b: i64| f.from_coeffs(&[a, b]).expect("two coefficients");
    let (o, l, z, z2) = (c(0, 0), c(1, 0), c(0, 1), c(1, 1));
    let rows = vec![
        vec![l.clone(), o.clone(), o.clone(), l.clone(), l.clone()],
        vec![o.clone(), l.clone(), o.clone(), l.clone(), z],
        vec![o.clone(), o, l.clone(), l, z2],
    ];
    GrassmannPoint::new(Matrix::from_rows(&f, rows).expect("3x5")).expect("full rank")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::from_sorted(v).unwrap()
    }

    fn n1_point(mu: i64, lambda: i64) -> GrassmannPoint {
        GrassmannPoint::from_ints(&Field::rationals(), &[&[1, -mu, 0], &[0, -lambda, 1]]).unwrap()
    }

    #[test]
    fn n1_table() {
        let t = n1_point(2, 3).table().clone();
        let q = Field::rationals();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(&[1, 2]).unwrap(), q.from_int(-3));
        assert_eq!(t.get(&[1, 3]).unwrap(), q.from_int(1));
        assert_eq!(t.get(&[2, 3]).unwrap(), q.from_int(-2));
        assert_eq!(t.get(&[3, 2]).unwrap(), q.from_int(2));
        assert_eq!(t.get(&[2, 2]).unwrap(), q.zero());
        assert!(t.get(&[1, 2, 3]).is_err());
        assert!(t.get(&[1, 4]).is_err());
        assert!(t.first_relation_failure().unwrap().is_none());
    }

    #[test]
    fn gf4_table() {
        let pt = gf4_point();
        let f = pt.field().clone();
        let t = pt.table();
        assert_eq!(t.len(), 10);
        assert_eq!(t.get(&[1, 2, 3]).unwrap(), f.one());
        assert_eq!(t.get(&[3, 4, 5]).unwrap(), f.from_coeffs(&[1, 1]).unwrap());
        assert_eq!(t.assumption_check(), (true, vec![]));
    }

    #[test]
    fn assumption_failure_lists_minors() {
        let pt = GrassmannPoint::from_ints(&Field::rationals(), &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(pt.table().assumption_check(), (false, vec![set(&[1, 3]), set(&[2, 3])]));
        assert_eq!(pt.require_nonvanishing(), Err(Error::VanishingMinor { indices: vec![1, 3] }));
    }

    #[test]
    fn rank_deficient_rejected() {
        let r = GrassmannPoint::from_ints(&Field::rationals(), &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(r, Err(Error::RankDeficient(1)));
        assert!(GrassmannPoint::from_ints(&Field::rationals(), &[&[1, 2], &[2, 4]]).is_err());
    }

    #[test]
    fn sampling() {
        let q = Field::rationals();
        let pt = random_point(2, &q, 42, DEFAULT_MAX_TRIES).unwrap();
        assert_eq!(pt.table().len(), 10);
        assert!(pt.table().vanishing().is_empty());
        assert_eq!(pt, random_point(2, &q, 42, DEFAULT_MAX_TRIES).unwrap());
        assert!(random_point(1, &Field::parse("gf(3)").unwrap(), 7, DEFAULT_MAX_TRIES).is_ok());
        assert!(random_point(2, &Field::parse("gf(2,2;1,1,1)").unwrap(), 1, DEFAULT_MAX_TRIES).is_ok());
        let f2 = Field::parse("gf(2)").unwrap();
        assert!(matches!(random_point(2, &f2, 3, 200), Err(Error::SamplingExhausted { tries: 200, .. })));
    }

    #[test]
    fn no_f2_point_at_n2() {
        // all 2^15 matrices over F_2 have some vanishing maximal minor
        let f2 = Field::parse("gf(2)").unwrap();
        let found = (0u32..1 << 15).any(|code| {
            let rows: Vec<Vec<Scalar>> = (0..3)
                .map(|r| (0..5).map(|c| f2.from_int(((code >> (5 * r + c)) & 1) as i64)).collect())
                .collect();
            let m = Matrix::from_rows(&f2, rows).unwrap();
            PlueckerTable::from_matrix(&m).unwrap().vanishing().is_empty()
        });
        assert!(!found);
    }

    #[test]
    fn row_operations_scale_by_determinant() {
        let q = Field::rationals();
        let pt = random_point(2, &q, 5, DEFAULT_MAX_TRIES).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = loop {
            let rows = (0..3).map(|_| (0..3).map(|_| q.from_int(rng.random_range(-5..=5))).collect()).collect();
            let g = Matrix::from_rows(&q, rows).unwrap();
            if !g.det().unwrap().is_zero() {
                break g;
            }
        };
        let moved = GrassmannPoint::new(&g * pt.matrix()).unwrap();
        let d = g.det().unwrap();
        for (k, v) in pt.table().entries() {
            assert_eq!(moved.table().coord(k).unwrap(), &(v * &d));
        }
    }

    #[test]
    fn phi_psi_match_contraction_and_wedge() {
        for (n, field) in [(1, "q"), (2, "q"), (3, "q"), (2, "gf(2,2;1,1,1)"), (3, "gf(11)")] {
            let f = Field::parse(field).unwrap();
            let pt = random_point(n, &f, 11, DEFAULT_MAX_TRIES).unwrap();
            let t = pt.table();
            let w = t.to_multivector();
            for i in 1..=t.dim() {
                for j in 1..=t.dim() {
                    if i == j {
                        assert!(t.phi(i, j).is_err());
                        continue;
                    }
                    let phi = t.phi(i, j).unwrap();
                    assert_eq!(phi, w.contract(&[j, i]).unwrap());
                    assert_eq!(phi, t.phi(j, i).unwrap().neg());
                    let ei = Multivector::basis(&f, t.dim(), i).unwrap();
                    let ej = Multivector::basis(&f, t.dim(), j).unwrap();
                    let psi = t.psi(i, j).unwrap();
                    assert_eq!(psi, ei.wedge(&ej).unwrap().wedge(&w).unwrap());
                    assert_eq!(psi, t.psi(j, i).unwrap().neg());
                }
            }
        }
    }

    #[test]
    fn small_phi_psi() {
        let t = n1_point(2, 3).table().clone();
        let phi = t.phi(1, 2).unwrap();
        assert_eq!(phi.grade(), 0);
        assert_eq!(phi.coeff(&IndexSet::EMPTY), Field::rationals().from_int(-3));
        let psi = t.psi(1, 2).unwrap();
        assert!(psi.is_zero());
        assert_eq!(psi.grade(), 4);
    }

    #[test]
    fn n3_displays() {
        let pt = random_point(3, &Field::rationals(), 3, DEFAULT_MAX_TRIES).unwrap();
        let t = pt.table();
        // the 2-vector φ^{1,2}: ten blades e_k∧e_l, 3 ≤ k < l ≤ 7, coefficient ±p_{1,2,k,l}
        let phi = t.phi(1, 2).unwrap();
        assert_eq!(phi.len(), 10);
        for (k, c) in phi.terms() {
            let v = k.to_vec();
            assert!(v[0] >= 3);
            assert_eq!(c, &t.get(&[1, 2, v[0], v[1]]).unwrap());
        }
        // the 6-vector ψ_{2,3}: five terms, each +p over the complement of {2,3} in the blade
        let psi = t.psi(2, 3).unwrap();
        let expected = [
            (vec![1, 2, 3, 4, 5, 6], [1, 4, 5, 6]),
            (vec![1, 2, 3, 4, 5, 7], [1, 4, 5, 7]),
            (vec![1, 2, 3, 4, 6, 7], [1, 4, 6, 7]),
            (vec![1, 2, 3, 5, 6, 7], [1, 5, 6, 7]),
            (vec![2, 3, 4, 5, 6, 7], [4, 5, 6, 7]),
        ];
        assert_eq!(psi.len(), 5);
        for (blade, p) in expected {
            assert_eq!(psi.coeff(&set(&blade)), t.get(&p).unwrap());
        }
    }

    #[test]
    fn plucker_relations_detect_corruption() {
        for n in 1..=3 {
            let pt = random_point(n, &Field::rationals(), 17, DEFAULT_MAX_TRIES).unwrap();
            assert!(pt.table().first_relation_failure().unwrap().is_none());
        }
        let pt = gf4_point();
        assert!(pt.table().verify_plucker_relations(pt.params()).passed());
        let pt = random_point(2, &Field::rationals(), 17, DEFAULT_MAX_TRIES).unwrap();
        let k = set(&[1, 2, 3]);
        let v = -pt.table().coord(&k).unwrap().clone();
        let bad = pt.with_pluecker_override(k, v).unwrap();
        let report = bad.table().verify_plucker_relations(bad.params());
        assert!(report.failed());
        assert!(report.witness.is_some());
    }

    #[test]
    fn json_round_trip() {
        for pt in [gf4_point(), random_point(2, &Field::rationals(), 4, 100).unwrap()] {
            let back = GrassmannPoint::from_json(&pt.to_json()).unwrap();
            assert_eq!(back, pt);
        }
        let pt = gf4_point();
        let f = pt.field().clone();
        let bad = pt.with_pluecker_override(set(&[1, 2, 3]), f.from_coeffs(&[0, 1]).unwrap()).unwrap();
        let back = GrassmannPoint::from_json(&bad.to_json()).unwrap();
        assert!(back.is_tampered());
        assert_eq!(back, bad);
        assert!(GrassmannPoint::from_json(&json!({"n": 1, "field": "q"})).is_err());
        assert!(GrassmannPoint::from_json(&json!({"n": 2, "field": "q", "matrix": [["1","0","0"],["0","1","0"]]})).is_err());
    }
}
