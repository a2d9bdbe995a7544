//! Exterior algebra over F^d with the standard basis e_1, ..., e_d.
//!
//! Basis blades are labelled by [`IndexSet`]s; a [`Multivector`] is a sparse
//! homogeneous combination of blades. Contraction by dual basis covectors
//! follows the left-derivative convention
//!
//! ```text
//! contract([l_1, ..., l_m], w) = d/de_{l_1} ( ... d/de_{l_m} w )
//! ```
//!
//! where `d/de_l` moves `e_l` to the front of a blade (picking up the sign of
//! that move) and deletes it. With this convention
//! `contract([j, i], w) = sum_K p_{i,j,K} e_K` for `w = sum p_S e_S`, i.e.
//! the coefficient of `e_K` is the Plücker value read with index list
//! `(i, j, K)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::Matrix;

/// Largest ambient dimension representable by an [`IndexSet`].
pub const MAX_DIM: usize = 63;

/// A set of basis labels in `1..=MAX_DIM`, always iterated increasingly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    /// Builds a set from a strictly increasing list of labels.
    pub fn from_sorted(indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndex(format!("{indices:?} is not strictly increasing")));
        }
        let mut set = IndexSet::EMPTY;
        for &i in indices {
            if i == 0 || i > MAX_DIM {
                return Err(Error::InvalidIndex(format!("label {i} out of range")));
            }
            set.0 |= 1 << i;
        }
        Ok(set)
    }

    /// Sorts an arbitrary list of distinct labels, returning the set and the
    /// sign of the sorting permutation; `None` when a label repeats.
    pub fn sort_signed(indices: &[usize]) -> Option<(IndexSet, i8)> {
        let mut set = IndexSet::EMPTY;
        let mut sign = 1i8;
        for &i in indices {
            debug_assert!((1..=MAX_DIM).contains(&i));
            if set.contains(i) {
                return None;
            }
            // labels already placed that exceed i must be jumped over
            if (set.0 >> (i + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            set.0 |= 1 << i;
        }
        Some((set, sign))
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i <= MAX_DIM && self.0 & (1 << i) != 0
    }

    pub fn largest(&self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (1..=MAX_DIM).filter(move |&i| bits & (1 << i) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn without(&self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << i))
    }

    /// Number of labels in `self` strictly below `i`.
    pub fn count_below(&self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }

    /// All `k`-subsets of `1..=d`, in lexicographic order.
    pub fn subsets(d: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        (1..=d).combinations(k).map(|c| IndexSet::from_sorted(&c).expect("sorted"))
    }
}

impl Ord for IndexSet {
    /// Lexicographic order of the increasing label lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

/// Sign of wedging blade `a` in front of blade `b`, i.e. `e_a ∧ e_b = sign e_{a∪b}`.
/// Zero when they overlap.
pub fn wedge_sign(a: IndexSet, b: IndexSet) -> i8 {
    if !a.is_disjoint(&b) {
        return 0;
    }
    // each label of b has to travel past the labels of a that are larger
    let swaps: usize = b.iter().map(|j| a.len() - a.count_below(j)).sum();
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A homogeneous element of the exterior algebra over F^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multivector {
    field: Field,
    dim: usize,
    grade: usize,
    terms: BTreeMap<IndexSet, Scalar>,
}

impl Multivector {
    pub fn zero(field: &Field, dim: usize, grade: usize) -> Self {
        Multivector { field: field.clone(), dim, grade, terms: BTreeMap::new() }
    }

    /// The basis vector e_i (grade 1).
    pub fn basis(field: &Field, dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::InvalidIndex(format!("e_{i} in dimension {dim}")));
        }
        let mut m = Multivector::zero(field, dim, 1);
        m.terms.insert(IndexSet::singleton(i), field.one());
        Ok(m)
    }

    /// The scalar `s` as a grade-0 multivector.
    pub fn scalar(s: &Scalar, dim: usize) -> Self {
        let mut m = Multivector::zero(s.field(), dim, 0);
        m.add_term(IndexSet::EMPTY, s.clone());
        m
    }

    /// A grade-1 multivector from a coordinate row.
    pub fn from_vector(field: &Field, coords: &[Scalar]) -> Self {
        let mut m = Multivector::zero(field, coords.len(), 1);
        for (i, c) in coords.iter().enumerate() {
            m.add_term(IndexSet::singleton(i + 1), c.clone());
        }
        m
    }

    /// Builds from `(blade, coefficient)` pairs; zero coefficients are dropped
    /// and repeated blades accumulate.
    pub fn from_terms(
        field: &Field,
        dim: usize,
        grade: usize,
        terms: impl IntoIterator<Item = (IndexSet, Scalar)>,
    ) -> Result<Self> {
        let mut m = Multivector::zero(field, dim, grade);
        for (set, coeff) in terms {
            if set.len() != grade || set.largest().is_some_and(|x| x > dim) {
                return Err(Error::InvalidIndex(format!(
                    "blade {set:?} in a grade-{grade} multivector over dimension {dim}"
                )));
            }
            m.add_term(set, coeff);
        }
        Ok(m)
    }

    pub(crate) fn add_term(&mut self, set: IndexSet, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&set) {
            Some(c) => {
                let v = &*c + &coeff;
                if v.is_zero() {
                    self.terms.remove(&set);
                } else {
                    *c = v;
                }
            }
            None => {
                self.terms.insert(set, coeff);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, set: &IndexSet) -> Scalar {
        self.terms.get(set).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms in lexicographic blade order.
    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Scalar)> {
        self.terms.iter()
    }

    fn check_compatible(&self, other: &Multivector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "multivectors over dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.descriptor(), other.field.descriptor()));
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        self.check_compatible(other)?;
        let mut out = Multivector::zero(&self.field, self.dim, self.grade + other.grade);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                match wedge_sign(*a, *b) {
                    0 => {}
                    s => {
                        let c = ca * cb;
                        out.add_term(a.union(b), if s > 0 { c } else { -c });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Contraction by the dual covectors `e^{l_1}, ..., e^{l_m}` in the
    /// left-derivative convention described in the module docs.
    pub fn contract(&self, dual_indices: &[usize]) -> Result<Multivector> {
        if dual_indices.iter().any(|&l| l == 0 || l > self.dim) {
            return Err(Error::InvalidIndex(format!(
                "dual labels {dual_indices:?} outside 1..={}",
                self.dim
            )));
        }
        if !dual_indices.iter().all_unique() {
            return Err(Error::InvalidIndex(format!("repeated dual labels {dual_indices:?}")));
        }
        if dual_indices.len() > self.grade {
            return Err(Error::DimensionMismatch(format!(
                "contracting {} covectors into a grade-{} multivector",
                dual_indices.len(),
                self.grade
            )));
        }
        let mut cur = self.clone();
        for &l in dual_indices.iter().rev() {
            let mut next = Multivector::zero(&self.field, self.dim, cur.grade - 1);
            for (set, c) in &cur.terms {
                if !set.contains(l) {
                    continue;
                }
                let c = if set.count_below(l) % 2 == 0 { c.clone() } else { -c };
                next.add_term(set.without(l), c);
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn scale(&self, s: &Scalar) -> Multivector {
        let mut out = Multivector::zero(&self.field, self.dim, self.grade);
        for (set, c) in &self.terms {
            out.add_term(*set, c * s);
        }
        out
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector> {
        self.check_compatible(other)?;
        if self.grade != other.grade {
            return Err(Error::DimensionMismatch(format!(
                "adding grades {} and {}",
                self.grade, other.grade
            )));
        }
        let mut out = self.clone();
        for (set, c) in &other.terms {
            out.add_term(*set, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Multivector {
        self.scale(&-self.field.one())
    }

    /// First blade where `self` and `other` disagree, with both coefficients.
    pub fn first_difference(&self, other: &Multivector) -> Option<(IndexSet, Scalar, Scalar)> {
        let keys: std::collections::BTreeSet<&IndexSet> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|k| {
            let (a, b) = (self.coeff(k), other.coeff(k));
            (a != b).then_some((*k, a, b))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "grade": self.grade,
            "terms": self
                .terms
                .iter()
                .map(|(set, c)| serde_json::json!({"indices": set.to_vec(), "coeff": c.to_json()}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Rank of the span of equal-grade multivectors: rank of the coefficient
/// matrix with one row per multivector and one column per blade.
pub fn span_rank(vs: &[Multivector]) -> Result<usize> {
    let Some(first) = vs.first() else {
        return Ok(0);
    };
    for v in vs {
        if v.grade != first.grade || v.dim != first.dim {
            return Err(Error::DimensionMismatch(format!(
                "span of grade {} (dim {}) and grade {} (dim {}) multivectors",
                first.grade, first.dim, v.grade, v.dim
            )));
        }
        if v.field != first.field {
            return Err(Error::FieldMismatch(first.field.descriptor(), v.field.descriptor()));
        }
    }
    // only blades that actually occur contribute nonzero columns
    let blades: Vec<IndexSet> = vs
        .iter()
        .flat_map(|v| v.terms.keys().copied())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows = vs.iter().map(|v| blades.iter().map(|b| v.coeff(b)).collect()).collect();
    Ok(Matrix::from_rows(&first.field, rows)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn e(i: usize) -> Multivector {
        Multivector::basis(&q(), 3, i).unwrap()
    }

    fn blade(ix: &[usize]) -> IndexSet {
        IndexSet::from_sorted(ix).unwrap()
    }

    #[test]
    fn index_set_order_and_signs() {
        assert!(blade(&[1, 5]) < blade(&[2, 3]));
        assert_eq!(IndexSet::sort_signed(&[2, 1]), Some((blade(&[1, 2]), -1)));
        assert_eq!(IndexSet::sort_signed(&[1, 3, 2]), Some((blade(&[1, 2, 3]), -1)));
        assert_eq!(IndexSet::sort_signed(&[3, 1, 2]), Some((blade(&[1, 2, 3]), 1)));
        assert_eq!(IndexSet::sort_signed(&[1, 2, 1]), None);
        assert!(IndexSet::from_sorted(&[2, 2]).is_err());
        assert!(IndexSet::from_sorted(&[0]).is_err());
        assert_eq!(IndexSet::subsets(5, 3).count(), 10);
    }

    #[test]
    fn wedge_examples() {
        let e12 = e(1).wedge(&e(2)).unwrap();
        assert_eq!(e12.coeff(&blade(&[1, 2])), q().one());
        let e21 = e(2).wedge(&e(1)).unwrap();
        assert_eq!(e21.coeff(&blade(&[1, 2])), -q().one());
        assert!(e(1).wedge(&e(1)).unwrap().is_zero());
        let u = e(1).try_add(&e(2)).unwrap();
        let v = e(2).try_add(&e(3)).unwrap();
        let w = u.wedge(&v).unwrap();
        let expected = Multivector::from_terms(
            &q(),
            3,
            2,
            [(blade(&[1, 2]), q().one()), (blade(&[1, 3]), q().one()), (blade(&[2, 3]), q().one())],
        )
        .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn contract_examples() {
        let e123 = e(1).wedge(&e(2)).unwrap().wedge(&e(3)).unwrap();
        assert_eq!(e123.contract(&[2, 1]).unwrap(), e(3));
        assert_eq!(e123.contract(&[3, 1]).unwrap(), e(2).neg());
        let e12 = e(1).wedge(&e(2)).unwrap();
        assert_eq!(e12.contract(&[1]).unwrap(), e(2));
        assert_eq!(e12.contract(&[2]).unwrap(), e(1).neg());
    }

    #[test]
    fn contract_errors() {
        let e12 = e(1).wedge(&e(2)).unwrap();
        assert!(matches!(e12.contract(&[1, 1]), Err(Error::InvalidIndex(_))));
        assert!(matches!(e12.contract(&[4]), Err(Error::InvalidIndex(_))));
        assert!(matches!(e12.contract(&[1, 2, 3]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn wedge_dimension_mismatch() {
        let a = Multivector::basis(&q(), 3, 1).unwrap();
        let b = Multivector::basis(&q(), 4, 1).unwrap();
        assert!(matches!(a.wedge(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn span_rank_examples() {
        let e12 = e(1).wedge(&e(2)).unwrap();
        let e13 = e(1).wedge(&e(3)).unwrap();
        assert_eq!(span_rank(&[e12.clone(), e13]).unwrap(), 2);
        assert_eq!(span_rank(&[e12.clone(), e12.scale(&q().from_int(2))]).unwrap(), 1);
        assert_eq!(span_rank(&[]).unwrap(), 0);
        assert!(span_rank(&[e12, e(1)]).is_err());
    }

    #[test]
    fn zero_terms_are_dropped() {
        let m = Multivector::from_terms(
            &q(),
            3,
            1,
            [(blade(&[1]), q().one()), (blade(&[1]), -q().one()), (blade(&[2]), q().zero())],
        )
        .unwrap();
        assert!(m.is_zero());
    }
}
