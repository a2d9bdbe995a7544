//! Index bookkeeping for the (2n+1)-gon and N-simplex equations.
//!
//! Positions are 1-based throughout. Every closed-form position formula has
//! an enumeration counterpart, and the two are cross-checked in tests.

use serde::Serialize;

use crate::error::{Error, Result};

/// An unordered label pair, stored as `(min, max)`.
pub type Pair = (usize, usize);

fn pair(a: usize, b: usize) -> Pair {
    (a.min(b), a.max(b))
}

fn contains(p: Pair, q: usize) -> bool {
    p.0 == q || p.1 == q
}

/// Positions (1-based, increasing) where the operator labelled `label` acts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionSet {
    pub label: usize,
    pub positions: Vec<usize>,
}

impl PositionSet {
    /// 0-based positions, for indexing ambient matrices.
    pub fn zero_based(&self) -> Vec<usize> {
        self.positions.iter().map(|p| p - 1).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

/// All pairs over `1..=order+1` in lexicographic order: the coordinate
/// labels of the `order`-simplex equation.
pub fn sim_sequence(order: usize) -> Vec<Pair> {
    let m = order + 1;
    (1..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).collect()
}

/// Initial (odd, even) and final (even, odd) pair sequences of the
/// (2n+1)-gon equation, both lexicographic.
pub fn gon_sequences(n: usize) -> (Vec<Pair>, Vec<Pair>) {
    let top = 2 * n + 1;
    let initial = (1..top)
        .step_by(2)
        .flat_map(|i| (i + 1..top).step_by(2).map(move |j| (i, j)))
        .collect();
    let fin = (2..top)
        .step_by(2)
        .flat_map(|i| (i + 1..=top).step_by(2).map(move |j| (i, j)))
        .collect();
    (initial, fin)
}

/// Ambient dimension of the (2n+1)-gon equation.
pub fn gon_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Ambient dimension of the `order`-simplex equation.
pub fn simplex_dim(order: usize) -> usize {
    order * (order + 1) / 2
}

/// Labels of the gon equation applied on `side`, in application order.
pub fn gon_labels(n: usize, side: Side) -> Vec<usize> {
    match side {
        Side::Lhs => (1..=2 * n + 1).step_by(2).collect(),
        Side::Rhs => (1..=n).rev().map(|k| 2 * k).collect(),
    }
}

/// Labels of the inverse gon equation (with `B = A^{-1}`), in application order.
pub fn gon_inverse_labels(n: usize, side: Side) -> Vec<usize> {
    match side {
        Side::Lhs => (1..=n).map(|k| 2 * k).collect(),
        Side::Rhs => (1..=2 * n + 1).rev().step_by(2).collect(),
    }
}

/// `L_q = [2n+1] \ {q}` in increasing order.
pub fn complement(n: usize, q: usize) -> Vec<usize> {
    (1..=2 * n + 1).filter(|&x| x != q).collect()
}

fn check_label(order: usize, q: usize) -> Result<()> {
    if q == 0 || q > order + 1 {
        return Err(Error::InvalidIndex(format!("label {q} outside 1..={}", order + 1)));
    }
    Ok(())
}

/// Enumerated position set of label `q` in the `order`-simplex equation.
pub fn simplex_positions(order: usize, q: usize) -> Result<PositionSet> {
    check_label(order, q)?;
    let positions = sim_sequence(order)
        .iter()
        .enumerate()
        .filter(|(_, p)| contains(**p, q))
        .map(|(i, _)| i + 1)
        .collect();
    Ok(PositionSet { label: q, positions })
}

/// Closed form for the `j`-th position of label `k` in the `order`-simplex:
/// `(2 order - k)(k - 1)/2 + j` for `j >= k`, and `a_{j, k-1}` for `j < k`.
/// For `order = 2n` this is the simplex formula; for `order = n` it is the
/// barred variant used by the gon equation.
pub fn simplex_position_closed(order: usize, k: usize, j: usize) -> Result<usize> {
    check_label(order, k)?;
    if j == 0 || j > order {
        return Err(Error::InvalidIndex(format!("slot {j} outside 1..={order}")));
    }
    if j >= k {
        Ok((2 * order - k) * (k - 1) / 2 + j)
    } else {
        simplex_position_closed(order, j, k - 1)
    }
}

pub fn simplex_positions_closed(order: usize, k: usize) -> Result<PositionSet> {
    let positions = (1..=order)
        .map(|j| simplex_position_closed(order, k, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(PositionSet { label: k, positions })
}

fn check_gon_label(n: usize, q: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidIndex("n must be at least 1".into()));
    }
    if q == 0 || q > 2 * n + 1 {
        return Err(Error::InvalidIndex(format!("label {q} outside 1..={}", 2 * n + 1)));
    }
    Ok(())
}

/// Closed-form gon position set: `B_{2k-1} = Ā_k`, `B_{2k} = Ā_k + b_k`
/// where `b_k` adds one to the slots `j < k`.
pub fn gon_positions(n: usize, q: usize) -> Result<PositionSet> {
    check_gon_label(n, q)?;
    let k = q.div_ceil(2);
    let base = simplex_positions_closed(n, k)?.positions;
    let positions = if q % 2 == 1 {
        base
    } else {
        base.iter().enumerate().map(|(j, &a)| if j + 1 < k { a + 1 } else { a }).collect()
    };
    Ok(PositionSet { label: q, positions })
}

/// Gon position set by definition: positions whose pair contains `q` in the
/// initial or the final sequence.
pub fn gon_positions_enumerated(n: usize, q: usize) -> Result<PositionSet> {
    check_gon_label(n, q)?;
    let (initial, fin) = gon_sequences(n);
    let positions = (0..initial.len())
        .filter(|&i| contains(initial[i], q) || contains(fin[i], q))
        .map(|i| i + 1)
        .collect();
    Ok(PositionSet { label: q, positions })
}

/// The fixed odd-only and even-only pair sequences: first member from one of
/// the initial/final sequences, second member from the other.
pub fn gon_fixed_sequences(n: usize) -> (Vec<Pair>, Vec<Pair>) {
    let (initial, fin) = gon_sequences(n);
    let odd = initial.iter().zip(&fin).map(|(a, b)| (a.0, b.1)).collect();
    let even = initial.iter().zip(&fin).map(|(a, b)| (b.0, a.1)).collect();
    (odd, even)
}

/// Gon position set read off the fixed sequence of matching parity.
pub fn gon_positions_fixed(n: usize, q: usize) -> Result<PositionSet> {
    check_gon_label(n, q)?;
    let (odd, even) = gon_fixed_sequences(n);
    let seq = if q % 2 == 1 { odd } else { even };
    let positions = seq
        .iter()
        .enumerate()
        .filter(|(_, p)| contains(**p, q))
        .map(|(i, _)| i + 1)
        .collect();
    Ok(PositionSet { label: q, positions })
}

/// Row labels before and after each operator of one side of the gon equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexTrace {
    pub side: Side,
    /// Labels of the operators in application order.
    pub labels: Vec<usize>,
    /// `rows[0]` is the initial labelling; `rows[t + 1]` follows `labels[t]`.
    pub rows: Vec<Vec<Pair>>,
}

/// Applies the indexing rule `(u_{p1,q}, u_{p3,q}, ...) A = (u_{p2,q}, u_{p4,q}, ...)`
/// along one side of the gon equation, checking at every step that exactly
/// `n` entries fit and that they sit at the positions `B_q`, and at the end
/// that the labelling equals the final sequence.
pub fn propagate_gon_indices(n: usize, side: Side) -> Result<IndexTrace> {
    if n == 0 {
        return Err(Error::InvalidIndex("n must be at least 1".into()));
    }
    let (initial, fin) = gon_sequences(n);
    let labels = gon_labels(n, side);
    let mut rows = vec![initial];
    for &q in &labels {
        let lq = complement(n, q);
        let mut row = rows.last().unwrap().clone();
        let fitting: Vec<(usize, usize)> = row
            .iter()
            .enumerate()
            .filter_map(|(pos, &pr)| {
                if !contains(pr, q) {
                    return None;
                }
                let partner = if pr.0 == q { pr.1 } else { pr.0 };
                let t = lq.iter().position(|&x| x == partner)?;
                (t % 2 == 0).then_some((pos, t))
            })
            .collect();
        if fitting.len() != n {
            return Err(Error::Structural(format!(
                "{} entries fit A^({q}) instead of {n} in {row:?}",
                fitting.len()
            )));
        }
        let expected_slots: Vec<usize> = (0..n).map(|i| 2 * i).collect();
        if fitting.iter().map(|f| f.1).collect::<Vec<_>>() != expected_slots {
            return Err(Error::Structural(format!(
                "inputs of A^({q}) are not ordered like p1, p3, ... in {row:?}"
            )));
        }
        let positions: Vec<usize> = fitting.iter().map(|f| f.0 + 1).collect();
        if positions != gon_positions(n, q)?.positions {
            return Err(Error::Structural(format!(
                "A^({q}) acts at {positions:?}, not at its position set"
            )));
        }
        for (pos, t) in fitting {
            row[pos] = pair(lq[t + 1], q);
        }
        rows.push(row);
    }
    if rows.last() != Some(&fin) {
        return Err(Error::Structural(format!(
            "propagation ended at {:?} instead of {fin:?}",
            rows.last().unwrap()
        )));
    }
    Ok(IndexTrace { side, labels, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
    Green,
}

impl Color {
    pub fn letter(self) -> char {
        match self {
            Color::Blue => 'b',
            Color::Red => 'r',
            Color::Green => 'g',
        }
    }
}

/// The four admissible initial/inner/final color histories.
pub const ADMISSIBLE_HISTORIES: [[Color; 3]; 4] = [
    [Color::Blue, Color::Green, Color::Red],
    [Color::Red, Color::Green, Color::Blue],
    [Color::Green, Color::Blue, Color::Green],
    [Color::Green, Color::Red, Color::Green],
];

/// Colors of the 2n-simplex coordinates before and after each operator of
/// the left-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub n: usize,
    pub pairs: Vec<Pair>,
    /// `steps[0]` is the initial coloring; `steps[q]` follows `R^(q)`.
    pub steps: Vec<Vec<Color>>,
    /// Initial, inner and final color of each position.
    pub histories: Vec<[Color; 3]>,
}

impl Coloring {
    pub fn initial(&self) -> &[Color] {
        &self.steps[0]
    }

    /// 0-based positions of the given initial color.
    pub fn positions_of(&self, color: Color) -> Vec<usize> {
        self.initial().iter().enumerate().filter(|(_, &c)| c == color).map(|(i, _)| i).collect()
    }
}

fn parity_color(p: Pair) -> Color {
    match (p.0 % 2, p.1 % 2) {
        (1, 0) => Color::Blue,
        (0, 1) => Color::Red,
        _ => Color::Green,
    }
}

/// Colors the 2n-simplex coordinates (blue = initial gon pairs, red = final
/// gon pairs, green = the rest) and propagates through the left-hand side:
/// even outputs of `R^(q)` inherit the color of its odd inputs and vice
/// versa. Checks the green-sector structure along the way.
pub fn color_positions(n: usize) -> Result<Coloring> {
    if n == 0 {
        return Err(Error::InvalidIndex("n must be at least 1".into()));
    }
    let order = 2 * n;
    let pairs = sim_sequence(order);
    let initial: Vec<Color> = pairs.iter().map(|&p| parity_color(p)).collect();
    let mut steps = vec![initial.clone()];
    let mut touched: Vec<Vec<Color>> = vec![Vec::new(); pairs.len()];
    for q in 1..=order + 1 {
        let pos = simplex_positions(order, q)?.zero_based();
        let cur = steps.last().unwrap().clone();
        let mut next = cur.clone();
        for parity in 0..2 {
            // local slots 1, 3, ... (parity 0) feed 2, 4, ... and vice versa
            let inputs: Vec<Color> = pos.iter().skip(parity).step_by(2).map(|&p| cur[p]).collect();
            let c = inputs[0];
            if inputs.iter().any(|&x| x != c) {
                return Err(Error::Structural(format!(
                    "mixed colors {inputs:?} on one input block of R^({q})"
                )));
            }
            for &p in pos.iter().skip(1 - parity).step_by(2) {
                next[p] = c;
            }
        }
        for &p in &pos {
            touched[p].push(next[p]);
        }
        steps.push(next);
    }
    let mut histories = Vec::with_capacity(pairs.len());
    for (i, t) in touched.iter().enumerate() {
        if t.len() != 2 {
            return Err(Error::Structural(format!("position {} changed {} times", i + 1, t.len())));
        }
        let h = [initial[i], t[0], t[1]];
        if !ADMISSIBLE_HISTORIES.contains(&h) {
            return Err(Error::Structural(format!(
                "position {} ({:?}) has history {h:?}",
                i + 1,
                pairs[i]
            )));
        }
        histories.push(h);
    }
    let last = steps.last().unwrap();
    for (i, &p) in pairs.iter().enumerate() {
        let same_parity = p.0 % 2 == p.1 % 2;
        // initial and final green positions coincide with the same-parity pairs
        if same_parity != (initial[i] == Color::Green) || same_parity != (last[i] == Color::Green) {
            return Err(Error::Structural(format!("green sector mismatch at {p:?}")));
        }
        // inner green positions are exactly the mixed-parity pairs
        if same_parity == (histories[i][1] == Color::Green) {
            return Err(Error::Structural(format!("inner green mismatch at {p:?}")));
        }
    }
    Ok(Coloring { n, pairs, steps, histories })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Vec<Pair> {
        s.split_whitespace()
            .map(|t| {
                let d: Vec<usize> = t.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
                (d[0], d[1])
            })
            .collect()
    }

    #[test]
    fn sequences() {
        assert_eq!(sim_sequence(2), p("12 13 23"));
        assert_eq!(sim_sequence(4), p("12 13 14 15 23 24 25 34 35 45"));
        assert_eq!(sim_sequence(6).len(), 21);
        assert_eq!(gon_sequences(1), (p("12"), p("23")));
        assert_eq!(gon_sequences(2), (p("12 14 34"), p("23 25 45")));
        assert_eq!(gon_sequences(3).0, p("12 14 16 34 36 56"));
        assert_eq!(gon_sequences(3).1, p("23 25 27 45 47 67"));
    }

    #[test]
    fn simplex_position_examples() {
        assert_eq!(simplex_positions(4, 1).unwrap().positions, vec![1, 2, 3, 4]);
        assert_eq!(simplex_positions(4, 3).unwrap().positions, vec![2, 5, 8, 9]);
        assert_eq!(simplex_positions(4, 5).unwrap().positions, vec![4, 7, 9, 10]);
        assert_eq!(simplex_positions(2, 2).unwrap().positions, vec![1, 3]);
        assert!(simplex_positions(4, 6).is_err());
        assert!(simplex_positions(4, 0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(simplex_position_closed(4, 3, 4).unwrap(), 9);
        assert_eq!(simplex_position_closed(4, 4, 1).unwrap(), 3);
        assert_eq!(simplex_position_closed(4, 1, 3).unwrap(), 3);
        // barred variant at n = 2 runs over the 2-simplex pairs (12, 13, 23)
        assert_eq!(simplex_position_closed(2, 2, 1).unwrap(), 1);
        assert_eq!(simplex_position_closed(2, 1, 1).unwrap(), 1);
        assert!(simplex_position_closed(4, 1, 5).is_err());
        assert!(simplex_position_closed(4, 6, 1).is_err());
    }

    #[test]
    fn gon_position_examples() {
        let got: Vec<Vec<usize>> = (1..=5).map(|q| gon_positions(2, q).unwrap().positions).collect();
        assert_eq!(got, vec![vec![1, 2], vec![1, 2], vec![1, 3], vec![2, 3], vec![2, 3]]);
        for q in 1..=3 {
            assert_eq!(gon_positions(1, q).unwrap().positions, vec![1]);
        }
        // B_6 at n = 3: pairs 16, 36, 56 of the initial sequence
        assert_eq!(gon_positions(3, 6).unwrap().positions, vec![3, 5, 6]);
        assert_eq!(gon_positions_enumerated(3, 6).unwrap().positions, vec![3, 5, 6]);
        assert!(gon_positions(2, 6).is_err());
    }

    #[test]
    fn index_propagation() {
        let lhs = propagate_gon_indices(2, Side::Lhs).unwrap();
        assert_eq!(lhs.labels, vec![1, 3, 5]);
        assert_eq!(
            lhs.rows,
            vec![p("12 14 34"), p("13 15 34"), p("23 15 35"), p("23 25 45")]
        );
        let rhs = propagate_gon_indices(2, Side::Rhs).unwrap();
        assert_eq!(rhs.labels, vec![4, 2]);
        assert_eq!(rhs.rows, vec![p("12 14 34"), p("12 24 45"), p("23 25 45")]);
        let n1 = propagate_gon_indices(1, Side::Lhs).unwrap();
        assert_eq!(n1.rows, vec![p("12"), p("13"), p("23")]);
        let n1 = propagate_gon_indices(1, Side::Rhs).unwrap();
        assert_eq!(n1.rows, vec![p("12"), p("23")]);
    }

    #[test]
    fn coloring_n2() {
        let c = color_positions(2).unwrap();
        let letters: String = c.initial().iter().map(|c| c.letter()).collect();
        assert_eq!(letters, "bgbgrgrbgr");
        assert_eq!(c.positions_of(Color::Green).len(), 4);
        assert_eq!(color_positions(1).unwrap().positions_of(Color::Green), vec![1]);
    }

    #[test]
    fn n_zero_is_rejected() {
        assert!(propagate_gon_indices(0, Side::Lhs).is_err());
        assert!(color_positions(0).is_err());
        assert!(gon_positions(0, 1).is_err());
    }
}
