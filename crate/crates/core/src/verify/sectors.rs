use serde_json::{json, Value};

use super::{all_labels, mismatch, outcome, pick, side_product, tag};
use crate::combinatorics::{color_positions, gon_dim, gon_inverse_labels, gon_labels, simplex_dim, Color, Side};
use crate::error::Result;
use crate::grassmann::GrassmannPoint;
use crate::linalg::Matrix;
use crate::report::{Outcome, Report};
use crate::solutions::{build_a, build_b, build_r};

fn simplex_sides(pt: &GrassmannPoint) -> Result<(Matrix, Matrix)> {
    let n = pt.n();
    let r = all_labels(pt.table(), build_r)?;
    let order: Vec<usize> = (1..=2 * n + 1).collect();
    let rev: Vec<usize> = order.iter().rev().copied().collect();
    let dim = simplex_dim(2 * n);
    Ok((side_product(&pick(&r, &order), dim)?, side_product(&pick(&r, &rev), dim)?))
}

fn first_nonzero(m: &Matrix, rows: &[usize], cols: &[usize]) -> Option<Value> {
    rows.iter().flat_map(|&r| cols.iter().map(move |&c| (r, c))).find_map(|(r, c)| {
        let v = m.get(r, c);
        (!v.is_zero()).then(|| json!({"row": r + 1, "col": c + 1, "value": v.to_json()}))
    })
}

fn colors_failure(pt: &GrassmannPoint) -> Result<Option<Value>> {
    let n = pt.n();
    let coloring = color_positions(n)?;
    let blue = coloring.positions_of(Color::Blue);
    let red = coloring.positions_of(Color::Red);
    let green = coloring.positions_of(Color::Green);
    let mut br: Vec<usize> = blue.iter().chain(&red).copied().collect();
    br.sort_unstable();
    let (lhs, rhs) = simplex_sides(pt)?;
    for (side, m) in [("lhs", &lhs), ("rhs", &rhs)] {
        for (part, rows, cols) in [
            ("blue-red to green", &br, &green),
            ("green to blue-red", &green, &br),
            ("blue to blue", &blue, &blue),
            ("red to red", &red, &red),
        ] {
            if let Some(w) = first_nonzero(m, rows, cols) {
                return Ok(Some(tag(tag(w, "part", json!(part)), "side", json!(side))));
            }
        }
    }
    // restricted equality, one block per color
    for (part, rows, cols) in [("blue", &blue, &red), ("red", &red, &blue), ("green", &green, &green)] {
        let l = lhs.submatrix(rows, cols);
        let r = rhs.submatrix(rows, cols);
        if let Some(w) = mismatch(&l, &r) {
            return Ok(Some(tag(w, "part", json!(part))));
        }
    }
    // the blue part is the polygon side, the red part the inverse polygon side
    let dim = gon_dim(n);
    let k = lhs.submatrix(&blue, &red);
    let k_inv = lhs.submatrix(&red, &blue);
    let a = all_labels(pt.table(), build_a)?;
    let b = all_labels(pt.table(), build_b)?;
    let x = side_product(&pick(&a, &gon_labels(n, Side::Lhs)), dim)?;
    let y = side_product(&pick(&b, &gon_inverse_labels(n, Side::Lhs)), dim)?;
    for (part, got, want) in [("blue vs polygon", &k, &x), ("red vs inverse polygon", &k_inv, &y)] {
        if let Some(w) = mismatch(got, want) {
            return Ok(Some(tag(w, "part", json!(part))));
        }
    }
    let id = Matrix::identity(pt.field(), dim);
    for (part, prod) in [("K'K", &k_inv * &k), ("KK'", &k * &k_inv)] {
        if let Some(w) = mismatch(&prod, &id) {
            return Ok(Some(tag(w, "part", json!(part))));
        }
    }
    Ok(None)
}

/// The simplex sides split into a blue∪red block and a green block; the
/// blue∪red block is `[[0, K], [K', 0]]` with `K` the polygon side and `K'`
/// its inverse.
pub fn verify_colors(pt: &GrassmannPoint) -> Report {
    Report::run("colors", pt.params(), || outcome(colors_failure(pt)))
}

/// `G² = 1` for the green block G of the left-hand side, and outside
/// characteristic 2 the eigenspace ranks `rank(G − 1) = n(n−1)/2`,
/// `rank(G + 1) = n(n+1)/2`.
pub fn green_spectrum(pt: &GrassmannPoint) -> Report {
    Report::run("green", pt.params(), || {
        let run = || -> Result<Outcome> {
            let n = pt.n();
            let green = color_positions(n)?.positions_of(Color::Green);
            let (lhs, _) = simplex_sides(pt)?;
            let g = lhs.submatrix(&green, &green);
            let f = pt.field();
            if let Some(w) = mismatch(&(&g * &g), &Matrix::identity(f, g.rows())) {
                return Ok(Outcome::Fail(tag(w, "part", json!("G^2"))));
            }
            if f.characteristic() == 2 {
                return Ok(Outcome::PassWith("characteristic 2: involution only, spectral ranks skipped".into()));
            }
            let minus = g.add_scalar_identity(&-f.one()).rank();
            let plus = g.add_scalar_identity(&f.one()).rank();
            let want = (n * (n - 1) / 2, n * (n + 1) / 2);
            if (minus, plus) != want {
                return Ok(Outcome::Fail(json!({
                    "part": "ranks",
                    "rank_g_minus_1": minus,
                    "rank_g_plus_1": plus,
                    "expected": [want.0, want.1],
                })));
            }
            Ok(Outcome::Pass)
        };
        run().unwrap_or_else(|e| Outcome::Fail(json!({"error": e.to_string()})))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::grassmann::{gf4_point, random_point, DEFAULT_MAX_TRIES};
    use crate::report::Status;

    #[test]
    fn colors_and_green() {
        for n in 1..=3 {
            for field in ["q", "gf(11)"] {
                let pt = random_point(n, &Field::parse(field).unwrap(), 30, DEFAULT_MAX_TRIES).unwrap();
                let c = verify_colors(&pt);
                assert!(c.passed(), "{:?}", c.witness);
                let g = green_spectrum(&pt);
                assert!(g.passed(), "{:?}", g.witness);
                assert!(g.detail.is_none());
            }
        }
    }

    #[test]
    fn char_two_path() {
        let pt = gf4_point();
        assert!(verify_colors(&pt).passed());
        let g = green_spectrum(&pt);
        assert_eq!(g.status, Status::Pass);
        assert!(g.detail.unwrap().contains("characteristic 2"));
    }

    #[test]
    fn n1_blocks() {
        let pt = random_point(1, &Field::rationals(), 1, DEFAULT_MAX_TRIES).unwrap();
        let (lhs, _) = simplex_sides(&pt).unwrap();
        let c = color_positions(1).unwrap();
        assert_eq!(c.positions_of(Color::Green), vec![1]);
        assert!(lhs.get(0, 0).is_zero() && lhs.get(2, 2).is_zero());
        assert!(lhs.get(1, 1).is_one());
    }
}
