//! Exact rational linear programming for strict-feasibility questions.
//!
//! Cells are cones, so every system here is homogeneous; boundedness is
//! restored by boxing the variables at 1, which loses nothing up to
//! scaling.  Strict rows are relaxed to "≥ s" for a common slack s and the
//! simplex maximizes s; a witness exists exactly when the optimum is
//! positive.  Dense tableau, Bland's rule, no floating point anywhere.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::space::Axis;
use crate::Rat;

/// Relation of one row `coeffs · ξ ⋈ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRel {
    /// coeffs · ξ ≥ 0, required to hold strictly by the query.
    GeStrict,
    /// coeffs · ξ ≥ 0.
    Ge,
    /// coeffs · ξ = 0.
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub rows: Vec<(BTreeMap<Axis, Rat>, RowRel)>,
}

/// A point satisfying all rows, with every `GeStrict` row strictly
/// positive, or `None` when no such point exists.
pub fn strict_feasible(system: &LinearSystem) -> Result<Option<BTreeMap<Axis, Rat>>> {
    let mut vars: Vec<Axis> = Vec::new();
    for (coeffs, _) in &system.rows {
        for a in coeffs.keys() {
            if !vars.contains(a) {
                vars.push(a.clone());
            }
        }
    }
    vars.sort();
    let n = vars.len();
    let col_of: BTreeMap<&Axis, usize> = vars.iter().enumerate().map(|(i, a)| (a, i)).collect();

    // Variables: ξ_0..ξ_{n-1}, then s at column n.  All ≥ 0.
    // Constraints in ≤ form with nonnegative right-hand sides:
    //   GeStrict: s − coeffs·ξ ≤ 0
    //   Ge:         − coeffs·ξ ≤ 0
    //   Eq:           coeffs·ξ ≤ 0 and −coeffs·ξ ≤ 0
    //   box:        ξ_i ≤ 1, s ≤ 1
    let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let mut push_row = |coeffs: &BTreeMap<Axis, Rat>, negate: bool, with_s: bool| {
        let mut row = vec![Rat::zero(); n + 1];
        for (a, c) in coeffs {
            let j = col_of[a];
            row[j] = if negate { -c.clone() } else { c.clone() };
        }
        if with_s {
            row[n] = Rat::one();
        }
        rows.push((row, Rat::zero()));
    };
    for (coeffs, rel) in &system.rows {
        match rel {
            RowRel::GeStrict => push_row(coeffs, true, true),
            RowRel::Ge => push_row(coeffs, true, false),
            RowRel::Eq => {
                push_row(coeffs, false, false);
                push_row(coeffs, true, false);
            }
        }
    }
    for j in 0..=n {
        let mut row = vec![Rat::zero(); n + 1];
        row[j] = Rat::one();
        rows.push((row, Rat::one()));
    }

    let mut objective = vec![Rat::zero(); n + 1];
    objective[n] = Rat::one();

    let solution = simplex_max(&rows, &objective);
    let s_opt = solution[n].clone();
    if s_opt.is_positive() {
        let witness: BTreeMap<Axis, Rat> = vars
            .into_iter()
            .enumerate()
            .map(|(i, a)| (a, solution[i].clone()))
            .collect();
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

/// Maximize c·x subject to Ax ≤ b, x ≥ 0, with b ≥ 0 (slack basis is
/// feasible).  Returns the optimal x.  Bland's rule guarantees
/// termination under degeneracy.
fn simplex_max(rows: &[(Vec<Rat>, Rat)], objective: &[Rat]) -> Vec<Rat> {
    let m = rows.len();
    let n = objective.len();
    // Tableau: m rows × (n + m + 1) columns (variables, slacks, rhs).
    let width = n + m + 1;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for (i, (row, b)) in rows.iter().enumerate() {
        let mut r = vec![Rat::zero(); width];
        r[..n].clone_from_slice(row);
        r[n + i] = Rat::one();
        r[width - 1] = b.clone();
        tab.push(r);
    }
    // Objective row: negated coefficients.
    let mut obj = vec![Rat::zero(); width];
    for (j, c) in objective.iter().enumerate() {
        obj[j] = -c.clone();
    }
    tab.push(obj);

    let mut basis: Vec<usize> = (n..n + m).collect();
    // Bland: entering = lowest-index column with a negative objective
    // coefficient.
    while let Some(enter) = (0..width - 1).find(|&j| tab[m][j].is_negative()) {
        // Leaving: minimum ratio, ties to the lowest basis variable index.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = tab[i][width - 1].clone() / tab[i][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // Unbounded – cannot happen with the box rows in place.
            break;
        };
        pivot(&mut tab, pivot_row, enter);
        basis[pivot_row] = enter;
    }


    let mut x = vec![Rat::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab[i][width - 1].clone();
        }
    }
    x
}

fn pivot(tab: &mut [Vec<Rat>], row: usize, col: usize) {
    let inv = tab[row][col].clone();
    for cell in tab[row].iter_mut() {
        *cell /= inv.clone();
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row && !r[col].is_zero() {
            let factor = r[col].clone();
            for (cell, p) in r.iter_mut().zip(pivot_row.iter()) {
                let delta = factor.clone() * p.clone();
                *cell -= delta;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }
    fn row(pairs: &[(&str, (i64, i64))], rel: RowRel) -> (BTreeMap<Axis, Rat>, RowRel) {
        (
            pairs
                .iter()
                .map(|(name, (n, d))| (Axis::named(*name), rat(*n, *d)))
                .collect(),
            rel,
        )
    }

    #[test]
    fn strict_positivity_in_one_variable() {
        let system = LinearSystem {
            rows: vec![row(&[("x", (1, 1))], RowRel::GeStrict)],
        };
        let w = strict_feasible(&system).unwrap().unwrap();
        assert!(w[&Axis::named("x")].is_positive());
    }

    #[test]
    fn contradictory_strict_rows_have_no_witness() {
        // x1 ≤ x2 and x2 ≤ x1 both strict.
        let system = LinearSystem {
            rows: vec![
                row(&[("x1", (-1, 1)), ("x2", (1, 1))], RowRel::GeStrict),
                row(&[("x1", (1, 1)), ("x2", (-1, 1))], RowRel::GeStrict),
            ],
        };
        assert_eq!(strict_feasible(&system).unwrap(), None);
    }

    #[test]
    fn equalities_are_respected() {
        let system = LinearSystem {
            rows: vec![
                row(&[("x1", (1, 1)), ("x2", (-1, 1))], RowRel::Eq),
                row(&[("x1", (1, 1))], RowRel::GeStrict),
                row(&[("x2", (1, 1))], RowRel::GeStrict),
            ],
        };
        let w = strict_feasible(&system).unwrap().unwrap();
        assert_eq!(w[&Axis::named("x1")], w[&Axis::named("x2")]);
        assert!(w[&Axis::named("x1")].is_positive());
    }

    #[test]
    fn degenerate_ties_terminate() {
        // A cycle of ≥ rows forces equality all around; Bland must not
        // cycle on the degenerate pivots.
        let system = LinearSystem {
            rows: vec![
                row(&[("a", (1, 1)), ("b", (-1, 1))], RowRel::Ge),
                row(&[("b", (1, 1)), ("c", (-1, 1))], RowRel::Ge),
                row(&[("c", (1, 1)), ("a", (-1, 1))], RowRel::Ge),
                row(&[("a", (1, 1))], RowRel::GeStrict),
                row(&[("b", (1, 1))], RowRel::GeStrict),
                row(&[("c", (1, 1))], RowRel::GeStrict),
            ],
        };
        let w = strict_feasible(&system).unwrap().unwrap();
        assert_eq!(w[&Axis::named("a")], w[&Axis::named("b")]);
        assert_eq!(w[&Axis::named("b")], w[&Axis::named("c")]);
    }
}
