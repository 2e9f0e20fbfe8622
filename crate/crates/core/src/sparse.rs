//! Sparse exact linear systems, solved by incremental row echelon reduction.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::Scalar;

pub type SparseRow = BTreeMap<usize, Scalar>;

fn axpy(target: &mut SparseRow, factor: &Scalar, src: &SparseRow) {
    for (&c, v) in src {
        let t = factor * v;
        match target.entry(c) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &t;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

/// One solution of `rows · x = rhs` with free variables set to zero, or
/// `None` if the system is inconsistent.
pub fn solve_sparse(rows: Vec<SparseRow>, rhs: Vec<Scalar>, ncols: usize) -> Option<Vec<Scalar>> {
    assert_eq!(rows.len(), rhs.len());
    // pivot column -> (row, rhs) with that leading column
    let mut pivots: BTreeMap<usize, (SparseRow, Scalar)> = BTreeMap::new();
    for (mut row, mut b) in rows.into_iter().zip(rhs) {
        loop {
            let Some((&lead, lv)) = row.iter().next() else {
                if !b.is_zero() {
                    return None;
                }
                break;
            };
            match pivots.get(&lead) {
                None => {
                    pivots.insert(lead, (row, b));
                    break;
                }
                Some((prow, pb)) => {
                    let f = -&(lv / &prow[&lead]);
                    axpy(&mut row, &f, prow);
                    b += &(&f * pb);
                }
            }
        }
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (&lead, (row, b)) in pivots.iter().rev() {
        let mut acc = b.clone();
        for (&c, v) in row.range(lead + 1..) {
            if !x[c].is_zero() {
                acc -= &(v * &x[c]);
            }
        }
        x[lead] = &acc / &row[&lead];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, Scalar::from_int(v))).collect()
    }

    #[test]
    fn solves_consistent_system() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 2), (2, 1)]), row(&[(0, 1), (1, 3), (2, 1)])];
        let rhs = vec![Scalar::from_int(3), Scalar::from_int(5), Scalar::from_int(8)];
        let x = solve_sparse(rows.clone(), rhs.clone(), 3).unwrap();
        for (r, b) in rows.iter().zip(&rhs) {
            let lhs: Scalar = r.iter().map(|(&c, v)| v * &x[c]).sum();
            assert_eq!(&lhs, b);
        }
    }

    #[test]
    fn detects_inconsistency() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 2), (1, 2)])];
        assert!(solve_sparse(rows, vec![Scalar::from_int(1), Scalar::from_int(3)], 2).is_none());
    }
}
