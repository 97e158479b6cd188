//! Exact Gaussian elimination over a base field, on rows of codes.

use crate::finite_field::BaseField;

/// Reduces `rows` to reduced row echelon form in place; returns the rank.
/// Zero rows end up at the bottom. The RREF of a row space is unique, so this
/// doubles as a canonical form.
pub(crate) fn rref(field: &BaseField, rows: &mut [Vec<u64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[rank][col..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let factor = rows[r][col];
            // disjoint borrows of the pivot row and the row being cleared
            let (pivot_row, target_row) = if r < rank {
                let (head, tail) = rows.split_at_mut(rank);
                (&tail[0], &mut head[r])
            } else {
                let (head, tail) = rows.split_at_mut(r);
                (&head[rank], &mut tail[0])
            };
            for (t, &p) in target_row[col..].iter_mut().zip(&pivot_row[col..]) {
                *t = field.sub(*t, field.mul(factor, p));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub(crate) fn rank(field: &BaseField, mut rows: Vec<Vec<u64>>) -> usize {
    rref(field, &mut rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_f2() {
        let f = BaseField::new(2, 1).unwrap();
        let rows = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]];
        assert_eq!(rank(&f, rows), 2);
        assert_eq!(rank(&f, vec![vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank(&f, vec![vec![1, 0], vec![0, 1]]), 2);
    }

    #[test]
    fn rref_is_canonical_over_f3() {
        let f = BaseField::new(3, 1).unwrap();
        let mut a = vec![vec![2, 1, 0], vec![1, 2, 1]];
        // same row space, different presentation: [a0 + a1, 2*a1]
        let mut b = vec![vec![0, 0, 1], vec![2, 1, 2]];
        let ra = rref(&f, &mut a);
        let rb = rref(&f, &mut b);
        assert_eq!(ra, 2);
        assert_eq!(rb, 2);
        assert_eq!(a, b);
    }
}
