//! Row reduction over a finite field on packed-value matrices.

use crate::field::Field;

pub type Matrix = Vec<Vec<u32>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(field: &Field, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let Some(pr) = (top..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(top, pr);
        let inv = field.inv(rows[top][col]).expect("pivot is nonzero");
        for v in rows[top].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[col] == 0 {
                continue;
            }
            let c = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = field.sub(*v, field.mul(c, pv));
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(field, &mut m).len()
}

/// Coefficients `c` with `sum_i c_i basis[i] == target`, if any.
pub fn solve_combination(field: &Field, basis: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
    let k = basis.len();
    let n = target.len();
    // Columns of the augmented system are the basis vectors plus the target.
    let mut aug: Matrix = (0..n)
        .map(|j| {
            let mut row: Vec<u32> = basis.iter().map(|b| b[j]).collect();
            row.push(target[j]);
            row
        })
        .collect();
    let pivots = row_reduce(field, &mut aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![0u32; k];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = aug[r][k];
    }
    Some(sol)
}

pub fn dot(field: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// `message * rows`
pub fn combine(field: &Field, message: &[u32], rows: &[Vec<u32>]) -> Vec<u32> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut out = vec![0u32; n];
    for (&c, row) in message.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(row) {
            *o = field.add(*o, field.mul(c, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve() {
        let f = Field::new(3, 1, None).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        // row1 = 2 * row0 over GF(3)
        assert_eq!(rank(&f, &rows), 2);
        let target = combine(&f, &[2, 0, 1], &rows);
        let sol = solve_combination(&f, &[rows[0].clone(), rows[2].clone()], &target).unwrap();
        assert_eq!(sol, vec![2, 1]);
        assert!(solve_combination(&f, &[rows[2].clone()], &[1, 0, 0]).is_none());
    }
}
