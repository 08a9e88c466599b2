//! Eigenvalues of small real symmetric matrices by the cyclic Jacobi method.
//!
//! Schreier-graph adjacency matrices are at most a few hundred rows, so the
//! quadratic-per-sweep cost is fine and the method is unconditionally stable.

// Index loops mirror the textbook rotation formulas.
#![allow(clippy::needless_range_loop)]

use thiserror::Error;

/// Convergence threshold on the off-diagonal Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-10;
/// Sweeps allowed before giving up.
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Jacobi iteration did not converge: off-diagonal norm {0:e} after {MAX_SWEEPS} sweeps")]
    NoConvergence(f64),
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                s += v * v;
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues of a symmetric matrix, sorted in decreasing order.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>]) -> Result<Vec<f64>, EigenError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(EigenError::NotSquare);
    }
    for i in 0..n {
        for j in 0..i {
            let scale = matrix[i][j].abs().max(matrix[j][i].abs()).max(1.0);
            if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * scale {
                return Err(EigenError::NotSymmetric(i, j));
            }
        }
    }
    let mut a = matrix.to_vec();
    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > JACOBI_TOLERANCE {
        if sweeps == MAX_SWEEPS {
            return Err(EigenError::NoConvergence(off));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                // Rotation angle zeroing a[p][q]: tan(2 theta) = 2 a_pq / (a_qq - a_pp).
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn nalgebra_eigs(m: &[Vec<f64>]) -> Vec<f64> {
        let n = m.len();
        let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
        let mut e: Vec<f64> = dm.symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(|x, y| y.partial_cmp(x).unwrap());
        e
    }

    #[test]
    fn diagonal_and_small_cases() {
        assert_eq!(symmetric_eigenvalues(&[]).unwrap(), Vec::<f64>::new());
        assert_eq!(symmetric_eigenvalues(&[vec![3.0]]).unwrap(), vec![3.0]);
        let e = symmetric_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((e[0] - 3.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_spectrum() {
        let n = 7;
        let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect();
        let e = symmetric_eigenvalues(&m).unwrap();
        assert!((e[0] - 6.0).abs() < 1e-9);
        assert!(e[1..].iter().all(|&x| (x + 1.0).abs() < 1e-9));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(symmetric_eigenvalues(&[vec![1.0, 2.0]]).unwrap_err(), EigenError::NotSquare);
        assert_eq!(
            symmetric_eigenvalues(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap_err(),
            EigenError::NotSymmetric(1, 0)
        );
    }

    #[test]
    fn agrees_with_nalgebra_on_random_matrices() {
        let mut rng = Rng::new(11);
        for trial in 0..40 {
            let n = 1 + trial % 24;
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.below(2001) as f64 / 100.0 - 10.0;
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            let ours = symmetric_eigenvalues(&m).unwrap();
            let theirs = nalgebra_eigs(&m);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-8, "n={n}: {a} vs {b}");
            }
        }
    }
}
