//! Sparse symmetric storage, Jacobi-preconditioned CG and a dense Cholesky
//! fallback.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::io::Write;
use std::time::Instant;

/// Square sparse matrix in CSR form, both triangles stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSym {
    /// Sums duplicate entries.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = triplets.iter().find(|(i, j, _)| *i >= n || *j >= n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: i.max(j) + 1,
            });
        }
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(triplets.len() / 2);
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len() / 2);
        let mut last = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseSym {
            n,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *yi = s;
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    /// `max |a_ij − a_ji| / max |a_ij|`
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut big: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                big = big.max(v.abs());
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        if big == 0.0 {
            0.0
        } else {
            worst / big
        }
    }

    /// Principal submatrix on `ids` (ascending).
    pub fn submatrix(&self, ids: &[usize]) -> SparseSym {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &i) in ids.iter().enumerate() {
            pos[i] = k;
        }
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for &i in ids {
            for (j, v) in self.row(i) {
                if pos[j] != usize::MAX {
                    cols.push(pos[j]);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseSym {
            n: ids.len(),
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                a[(i, j)] = v;
            }
        }
        a
    }

    /// Coordinate format: zero-based `row col value` lines, 17 significant
    /// digits.
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> Result<()> {
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                writeln!(w, "{i} {j} {v:.16e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Final preconditioned residual `√(rᵀD⁻¹r) / √(bᵀD⁻¹b)`.
    pub relative_residual: f64,
    pub converged: bool,
    pub seconds: f64,
}

pub const CG_TOLERANCE: f64 = 1e-12;

/// Jacobi-preconditioned conjugate gradients from a zero start.
///
/// A non-converged run is reported, not raised; a non-positive diagonal or
/// a non-positive curvature `pᵀAp` is an error.
pub fn cg_solve(
    a: &SparseSym,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let diag = a.diagonal();
    if let Some(i) = diag.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::NotPositiveDefinite(format!(
            "diagonal entry {i} is {}",
            diag[i]
        )));
    }
    let start = Instant::now();
    let report = |iterations, relative_residual, converged| SolveReport {
        iterations,
        relative_residual,
        converged,
        seconds: start.elapsed().as_secs_f64(),
    };
    let inv: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(r, d)| r * d).collect();
    let mut rz = dotp(&r, &z);
    let bnorm = rz.sqrt();
    if bnorm == 0.0 {
        return Ok((x, report(0, 0.0, true)));
    }
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rel = 1.0;
    for it in 1..=max_iter {
        a.matvec(&p, &mut q);
        let pq = dotp(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::NotPositiveDefinite(format!(
                "curvature {pq:e} at iteration {it}"
            )));
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv[i];
        }
        let rz_new = dotp(&r, &z);
        rel = rz_new.max(0.0).sqrt() / bnorm;
        if rel <= tol {
            return Ok((x, report(it, rel, true)));
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Ok((x, report(max_iter, rel, false)))
}

/// Dense Cholesky solve; fails if `a` is not positive definite.
pub fn dense_solve(a: &DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("Cholesky factorization broke down".into()))?;
    Ok(chol
        .solve(&DVector::from_column_slice(b))
        .as_slice()
        .to_vec())
}

fn dotp(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dotp(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace_1d(n: usize) -> SparseSym {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SparseSym::from_triplets(n, t).unwrap()
    }

    #[test]
    fn triplets_sum_duplicates() {
        let a =
            SparseSym::from_triplets(2, vec![(0, 0, 1.0), (1, 0, 2.0), (0, 0, 3.0), (0, 1, 2.0)])
                .unwrap();
        assert_eq!(a.get(0, 0), 4.0);
        assert_eq!(a.get(1, 1), 0.0);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.asymmetry(), 0.0);
        assert!(SparseSym::from_triplets(2, vec![(2, 0, 1.0)]).is_err());
        let mut out = Vec::new();
        a.write_coordinate(&mut out).unwrap();
        assert!(String::from_utf8(out)
            .unwrap()
            .starts_with("0 0 4.0000000000000000e0\n0 1 2"));
    }

    #[test]
    fn cg_solves_laplacian() {
        let a = laplace_1d(50);
        let xe: Vec<f64> = (0..50).map(|i| (i as f64 * 0.1).sin()).collect();
        let b = a.mul(&xe);
        let (x, rep) = cg_solve(&a, &b, 1e-12, 1000).unwrap();
        assert!(rep.converged);
        assert!(rep.iterations <= 50);
        for (u, v) in x.iter().zip(&xe) {
            assert!((u - v).abs() < 1e-9);
        }
        let (_, rep) = cg_solve(&a, &b, 1e-12, 3).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 3);
    }

    #[test]
    fn cg_small_examples() {
        let id = SparseSym::from_triplets(3, (0..3).map(|i| (i, i, 1.0)).collect()).unwrap();
        let (x, rep) = cg_solve(&id, &[1.0, -2.0, 3.0], 1e-12, 10).unwrap();
        assert_eq!(x, vec![1.0, -2.0, 3.0]);
        assert_eq!(rep.iterations, 1);
        let a =
            SparseSym::from_triplets(2, vec![(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 2.0)])
                .unwrap();
        let (x, _) = cg_solve(&a, &[1.0, 1.0], 1e-12, 10).unwrap();
        assert!(x.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-14));
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0]));
        let x = dense_solve(&d, &[1.0, 1.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cg_rejects_bad_diagonal() {
        let a = SparseSym::from_triplets(2, vec![(0, 0, 1.0), (1, 1, 0.0)]).unwrap();
        assert!(cg_solve(&a, &[1.0, 1.0], 1e-12, 10).is_err());
        let indef =
            SparseSym::from_triplets(2, vec![(0, 0, 1.0), (1, 1, 1.0), (0, 1, 2.0), (1, 0, 2.0)])
                .unwrap();
        assert!(cg_solve(&indef, &[1.0, -1.0], 1e-12, 10).is_err());
    }

    #[test]
    fn dense_hilbert() {
        let h = DMatrix::from_fn(4, 4, |i, j| 1.0 / (i + j + 1) as f64);
        let x = dense_solve(&h, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        // first column of the inverse Hilbert matrix
        for (u, v) in x.iter().zip([16.0, -120.0, 240.0, -140.0]) {
            assert!((u - v).abs() < 1e-8);
        }
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(dense_solve(&bad, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn submatrix_and_dense_agree() {
        let a = laplace_1d(5);
        let s = a.submatrix(&[1, 3, 4]);
        assert_eq!(s.get(1, 2), -1.0);
        assert_eq!(s.get(0, 1), 0.0);
        let d = s.to_dense();
        assert_eq!(d[(2, 2)], 2.0);
        let mut y = vec![0.0; 3];
        s.matvec(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, vec![2.0, 1.0, 1.0]);
    }
}
