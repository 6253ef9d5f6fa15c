//! Small dense and tridiagonal linear algebra used by the assembly and the
//! certificates. Everything here is deterministic and allocation-light; the
//! dense routines only ever see matrices of a handful of rows.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Symmetric real tridiagonal matrix (all Gram matrices of the nodal basis).
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub diag: Vec<f64>,
    /// Upper/lower off-diagonal, length `diag.len() - 1`.
    pub off: Vec<f64>,
}

impl Tridiag {
    pub fn zeros(n: usize) -> Self {
        Tridiag { diag: vec![0.0; n], off: vec![0.0; n.saturating_sub(1)] }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[Complex64], out: &mut Vec<Complex64>) {
        let n = self.dim();
        assert_eq!(x.len(), n);
        out.clear();
        out.resize(n, Complex64::ZERO);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }

    /// Sesquilinear form g^H T f, linear in `f` and conjugate-linear in `g`.
    pub fn form(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let n = self.dim();
        assert_eq!(f.len(), n);
        assert_eq!(g.len(), n);
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            let mut row = self.diag[i] * f[i];
            if i > 0 {
                row += self.off[i - 1] * f[i - 1];
            }
            if i + 1 < n {
                row += self.off[i] * f[i + 1];
            }
            acc += g[i].conj() * row;
        }
        acc
    }

    /// LDL^T factorization; fails if a pivot is not strictly positive.
    pub fn factor(&self) -> Result<TridiagFactor> {
        let n = self.dim();
        let mut d = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        let mut prev = 0.0;
        for i in 0..n {
            let mut di = self.diag[i];
            if i > 0 {
                let li = self.off[i - 1] / prev;
                l[i - 1] = li;
                di -= li * self.off[i - 1];
            }
            if !(di > 0.0) || !di.is_finite() {
                return Err(Error::LinearSolve(format!(
                    "non-positive pivot {di:.3e} at row {i}"
                )));
            }
            d[i] = di;
            prev = di;
        }
        Ok(TridiagFactor { d, l })
    }
}

/// LDL^T factorization of a symmetric positive definite tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagFactor {
    d: Vec<f64>,
    l: Vec<f64>,
}

impl TridiagFactor {
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(rhs.len(), n);
        let mut x = rhs.to_vec();
        for i in 1..n {
            let li = self.l[i - 1];
            let upd = li * x[i - 1];
            x[i] -= upd;
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            let upd = self.l[i] * x[i + 1];
            x[i] -= upd;
        }
        x
    }
}

/// Shifted complex tridiagonal system a*A + b*B with symmetric real A, B,
/// solved by the complex Thomas algorithm. Used by the theta-scheme where the
/// structured part of each step matrix is a positive combination of Gram
/// matrices (no pivoting issues in practice; breakdown is reported).
#[derive(Debug, Clone)]
pub struct ComplexTridiagFactor {
    d: Vec<Complex64>,
    l: Vec<Complex64>,
    off: Vec<f64>,
}

impl ComplexTridiagFactor {
    pub fn new(a: &Tridiag, ca: f64, b: &Tridiag, cb: f64) -> Result<Self> {
        let n = a.dim();
        assert_eq!(b.dim(), n);
        let mut d = vec![Complex64::ZERO; n];
        let mut l = vec![Complex64::ZERO; n.saturating_sub(1)];
        let mut off = vec![0.0; n.saturating_sub(1)];
        for i in 0..n - 1 {
            off[i] = ca * a.off[i] + cb * b.off[i];
        }
        let mut prev = Complex64::ZERO;
        for i in 0..n {
            let mut di = Complex64::new(ca * a.diag[i] + cb * b.diag[i], 0.0);
            if i > 0 {
                let li = Complex64::new(off[i - 1], 0.0) / prev;
                l[i - 1] = li;
                di -= li * off[i - 1];
            }
            if di.norm() < 1e-300 || !di.is_finite() {
                return Err(Error::LinearSolve(format!("pivot breakdown at row {i}")));
            }
            d[i] = di;
            prev = di;
        }
        Ok(ComplexTridiagFactor { d, l, off })
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.d.len();
        assert_eq!(rhs.len(), n);
        let mut x = rhs.to_vec();
        for i in 1..n {
            let upd = self.l[i - 1] * x[i - 1];
            x[i] -= upd;
        }
        for i in 0..n {
            x[i] /= self.d[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            let upd = self.off[i] * x[i + 1] / self.d[i];
            x[i] -= upd;
        }
        x
    }
}

/// Eigenvalues of a Hermitian matrix via the real symmetric embedding
/// [[Re, -Im], [Im, Re]] and cyclic Jacobi sweeps. Each eigenvalue of the
/// input appears twice in the embedding; the deduplicated ascending list is
/// returned. Intended for the reduced blocks (dimension <= ~32).
pub fn hermitian_eigenvalues(a: &[Vec<Complex64>]) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let m = 2 * n;
    let mut s = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            s[i][j] = a[i][j].re;
            s[n + i][n + j] = a[i][j].re;
            s[i][n + j] = -a[i][j].im;
            s[n + i][j] = a[i][j].im;
        }
    }
    let mut eigs = jacobi_symmetric_eigenvalues(&mut s);
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // pairs (lambda, lambda): keep every other entry
    (0..n).map(|k| 0.5 * (eigs[2 * k] + eigs[2 * k + 1])).collect()
}

/// Largest singular value of a small dense complex matrix, via the largest
/// eigenvalue of M^H M.
pub fn sigma_max(m: &[Vec<Complex64>]) -> f64 {
    let rows = m.len();
    if rows == 0 {
        return 0.0;
    }
    let cols = m[0].len();
    let mut g = vec![vec![Complex64::ZERO; cols]; cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = Complex64::ZERO;
            for k in 0..rows {
                acc += m[k][i].conj() * m[k][j];
            }
            g[i][j] = acc;
        }
    }
    let eigs = hermitian_eigenvalues(&g);
    eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// All singular values (descending) of a small dense complex matrix via
/// one-sided Jacobi; small singular values come out with absolute accuracy
/// around machine epsilon times the largest one, which the rank checks need.
pub fn singular_values(m: &[Vec<Complex64>]) -> Vec<f64> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    // column-major copy
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| (0..rows).map(|i| m[i][j]).collect()).collect();
    let frob2: f64 = a.iter().flatten().map(|x| x.norm_sqr()).sum();
    if frob2 == 0.0 {
        return vec![0.0; cols];
    }
    for _sweep in 0..64 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let mut aii = 0.0;
                let mut ajj = 0.0;
                let mut g = Complex64::ZERO;
                for k in 0..rows {
                    aii += a[i][k].norm_sqr();
                    ajj += a[j][k].norm_sqr();
                    g += a[i][k].conj() * a[j][k];
                }
                if g.norm() <= 1e-30 * frob2 || g.norm_sqr() <= 1e-32 * aii * ajj {
                    continue;
                }
                rotated = true;
                let phase = g / g.norm();
                let tau = (ajj - aii) / (2.0 * g.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..rows {
                    let ui = a[i][k];
                    let uj = phase.conj() * a[j][k];
                    a[i][k] = c * ui - s * uj;
                    a[j][k] = s * ui + c * uj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Largest singular value of a 2x2 complex matrix (closed form).
pub fn sigma_max_2x2(m: &[[Complex64; 2]; 2]) -> f64 {
    let a2 = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let b2 = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let cross = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let tr = a2 + b2;
    let half_gap = (0.25 * (a2 - b2) * (a2 - b2) + cross.norm_sqr()).sqrt();
    (0.5 * tr + half_gap).max(0.0).sqrt()
}

/// Eigenvalues (ascending) of a 2x2 Hermitian matrix given by its real
/// diagonal and complex off-diagonal entry.
pub fn hermitian_eigenvalues_2x2(a: f64, b: Complex64, c: f64) -> [f64; 2] {
    let mid = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

fn jacobi_symmetric_eigenvalues(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let frob: f64 = a
        .iter()
        .map(|row| row.iter().map(|x| x * x).sum::<f64>())
        .sum::<f64>()
        .sqrt();
    if frob == 0.0 {
        return vec![0.0; n];
    }
    let tol = 1e-15 * frob;
    for _sweep in 0..64 {
        let mut offnorm = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                offnorm += 2.0 * a[p][q] * a[p][q];
            }
        }
        if offnorm.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-18 * frob {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
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
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tridiag_factor_solve_roundtrip() {
        let t = Tridiag { diag: vec![4.0, 5.0, 6.0, 7.0], off: vec![1.0, -0.5, 2.0] };
        let f = t.factor().unwrap();
        let rhs: Vec<Complex64> = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0), c(2.0, 2.0)];
        let x = f.solve(&rhs);
        let mut back = Vec::new();
        t.matvec(&x, &mut back);
        for (bi, ri) in back.iter().zip(rhs.iter()) {
            assert!((bi - ri).norm() < 1e-12);
        }
    }

    #[test]
    fn factor_rejects_indefinite() {
        let t = Tridiag { diag: vec![1.0, -2.0], off: vec![0.0] };
        assert!(t.factor().is_err());
    }

    #[test]
    fn hermitian_eigs_match_dense_reference() {
        // reference eigenvalues computed with LAPACK zheevd in double precision
        let a = vec![
            vec![c(2.0, 0.0), c(1.0, 0.5), c(0.0, 0.25), c(0.3, 0.0)],
            vec![c(1.0, -0.5), c(-1.0, 0.0), c(0.7, 0.0), c(0.1, -0.2)],
            vec![c(0.0, -0.25), c(0.7, 0.0), c(0.5, 0.0), c(0.0, -0.4)],
            vec![c(0.3, 0.0), c(0.1, 0.2), c(0.0, 0.4), c(1.5, 0.0)],
        ];
        let eigs = hermitian_eigenvalues(&a);
        let expected = [
            -1.5688939711101364,
            0.48256267545447451,
            1.4679903516158690,
            2.6183409440397956,
        ];
        for (got, want) in eigs.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-10, "got {got}, want {want}");
        }
    }

    #[test]
    fn sigma_max_agrees_with_2x2_closed_form() {
        let m = [[c(1.0, 2.0), c(-0.3, 0.4)], [c(0.0, -1.0), c(2.5, 0.0)]];
        let dense = vec![vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]];
        let a = sigma_max(&dense);
        let b = sigma_max_2x2(&m);
        assert!((a - b).abs() < 1e-12 * b.max(1.0));
    }

    #[test]
    fn eig_2x2_closed_form() {
        let [lo, hi] = hermitian_eigenvalues_2x2(1.0, c(0.5, -0.5), 2.0);
        // trace and determinant
        assert!((lo + hi - 3.0).abs() < 1e-14);
        assert!((lo * hi - (2.0 - 0.5)).abs() < 1e-14);
    }

    #[test]
    fn complex_shifted_solve() {
        let a = Tridiag { diag: vec![2.0, 2.0, 2.0], off: vec![0.5, 0.5] };
        let b = Tridiag { diag: vec![1.0, 3.0, 1.0], off: vec![-0.25, 0.1] };
        let f = ComplexTridiagFactor::new(&a, 1.0, &b, 0.75).unwrap();
        let rhs = vec![c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)];
        let x = f.solve(&rhs);
        // residual against a*A + b*B applied manually
        let full = Tridiag {
            diag: (0..3).map(|i| a.diag[i] + 0.75 * b.diag[i]).collect(),
            off: (0..2).map(|i| a.off[i] + 0.75 * b.off[i]).collect(),
        };
        let mut back = Vec::new();
        full.matvec(&x, &mut back);
        for (bi, ri) in back.iter().zip(rhs.iter()) {
            assert!((bi - ri).norm() < 1e-12);
        }
    }
}
