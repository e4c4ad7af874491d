//! Dense complex matrices at dimensions 2 and 4.
//!
//! This is the full extent of linear algebra the crate needs: products,
//! adjoints, Kronecker products, a Hermitian eigensolver (cyclic Jacobi),
//! the PSD matrix square root, and general 4x4 eigenvalues via the
//! characteristic polynomial. Everything is hand-rolled and deterministic;
//! at these dimensions there is nothing to gain from an external solver.

use num_complex::Complex64;
use std::fmt;

pub type C64 = Complex64;

/// Absolute comparison tolerance for linear-algebra identities at this
/// scale (all matrices handled here have norm <= 2).
pub const TOL_LINALG: f64 = 1e-9;

/// Hermitian eigenvalues in [-HERM_CLAMP, 0) are treated as rounding noise
/// and clamped to zero before square roots.
pub const HERM_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum CMatError {
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    NotHermitian {
        defect: f64,
    },
    NegativeEigenvalue {
        value: f64,
    },
    NonConvergence,
}

impl fmt::Display for CMatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CMatError::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "dimension mismatch: expected {}x{}, got {}x{}",
                    expected.0, expected.1, got.0, got.1
                )
            }
            CMatError::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (defect {defect:.3e})")
            }
            CMatError::NegativeEigenvalue { value } => {
                write!(
                    f,
                    "eigenvalue {value:.3e} below -{HERM_CLAMP:.0e}: not a valid PSD matrix"
                )
            }
            CMatError::NonConvergence => write!(f, "eigensolver failed to converge"),
        }
    }
}

impl std::error::Error for CMatError {}

/// Row-major dense complex matrix, 2x2 or 4x4 in practice.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.at(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from row-major slices; each row must have the same length.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMat {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Outer product |u><v| of two equal-length vectors.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let n = u.len();
        assert_eq!(n, v.len());
        let mut m = CMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, u[r] * v[c].conj());
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: C64) -> CMat {
        let data = self.data.iter().map(|a| a * s).collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).conj());
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj_entries(&self) -> CMat {
        let data = self.data.iter().map(|a| a.conj()).collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i)).sum()
    }

    /// Entrywise sup norm, max |a_ij|.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ||A - A^dagger||_F, zero iff Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).fro_norm()
    }

    /// Kronecker product of two 2x2 matrices in the |00>,|01>,|10>,|11>
    /// basis ordering (first factor on Alice's side).
    pub fn tensor(a: &CMat, b: &CMat) -> Result<CMat, CMatError> {
        if (a.rows, a.cols) != (2, 2) || (b.rows, b.cols) != (2, 2) {
            return Err(CMatError::DimensionMismatch {
                expected: (2, 2),
                got: (a.rows, a.cols),
            });
        }
        let mut out = CMat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.set(2 * i + k, 2 * j + l, a.at(i, j) * b.at(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Hermitian eigendecomposition by cyclic Jacobi with complex rotations.
    ///
    /// Returns eigenvalues ascending and the matching orthonormal
    /// eigenvector columns. Input must satisfy
    /// ||A - A^dagger||_inf <= 1e-10 * ||A||_inf.
    pub fn eigh(&self) -> Result<(Vec<f64>, CMat), CMatError> {
        let n = self.rows;
        assert_eq!(self.rows, self.cols);
        let scale = self.max_abs().max(1e-300);
        let herm_defect = self.sub(&self.adjoint()).max_abs();
        if herm_defect > 1e-10 * scale {
            return Err(CMatError::NotHermitian {
                defect: herm_defect,
            });
        }
        // Symmetrize to kill last-ulp asymmetry before rotating.
        let mut a = self.add(&self.adjoint()).scale(C64::new(0.5, 0.0));
        let mut v = CMat::identity(n);

        let off = |m: &CMat| -> f64 {
            let mut s = 0.0;
            for r in 0..n {
                for c in 0..n {
                    if r != c {
                        s += m.at(r, c).norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        for _sweep in 0..60 {
            if off(&a) <= 1e-15 * scale * n as f64 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.at(p, q);
                    if apq.norm() <= 1e-18 * scale {
                        continue;
                    }
                    let app = a.at(p, p).re;
                    let aqq = a.at(q, q).re;
                    let beta = apq.norm();
                    let phase = apq / beta; // e^{i phi}
                                            // Real Jacobi angle for [[app, beta], [beta, aqq]].
                    let tau = (aqq - app) / (2.0 * beta);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // G restricted to (p,q): [[c, s],[-s e^{-i phi}, c e^{-i phi}]]
                    // (phase rotation making a_pq real, then the real rotation).
                    let gpp = C64::new(c, 0.0);
                    let gpq = C64::new(s, 0.0);
                    let gqp = -phase.conj() * s;
                    let gqq = phase.conj() * c;

                    // A <- G^dagger A G, updating only rows/cols p and q.
                    for k in 0..n {
                        let akp = a.at(k, p);
                        let akq = a.at(k, q);
                        a.set(k, p, akp * gpp + akq * gqp);
                        a.set(k, q, akp * gpq + akq * gqq);
                    }
                    for k in 0..n {
                        let apk = a.at(p, k);
                        let aqk = a.at(q, k);
                        a.set(p, k, gpp.conj() * apk + gqp.conj() * aqk);
                        a.set(q, k, gpq.conj() * apk + gqq.conj() * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.at(k, p);
                        let vkq = v.at(k, q);
                        v.set(k, p, vkp * gpp + vkq * gqp);
                        v.set(k, q, vkp * gpq + vkq * gqq);
                    }
                }
            }
        }
        if off(&a) > 1e-10 * scale * n as f64 {
            return Err(CMatError::NonConvergence);
        }

        let mut order: Vec<usize> = (0..n).collect();
        let vals: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
        let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        let mut sorted_vecs = CMat::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                sorted_vecs.set(r, new_col, v.at(r, old_col));
            }
        }
        Ok((sorted_vals, sorted_vecs))
    }

    /// Principal square root of a Hermitian PSD matrix.
    ///
    /// Eigenvalues in [-1e-12, 0) are clamped to zero; anything lower is an
    /// invalid density-matrix-like input and errors.
    pub fn sqrt_psd(&self) -> Result<CMat, CMatError> {
        let (vals, vecs) = self.eigh()?;
        let n = self.rows;
        let mut d = CMat::zeros(n, n);
        for (i, &l) in vals.iter().enumerate() {
            let l = if l < 0.0 {
                if l < -HERM_CLAMP {
                    return Err(CMatError::NegativeEigenvalue { value: l });
                }
                0.0
            } else {
                l
            };
            d.set(i, i, C64::new(l.sqrt(), 0.0));
        }
        Ok(vecs.mul(&d).mul(&vecs.adjoint()))
    }

    /// Eigenvalues of a general (possibly non-normal) matrix, n <= 4,
    /// via Hessenberg reduction and shifted QR. Imaginary parts are
    /// reported as-is so callers can apply tolerance checks.
    pub fn eigvals_general(&self) -> Result<Vec<C64>, CMatError> {
        let n = self.rows;
        assert_eq!(self.rows, self.cols);
        assert!(n <= 4);
        let scale = self.max_abs();
        if scale == 0.0 {
            return Ok(vec![C64::new(0.0, 0.0); n]);
        }
        let mut h = self.clone();
        hessenberg(&mut h);
        qr_eigenvalues(h).ok_or(CMatError::NonConvergence)
    }
}

/// Unitary 2x2 rotation with U [a; b] = [r; 0].
fn givens(a: C64, b: C64) -> (C64, C64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    } else {
        (a.conj() / r, b.conj() / r)
    }
}

/// Apply U = [[u, v], [-v*, u*]] ... rows i and j: rows_i' = u row_i + v row_j.
fn rotate_rows(m: &mut CMat, i: usize, j: usize, u: C64, v: C64) {
    for c in 0..m.cols() {
        let a = m.at(i, c);
        let b = m.at(j, c);
        m.set(i, c, u * a + v * b);
        m.set(j, c, -v.conj() * a + u.conj() * b);
    }
}

/// Right-multiply by U-dagger on columns i and j.
fn rotate_cols(m: &mut CMat, i: usize, j: usize, u: C64, v: C64) {
    for r in 0..m.rows() {
        let a = m.at(r, i);
        let b = m.at(r, j);
        m.set(r, i, a * u.conj() + b * v.conj());
        m.set(r, j, -a * v + b * u);
    }
}

/// In-place reduction to upper Hessenberg form by Givens similarity.
fn hessenberg(h: &mut CMat) {
    let n = h.rows();
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2)..n {
            let a = h.at(j + 1, j);
            let b = h.at(i, j);
            if b.norm() == 0.0 {
                continue;
            }
            let (u, v) = givens(a, b);
            rotate_rows(h, j + 1, i, u, v);
            rotate_cols(h, j + 1, i, u, v);
        }
    }
}

/// Shifted QR iteration on a Hessenberg matrix; returns all eigenvalues.
fn qr_eigenvalues(mut h: CMat) -> Option<Vec<C64>> {
    let n = h.rows();
    let scale = h.max_abs().max(1e-300);
    let negligible = |x: f64| x <= 1e-16 * scale;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n;
    let mut stagnation = 0usize;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h.at(0, 0));
            hi = 0;
            continue;
        }
        // Deflate converged subdiagonals.
        for k in 1..hi {
            if negligible(h.at(k, k - 1).norm()) {
                h.set(k, k - 1, C64::new(0.0, 0.0));
            }
        }
        if h.at(hi - 1, hi - 2).norm() == 0.0 {
            eigs.push(h.at(hi - 1, hi - 1));
            hi -= 1;
            stagnation = 0;
            continue;
        }
        // Start of the trailing unreduced block.
        let mut lo = hi - 1;
        while lo > 0 && h.at(lo, lo - 1).norm() != 0.0 {
            lo -= 1;
        }
        // Wilkinson shift from the trailing 2x2, or an exceptional shift
        // when progress stalls.
        stagnation += 1;
        if stagnation > 200 {
            return None;
        }
        let mu = if stagnation.is_multiple_of(25) {
            h.at(hi - 1, hi - 1) + h.at(hi - 1, hi - 2) * 0.75
        } else {
            let a = h.at(hi - 2, hi - 2);
            let b = h.at(hi - 2, hi - 1);
            let c = h.at(hi - 1, hi - 2);
            let d = h.at(hi - 1, hi - 1);
            let tr = a + d;
            let disc = ((a - d) * (a - d) + c * b * 4.0).sqrt();
            let l1 = (tr + disc) * 0.5;
            let l2 = (tr - disc) * 0.5;
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        // Explicit-shift QR sweep on the active block.
        for i in lo..hi {
            let x = h.at(i, i);
            h.set(i, i, x - mu);
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..(hi - 1) {
            let (u, v) = givens(h.at(k, k), h.at(k + 1, k));
            rotate_rows(&mut h, k, k + 1, u, v);
            rots.push((k, u, v));
        }
        for (k, u, v) in rots {
            rotate_cols(&mut h, k, k + 1, u, v);
        }
        for i in lo..hi {
            let x = h.at(i, i);
            h.set(i, i, x + mu);
        }
    }
    Some(eigs)
}

/// Pauli sigma_x.
pub fn pauli_x() -> CMat {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    CMat::from_rows(&[&[o, one], &[one, o]])
}

/// Pauli sigma_y.
pub fn pauli_y() -> CMat {
    let o = C64::new(0.0, 0.0);
    let i = C64::new(0.0, 1.0);
    CMat::from_rows(&[&[o, -i], &[i, o]])
}

/// Pauli sigma_z.
pub fn pauli_z() -> CMat {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    CMat::from_rows(&[&[one, o], &[o, -one]])
}

/// n . sigma for a real 3-vector n.
pub fn dot_sigma(n: [f64; 3]) -> CMat {
    let mut m = pauli_x().scale(C64::new(n[0], 0.0));
    m = m.add(&pauli_y().scale(C64::new(n[1], 0.0)));
    m.add(&pauli_z().scale(C64::new(n[2], 0.0)))
}
