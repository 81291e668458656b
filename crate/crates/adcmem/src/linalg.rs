//! Dense complex linear algebra for small matrices: Kronecker products,
//! Hermitian eigendecomposition (cyclic Jacobi) and the matrix exponential
//! (scaling and squaring). Plain `Vec`-backed, double precision throughout;
//! dimensions are capped so a runaway tensor product fails loudly instead of
//! exhausting memory.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported matrix dimension (12 qubits).
pub const MAX_DIM: usize = 4096;

/// Dense square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Size(format!(
                "matrix dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        Ok(Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        Ok(m)
    }

    /// Builds a matrix from nested rows; every row must have the same length
    /// as the number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Contract(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Contract(format!(
                "matmul dimension mismatch: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matvec length mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.entries[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::Contract(format!(
                "add dimension mismatch: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let mut out = self.clone();
        for (o, r) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *o += r;
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        assert_eq!(self.dim, rhs.dim, "add_assign dimension mismatch");
        for (o, r) in self.entries.iter_mut().zip(rhs.entries.iter()) {
            *o += r;
        }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e *= s;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n).expect("dim already validated");
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n).expect("dim already validated");
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.conj();
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum absolute row sum (induced infinity norm).
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "max_abs_diff dimension mismatch");
        self.entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from `a[i][j] == conj(a[j][i])`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Kronecker product; the result has dimension `a.dim * b.dim`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (na, nb) = (a.dim(), b.dim());
    if na.saturating_mul(nb) > MAX_DIM {
        return Err(Error::Size(format!(
            "kronecker product dimension {} exceeds {MAX_DIM}",
            na.saturating_mul(nb)
        )));
    }
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n)?;
    for i in 0..na {
        for j in 0..na {
            let aij = a.get(i, j);
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out.set(i * nb + k, j * nb + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Result of a Hermitian eigendecomposition: `eigenvectors` holds the
/// orthonormal eigenvectors as columns, ordered to match `eigenvalues`
/// (sorted in descending order).
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each sweep annihilates every off-diagonal pair with a complex plane
/// rotation; convergence is declared when the off-diagonal Frobenius norm
/// drops below 1e-14 (scaled by the matrix norm for inputs larger than
/// unit size).
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if m.hermiticity_error() > 1e-10 {
        return Err(Error::Contract(format!(
            "eig_hermitian needs a Hermitian input (deviation {:.3e})",
            m.hermiticity_error()
        )));
    }
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n)?;
    let threshold = 1e-14 * m.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_norm(&a) <= threshold;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let zeta = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Column update (right-multiplication by the rotation).
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * phase.conj() * akq);
                    a.set(k, q, s * akp + c * phase.conj() * akq);
                }
                // Row update (left-multiplication by the adjoint rotation).
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * phase * aqk);
                    a.set(q, k, s * apk + c * phase * aqk);
                }
                // Accumulate the eigenvector basis with the same column update.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * phase.conj() * vkq);
                    v.set(k, q, s * vkp + c * phase.conj() * vkq);
                }
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps \
             (off-diagonal norm {:.3e})",
            off_diagonal_norm(&a)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .re
            .partial_cmp(&a.get(i, i).re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, new_col, v.get(k, old_col));
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

const EXPM_MAX_DIM: usize = 1024;
const EXPM_MAX_NORM: f64 = 50.0;
const EXPM_TAYLOR_DEGREE: usize = 16;

/// Matrix exponential `exp(m * t)` by scaling and squaring with a
/// degree-16 Taylor kernel. Accurate to about 1e-10 in the largest entry
/// for `||m * t||_inf <= 50`; larger norms are rejected.
pub fn expm(m: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if m.dim() > EXPM_MAX_DIM {
        return Err(Error::Size(format!(
            "expm dimension {} exceeds {EXPM_MAX_DIM}",
            m.dim()
        )));
    }
    let mt = m.scaled(Complex64::new(t, 0.0));
    let norm = mt.inf_norm();
    if !norm.is_finite() || norm > EXPM_MAX_NORM {
        return Err(Error::Numeric(format!(
            "expm norm {norm:.3e} exceeds {EXPM_MAX_NORM}"
        )));
    }

    // Halve until the norm is at most 1/2, run the Taylor kernel, then
    // square the result back up.
    let mut squarings = 0u32;
    let mut scale = 1.0f64;
    while norm / scale > 0.5 {
        scale *= 2.0;
        squarings += 1;
    }
    let b = mt.scaled(Complex64::new(1.0 / scale, 0.0));

    let mut acc = ComplexMatrix::identity(m.dim())?;
    let mut term = ComplexMatrix::identity(m.dim())?;
    for k in 1..=EXPM_TAYLOR_DEGREE {
        term = term.matmul(&b)?.scaled(Complex64::new(1.0 / k as f64, 0.0));
        acc.add_assign(&term);
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2).unwrap();
        let out = kron(&i2, &i2).unwrap();
        assert_eq!(out, ComplexMatrix::identity(4).unwrap());
    }

    #[test]
    fn kron_of_diagonals_multiplies_entries() {
        let chi = std::f64::consts::FRAC_PI_3;
        let d = ComplexMatrix::from_diagonal(&[c(chi.cos(), 0.0), c(1.0, 0.0)]).unwrap();
        let out = kron(&d, &d).unwrap();
        let expect =
            ComplexMatrix::from_diagonal(&[c(0.25, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)])
                .unwrap();
        assert!(out.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn kron_of_lowering_operators_hits_corner_entry() {
        // Full damping: the single-use jump operator has its only entry at
        // (1,0); its Kronecker square must sit at (3,0).
        let mut a1 = ComplexMatrix::zeros(2).unwrap();
        a1.set(1, 0, c(1.0, 0.0));
        let out = kron(&a1, &a1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (3, 0) { 1.0 } else { 0.0 };
                assert!((out.get(i, j) - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_is_associative_on_integer_entries() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 3.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(5.0, 0.0), c(0.0, -2.0)],
        ])
        .unwrap();
        let d = ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let left = kron(&kron(&a, &b).unwrap(), &d).unwrap();
        let right = kron(&a, &kron(&b, &d).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn kron_overflow_is_a_size_error() {
        let big = ComplexMatrix::identity(MAX_DIM).unwrap();
        let i2 = ComplexMatrix::identity(2).unwrap();
        assert!(matches!(kron(&big, &i2), Err(Error::Size(_))));
    }

    #[test]
    fn eig_of_identity() {
        let d = eig_hermitian(&ComplexMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn eig_of_bit_flip() {
        let x = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let d = eig_hermitian(&x).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian_input() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::Contract(_))));
    }

    // Deterministic pseudo-random stream, good enough to build test matrices
    // without pulling an RNG into the unit tests.
    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut m = ComplexMatrix::zeros(dim).unwrap();
        for i in 0..dim {
            m.set(i, i, c(lcg(&mut s), 0.0));
            for j in (i + 1)..dim {
                let v = c(lcg(&mut s), lcg(&mut s));
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        m
    }

    #[test]
    fn eig_reconstructs_random_hermitian_matrices() {
        for seed in 1..=5u64 {
            let m = random_hermitian(8, seed);
            let d = eig_hermitian(&m).unwrap();
            let n = m.dim();
            // V diag(lambda) V+ must reproduce the input.
            let mut lam = ComplexMatrix::zeros(n).unwrap();
            for (i, &l) in d.eigenvalues.iter().enumerate() {
                lam.set(i, i, c(l, 0.0));
            }
            let rebuilt = d
                .eigenvectors
                .matmul(&lam)
                .unwrap()
                .matmul(&d.eigenvectors.dagger())
                .unwrap();
            assert!(rebuilt.max_abs_diff(&m) < 1e-11, "seed {seed}");
            // V must be unitary.
            let gram = d.eigenvectors.dagger().matmul(&d.eigenvectors).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n).unwrap()) < 1e-11);
            // Eigenvalue sum equals the trace.
            let sum: f64 = d.eigenvalues.iter().sum();
            assert!((sum - m.trace().re).abs() < 1e-10);
            // Descending order.
            for w in d.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn eig_recovers_known_eigenvalues() {
        // Build V diag(known) V+ from a random unitary (eigenvectors of a
        // random Hermitian matrix) and check the decomposition recovers the
        // spectrum.
        let known = [0.9, 0.4, 0.3, 0.2, 0.1, -0.2, -0.5, -0.8];
        let basis = eig_hermitian(&random_hermitian(8, 42)).unwrap().eigenvectors;
        let mut lam = ComplexMatrix::zeros(8).unwrap();
        for (i, &l) in known.iter().enumerate() {
            lam.set(i, i, c(l, 0.0));
        }
        let m = basis.matmul(&lam).unwrap().matmul(&basis.dagger()).unwrap();
        let d = eig_hermitian(&m).unwrap();
        for (got, want) in d.eigenvalues.iter().zip(known.iter()) {
            assert!((got - want).abs() < 1e-11);
        }
    }

    #[test]
    fn expm_at_zero_time_is_identity() {
        let m = random_hermitian(6, 7);
        let e = expm(&m, 0.0).unwrap();
        assert!(e.max_abs_diff(&ComplexMatrix::identity(6).unwrap()) < 1e-15);
    }

    #[test]
    fn expm_of_diagonal_exponentiates_entries() {
        let m = ComplexMatrix::from_diagonal(&[c(-0.3, 0.0), c(1.7, 0.0)]).unwrap();
        let e = expm(&m, 1.0).unwrap();
        assert!((e.get(0, 0).re - (-0.3f64).exp()).abs() < 1e-12);
        assert!((e.get(1, 1).re - 1.7f64.exp()).abs() < 1e-12);
        assert!(e.get(0, 1).norm() < 1e-15);
    }

    #[test]
    fn expm_rejects_oversized_norms() {
        let m = ComplexMatrix::from_diagonal(&[c(100.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(expm(&m, 1.0), Err(Error::Numeric(_))));
    }

    #[test]
    fn expm_satisfies_the_semigroup_property() {
        let m = random_hermitian(5, 11);
        let a = expm(&m, 0.7).unwrap();
        let b = expm(&m, 0.4).unwrap();
        let ab = a.matmul(&b).unwrap();
        let whole = expm(&m, 1.1).unwrap();
        assert!(ab.max_abs_diff(&whole) < 1e-9);
    }
}
